//! Error type shared by the whole engine.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A τ- or ω-integral did not decay below tolerance inside its horizon.
    #[error("quadrature for {what} not converged: tail residual {residual:.3e} exceeds {tol:.3e}")]
    QuadratureNotConverged {
        what: &'static str,
        residual: f64,
        tol: f64,
    },

    /// Rate inputs that would give the undriven emitter a negative total decay.
    #[error("unphysical rate set: {what}")]
    UnphysicalRates { what: String },

    /// The generator's null space has dimension > 1 (no unique steady state).
    #[error("degenerate steady state: zero eigenvalue is not simple (second-smallest |λ| = {second:.3e})")]
    DegenerateSteadyState { second: f64 },

    /// Steady state came out non-positive beyond tolerance.
    #[error("steady state not positive: min eigenvalue {min_eig:.3e}")]
    NonPositiveSteadyState { min_eig: f64 },

    /// Eigenvalues cluster too tightly for spectral projectors.
    #[error("eigenvalue cluster: modes within {gap:.3e} of each other")]
    DegenerateModes { gap: f64 },

    /// Two series that must share a frequency grid do not.
    #[error("frequency grids do not match ({left} vs {right} points)")]
    GridMismatch { left: usize, right: usize },

    /// Sideband classification failed (fewer than two sideband peaks).
    #[error("sideband peaks missing: found {found} sideband(s)")]
    MissingSidebands { found: usize },

    /// Tabulated LDOS file problems, with the 1-based row that offends.
    #[error("LDOS table, row {row}: {msg}")]
    LdosFormat { row: usize, msg: String },

    /// Parameter validation (named field + reason).
    #[error("invalid parameter {field}: {msg}")]
    InvalidParameter { field: &'static str, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
