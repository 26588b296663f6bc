//! Resonance-fluorescence spectra of a coherently driven two-level emitter
//! coupled to an acoustic-phonon bath and a structured photonic reservoir.
//!
//! The engine works in the polaron frame: the phonon displacement renormalizes
//! the drive (Ω_R = ⟨B⟩Ω) and dresses the emission correlation, while the
//! photonic reservoir — flat, Lorentzian, a coupled-cavity waveguide, or a
//! tabulated LDOS — enters through drive-dependent scattering rates sampled at
//! the laser frequency and at the two Rabi sidebands. Everything downstream of
//! the rates is a 4×4 Liouvillian problem solved in closed form.
//!
//! Pipeline, one operating point ([`compute_point`] runs it end to end):
//!
//! 1. [`phonon::PhononBath`] — bath correlation φ(τ) and displacement ⟨B⟩;
//! 2. [`phonon::phonon_rates`] / [`photon::photon_rates`] — analytic
//!    drive-dependent scattering rates at that operating point;
//! 3. [`lindblad::build_liouvillian`] / [`lindblad::steady_state`] — generator
//!    assembly and the unique stationary state;
//! 4. [`spectra::polarization_spectrum`] — emission spectrum by the quantum
//!    regression theorem, resolvent modes plus phonon-sideband kernel;
//! 5. [`spectra::projected_spectrum`] — reservoir propagation filter α_P(ω).
//!
//! Units throughout: energies in meV, times in ps, temperatures in K
//! (ħ = 0.658212 meV·ps, k_B = 0.086173 meV/K).
//!
//! The whole crate is generic over the scalar type ([`Float`]); the `*64`
//! aliases at the root pin the common double-precision case.
//!
//! ```
//! use mollow_core::{
//!     compute_point, PhononBath, PhotonReservoir, RateQuadrature, SystemParams,
//! };
//!
//! // resonantly driven emitter, flat vacuum, phonons off
//! let params = SystemParams {
//!     omega: 1.0,
//!     delta_lx: 0.0,
//!     omega_l: 800.0,
//!     gamma_b: 0.0015,
//!     gamma_d: 0.0,
//! };
//! let bath = PhononBath::<f64>::disabled();
//! let res = PhotonReservoir::flat(0.0015).unwrap();
//! let pt = compute_point(&params, &bath, &res, &RateQuadrature::default(), None).unwrap();
//! let peaks = mollow_core::find_peaks(&pt.series.omega, &pt.series.s0, 0.01).unwrap();
//! assert_eq!(peaks.len(), 3); // the Mollow triplet
//! ```

// validation guards are written `!(x > 0)` on purpose: NaN must fail them
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod float;
pub mod linalg;
pub mod lindblad;
pub mod phonon;
pub mod photon;
pub mod quad;
pub mod spectra;
pub mod system;

pub use error::{Error, Result};
pub use float::{fl, hbar, kb, Float, C};
pub use linalg::CMat;
pub use lindblad::{
    build_liouvillian, density_min_eigenvalue, evolve, excited_state, ground_state,
    state_from_bloch, steady_state, two_time_correlation, Liouvillian, LiouvillianParts,
};
pub use phonon::{gamma_u_small_eta, phonon_rates, PhononBath, PhononRates, RateQuadrature};
pub use photon::{
    photon_rates, CcwReservoir, LorentzianCavity, PhotonRates, PhotonReservoir, TabulatedLdos,
};
pub use spectra::{
    compute_point, correlation_modes, default_omega_grid, find_peaks, linspace, normalize,
    polarization_spectrum, polarization_spectrum_stepped, projected_spectrum, sideband_asymmetry,
    to_db, transform_correlation_direct, transform_correlation_fft, Peak, PointResult,
    SpectralModes, SpectrumSeries,
};
pub use system::{DressedState, SystemParams};

/// Double-precision aliases — the working types for everything but scans.
pub type C64 = C<f64>;
pub type CMat64 = CMat<f64>;
pub type SystemParams64 = SystemParams<f64>;
pub type DressedState64 = DressedState<f64>;
pub type PhononBath64 = PhononBath<f64>;
pub type PhononRates64 = PhononRates<f64>;
pub type PhotonReservoir64 = PhotonReservoir<f64>;
pub type PhotonRates64 = PhotonRates<f64>;
pub type Liouvillian64 = Liouvillian<f64>;
pub type PointResult64 = PointResult<f64>;
