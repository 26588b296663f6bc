//! Run configuration: JSON schema (see docs/config-schema.json), defaults,
//! validation with field-level messages, and conversion into engine types.

use mollow_core::{
    CcwReservoir, LorentzianCavity, PhononBath64, PhotonReservoir64, RateQuadrature,
    SystemParams64, TabulatedLdos,
};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::fs;
use std::path::Path;

/// CLI-level failure, split by exit code: configuration problems exit with 1,
/// numerical failures with 2.
#[derive(Debug)]
pub enum CliError {
    Config(String),
    Numerical(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "config error: {m}"),
            CliError::Numerical(m) => write!(f, "numerical failure: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 1,
            CliError::Numerical(_) => 2,
        }
    }
}

/// Classify an engine error: rejected inputs are config errors, anything the
/// solver throws at runtime is a numerical failure.
pub fn engine_error(e: mollow_core::Error) -> CliError {
    use mollow_core::Error as E;
    match &e {
        E::InvalidParameter { .. } | E::LdosFormat { .. } | E::GridMismatch { .. } => {
            CliError::Config(e.to_string())
        }
        _ => CliError::Numerical(e.to_string()),
    }
}

pub type CliResult<T> = Result<T, CliError>;

fn bad(field: &str, msg: impl fmt::Display) -> CliError {
    CliError::Config(format!("field `{field}`: {msg}"))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub system: SystemConfig,
    #[serde(default)]
    pub phonon: PhononConfig,
    pub reservoir: ReservoirConfig,
    /// Omitted sweep = a single point at the configured system values.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepConfig>,
    #[serde(default)]
    pub output: OutputConfig,
    #[serde(default)]
    pub numerics: NumericsConfig,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemConfig {
    /// Bare drive Rabi energy Ω (meV).
    pub omega: f64,
    /// Laser–emitter detuning Δ_Lx = ω_L − ω_x (meV).
    #[serde(default)]
    pub delta_lx: f64,
    /// Absolute laser frequency ω_L (meV); where the reservoir is sampled.
    pub omega_l: f64,
    /// Background spontaneous-emission rate γ_b (meV).
    #[serde(default = "defaults::gamma_b")]
    pub gamma_b: f64,
    /// Pure-dephasing rate γ_d (meV).
    #[serde(default = "defaults::gamma_d")]
    pub gamma_d: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhononConfig {
    #[serde(default = "defaults::yes")]
    pub enabled: bool,
    /// Deformation coupling α_p (ps²).
    #[serde(default = "defaults::alpha_p")]
    pub alpha_p: f64,
    /// Spectral-density cutoff ω_b (meV).
    #[serde(default = "defaults::omega_b")]
    pub omega_b: f64,
    /// Lattice temperature (K).
    #[serde(default = "defaults::temperature")]
    pub temperature: f64,
}

impl Default for PhononConfig {
    fn default() -> Self {
        Self {
            enabled: true,
            alpha_p: defaults::alpha_p(),
            omega_b: defaults::omega_b(),
            temperature: defaults::temperature(),
        }
    }
}

/// Reservoir model, externally tagged: `{"flat": {"gamma": 0.0015}}` etc.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReservoirConfig {
    Flat(FlatConfig),
    Lorentzian(LorentzianConfig),
    CoupledCavityWaveguide(CcwConfig),
    Tabulated(TabulatedConfig),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlatConfig {
    /// Total spontaneous-emission rate into the reservoir (meV).
    pub gamma: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LorentzianConfig {
    /// Cavity frequency (meV).
    pub omega_c: f64,
    /// Cavity linewidth κ (meV).
    pub kappa: f64,
    /// Emitter–cavity coupling g (meV).
    pub g: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CcwConfig {
    /// Band-gap center ω₀ (meV).
    pub omega_0: f64,
    /// Half-bandwidth of each band (meV).
    pub half_bandwidth: f64,
    /// Mode-edge quality factor.
    pub quality: f64,
    /// Purcell factor at band center, pinning the overall coupling scale.
    pub midband_purcell: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TabulatedConfig {
    /// Path to a text LDOS table (`omega_meV pf_norm [alpha_norm]` rows).
    pub path: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub variable: SweepVariable,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SweepVariable {
    #[serde(rename = "Delta_Lx")]
    DeltaLx,
    #[serde(rename = "Omega")]
    Omega,
    #[serde(rename = "T")]
    Temperature,
}

impl SweepVariable {
    /// File-name stem for per-point outputs.
    pub fn slug(self) -> &'static str {
        match self {
            SweepVariable::DeltaLx => "delta_lx",
            SweepVariable::Omega => "omega",
            SweepVariable::Temperature => "temperature",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default = "defaults::directory")]
    pub directory: String,
    #[serde(default)]
    pub format: OutputFormat,
    /// Scale each series to unit peak before writing.
    #[serde(default)]
    pub normalize: bool,
    /// Include the dB columns in JSON output (CSV always carries them).
    #[serde(default = "defaults::yes", rename = "dB")]
    pub db: bool,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self {
            directory: defaults::directory(),
            format: OutputFormat::Csv,
            normalize: false,
            db: true,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NumericsConfig {
    /// Spectral grid points (odd keeps ω_L itself on the grid).
    #[serde(default = "defaults::grid_points")]
    pub grid_points: usize,
    /// Grid half-width around ω_L (meV); default 2.5·max(Ω, 1).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid_halfwidth: Option<f64>,
    /// Scattering-rate τ-integral step (ps).
    #[serde(default = "defaults::rate_dtau")]
    pub rate_dtau: f64,
    /// Scattering-rate τ-integral horizon (ps).
    #[serde(default = "defaults::rate_tau_max")]
    pub rate_tau_max: f64,
    /// Rate-integral regularizer ε (meV).
    #[serde(default = "defaults::rate_epsilon")]
    pub rate_epsilon: f64,
    /// Rate-integral tail gate, relative to the integrand peak.
    #[serde(default = "defaults::rate_tail_tol")]
    pub rate_tail_tol: f64,
    /// Sweep worker threads; default = logical cores.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threads: Option<usize>,
}

impl Default for NumericsConfig {
    fn default() -> Self {
        Self {
            grid_points: defaults::grid_points(),
            grid_halfwidth: None,
            rate_dtau: defaults::rate_dtau(),
            rate_tau_max: defaults::rate_tau_max(),
            rate_epsilon: defaults::rate_epsilon(),
            rate_tail_tol: defaults::rate_tail_tol(),
            threads: None,
        }
    }
}

mod defaults {
    pub fn yes() -> bool {
        true
    }
    pub fn gamma_b() -> f64 {
        0.0015
    }
    pub fn gamma_d() -> f64 {
        0.0078
    }
    pub fn alpha_p() -> f64 {
        0.06
    }
    pub fn omega_b() -> f64 {
        1.0
    }
    pub fn temperature() -> f64 {
        4.0
    }
    pub fn directory() -> String {
        "out".into()
    }
    pub fn grid_points() -> usize {
        4001
    }
    pub fn rate_dtau() -> f64 {
        0.01
    }
    pub fn rate_tau_max() -> f64 {
        20.0
    }
    pub fn rate_epsilon() -> f64 {
        1e-4
    }
    pub fn rate_tail_tol() -> f64 {
        1e-6
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        let cfg: RunConfig = serde_json::from_str(&text)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> CliResult<()> {
        let s = &self.system;
        if !(s.omega.is_finite() && s.omega >= 0.0) {
            return Err(bad("system.omega", format!("must be ≥ 0, got {}", s.omega)));
        }
        if !s.delta_lx.is_finite() || !s.omega_l.is_finite() {
            return Err(bad("system.omega_l/delta_lx", "frequencies must be finite"));
        }
        if !(s.gamma_b.is_finite() && s.gamma_b > 0.0) {
            return Err(bad(
                "system.gamma_b",
                format!("must be > 0, got {}", s.gamma_b),
            ));
        }
        if !(s.gamma_d.is_finite() && s.gamma_d >= 0.0) {
            return Err(bad(
                "system.gamma_d",
                format!("must be ≥ 0, got {}", s.gamma_d),
            ));
        }
        let p = &self.phonon;
        if !(p.omega_b.is_finite() && p.omega_b > 0.0) {
            return Err(bad(
                "phonon.omega_b",
                format!("must be > 0, got {}", p.omega_b),
            ));
        }
        if !(p.alpha_p.is_finite() && p.alpha_p >= 0.0) {
            return Err(bad(
                "phonon.alpha_p",
                format!("must be ≥ 0, got {}", p.alpha_p),
            ));
        }
        if !(p.temperature.is_finite() && p.temperature >= 0.0) {
            return Err(bad(
                "phonon.temperature",
                format!("must be ≥ 0, got {}", p.temperature),
            ));
        }
        match &self.reservoir {
            ReservoirConfig::Flat(f) => {
                if !(f.gamma.is_finite() && f.gamma >= 0.0) {
                    return Err(bad(
                        "reservoir.flat.gamma",
                        format!("must be ≥ 0, got {}", f.gamma),
                    ));
                }
            }
            ReservoirConfig::Lorentzian(l) => {
                if !(l.kappa.is_finite() && l.kappa > 0.0) {
                    return Err(bad(
                        "reservoir.lorentzian.kappa",
                        format!("must be > 0, got {}", l.kappa),
                    ));
                }
                if !(l.g.is_finite() && l.g >= 0.0) {
                    return Err(bad(
                        "reservoir.lorentzian.g",
                        format!("must be ≥ 0, got {}", l.g),
                    ));
                }
            }
            ReservoirConfig::CoupledCavityWaveguide(c) => {
                if !(c.half_bandwidth.is_finite() && c.half_bandwidth > 0.0) {
                    return Err(bad(
                        "reservoir.coupled_cavity_waveguide.half_bandwidth",
                        format!("must be > 0, got {}", c.half_bandwidth),
                    ));
                }
                if !(c.quality.is_finite() && c.quality > 0.0) {
                    return Err(bad(
                        "reservoir.coupled_cavity_waveguide.quality",
                        format!("must be > 0, got {}", c.quality),
                    ));
                }
                if !(c.midband_purcell.is_finite() && c.midband_purcell >= 0.0) {
                    return Err(bad(
                        "reservoir.coupled_cavity_waveguide.midband_purcell",
                        format!("must be ≥ 0, got {}", c.midband_purcell),
                    ));
                }
            }
            ReservoirConfig::Tabulated(t) => {
                if t.path.is_empty() {
                    return Err(bad("reservoir.tabulated.path", "must not be empty"));
                }
            }
        }
        if let Some(sw) = &self.sweep {
            if sw.values.is_empty() {
                return Err(bad("sweep.values", "must not be empty"));
            }
            if let Some(v) = sw.values.iter().find(|v| !v.is_finite()) {
                return Err(bad("sweep.values", format!("must be finite, got {v}")));
            }
            if sw.variable == SweepVariable::Temperature {
                if let Some(v) = sw.values.iter().find(|&&v| v < 0.0) {
                    return Err(bad(
                        "sweep.values",
                        format!("temperature must be ≥ 0, got {v}"),
                    ));
                }
            }
        }
        let n = &self.numerics;
        if n.grid_points < 3 {
            return Err(bad(
                "numerics.grid_points",
                format!("need ≥ 3, got {}", n.grid_points),
            ));
        }
        if let Some(h) = n.grid_halfwidth {
            if !(h.is_finite() && h > 0.0) {
                return Err(bad(
                    "numerics.grid_halfwidth",
                    format!("must be > 0, got {h}"),
                ));
            }
        }
        if !(n.rate_dtau > 0.0 && n.rate_tau_max > n.rate_dtau) {
            return Err(bad(
                "numerics.rate_dtau/rate_tau_max",
                format!(
                    "need 0 < dtau < tau_max, got {} / {}",
                    n.rate_dtau, n.rate_tau_max
                ),
            ));
        }
        if !(n.rate_epsilon > 0.0) {
            return Err(bad(
                "numerics.rate_epsilon",
                format!("must be > 0, got {}", n.rate_epsilon),
            ));
        }
        if !(n.rate_tail_tol > 0.0) {
            return Err(bad(
                "numerics.rate_tail_tol",
                format!("must be > 0, got {}", n.rate_tail_tol),
            ));
        }
        if n.threads == Some(0) {
            return Err(bad("numerics.threads", "must be ≥ 1"));
        }
        Ok(())
    }

    pub fn system_params(&self) -> SystemParams64 {
        SystemParams64 {
            omega: self.system.omega,
            delta_lx: self.system.delta_lx,
            omega_l: self.system.omega_l,
            gamma_b: self.system.gamma_b,
            gamma_d: self.system.gamma_d,
        }
    }

    /// Build the bath; `no_phonons` forces it off regardless of the config.
    pub fn bath(&self, no_phonons: bool) -> CliResult<PhononBath64> {
        self.bath_at(self.phonon.temperature, no_phonons)
    }

    /// Bath at an explicit temperature (for T sweeps).
    pub fn bath_at(&self, temperature: f64, no_phonons: bool) -> CliResult<PhononBath64> {
        if no_phonons || !self.phonon.enabled {
            return Ok(PhononBath64::disabled());
        }
        PhononBath64::new(self.phonon.alpha_p, self.phonon.omega_b, temperature)
            .map_err(engine_error)
    }

    pub fn reservoir(&self) -> CliResult<PhotonReservoir64> {
        match &self.reservoir {
            ReservoirConfig::Flat(f) => PhotonReservoir64::flat(f.gamma).map_err(engine_error),
            ReservoirConfig::Lorentzian(l) => LorentzianCavity::new(l.omega_c, l.kappa, l.g)
                .map(PhotonReservoir64::Lorentzian)
                .map_err(engine_error),
            ReservoirConfig::CoupledCavityWaveguide(c) => CcwReservoir::with_midband_purcell(
                c.omega_0,
                c.half_bandwidth,
                c.quality,
                c.midband_purcell,
                self.system.gamma_b,
            )
            .map(PhotonReservoir64::CoupledCavityWaveguide)
            .map_err(engine_error),
            ReservoirConfig::Tabulated(t) => {
                let path = locate_data(&t.path);
                let text = fs::read_to_string(&path).map_err(|e| {
                    CliError::Config(format!("cannot read LDOS table {}: {e}", path.display()))
                })?;
                TabulatedLdos::from_text(&text, self.system.gamma_b)
                    .map(PhotonReservoir64::Tabulated)
                    .map_err(engine_error)
            }
        }
    }

    pub fn quadrature(&self) -> RateQuadrature<f64> {
        RateQuadrature {
            dtau: self.numerics.rate_dtau,
            tau_max: self.numerics.rate_tau_max,
            epsilon: self.numerics.rate_epsilon,
            tail_tol: self.numerics.rate_tail_tol,
        }
    }

    /// Emission grid ω_L + linspace(−h, h, n) for a point's drive amplitude.
    pub fn omega_grid(&self, omega_l: f64, omega: f64) -> Vec<f64> {
        let h = self
            .numerics
            .grid_halfwidth
            .unwrap_or_else(|| 2.5 * omega.max(1.0));
        mollow_core::linspace(-h, h, self.numerics.grid_points)
            .into_iter()
            .map(|x| omega_l + x)
            .collect()
    }
}

/// Resolve a data path: as given if it exists, else relative to the repo root
/// (so presets referencing `data/…` work from any working directory of a
/// source checkout).
pub fn locate_data(path: &str) -> std::path::PathBuf {
    let p = std::path::PathBuf::from(path);
    if p.exists() {
        return p;
    }
    let fallback = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../..")
        .join(path);
    if fallback.exists() {
        fallback
    } else {
        p
    }
}
