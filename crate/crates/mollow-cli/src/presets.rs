//! Shipped scenario presets: ready-made configs for the standard operating
//! points (band center, both mode edges, a detuning sweep, and the tabulated
//! W1 sample).

use crate::config::{
    CcwConfig, CliError, CliResult, OutputConfig, PhononConfig, ReservoirConfig, RunConfig,
    SweepConfig, SweepVariable, SystemConfig, TabulatedConfig,
};
use mollow_core::{CcwReservoir, PhononBath64, PhotonReservoir64};

pub const PRESET_NAMES: [&str; 5] = [
    "fig2_band_center",
    "fig3_lower_edge",
    "fig3_upper_edge",
    "fig5_detuning_sweep",
    "fig7_w1",
];

const W1_SAMPLE: &str = "data/w1_sample_ldos.txt";

fn ccw() -> CcwConfig {
    CcwConfig {
        omega_0: 800.0,
        half_bandwidth: 4.0,
        quality: 52000.0,
        midband_purcell: 10.0,
    }
}

/// Mode-edge frequencies of the stock two-band reservoir.
fn ccw_edges() -> (f64, f64) {
    let c = ccw();
    CcwReservoir::with_midband_purcell(
        c.omega_0,
        c.half_bandwidth,
        c.quality,
        c.midband_purcell,
        0.0015,
    )
    .expect("stock reservoir parameters are valid")
    .edge_frequencies()
}

fn base(omega: f64, omega_l: f64, name: &str) -> RunConfig {
    RunConfig {
        system: SystemConfig {
            omega,
            delta_lx: 0.0,
            omega_l,
            gamma_b: 0.0015,
            gamma_d: 0.0078,
        },
        phonon: PhononConfig::default(),
        reservoir: ReservoirConfig::CoupledCavityWaveguide(ccw()),
        sweep: None,
        output: OutputConfig {
            directory: format!("out/{name}"),
            ..OutputConfig::default()
        },
        numerics: Default::default(),
    }
}

pub fn preset(name: &str) -> CliResult<RunConfig> {
    match name {
        "fig2_band_center" => {
            let mut cfg = base(1.0, 800.0, name);
            // wide grid so both mode-edge satellites fall inside the window
            cfg.numerics.grid_halfwidth = Some(6.0);
            cfg.numerics.grid_points = 6001;
            Ok(cfg)
        }
        "fig3_lower_edge" => Ok(base(0.4, ccw_edges().0, name)),
        "fig3_upper_edge" => Ok(base(0.4, ccw_edges().1, name)),
        "fig5_detuning_sweep" => {
            let mut cfg = base(0.4, ccw_edges().1, name);
            cfg.sweep = Some(SweepConfig {
                variable: SweepVariable::DeltaLx,
                values: vec![-0.6, -0.1, 0.0, 0.2, 0.6],
            });
            Ok(cfg)
        }
        "fig7_w1" => fig7_w1(),
        other => Err(CliError::Config(format!(
            "unknown preset {other:?}; available: {}",
            PRESET_NAMES.join(", ")
        ))),
    }
}

/// The W1 scenario: laser centered between the two dominant LDOS resonances,
/// drive chosen so the dressed splitting matches their spectral separation
/// (each sideband lands on one resonance).
fn fig7_w1() -> CliResult<RunConfig> {
    let mut cfg = base(0.4, 0.0, "fig7_w1");
    cfg.reservoir = ReservoirConfig::Tabulated(TabulatedConfig {
        path: W1_SAMPLE.into(),
    });
    let res = cfg.reservoir()?;
    let (a, b) = dominant_maxima(&res, cfg.system.gamma_b)?;
    // dressed splitting Ω_R = ⟨B⟩Ω; only ⟨B⟩ (= e^{−φ(0)/2}) is needed, so a
    // two-row φ table is enough
    let b_mean = PhononBath64::with_table(
        cfg.phonon.alpha_p,
        cfg.phonon.omega_b,
        cfg.phonon.temperature,
        1.0,
        1.0,
        1601,
    )
    .map_err(crate::config::engine_error)?
    .b_mean;
    cfg.system.omega_l = 0.5 * (a + b);
    cfg.system.omega = 0.5 * (b - a) / b_mean;
    Ok(cfg)
}

/// The two highest strict local maxima of the Purcell-factor curve, in
/// ascending frequency order.
fn dominant_maxima(res: &PhotonReservoir64, gamma_b: f64) -> CliResult<(f64, f64)> {
    let grid = res
        .grid()
        .ok_or_else(|| CliError::Config("reservoir has no frequency grid".into()))?;
    let pf: Vec<f64> = grid
        .iter()
        .map(|&w| res.purcell_factor(w, gamma_b))
        .collect();
    let mut maxima: Vec<(f64, f64)> = (1..grid.len() - 1)
        .filter(|&i| pf[i] > pf[i - 1] && pf[i] > pf[i + 1])
        .map(|i| (grid[i], pf[i]))
        .collect();
    if maxima.len() < 2 {
        return Err(CliError::Config(format!(
            "need two LDOS resonances to place the drive, found {}",
            maxima.len()
        )));
    }
    maxima.sort_by(|x, y| y.1.total_cmp(&x.1));
    let (mut a, mut b) = (maxima[0].0, maxima[1].0);
    if a > b {
        std::mem::swap(&mut a, &mut b);
    }
    Ok((a, b))
}
