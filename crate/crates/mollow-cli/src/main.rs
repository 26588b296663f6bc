//! `mollow` command-line front end: sweeps, rate reports, LDOS ingestion
//! checks, and shipped scenario presets.

// validation guards are written `!(x > 0)` on purpose: NaN must fail them
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod config;
mod presets;
mod rates;
mod sweep;

use clap::{Parser, Subcommand};
use config::{engine_error, CliError, CliResult, RunConfig};
use mollow_core::{PhotonReservoir64, TabulatedLdos};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "mollow",
    version,
    about = "Resonance-fluorescence spectra of a driven emitter coupled to phonons and a structured photonic reservoir"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the sweep described by a config file; write spectra and a manifest.
    Run {
        /// JSON run configuration (see docs/config-schema.json).
        #[arg(long)]
        config: PathBuf,
        /// Force the phonon bath off for this run.
        #[arg(long)]
        no_phonons: bool,
    },
    /// Print every drive-dependent scattering rate vs detuning as CSV.
    Rates {
        /// JSON run configuration; only system/phonon/reservoir/numerics are used.
        #[arg(long)]
        config: PathBuf,
        /// Detuning grid start:stop:count (meV), e.g. -0.6:0.6:25.
        #[arg(long, value_parser = parse_range, allow_hyphen_values = true)]
        detuning_range: rates::DetuningRange,
        /// Force the phonon bath off for this report.
        #[arg(long)]
        no_phonons: bool,
    },
    /// Validate a tabulated-LDOS file and report its Purcell-factor maxima.
    LdosCheck {
        /// LDOS table (`omega_meV pf_norm [alpha_norm]` rows, '#' comments).
        file: PathBuf,
        /// Background decay rate the Purcell factor is quoted against (meV).
        #[arg(long, default_value_t = 0.0015)]
        gamma_b: f64,
    },
    /// List the shipped scenario presets or emit one as config JSON.
    Presets {
        #[command(subcommand)]
        action: PresetAction,
    },
}

#[derive(Subcommand)]
enum PresetAction {
    /// Print preset names, one per line.
    List,
    /// Print the named preset's full config JSON on stdout.
    Emit { name: String },
}

fn parse_range(s: &str) -> Result<rates::DetuningRange, String> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err("expected start:stop:count".into());
    }
    let start: f64 = parts[0].parse().map_err(|e| format!("start: {e}"))?;
    let stop: f64 = parts[1].parse().map_err(|e| format!("stop: {e}"))?;
    let count: usize = parts[2].parse().map_err(|e| format!("count: {e}"))?;
    if !start.is_finite() || !stop.is_finite() {
        return Err("range endpoints must be finite".into());
    }
    if count == 0 {
        return Err("count must be ≥ 1".into());
    }
    Ok(rates::DetuningRange { start, stop, count })
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn dispatch(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Run { config, no_phonons } => {
            let cfg = RunConfig::load(&config)?;
            let manifest = sweep::run_sweep(&cfg, no_phonons)?;
            let n = manifest.entries.len();
            let failed = manifest.failed();
            println!(
                "{} point(s) done, {} failed; outputs in {}",
                n - failed,
                failed,
                cfg.output.directory
            );
            if failed > 0 {
                return Err(CliError::Numerical(format!(
                    "{failed} of {n} sweep points failed; see {}/manifest.json",
                    cfg.output.directory
                )));
            }
            Ok(())
        }
        Command::Rates {
            config,
            detuning_range,
            no_phonons,
        } => {
            let cfg = RunConfig::load(&config)?;
            let stdout = std::io::stdout();
            rates::rates_report(&cfg, &detuning_range, no_phonons, &mut stdout.lock())
        }
        Command::LdosCheck { file, gamma_b } => ldos_check(&file, gamma_b),
        Command::Presets { action } => match action {
            PresetAction::List => {
                for name in presets::PRESET_NAMES {
                    println!("{name}");
                }
                Ok(())
            }
            PresetAction::Emit { name } => {
                let cfg = presets::preset(&name)?;
                cfg.validate()?;
                let text = serde_json::to_string_pretty(&cfg)
                    .map_err(|e| CliError::Config(format!("cannot serialize preset: {e}")))?;
                println!("{text}");
                Ok(())
            }
        },
    }
}

fn ldos_check(file: &Path, gamma_b: f64) -> CliResult<()> {
    if !(gamma_b.is_finite() && gamma_b > 0.0) {
        return Err(CliError::Config(format!(
            "field `gamma_b`: must be > 0, got {gamma_b}"
        )));
    }
    let text = std::fs::read_to_string(file)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", file.display())))?;
    let table = TabulatedLdos::from_text(&text, gamma_b).map_err(engine_error)?;
    let res = PhotonReservoir64::Tabulated(table);
    let grid = res.grid().expect("tabulated reservoir has a grid");
    let pf: Vec<f64> = grid
        .iter()
        .map(|&w| res.purcell_factor(w, gamma_b))
        .collect();
    println!(
        "rows: {}, omega: {} .. {} meV",
        grid.len(),
        grid[0],
        grid[grid.len() - 1]
    );

    let lo = pf.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = pf.iter().cloned().fold(0.0f64, f64::max);
    if hi - lo <= 1e-12 * hi.max(f64::MIN_POSITIVE) {
        // J = PF·γ_b/2π, so a constant table is exactly a flat reservoir
        println!(
            "constant LDOS: behaves as a flat reservoir with gamma = {} meV",
            hi * gamma_b
        );
        return Ok(());
    }

    let maxima: Vec<(f64, f64)> = (1..grid.len() - 1)
        .filter(|&i| pf[i] > pf[i - 1] && pf[i] > pf[i + 1])
        .map(|i| (grid[i], pf[i]))
        .collect();
    println!("PF maxima (omega_meV, PF): {}", maxima.len());
    for (w, p) in &maxima {
        println!("  {w}  {p}");
    }
    Ok(())
}
