//! Sweep execution: one spectrum file per sweep value on a bounded worker
//! pool, a JSON manifest with per-point status, and hash-based resume.

use crate::config::{engine_error, CliError, CliResult, OutputFormat, RunConfig, SweepVariable};
use mollow_core::{compute_point, normalize, to_db, PhononBath64, PointResult64};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::fs;
use std::io::Write;
use std::path::Path;
use std::sync::Mutex;
use std::time::Instant;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ManifestEntry {
    /// Sweep-variable value for this point.
    pub value: f64,
    /// Output file name, relative to the output directory.
    pub path: String,
    /// Wall-clock seconds spent on this point.
    pub seconds: f64,
    pub converged: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    /// SHA-256 of the canonical config JSON (plus the --no-phonons override);
    /// resume only trusts outputs written under the same hash.
    pub config_sha256: String,
    pub code_version: String,
    pub variable: String,
    pub entries: Vec<ManifestEntry>,
}

impl RunManifest {
    pub fn failed(&self) -> usize {
        self.entries.iter().filter(|e| !e.converged).count()
    }
}

fn config_hash(cfg: &RunConfig, no_phonons: bool) -> CliResult<String> {
    let canon = serde_json::to_string(cfg)
        .map_err(|e| CliError::Config(format!("cannot serialize config: {e}")))?;
    let mut h = Sha256::new();
    h.update(canon.as_bytes());
    h.update([no_phonons as u8]);
    Ok(hex::encode(h.finalize()))
}

/// File stem for one sweep point, unambiguous and filesystem-safe.
fn point_file(variable: SweepVariable, value: f64, format: OutputFormat) -> String {
    let ext = match format {
        OutputFormat::Csv => "csv",
        OutputFormat::Json => "json",
    };
    format!("{}_{:+.6}.{}", variable.slug(), value, ext)
}

/// Run every sweep point, skipping ones already completed under the same
/// config hash. Per-point failures are recorded in the manifest without
/// aborting the rest of the sweep.
pub fn run_sweep(cfg: &RunConfig, no_phonons: bool) -> CliResult<RunManifest> {
    let hash = config_hash(cfg, no_phonons)?;
    let dir = Path::new(&cfg.output.directory);
    fs::create_dir_all(dir)
        .map_err(|e| CliError::Config(format!("cannot create {}: {e}", dir.display())))?;
    let manifest_path = dir.join("manifest.json");

    let (variable, values): (SweepVariable, Vec<f64>) = match &cfg.sweep {
        Some(sw) => (sw.variable, sw.values.clone()),
        None => (SweepVariable::DeltaLx, vec![cfg.system.delta_lx]),
    };

    // previous run with the identical config: completed points are final
    let prior: Option<RunManifest> = fs::read_to_string(&manifest_path)
        .ok()
        .and_then(|t| serde_json::from_str(&t).ok())
        .filter(|m: &RunManifest| m.config_sha256 == hash);
    let done = |value: f64, path: &str| {
        prior
            .as_ref()
            .map(|m| {
                m.entries
                    .iter()
                    .any(|e| e.value == value && e.converged && dir.join(path).exists())
            })
            .unwrap_or(false)
    };

    // the bath only changes across points in a temperature sweep
    let shared_bath = match variable {
        SweepVariable::Temperature => None,
        _ => Some(cfg.bath(no_phonons)?),
    };
    let res = cfg.reservoir()?;
    let quad = cfg.quadrature();

    let entries: Mutex<Vec<Option<ManifestEntry>>> = Mutex::new(vec![None; values.len()]);
    let write_snapshot = |entries: &[Option<ManifestEntry>]| {
        let m = RunManifest {
            config_sha256: hash.clone(),
            code_version: env!("CARGO_PKG_VERSION").into(),
            variable: serde_json::to_value(variable)
                .expect("variable serializes")
                .as_str()
                .expect("variable is a string")
                .to_string(),
            entries: entries.iter().flatten().cloned().collect(),
        };
        if let Ok(text) = serde_json::to_string_pretty(&m) {
            let _ = fs::write(&manifest_path, text);
        }
        m
    };

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.numerics.threads.unwrap_or(0))
        .build()
        .map_err(|e| CliError::Config(format!("worker pool: {e}")))?;

    pool.install(|| {
        use rayon::prelude::*;
        values.par_iter().enumerate().for_each(|(i, &value)| {
            let path = point_file(variable, value, cfg.output.format);
            let entry = if done(value, &path) {
                prior
                    .as_ref()
                    .and_then(|m| {
                        m.entries
                            .iter()
                            .find(|e| e.value == value && e.converged)
                            .cloned()
                    })
                    .expect("resume entry exists")
            } else {
                let t0 = Instant::now();
                let outcome = compute_and_write(
                    cfg,
                    variable,
                    value,
                    shared_bath.as_ref(),
                    &res,
                    &quad,
                    no_phonons,
                    &dir.join(&path),
                );
                ManifestEntry {
                    value,
                    path: path.clone(),
                    seconds: t0.elapsed().as_secs_f64(),
                    converged: outcome.is_ok(),
                    error: outcome.err().map(|e| e.to_string()),
                }
            };
            // manifest writes go through a single lock-holding writer
            let mut lock = entries.lock().expect("manifest lock");
            lock[i] = Some(entry);
            write_snapshot(&lock);
        });
    });

    let lock = entries.lock().expect("manifest lock");
    Ok(write_snapshot(&lock))
}

#[allow(clippy::too_many_arguments)]
fn compute_and_write(
    cfg: &RunConfig,
    variable: SweepVariable,
    value: f64,
    shared_bath: Option<&PhononBath64>,
    res: &mollow_core::PhotonReservoir64,
    quad: &mollow_core::RateQuadrature<f64>,
    no_phonons: bool,
    path: &Path,
) -> CliResult<()> {
    let mut params = cfg.system_params();
    let bath_store;
    let bath = match variable {
        SweepVariable::DeltaLx => {
            params.delta_lx = value;
            shared_bath.expect("bath prebuilt for non-T sweeps")
        }
        SweepVariable::Omega => {
            params.omega = value;
            shared_bath.expect("bath prebuilt for non-T sweeps")
        }
        SweepVariable::Temperature => {
            bath_store = cfg.bath_at(value, no_phonons)?;
            &bath_store
        }
    };
    let grid = cfg.omega_grid(params.omega_l, params.omega);
    let pt = compute_point(&params, bath, res, quad, Some(&grid)).map_err(engine_error)?;
    write_point(cfg, &pt, path)
}

fn write_point(cfg: &RunConfig, pt: &PointResult64, path: &Path) -> CliResult<()> {
    let io_err =
        |e: std::io::Error| CliError::Config(format!("cannot write {}: {e}", path.display()));
    let (s0, sp) = if cfg.output.normalize {
        (
            normalize(&pt.series.s0).map_err(engine_error)?,
            normalize(&pt.series.sp).map_err(engine_error)?,
        )
    } else {
        (pt.series.s0.clone(), pt.series.sp.clone())
    };
    let s0_db = to_db(&s0).map_err(engine_error)?;
    let sp_db = to_db(&sp).map_err(engine_error)?;

    match cfg.output.format {
        OutputFormat::Csv => {
            let mut buf = String::from("omega_meV,S0,SP,S0_dB,SP_dB\n");
            for i in 0..pt.series.omega.len() {
                use std::fmt::Write as _;
                writeln!(
                    buf,
                    "{},{},{},{},{}",
                    pt.series.omega[i], s0[i], sp[i], s0_db[i], sp_db[i]
                )
                .expect("string write");
            }
            fs::write(path, buf).map_err(io_err)
        }
        OutputFormat::Json => {
            #[derive(Serialize)]
            struct JsonPoint<'a> {
                omega_mev: &'a [f64],
                s0: &'a [f64],
                sp: &'a [f64],
                #[serde(skip_serializing_if = "Option::is_none")]
                s0_db: Option<&'a [f64]>,
                #[serde(skip_serializing_if = "Option::is_none")]
                sp_db: Option<&'a [f64]>,
                omega_r: f64,
                eta: f64,
                b_mean: f64,
            }
            let body = JsonPoint {
                omega_mev: &pt.series.omega,
                s0: &s0,
                sp: &sp,
                s0_db: cfg.output.db.then_some(&s0_db[..]),
                sp_db: cfg.output.db.then_some(&sp_db[..]),
                omega_r: pt.omega_r,
                eta: pt.eta,
                b_mean: pt.b_mean,
            };
            let file = fs::File::create(path).map_err(io_err)?;
            let mut w = std::io::BufWriter::new(file);
            serde_json::to_writer_pretty(&mut w, &body).map_err(|e| {
                CliError::Config(format!("cannot serialize {}: {e}", path.display()))
            })?;
            w.flush().map_err(io_err)
        }
    }
}
