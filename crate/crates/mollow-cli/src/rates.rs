//! Rate report: every drive-dependent scattering rate on a detuning grid,
//! CSV on stdout. Useful for mapping where the reservoir-gradient rates
//! change sign without computing full spectra.

use crate::config::{engine_error, CliError, CliResult, RunConfig};
use mollow_core::{linspace, phonon_rates, photon_rates, DressedState64};
use std::io::Write;

#[derive(Debug, Clone)]
pub struct DetuningRange {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl DetuningRange {
    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            vec![self.start]
        } else {
            linspace(self.start, self.stop, self.count)
        }
    }
}

pub fn rates_report(
    cfg: &RunConfig,
    range: &DetuningRange,
    no_phonons: bool,
    out: &mut impl Write,
) -> CliResult<()> {
    let bath = cfg.bath(no_phonons)?;
    let res = cfg.reservoir()?;
    let quad = cfg.quadrature();
    let b = if bath.enabled { bath.b_mean } else { 1.0 };
    let io_err = |e: std::io::Error| CliError::Config(format!("cannot write report: {e}"));

    writeln!(
        out,
        "delta_lx_meV,re_M,im_M,re_Gamma_u,im_Gamma_u,Gamma_prime,re_N,im_N,\
         re_K,im_K,Gamma_sigma_plus,Gamma_sigma_minus,Gamma_cd"
    )
    .map_err(io_err)?;
    for delta in range.values() {
        let ds = DressedState64::new(b * cfg.system.omega, delta);
        let pn = phonon_rates(&bath, &ds, &quad).map_err(engine_error)?;
        let ph = photon_rates(&res, &bath, cfg.system.omega_l, &ds).map_err(engine_error)?;
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{},{}",
            delta,
            ph.m_p.re,
            ph.m_p.im,
            pn.gamma_u.re,
            pn.gamma_u.im,
            ph.gamma_p,
            ph.n_p.re,
            ph.n_p.im,
            ph.k_p.re,
            ph.k_p.im,
            pn.gamma_sigma_plus,
            pn.gamma_sigma_minus,
            pn.gamma_cd,
        )
        .map_err(io_err)?;
    }
    Ok(())
}
