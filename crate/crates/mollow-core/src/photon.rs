//! Structured photonic reservoirs: spectral functions J_ph(ω), the emission
//! propagator α_P(ω), relaxation functions, the half-line integrals
//! T_k = ∫₀^∞ C_pn(τ) J^k_ph(τ) dτ, and the four drive-dependent photon
//! scattering rates built from T_D, T_U, T_L.
//!
//! Splitting the polaron correlation as C_pn = ⟨B⟩² + (C_pn − ⟨B⟩²) turns
//! T_k into an exactly-known half-line Fourier part,
//!   ⟨B⟩²(π J_ph(ω_k) + i PV∫ J_ph(ω)/(ω_k−ω) dω),
//! plus a short-memory convolution of J_ph with
//! χ(ω) = ∫₀^∞ (C_pn(τ)−⟨B⟩²) e^{i(ω_k−ω)τ/ħ} dτ, which is what gets
//! computed here. The PV integral is exact for the piecewise-linear
//! interpolant of J_ph on the reservoir grid.

use crate::error::{Error, Result};
use crate::float::{fl, hbar, Float, C};
use crate::phonon::PhononBath;
use crate::quad::{arange, pv_piecewise_linear, trapz, trapz_uniform};
use crate::system::DressedState;
use num_complex::Complex;

/// Single-mode cavity: J_ph(ω) = (g²/π)·(κ/2)/[(ω−ω_c)² + κ²/4].
#[derive(Debug, Clone)]
pub struct LorentzianCavity<T: Float> {
    pub omega_c: T,
    pub kappa: T,
    pub g: T,
    grid: Vec<T>,
    jgrid: Vec<T>,
}

impl<T: Float> LorentzianCavity<T> {
    /// Internal grid spans ω_c ± 25κ with step κ/100 (symmetric, inclusive).
    pub fn new(omega_c: T, kappa: T, g: T) -> Result<Self> {
        if !(kappa > T::zero()) {
            return Err(Error::InvalidParameter {
                field: "kappa",
                msg: format!("cavity linewidth must be > 0, got {kappa}"),
            });
        }
        if !(g >= T::zero()) {
            return Err(Error::InvalidParameter {
                field: "g",
                msg: format!("cavity coupling must be ≥ 0, got {g}"),
            });
        }
        let step = kappa / fl::<T>(100.0);
        let grid: Vec<T> = (0..=5000)
            .map(|i| omega_c + fl::<T>(i as f64 - 2500.0) * step)
            .collect();
        let me = Self {
            omega_c,
            kappa,
            g,
            grid: grid.clone(),
            jgrid: vec![],
        };
        let jgrid = grid.iter().map(|&x| me.j_point(x)).collect();
        Ok(Self { jgrid, ..me })
    }

    fn j_point(&self, x: T) -> T {
        let half_k = self.kappa / fl::<T>(2.0);
        let d = x - self.omega_c;
        self.g * self.g / T::PI() * half_k / (d * d + half_k * half_k)
    }
}

/// Two coupled band-edge modes of a cavity-array waveguide:
/// J_ph(ω) = −s·(ω/ω₀)/π · Im[1/(√(ω−ω̃_u)·√(ω−ω̃_l))] with
/// ω̃_{u,l} = ω_{u,l} − iκ_{u,l} and principal square roots, which is the
/// inverse-square-root band shape regularized by the mode linewidths.
/// The emission propagator shape is (ω²/4)/|(ω−ω̃_u)(ω−ω̃_l)|.
#[derive(Debug, Clone)]
pub struct CcwReservoir<T: Float> {
    pub omega_l: T,
    pub omega_u: T,
    pub kappa_l: T,
    pub kappa_u: T,
    /// Band center, the reference frequency of the (ω/ω₀) factor.
    pub omega_0: T,
    /// Overall scale lumping dipole moment and mode volume; set by
    /// mid-band Purcell calibration.
    pub scale: T,
    grid: Vec<T>,
    jgrid: Vec<T>,
    alpha_max: T,
}

impl<T: Float> CcwReservoir<T> {
    /// Raw constructor with an explicit overall scale.
    ///
    /// The frequency grid is the band window ±16 meV in 0.02 meV steps,
    /// refined geometrically (h=5e−4, ratio 1.08, out to ±1 meV) around
    /// each edge where J_ph is sharp.
    pub fn new(omega_l: T, omega_u: T, kappa_l: T, kappa_u: T, scale: T) -> Result<Self> {
        if !(omega_l < omega_u) {
            return Err(Error::InvalidParameter {
                field: "omega_l",
                msg: format!(
                    "band edges must satisfy omega_l < omega_u, got {omega_l} ≥ {omega_u}"
                ),
            });
        }
        if !(kappa_l > T::zero()) || !(kappa_u > T::zero()) {
            return Err(Error::InvalidParameter {
                field: "kappa_l",
                msg: "edge linewidths must be > 0".into(),
            });
        }
        let sixteen = fl::<T>(16.0);
        let mut grid = arange(omega_l - sixteen, omega_u + sixteen, fl(0.02));
        grid.extend(Self::refine(omega_l));
        grid.extend(Self::refine(omega_u));
        grid.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());
        grid.dedup();
        let mut me = Self {
            omega_l,
            omega_u,
            kappa_l,
            kappa_u,
            omega_0: (omega_l + omega_u) / fl::<T>(2.0),
            scale,
            grid,
            jgrid: vec![],
            alpha_max: T::one(),
        };
        me.jgrid = me.grid.iter().map(|&x| me.j_point(x)).collect();
        let jmax = me.jgrid.iter().cloned().fold(T::zero(), T::max);
        let jmin = me.jgrid.iter().cloned().fold(T::zero(), T::min);
        // branch sanity: principal roots must keep Im[1/s] ≤ 0 in-band
        if jmin < -fl::<T>(1e-12) * jmax {
            return Err(Error::UnphysicalRates {
                what: format!("square-root branch violation: J_ph reaches {jmin:e} (max {jmax:e})"),
            });
        }
        me.alpha_max = me
            .grid
            .iter()
            .map(|&x| me.alpha_shape(x))
            .fold(T::zero(), T::max);
        Ok(me)
    }

    /// Edges at ω₀ ± half_bw, both linewidths κ = ω₀/2Q, overall scale set
    /// so the mid-band Purcell factor 2πJ_ph(ω₀)/γ_b equals `pf_mid`.
    pub fn with_midband_purcell(
        omega_0: T,
        half_bw: T,
        q: T,
        pf_mid: T,
        gamma_b: T,
    ) -> Result<Self> {
        if !(q > T::zero()) || !(gamma_b > T::zero()) || !(pf_mid > T::zero()) {
            return Err(Error::InvalidParameter {
                field: "q",
                msg: "Q, pf_mid and gamma_b must be > 0".into(),
            });
        }
        let kappa = omega_0 / (fl::<T>(2.0) * q);
        let mut me = Self::new(omega_0 - half_bw, omega_0 + half_bw, kappa, kappa, T::one())?;
        let two_pi = fl::<T>(2.0) * T::PI();
        me.scale = pf_mid * gamma_b / (two_pi * me.j_point(omega_0));
        me.jgrid = me.grid.iter().map(|&x| me.j_point(x)).collect();
        Ok(me)
    }

    fn refine(c: T) -> Vec<T> {
        let mut g = vec![c];
        let mut x = fl::<T>(5e-4);
        while x < T::one() {
            g.push(c - x);
            g.push(c + x);
            x *= fl::<T>(1.08);
        }
        g
    }

    fn edge_factors(&self, x: T) -> (C<T>, C<T>) {
        (
            Complex::new(x - self.omega_u, self.kappa_u),
            Complex::new(x - self.omega_l, self.kappa_l),
        )
    }

    fn j_point(&self, x: T) -> T {
        let (zu, zl) = self.edge_factors(x);
        let s = zu.sqrt() * zl.sqrt();
        -self.scale * (x / self.omega_0) / T::PI() * s.inv().im
    }

    fn alpha_shape(&self, x: T) -> T {
        let (zu, zl) = self.edge_factors(x);
        (x * x / fl::<T>(4.0)) / (zu * zl).norm()
    }

    /// In-band maxima of J_ph on either side of the band center — the
    /// natural "emitter at the lower/upper mode edge" operating points.
    pub fn edge_frequencies(&self) -> (T, T) {
        let mut lo = (self.grid[0], T::zero());
        let mut hi = (self.grid[0], T::zero());
        for (&x, &j) in self.grid.iter().zip(&self.jgrid) {
            if x < self.omega_0 && j > lo.1 {
                lo = (x, j);
            }
            if x > self.omega_0 && j > hi.1 {
                hi = (x, j);
            }
        }
        (lo.0, hi.0)
    }
}

/// LDOS given as a sampled table (e.g. from an FDTD run), linearly
/// interpolated. Outside the table J_ph is 0 and α_P clamps to the edge.
#[derive(Debug, Clone)]
pub struct TabulatedLdos<T: Float> {
    omega: Vec<T>,
    j: Vec<T>,
    alpha: Vec<T>,
}

impl<T: Float> TabulatedLdos<T> {
    /// Parse the text LDOS format: '#' comments, optional `# PF_scale <s>`
    /// normalization header, whitespace-separated rows
    /// `omega_meV  pf_norm [alpha_norm]` with ω strictly increasing.
    /// Two-column rows get α ≡ 1. The stored rate density is
    /// J_ph = pf_norm · PF_scale · γ_b / 2π for the reference decay rate
    /// `gamma_b_ref` (so `pf_norm · PF_scale` reads as a Purcell factor).
    pub fn from_text(text: &str, gamma_b_ref: T) -> Result<Self> {
        let mut pf_scale = T::one();
        let mut omega: Vec<T> = vec![];
        let mut pf: Vec<T> = vec![];
        let mut alpha: Vec<T> = vec![];
        let mut ncols: Option<usize> = None;
        for (i, line) in text.lines().enumerate() {
            let row = i + 1;
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('#') {
                let rest = rest.trim();
                if let Some(v) = rest.strip_prefix("PF_scale") {
                    pf_scale = v
                        .trim()
                        .parse::<f64>()
                        .map(fl)
                        .map_err(|e| Error::LdosFormat {
                            row,
                            msg: format!("bad PF_scale value {:?}: {e}", v.trim()),
                        })?;
                }
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 2 && fields.len() != 3 {
                return Err(Error::LdosFormat {
                    row,
                    msg: format!("expected 2 or 3 columns, found {}", fields.len()),
                });
            }
            if let Some(n) = ncols {
                if n != fields.len() {
                    return Err(Error::LdosFormat {
                        row,
                        msg: format!("column count changed from {n} to {}", fields.len()),
                    });
                }
            } else {
                ncols = Some(fields.len());
            }
            let mut nums = [T::zero(); 3];
            for (k, f) in fields.iter().enumerate() {
                nums[k] = f.parse::<f64>().map(fl).map_err(|e| Error::LdosFormat {
                    row,
                    msg: format!("field {} ({f:?}) is not a number: {e}", k + 1),
                })?;
            }
            if let Some(&last) = omega.last() {
                if !(nums[0] > last) {
                    return Err(Error::LdosFormat {
                        row,
                        msg: format!(
                            "omega must be strictly increasing, got {} after {last}",
                            nums[0]
                        ),
                    });
                }
            }
            if nums[1] < T::zero() {
                return Err(Error::LdosFormat {
                    row,
                    msg: format!("negative LDOS value {}", nums[1]),
                });
            }
            let a = if fields.len() == 3 { nums[2] } else { T::one() };
            if a < T::zero() {
                return Err(Error::LdosFormat {
                    row,
                    msg: format!("negative propagator value {a}"),
                });
            }
            omega.push(nums[0]);
            pf.push(nums[1]);
            alpha.push(a);
        }
        if omega.len() < 2 {
            return Err(Error::LdosFormat {
                row: 0,
                msg: format!("need at least 2 data rows, found {}", omega.len()),
            });
        }
        let two_pi = fl::<T>(2.0) * T::PI();
        let j = pf
            .iter()
            .map(|&p| p * pf_scale * gamma_b_ref / two_pi)
            .collect();
        Ok(Self { omega, j, alpha })
    }
}

/// Linear interpolation with a choice of out-of-range policy.
fn interp<T: Float>(xs: &[T], ys: &[T], x: T, clamp: bool) -> T {
    if x < xs[0] {
        return if clamp { ys[0] } else { T::zero() };
    }
    if x > xs[xs.len() - 1] {
        return if clamp { ys[ys.len() - 1] } else { T::zero() };
    }
    // binary search for the bracketing segment
    let mut lo = 0usize;
    let mut hi = xs.len() - 1;
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if xs[mid] <= x {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let w = (x - xs[lo]) / (xs[hi] - xs[lo]);
    ys[lo] + (ys[hi] - ys[lo]) * w
}

/// A photonic reservoir model producing J_ph, α_P and the T_k integrals.
#[derive(Debug, Clone)]
pub enum PhotonReservoir<T: Float> {
    /// White reservoir with total spontaneous-emission rate γ.
    Flat {
        gamma: T,
    },
    Lorentzian(LorentzianCavity<T>),
    CoupledCavityWaveguide(CcwReservoir<T>),
    Tabulated(TabulatedLdos<T>),
}

impl<T: Float> PhotonReservoir<T> {
    pub fn flat(gamma: T) -> Result<Self> {
        if !(gamma >= T::zero()) {
            return Err(Error::InvalidParameter {
                field: "gamma",
                msg: format!("flat reservoir rate must be ≥ 0, got {gamma}"),
            });
        }
        Ok(Self::Flat { gamma })
    }

    /// Reservoir spectral function J_ph(ω) (meV; downstream rate
    /// assembly divides by ħ).
    pub fn j_ph(&self, omega: T) -> T {
        match self {
            Self::Flat { gamma } => *gamma / (fl::<T>(2.0) * T::PI()),
            Self::Lorentzian(c) => c.j_point(omega),
            Self::CoupledCavityWaveguide(w) => w.j_point(omega),
            Self::Tabulated(t) => interp(&t.omega, &t.j, omega, false),
        }
    }

    /// Purcell factor 2π J_ph(ω)/γ_b — the no-phonon golden-rule decay
    /// enhancement relative to the background channel.
    pub fn purcell_factor(&self, omega: T, gamma_b: T) -> T {
        fl::<T>(2.0) * T::PI() * self.j_ph(omega) / gamma_b
    }

    /// Emission propagator α_P(ω), normalized to max 1 on the reservoir's
    /// own grid (the absolute geometric factor is not observable here).
    pub fn propagator(&self, omega: T) -> T {
        match self {
            Self::Flat { .. } => T::one(),
            Self::Lorentzian(c) => {
                // normalized cavity filter |κ/2 / (ω−ω_c+iκ/2)|²
                let half_k = c.kappa / fl::<T>(2.0);
                let d = omega - c.omega_c;
                half_k * half_k / (d * d + half_k * half_k)
            }
            Self::CoupledCavityWaveguide(w) => w.alpha_shape(omega) / w.alpha_max,
            Self::Tabulated(t) => interp(&t.omega, &t.alpha, omega, true),
        }
    }

    /// The reservoir's internal frequency grid, if it has one.
    pub fn grid(&self) -> Option<&[T]> {
        match self {
            Self::Flat { .. } => None,
            Self::Lorentzian(c) => Some(&c.grid),
            Self::CoupledCavityWaveguide(w) => Some(&w.grid),
            Self::Tabulated(t) => Some(&t.omega),
        }
    }

    fn jgrid(&self) -> Option<&[T]> {
        match self {
            Self::Flat { .. } => None,
            Self::Lorentzian(c) => Some(&c.jgrid),
            Self::CoupledCavityWaveguide(w) => Some(&w.jgrid),
            Self::Tabulated(t) => Some(&t.j),
        }
    }

    /// Photon relaxation function J^k_ph(τ) = ∫dω J_ph(ω) e^{i(ω_k−ω)τ/ħ}
    /// over the reservoir grid. Not defined pointwise for the flat
    /// reservoir (δ-correlated; its half-line integral is γ/2 analytically).
    pub fn relaxation_function(&self, omega_k: T, tau: T) -> Result<C<T>> {
        let (grid, jg) = match (self.grid(), self.jgrid()) {
            (Some(g), Some(j)) => (g, j),
            _ => {
                return Err(Error::InvalidParameter {
                    field: "reservoir",
                    msg: "flat reservoir is δ-correlated; use T_k = γ/2 directly".into(),
                })
            }
        };
        let hb = hbar::<T>();
        // phase advance per grid step must stay resolved
        let mut max_dx = T::zero();
        for i in 0..grid.len() - 1 {
            max_dx = max_dx.max(grid[i + 1] - grid[i]);
        }
        let phase_step = max_dx * tau.abs() / hb;
        if phase_step > T::PI() {
            return Err(Error::QuadratureNotConverged {
                what: "photon relaxation function",
                residual: phase_step.to_f64().unwrap_or(f64::NAN),
                tol: std::f64::consts::PI,
            });
        }
        let y: Vec<C<T>> = grid
            .iter()
            .zip(jg)
            .map(|(&x, &j)| Complex::from_polar(j, (omega_k - x) * tau / hb))
            .collect();
        Ok(trapz(grid, &y))
    }

    /// T_k = ∫₀^∞ C_pn(τ) J^k_ph(τ) dτ at sampling frequency ω_k.
    ///
    /// For the flat reservoir this is γ/2 exactly, phonons or not: the
    /// white-noise relaxation function is δ-like, so only C_pn(0) = 1
    /// enters (equivalently ⟨B⟩²γ/2 + γ(1−⟨B⟩²)/2 = γ/2).
    pub fn t_k(&self, bath: &PhononBath<T>, omega_k: T) -> Result<C<T>> {
        let (grid, jg) = match self {
            Self::Flat { gamma } => {
                return Ok(Complex::new(*gamma / fl::<T>(2.0), T::zero()));
            }
            _ => (self.grid().unwrap(), self.jgrid().unwrap()),
        };
        let hb = hbar::<T>();
        let b2 = bath.b_mean * bath.b_mean;
        let jk = self.j_ph(omega_k);
        let pv = pv_piecewise_linear(grid, jg, omega_k);
        let mut out = Complex::new(b2 * T::PI() * jk, b2 * pv);
        if bath.enabled {
            // short-memory part: χ(ω) over the (dead by 20 ps) correlation
            let dtau = fl::<T>(0.01);
            let n = 2001usize;
            let dc: Vec<C<T>> = (0..n)
                .map(|i| {
                    let tau = dtau * fl::<T>(i as f64);
                    bath.correlation(tau) - Complex::new(b2, T::zero())
                })
                .collect();
            let tail = dc[n - 1].norm();
            let head = dc[0].norm().max(fl::<T>(1e-30));
            if tail > fl::<T>(1e-6) * head {
                return Err(Error::QuadratureNotConverged {
                    what: "phonon-sideband convolution in T_k",
                    residual: tail.to_f64().unwrap_or(f64::NAN),
                    tol: (fl::<T>(1e-6) * head).to_f64().unwrap_or(f64::NAN),
                });
            }
            let y: Vec<C<T>> = grid
                .iter()
                .zip(jg)
                .map(|(&x, &j)| {
                    let nu = (omega_k - x) / hb;
                    let vals: Vec<C<T>> = dc
                        .iter()
                        .enumerate()
                        .map(|(i, &d)| {
                            d * Complex::from_polar(T::one(), nu * dtau * fl::<T>(i as f64))
                        })
                        .collect();
                    trapz_uniform(&vals, dtau) * j
                })
                .collect();
            out += trapz(grid, &y) / hb;
        }
        Ok(out)
    }
}

/// Drive-dependent photon scattering rates and the three T_k samples they
/// are built from. Γ' is real and N' purely imaginary by construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhotonRates<T: Float> {
    pub gamma_p: T,
    pub n_p: C<T>,
    pub m_p: C<T>,
    pub k_p: C<T>,
    pub t_d: C<T>,
    pub t_u: C<T>,
    pub t_l: C<T>,
}

/// The four drive-dependent photon rates at laser frequency ω_L.
///
/// The reservoir is sampled at the central frequency and at ω_L ± Ω_R
/// (phonon-renormalized Rabi sidebands). With a = Ω_R²/2η², d = Δ_Lx/η and
/// B_r = a T_D + ½(1−a−d) T_U + ½(1−a+d) T_L:
///   Γ' = 2 Re B_r,  N' = i Im B_r,
///   M' = (Ω_R/2η)[d T_D + ½(1−d) T_U − ½(1+d) T_L],
///   K' = a [T_D − ½(T_U + T_L)].
/// For η = 0 (no drive, no detuning) only T_D contributes: Γ' = 2 Re T_D,
/// N' = i Im T_D, M' = K' = 0.
pub fn photon_rates<T: Float>(
    res: &PhotonReservoir<T>,
    bath: &PhononBath<T>,
    omega_l: T,
    ds: &DressedState<T>,
) -> Result<PhotonRates<T>> {
    let td = res.t_k(bath, omega_l)?;
    let zero = Complex::new(T::zero(), T::zero());
    if ds.eta == T::zero() {
        return Ok(PhotonRates {
            gamma_p: fl::<T>(2.0) * td.re,
            n_p: Complex::new(T::zero(), td.im),
            m_p: zero,
            k_p: zero,
            t_d: td,
            t_u: td,
            t_l: td,
        });
    }
    let eta2 = ds.eta * ds.eta;
    if !(eta2 > T::zero()) {
        return Err(Error::InvalidParameter {
            field: "eta",
            msg: format!(
                "dressed splitting {} underflows in rate coefficients",
                ds.eta
            ),
        });
    }
    let tu = res.t_k(bath, omega_l + ds.omega_r)?;
    let tl = res.t_k(bath, omega_l - ds.omega_r)?;
    let a = ds.omega_r * ds.omega_r / (fl::<T>(2.0) * eta2);
    let d = ds.delta_lx / ds.eta;
    let half = fl::<T>(0.5);
    let one = T::one();
    let br = td * a + tu * (half * (one - a - d)) + tl * (half * (one - a + d));
    let m_p = (td * d + tu * (half * (one - d)) - tl * (half * (one + d)))
        * (ds.omega_r / (fl::<T>(2.0) * ds.eta));
    let k_p = (td - (tu + tl) * half) * a;
    Ok(PhotonRates {
        gamma_p: fl::<T>(2.0) * br.re,
        n_p: Complex::new(T::zero(), br.im),
        m_p,
        k_p,
        t_d: td,
        t_u: tu,
        t_l: tl,
    })
}
