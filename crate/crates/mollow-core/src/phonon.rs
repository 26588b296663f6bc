//! Acoustic-phonon bath in the polaron frame: the bath phase function φ(τ),
//! the displacement expectation ⟨B⟩, and the drive-dependent incoherent
//! scattering rates it generates.
//!
//! Spectral density is super-ohmic with a Gaussian cutoff,
//! J(ω) = α_p ω³ e^{−ω²/(2ω_b²)}, which enters only through
//!   φ(τ) = (α_p/ħ²) ∫₀^{8ω_b} dω ω e^{−ω²/(2ω_b²)}
//!           [coth(ω/2k_BT) cos(ωτ/ħ) − i sin(ωτ/ħ)].
//! The integrand beyond 8ω_b is < 1e−9 of its peak; the ω→0 limit of the
//! real part is 2k_BT (α_p/ħ²) for T > 0 and 0 at T = 0.

use crate::error::{Error, Result};
use crate::float::{fl, hbar, kb, Float, C};
use crate::quad::{simpson, trapz_uniform};
use crate::system::DressedState;
use num_complex::Complex;

/// τ-integral controls for the scattering rates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateQuadrature<T: Float> {
    /// Trapezoid step (ps).
    pub dtau: T,
    /// Horizon (ps); the bath correlation is long dead by 20 ps.
    pub tau_max: T,
    /// Regularizer e^{−ετ/ħ} (meV); results must be ε-independent.
    pub epsilon: T,
    /// Tail gate: integrands must fall below `tail_tol`·peak at the horizon.
    /// The default assumes the exponentially short memory of any T > 0 bath;
    /// exactly at T = 0 the correlation picks up an algebraic 1/τ² tail
    /// (≈ 1e−4 of peak at 20 ps) that never passes the strict gate — loosen
    /// it deliberately if zero temperature is really what you want.
    pub tail_tol: T,
}

impl<T: Float> Default for RateQuadrature<T> {
    fn default() -> Self {
        Self {
            dtau: fl(0.01),
            tau_max: fl(20.0),
            epsilon: fl(1e-4),
            tail_tol: fl(1e-6),
        }
    }
}

/// Phonon bath with a precomputed φ(τ) table.
#[derive(Debug, Clone)]
pub struct PhononBath<T: Float> {
    /// Deformation coupling α_p (ps²).
    pub alpha_p: T,
    /// Cutoff ω_b (meV).
    pub omega_b: T,
    /// Temperature (K).
    pub temperature: T,
    /// Disabled bath ⇒ φ ≡ 0, ⟨B⟩ = 1, all phonon rates 0.
    pub enabled: bool,
    /// φ(0) (real).
    pub phi0: T,
    /// ⟨B⟩ = e^{−φ(0)/2}.
    pub b_mean: T,
    tau_step: T,
    phi_tab: Vec<C<T>>,
}

impl<T: Float> PhononBath<T> {
    /// Bath with the standard table: φ on τ ∈ [0, 25] ps, step 0.0025 ps,
    /// ω-integral by composite Simpson on 1601 nodes.
    pub fn new(alpha_p: T, omega_b: T, temperature: T) -> Result<Self> {
        Self::with_table(alpha_p, omega_b, temperature, fl(0.0025), fl(25.0), 1601)
    }

    /// Bath with explicit table controls.
    pub fn with_table(
        alpha_p: T,
        omega_b: T,
        temperature: T,
        tau_step: T,
        tau_max: T,
        omega_nodes: usize,
    ) -> Result<Self> {
        if !(omega_b > T::zero()) {
            return Err(Error::InvalidParameter {
                field: "omega_b",
                msg: format!("cutoff must be > 0, got {omega_b}"),
            });
        }
        if !(alpha_p >= T::zero()) {
            return Err(Error::InvalidParameter {
                field: "alpha_p",
                msg: format!("coupling must be ≥ 0, got {alpha_p}"),
            });
        }
        if !(temperature >= T::zero()) {
            return Err(Error::InvalidParameter {
                field: "temperature",
                msg: format!("temperature must be ≥ 0, got {temperature}"),
            });
        }
        let n = (tau_max / tau_step).round().to_usize().unwrap() + 1;
        let hb = hbar::<T>();
        let pref = alpha_p / (hb * hb);
        let two_kt = fl::<T>(2.0) * kb::<T>() * temperature;
        let phi_tab: Vec<C<T>> = (0..n)
            .map(|i| {
                let tau = tau_step * fl::<T>(i as f64);
                simpson(T::zero(), fl::<T>(8.0) * omega_b, omega_nodes, |x| {
                    let gauss = (-x * x / (fl::<T>(2.0) * omega_b * omega_b)).exp();
                    let re = if x == T::zero() {
                        // ω coth(ω/2k_BT) → 2k_BT (0 at T = 0)
                        pref * two_kt
                    } else {
                        let coth = if temperature > T::zero() {
                            (x / two_kt).tanh().recip()
                        } else {
                            T::one()
                        };
                        pref * x * gauss * coth * (x * tau / hb).cos()
                    };
                    let im = -pref * x * gauss * (x * tau / hb).sin();
                    Complex::new(re, im)
                })
            })
            .collect();
        let phi0 = phi_tab[0].re;
        Ok(Self {
            alpha_p,
            omega_b,
            temperature,
            enabled: true,
            phi0,
            b_mean: (-phi0 / fl::<T>(2.0)).exp(),
            tau_step,
            phi_tab,
        })
    }

    /// No phonons: φ ≡ 0, ⟨B⟩ = 1.
    pub fn disabled() -> Self {
        Self {
            alpha_p: T::zero(),
            omega_b: T::one(),
            temperature: T::zero(),
            enabled: false,
            phi0: T::zero(),
            b_mean: T::one(),
            tau_step: T::one(),
            phi_tab: vec![Complex::new(T::zero(), T::zero()); 2],
        }
    }

    /// φ(τ) by linear interpolation from the table (clamped past the end,
    /// where φ has long since decayed to 0).
    pub fn phi(&self, tau: T) -> C<T> {
        if !self.enabled {
            return Complex::new(T::zero(), T::zero());
        }
        let pos = tau / self.tau_step;
        let i = pos.floor().to_usize().unwrap_or(0);
        if i + 1 >= self.phi_tab.len() {
            return self.phi_tab[self.phi_tab.len() - 1];
        }
        let w = pos - fl::<T>(i as f64);
        let w = Complex::new(w, T::zero());
        self.phi_tab[i] * (Complex::new(T::one(), T::zero()) - w) + self.phi_tab[i + 1] * w
    }

    /// Polaron two-time bath correlation C(τ) = e^{φ(τ)−φ(0)}; C(0)=1,
    /// C(∞)=⟨B⟩².
    pub fn correlation(&self, tau: T) -> C<T> {
        (self.phi(tau) - Complex::new(self.phi0, T::zero())).exp()
    }
}

/// Drive-dependent phonon scattering rates (meV). Γ^{σ±} and Γ^{cd} are
/// real; Γ_u is complex and feeds the non-Lindblad cross term.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhononRates<T: Float> {
    pub gamma_sigma_plus: T,
    pub gamma_sigma_minus: T,
    pub gamma_cd: T,
    pub gamma_u: C<T>,
}

impl<T: Float> PhononRates<T> {
    pub fn zero() -> Self {
        Self {
            gamma_sigma_plus: T::zero(),
            gamma_sigma_minus: T::zero(),
            gamma_cd: T::zero(),
            gamma_u: Complex::new(T::zero(), T::zero()),
        }
    }
}

/// Scattering rates for one dressed operating point.
///
/// With x = ητ/ħ and f(τ) = (Δ_Lx² cos x + Ω_R²)/η²:
///   Γ^{σ±} = (Ω_R²/2ħ) ∫ Re[(cosh φ−1)f + sinh φ cos x] ∓ Im[e^φ−1]·Δ_Lx sin x/η dτ
///   Γ^{cd} = (Ω_R²/2ħ) ∫ Re[sinh φ cos x − (cosh φ−1)f] dτ
///   Γ_u    = i Ω_R³/(2ηħ) ∫ sinh φ sin x dτ
/// all with the regularizer e^{−ετ/ħ}. Trapezoid on a uniform τ grid.
pub fn phonon_rates<T: Float>(
    bath: &PhononBath<T>,
    ds: &DressedState<T>,
    num: &RateQuadrature<T>,
) -> Result<PhononRates<T>> {
    if !bath.enabled || ds.omega_r == T::zero() {
        return Ok(PhononRates::zero());
    }
    let hb = hbar::<T>();
    let (omega_r, delta, eta) = (ds.omega_r, ds.delta_lx, ds.eta);
    let n = (num.tau_max / num.dtau).round().to_usize().unwrap() + 1;

    let mut int_sp: Vec<C<T>> = Vec::with_capacity(n);
    let mut int_sm: Vec<C<T>> = Vec::with_capacity(n);
    let mut int_cd: Vec<C<T>> = Vec::with_capacity(n);
    let mut int_u: Vec<C<T>> = Vec::with_capacity(n);
    let mut peak = T::zero();
    for i in 0..n {
        let tau = num.dtau * fl::<T>(i as f64);
        let phi = bath.phi(tau);
        let reg = (-num.epsilon * tau / hb).exp();
        let x = eta * tau / hb;
        let f = (delta * delta * x.cos() + omega_r * omega_r) / (eta * eta);
        let re_part = ((phi.cosh() - Complex::new(T::one(), T::zero())).scale(f)
            + phi.sinh().scale(x.cos()))
        .re;
        let im_part = (phi.exp() - Complex::new(T::one(), T::zero())).im * delta * x.sin() / eta;
        int_sp.push(Complex::new((re_part - im_part) * reg, T::zero()));
        int_sm.push(Complex::new((re_part + im_part) * reg, T::zero()));
        int_cd.push(Complex::new(
            (phi.sinh().scale(x.cos()) - (phi.cosh() - Complex::new(T::one(), T::zero())).scale(f))
                .re
                * reg,
            T::zero(),
        ));
        int_u.push(phi.sinh().scale(x.sin() * reg));
        let mag = re_part.abs();
        if mag > peak {
            peak = mag;
        }
    }
    // the bath correlation must be dead at the horizon
    let tail = int_sp[n - 1].re.abs().max(int_u[n - 1].norm());
    let tol = num.tail_tol * peak.max(fl::<T>(1e-30));
    if tail > tol {
        return Err(Error::QuadratureNotConverged {
            what: "phonon scattering rates",
            residual: tail.to_f64().unwrap_or(f64::NAN),
            tol: tol.to_f64().unwrap_or(f64::NAN),
        });
    }

    let pref = omega_r * omega_r / (fl::<T>(2.0) * hb);
    let gsp = trapz_uniform(&int_sp, num.dtau).re * pref;
    let gsm = trapz_uniform(&int_sm, num.dtau).re * pref;
    let gcd = trapz_uniform(&int_cd, num.dtau).re * pref;
    let gu = Complex::new(
        T::zero(),
        omega_r * omega_r * omega_r / (fl::<T>(2.0) * eta * hb),
    ) * trapz_uniform(&int_u, num.dtau);
    Ok(PhononRates {
        gamma_sigma_plus: gsp,
        gamma_sigma_minus: gsm,
        gamma_cd: gcd,
        gamma_u: gu,
    })
}

/// η → 0 limit of Γ_u: i Ω_R³/(2ħ²) ∫ sinh φ(τ) · τ dτ (same regularizer).
/// Exists for the continuity check against the general formula.
pub fn gamma_u_small_eta<T: Float>(
    bath: &PhononBath<T>,
    omega_r: T,
    num: &RateQuadrature<T>,
) -> C<T> {
    if !bath.enabled || omega_r == T::zero() {
        return Complex::new(T::zero(), T::zero());
    }
    let hb = hbar::<T>();
    let n = (num.tau_max / num.dtau).round().to_usize().unwrap() + 1;
    let vals: Vec<C<T>> = (0..n)
        .map(|i| {
            let tau = num.dtau * fl::<T>(i as f64);
            let reg = (-num.epsilon * tau / hb).exp();
            bath.phi(tau).sinh().scale(tau * reg)
        })
        .collect();
    Complex::new(
        T::zero(),
        omega_r * omega_r * omega_r / (fl::<T>(2.0) * hb * hb),
    ) * trapz_uniform(&vals, num.dtau)
}
