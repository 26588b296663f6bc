//! Assembly of the polaron master equation into a 4×4 Liouvillian over
//! column-stacked 2×2 density matrices, plus steady state, propagation,
//! and two-time correlations via the quantum regression theorem.
//!
//! dρ/dt = −(i/ħ)[H'_S, ρ] + L_phot ρ + L_phon ρ + (γ_b/ħ)D[σ⁻]ρ + (γ_d/ħ)D[σ⁺σ⁻]ρ
//!
//! with H'_S = (Ω_R/2)(σ⁺+σ⁻) + Δ_xL σ⁺σ⁻ (laser frame, Δ_xL = −Δ_Lx),
//!
//! L_phot = (Γ'/ħ)D[σ⁻] + (M'(σ⁺σ_z·ρ − σ_z ρ σ⁺) + H.c.)/ħ
//!          + (K' σ⁺ρσ⁺ + H.c.)/ħ,
//! L_phon = (Γ^{σ+}/ħ)D[σ⁺] + (Γ^{σ−}/ħ)D[σ⁻] − (Γ^{cd}/ħ)(σ⁺ρσ⁺ + H.c.)
//!          − (Γ_u(σ⁺σ⁻ρ(σ⁺−σ⁻) + σ⁻ρ) + H.c.)/ħ.
//!
//! The purely dispersive photon component N' commutes with σ⁺σ⁻ and only
//! renormalizes the emitter transition frequency (a reservoir-induced pull
//! on the resonance). It is computed and reported with the other rates but
//! not assembled: the laser–emitter detuning in this model is understood
//! as the operating detuning inclusive of that pull, which keeps the
//! dressed splitting pinned at η and the sideband placement symmetric.
//! The K', Γ^{cd} and Γ_u pieces are not of Lindblad form and are kept
//! exactly as derived — the intensity asymmetries live in them — so
//! positivity is monitored rather than enforced.

use crate::error::{Error, Result};
use crate::float::{fl, hbar, Float, C};
use crate::linalg::{czero, eig4, expm, lmul, matvec, rmul, sand, solve, unvec2, vec2, CMat};
use crate::phonon::PhononRates;
use crate::photon::PhotonRates;
use crate::system::{excited_projector, sigma_minus, sigma_plus, sigma_z, SystemParams};
use ndarray::array;
use num_complex::Complex;

/// The named contributions to the generator, each a 4×4 superoperator in
/// 1/ps. Their sum is the full generator.
#[derive(Debug, Clone)]
pub struct LiouvillianParts<T: Float> {
    pub coherent: CMat<T>,
    pub photon: CMat<T>,
    pub phonon: CMat<T>,
    pub background_se: CMat<T>,
    pub pure_dephasing: CMat<T>,
}

/// Generator of the master equation on vec(ρ) = [ρ_gg, ρ_eg, ρ_ge, ρ_ee].
#[derive(Debug, Clone)]
pub struct Liouvillian<T: Float> {
    pub generator: CMat<T>,
    pub parts: LiouvillianParts<T>,
}

/// Standard dissipator superoperator D[O]ρ = OρO† − ½{O†O, ρ}.
fn dissipator<T: Float>(o: &CMat<T>) -> CMat<T> {
    let od = o.t().mapv(|v| v.conj());
    let oo = od.dot(o);
    let half = Complex::new(fl::<T>(0.5), T::zero());
    sand(o, &od) - (lmul(&oo) + rmul(&oo)).mapv(|v| v * half)
}

impl<T: Float> Liouvillian<T> {
    /// Trace-preservation defect: max |(vec I)ᵀ·L| column-wise, i.e. the
    /// magnitude of d Tr ρ/dt the generator can produce.
    pub fn trace_defect(&self) -> T {
        let g = &self.generator;
        let mut worst = T::zero();
        for j in 0..4 {
            worst = worst.max((g[[0, j]] + g[[3, j]]).norm());
        }
        worst
    }
}

/// Assemble the generator from the system parameters and the two rate
/// sets (which must belong to the same operating point).
pub fn build_liouvillian<T: Float>(
    params: &SystemParams<T>,
    omega_r: T,
    pn: &PhononRates<T>,
    ph: &PhotonRates<T>,
) -> Result<Liouvillian<T>> {
    if params.gamma_b < T::zero() || params.gamma_d < T::zero() {
        return Err(Error::InvalidParameter {
            field: "gamma_b",
            msg: "decay and dephasing rates must be ≥ 0".into(),
        });
    }
    // total de-excitation at zero drive must stay a decay
    let no_drive_decay = params.gamma_b + ph.gamma_p + pn.gamma_sigma_minus;
    if no_drive_decay < T::zero() {
        return Err(Error::UnphysicalRates {
            what: format!(
                "no-drive decay γ_b + Γ' + Γ^σ− = {} < 0",
                no_drive_decay.to_f64().unwrap_or(f64::NAN)
            ),
        });
    }

    let hb = hbar::<T>();
    let sm = sigma_minus::<T>();
    let sp = sigma_plus::<T>();
    let pe = excited_projector::<T>();
    let sz = sigma_z::<T>();
    let re = |x: T| Complex::new(x, T::zero());
    let iu = Complex::new(T::zero(), T::one());

    // H'_S in the laser frame; Δ_xL = −Δ_Lx
    let half_omr = re(omega_r / fl::<T>(2.0));
    let h = (&sp + &sm).mapv(|v| v * half_omr) + pe.mapv(|v| v * re(-params.delta_lx));
    let coherent = (lmul(&h) - rmul(&h)).mapv(|v| v * (-iu / re(hb)));

    // photon channel: Γ' D[σ⁻] + (M'(σ⁺σ_z ρ − σ_z ρ σ⁺) + H.c.) + (K'σ⁺ρσ⁺ + H.c.)
    let m = ph.m_p;
    let mc = m.conj();
    let spsz = sp.dot(&sz);
    let szsm = sz.dot(&sm);
    let photon = (dissipator(&sm).mapv(|v| v * re(ph.gamma_p))
        + (lmul(&spsz) - sand(&sz, &sp)).mapv(|v| v * m)
        + (rmul(&szsm) - sand(&sm, &sz)).mapv(|v| v * mc)
        + sand(&sp, &sp).mapv(|v| v * ph.k_p)
        + sand(&sm, &sm).mapv(|v| v * ph.k_p.conj()))
    .mapv(|v| v / re(hb));

    // phonon channel: Γ^{σ±} dissipators, the σ⁺ρσ⁺ cross-dephasing pair,
    // and the Γ_u cross term with its Hermitian conjugate
    let gu = pn.gamma_u;
    let a_term = sand(&pe, &(&sp - &sm)) + lmul(&sm);
    let b_term = sand(&(&sm - &sp), &pe) + rmul(&sp);
    let phonon = (dissipator(&sp).mapv(|v| v * re(pn.gamma_sigma_plus))
        + dissipator(&sm).mapv(|v| v * re(pn.gamma_sigma_minus))
        + (sand(&sp, &sp) + sand(&sm, &sm)).mapv(|v| v * re(-pn.gamma_cd))
        + a_term.mapv(|v| v * -gu)
        + b_term.mapv(|v| v * -gu.conj()))
    .mapv(|v| v / re(hb));

    let background_se = dissipator(&sm).mapv(|v| v * re(params.gamma_b / hb));
    let pure_dephasing = dissipator(&pe).mapv(|v| v * re(params.gamma_d / hb));

    let generator = &coherent + &photon + &phonon + &background_se + &pure_dephasing;
    Ok(Liouvillian {
        generator,
        parts: LiouvillianParts {
            coherent,
            photon,
            phonon,
            background_se,
            pure_dephasing,
        },
    })
}

/// ρ_ss solving L·vec(ρ)=0 with Tr ρ=1, by replacing the redundant first
/// row with the trace constraint. The result is hermitized. Errors on a
/// degenerate null space or a steady state negative beyond tolerance.
pub fn steady_state<T: Float>(liou: &Liouvillian<T>) -> Result<CMat<T>> {
    // uniqueness: the zero eigenvalue must be simple
    let lam = eig4(&liou.generator);
    let mut mags: Vec<T> = lam.iter().map(|l| l.norm()).collect();
    mags.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());
    let scale = mags[3].max(fl::<T>(1e-30));
    if mags[1] < fl::<T>(1e-10) * scale {
        return Err(Error::DegenerateSteadyState {
            second: (mags[1] / scale).to_f64().unwrap_or(f64::NAN),
        });
    }

    let mut a = liou.generator.clone();
    let one = Complex::new(T::one(), T::zero());
    let zero = czero::<T>();
    for j in 0..4 {
        a[[0, j]] = if j == 0 || j == 3 { one } else { zero };
    }
    let b = [one, zero, zero, zero];
    let v = solve(&a, &b)?;
    let rho = unvec2(&v);
    let rho =
        (&rho + &rho.t().mapv(|x| x.conj())).mapv(|x| x * Complex::new(fl::<T>(0.5), T::zero()));

    let min_eig = density_min_eigenvalue(&rho);
    if min_eig < fl::<T>(-1e-8) {
        return Err(Error::NonPositiveSteadyState {
            min_eig: min_eig.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(rho)
}

/// Smaller eigenvalue of a 2×2 Hermitian matrix (uses the Hermitian part).
pub fn density_min_eigenvalue<T: Float>(rho: &CMat<T>) -> T {
    let tr = (rho[[0, 0]] + rho[[1, 1]]).re;
    let dd = (rho[[0, 0]] - rho[[1, 1]]).re;
    let off = (rho[[1, 0]] + rho[[0, 1]].conj()).norm() / fl::<T>(2.0);
    let disc = (dd * dd + fl::<T>(4.0) * off * off).sqrt();
    (tr - disc) / fl::<T>(2.0)
}

/// Propagate a 2×2 operator: unvec(exp(L t)·vec(m0)). For density matrices
/// this preserves trace and Hermiticity (to roundoff); it is equally the
/// linear map used on non-state operators in regression calculations.
pub fn evolve<T: Float>(liou: &Liouvillian<T>, m0: &CMat<T>, t: T) -> CMat<T> {
    let p = expm(&liou.generator.mapv(|v| v * Complex::new(t, T::zero())));
    let v = matvec(&p, &vec2(m0));
    unvec2(&v)
}

/// First-order correlation g(τ) = ⟨σ⁺(τ)σ⁻(0)⟩_ss on a τ grid, by the
/// quantum regression theorem: g(τ) = Tr[σ⁺ e^{Lτ}(σ⁻ ρ_ss)].
/// Uniform grids reuse one step propagator; otherwise each point is an
/// independent matrix exponential.
pub fn two_time_correlation<T: Float>(
    liou: &Liouvillian<T>,
    rho_ss: &CMat<T>,
    tau_grid: &[T],
) -> Vec<C<T>> {
    let w0: Vec<C<T>> = vec2(&sigma_minus::<T>().dot(rho_ss)).to_vec();
    // Tr[σ⁺ M] = vec(σ⁺ᵀ)·vec(M) = vec(M)[2]
    let pick = |v: &[C<T>]| v[2];
    if tau_grid.is_empty() {
        return vec![];
    }
    let uniform = tau_grid.len() > 2 && {
        let d0 = tau_grid[1] - tau_grid[0];
        tau_grid
            .windows(2)
            .all(|w| ((w[1] - w[0]) - d0).abs() <= fl::<T>(1e-12) * d0.abs().max(T::one()))
            && tau_grid[0] == T::zero()
    };
    if uniform {
        let d0 = tau_grid[1] - tau_grid[0];
        let p = expm(&liou.generator.mapv(|v| v * Complex::new(d0, T::zero())));
        let mut v = w0;
        let mut out = Vec::with_capacity(tau_grid.len());
        out.push(pick(&v));
        for _ in 1..tau_grid.len() {
            v = matvec(&p, &v);
            out.push(pick(&v));
        }
        out
    } else {
        tau_grid
            .iter()
            .map(|&t| {
                let p = expm(&liou.generator.mapv(|v| v * Complex::new(t, T::zero())));
                pick(&matvec(&p, &w0))
            })
            .collect()
    }
}

/// |g⟩⟨g|.
pub fn ground_state<T: Float>() -> CMat<T> {
    let one = Complex::new(T::one(), T::zero());
    let zero = czero::<T>();
    array![[one, zero], [zero, zero]]
}

/// |e⟩⟨e|.
pub fn excited_state<T: Float>() -> CMat<T> {
    let one = Complex::new(T::one(), T::zero());
    let zero = czero::<T>();
    array![[zero, zero], [zero, one]]
}

/// ρ = ½(I + r·σ) for a Bloch vector (needs |r| ≤ 1 to be a state);
/// rz > 0 leans toward |e⟩.
pub fn state_from_bloch<T: Float>(rx: T, ry: T, rz: T) -> CMat<T> {
    let half = fl::<T>(0.5);
    array![
        [
            Complex::new(half * (T::one() - rz), T::zero()),
            Complex::new(half * rx, -half * ry)
        ],
        [
            Complex::new(half * rx, half * ry),
            Complex::new(half * (T::one() + rz), T::zero())
        ]
    ]
}
