//! Driven two-level emitter: parameters, dressed-state quantities, and the
//! 2×2 operator basis.
//!
//! Basis ordering is {|g⟩, |e⟩}; σ⁻ = |g⟩⟨e| `[[0,1],[0,0]]`. Detuning
//! convention: `delta_lx` = ω_L − ω_x (laser minus emitter). The rotating-frame
//! Hamiltonian carries the emitter term with the opposite sign,
//! H = (Ω_R/2)(σ⁺+σ⁻) − Δ_Lx σ⁺σ⁻.

use crate::error::{Error, Result};
use crate::float::{Float, C};
use crate::linalg::{czero, CMat};
use ndarray::Array2;
use num_complex::Complex;

/// Physical parameters of one run point. Energies in meV.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams<T: Float> {
    /// Bare drive Rabi energy Ω (before phonon renormalization).
    pub omega: T,
    /// Laser–emitter detuning Δ_Lx = ω_L − ω_x.
    pub delta_lx: T,
    /// Absolute laser frequency ω_L (sets where the reservoir is sampled).
    pub omega_l: T,
    /// Background spontaneous-emission rate γ_b (into non-reservoir modes).
    pub gamma_b: T,
    /// Pure-dephasing rate γ_d.
    pub gamma_d: T,
}

impl<T: Float> SystemParams<T> {
    pub fn validate(&self) -> Result<()> {
        if !(self.omega >= T::zero()) {
            return Err(Error::InvalidParameter {
                field: "omega",
                msg: format!("drive must be ≥ 0, got {}", self.omega),
            });
        }
        if !(self.gamma_b > T::zero()) {
            return Err(Error::InvalidParameter {
                field: "gamma_b",
                msg: format!(
                    "background decay must be > 0 for a unique steady state, got {}",
                    self.gamma_b
                ),
            });
        }
        if !(self.gamma_d >= T::zero()) {
            return Err(Error::InvalidParameter {
                field: "gamma_d",
                msg: format!("dephasing must be ≥ 0, got {}", self.gamma_d),
            });
        }
        if !self.omega_l.is_finite() || !self.delta_lx.is_finite() {
            return Err(Error::InvalidParameter {
                field: "omega_l/delta_lx",
                msg: "frequencies must be finite".into(),
            });
        }
        Ok(())
    }
}

/// Renormalized drive and dressed splitting for one operating point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DressedState<T: Float> {
    /// Ω_R = ⟨B⟩·Ω.
    pub omega_r: T,
    /// Δ_Lx carried along for the rate formulas.
    pub delta_lx: T,
    /// η = √(Ω_R² + Δ_Lx²): dressed-state splitting, the sideband offset.
    pub eta: T,
}

impl<T: Float> DressedState<T> {
    pub fn new(omega_r: T, delta_lx: T) -> Self {
        Self {
            omega_r,
            delta_lx,
            eta: omega_r.hypot(delta_lx),
        }
    }
}

/// σ⁻ = |g⟩⟨e|.
pub fn sigma_minus<T: Float>() -> CMat<T> {
    let mut m = Array2::from_elem((2, 2), czero::<T>());
    m[(0, 1)] = Complex::new(T::one(), T::zero());
    m
}

/// σ⁺ = |e⟩⟨g|.
pub fn sigma_plus<T: Float>() -> CMat<T> {
    let mut m = Array2::from_elem((2, 2), czero::<T>());
    m[(1, 0)] = Complex::new(T::one(), T::zero());
    m
}

/// σ⁺σ⁻ = |e⟩⟨e|.
pub fn excited_projector<T: Float>() -> CMat<T> {
    let mut m = Array2::from_elem((2, 2), czero::<T>());
    m[(1, 1)] = Complex::new(T::one(), T::zero());
    m
}

/// σ_z = [σ⁺, σ⁻] = |e⟩⟨e| − |g⟩⟨g|.
pub fn sigma_z<T: Float>() -> CMat<T> {
    let mut m = Array2::from_elem((2, 2), czero::<T>());
    m[(0, 0)] = Complex::new(-T::one(), T::zero());
    m[(1, 1)] = Complex::new(T::one(), T::zero());
    m
}

/// Tr[a·b] for 2×2.
pub fn trace_prod<T: Float>(a: &CMat<T>, b: &CMat<T>) -> C<T> {
    let mut s = czero::<T>();
    for i in 0..2 {
        for j in 0..2 {
            s += a[(i, j)] * b[(j, i)];
        }
    }
    s
}
