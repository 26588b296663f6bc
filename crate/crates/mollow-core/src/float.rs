//! Scalar abstraction so the whole engine runs at `f32` or `f64`.
//!
//! Everything downstream is written against [`Float`]; the crate root
//! exposes concrete `f64` aliases which are what you almost always want
//! (the `f32` path exists for quick parameter scans and as a sanity check
//! that nothing depends on double precision by accident).

use num_complex::Complex;

/// Scalar trait for the engine: a real IEEE float with the usual
/// numeric bells and whistles.
pub trait Float:
    num_traits::Float
    + num_traits::FloatConst
    + num_traits::FromPrimitive
    + num_traits::Signed
    + num_traits::NumAssign
    + ndarray::ScalarOperand
    + std::fmt::Debug
    + std::fmt::Display
    + std::fmt::LowerExp
    + Send
    + Sync
    + 'static
{
}

impl<T> Float for T where
    T: num_traits::Float
        + num_traits::FloatConst
        + num_traits::FromPrimitive
        + num_traits::Signed
        + num_traits::NumAssign
        + ndarray::ScalarOperand
        + std::fmt::Debug
        + std::fmt::Display
        + std::fmt::LowerExp
        + Send
        + Sync
        + 'static
{
}

/// Shorthand: convert an `f64` literal/value into `T`.
#[inline]
pub fn fl<T: Float>(x: f64) -> T {
    T::from_f64(x).expect("f64 -> scalar conversion")
}

/// Complex number over the engine scalar.
pub type C<T> = Complex<T>;

/// ħ in meV·ps. Energies are meV, times ps, temperatures K throughout;
/// a rate Γ in meV enters equations of motion as Γ/ħ (1/ps).
#[inline]
pub fn hbar<T: Float>() -> T {
    fl(0.658212)
}

/// Boltzmann constant in meV/K.
#[inline]
pub fn kb<T: Float>() -> T {
    fl(0.086173)
}
