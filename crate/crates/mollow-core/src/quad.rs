//! Small quadrature toolbox: trapezoid, composite Simpson, and an exact
//! principal-value integral against piecewise-linear data.

use crate::float::{fl, Float, C};
use num_complex::Complex;

/// Half-open uniform grid [start, stop) with the conventional fill rule:
/// the step actually used is `(start + step) − start`, so grids launched
/// from a non-zero origin reproduce the usual numerics-library placement
/// bit for bit.
pub fn arange<T: Float>(start: T, stop: T, step: T) -> Vec<T> {
    let n = ((stop - start) / step).ceil().to_usize().unwrap_or(0);
    if n == 0 {
        return vec![];
    }
    let delta = (start + step) - start;
    (0..n).map(|i| start + fl::<T>(i as f64) * delta).collect()
}

/// Trapezoid rule on a uniform grid with spacing `dx`.
pub fn trapz_uniform<T: Float>(y: &[C<T>], dx: T) -> C<T> {
    if y.len() < 2 {
        return Complex::new(T::zero(), T::zero());
    }
    let half = fl::<T>(0.5);
    let mut s = (y[0] + y[y.len() - 1]) * half;
    for v in &y[1..y.len() - 1] {
        s += *v;
    }
    s * dx
}

/// Trapezoid rule on an arbitrary increasing grid.
pub fn trapz<T: Float>(x: &[T], y: &[C<T>]) -> C<T> {
    debug_assert_eq!(x.len(), y.len());
    let half = fl::<T>(0.5);
    let mut s = Complex::new(T::zero(), T::zero());
    for i in 0..x.len().saturating_sub(1) {
        s += (y[i] + y[i + 1]) * (x[i + 1] - x[i]) * half;
    }
    s
}

/// Composite Simpson on [a, b] with `n` nodes (`n` odd, n ≥ 3).
pub fn simpson<T: Float, F: Fn(T) -> C<T>>(a: T, b: T, n: usize, f: F) -> C<T> {
    assert!(n >= 3 && n % 2 == 1, "simpson wants an odd node count");
    let h = (b - a) / fl::<T>((n - 1) as f64);
    let mut s = f(a) + f(b);
    for i in 1..n - 1 {
        let w = if i % 2 == 1 {
            fl::<T>(4.0)
        } else {
            fl::<T>(2.0)
        };
        s += f(a + h * fl::<T>(i as f64)) * w;
    }
    s * h / fl::<T>(3.0)
}

/// Cauchy principal value of ∫ y(x)/(x0 − x) dx where y is the
/// piecewise-linear interpolant of the samples (x, y).
///
/// Per segment [x1, x2] with y = y1 + b(x − x1):
///   PV∫ = c·ln|(x0−x1)/(x0−x2)| − b(x2−x1),  c = y1 + b(x0−x1).
/// x0 exactly on a node would hit ln 0; nudge it off by 1e−9.
pub fn pv_piecewise_linear<T: Float>(x: &[T], y: &[T], x0: T) -> T {
    debug_assert_eq!(x.len(), y.len());
    let eps = fl::<T>(1e-9);
    let mut x0 = x0;
    if x.iter().any(|&xi| (xi - x0).abs() < eps) {
        x0 += eps;
    }
    let mut s = T::zero();
    for i in 0..x.len() - 1 {
        let (x1, x2, y1, y2) = (x[i], x[i + 1], y[i], y[i + 1]);
        let b = (y2 - y1) / (x2 - x1);
        let c = y1 + b * (x0 - x1);
        s += c * ((x0 - x1) / (x0 - x2)).abs().ln() - b * (x2 - x1);
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn trapz_linear_exact() {
        let x: Vec<f64> = (0..11).map(|i| 0.3 * i as f64).collect();
        let y: Vec<_> = x.iter().map(|&v| Complex::new(2.0 * v + 1.0, -v)).collect();
        let got = trapz(&x, &y);
        // ∫0^3 (2x+1)dx = 12, ∫ -x dx = -4.5
        assert_relative_eq!(got.re, 12.0, max_relative = 1e-14);
        assert_relative_eq!(got.im, -4.5, max_relative = 1e-14);
        let gu = trapz_uniform(&y, 0.3);
        assert_relative_eq!(gu.re, got.re, max_relative = 1e-14);
    }

    #[test]
    fn simpson_gaussian_moment() {
        // ∫0^8 x e^{-x²/2} dx = 1 − e^{-32}; at h = 5e-3 the h⁴ composite
        // error sits near 1e-11
        let got = simpson(0.0f64, 8.0, 1601, |x| {
            Complex::new(x * (-x * x / 2.0).exp(), 0.0)
        });
        assert_relative_eq!(got.re, 1.0, max_relative = 1e-10);
    }

    #[test]
    fn pv_hat_function_closed_form() {
        // hat y(x) = 1 − |x| on [−1, 1], pole at x0:
        // PV = (1+x0)ln(1+x0) − (1−x0)ln(1−x0) − 2 x0 ln x0
        let n = 20001;
        let x: Vec<f64> = (0..n)
            .map(|i| -1.0 + 2.0 * i as f64 / (n - 1) as f64)
            .collect();
        let y: Vec<f64> = x.iter().map(|&v| 1.0 - v.abs()).collect();
        let x0 = 0.3;
        let exact = 1.3f64 * 1.3f64.ln() - 0.7 * 0.7f64.ln() - 0.6 * 0.3f64.ln();
        assert_relative_eq!(exact, 1.3131296871604128, max_relative = 1e-12);
        // the interpolant is exact on this data (nodes include ±1 and 0)
        let got = pv_piecewise_linear(&x, &y, x0);
        assert_relative_eq!(got, exact, max_relative = 1e-6);
    }

    #[test]
    fn pv_on_node_is_nudged_not_nan() {
        let x = [0.0f64, 1.0, 2.0];
        let y = [1.0f64, 1.0, 1.0];
        let v = pv_piecewise_linear(&x, &y, 1.0);
        assert!(v.is_finite());
    }

    #[test]
    fn pv_constant_symmetric_window_vanishes() {
        let x: Vec<f64> = (0..4001).map(|i| -2.0 + i as f64 * 1e-3).collect();
        let y = vec![0.7f64; x.len()];
        // centered pole: the two logarithmic wings cancel exactly
        let v = pv_piecewise_linear(&x, &y, 0.0);
        assert!(v.abs() < 1e-9, "{v}");
    }
}
