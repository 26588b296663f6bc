//! Complex dense linear algebra for the 4-dimensional vectorized
//! density-matrix space: Kronecker lifts, a pivoted solve, a
//! scaling-and-squaring matrix exponential, and a quartic eigensolver
//! (Faddeev–LeVerrier characteristic polynomial + Durand–Kerner roots)
//! with Lagrange spectral projectors for mode amplitudes.
//!
//! Vectorization is column-stacking throughout: vec(ρ) = [ρ00, ρ10, ρ01, ρ11],
//! so A·ρ·B ↦ (Bᵀ ⊗ A)·vec(ρ).

use crate::error::{Error, Result};
use crate::float::{fl, Float, C};
use ndarray::Array2;
use num_complex::Complex;

pub type CMat<T> = Array2<C<T>>;

#[inline]
pub fn czero<T: Float>() -> C<T> {
    Complex::new(T::zero(), T::zero())
}

#[inline]
pub fn cone<T: Float>() -> C<T> {
    Complex::new(T::one(), T::zero())
}

/// Identity matrix.
pub fn eye<T: Float>(n: usize) -> CMat<T> {
    let mut m = Array2::from_elem((n, n), czero::<T>());
    for i in 0..n {
        m[(i, i)] = cone();
    }
    m
}

/// Kronecker product (a ⊗ b).
pub fn kron<T: Float>(a: &CMat<T>, b: &CMat<T>) -> CMat<T> {
    let (ra, ca) = a.dim();
    let (rb, cb) = b.dim();
    let mut out = Array2::from_elem((ra * rb, ca * cb), czero::<T>());
    for i in 0..ra {
        for j in 0..ca {
            for k in 0..rb {
                for l in 0..cb {
                    out[(i * rb + k, j * cb + l)] = a[(i, j)] * b[(k, l)];
                }
            }
        }
    }
    out
}

/// ρ ↦ a·ρ as a superoperator (I ⊗ a).
pub fn lmul<T: Float>(a: &CMat<T>) -> CMat<T> {
    kron(&eye(2), a)
}

/// ρ ↦ ρ·b as a superoperator (bᵀ ⊗ I).
pub fn rmul<T: Float>(b: &CMat<T>) -> CMat<T> {
    kron(&b.t().to_owned(), &eye(2))
}

/// ρ ↦ a·ρ·b as a superoperator (bᵀ ⊗ a).
pub fn sand<T: Float>(a: &CMat<T>, b: &CMat<T>) -> CMat<T> {
    kron(&b.t().to_owned(), a)
}

/// Column-stack a 2×2 matrix.
pub fn vec2<T: Float>(m: &CMat<T>) -> [C<T>; 4] {
    [m[(0, 0)], m[(1, 0)], m[(0, 1)], m[(1, 1)]]
}

/// Inverse of [`vec2`].
pub fn unvec2<T: Float>(v: &[C<T>]) -> CMat<T> {
    debug_assert_eq!(v.len(), 4);
    let mut m = Array2::from_elem((2, 2), czero::<T>());
    m[(0, 0)] = v[0];
    m[(1, 0)] = v[1];
    m[(0, 1)] = v[2];
    m[(1, 1)] = v[3];
    m
}

/// Matrix–vector product.
pub fn matvec<T: Float>(a: &CMat<T>, x: &[C<T>]) -> Vec<C<T>> {
    let (r, c) = a.dim();
    debug_assert_eq!(c, x.len());
    (0..r)
        .map(|i| (0..c).fold(czero::<T>(), |s, j| s + a[(i, j)] * x[j]))
        .collect()
}

/// Solve A x = b by Gaussian elimination with partial pivoting.
pub fn solve<T: Float>(a: &CMat<T>, b: &[C<T>]) -> Result<Vec<C<T>>> {
    let n = b.len();
    let mut m = a.clone();
    let mut x: Vec<C<T>> = b.to_vec();
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| {
                m[(i, col)]
                    .norm_sqr()
                    .partial_cmp(&m[(j, col)].norm_sqr())
                    .unwrap()
            })
            .unwrap();
        if m[(piv, col)].norm_sqr() == T::zero() {
            return Err(Error::DegenerateSteadyState { second: 0.0 });
        }
        if piv != col {
            for j in 0..n {
                let tmp = m[(col, j)];
                m[(col, j)] = m[(piv, j)];
                m[(piv, j)] = tmp;
            }
            x.swap(col, piv);
        }
        let d = m[(col, col)];
        for i in col + 1..n {
            let f = m[(i, col)] / d;
            if f.norm_sqr() == T::zero() {
                continue;
            }
            for j in col..n {
                let v = m[(col, j)];
                m[(i, j)] -= f * v;
            }
            let xc = x[col];
            x[i] -= f * xc;
        }
    }
    for col in (0..n).rev() {
        let mut s = x[col];
        for j in col + 1..n {
            s -= m[(col, j)] * x[j];
        }
        x[col] = s / m[(col, col)];
    }
    Ok(x)
}

/// Max absolute column sum.
pub fn one_norm<T: Float>(a: &CMat<T>) -> T {
    let (r, c) = a.dim();
    let mut best = T::zero();
    for j in 0..c {
        let mut s = T::zero();
        for i in 0..r {
            s += a[(i, j)].norm();
        }
        if s > best {
            best = s;
        }
    }
    best
}

/// Matrix exponential by scaling-and-squaring with a Taylor core.
pub fn expm<T: Float>(a: &CMat<T>) -> CMat<T> {
    let n = a.dim().0;
    let norm = one_norm(a);
    // scale so the Taylor argument has norm ≤ 0.5
    let mut s: i32 = 0;
    let half = fl::<T>(0.5);
    let mut scaled_norm = norm;
    while scaled_norm > half {
        scaled_norm *= half;
        s += 1;
    }
    let scale = Complex::new(fl::<T>(0.5f64.powi(s)), T::zero());
    let asc = a.mapv(|v| v * scale);

    let mut sum = eye::<T>(n);
    let mut term = eye::<T>(n);
    for k in 1..=64 {
        term = term.dot(&asc);
        let kk = Complex::new(fl::<T>(k as f64), T::zero());
        term.mapv_inplace(|v| v / kk);
        sum = &sum + &term;
        if one_norm(&term) < fl::<T>(1e-20) * one_norm(&sum) {
            break;
        }
    }
    for _ in 0..s {
        sum = sum.dot(&sum);
    }
    sum
}

/// Monic characteristic polynomial of a 4×4 matrix by Faddeev–LeVerrier:
/// λ⁴ + c[0]λ³ + c[1]λ² + c[2]λ + c[3].
pub fn charpoly4<T: Float>(a: &CMat<T>) -> [C<T>; 4] {
    let tr = |m: &CMat<T>| (0..4).fold(czero::<T>(), |s, i| s + m[(i, i)]);
    let id = eye::<T>(4);
    let mut c = [czero::<T>(); 4];
    let mut m = a.clone();
    c[0] = -tr(&m);
    for k in 2..=4usize {
        let adj = &m + &id.mapv(|v| v * c[k - 2]);
        m = a.dot(&adj);
        c[k - 1] = -tr(&m) / Complex::new(fl::<T>(k as f64), T::zero());
    }
    c
}

fn poly_eval<T: Float>(c: &[C<T>; 4], z: C<T>) -> C<T> {
    (((z + c[0]) * z + c[1]) * z + c[2]) * z + c[3]
}

fn poly_deriv<T: Float>(c: &[C<T>; 4], z: C<T>) -> C<T> {
    let four = Complex::new(fl::<T>(4.0), T::zero());
    let three = Complex::new(fl::<T>(3.0), T::zero());
    let two = Complex::new(fl::<T>(2.0), T::zero());
    ((four * z + c[0] * three) * z + c[1] * two) * z + c[2]
}

/// All four eigenvalues of a 4×4 matrix: Durand–Kerner on the
/// characteristic polynomial, finished with a few Newton steps.
pub fn eig4<T: Float>(a: &CMat<T>) -> [C<T>; 4] {
    let c = charpoly4(a);
    let radius = T::one()
        + c.iter()
            .map(|v| v.norm())
            .fold(T::zero(), |m, v| if v > m { v } else { m });
    let seed = Complex::new(fl::<T>(0.4), fl::<T>(0.9));
    let mut z = [czero::<T>(); 4];
    let mut p = Complex::new(radius, T::zero());
    for zi in z.iter_mut() {
        p *= seed;
        *zi = p;
    }
    let tol = fl::<T>(1e-30) * radius;
    for _ in 0..240 {
        let mut moved = T::zero();
        for i in 0..4 {
            let mut den = cone::<T>();
            for j in 0..4 {
                if i != j {
                    den *= z[i] - z[j];
                }
            }
            if den.norm_sqr() == T::zero() {
                continue;
            }
            let step = poly_eval(&c, z[i]) / den;
            z[i] -= step;
            if step.norm() > moved {
                moved = step.norm();
            }
        }
        if moved < tol {
            break;
        }
    }
    // Newton polish (skipped where p' underflows, e.g. exactly repeated roots)
    for zi in z.iter_mut() {
        for _ in 0..4 {
            let d = poly_deriv(&c, *zi);
            if d.norm() < fl::<T>(1e-280) {
                break;
            }
            *zi -= poly_eval(&c, *zi) / d;
        }
    }
    z
}

/// Spectral mode amplitudes: for u (row), w (column) and each eigenvalue λ_j,
/// a_j = u · P_j · w with the Lagrange projector P_j = Π_{k≠j}(A−λ_k)/(λ_j−λ_k),
/// so that u·e^{Aτ}·w = Σ_j a_j e^{λ_j τ} for diagonalizable A.
///
/// Errors out when eigenvalues cluster (projectors ill-conditioned); callers
/// fall back to direct time stepping.
pub fn mode_amplitudes<T: Float>(
    a: &CMat<T>,
    u: &[C<T>; 4],
    w: &[C<T>; 4],
    lam: &[C<T>; 4],
) -> Result<[C<T>; 4]> {
    let scale = lam
        .iter()
        .map(|v| v.norm())
        .fold(T::zero(), |m, v| if v > m { v } else { m })
        .max(T::one());
    let mut amps = [czero::<T>(); 4];
    for j in 0..4 {
        let mut v = w.to_vec();
        let mut den = cone::<T>();
        for k in 0..4 {
            if k == j {
                continue;
            }
            let gap = lam[j] - lam[k];
            if gap.norm() < fl::<T>(1e-9) * scale {
                return Err(Error::DegenerateModes {
                    gap: gap.norm().to_f64().unwrap_or(0.0),
                });
            }
            // v ← (A − λ_k I)·v
            let av = matvec(a, &v);
            for (vi, avi) in v.iter_mut().zip(av) {
                *vi = avi - lam[k] * *vi;
            }
            den *= gap;
        }
        let mut s = czero::<T>();
        for i in 0..4 {
            s += u[i] * v[i];
        }
        amps[j] = s / den;
    }
    Ok(amps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::{rngs::StdRng, Rng, SeedableRng};

    fn c64(re: f64, im: f64) -> C<f64> {
        Complex::new(re, im)
    }

    fn random_mat(rng: &mut StdRng, n: usize) -> CMat<f64> {
        Array2::from_shape_fn((n, n), |_| {
            c64(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
        })
    }

    #[test]
    fn sandwich_matches_direct_product() {
        let mut rng = StdRng::seed_from_u64(11);
        for _ in 0..20 {
            let a = random_mat(&mut rng, 2);
            let b = random_mat(&mut rng, 2);
            let r = random_mat(&mut rng, 2);
            let direct = a.dot(&r).dot(&b);
            let lifted = matvec(&sand(&a, &b), &vec2(&r));
            for (d, l) in vec2(&direct).iter().zip(&lifted) {
                assert_relative_eq!(d.re, l.re, epsilon = 1e-13);
                assert_relative_eq!(d.im, l.im, epsilon = 1e-13);
            }
        }
    }

    #[test]
    fn lmul_rmul_match_products() {
        let mut rng = StdRng::seed_from_u64(12);
        let a = random_mat(&mut rng, 2);
        let r = random_mat(&mut rng, 2);
        let left = matvec(&lmul(&a), &vec2(&r));
        let right = matvec(&rmul(&a), &vec2(&r));
        for (i, (l, rr)) in vec2(&a.dot(&r)).iter().zip(vec2(&r.dot(&a))).enumerate() {
            assert_relative_eq!(l.re, left[i].re, epsilon = 1e-13);
            assert_relative_eq!(rr.im, right[i].im, epsilon = 1e-13);
        }
    }

    #[test]
    fn solve_recovers_solution() {
        let mut rng = StdRng::seed_from_u64(13);
        for _ in 0..20 {
            let a = random_mat(&mut rng, 4);
            let x: Vec<_> = (0..4)
                .map(|_| c64(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
                .collect();
            let b = matvec(&a, &x);
            let got = solve(&a, &b).unwrap();
            for (g, e) in got.iter().zip(&x) {
                assert_relative_eq!(g.re, e.re, epsilon = 1e-10);
                assert_relative_eq!(g.im, e.im, epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn expm_nilpotent_and_diagonal() {
        // e^N = I + N for N² = 0
        let mut n = Array2::from_elem((2, 2), c64(0.0, 0.0));
        n[(0, 1)] = c64(0.7, -0.2);
        let e = expm(&n);
        assert_relative_eq!(e[(0, 0)].re, 1.0, epsilon = 1e-14);
        assert_relative_eq!(e[(0, 1)].re, 0.7, epsilon = 1e-14);
        assert_relative_eq!(e[(0, 1)].im, -0.2, epsilon = 1e-14);
        // diagonal with a large imaginary entry: phase must stay on the circle
        let mut d = Array2::from_elem((2, 2), c64(0.0, 0.0));
        d[(0, 0)] = c64(0.0, -8000.0);
        d[(1, 1)] = c64(-3.0, 0.0);
        let ed = expm(&d);
        assert_relative_eq!(ed[(0, 0)].norm(), 1.0, epsilon = 1e-9);
        assert_relative_eq!(ed[(0, 0)].re, (-8000.0f64).cos(), epsilon = 1e-8);
        assert_relative_eq!(ed[(1, 1)].re, (-3.0f64).exp(), epsilon = 1e-12);
    }

    #[test]
    fn eig4_recovers_constructed_spectrum() {
        let mut rng = StdRng::seed_from_u64(14);
        let lam_true = [
            c64(0.0, 0.0),
            c64(-0.051, 0.0),
            c64(-0.15, 0.56),
            c64(-0.15, -0.56),
        ];
        // A = V D V⁻¹
        let v = random_mat(&mut rng, 4);
        let mut d = Array2::from_elem((4, 4), c64(0.0, 0.0));
        for i in 0..4 {
            d[(i, i)] = lam_true[i];
        }
        // V⁻¹ column by column
        let mut vinv = Array2::from_elem((4, 4), c64(0.0, 0.0));
        for j in 0..4 {
            let mut e = [c64(0.0, 0.0); 4];
            e[j] = c64(1.0, 0.0);
            let col = solve(&v, &e).unwrap();
            for i in 0..4 {
                vinv[(i, j)] = col[i];
            }
        }
        let a = v.dot(&d).dot(&vinv);
        let mut got = eig4(&a).to_vec();
        for t in lam_true {
            let (i, _) = got
                .iter()
                .enumerate()
                .min_by(|(_, x), (_, y)| (*x - t).norm().partial_cmp(&(*y - t).norm()).unwrap())
                .unwrap();
            assert!((got[i] - t).norm() < 1e-9, "missing eigenvalue {t}");
            got.remove(i);
        }
    }

    #[test]
    fn mode_amplitudes_diagonal_case() {
        let mut d = Array2::from_elem((4, 4), c64(0.0, 0.0));
        let lam = [
            c64(-0.1, 0.3),
            c64(-0.2, 0.0),
            c64(-0.3, -0.4),
            c64(-0.4, 0.1),
        ];
        for i in 0..4 {
            d[(i, i)] = lam[i];
        }
        let u = [c64(1.0, 0.0), c64(0.0, 1.0), c64(2.0, 0.0), c64(0.0, -1.0)];
        let w = [c64(0.5, 0.0), c64(1.5, 0.0), c64(-0.5, 0.5), c64(1.0, 1.0)];
        let amps = mode_amplitudes(&d, &u, &w, &lam).unwrap();
        for i in 0..4 {
            let expect = u[i] * w[i];
            assert_relative_eq!(amps[i].re, expect.re, epsilon = 1e-12);
            assert_relative_eq!(amps[i].im, expect.im, epsilon = 1e-12);
        }
    }

    #[test]
    fn mode_amplitudes_flags_clusters() {
        let mut d = Array2::from_elem((4, 4), c64(0.0, 0.0));
        let lam = [
            c64(-0.1, 0.0),
            c64(-0.1, 0.0),
            c64(-0.3, 0.0),
            c64(-0.4, 0.0),
        ];
        for i in 0..4 {
            d[(i, i)] = lam[i];
        }
        let u = [c64(1.0, 0.0); 4];
        assert!(mode_amplitudes(&d, &u, &u, &lam).is_err());
    }
}
