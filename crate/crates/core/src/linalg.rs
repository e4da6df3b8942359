//! Fixed-size 2×2 complex linear algebra.
//!
//! Everything in this crate lives in a two-mode space, so the handful of
//! operations needed (products, inverses, exponentials, eigenpairs,
//! Cholesky factors) are written out in closed form.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

pub type C64 = Complex64;

/// A complex 2-vector.
pub type Vec2 = [C64; 2];

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// Row-major 2×2 complex matrix.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Mat2(pub [[C64; 2]; 2]);

impl Mat2 {
    pub const fn new(a: C64, b: C64, c: C64, d: C64) -> Self {
        Mat2([[a, b], [c, d]])
    }

    pub const fn zero() -> Self {
        Mat2([[ZERO, ZERO], [ZERO, ZERO]])
    }

    pub const fn identity() -> Self {
        Mat2([[ONE, ZERO], [ZERO, ONE]])
    }

    pub fn diag(a: C64, d: C64) -> Self {
        Mat2::new(a, ZERO, ZERO, d)
    }

    pub fn real_diag(a: f64, d: f64) -> Self {
        Mat2::diag(C64::new(a, 0.0), C64::new(d, 0.0))
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.0[i][j]
    }

    pub fn trace(&self) -> C64 {
        self.0[0][0] + self.0[1][1]
    }

    pub fn det(&self) -> C64 {
        self.0[0][0] * self.0[1][1] - self.0[0][1] * self.0[1][0]
    }

    pub fn conj(&self) -> Self {
        self.map(|z| z.conj())
    }

    pub fn transpose(&self) -> Self {
        let m = &self.0;
        Mat2::new(m[0][0], m[1][0], m[0][1], m[1][1])
    }

    pub fn adjoint(&self) -> Self {
        self.transpose().conj()
    }

    pub fn scale(&self, s: C64) -> Self {
        self.map(|z| z * s)
    }

    pub fn scale_re(&self, s: f64) -> Self {
        self.map(|z| z * s)
    }

    pub fn map(&self, f: impl Fn(C64) -> C64) -> Self {
        let m = &self.0;
        Mat2::new(f(m[0][0]), f(m[0][1]), f(m[1][0]), f(m[1][1]))
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.0.iter().flatten().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flatten().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn inverse(&self) -> Option<Self> {
        let det = self.det();
        if det == ZERO || !(det.re.is_finite() && det.im.is_finite()) {
            return None;
        }
        let m = &self.0;
        let inv = det.inv();
        Some(Mat2::new(m[1][1] * inv, -m[0][1] * inv, -m[1][0] * inv, m[0][0] * inv))
    }

    pub fn mul_vec(&self, v: &Vec2) -> Vec2 {
        let m = &self.0;
        [m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]]
    }

    /// Largest elementwise distance to the conjugate transpose.
    pub fn hermitian_defect(&self) -> f64 {
        (*self - self.adjoint()).max_abs()
    }

    /// Averages with the conjugate transpose.
    pub fn hermitian_part(&self) -> Self {
        (*self + self.adjoint()).scale_re(0.5)
    }

    /// Eigenvalues of a Hermitian matrix, ascending.
    pub fn hermitian_eigenvalues(&self) -> [f64; 2] {
        let a = self.0[0][0].re;
        let d = self.0[1][1].re;
        let b = self.0[0][1];
        let mean = 0.5 * (a + d);
        let r = (0.25 * (a - d).powi(2) + b.norm_sqr()).sqrt();
        [mean - r, mean + r]
    }

    /// Eigenvalues `mean - s`, `mean + s` with `s = sqrt(mean² - det)`.
    pub fn eigenvalues(&self) -> [C64; 2] {
        let (mean, s) = self.centered_split();
        [mean + s, mean - s]
    }

    fn centered_split(&self) -> (C64, C64) {
        let mean = self.trace() * 0.5;
        let m = &self.0;
        // (a-d)²/4 + bc, which avoids the cancellation in mean² - det
        let half_diff = (m[0][0] - m[1][1]) * 0.5;
        let s = (half_diff * half_diff + m[0][1] * m[1][0]).sqrt();
        (mean, s)
    }

    /// `exp(self · t)`.
    ///
    /// Uses `exp(A) = e^μ [cosh(s) I + sinh(s)/s (A - μ I)]` where `μ` is the
    /// mean eigenvalue and `±s` the half-gap. This is the two-projector
    /// spectral form written without dividing by the eigenvalue gap; close to
    /// coalescence `sinh(s)/s` falls back to its Taylor series, which is the
    /// Jordan (defective) limit.
    pub fn expm(&self, t: f64) -> Self {
        let h = self.scale_re(t);
        let (mu, s) = h.centered_split();
        let centered = h - Mat2::identity().scale(mu);
        let (c, sh) = if s.norm() < 1e-3 {
            let s2 = s * s;
            let e = mu.exp();
            let cosh = ONE + s2 * (0.5 + s2 * (1.0 / 24.0 + s2 / 720.0));
            let sinhc = ONE + s2 * (1.0 / 6.0 + s2 * (1.0 / 120.0 + s2 / 5040.0));
            (e * cosh, e * sinhc)
        } else {
            let ep = (mu + s).exp();
            let em = (mu - s).exp();
            ((ep + em) * 0.5, (ep - em) / (s * 2.0))
        };
        Mat2::identity().scale(c) + centered.scale(sh)
    }

    /// Lower-triangular `L` with `L L† = self` for a Hermitian positive
    /// semi-definite matrix. Tiny negative round-off on the pivots is clamped.
    pub fn cholesky_psd(&self) -> Self {
        let p11 = self.0[0][0].re.max(0.0);
        let p21 = self.0[1][0];
        let p22 = self.0[1][1].re;
        let l11 = p11.sqrt();
        let scale = p11.max(p22.abs()).max(f64::MIN_POSITIVE);
        if l11 > 1e-150 && p11 > 1e-15 * scale {
            let l21 = p21 / l11;
            let l22 = (p22 - l21.norm_sqr()).max(0.0).sqrt();
            Mat2::new(C64::new(l11, 0.0), ZERO, l21, C64::new(l22, 0.0))
        } else {
            Mat2::new(ZERO, ZERO, ZERO, C64::new(p22.max(0.0).sqrt(), 0.0))
        }
    }
}

impl Add for Mat2 {
    type Output = Mat2;
    fn add(self, o: Mat2) -> Mat2 {
        let (a, b) = (&self.0, &o.0);
        Mat2::new(a[0][0] + b[0][0], a[0][1] + b[0][1], a[1][0] + b[1][0], a[1][1] + b[1][1])
    }
}

impl Sub for Mat2 {
    type Output = Mat2;
    fn sub(self, o: Mat2) -> Mat2 {
        let (a, b) = (&self.0, &o.0);
        Mat2::new(a[0][0] - b[0][0], a[0][1] - b[0][1], a[1][0] - b[1][0], a[1][1] - b[1][1])
    }
}

impl Neg for Mat2 {
    type Output = Mat2;
    fn neg(self) -> Mat2 {
        self.map(|z| -z)
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, o: Mat2) -> Mat2 {
        let (a, b) = (&self.0, &o.0);
        Mat2::new(
            a[0][0] * b[0][0] + a[0][1] * b[1][0],
            a[0][0] * b[0][1] + a[0][1] * b[1][1],
            a[1][0] * b[0][0] + a[1][1] * b[1][0],
            a[1][0] * b[0][1] + a[1][1] * b[1][1],
        )
    }
}

/// `e^z - 1` without cancellation for small `|z|`.
pub fn expm1(z: C64) -> C64 {
    let half = (0.5 * z.im).sin();
    C64::new(z.re.exp_m1() * z.im.cos() - 2.0 * half * half, z.re.exp() * z.im.sin())
}

/// Dense real linear solve with partial pivoting; `None` when a pivot falls
/// below `tol` times the largest entry of the matrix.
pub fn solve_real<const N: usize>(mut a: [[f64; N]; N], mut b: [f64; N], tol: f64) -> Option<[f64; N]> {
    let scale = a.iter().flatten().fold(0.0_f64, |m, x| m.max(x.abs()));
    if scale == 0.0 || !scale.is_finite() {
        return None;
    }
    for col in 0..N {
        let pivot = (col..N)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap();
        if a[pivot][col].abs() <= tol * scale {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..N {
            let f = a[row][col] / a[col][col];
            if f != 0.0 {
                let pivot = a[col];
                for (x, p) in a[row].iter_mut().zip(pivot).skip(col) {
                    *x -= f * p;
                }
                b[row] -= f * b[col];
            }
        }
    }
    let mut x = [0.0; N];
    for row in (0..N).rev() {
        let tail: f64 = (row + 1..N).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - tail) / a[row][row];
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn taylor_expm(a: &Mat2, t: f64) -> Mat2 {
        // scaling and squaring on a plain Taylor series
        let squarings = 6;
        let h = a.scale_re(t / f64::from(1u32 << squarings));
        let mut term = Mat2::identity();
        let mut sum = Mat2::identity();
        for k in 1..30 {
            term = (term * h).scale_re(1.0 / k as f64);
            sum = sum + term;
        }
        for _ in 0..squarings {
            sum = sum * sum;
        }
        sum
    }

    #[test]
    fn expm_matches_taylor_reference() {
        let a = Mat2::new(c(-1.0, 0.0), c(0.0, -0.7), c(0.0, -0.7), c(-2.0, 0.0));
        let got = a.expm(1.3);
        let want = taylor_expm(&a, 1.3);
        assert!((got - want).norm() < 1e-12 * want.norm(), "{got:?} {want:?}");
    }

    #[test]
    fn expm_at_exact_coalescence_is_jordan_form() {
        // eigenvalue -1.5 with a single eigenvector
        let a = Mat2::new(c(-1.0, 0.0), c(0.0, -0.5), c(0.0, -0.5), c(-2.0, 0.0));
        let (_, s) = a.centered_split();
        assert!(s.norm() < 1e-12);
        let t = 0.8;
        let n = a - Mat2::identity().scale_re(-1.5);
        let want = (Mat2::identity() + n.scale_re(t)).scale_re((-1.5 * t).exp());
        assert!((a.expm(t) - want).norm() < 1e-14);
    }

    #[test]
    fn expm_is_continuous_across_series_switch() {
        for delta in [1e-6, 1e-4, 9.99e-4, 1.001e-3, 1e-2] {
            let a = Mat2::new(c(-1.0, 0.0), c(0.0, -0.5 - delta), c(0.0, -0.5 - delta), c(-2.0, 0.0));
            let got = a.expm(1.0);
            let want = taylor_expm(&a, 1.0);
            assert!((got - want).norm() < 1e-13, "delta {delta} {}", (got - want).norm());
        }
    }

    #[test]
    fn inverse_roundtrip() {
        let a = Mat2::new(c(1.0, 2.0), c(-0.5, 0.1), c(0.3, 0.0), c(2.0, -1.0));
        let inv = a.inverse().unwrap();
        assert!((a * inv - Mat2::identity()).norm() < 1e-15);
        assert!(Mat2::zero().inverse().is_none());
    }

    #[test]
    fn cholesky_reconstructs_and_handles_zero_pivot() {
        let p = Mat2::new(c(2.0, 0.0), c(0.5, -0.3), c(0.5, 0.3), c(1.0, 0.0));
        let l = p.cholesky_psd();
        assert!((l * l.adjoint() - p).norm() < 1e-15);
        let q = Mat2::real_diag(0.0, 4.0);
        let l = q.cholesky_psd();
        assert!((l * l.adjoint() - q).norm() == 0.0);
    }

    #[test]
    fn expm1_small_argument() {
        let z = c(1e-10, -2e-10);
        let got = expm1(z);
        let want = z + z * z * 0.5;
        assert!((got - want).norm() < 1e-24);
        let z = c(-0.3, 2.0);
        assert!((expm1(z) - (z.exp() - 1.0)).norm() < 1e-15);
    }

    #[test]
    fn solve_real_matches_known_solution() {
        let a = [[0.0, 2.0, 1.0], [1.0, 1.0, 0.0], [3.0, 0.0, 1.0]];
        let x = [1.0, -2.0, 0.5];
        let b = [2.0 * x[1] + x[2], x[0] + x[1], 3.0 * x[0] + x[2]];
        let got = solve_real(a, b, 1e-14).unwrap();
        for k in 0..3 {
            assert!((got[k] - x[k]).abs() < 1e-14);
        }
        assert!(solve_real([[1.0, 2.0], [2.0, 4.0]], [1.0, 1.0], 1e-14).is_none());
    }
}
