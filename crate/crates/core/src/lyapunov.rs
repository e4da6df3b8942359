//! Stationary second moments of the linear Langevin system and the
//! resolvent form of its spectrum.
//!
//! Conventions: `C = <a* aᵀ>` (so `C_ij = <a_i* a_j>`), the two-time matrix
//! is `<a*(t+τ) aᵀ(t)>`, and the spectrum is its Fourier transform with
//! kernel `exp(-iωτ) / 2π`. Under these conventions `C` solves
//! `M* C + C Mᵀ + 2D = 0`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::linalg::{solve_real, Mat2, C64, I, ONE, ZERO};
use crate::model::LinearSystem;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StationaryCovariance {
    /// `<a_i* a_j>` in the stationary state. `Im c[0][1]` is the stationary
    /// flow indicator from oscillator 1 to oscillator 2.
    pub c: Mat2,
}

impl StationaryCovariance {
    pub fn flow_indicator(&self) -> f64 {
        self.c.get(0, 1).im
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoTimeCorrelator {
    pub lag: f64,
    pub value: Mat2,
}

/// Hermitian coordinates `(h11, h22, Re h12, Im h12)`.
fn coords(h: &Mat2) -> [f64; 4] {
    [h.get(0, 0).re, h.get(1, 1).re, h.get(0, 1).re, h.get(0, 1).im]
}

fn from_coords(x: &[f64; 4]) -> Mat2 {
    let off = C64::new(x[2], x[3]);
    Mat2::new(C64::new(x[0], 0.0), off, off.conj(), C64::new(x[1], 0.0))
}

fn lyapunov_map(drift: &Mat2, h: &Mat2) -> Mat2 {
    drift.conj() * *h + *h * drift.transpose()
}

/// Solves `M* C + C Mᵀ + 2D = 0` over Hermitian `C`.
///
/// The map `C ↦ M* C + C Mᵀ` sends Hermitian matrices to Hermitian
/// matrices, so the problem is a real 4×4 system in the coordinates
/// `(c11, c22, Re c12, Im c12)`.
pub fn stationary_covariance(system: &LinearSystem) -> Result<StationaryCovariance> {
    system.ensure_stable()?;
    let basis = [
        Mat2::new(ONE, ZERO, ZERO, ZERO),
        Mat2::new(ZERO, ZERO, ZERO, ONE),
        Mat2::new(ZERO, ONE, ONE, ZERO),
        Mat2::new(ZERO, I, -I, ZERO),
    ];
    let mut a = [[0.0; 4]; 4];
    for (k, h) in basis.iter().enumerate() {
        let col = coords(&lyapunov_map(&system.drift, h));
        for row in 0..4 {
            a[row][k] = col[row];
        }
    }
    let rhs = coords(&system.diffusion.hermitian_part().scale_re(-2.0));
    let x = solve_real(a, rhs, 1e-14).ok_or(Error::Singular("stationary covariance"))?;
    Ok(StationaryCovariance { c: from_coords(&x) })
}

/// `(‖M* C + C Mᵀ + 2D‖, ‖M‖‖C‖ + ‖D‖)` in the Frobenius norm.
pub fn lyapunov_residual(system: &LinearSystem, c: &Mat2) -> (f64, f64) {
    let r = lyapunov_map(&system.drift, c) + system.diffusion.scale_re(2.0);
    (r.norm(), system.drift.norm() * c.norm() + system.diffusion.norm())
}

/// `(1/π) (M* - iωI)⁻¹ D (Mᵀ + iωI)⁻¹`.
///
/// For a stable drift both factors are invertible at every real ω; for an
/// unstable one the result may be non-finite.
pub fn spectrum_resolvent(system: &LinearSystem, freq: f64) -> Mat2 {
    let iw = Mat2::identity().scale(C64::new(0.0, freq));
    let left = (system.drift.conj() - iw).inverse();
    let right = (system.drift.transpose() + iw).inverse();
    match (left, right) {
        (Some(l), Some(r)) => (l * system.diffusion * r).scale_re(1.0 / PI),
        _ => Mat2::zero().map(|_| C64::new(f64::NAN, f64::NAN)),
    }
}

/// `<a*(t+τ) aᵀ(t)>` in the stationary state:
/// `exp(M* τ) C` for τ ≥ 0 and `C exp(-Mᵀ τ)` for τ < 0.
pub fn two_time_correlator(system: &LinearSystem, c_st: &StationaryCovariance, lag: f64) -> TwoTimeCorrelator {
    let value = if lag >= 0.0 {
        system.drift.conj().expm(lag) * c_st.c
    } else {
        c_st.c * system.drift.transpose().expm(-lag)
    };
    TwoTimeCorrelator { lag, value }
}

/// `∫ S(ω) dω` over `[-half_width, half_width]` by composite Simpson with
/// `intervals` panels. Approaches `C` as the window widens.
pub fn integrated_spectrum(system: &LinearSystem, half_width: f64, intervals: usize) -> Mat2 {
    let n = (intervals + intervals % 2).max(2);
    let h = 2.0 * half_width / n as f64;
    let f = |k: usize| spectrum_resolvent(system, -half_width + h * k as f64);
    let mut acc = f(0) + f(n);
    for k in 1..n {
        acc = acc + f(k).scale_re(if k % 2 == 1 { 4.0 } else { 2.0 });
    }
    acc.scale_re(h / 3.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic;
    use crate::model::{build_system, OscillatorPairParams, ValidatedParams};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn params(g1: f64, g2: f64, om: f64, t1: f64, t2: f64) -> ValidatedParams {
        OscillatorPairParams::new(g1, g2, om, t1, t2).validate().unwrap()
    }

    fn random_params(rng: &mut ChaCha8Rng) -> ValidatedParams {
        let g1 = 10f64.powf(rng.random_range(-4.0..-2.0));
        let g2 = 10f64.powf(rng.random_range(-4.0..-2.0));
        let om = rng.random_range(0.0..1e-2);
        let t1 = rng.random_range(0.0..3.0);
        let t2 = rng.random_range(0.01..3.0);
        params(g1, g2, om, t1, t2)
    }

    #[test]
    fn decoupled_covariance_is_temperature() {
        let sys = build_system(&params(1e-3, 2e-3, 0.0, 1.7, 0.3));
        let c = stationary_covariance(&sys).unwrap().c;
        assert!((c - Mat2::real_diag(1.7, 0.3)).norm() < 1e-14);
    }

    #[test]
    fn equilibrium_covariance_is_scalar() {
        let sys = build_system(&params(1e-3, 1e-3, 2e-3, 0.6, 0.6));
        let st = stationary_covariance(&sys).unwrap();
        assert!((st.c - Mat2::real_diag(0.6, 0.6)).norm() < 1e-14);
        assert!(st.flow_indicator().abs() < 1e-16);
    }

    #[test]
    fn stationary_flow_runs_from_hot_to_cold() {
        let sys = build_system(&params(1e-3, 2e-3, 1e-3, 0.0, 1.0));
        let st = stationary_covariance(&sys).unwrap();
        assert!(st.flow_indicator() > 0.0);
        let sys = build_system(&params(1e-3, 2e-3, 1e-3, 1.0, 0.0));
        assert!(stationary_covariance(&sys).unwrap().flow_indicator() < 0.0);
    }

    #[test]
    fn unstable_system_is_rejected() {
        let drift = Mat2::real_diag(1e-3, -1e-3);
        let sys = LinearSystem::new(drift, Mat2::real_diag(1.0, 1.0));
        assert!(matches!(stationary_covariance(&sys), Err(Error::Unstable(_))));
    }

    #[test]
    fn residual_small_on_random_systems() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..1000 {
            let sys = build_system(&random_params(&mut rng));
            let c = stationary_covariance(&sys).unwrap().c;
            let (res, scale) = lyapunov_residual(&sys, &c);
            assert!(res <= 1e-12 * scale, "{res} vs {scale}");
            assert!(c.hermitian_defect() == 0.0);
            assert!(c.hermitian_eigenvalues()[0] >= -1e-12 * c.norm());
        }
    }

    #[test]
    fn resolvent_special_values() {
        let sys = build_system(&params(1e-3, 2e-3, 0.0, 1.0, 2.0));
        let s = spectrum_resolvent(&sys, 0.0);
        let want = Mat2::real_diag(1.0 / (PI * 1e-3), 2.0 / (PI * 2e-3));
        assert!((s - want).norm() < 1e-12 * want.norm());

        let cold = LinearSystem::new(sys.drift, Mat2::zero());
        assert_eq!(spectrum_resolvent(&cold, 1e-3).norm(), 0.0);
    }

    #[test]
    fn resolvent_matches_closed_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let p = random_params(&mut rng);
            let sys = build_system(&p);
            let w = rng.random_range(-2e-2..2e-2);
            let a = spectrum_resolvent(&sys, w);
            let b = analytic::spectrum_matrix(&p, w);
            let scale = b.max_abs();
            assert!((a - b).max_abs() <= 1e-10 * scale, "{:?} {w} {a:?} {b:?}", p);
        }
    }

    #[test]
    fn reference_values_at_critical_coupling() {
        // S11(0) for T1 = T2 = 1 and J(0) for T1 = 0, T2 = 1 at Ω = Ω_cr
        let cr = 2.5e-6f64.sqrt();
        let sys = build_system(&params(1e-3, 2e-3, cr, 1.0, 1.0));
        let s11 = spectrum_resolvent(&sys, 0.0).get(0, 0).re;
        assert!((s11 - 141.47106052612918).abs() < 1e-9 * s11, "{s11}");
        let sys = build_system(&params(1e-3, 2e-3, cr, 0.0, 1.0));
        let flow = spectrum_resolvent(&sys, 0.0).get(0, 1).im;
        assert!((flow - 49.70786380690078).abs() < 1e-9 * flow, "{flow}");
    }

    #[test]
    fn correlator_limits() {
        let p = params(1e-3, 2e-3, 0.0, 1.3, 0.5);
        let sys = build_system(&p);
        let st = stationary_covariance(&sys).unwrap();
        assert_eq!(two_time_correlator(&sys, &st, 0.0).value, st.c);
        for tau in [-700.0, -10.0, 25.0, 1500.0] {
            let g = two_time_correlator(&sys, &st, tau).value;
            let want = 1.3 * (-1e-3 * f64::abs(tau)).exp();
            assert!((g.get(0, 0).re - want).abs() < 1e-14);
        }
        let far = two_time_correlator(&sys, &st, 1e5).value;
        assert!(far.norm() < 1e-30);
    }

    fn simpson(f: impl Fn(f64) -> Mat2, a: f64, b: f64, n: usize) -> Mat2 {
        let n = n + n % 2;
        let h = (b - a) / n as f64;
        let mut acc = f(a) + f(b);
        for k in 1..n {
            let w = if k % 2 == 1 { 4.0 } else { 2.0 };
            acc = acc + f(a + h * k as f64).scale_re(w);
        }
        acc.scale_re(h / 3.0)
    }

    #[test]
    fn correlator_transform_reproduces_resolvent() {
        let p = params(1e-3, 2e-3, 1.2e-3, 0.0, 1.0);
        let sys = build_system(&p);
        let st = stationary_covariance(&sys).unwrap();
        let cr = analytic::omega_cr(&p);
        let span = 50.0 / 1e-3;
        for w in [0.0, cr, -cr] {
            let integrand = |tau: f64| {
                let g = two_time_correlator(&sys, &st, tau).value;
                g.scale(C64::new(0.0, -w * tau).exp())
            };
            // split at the kink τ = 0
            let s = (simpson(integrand, -span, 0.0, 200_000) + simpson(integrand, 0.0, span, 200_000))
                .scale_re(1.0 / (2.0 * PI));
            let want = spectrum_resolvent(&sys, w);
            for (i, j) in [(0, 0), (1, 1), (0, 1)] {
                let d = (s.get(i, j) - want.get(i, j)).norm();
                assert!(d <= 0.01 * want.get(i, j).norm(), "ω={w} ({i},{j})");
            }
        }
    }

    #[test]
    fn wiener_khinchin_closure() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let p = random_params(&mut rng);
            let sys = build_system(&p);
            let c = stationary_covariance(&sys).unwrap().c;
            let width = 200.0 * p.max_rate();
            let int = integrated_spectrum(&sys, width, 400_000);
            for (i, j) in [(0, 0), (1, 1)] {
                let want = c.get(i, j).re;
                assert!((int.get(i, j).re - want).abs() <= 0.01 * want, "{i}{j}");
            }
        }
    }
}
