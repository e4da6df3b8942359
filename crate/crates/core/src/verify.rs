//! Self-consistency checks between independent routes to the same numbers.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::analytic::{energy_flow, spectrum_matrix};
use crate::config::Resolved;
use crate::criticality::{temperature_ratio_invariance, SweepSettings};
use crate::error::Result;
use crate::lyapunov::{integrated_spectrum, lyapunov_residual, spectrum_resolvent, stationary_covariance};
use crate::model::{build_system, OscillatorPairParams, ValidatedParams};
use crate::sde::ensemble_run;
use crate::spectral::{ensemble_flow, ensemble_spectrum, FlowEstimator, Periodogram, Window};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub value: f64,
    pub tolerance: f64,
}

impl CheckResult {
    fn at_most(name: &'static str, value: f64, tolerance: f64) -> Self {
        CheckResult {
            name,
            passed: value <= tolerance,
            value,
            tolerance,
        }
    }
}

/// Log-uniform rates in `[1e-4, 1e-2]`, coupling in `[0, 1e-2]`, `T1 ∈ [0, 3]`,
/// `T2 ∈ [0.01, 3]`.
pub fn random_params(rng: &mut ChaCha8Rng) -> ValidatedParams {
    let g1 = 10f64.powf(rng.random_range(-4.0..-2.0));
    let g2 = 10f64.powf(rng.random_range(-4.0..-2.0));
    let om = rng.random_range(0.0..1e-2);
    let t1 = rng.random_range(0.0..3.0);
    let t2 = rng.random_range(0.01..3.0);
    OscillatorPairParams::new(g1, g2, om, t1, t2)
        .validate()
        .expect("sampled parameters are valid")
}

/// Largest elementwise deviation between the closed-form and resolvent
/// spectra, relative to the largest entry at that frequency.
pub fn closed_form_vs_resolvent(seed: u64, param_sets: usize, freqs: usize) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..param_sets {
        let p = random_params(&mut rng);
        let sys = build_system(&p);
        let span = 5.0 * p.max_rate();
        for _ in 0..freqs {
            let w = rng.random_range(-span..span);
            let a = spectrum_matrix(&p, w);
            let b = spectrum_resolvent(&sys, w);
            worst = worst.max((a - b).max_abs() / b.max_abs());
        }
    }
    CheckResult::at_most("closed_form_vs_resolvent", worst, 1e-10)
}

/// Largest scaled residual of the Lyapunov solution over random systems.
pub fn lyapunov_residuals(seed: u64, systems: usize) -> Result<CheckResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..systems {
        let sys = build_system(&random_params(&mut rng));
        let c = stationary_covariance(&sys)?.c;
        let (res, scale) = lyapunov_residual(&sys, &c);
        worst = worst.max(res / scale);
    }
    Ok(CheckResult::at_most("lyapunov_residual", worst, 1e-12))
}

/// Relative gap between `∫ S_ii dω` over `±200·max rate` and `C_ii`.
pub fn wiener_khinchin(params: &ValidatedParams) -> Result<CheckResult> {
    let sys = build_system(params);
    let c = stationary_covariance(&sys)?.c;
    let int = integrated_spectrum(&sys, 200.0 * params.max_rate(), 400_000);
    let mut worst: f64 = 0.0;
    for i in 0..2 {
        let want = c.get(i, i).re;
        if want > 0.0 {
            worst = worst.max((int.get(i, i).re - want).abs() / want);
        }
    }
    Ok(CheckResult::at_most("wiener_khinchin", worst, 0.01))
}

/// Ensemble-mean spectra against the closed form, as the RMS over the grid of
/// `(mean - exact) / stderr` for `S11`, `S22` and `J`. About 1 when the only
/// discrepancy is sampling noise.
pub fn ensemble_vs_analytic(resolved: &Resolved) -> Result<CheckResult> {
    let p = &resolved.params;
    let config = resolved.sim.resolve(p);
    let sys = build_system(p);
    let hw = 5.0 * resolved.omega_cr.max(p.coupling());
    let est = Periodogram::for_config(&config, Window::Rectangular, Some(hw))?;
    let ens = ensemble_run(&sys, &config)?;
    let spec = ensemble_spectrum(&ens, &est)?;
    let flow = ensemble_flow(&ens, &est, FlowEstimator::CrossPeriodogram)?;
    let mut sum = 0.0;
    let mut count = 0usize;
    let mut add = |mean: f64, se: f64, exact: f64| {
        if se > 0.0 {
            sum += ((mean - exact) / se).powi(2);
            count += 1;
        }
    };
    for k in 0..spec.mean.len() {
        let w = spec.mean.freqs[k];
        let (m, se) = (spec.mean.values[k], spec.stderr.values[k]);
        let exact = spectrum_matrix(p, w);
        add(m.get(0, 0).re, se.get(0, 0).re, exact.get(0, 0).re);
        add(m.get(1, 1).re, se.get(1, 1).re, exact.get(1, 1).re);
        add(flow.mean.values[k], flow.stderr.values[k], energy_flow(p, w));
    }
    let rms = if count > 0 { (sum / count as f64).sqrt() } else { f64::NAN };
    Ok(CheckResult::at_most("ensemble_vs_analytic", rms, 1.5))
}

/// Temperature rescaling by 100 with matched noise: every `ω_max` sample must
/// be bit-identical and directly simulated spectra must scale by 100.
pub fn scaling_invariance(resolved: &Resolved) -> Result<Vec<CheckResult>> {
    let mut settings: SweepSettings = resolved.sweep_settings();
    settings.sim.n_realizations = settings.sim.n_realizations.min(64);
    if settings.flow_sign.is_none() && resolved.params.flow_sign().is_none() {
        settings.flow_sign = Some(1.0);
    }
    let report = temperature_ratio_invariance(&resolved.params, 100.0, &settings)?;
    Ok(vec![
        CheckResult::at_most("scaling_omega_max_mismatches", report.mismatched_samples as f64, 0.0),
        CheckResult::at_most("scaling_spectrum_ratio", report.spectrum_ratio_error, 1e-10),
    ])
}

pub fn run_all(resolved: &Resolved) -> Result<Vec<CheckResult>> {
    let mut out = vec![
        closed_form_vs_resolvent(1, 100, 20),
        lyapunov_residuals(2, 1000)?,
        wiener_khinchin(&resolved.params)?,
        ensemble_vs_analytic(resolved)?,
    ];
    out.extend(scaling_invariance(resolved)?);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::RunConfig;

    #[test]
    fn deterministic_checks_pass() {
        assert!(closed_form_vs_resolvent(9, 20, 5).passed);
        assert!(lyapunov_residuals(9, 50).unwrap().passed);
    }

    #[test]
    fn small_ensemble_suite_passes() {
        let cfg = RunConfig::from_toml_str(
            "
            [params]
            gamma1 = 1e-3
            gamma2 = 2e-3
            coupling = 1e-3
            temp1 = 1.0
            temp2 = 0.2
            [sim]
            n_realizations = 100
            t_f = 50000.0
            ",
        )
        .unwrap()
        .resolve(None)
        .unwrap();
        for check in run_all(&cfg).unwrap() {
            assert!(check.passed, "{check:?}");
        }
    }
}
