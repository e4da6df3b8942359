//! Order parameter `ω_max`, its dispersion across a coupling sweep and the
//! power-law fit `D(ω_max) ∝ |Ω - Ω_cr|^α`.
//!
//! Ensembles are simulated in reduced variables (temperatures divided by
//! `max(T1, T2)`). The reduced trajectories depend only on the temperature
//! ratio, so every `ω_max` sample is unchanged, bit for bit, by a global
//! temperature rescaling.

use serde::{Deserialize, Serialize};

use crate::analytic::omega_cr;
use crate::error::{Error, Result};
use crate::model::{build_system, ValidatedParams};
use crate::sde::{Ensemble, SimConfig, SimTemplate, Simulator};
use crate::spectral::{FlowEstimator, Periodogram, SpectralGrid, Window};

/// What the argmax is taken over.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Orientation {
    /// `sign · J(ω)` with `sign = ±1`.
    Signed(f64),
    /// `|J(ω)|`. Comparison only.
    Magnitude,
}

impl Orientation {
    /// `sign(T2 - T1)` unless overridden; equal temperatures need an override.
    pub fn for_params(params: &ValidatedParams, sign_override: Option<f64>) -> Result<Self> {
        match sign_override {
            Some(s) if s != 0.0 && s.is_finite() => Ok(Orientation::Signed(s.signum())),
            Some(_) => Err(Error::UndefinedOrientation),
            None => params.flow_sign().map(Orientation::Signed).ok_or(Error::UndefinedOrientation),
        }
    }

    fn score(self, j: f64) -> f64 {
        match self {
            Orientation::Signed(s) => s * j,
            Orientation::Magnitude => j.abs(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OrderParameterSample {
    pub realization_index: u64,
    pub omega_max: f64,
}

/// Frequency of the largest oriented flow value, refined by a parabola
/// through the winning bin and its neighbours. Exact ties go to the larger
/// `|ω|`, then to positive `ω`.
pub fn extract_omega_max(flow: &SpectralGrid<f64>, orientation: Orientation) -> Result<f64> {
    if flow.is_empty() {
        return Err(Error::Empty("flow spectrum"));
    }
    let score: Vec<f64> = flow.values.iter().map(|&j| orientation.score(j)).collect();
    let mut best = 0;
    for k in 1..score.len() {
        let (w, wb) = (flow.freqs[k], flow.freqs[best]);
        let better = score[k] > score[best]
            || (score[k] == score[best] && (w.abs() > wb.abs() || (w.abs() == wb.abs() && w > wb)));
        if better {
            best = k;
        }
    }
    let w0 = flow.freqs[best];
    if best == 0 || best + 1 == score.len() {
        return Ok(w0);
    }
    let (ym, y0, yp) = (score[best - 1], score[best], score[best + 1]);
    let curv = ym - 2.0 * y0 + yp;
    if curv.is_nan() || curv >= 0.0 {
        return Ok(w0);
    }
    let shift = (0.5 * (ym - yp) / curv).clamp(-0.5, 0.5);
    let step = 0.5 * (flow.freqs[best + 1] - flow.freqs[best - 1]);
    let hw = flow.freqs[0].abs().max(flow.half_width().abs());
    Ok((w0 + shift * step).clamp(-hw, hw))
}

/// Per-sweep spectral and orientation settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSettings {
    #[serde(default)]
    pub sim: SimTemplate,
    #[serde(default)]
    pub window: Window,
    #[serde(default)]
    pub estimator: FlowEstimator,
    /// Spectral half-width in units of `max(Ω_cr, Ω)`.
    #[serde(default = "default_half_width")]
    pub half_width: f64,
    /// Replaces `sign(T2 - T1)`; required when `T1 = T2`.
    #[serde(default)]
    pub flow_sign: Option<f64>,
    /// Take the argmax of `|J|` instead of the oriented flow.
    #[serde(default)]
    pub magnitude: bool,
}

pub const DEFAULT_HALF_WIDTH: f64 = 10.0;

fn default_half_width() -> f64 {
    DEFAULT_HALF_WIDTH
}

impl Default for SweepSettings {
    fn default() -> Self {
        SweepSettings {
            sim: SimTemplate::default(),
            window: Window::Rectangular,
            estimator: FlowEstimator::CrossPeriodogram,
            half_width: DEFAULT_HALF_WIDTH,
            flow_sign: None,
            magnitude: false,
        }
    }
}

impl SweepSettings {
    fn orientation(&self, params: &ValidatedParams) -> Result<Orientation> {
        if self.magnitude {
            Ok(Orientation::Magnitude)
        } else {
            Orientation::for_params(params, self.flow_sign)
        }
    }

    pub fn half_width_for(&self, params: &ValidatedParams) -> f64 {
        self.half_width * omega_cr(params).max(params.coupling())
    }
}

/// `ω_max` for every realization at one coupling, in realization order.
///
/// `stream_key` selects the noise streams; equal keys and seeds give equal
/// noise regardless of the temperatures.
pub fn omega_max_samples(params: &ValidatedParams, settings: &SweepSettings, stream_key: u64) -> Result<Vec<f64>> {
    let orientation = settings.orientation(params)?;
    let (reduced, _) = params.reduced();
    let config = settings.sim.resolve(params);
    let sim = Simulator::with_stream_key(&build_system(&reduced), &config, stream_key)?;
    let est = Periodogram::for_config(&config, settings.window, Some(settings.half_width_for(params)))?;
    let ens = Ensemble::from_simulator(sim);
    ens.map(|_, traj| extract_omega_max(&est.flow(&traj, settings.estimator)?, orientation))
}

/// Order-parameter statistics at one coupling.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriticalityPoint {
    pub coupling: f64,
    pub n: u64,
    pub mean_omega_max: f64,
    pub mean_omega_max_sq: f64,
    pub mean_abs_omega_max: f64,
    pub mean_stderr: f64,
    /// `<ω_max²> - <ω_max>²`, from centered moments.
    pub dispersion: f64,
    pub dispersion_stderr: f64,
    #[serde(skip)]
    pub samples: Vec<f64>,
}

impl CriticalityPoint {
    pub fn from_samples(coupling: f64, samples: Vec<f64>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::Empty("omega_max samples"));
        }
        let n = samples.len() as f64;
        let mean = samples.iter().sum::<f64>() / n;
        let (mut m2, mut m4) = (0.0, 0.0);
        for &x in &samples {
            let d2 = (x - mean).powi(2);
            m2 += d2;
            m4 += d2 * d2;
        }
        m2 /= n;
        m4 /= n;
        Ok(CriticalityPoint {
            coupling,
            n: samples.len() as u64,
            mean_omega_max: mean,
            mean_omega_max_sq: samples.iter().map(|x| x * x).sum::<f64>() / n,
            mean_abs_omega_max: samples.iter().map(|x| x.abs()).sum::<f64>() / n,
            mean_stderr: (m2 / n).sqrt(),
            dispersion: m2,
            dispersion_stderr: ((m4 - m2 * m2).max(0.0) / n).sqrt(),
            samples,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriticalitySweep {
    pub omega_cr: f64,
    pub points: Vec<CriticalityPoint>,
}

impl CriticalitySweep {
    /// Point with the largest dispersion.
    pub fn peak(&self) -> Option<&CriticalityPoint> {
        self.points.iter().max_by(|a, b| a.dispersion.total_cmp(&b.dispersion))
    }

    /// Point whose coupling is closest to `Ω_cr`; the lower one on a tie.
    pub fn nearest_critical(&self) -> Option<&CriticalityPoint> {
        self.points.iter().min_by(|a, b| {
            let da = (a.coupling - self.omega_cr).abs();
            let db = (b.coupling - self.omega_cr).abs();
            da.total_cmp(&db).then(a.coupling.total_cmp(&b.coupling))
        })
    }

    /// Points whose couplings are nearest `Ω_cr` from either side.
    pub fn nearest_critical_pair(&self) -> Vec<&CriticalityPoint> {
        let below = self
            .points
            .iter()
            .filter(|p| p.coupling <= self.omega_cr)
            .max_by(|a, b| a.coupling.total_cmp(&b.coupling));
        let above = self
            .points
            .iter()
            .filter(|p| p.coupling >= self.omega_cr)
            .min_by(|a, b| a.coupling.total_cmp(&b.coupling));
        below.into_iter().chain(above).collect()
    }
}

/// `per_side` log-spaced offsets `x ∈ [lo, hi]` on each side, as couplings
/// `Ω_cr (1 ∓ x)` in ascending order. `Ω_cr` itself is not included.
pub fn couplings_around_critical(omega_cr: f64, per_side: usize, lo: f64, hi: f64) -> Vec<f64> {
    let offsets: Vec<f64> = match per_side {
        0 => vec![],
        1 => vec![lo],
        n => (0..n)
            .map(|k| (lo.ln() + (hi.ln() - lo.ln()) * k as f64 / (n - 1) as f64).exp())
            .collect(),
    };
    let mut out: Vec<f64> = offsets.iter().rev().map(|x| omega_cr * (1.0 - x)).collect();
    out.extend(offsets.iter().map(|x| omega_cr * (1.0 + x)));
    out
}

/// Independent ensembles at each coupling. The `k`-th coupling uses noise
/// stream `k`, so sweeps that differ only in temperatures share their noise.
pub fn dispersion_sweep(base: &ValidatedParams, couplings: &[f64], settings: &SweepSettings) -> Result<CriticalitySweep> {
    if settings.sim.n_realizations < 2 {
        return Err(Error::SimConfig("a sweep needs at least 2 realizations per coupling".into()));
    }
    let mut points = Vec::with_capacity(couplings.len());
    for (k, &om) in couplings.iter().enumerate() {
        let run = || -> Result<CriticalityPoint> {
            let p = base.with_coupling(om)?;
            CriticalityPoint::from_samples(om, omega_max_samples(&p, settings, k as u64)?)
        };
        points.push(run().map_err(|e| e.at_coupling(om))?);
    }
    Ok(CriticalitySweep {
        omega_cr: omega_cr(base),
        points,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    #[default]
    Below,
    Above,
    Pooled,
}

impl Side {
    pub fn as_str(self) -> &'static str {
        match self {
            Side::Below => "below",
            Side::Above => "above",
            Side::Pooled => "pooled",
        }
    }

    fn admits(self, coupling: f64, omega_cr: f64) -> bool {
        match self {
            Side::Below => coupling < omega_cr,
            Side::Above => coupling > omega_cr,
            Side::Pooled => coupling != omega_cr,
        }
    }
}

/// Fit window on `|Ω - Ω_cr| / Ω_cr`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FitWindow {
    pub lo: f64,
    pub hi: f64,
}

impl Default for FitWindow {
    fn default() -> Self {
        FitWindow { lo: 0.05, hi: 0.5 }
    }
}

impl FitWindow {
    fn contains(&self, rel: f64) -> bool {
        let slack = 1e-9;
        rel >= self.lo * (1.0 - slack) && rel <= self.hi * (1.0 + slack)
    }
}

pub const MIN_FIT_POINTS: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PowerLawFit {
    pub exponent: f64,
    pub exponent_stderr: f64,
    /// Prefactor `A` in `D = A |Ω - Ω_cr|^α`.
    pub amplitude: f64,
    pub r_squared: f64,
    pub window: FitWindow,
    pub side: Side,
    pub points: usize,
}

/// Ordinary least squares of `ln D` on `ln |Ω - Ω_cr|`.
pub fn fit_critical_exponent(sweep: &CriticalitySweep, window: FitWindow, side: Side) -> Result<PowerLawFit> {
    let cr = sweep.omega_cr;
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for p in &sweep.points {
        let dist = (p.coupling - cr).abs();
        if !side.admits(p.coupling, cr) || !window.contains(dist / cr) {
            continue;
        }
        if p.dispersion.is_nan() || p.dispersion <= 0.0 {
            return Err(Error::NonPositiveDispersion {
                coupling: p.coupling,
                value: p.dispersion,
            });
        }
        xs.push(dist.ln());
        ys.push(p.dispersion.ln());
    }
    if xs.len() < MIN_FIT_POINTS {
        return Err(Error::InsufficientPoints {
            found: xs.len(),
            needed: MIN_FIT_POINTS,
        });
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    if sxx.is_nan() || sxx <= 0.0 {
        return Err(Error::InsufficientPoints { found: 1, needed: 2 });
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ssr: f64 = xs.iter().zip(&ys).map(|(x, y)| (y - intercept - slope * x).powi(2)).sum();
    let r_squared = if syy > 0.0 { 1.0 - ssr / syy } else { 1.0 };
    Ok(PowerLawFit {
        exponent: slope,
        exponent_stderr: (ssr / (n - 2.0) / sxx).sqrt(),
        amplitude: intercept.exp(),
        r_squared,
        window,
        side,
        points: xs.len(),
    })
}

/// Outcome of rescaling both temperatures by `scale`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalingReport {
    pub scale: f64,
    pub samples: usize,
    /// `ω_max` samples that differ in any bit.
    pub mismatched_samples: usize,
    pub dispersion: f64,
    pub dispersion_scaled: f64,
    /// Largest `|Ŝ'(ω) - scale·Ŝ(ω)|` relative to `scale·max|Ŝ|`, over the
    /// diagonal and flow spectra of directly (unreduced) simulated
    /// trajectories with matched noise.
    pub spectrum_ratio_error: f64,
}

/// Runs the order-parameter pipeline for `params` and for all temperatures
/// multiplied by `scale`, with matched noise, and compares.
pub fn temperature_ratio_invariance(
    params: &ValidatedParams,
    scale: f64,
    settings: &SweepSettings,
) -> Result<ScalingReport> {
    let scaled = params.with_temperature_scale(scale)?;
    let a = omega_max_samples(params, settings, 0)?;
    let b = omega_max_samples(&scaled, settings, 0)?;
    let mismatched_samples = a.iter().zip(&b).filter(|(x, y)| x.to_bits() != y.to_bits()).count();
    let da = CriticalityPoint::from_samples(params.coupling(), a)?;
    let db = CriticalityPoint::from_samples(params.coupling(), b)?;

    let config: SimConfig = settings.sim.resolve(params);
    let est = Periodogram::for_config(&config, settings.window, Some(settings.half_width_for(params)))?;
    let sim_a = Simulator::new(&build_system(params), &config)?;
    let sim_b = Simulator::new(&build_system(&scaled), &config)?;
    let mut worst: f64 = 0.0;
    for i in 0..config.n_realizations.min(4) {
        let sa = est.matrix(&sim_a.trajectory(i)?)?;
        let sb = est.matrix(&sim_b.trajectory(i)?)?;
        let parts: [fn(&crate::linalg::Mat2) -> f64; 3] =
            [|m| m.get(0, 0).re, |m| m.get(1, 1).re, |m| m.get(0, 1).im];
        for part in parts {
            let peak = sa.values.iter().map(|m| part(m).abs()).fold(0.0, f64::max);
            if peak == 0.0 {
                continue;
            }
            for (x, y) in sa.values.iter().zip(&sb.values) {
                worst = worst.max((part(y) - scale * part(x)).abs() / (scale * peak));
            }
        }
    }
    Ok(ScalingReport {
        scale,
        samples: da.samples.len(),
        mismatched_samples,
        dispersion: da.dispersion,
        dispersion_scaled: db.dispersion,
        spectrum_ratio_error: worst,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::energy_flow;
    use crate::model::OscillatorPairParams;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, Normal};

    fn params(om: f64, t1: f64, t2: f64) -> ValidatedParams {
        OscillatorPairParams::new(1e-3, 2e-3, om, t1, t2).validate().unwrap()
    }

    fn grid(freqs: Vec<f64>, f: impl Fn(f64) -> f64) -> SpectralGrid<f64> {
        let values = freqs.iter().map(|&w| f(w)).collect();
        SpectralGrid::new(freqs, values).unwrap()
    }

    fn uniform(n: i64, step: f64) -> Vec<f64> {
        (-n..=n).map(|k| k as f64 * step).collect()
    }

    #[test]
    fn analytic_double_peak_is_located() {
        let cr = 2.5e-6f64.sqrt();
        let p = params(3.0 * cr, 0.0, 1.0);
        let step = 2e-5;
        let g = grid(uniform(1000, step), |w| energy_flow(&p, w));
        let w = extract_omega_max(&g, Orientation::Signed(1.0)).unwrap();
        let want = 8f64.sqrt() * cr;
        assert!((w - want).abs() < 0.05 * step, "{w} vs {want}");
    }

    #[test]
    fn analytic_single_peak_is_central() {
        let cr = 2.5e-6f64.sqrt();
        let p = params(0.67 * cr, 0.0, 1.0);
        let g = grid(uniform(500, 3e-5), |w| energy_flow(&p, w));
        assert_eq!(extract_omega_max(&g, Orientation::Signed(1.0)).unwrap(), 0.0);
    }

    #[test]
    fn orientation_flips_the_search() {
        let g = grid(uniform(10, 1.0), |w| -(w - 3.0).powi(2));
        assert_eq!(extract_omega_max(&g, Orientation::Signed(1.0)).unwrap(), 3.0);
        assert_eq!(extract_omega_max(&g, Orientation::Signed(-1.0)).unwrap(), -10.0);
        assert_eq!(extract_omega_max(&g, Orientation::Magnitude).unwrap(), -10.0);
    }

    #[test]
    fn exact_tie_picks_positive_root() {
        let g = grid(uniform(20, 1.0), |w| (-(w.abs() - 7.0).powi(2) / 4.0).exp());
        assert_eq!(extract_omega_max(&g, Orientation::Signed(1.0)).unwrap(), 7.0);
        let flat = grid(uniform(3, 1.0), |_| 1.0);
        assert_eq!(extract_omega_max(&flat, Orientation::Signed(1.0)).unwrap(), 3.0);
    }

    #[test]
    fn parabolic_refinement_recovers_vertex() {
        let g = grid(uniform(10, 0.5), |w| 2.0 - (w - 1.3).powi(2));
        let w = extract_omega_max(&g, Orientation::Signed(1.0)).unwrap();
        assert!((w - 1.3).abs() < 1e-12);
    }

    #[test]
    fn equal_temperatures_need_a_sign() {
        let p = params(1e-3, 1.0, 1.0);
        assert_eq!(Orientation::for_params(&p, None), Err(Error::UndefinedOrientation));
        assert_eq!(Orientation::for_params(&p, Some(-2.0)), Ok(Orientation::Signed(-1.0)));
        assert_eq!(Orientation::for_params(&params(1e-3, 1.0, 0.0), None), Ok(Orientation::Signed(-1.0)));
        let g = grid(uniform(2, 1.0), |w| w);
        assert!(extract_omega_max(&SpectralGrid::new(vec![], vec![]).unwrap(), Orientation::Magnitude).is_err());
        assert_eq!(extract_omega_max(&g, Orientation::Signed(1.0)).unwrap(), 2.0);
    }

    #[test]
    fn sweep_grid_layout() {
        let c = couplings_around_critical(2.0, 25, 0.05, 0.5);
        assert_eq!(c.len(), 50);
        assert!(c.windows(2).all(|w| w[1] > w[0]));
        assert!((c[24] - 1.9).abs() < 1e-12 && (c[25] - 2.1).abs() < 1e-12);
        assert!((c[0] - 1.0).abs() < 1e-12 && (c[49] - 3.0).abs() < 1e-12);
    }

    fn synthetic_sweep(alpha: f64, noise: f64, seed: u64) -> CriticalitySweep {
        let cr = 1.5;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let normal = Normal::new(0.0, noise).unwrap();
        let points = couplings_around_critical(cr, 25, 0.05, 0.5)
            .into_iter()
            .map(|om| {
                let d = 7.0 * (om - cr).abs().powf(alpha) * if noise > 0.0 { normal.sample(&mut rng).exp() } else { 1.0 };
                CriticalityPoint {
                    coupling: om,
                    n: 1,
                    mean_omega_max: 0.0,
                    mean_omega_max_sq: d,
                    mean_abs_omega_max: 0.0,
                    mean_stderr: 0.0,
                    dispersion: d,
                    dispersion_stderr: 0.0,
                    samples: vec![],
                }
            })
            .collect();
        CriticalitySweep { omega_cr: cr, points }
    }

    #[test]
    fn exact_power_law_is_recovered() {
        let s = synthetic_sweep(-0.8, 0.0, 0);
        for side in [Side::Below, Side::Above, Side::Pooled] {
            let fit = fit_critical_exponent(&s, FitWindow::default(), side).unwrap();
            assert!((fit.exponent + 0.8).abs() < 1e-6);
            assert!((fit.r_squared - 1.0).abs() < 1e-12);
            assert!((fit.amplitude - 7.0).abs() < 1e-9);
            assert_eq!(fit.points, if side == Side::Pooled { 50 } else { 25 });
        }
    }

    #[test]
    fn noisy_power_law_within_three_stderr() {
        for seed in 0..5 {
            let s = synthetic_sweep(-0.8, 0.05, seed);
            let fit = fit_critical_exponent(&s, FitWindow::default(), Side::Below).unwrap();
            assert!((fit.exponent + 0.8).abs() < 3.0 * fit.exponent_stderr, "seed {seed}: {fit:?}");
        }
    }

    #[test]
    fn fit_preconditions() {
        let mut s = synthetic_sweep(-1.0, 0.0, 0);
        let narrow = FitWindow { lo: 0.05, hi: 0.06 };
        assert!(matches!(
            fit_critical_exponent(&s, narrow, Side::Below),
            Err(Error::InsufficientPoints { .. })
        ));
        s.points[20].dispersion = 0.0;
        assert!(matches!(
            fit_critical_exponent(&s, FitWindow::default(), Side::Below),
            Err(Error::NonPositiveDispersion { .. })
        ));
        assert!(fit_critical_exponent(&s, FitWindow::default(), Side::Above).is_ok());
    }

    #[test]
    fn dispersion_uses_centered_moments() {
        let big = 1e8;
        let p = CriticalityPoint::from_samples(1.0, vec![big + 1.0, big - 1.0, big + 1.0, big - 1.0]).unwrap();
        assert_eq!(p.dispersion, 1.0);
        assert_eq!(p.mean_omega_max, big);
    }

    fn quick_settings(n: u64) -> SweepSettings {
        SweepSettings {
            sim: SimTemplate {
                t_f: Some(60.0 / 1e-3),
                t_burn: Some(10.0 / 1e-3),
                n_realizations: n,
                ..SimTemplate::default()
            },
            ..SweepSettings::default()
        }
    }

    #[test]
    fn scaling_leaves_samples_untouched() {
        let cr = 2.5e-6f64.sqrt();
        let report = temperature_ratio_invariance(&params(0.9 * cr, 0.0, 1.0), 100.0, &quick_settings(20)).unwrap();
        assert_eq!(report.mismatched_samples, 0);
        assert_eq!(report.dispersion.to_bits(), report.dispersion_scaled.to_bits());
        assert!(report.spectrum_ratio_error < 1e-10, "{}", report.spectrum_ratio_error);
        let same = temperature_ratio_invariance(&params(0.9 * cr, 0.3, 1.0), 1.0, &quick_settings(5)).unwrap();
        assert_eq!(same.mismatched_samples, 0);
        assert_eq!(same.spectrum_ratio_error, 0.0);
    }

    #[test]
    fn strong_coupling_peaks_sit_at_analytic_split() {
        let cr = 2.5e-6f64.sqrt();
        let p = params(3.0 * cr, 0.0, 1.0);
        let s = CriticalityPoint::from_samples(p.coupling(), omega_max_samples(&p, &quick_settings(100), 0).unwrap()).unwrap();
        let want = 8f64.sqrt() * cr;
        assert!((s.mean_abs_omega_max - want).abs() < 0.05 * want, "{} vs {want}", s.mean_abs_omega_max);
        assert!(s.mean_omega_max.abs() < 3.0 * s.mean_stderr);
    }

    #[test]
    fn sweep_errors_name_the_coupling() {
        let p = params(1e-3, 0.0, 1.0);
        let err = dispersion_sweep(&p, &[1e-3, -1.0], &quick_settings(2)).unwrap_err();
        assert!(matches!(err, Error::AtCoupling { coupling, .. } if coupling == -1.0));
    }
}
