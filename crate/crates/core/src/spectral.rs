//! Finite-window spectral estimation from sampled trajectories.
//!
//! `â_i(ω) = Σ_n a_i(t_n) e^{iωt_n} dt` on the DFT frequencies
//! `ω_k = 2πk / t_f`, `t_f = N dt`, and
//! `Ŝ_ij(ω) = conj(â_i(ω)) â_j(ω) / (2π t_f)`.
//!
//! Output grids are symmetric: `k ∈ [-K, K]`. For even `N` the unpaired
//! bin at `k = -N/2` is dropped.

use std::f64::consts::PI;
use std::sync::Arc;

use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{Mat2, C64};
use crate::sde::{Ensemble, SimConfig, Trajectory};

/// Frequencies with one payload each.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralGrid<T> {
    pub freqs: Vec<f64>,
    pub values: Vec<T>,
}

impl<T> SpectralGrid<T> {
    pub fn new(freqs: Vec<f64>, values: Vec<T>) -> Result<Self> {
        if freqs.len() != values.len() {
            return Err(Error::GridMismatch(format!(
                "{} frequencies for {} values",
                freqs.len(),
                values.len()
            )));
        }
        Ok(SpectralGrid { freqs, values })
    }

    pub fn len(&self) -> usize {
        self.freqs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.freqs.is_empty()
    }

    pub fn spacing(&self) -> Option<f64> {
        (self.freqs.len() >= 2).then(|| self.freqs[1] - self.freqs[0])
    }

    pub fn half_width(&self) -> f64 {
        self.freqs.last().copied().unwrap_or(0.0)
    }

    /// True when the grid is ascending with `freqs[j] = -freqs[len-1-j]`.
    pub fn is_symmetric(&self) -> bool {
        let n = self.freqs.len();
        let scale = self.half_width().abs().max(f64::MIN_POSITIVE);
        self.freqs.windows(2).all(|w| w[1] > w[0])
            && (0..n).all(|j| (self.freqs[j] + self.freqs[n - 1 - j]).abs() <= 1e-12 * scale)
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, &T)> {
        self.freqs.iter().copied().zip(self.values.iter())
    }

    pub fn map<U>(&self, f: impl Fn(f64, &T) -> U) -> SpectralGrid<U> {
        SpectralGrid {
            freqs: self.freqs.clone(),
            values: self.iter().map(|(w, v)| f(w, v)).collect(),
        }
    }

    /// Keeps `|ω| ≤ half_width` (with a relative slack of 1e-9 for grid round-off).
    pub fn crop(&self, half_width: f64) -> SpectralGrid<T>
    where
        T: Clone,
    {
        let lim = half_width * (1.0 + 1e-9);
        let (freqs, values) = self
            .iter()
            .filter(|(w, _)| w.abs() <= lim)
            .map(|(w, v)| (w, v.clone()))
            .unzip();
        SpectralGrid { freqs, values }
    }

    pub fn same_freqs<U>(&self, other: &SpectralGrid<U>) -> bool {
        self.freqs == other.freqs
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Window {
    #[default]
    Rectangular,
    /// Periodic Hann taper, renormalized so that white noise keeps its level.
    Hann,
}

/// How a single realization's flow spectrum is formed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FlowEstimator {
    /// `Im Ŝ12(ω)` of the cross-periodogram.
    #[default]
    CrossPeriodogram,
    /// `Re q̂(ω) / 2π` with `q(t) = Im(a1*(t) a2(t))`. Comparison only: its
    /// mean concentrates at `ω = 0` and is not the flow spectrum.
    QuadraticSeries,
}

/// Planned estimator for trajectories of one fixed length and step.
#[derive(Clone)]
pub struct Periodogram {
    len: usize,
    dt: f64,
    window: Window,
    weights: Option<Vec<f64>>,
    /// Bins kept on each side of zero.
    kmax: usize,
    fft: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for Periodogram {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Periodogram")
            .field("len", &self.len)
            .field("dt", &self.dt)
            .field("window", &self.window)
            .field("kmax", &self.kmax)
            .finish()
    }
}

impl Periodogram {
    /// `half_width = None` keeps every symmetric pair of bins.
    pub fn new(len: usize, dt: f64, window: Window, half_width: Option<f64>) -> Result<Self> {
        if len < 2 {
            return Err(Error::TooShort(len));
        }
        let full = (len - 1) / 2;
        let spacing = 2.0 * PI / (len as f64 * dt);
        let kmax = match half_width {
            Some(h) => full.min((h / spacing * (1.0 + 1e-9)).floor() as usize),
            None => full,
        };
        let weights = match window {
            Window::Rectangular => None,
            Window::Hann => {
                let raw: Vec<f64> = (0..len).map(|n| (PI * n as f64 / len as f64).sin().powi(2)).collect();
                let power = raw.iter().map(|w| w * w).sum::<f64>() / len as f64;
                let s = power.sqrt().recip();
                Some(raw.into_iter().map(|w| w * s).collect())
            }
        };
        let fft = FftPlanner::new().plan_fft_inverse(len);
        Ok(Periodogram {
            len,
            dt,
            window,
            weights,
            kmax,
            fft,
        })
    }

    pub fn for_config(config: &SimConfig, window: Window, half_width: Option<f64>) -> Result<Self> {
        Self::new(config.recorded_len(), config.dt, window, half_width)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn window(&self) -> Window {
        self.window
    }

    pub fn spacing(&self) -> f64 {
        2.0 * PI / (self.len as f64 * self.dt)
    }

    pub fn freqs(&self) -> Vec<f64> {
        let k = self.kmax as i64;
        (-k..=k).map(|k| k as f64 * self.spacing()).collect()
    }

    fn check(&self, traj: &Trajectory) -> Result<()> {
        if traj.len() < 2 {
            return Err(Error::TooShort(traj.len()));
        }
        if traj.len() != self.len || traj.dt != self.dt {
            return Err(Error::GridMismatch(format!(
                "planned for {} samples at dt={}, got {} at dt={}",
                self.len,
                self.dt,
                traj.len(),
                traj.dt
            )));
        }
        Ok(())
    }

    /// `Σ_n w_n x_n e^{+2πikn/N}` in unshifted FFT order; callers apply `dt`.
    fn transform(&self, series: impl Iterator<Item = C64>) -> Vec<C64> {
        let mut buf: Vec<C64> = match &self.weights {
            None => series.collect(),
            Some(w) => series.zip(w).map(|(x, w)| x * *w).collect(),
        };
        self.fft.process(&mut buf);
        buf
    }

    fn bin(&self, k: i64) -> usize {
        k.rem_euclid(self.len as i64) as usize
    }

    fn wave_numbers(&self) -> std::ops::RangeInclusive<i64> {
        let k = self.kmax as i64;
        -k..=k
    }

    /// Full 2×2 periodogram matrix.
    pub fn matrix(&self, traj: &Trajectory) -> Result<SpectralGrid<Mat2>> {
        self.check(traj)?;
        let a1 = self.transform(traj.component(0));
        let a2 = self.transform(traj.component(1));
        let norm = self.dt * self.dt / (2.0 * PI * traj.duration());
        let values = self
            .wave_numbers()
            .map(|k| {
                let (x, y) = (a1[self.bin(k)], a2[self.bin(k)]);
                let s12 = x.conj() * y * norm;
                Mat2::new(
                    C64::new(x.norm_sqr() * norm, 0.0),
                    s12,
                    s12.conj(),
                    C64::new(y.norm_sqr() * norm, 0.0),
                )
            })
            .collect();
        SpectralGrid::new(self.freqs(), values)
    }

    /// Per-realization energy-flow spectrum.
    pub fn flow(&self, traj: &Trajectory, estimator: FlowEstimator) -> Result<SpectralGrid<f64>> {
        self.check(traj)?;
        let values = match estimator {
            FlowEstimator::CrossPeriodogram => {
                let a1 = self.transform(traj.component(0));
                let a2 = self.transform(traj.component(1));
                let norm = self.dt * self.dt / (2.0 * PI * traj.duration());
                self.wave_numbers()
                    .map(|k| (a1[self.bin(k)].conj() * a2[self.bin(k)]).im * norm)
                    .collect()
            }
            FlowEstimator::QuadraticSeries => {
                let q = self.transform(traj.samples.iter().map(|s| C64::new((s[0].conj() * s[1]).im, 0.0)));
                self.wave_numbers().map(|k| q[self.bin(k)].re * self.dt / (2.0 * PI)).collect()
            }
        };
        SpectralGrid::new(self.freqs(), values)
    }
}

/// Rectangular-window periodogram matrix on the full symmetric grid.
pub fn periodogram_matrix(traj: &Trajectory) -> Result<SpectralGrid<Mat2>> {
    Periodogram::new(traj.len(), traj.dt, Window::Rectangular, None)?.matrix(traj)
}

/// `J(ω) = Im Ŝ12(ω)` for one realization on the full symmetric grid.
pub fn flow_spectrum_realization(traj: &Trajectory) -> Result<SpectralGrid<f64>> {
    Periodogram::new(traj.len(), traj.dt, Window::Rectangular, None)?.flow(traj, FlowEstimator::CrossPeriodogram)
}

/// Payloads that can be averaged component by component.
pub trait Components: Sized {
    const COUNT: usize;
    fn write(&self, out: &mut [f64]);
    fn read(c: &[f64]) -> Self;
}

impl Components for f64 {
    const COUNT: usize = 1;
    fn write(&self, out: &mut [f64]) {
        out[0] = *self;
    }
    fn read(c: &[f64]) -> Self {
        c[0]
    }
}

impl Components for Mat2 {
    const COUNT: usize = 8;
    fn write(&self, out: &mut [f64]) {
        for (k, z) in self.0.iter().flatten().enumerate() {
            out[2 * k] = z.re;
            out[2 * k + 1] = z.im;
        }
    }
    fn read(c: &[f64]) -> Self {
        let z = |k: usize| C64::new(c[2 * k], c[2 * k + 1]);
        Mat2::new(z(0), z(1), z(2), z(3))
    }
}

/// Running pointwise mean and variance (Welford, with Chan's merge).
#[derive(Debug, Clone, Default)]
pub struct SpectralAccumulator {
    freqs: Vec<f64>,
    count: u64,
    mean: Vec<f64>,
    m2: Vec<f64>,
    scratch: Vec<f64>,
}

impl SpectralAccumulator {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn push<T: Components>(&mut self, grid: &SpectralGrid<T>) -> Result<()> {
        if self.count == 0 {
            self.freqs = grid.freqs.clone();
            self.mean = vec![0.0; grid.len() * T::COUNT];
            self.m2 = vec![0.0; grid.len() * T::COUNT];
            self.scratch = vec![0.0; grid.len() * T::COUNT];
        } else if self.freqs != grid.freqs || self.mean.len() != grid.len() * T::COUNT {
            return Err(Error::GridMismatch(format!(
                "grid of {} points does not match accumulated grid of {}",
                grid.len(),
                self.freqs.len()
            )));
        }
        for (v, out) in grid.values.iter().zip(self.scratch.chunks_mut(T::COUNT)) {
            v.write(out);
        }
        self.count += 1;
        let n = self.count as f64;
        for ((m, s), &x) in self.mean.iter_mut().zip(self.m2.iter_mut()).zip(&self.scratch) {
            let d = x - *m;
            *m += d / n;
            *s += d * (x - *m);
        }
        Ok(())
    }

    pub fn merge(&mut self, other: SpectralAccumulator) -> Result<()> {
        if other.count == 0 {
            return Ok(());
        }
        if self.count == 0 {
            *self = other;
            return Ok(());
        }
        if self.freqs != other.freqs || self.mean.len() != other.mean.len() {
            return Err(Error::GridMismatch("merging accumulators over different grids".into()));
        }
        let (na, nb) = (self.count as f64, other.count as f64);
        let n = na + nb;
        for k in 0..self.mean.len() {
            let d = other.mean[k] - self.mean[k];
            self.mean[k] += d * nb / n;
            self.m2[k] += other.m2[k] + d * d * na * nb / n;
        }
        self.count += other.count;
        Ok(())
    }

    pub fn finish<T: Components>(&self) -> Result<SpectralAverage<T>> {
        if self.count == 0 {
            return Err(Error::Empty("no spectra to average"));
        }
        let n = self.count as f64;
        let se: Vec<f64> = if self.count > 1 {
            self.m2.iter().map(|s| (s / (n - 1.0) / n).sqrt()).collect()
        } else {
            vec![f64::NAN; self.m2.len()]
        };
        let unpack = |flat: &[f64]| flat.chunks(T::COUNT).map(T::read).collect::<Vec<T>>();
        Ok(SpectralAverage {
            mean: SpectralGrid::new(self.freqs.clone(), unpack(&self.mean))?,
            stderr: SpectralGrid::new(self.freqs.clone(), unpack(&se))?,
            count: self.count,
        })
    }
}

/// Pointwise ensemble mean and its standard error. For matrix payloads the
/// error grid holds the standard errors of the real and imaginary parts
/// separately.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralAverage<T> {
    pub mean: SpectralGrid<T>,
    pub stderr: SpectralGrid<T>,
    pub count: u64,
}

/// Averages a stream of grids in stream order.
pub fn average_spectra<T, I>(grids: I) -> Result<SpectralAverage<T>>
where
    T: Components,
    I: IntoIterator<Item = Result<SpectralGrid<T>>>,
{
    let mut acc = SpectralAccumulator::new();
    for g in grids {
        acc.push(&g?)?;
    }
    acc.finish()
}

/// Mean flow spectrum over an ensemble, reduced in realization order.
pub fn ensemble_flow(ensemble: &Ensemble, est: &Periodogram, estimator: FlowEstimator) -> Result<SpectralAverage<f64>> {
    ensemble_average(ensemble, |t| est.flow(t, estimator))
}

/// Mean periodogram matrix over an ensemble, reduced in realization order.
pub fn ensemble_spectrum(ensemble: &Ensemble, est: &Periodogram) -> Result<SpectralAverage<Mat2>> {
    ensemble_average(ensemble, |t| est.matrix(t))
}

fn ensemble_average<T, F>(ensemble: &Ensemble, f: F) -> Result<SpectralAverage<T>>
where
    T: Components,
    F: Fn(&Trajectory) -> Result<SpectralGrid<T>> + Sync,
{
    let mut merged: Result<()> = Ok(());
    let acc = ensemble.fold(
        SpectralAccumulator::new,
        |acc, _, traj| acc.push(&f(&traj)?),
        |a, b| {
            if merged.is_ok() {
                merged = a.merge(b);
            }
        },
    )?;
    merged?;
    acc.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ZERO;
    use crate::analytic;
    use crate::model::{build_system, OscillatorPairParams, ValidatedParams};
    use crate::sde::{ensemble_run, Simulator};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn params(om: f64, t1: f64, t2: f64) -> ValidatedParams {
        OscillatorPairParams::new(1e-3, 2e-3, om, t1, t2).validate().unwrap()
    }

    fn random_trajectory(n: usize, dt: f64, seed: u64) -> Trajectory {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut z = || C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        Trajectory {
            dt,
            samples: (0..n).map(|_| [z(), z()]).collect(),
        }
    }

    #[test]
    fn parseval_identity() {
        // odd lengths: every bin has a partner, so the symmetric grid is complete
        for n in [3usize, 5, 101, 1001] {
            let t = random_trajectory(n, 0.37, n as u64);
            let s = periodogram_matrix(&t).unwrap();
            assert_eq!(s.len(), n);
            let dw = 2.0 * PI / t.duration();
            for i in 0..2 {
                let lhs: f64 = s.values.iter().map(|m| m.get(i, i).re).sum::<f64>() * dw;
                let rhs: f64 = t.component(i).map(|z| z.norm_sqr()).sum::<f64>() * t.dt / t.duration();
                assert!((lhs - rhs).abs() <= 1e-10 * rhs, "n = {n}");
            }
        }
    }

    #[test]
    fn grid_is_symmetric_with_window_spacing() {
        for n in [10usize, 11] {
            let t = random_trajectory(n, 0.5, 1);
            let s = periodogram_matrix(&t).unwrap();
            assert!(s.is_symmetric());
            assert_eq!(s.len(), if n % 2 == 0 { n - 1 } else { n });
            assert!((s.spacing().unwrap() - 2.0 * PI / t.duration()).abs() < 1e-15);
        }
        let est = Periodogram::new(1000, 1.0, Window::Rectangular, Some(0.1)).unwrap();
        let f = est.freqs();
        assert!(f.last().unwrap() <= &0.1);
        assert!(f.last().unwrap() + est.spacing() > 0.1);
    }

    #[test]
    fn zero_trajectory_gives_zero_spectrum() {
        let t = Trajectory {
            dt: 1.0,
            samples: vec![[ZERO, ZERO]; 16],
        };
        let s = periodogram_matrix(&t).unwrap();
        assert!(s.values.iter().all(|m| m.norm() == 0.0));
        assert!(flow_spectrum_realization(&t).unwrap().values.iter().all(|&j| j == 0.0));
    }

    #[test]
    fn too_short_and_mismatched_inputs() {
        let t = random_trajectory(1, 1.0, 0);
        assert_eq!(periodogram_matrix(&t).unwrap_err(), Error::TooShort(1));
        let est = Periodogram::new(8, 1.0, Window::Rectangular, None).unwrap();
        assert!(matches!(est.matrix(&random_trajectory(9, 1.0, 0)), Err(Error::GridMismatch(_))));
    }

    #[test]
    fn cross_terms_are_conjugate_pairs() {
        let t = random_trajectory(257, 0.1, 4);
        let s = periodogram_matrix(&t).unwrap();
        let j = flow_spectrum_realization(&t).unwrap();
        for (m, &jw) in s.values.iter().zip(&j.values) {
            assert_eq!(m.get(0, 1).im, -m.get(1, 0).im);
            assert_eq!(m.get(0, 1).im, jw);
        }
    }

    #[test]
    fn single_tone_lands_in_its_bin() {
        let (n, dt) = (64usize, 0.5);
        let k0 = 5;
        let w0 = 2.0 * PI * k0 as f64 / (n as f64 * dt);
        // a(t) = e^{-iω0 t} pairs with the e^{+iωt} transform at ω = ω0
        let samples = (0..n).map(|j| [C64::from_polar(1.0, -w0 * j as f64 * dt), ZERO]).collect();
        let t = Trajectory { dt, samples };
        let s = periodogram_matrix(&t).unwrap();
        let top = s
            .iter()
            .max_by(|a, b| a.1.get(0, 0).re.total_cmp(&b.1.get(0, 0).re))
            .unwrap();
        assert!((top.0 - w0).abs() < 1e-12);
    }

    #[test]
    fn average_of_identical_grids() {
        let g = periodogram_matrix(&random_trajectory(33, 1.0, 9)).unwrap();
        let avg = average_spectra((0..5).map(|_| Ok(g.clone()))).unwrap();
        assert_eq!(avg.count, 5);
        for (a, b) in avg.mean.values.iter().zip(&g.values) {
            assert!((*a - *b).norm() <= 1e-15 * b.norm());
        }
        assert!(avg.stderr.values.iter().all(|m| m.norm() < 1e-15 * g.values[0].norm().max(1.0)));
    }

    #[test]
    fn average_rejects_mismatched_grids() {
        let a = flow_spectrum_realization(&random_trajectory(33, 1.0, 1)).unwrap();
        let b = flow_spectrum_realization(&random_trajectory(35, 1.0, 1)).unwrap();
        assert!(matches!(average_spectra([Ok(a), Ok(b)]), Err(Error::GridMismatch(_))));
        assert!(matches!(average_spectra::<f64, _>(std::iter::empty()), Err(Error::Empty(_))));
    }

    #[test]
    fn mean_matrix_is_hermitian_psd() {
        let avg = average_spectra((0..20).map(|i| periodogram_matrix(&random_trajectory(65, 0.2, i)))).unwrap();
        for m in &avg.mean.values {
            assert_eq!(m.hermitian_defect(), 0.0);
            let eig = m.hermitian_eigenvalues();
            assert!(eig[0] >= -1e-12 * eig[1]);
        }
    }

    #[test]
    fn merged_accumulators_match_sequential() {
        let grids: Vec<_> = (0..10).map(|i| flow_spectrum_realization(&random_trajectory(21, 1.0, i)).unwrap()).collect();
        let mut seq = SpectralAccumulator::new();
        grids.iter().for_each(|g| seq.push(g).unwrap());
        let (mut a, mut b) = (SpectralAccumulator::new(), SpectralAccumulator::new());
        grids[..3].iter().for_each(|g| a.push(g).unwrap());
        grids[3..].iter().for_each(|g| b.push(g).unwrap());
        a.merge(b).unwrap();
        let (x, y) = (seq.finish::<f64>().unwrap(), a.finish::<f64>().unwrap());
        for k in 0..x.mean.len() {
            assert!((x.mean.values[k] - y.mean.values[k]).abs() < 1e-14);
            assert!((x.stderr.values[k] - y.stderr.values[k]).abs() < 1e-14);
        }
    }

    fn short_config(p: &ValidatedParams, n: u64) -> SimConfig {
        SimConfig {
            t_f: 40.0 / 1e-3,
            n_realizations: n,
            ..SimConfig::defaults_for(p)
        }
    }

    #[test]
    fn stderr_scales_as_inverse_sqrt_n() {
        let p = params(1e-3, 0.0, 1.0);
        let sys = build_system(&p);
        let se = |n: u64| {
            let cfg = short_config(&p, n);
            let est = Periodogram::for_config(&cfg, Window::Rectangular, Some(5e-3)).unwrap();
            let avg = ensemble_flow(&ensemble_run(&sys, &cfg).unwrap(), &est, FlowEstimator::CrossPeriodogram).unwrap();
            avg.stderr.values.iter().sum::<f64>() / avg.stderr.len() as f64
        };
        let ratio = se(400) / se(100);
        assert!((ratio - 0.5).abs() <= 0.1, "{ratio}");
    }

    #[test]
    fn ensemble_mean_tracks_closed_form() {
        let p = params(1.58e-3, 0.0, 1.0);
        let sys = build_system(&p);
        let cfg = SimConfig {
            t_f: 100.0 / 1e-3,
            n_realizations: 300,
            ..SimConfig::defaults_for(&p)
        };
        let est = Periodogram::for_config(&cfg, Window::Rectangular, Some(5.0 * 1.58e-3)).unwrap();
        let avg = ensemble_spectrum(&ensemble_run(&sys, &cfg).unwrap(), &est).unwrap();
        let mut sq = [0.0; 3];
        for (w, m) in avg.mean.iter() {
            let s = analytic::spectrum_matrix(&p, w);
            sq[0] += ((m.get(0, 0).re - s.get(0, 0).re) / s.get(0, 0).re).powi(2);
            sq[1] += ((m.get(1, 1).re - s.get(1, 1).re) / s.get(1, 1).re).powi(2);
            sq[2] += ((m.get(0, 1).im - s.get(0, 1).im) / s.get(0, 1).im).powi(2);
        }
        for v in sq {
            let rms = (v / avg.mean.len() as f64).sqrt();
            // 300 realizations: per-bin relative error ≈ 1/√300 ≈ 6%
            assert!(rms < 0.09, "{rms}");
        }
    }

    #[test]
    fn hann_window_preserves_level() {
        let p = params(1e-3, 0.5, 1.0);
        let sys = build_system(&p);
        let cfg = short_config(&p, 200);
        let ens = ensemble_run(&sys, &cfg).unwrap();
        let est = Periodogram::for_config(&cfg, Window::Hann, Some(2e-3)).unwrap();
        let avg = ensemble_spectrum(&ens, &est).unwrap();
        let mut sq = 0.0;
        for (w, m) in avg.mean.iter() {
            let s = analytic::spectrum_matrix(&p, w).get(0, 0).re;
            sq += ((m.get(0, 0).re - s) / s).powi(2);
        }
        assert!((sq / avg.mean.len() as f64).sqrt() < 0.15);
    }

    #[test]
    fn quadratic_series_mean_is_centered_at_zero() {
        let p = params(1e-3, 0.0, 1.0);
        let sys = build_system(&p);
        let cfg = short_config(&p, 50);
        let sim = Simulator::new(&sys, &cfg).unwrap();
        let est = Periodogram::for_config(&cfg, Window::Rectangular, Some(5e-3)).unwrap();
        let traj = sim.trajectory(0).unwrap();
        let q = est.flow(&traj, FlowEstimator::QuadraticSeries).unwrap();
        // the zero bin is the time integral of the instantaneous flow
        let mid = q.len() / 2;
        let direct: f64 = traj.samples.iter().map(|s| (s[0].conj() * s[1]).im).sum::<f64>() * traj.dt / (2.0 * PI);
        assert!((q.values[mid] - direct).abs() <= 1e-9 * direct.abs());
    }
}
