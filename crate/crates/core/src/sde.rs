//! Trajectory generation for `da/dt = M a + ξ`, `<ξ*(t+τ) ξᵀ(t)> = 2D δ(τ)`.
//!
//! Complex Gaussian convention: a variate with `<|z|²> = σ²` has independent
//! real and imaginary parts of variance `σ²/2` each.
//!
//! Every realization owns a ChaCha8 stream selected by
//! `(base_seed, stream_key, realization_index)`, so trajectories are
//! reproducible individually and independent of scheduling.

use std::f64::consts::FRAC_1_SQRT_2;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{expm1, Mat2, Vec2, C64, ZERO};
use crate::lyapunov::stationary_covariance;
use crate::model::{LinearSystem, ValidatedParams};
use crate::parallel;

/// Largest `dt · rate` accepted for the Euler–Maruyama scheme.
pub const EULER_STABILITY_BOUND: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    EulerMaruyama,
    #[default]
    ExactOu,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub dt: f64,
    /// Discarded transient before recording starts.
    pub t_burn: f64,
    /// Length of the recorded window.
    pub t_f: f64,
    pub scheme: Scheme,
    pub base_seed: u64,
    pub n_realizations: u64,
}

pub const DEFAULT_SEED: u64 = 0x0c0f_fee5_eed5_2024;

impl SimConfig {
    /// `dt = 0.02 / max(γ1, γ2, Ω)`, `t_burn = 20 / γ_min`, `t_f = 200 / γ_min`
    /// with `γ_min` the smallest nonzero rate.
    pub fn defaults_for(params: &ValidatedParams) -> Self {
        let g_min = params.min_nonzero_gamma();
        SimConfig {
            dt: 0.02 / params.max_rate(),
            t_burn: 20.0 / g_min,
            t_f: 200.0 / g_min,
            scheme: Scheme::ExactOu,
            base_seed: DEFAULT_SEED,
            n_realizations: 2000,
        }
    }

    pub fn burn_steps(&self) -> usize {
        (self.t_burn / self.dt).round() as usize
    }

    /// `round(t_f / dt)`.
    pub fn recorded_len(&self) -> usize {
        (self.t_f / self.dt).round() as usize
    }

    pub fn validate(&self, system: &LinearSystem) -> Result<()> {
        let bad = |msg: String| Err(Error::SimConfig(msg));
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return bad(format!("dt must be positive, got {}", self.dt));
        }
        if !(self.t_f > 0.0 && self.t_f.is_finite()) {
            return bad(format!("t_f must be positive, got {}", self.t_f));
        }
        if !(self.t_burn >= 0.0 && self.t_burn.is_finite()) {
            return bad(format!("t_burn must be non-negative, got {}", self.t_burn));
        }
        if self.recorded_len() < 2 {
            return bad(format!("round(t_f/dt) = {} < 2", self.recorded_len()));
        }
        if self.scheme == Scheme::EulerMaruyama {
            let r = self.dt * system.rate_scale();
            if r > EULER_STABILITY_BOUND {
                return bad(format!("euler_maruyama needs dt·rate ≤ {EULER_STABILITY_BOUND}, got {r:.4}"));
            }
        }
        Ok(())
    }
}

/// Simulation settings with rate-dependent fields left open; unset fields
/// take the [`SimConfig::defaults_for`] value of the parameters they are
/// resolved against. Temperatures never enter, so a template resolves to the
/// same config for every temperature scale.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimTemplate {
    #[serde(default)]
    pub dt: Option<f64>,
    #[serde(default)]
    pub t_burn: Option<f64>,
    #[serde(default)]
    pub t_f: Option<f64>,
    #[serde(default)]
    pub scheme: Scheme,
    #[serde(default = "default_seed")]
    pub base_seed: u64,
    #[serde(default = "default_realizations")]
    pub n_realizations: u64,
}

fn default_seed() -> u64 {
    DEFAULT_SEED
}

fn default_realizations() -> u64 {
    2000
}

impl Default for SimTemplate {
    fn default() -> Self {
        SimTemplate {
            dt: None,
            t_burn: None,
            t_f: None,
            scheme: Scheme::ExactOu,
            base_seed: DEFAULT_SEED,
            n_realizations: default_realizations(),
        }
    }
}

impl SimTemplate {
    pub fn resolve(&self, params: &ValidatedParams) -> SimConfig {
        let d = SimConfig::defaults_for(params);
        SimConfig {
            dt: self.dt.unwrap_or(d.dt),
            t_burn: self.t_burn.unwrap_or(d.t_burn),
            t_f: self.t_f.unwrap_or(d.t_f),
            scheme: self.scheme,
            base_seed: self.base_seed,
            n_realizations: self.n_realizations,
        }
    }
}

/// Uniformly sampled amplitudes `(a1, a2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub dt: f64,
    pub samples: Vec<Vec2>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Recorded window length `len · dt`.
    pub fn duration(&self) -> f64 {
        self.samples.len() as f64 * self.dt
    }

    pub fn component(&self, k: usize) -> impl Iterator<Item = C64> + '_ {
        self.samples.iter().map(move |s| s[k])
    }

    pub fn scaled(&self, factor: f64) -> Trajectory {
        Trajectory {
            dt: self.dt,
            samples: self.samples.iter().map(|s| [s[0] * factor, s[1] * factor]).collect(),
        }
    }
}

/// Eigenvector matrix (columns) for a 2×2 with distinct eigenvalues.
fn eigenvector_matrix(m: &Mat2, lambda: [C64; 2]) -> Mat2 {
    let [[a, b], [c, d]] = m.0;
    let col = |l: C64| -> Vec2 {
        let u = [b, l - a];
        let v = [l - d, c];
        let nu = u[0].norm() + u[1].norm();
        let nv = v[0].norm() + v[1].norm();
        if nu >= nv {
            u
        } else {
            v
        }
    };
    let (v1, v2) = if b == ZERO && c == ZERO {
        // diagonal: match each eigenvalue to its axis
        if (lambda[0] - a).norm() <= (lambda[0] - d).norm() {
            ([C64::new(1.0, 0.0), ZERO], [ZERO, C64::new(1.0, 0.0)])
        } else {
            ([ZERO, C64::new(1.0, 0.0)], [C64::new(1.0, 0.0), ZERO])
        }
    } else {
        (col(lambda[0]), col(lambda[1]))
    };
    Mat2::new(v1[0], v2[0], v1[1], v2[1])
}

/// Relative eigenvalue gap below which the modal formula hands over to the
/// stationary-covariance identity.
const MODAL_GAP_TOL: f64 = 1e-2;

/// `Q(dt) = 2 ∫₀^dt exp(M* s) D exp(Mᵀ s) ds`, the covariance `<ζ* ζᵀ>` of the
/// noise picked up over one exact step.
///
/// Away from coalescence this integrates the modal form in closed form;
/// near an exceptional point it uses `Q = C - exp(M* dt) C exp(Mᵀ dt)`, which
/// holds whenever the stationary covariance `C` exists.
pub fn increment_covariance(system: &LinearSystem, dt: f64) -> Result<Mat2> {
    system.ensure_stable()?;
    let m = &system.drift;
    let lambda = m.eigenvalues();
    let gap = (lambda[0] - lambda[1]).norm();
    let scale = lambda[0].norm() + lambda[1].norm();
    let q = if gap > MODAL_GAP_TOL * scale {
        increment_covariance_modal(system, lambda, dt)?
    } else {
        increment_covariance_stationary(system, dt)?
    };
    Ok(q.hermitian_part())
}

fn increment_covariance_modal(system: &LinearSystem, lambda: [C64; 2], dt: f64) -> Result<Mat2> {
    let v = eigenvector_matrix(&system.drift, lambda);
    let vc = v.conj();
    let vc_inv = vc.inverse().ok_or(Error::Singular("eigenvector matrix"))?;
    let vt_inv = v.transpose().inverse().ok_or(Error::Singular("eigenvector matrix"))?;
    let g = vc_inv * system.diffusion * vt_inv;
    let mut h = Mat2::zero();
    for k in 0..2 {
        for l in 0..2 {
            let z = (lambda[k].conj() + lambda[l]) * dt;
            h.0[k][l] = g.0[k][l] * expm1(z) / z * dt;
        }
    }
    Ok((vc * h * v.transpose()).scale_re(2.0))
}

/// `C - exp(M* dt) C exp(Mᵀ dt)`.
pub fn increment_covariance_stationary(system: &LinearSystem, dt: f64) -> Result<Mat2> {
    let c = stationary_covariance(system)?.c;
    let e = system.drift.expm(dt);
    Ok(c - e.conj() * c * e.transpose())
}

/// One linear update `a ← P a + L z` with `z` standard complex normal.
#[derive(Debug, Clone, Copy)]
struct Step {
    propagator: Mat2,
    noise: Mat2,
}

impl Step {
    fn new(system: &LinearSystem, config: &SimConfig) -> Result<Self> {
        let (propagator, cov) = match config.scheme {
            Scheme::ExactOu => (system.drift.expm(config.dt), increment_covariance(system, config.dt)?),
            Scheme::EulerMaruyama => (
                Mat2::identity() + system.drift.scale_re(config.dt),
                system.diffusion.scale_re(2.0 * config.dt),
            ),
        };
        // <ζ* ζᵀ> = Q means <ζ ζ†> = conj(Q)
        Ok(Step {
            propagator,
            noise: cov.conj().cholesky_psd(),
        })
    }

    #[inline]
    fn advance(&self, a: &Vec2, rng: &mut ChaCha8Rng) -> Vec2 {
        let z = [standard_complex(rng), standard_complex(rng)];
        let pa = self.propagator.mul_vec(a);
        let lz = self.noise.mul_vec(&z);
        [pa[0] + lz[0], pa[1] + lz[1]]
    }
}

#[inline]
fn standard_complex(rng: &mut ChaCha8Rng) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re * FRAC_1_SQRT_2, im * FRAC_1_SQRT_2)
}

fn splitmix(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// Generator for one `(system, config, stream_key)`; cheap to share across threads.
#[derive(Debug, Clone)]
pub struct Simulator {
    config: SimConfig,
    step: Step,
    key: [u8; 32],
}

impl Simulator {
    pub fn new(system: &LinearSystem, config: &SimConfig) -> Result<Self> {
        Self::with_stream_key(system, config, 0)
    }

    /// `stream_key` separates ensembles that share a base seed, e.g. the
    /// points of a coupling sweep.
    pub fn with_stream_key(system: &LinearSystem, config: &SimConfig, stream_key: u64) -> Result<Self> {
        system.ensure_stable()?;
        config.validate(system)?;
        let step = Step::new(system, config)?;
        let mut key = [0u8; 32];
        let mut s = config.base_seed ^ splitmix(stream_key);
        for chunk in key.chunks_mut(8) {
            s = splitmix(s);
            chunk.copy_from_slice(&s.to_le_bytes());
        }
        Ok(Simulator {
            config: *config,
            step,
            key,
        })
    }

    pub fn config(&self) -> &SimConfig {
        &self.config
    }

    pub fn rng(&self, realization: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::from_seed(self.key);
        rng.set_stream(realization);
        rng
    }

    /// Starts from `a = 0`, discards the burn-in and records `round(t_f/dt)` samples.
    pub fn trajectory(&self, realization: u64) -> Result<Trajectory> {
        let mut rng = self.rng(realization);
        let mut a = [ZERO, ZERO];
        for _ in 0..self.config.burn_steps() {
            a = self.step.advance(&a, &mut rng);
        }
        let n = self.config.recorded_len();
        let mut samples = Vec::with_capacity(n);
        for k in 0..n {
            samples.push(a);
            if k + 1 < n {
                a = self.step.advance(&a, &mut rng);
            }
        }
        if !a.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::Realization {
                index: realization,
                reason: "non-finite amplitude".into(),
            });
        }
        Ok(Trajectory {
            dt: self.config.dt,
            samples,
        })
    }
}

pub fn simulate_trajectory(system: &LinearSystem, config: &SimConfig, realization: u64) -> Result<Trajectory> {
    Simulator::new(system, config)?.trajectory(realization)
}

/// `config.n_realizations` independent trajectories, generated on demand.
#[derive(Debug, Clone)]
pub struct Ensemble {
    simulator: Simulator,
}

pub fn ensemble_run(system: &LinearSystem, config: &SimConfig) -> Result<Ensemble> {
    Ok(Ensemble {
        simulator: Simulator::new(system, config)?,
    })
}

impl Ensemble {
    pub fn from_simulator(simulator: Simulator) -> Self {
        Ensemble { simulator }
    }

    pub fn len(&self) -> u64 {
        self.simulator.config.n_realizations
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn simulator(&self) -> &Simulator {
        &self.simulator
    }

    /// Sequential stream of trajectories in realization order.
    pub fn iter(&self) -> impl Iterator<Item = Result<Trajectory>> + '_ {
        (0..self.len()).map(|i| self.simulator.trajectory(i))
    }

    /// Parallel fold over all realizations with a reduction order fixed by
    /// realization index (see [`parallel::fold_ordered`]).
    pub fn fold<A, I, F, M>(&self, init: I, fold: F, merge: M) -> Result<A>
    where
        A: Send,
        I: Fn() -> A + Sync,
        F: Fn(&mut A, u64, Trajectory) -> Result<()> + Sync,
        M: FnMut(&mut A, A),
    {
        parallel::fold_ordered(
            self.len(),
            init,
            |acc, i| {
                let traj = self.simulator.trajectory(i)?;
                fold(acc, i, traj)
            },
            merge,
        )
    }

    /// Parallel map in realization order.
    pub fn map<R, F>(&self, f: F) -> Result<Vec<R>>
    where
        R: Send,
        F: Fn(u64, Trajectory) -> Result<R> + Sync + Send,
    {
        parallel::map_ordered(self.len(), |i| f(i, self.simulator.trajectory(i)?))
    }
}
