//! Run configuration read from TOML.
//!
//! Every block and key is optional except the physical parameters. Unknown
//! keys are rejected. [`RunConfig::resolve`] fills in defaults and checks
//! everything that can be checked before any work starts.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::analytic::omega_cr;
use crate::criticality::{couplings_around_critical, FitWindow, Side, SweepSettings, DEFAULT_HALF_WIDTH};
use crate::error::{Error, Result};
use crate::model::{build_system, OscillatorPairParams, ValidatedParams};
use crate::sde::SimTemplate;
use crate::spectral::{FlowEstimator, Window};

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Worker threads; defaults to the machine's parallelism. Not part of
    /// the reproducibility stamp since results do not depend on it.
    #[serde(default, skip_serializing)]
    pub workers: Option<usize>,
    pub params: ParamsBlock,
    #[serde(default)]
    pub sim: SimTemplate,
    #[serde(default)]
    pub spectral: SpectralBlock,
    #[serde(default)]
    pub criticality: CriticalityBlock,
    #[serde(default)]
    pub output: OutputBlock,
    #[serde(default)]
    pub analytic: AnalyticBlock,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsBlock {
    pub gamma1: f64,
    pub gamma2: f64,
    /// Absolute coupling. Exactly one of `coupling` and `coupling_over_cr`.
    #[serde(default)]
    pub coupling: Option<f64>,
    #[serde(default)]
    pub coupling_over_cr: Option<f64>,
    pub temp1: f64,
    pub temp2: f64,
    #[serde(default)]
    pub sweep: Option<SweepBlock>,
}

/// Couplings for `sweep`: an explicit list, or log-spaced offsets around `Ω_cr`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepBlock {
    #[serde(default)]
    pub couplings: Option<Vec<f64>>,
    #[serde(default)]
    pub couplings_over_cr: Option<Vec<f64>>,
    #[serde(default = "default_per_side")]
    pub per_side: usize,
    #[serde(default = "default_offset_lo")]
    pub offset_lo: f64,
    #[serde(default = "default_offset_hi")]
    pub offset_hi: f64,
}

fn default_per_side() -> usize {
    25
}
fn default_offset_lo() -> f64 {
    0.05
}
fn default_offset_hi() -> f64 {
    0.5
}

impl Default for SweepBlock {
    fn default() -> Self {
        SweepBlock {
            couplings: None,
            couplings_over_cr: None,
            per_side: default_per_side(),
            offset_lo: default_offset_lo(),
            offset_hi: default_offset_hi(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectralBlock {
    #[serde(default)]
    pub window: Window,
    #[serde(default)]
    pub estimator: FlowEstimator,
    /// Grid half-width in units of `max(Ω_cr, Ω)`.
    #[serde(default = "default_half_width")]
    pub half_width: f64,
}

fn default_half_width() -> f64 {
    DEFAULT_HALF_WIDTH
}

impl Default for SpectralBlock {
    fn default() -> Self {
        SpectralBlock {
            window: Window::Rectangular,
            estimator: FlowEstimator::CrossPeriodogram,
            half_width: DEFAULT_HALF_WIDTH,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CriticalityBlock {
    #[serde(default)]
    pub fit_window: FitWindow,
    #[serde(default)]
    pub side: Side,
    #[serde(default)]
    pub flow_sign: Option<f64>,
    #[serde(default)]
    pub magnitude: bool,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TrajectoryFormat {
    #[default]
    Csv,
    /// Little-endian `f64` records `t, re a1, im a1, re a2, im a2`.
    Binary,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputBlock {
    /// Left out of the stamp so that reruns into different directories
    /// produce identical files.
    #[serde(default = "default_directory", skip_serializing)]
    pub directory: PathBuf,
    /// Single-realization flow spectra written by `simulate`.
    #[serde(default)]
    pub realization_dumps: u64,
    /// Raw trajectories written by `simulate`.
    #[serde(default)]
    pub trajectory_dumps: u64,
    #[serde(default)]
    pub trajectory_format: TrajectoryFormat,
}

fn default_directory() -> PathBuf {
    PathBuf::from("out")
}

impl Default for OutputBlock {
    fn default() -> Self {
        OutputBlock {
            directory: default_directory(),
            realization_dumps: 0,
            trajectory_dumps: 0,
            trajectory_format: TrajectoryFormat::Csv,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalyticBlock {
    /// Points on the closed-form frequency grid (odd, so `ω = 0` is on it).
    #[serde(default = "default_points")]
    pub points: usize,
    /// Temperature ratios `T2/T1` for the splitting table.
    #[serde(default = "default_ratios")]
    pub split_ratios: Vec<f64>,
}

fn default_points() -> usize {
    2001
}

fn default_ratios() -> Vec<f64> {
    vec![0.0, 0.01, 0.1, 0.2, 0.5, 1.0, 2.0, 5.0, 10.0]
}

impl Default for AnalyticBlock {
    fn default() -> Self {
        AnalyticBlock {
            points: default_points(),
            split_ratios: default_ratios(),
        }
    }
}

/// Environment variable that replaces `output.directory`.
pub const OUTPUT_DIR_ENV: &str = "CRITFLOW_OUTPUT_DIR";

/// A checked configuration with every default made explicit.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Resolved {
    #[serde(skip)]
    pub workers: Option<usize>,
    pub params: ValidatedParams,
    pub omega_cr: f64,
    pub sweep_couplings: Vec<f64>,
    pub sim: SimTemplate,
    pub spectral: SpectralBlock,
    pub criticality: CriticalityBlock,
    pub output: OutputBlock,
    pub analytic: AnalyticBlock,
}

impl RunConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.message().trim().to_string()))
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    /// Validates and fills defaults. `output_override` replaces the output
    /// directory (normally taken from [`OUTPUT_DIR_ENV`]).
    pub fn resolve(&self, output_override: Option<PathBuf>) -> Result<Resolved> {
        let p = &self.params;
        // Ω_cr depends on the rates only, so it is known before the coupling is
        let cr = ((p.gamma1 * p.gamma1 + p.gamma2 * p.gamma2) / 2.0).sqrt();
        let coupling = match (p.coupling, p.coupling_over_cr) {
            (Some(c), None) => c,
            (None, Some(r)) => r * cr,
            (None, None) => return Err(Error::Config("params: set coupling or coupling_over_cr".into())),
            (Some(_), Some(_)) => {
                return Err(Error::Config("params: coupling and coupling_over_cr are exclusive".into()))
            }
        };
        let params = OscillatorPairParams::new(p.gamma1, p.gamma2, coupling, p.temp1, p.temp2).validate()?;
        if let Some(w) = self.workers {
            if w == 0 {
                return Err(Error::Config("workers must be at least 1".into()));
            }
        }

        let sweep_couplings = match &p.sweep {
            None => couplings_around_critical(cr, default_per_side(), default_offset_lo(), default_offset_hi()),
            Some(s) => match (&s.couplings, &s.couplings_over_cr) {
                (Some(c), None) => c.clone(),
                (None, Some(r)) => r.iter().map(|x| x * cr).collect(),
                (None, None) => {
                    if !(s.offset_lo > 0.0 && s.offset_hi > s.offset_lo && s.offset_hi < 1.0) || s.per_side == 0 {
                        return Err(Error::Config(
                            "params.sweep: need per_side >= 1 and 0 < offset_lo < offset_hi < 1".into(),
                        ));
                    }
                    couplings_around_critical(cr, s.per_side, s.offset_lo, s.offset_hi)
                }
                (Some(_), Some(_)) => {
                    return Err(Error::Config(
                        "params.sweep: couplings and couplings_over_cr are exclusive".into(),
                    ))
                }
            },
        };
        for &om in &sweep_couplings {
            params.with_coupling(om).map_err(|e| e.at_coupling(om))?;
        }

        // every simulation the config can trigger must have a valid step
        for &om in std::iter::once(&coupling).chain(&sweep_couplings) {
            let q = params.with_coupling(om)?;
            self.sim.resolve(&q).validate(&build_system(&q)).map_err(|e| e.at_coupling(om))?;
        }
        if self.sim.n_realizations == 0 {
            return Err(Error::Config("sim.n_realizations must be positive".into()));
        }
        if !(self.spectral.half_width > 0.0 && self.spectral.half_width.is_finite()) {
            return Err(Error::Config("spectral.half_width must be positive".into()));
        }
        let fw = self.criticality.fit_window;
        if !(fw.lo > 0.0 && fw.hi > fw.lo && fw.hi.is_finite()) {
            return Err(Error::Config("criticality.fit_window: need 0 < lo < hi".into()));
        }
        if let Some(s) = self.criticality.flow_sign {
            if s != 1.0 && s != -1.0 {
                return Err(Error::Config("criticality.flow_sign must be 1 or -1".into()));
            }
        }
        if self.analytic.points < 3 {
            return Err(Error::Config("analytic.points must be at least 3".into()));
        }
        if self.analytic.split_ratios.iter().any(|r| !(*r >= 0.0 && r.is_finite())) {
            return Err(Error::Config("analytic.split_ratios must be finite and non-negative".into()));
        }

        let mut output = self.output.clone();
        if let Some(dir) = output_override {
            output.directory = dir;
        }
        Ok(Resolved {
            workers: self.workers,
            omega_cr: omega_cr(&params),
            params,
            sweep_couplings,
            sim: self.sim,
            spectral: self.spectral,
            criticality: self.criticality,
            output,
            analytic: self.analytic.clone(),
        })
    }
}

impl Resolved {
    pub fn sweep_settings(&self) -> SweepSettings {
        SweepSettings {
            sim: self.sim,
            window: self.spectral.window,
            estimator: self.spectral.estimator,
            half_width: self.spectral.half_width,
            flow_sign: self.criticality.flow_sign,
            magnitude: self.criticality.magnitude,
        }
    }

    /// The stamp written at the top of every CSV.
    pub fn stamp(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }
}
