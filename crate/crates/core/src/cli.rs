//! Batch front end: one TOML config in, CSV files out.
//!
//! Exit codes: 0 success, 1 configuration or input error, 2 numerical
//! failure, 3 failed verification. Failures also print one JSON line on
//! stderr: `{"error":{"code":..,"kind":..,"message":..}}`.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde_json::json;

use crate::analytic::{
    self, coupling_landmarks, energy_flow, modal_decomposition, omega_max_analytic, phi_potential, spectrum_matrix,
    Oscillator, SplitCriterion, SplitSearch,
};
use crate::config::{Resolved, RunConfig, TrajectoryFormat, OUTPUT_DIR_ENV};
use crate::criticality::{dispersion_sweep, fit_critical_exponent, CriticalityPoint, CriticalitySweep};
use crate::error::Error;
use crate::linalg::Mat2;
use crate::model::{build_system, OscillatorPairParams};
use crate::sde::{ensemble_run, Simulator, Trajectory};
use crate::spectral::{ensemble_flow, ensemble_spectrum, Periodogram, SpectralGrid};
use crate::verify;

#[derive(Debug, Parser)]
#[command(name = "critflow", version, about = "Flow spectra and order-parameter statistics of two coupled oscillators")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, clap::Args)]
struct Common {
    /// Run configuration (TOML).
    #[arg(short, long)]
    config: PathBuf,
    /// Worker threads; overrides the config's `workers`.
    #[arg(short, long)]
    workers: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Closed-form spectra, flow, landmarks and splitting couplings.
    Analytic(Common),
    /// Ensemble-averaged spectra and optional single-realization dumps.
    Simulate(Common),
    /// Order-parameter dispersion across the configured couplings.
    Sweep(Common),
    /// Critical-exponent fit from a sweep CSV.
    Fit {
        #[command(flatten)]
        common: Common,
        /// Sweep CSV written by `sweep`; defaults to `sweep.csv` in the output directory.
        #[arg(short, long)]
        input: Option<PathBuf>,
    },
    /// Cross-checks between independent computations.
    Verify(Common),
}

/// Process-level failure with its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub kind: &'static str,
    pub message: String,
}

impl Failure {
    fn config(message: impl Into<String>) -> Self {
        Failure {
            code: 1,
            kind: "config",
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_numerical() {
            Failure {
                code: 2,
                kind: "numerical",
                message: e.to_string(),
            }
        } else {
            Failure::config(e.to_string())
        }
    }
}

/// A file to be written once every computation has succeeded.
struct Artifact {
    name: String,
    bytes: Vec<u8>,
}

/// Runs the CLI and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            if code != 0 {
                report(&Failure::config(e.kind().to_string()));
            }
            return code;
        }
    };
    match execute(cli) {
        Ok(code) => code,
        Err(f) => {
            report(&f);
            f.code
        }
    }
}

fn report(f: &Failure) {
    let line = json!({"error": {"code": f.code, "kind": f.kind, "message": f.message}});
    eprintln!("{line}");
}

fn execute(cli: Cli) -> Result<i32, Failure> {
    let common = match &cli.command {
        Command::Analytic(c) | Command::Simulate(c) | Command::Sweep(c) | Command::Verify(c) => c,
        Command::Fit { common, .. } => common,
    };
    let raw = RunConfig::from_path(&common.config)?;
    let env_dir = std::env::var_os(OUTPUT_DIR_ENV).map(PathBuf::from);
    let resolved = raw.resolve(env_dir)?;
    let workers = common.workers.or(resolved.workers);
    if workers == Some(0) {
        return Err(Failure::config("workers must be at least 1"));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.unwrap_or(0))
        .build()
        .map_err(|e| Failure::config(format!("worker pool: {e}")))?;

    let (artifacts, code) = pool.install(|| -> Result<(Vec<Artifact>, i32), Failure> {
        match &cli.command {
            Command::Analytic(_) => Ok((analytic_outputs(&resolved)?, 0)),
            Command::Simulate(_) => Ok((simulate_outputs(&resolved)?, 0)),
            Command::Sweep(_) => Ok((sweep_outputs(&resolved)?, 0)),
            Command::Fit { input, .. } => {
                let path = input.clone().unwrap_or_else(|| resolved.output.directory.join("sweep.csv"));
                Ok((fit_outputs(&resolved, &path)?, 0))
            }
            Command::Verify(_) => verify_outputs(&resolved),
        }
    })?;
    write_all(&resolved.output.directory, &artifacts)?;
    if code == 3 {
        return Err(Failure {
            code,
            kind: "verification",
            message: "one or more checks failed".into(),
        });
    }
    Ok(code)
}

fn write_all(dir: &Path, artifacts: &[Artifact]) -> Result<(), Failure> {
    let io = |e: std::io::Error| Failure::config(format!("{}: {e}", dir.display()));
    std::fs::create_dir_all(dir).map_err(io)?;
    for a in artifacts {
        std::fs::write(dir.join(&a.name), &a.bytes).map_err(io)?;
    }
    Ok(())
}

/// CSV with a `# config:` stamp line and a header row.
struct Table {
    writer: csv::Writer<Vec<u8>>,
}

impl Table {
    fn new(stamp: &str, header: &[&str]) -> Self {
        let mut buf = Vec::new();
        buf.extend_from_slice(format!("# config: {stamp}\n").as_bytes());
        let mut writer = csv::Writer::from_writer(buf);
        writer.write_record(header).expect("in-memory write");
        Table { writer }
    }

    fn row<I: IntoIterator<Item = String>>(&mut self, fields: I) {
        self.writer.write_record(fields.into_iter().collect::<Vec<_>>()).expect("in-memory write");
    }

    fn nums(&mut self, values: &[f64]) {
        self.row(values.iter().map(|v| v.to_string()));
    }

    fn finish(self, name: &str) -> Artifact {
        Artifact {
            name: name.to_string(),
            bytes: self.writer.into_inner().expect("in-memory flush"),
        }
    }
}

const SPECTRUM_HEADER: [&str; 5] = ["omega", "S11", "S22", "ReS12", "ImS12"];

fn spectrum_table(stamp: &str, grid: &SpectralGrid<Mat2>, name: &str) -> Artifact {
    let mut t = Table::new(stamp, &SPECTRUM_HEADER);
    for (w, s) in grid.iter() {
        t.nums(&[w, s.get(0, 0).re, s.get(1, 1).re, s.get(0, 1).re, s.get(0, 1).im]);
    }
    t.finish(name)
}

fn analytic_grid(resolved: &Resolved) -> Vec<f64> {
    let hw = resolved.spectral.half_width * resolved.omega_cr.max(resolved.params.coupling());
    let n = resolved.analytic.points | 1;
    let half = (n / 2) as i64;
    (-half..=half).map(|k| hw * k as f64 / half as f64).collect()
}

fn analytic_outputs(resolved: &Resolved) -> Result<Vec<Artifact>, Failure> {
    let p = &resolved.params;
    let stamp = resolved.stamp();
    let freqs = analytic_grid(resolved);

    let values: Vec<Mat2> = freqs.iter().map(|&w| spectrum_matrix(p, w)).collect();
    let spectrum = spectrum_table(&stamp, &SpectralGrid::new(freqs.clone(), values)?, "analytic_spectrum.csv");

    let mut flow = Table::new(&stamp, &["omega", "J", "Phi"]);
    for &w in &freqs {
        flow.nums(&[w, energy_flow(p, w), phi_potential(p, w)]);
    }

    let lm = coupling_landmarks(p);
    let modes = modal_decomposition(p);
    let mut marks = Table::new(&stamp, &["quantity", "value"]);
    let mut mark = |k: &str, v: f64| marks.row([k.to_string(), v.to_string()]);
    mark("omega_ep", lm.omega_ep);
    mark("omega_cr", lm.omega_cr);
    mark("coupling", p.coupling());
    mark("lambda1_re", modes.lambda1.re);
    mark("lambda1_im", modes.lambda1.im);
    mark("lambda2_re", modes.lambda2.re);
    mark("lambda2_im", modes.lambda2.im);
    for (k, w) in omega_max_analytic(p).into_iter().enumerate() {
        mark(&format!("omega_max_{}", k + 1), w);
    }
    let search = SplitSearch::for_params(p);
    for (name, which) in [("split_1", Oscillator::First), ("split_2", Oscillator::Second)] {
        let s = analytic::splitting_coupling(p, which, SplitCriterion::Curvature, search);
        mark(name, s.unwrap_or(f64::NAN));
    }

    let mut split = Table::new(&stamp, &["ratio", "split_1", "split_2", "split_1_over_ep", "split_2_over_ep"]);
    for &r in &resolved.analytic.split_ratios {
        let q = OscillatorPairParams::new(p.gamma1(), p.gamma2(), p.coupling(), 1.0, r).validate()?;
        let s1 = analytic::splitting_coupling(&q, Oscillator::First, SplitCriterion::Curvature, search).unwrap_or(f64::NAN);
        let s2 = analytic::splitting_coupling(&q, Oscillator::Second, SplitCriterion::Curvature, search).unwrap_or(f64::NAN);
        split.nums(&[r, s1, s2, s1 / lm.omega_ep, s2 / lm.omega_ep]);
    }

    Ok(vec![
        spectrum,
        flow.finish("analytic_flow.csv"),
        marks.finish("landmarks.csv"),
        split.finish("splitting.csv"),
    ])
}

fn trajectory_artifact(stamp: &str, traj: &Trajectory, format: TrajectoryFormat, k: u64) -> Artifact {
    let t = |n: usize| n as f64 * traj.dt;
    match format {
        TrajectoryFormat::Csv => {
            let mut table = Table::new(stamp, &["t", "re_a1", "im_a1", "re_a2", "im_a2"]);
            for (n, s) in traj.samples.iter().enumerate() {
                table.nums(&[t(n), s[0].re, s[0].im, s[1].re, s[1].im]);
            }
            table.finish(&format!("trajectory_{k}.csv"))
        }
        TrajectoryFormat::Binary => {
            let mut bytes = Vec::with_capacity(traj.len() * 40);
            for (n, s) in traj.samples.iter().enumerate() {
                for v in [t(n), s[0].re, s[0].im, s[1].re, s[1].im] {
                    bytes.extend_from_slice(&v.to_le_bytes());
                }
            }
            Artifact {
                name: format!("trajectory_{k}.bin"),
                bytes,
            }
        }
    }
}

fn simulate_outputs(resolved: &Resolved) -> Result<Vec<Artifact>, Failure> {
    let p = &resolved.params;
    let stamp = resolved.stamp();
    let config = resolved.sim.resolve(p);
    let sys = build_system(p);
    let hw = resolved.spectral.half_width * resolved.omega_cr.max(p.coupling());
    let est = Periodogram::for_config(&config, resolved.spectral.window, Some(hw))?;
    let ens = ensemble_run(&sys, &config)?;

    let spec = ensemble_spectrum(&ens, &est)?;
    let flow = ensemble_flow(&ens, &est, resolved.spectral.estimator)?;
    let mut out = vec![
        spectrum_table(&stamp, &spec.mean, "sim_spectrum.csv"),
        spectrum_table(&stamp, &spec.stderr, "sim_spectrum_stderr.csv"),
    ];
    let mut t = Table::new(&stamp, &["omega", "J_mean", "J_stderr"]);
    for k in 0..flow.mean.len() {
        t.nums(&[flow.mean.freqs[k], flow.mean.values[k], flow.stderr.values[k]]);
    }
    out.push(t.finish("sim_flow.csv"));

    let sim: &Simulator = ens.simulator();
    let dumps = resolved.output.realization_dumps.min(config.n_realizations);
    for k in 0..dumps {
        let j = est.flow(&sim.trajectory(k)?, resolved.spectral.estimator)?;
        let mut t = Table::new(&stamp, &["omega", "J", "inv_Phi"]);
        for (w, v) in j.iter() {
            t.nums(&[w, *v, 1.0 / phi_potential(p, w)]);
        }
        out.push(t.finish(&format!("realization_{k}_flow.csv")));
    }
    for k in 0..resolved.output.trajectory_dumps.min(config.n_realizations) {
        out.push(trajectory_artifact(&stamp, &sim.trajectory(k)?, resolved.output.trajectory_format, k));
    }
    Ok(out)
}

const SWEEP_HEADER: [&str; 5] = ["omega_coupling", "mean_omega_max", "disp_omega_max", "disp_stderr", "n"];

fn sweep_outputs(resolved: &Resolved) -> Result<Vec<Artifact>, Failure> {
    let sweep = dispersion_sweep(&resolved.params, &resolved.sweep_couplings, &resolved.sweep_settings())?;
    let mut t = Table::new(&resolved.stamp(), &SWEEP_HEADER);
    for pt in &sweep.points {
        t.row([
            pt.coupling.to_string(),
            pt.mean_omega_max.to_string(),
            pt.dispersion.to_string(),
            pt.dispersion_stderr.to_string(),
            pt.n.to_string(),
        ]);
    }
    Ok(vec![t.finish("sweep.csv")])
}

/// Reads the columns written by `sweep`; other columns are ignored.
pub fn read_sweep_csv(path: &Path, omega_cr: f64) -> Result<CriticalitySweep, Error> {
    let bad = |m: String| Error::Config(format!("{}: {m}", path.display()));
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_path(path)
        .map_err(|e| bad(e.to_string()))?;
    let headers = reader.headers().map_err(|e| bad(e.to_string()))?.clone();
    let col = |name: &str| headers.iter().position(|h| h == name).ok_or_else(|| bad(format!("missing column {name}")));
    let (ic, im, id, is, inn) = (
        col(SWEEP_HEADER[0])?,
        col(SWEEP_HEADER[1])?,
        col(SWEEP_HEADER[2])?,
        col(SWEEP_HEADER[3])?,
        col(SWEEP_HEADER[4])?,
    );
    let mut points = Vec::new();
    for (line, rec) in reader.records().enumerate() {
        let rec = rec.map_err(|e| bad(e.to_string()))?;
        let num = |i: usize| -> Result<f64, Error> {
            rec.get(i)
                .and_then(|s| s.trim().parse::<f64>().ok())
                .ok_or_else(|| bad(format!("row {}: column {} is not a number", line + 1, &headers[i])))
        };
        let (mean, disp) = (num(im)?, num(id)?);
        points.push(CriticalityPoint {
            coupling: num(ic)?,
            n: num(inn)? as u64,
            mean_omega_max: mean,
            mean_omega_max_sq: disp + mean * mean,
            mean_abs_omega_max: f64::NAN,
            mean_stderr: f64::NAN,
            dispersion: disp,
            dispersion_stderr: num(is)?,
            samples: vec![],
        });
    }
    if points.is_empty() {
        return Err(Error::Empty("sweep CSV has no rows"));
    }
    Ok(CriticalitySweep { omega_cr, points })
}

fn fit_outputs(resolved: &Resolved, input: &Path) -> Result<Vec<Artifact>, Failure> {
    let sweep = read_sweep_csv(input, resolved.omega_cr)?;
    let c = &resolved.criticality;
    let fit = fit_critical_exponent(&sweep, c.fit_window, c.side)?;
    let mut t = Table::new(&resolved.stamp(), &["alpha", "alpha_stderr", "r2", "window_lo", "window_hi", "side"]);
    t.row([
        fit.exponent.to_string(),
        fit.exponent_stderr.to_string(),
        fit.r_squared.to_string(),
        fit.window.lo.to_string(),
        fit.window.hi.to_string(),
        fit.side.as_str().to_string(),
    ]);
    Ok(vec![t.finish("fit.csv")])
}

fn verify_outputs(resolved: &Resolved) -> Result<(Vec<Artifact>, i32), Failure> {
    let checks = verify::run_all(resolved)?;
    let mut t = Table::new(&resolved.stamp(), &["check", "passed", "value", "tolerance"]);
    for c in &checks {
        println!(
            "{} {} value={} tolerance={}",
            if c.passed { "PASS" } else { "FAIL" },
            c.name,
            c.value,
            c.tolerance
        );
        t.row([c.name.to_string(), c.passed.to_string(), c.value.to_string(), c.tolerance.to_string()]);
    }
    let code = if checks.iter().all(|c| c.passed) { 0 } else { 3 };
    Ok((vec![t.finish("verify.csv")], code))
}
