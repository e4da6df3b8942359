//! Ensemble-averaged energy-flow spectrum below, at and above the critical
//! coupling, compared with the closed form.
//!
//! cargo run --release --example flow_spectrum -- [realizations]

use critflow::analytic::{energy_flow, omega_cr};
use critflow::sde::{ensemble_run, SimConfig};
use critflow::spectral::{ensemble_flow, FlowEstimator, Periodogram, Window};
use critflow::{build_system, OscillatorPairParams};

fn main() -> critflow::Result<()> {
    let n: u64 = std::env::args().nth(1).map_or(500, |s| s.parse().expect("realizations"));
    let base = OscillatorPairParams::new(1e-3, 2e-3, 1e-3, 0.0, 1.0).validate()?;
    let cr = omega_cr(&base);
    for ratio in [0.67, 1.0, 3.0] {
        let p = base.with_coupling(ratio * cr)?;
        let cfg = SimConfig {
            n_realizations: n,
            ..SimConfig::defaults_for(&p)
        };
        let est = Periodogram::for_config(&cfg, Window::Rectangular, Some(5.0 * cr))?;
        let avg = ensemble_flow(&ensemble_run(&build_system(&p), &cfg)?, &est, FlowEstimator::CrossPeriodogram)?;
        let mut sq = 0.0;
        for (w, j) in avg.mean.iter() {
            sq += (j / energy_flow(&p, w) - 1.0).powi(2);
        }
        println!("Ω = {ratio:.2} Ω_cr: RMS relative deviation {:.3}", (sq / avg.mean.len() as f64).sqrt());
        for k in (0..avg.mean.len()).step_by(avg.mean.len() / 10) {
            let w = avg.mean.freqs[k];
            println!(
                "  ω/Ω_cr = {:>6.2}  J = {:>9.3} ± {:<7.3} exact {:>9.3}",
                w / cr,
                avg.mean.values[k],
                avg.stderr.values[k],
                energy_flow(&p, w)
            );
        }
    }
    Ok(())
}
