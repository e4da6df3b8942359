//! Histogram of the flow maximum over single realizations, next to the
//! shape of 1/Φ(ω).

use critflow::analytic::{omega_cr, phi_potential};
use critflow::criticality::{extract_omega_max, Orientation};
use critflow::sde::{SimConfig, Simulator};
use critflow::spectral::{FlowEstimator, Periodogram, Window};
use critflow::{build_system, OscillatorPairParams};

fn main() -> critflow::Result<()> {
    let p = OscillatorPairParams::new(1e-3, 2e-3, 1.0, 0.0, 1.0).validate()?;
    let cr = omega_cr(&p);
    let p = p.with_coupling(1.2 * cr)?;
    let cfg = SimConfig {
        n_realizations: 400,
        ..SimConfig::defaults_for(&p)
    };
    let sim = Simulator::new(&build_system(&p), &cfg)?;
    let est = Periodogram::for_config(&cfg, Window::Rectangular, Some(3.0 * cr))?;
    let orientation = Orientation::for_params(&p, None)?;

    let bins = 12;
    let mut hist = vec![0usize; bins];
    for i in 0..cfg.n_realizations {
        let j = est.flow(&sim.trajectory(i)?, FlowEstimator::CrossPeriodogram)?;
        let w = extract_omega_max(&j, orientation)?;
        let b = (((w / cr + 3.0) / 6.0) * bins as f64).floor().clamp(0.0, bins as f64 - 1.0) as usize;
        hist[b] += 1;
    }
    let norm: f64 = (0..bins).map(|b| 1.0 / phi_potential(&p, centre(b, bins) * cr)).sum();
    println!("{:>9} {:>8} {:>10}", "ω/Ω_cr", "count", "1/Φ scaled");
    for (b, &count) in hist.iter().enumerate() {
        let shape = cfg.n_realizations as f64 / phi_potential(&p, centre(b, bins) * cr) / norm;
        println!("{:>9.2} {:>8} {:>10.1}", centre(b, bins), count, shape);
    }
    Ok(())
}

fn centre(b: usize, bins: usize) -> f64 {
    -3.0 + 6.0 * (b as f64 + 0.5) / bins as f64
}
