//! Order-parameter dispersion across a coupling sweep and the fitted exponent.
//!
//! cargo run --release --example dispersion_sweep -- [T2/T1] [realizations]

use critflow::analytic::omega_cr;
use critflow::criticality::{couplings_around_critical, dispersion_sweep, fit_critical_exponent, FitWindow, Side, SweepSettings};
use critflow::model::OscillatorPairParams;
use critflow::sde::SimTemplate;

fn main() -> critflow::Result<()> {
    let mut args = std::env::args().skip(1);
    let ratio: f64 = args.next().map_or(0.0, |s| s.parse().expect("ratio"));
    let n: u64 = args.next().map_or(200, |s| s.parse().expect("realizations"));

    let base = OscillatorPairParams::new(1e-3, 2e-3, 1e-3, 1.0, ratio).validate()?;
    let cr = omega_cr(&base);
    let settings = SweepSettings {
        sim: SimTemplate {
            n_realizations: n,
            ..SimTemplate::default()
        },
        ..SweepSettings::default()
    };
    let couplings = couplings_around_critical(cr, 25, 0.05, 0.5);
    let sweep = dispersion_sweep(&base, &couplings, &settings)?;

    println!("{:>10} {:>12} {:>12} {:>12}", "omega/cr", "<w_max>/cr", "D/cr^2", "se/cr^2");
    for p in &sweep.points {
        println!(
            "{:>10.4} {:>12.4} {:>12.5} {:>12.5}",
            p.coupling / cr,
            p.mean_omega_max / cr,
            p.dispersion / (cr * cr),
            p.dispersion_stderr / (cr * cr)
        );
    }
    if let Some(peak) = sweep.peak() {
        println!("peak at {:.4} omega_cr", peak.coupling / cr);
    }
    for side in [Side::Below, Side::Above] {
        match fit_critical_exponent(&sweep, FitWindow::default(), side) {
            Ok(fit) => println!(
                "{:<6} alpha = {:.3} ± {:.3}, r2 = {:.3}",
                side.as_str(),
                fit.exponent,
                fit.exponent_stderr,
                fit.r_squared
            ),
            Err(e) => println!("{:<6} fit failed: {e}", side.as_str()),
        }
    }
    Ok(())
}
