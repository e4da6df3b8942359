//! Stationary covariance from the Lyapunov equation, checked against the
//! integrated spectrum and the closed form.

use critflow::analytic::spectrum_matrix;
use critflow::lyapunov::{integrated_spectrum, lyapunov_residual, spectrum_resolvent, stationary_covariance};
use critflow::{build_system, OscillatorPairParams};

fn main() -> critflow::Result<()> {
    let p = OscillatorPairParams::new(1e-3, 2e-3, 1.5e-3, 1.0, 0.2).validate()?;
    let sys = build_system(&p);
    let st = stationary_covariance(&sys)?;
    let (res, scale) = lyapunov_residual(&sys, &st.c);
    println!("C = {:?}", st.c.0);
    println!("residual / scale = {:.2e}", res / scale);
    println!("stationary flow indicator Im C12 = {:.6}", st.flow_indicator());

    let int = integrated_spectrum(&sys, 200.0 * p.max_rate(), 400_000);
    for i in 0..2 {
        println!("∫S{0}{0} dω = {1:.6}, C{0}{0} = {2:.6}", i + 1, int.get(i, i).re, st.c.get(i, i).re);
    }

    let worst = (-50..=50)
        .map(|k| k as f64 * 1e-4)
        .map(|w| {
            let a = spectrum_matrix(&p, w);
            (a - spectrum_resolvent(&sys, w)).max_abs() / a.max_abs()
        })
        .fold(0.0, f64::max);
    println!("closed form vs resolvent: max relative deviation {worst:.2e}");
    Ok(())
}
