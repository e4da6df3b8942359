//! Eigenvalues of the drift, the exceptional and critical couplings, and the
//! analytic position of the flow maximum as the coupling grows.

use critflow::analytic::{coupling_landmarks, modal_decomposition, omega_max_analytic};
use critflow::OscillatorPairParams;

fn main() -> critflow::Result<()> {
    let base = OscillatorPairParams::new(1e-3, 2e-3, 0.0, 1.0, 0.0).validate()?;
    let lm = coupling_landmarks(&base);
    println!("omega_ep = {:.6e}", lm.omega_ep);
    println!("omega_cr = {:.6e}", lm.omega_cr);
    println!();
    println!("{:>9} {:>12} {:>12} {:>12} {:>12} {:>12}", "Ω/Ω_cr", "Re λ1", "Im λ1", "Re λ2", "Im λ2", "ω_max/Ω_cr");
    for ratio in [0.1, 0.2, 0.3162, 0.5, 0.8, 1.0, 1.2, 2.0, 3.0] {
        let p = base.with_coupling(ratio * lm.omega_cr)?;
        let m = modal_decomposition(&p);
        let peak = omega_max_analytic(&p).into_iter().fold(0.0, f64::max);
        println!(
            "{:>9.4} {:>12.4e} {:>12.4e} {:>12.4e} {:>12.4e} {:>12.4}",
            ratio,
            m.lambda1.re,
            m.lambda1.im,
            m.lambda2.re,
            m.lambda2.im,
            peak / lm.omega_cr
        );
    }
    Ok(())
}
