//! One long trajectory from each integration scheme; time-averaged second
//! moments against the stationary covariance.

use critflow::lyapunov::stationary_covariance;
use critflow::sde::{simulate_trajectory, Scheme, SimConfig};
use critflow::{build_system, OscillatorPairParams};

fn main() -> critflow::Result<()> {
    let p = OscillatorPairParams::new(1e-3, 2e-3, 1e-3, 1.0, 0.3).validate()?;
    let sys = build_system(&p);
    let c = stationary_covariance(&sys)?.c;
    println!("stationary: <|a1|²> = {:.4}, <|a2|²> = {:.4}", c.get(0, 0).re, c.get(1, 1).re);
    for scheme in [Scheme::ExactOu, Scheme::EulerMaruyama] {
        let cfg = SimConfig {
            scheme,
            t_f: 5000.0 / 1e-3,
            ..SimConfig::defaults_for(&p)
        };
        let t = simulate_trajectory(&sys, &cfg, 0)?;
        let m = |k: usize| t.component(k).map(|z| z.norm_sqr()).sum::<f64>() / t.len() as f64;
        println!("{scheme:?}: {} samples, <|a1|²> = {:.4}, <|a2|²> = {:.4}", t.len(), m(0), m(1));
    }
    Ok(())
}
