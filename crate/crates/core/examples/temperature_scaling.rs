//! Multiplying both temperatures leaves every order-parameter sample
//! unchanged and rescales the spectra.

use critflow::analytic::omega_cr;
use critflow::criticality::{temperature_ratio_invariance, SweepSettings};
use critflow::sde::SimTemplate;
use critflow::OscillatorPairParams;

fn main() -> critflow::Result<()> {
    let p = OscillatorPairParams::new(1e-3, 2e-3, 1.0, 1.0, 0.5).validate()?;
    let p = p.with_coupling(0.9 * omega_cr(&p))?;
    let settings = SweepSettings {
        sim: SimTemplate {
            n_realizations: 200,
            ..SimTemplate::default()
        },
        ..SweepSettings::default()
    };
    for scale in [1.0, 10.0, 100.0] {
        let r = temperature_ratio_invariance(&p, scale, &settings)?;
        println!(
            "×{scale:<5} samples {} mismatched {}  D = {:.6e} / {:.6e}  spectrum ratio error {:.1e}",
            r.samples, r.mismatched_samples, r.dispersion, r.dispersion_scaled, r.spectrum_ratio_error
        );
    }
    Ok(())
}
