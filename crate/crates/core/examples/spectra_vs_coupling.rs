//! Closed-form oscillator spectra at equal temperatures for couplings on
//! both sides of the exceptional point.

use critflow::analytic::{count_peaks, coupling_landmarks, spectrum_matrix};
use critflow::OscillatorPairParams;

fn main() -> critflow::Result<()> {
    let base = OscillatorPairParams::new(1e-3, 2e-3, 0.0, 1.0, 1.0).validate()?;
    let ep = coupling_landmarks(&base).omega_ep;
    let freqs: Vec<f64> = (-2000..=2000).map(|k| k as f64 * 5e-6).collect();
    println!("{:>8} {:>10} {:>10} {:>12} {:>12}", "Ω/Ω_EP", "peaks S11", "peaks S22", "S11(0)", "S22(0)");
    for ratio in [0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 4.0] {
        let p = base.with_coupling(ratio * ep)?;
        let s11: Vec<f64> = freqs.iter().map(|&w| spectrum_matrix(&p, w).get(0, 0).re).collect();
        let s22: Vec<f64> = freqs.iter().map(|&w| spectrum_matrix(&p, w).get(1, 1).re).collect();
        let zero = spectrum_matrix(&p, 0.0);
        println!(
            "{:>8.2} {:>10} {:>10} {:>12.3} {:>12.3}",
            ratio,
            count_peaks(&s11),
            count_peaks(&s22),
            zero.get(0, 0).re,
            zero.get(1, 1).re
        );
    }
    Ok(())
}
