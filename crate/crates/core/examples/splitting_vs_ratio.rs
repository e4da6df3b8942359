//! Couplings at which each oscillator's spectrum splits, as a function of
//! the temperature ratio, by the curvature test and by direct peak counting.

use critflow::analytic::{coupling_landmarks, splitting_coupling, Oscillator, SplitCriterion, SplitSearch};
use critflow::OscillatorPairParams;

fn main() -> critflow::Result<()> {
    println!("{:>7} {:>12} {:>12} {:>12} {:>12}", "T2/T1", "Ω1/Ω_EP", "(peaks)", "Ω2/Ω_EP", "(peaks)");
    for ratio in [0.0, 0.1, 0.5, 1.0, 2.0, 10.0] {
        let p = OscillatorPairParams::new(1e-3, 2e-3, 1e-3, 1.0, ratio).validate()?;
        let ep = coupling_landmarks(&p).omega_ep;
        let search = SplitSearch::for_params(&p);
        let peaks = SplitCriterion::default_peak_count(&p);
        let find = |which, criterion| splitting_coupling(&p, which, criterion, search).map_or(f64::NAN, |s| s / ep);
        println!(
            "{:>7.2} {:>12.5} {:>12.5} {:>12.5} {:>12.5}",
            ratio,
            find(Oscillator::First, SplitCriterion::Curvature),
            find(Oscillator::First, peaks),
            find(Oscillator::Second, SplitCriterion::Curvature),
            find(Oscillator::Second, peaks)
        );
    }
    Ok(())
}
