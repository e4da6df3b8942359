//! Closed-form results for the oscillator pair: eigensystem of the drift,
//! the exceptional and critical couplings, the fluctuation spectrum matrix,
//! the quartic denominator Φ(ω), the mean energy-flow spectrum and the
//! couplings at which the individual oscillator spectra split.

use std::f64::consts::PI;

use crate::linalg::{Mat2, Vec2, C64, I, ONE, ZERO};
use crate::model::ValidatedParams;

/// Relative discriminant below which the two eigenvalues count as coalesced.
pub const COALESCENCE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Eigenvectors {
    Pair([Vec2; 2]),
    /// Exceptional point: one eigenvector for the double eigenvalue.
    Coalesced(Vec2),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModalDecomposition {
    /// `-(γ1+γ2)/2 + √((γ1-γ2)² - 4Ω²)/2`
    pub lambda1: C64,
    /// `-(γ1+γ2)/2 - √((γ1-γ2)² - 4Ω²)/2`
    pub lambda2: C64,
    pub eigenvectors: Eigenvectors,
}

impl ModalDecomposition {
    pub fn is_coalesced(&self) -> bool {
        matches!(self.eigenvectors, Eigenvectors::Coalesced(_))
    }
}

pub fn modal_decomposition(params: &ValidatedParams) -> ModalDecomposition {
    let (g1, g2, om) = (params.gamma1(), params.gamma2(), params.coupling());
    let disc = (g1 - g2).powi(2) - 4.0 * om * om;
    let coalesced = om > 0.0 && disc.abs() <= COALESCENCE_TOL * (g1 + g2).powi(2);
    let root = if coalesced { ZERO } else { C64::new(disc, 0.0).sqrt() };
    let mean = C64::new(-(g1 + g2) / 2.0, 0.0);
    let lambda1 = mean + root * 0.5;
    let lambda2 = mean - root * 0.5;

    let eigenvectors = if om == 0.0 {
        // decoupled: λ = -γ1 belongs to the first axis
        let e1 = [ONE, ZERO];
        let e2 = [ZERO, ONE];
        if (lambda1.re + g1).abs() <= (lambda1.re + g2).abs() {
            Eigenvectors::Pair([e1, e2])
        } else {
            Eigenvectors::Pair([e2, e1])
        }
    } else {
        let first = |r: C64| I / (2.0 * om) * (C64::new(g2 - g1, 0.0) + r);
        if coalesced {
            Eigenvectors::Coalesced([first(ZERO), ONE])
        } else {
            Eigenvectors::Pair([[first(root), ONE], [first(-root), ONE]])
        }
    };
    ModalDecomposition {
        lambda1,
        lambda2,
        eigenvectors,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingLandmarks {
    /// Exceptional point `|γ2 - γ1| / 2`.
    pub omega_ep: f64,
    /// Critical point `√((γ1² + γ2²) / 2)`.
    pub omega_cr: f64,
}

pub fn coupling_landmarks(params: &ValidatedParams) -> CouplingLandmarks {
    let (g1, g2) = (params.gamma1(), params.gamma2());
    CouplingLandmarks {
        omega_ep: (g2 - g1).abs() / 2.0,
        omega_cr: ((g1 * g1 + g2 * g2) / 2.0).sqrt(),
    }
}

pub fn omega_cr(params: &ValidatedParams) -> f64 {
    coupling_landmarks(params).omega_cr
}

/// Φ(ω) = (γ1γ2 + Ω²)² - 2(Ω² - Ω_cr²)ω² + ω⁴, evaluated without cancellation.
pub fn phi_potential(params: &ValidatedParams, freq: f64) -> f64 {
    let (g1, g2, om) = (params.gamma1(), params.gamma2(), params.coupling());
    let cr2 = (g1 * g1 + g2 * g2) / 2.0;
    let shift = om * om - cr2;
    let w2 = freq * freq;
    if shift > 0.0 {
        // (ω² - shift)² + (γ1γ2 + Ω_cr²)(γ1γ2 + 2Ω² - Ω_cr²), both factors
        // positive above Ω_cr
        let floor = (g1 * g2 + cr2) * (g1 * g2 + om * om + shift);
        (w2 - shift).powi(2) + floor
    } else {
        (g1 * g2 + om * om).powi(2) - 2.0 * shift * w2 + w2 * w2
    }
}

/// Locations of the minima of Φ, i.e. of the maxima of the mean flow spectrum.
/// At exactly Ω = Ω_cr the single minimum at zero is reported.
pub fn omega_max_analytic(params: &ValidatedParams) -> Vec<f64> {
    let cr = omega_cr(params);
    let om = params.coupling();
    if om <= cr {
        vec![0.0]
    } else {
        let w = ((om - cr) * (om + cr)).sqrt();
        vec![w, -w]
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumMatrixValue {
    pub freq: f64,
    pub s: Mat2,
}

/// The 2×2 spectrum matrix at a single detuning, for the transform
/// convention `S(ω) = (1/2π) ∫ e^{-iωτ} <a*(τ) aᵀ(0)> dτ`.
///
/// The odd part `Re S12 ∝ ω` follows that convention; some references print
/// it with the opposite sign, which corresponds to `ω → -ω` off the diagonal.
pub fn spectrum_matrix(params: &ValidatedParams, freq: f64) -> Mat2 {
    let (g1, g2, om) = (params.gamma1(), params.gamma2(), params.coupling());
    let d1 = g1 * params.temp1();
    let d2 = g2 * params.temp2();
    let w = freq;
    let pre = 1.0 / (PI * phi_potential(params, w));
    let iw = C64::new(0.0, w);
    let s11 = d1 * (g2 * g2 + w * w) + d2 * om * om;
    let s22 = d2 * (g1 * g1 + w * w) + d1 * om * om;
    let s12 = I * om * ((C64::new(g1, 0.0) - iw) * d2 - (C64::new(g2, 0.0) + iw) * d1);
    let s21 = I * om * ((C64::new(g2, 0.0) - iw) * d1 - (C64::new(g1, 0.0) + iw) * d2);
    Mat2::new(C64::new(s11, 0.0), s12, s21, C64::new(s22, 0.0)).scale_re(pre)
}

pub fn spectrum_closed_form(params: &ValidatedParams, freqs: &[f64]) -> Vec<SpectrumMatrixValue> {
    freqs
        .iter()
        .map(|&freq| SpectrumMatrixValue {
            freq,
            s: spectrum_matrix(params, freq),
        })
        .collect()
}

/// Mean energy-flow spectrum `Ωγ1γ2(T2 - T1) / (πΦ(ω))` at one detuning.
pub fn energy_flow(params: &ValidatedParams, freq: f64) -> f64 {
    let num = params.coupling() * params.gamma1() * params.gamma2() * (params.temp2() - params.temp1());
    num / (PI * phi_potential(params, freq))
}

pub fn energy_flow_spectrum(params: &ValidatedParams, freqs: &[f64]) -> Vec<(f64, f64)> {
    freqs.iter().map(|&w| (w, energy_flow(params, w))).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Oscillator {
    First,
    Second,
}

impl Oscillator {
    pub fn index(self) -> usize {
        match self {
            Oscillator::First => 0,
            Oscillator::Second => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SplitCriterion {
    /// Sign change of `d²S_ii/dω²` at ω = 0.
    Curvature,
    /// Number of strict local maxima of `S_ii` on a dense symmetric grid.
    PeakCount { points: usize, half_width: f64 },
}

impl SplitCriterion {
    /// Peak counting on 100 001 points spanning `|ω| ≤ 10 max(γ1, γ2)`.
    pub fn default_peak_count(params: &ValidatedParams) -> Self {
        SplitCriterion::PeakCount {
            points: 100_001,
            half_width: 10.0 * params.gamma1().max(params.gamma2()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitSearch {
    /// Upper end of the coupling bracket `(0, upper]`.
    pub upper: f64,
    /// Relative width at which bisection stops.
    pub rel_tol: f64,
    /// Uniform scan points used to find the first transition.
    pub scan_points: usize,
}

impl SplitSearch {
    pub fn for_params(params: &ValidatedParams) -> Self {
        SplitSearch {
            upper: 10.0 * omega_cr(params),
            rel_tol: 1e-6,
            scan_points: 200,
        }
    }
}

/// `(A, B)` with `S_ii(ω) = (A + Bω²) / (πΦ(ω))`.
fn diagonal_numerator(params: &ValidatedParams, which: Oscillator) -> (f64, f64) {
    let (g1, g2, om) = (params.gamma1(), params.gamma2(), params.coupling());
    let d1 = g1 * params.temp1();
    let d2 = g2 * params.temp2();
    match which {
        Oscillator::First => (d1 * g2 * g2 + d2 * om * om, d1),
        Oscillator::Second => (d2 * g1 * g1 + d1 * om * om, d2),
    }
}

/// `sign(d²S_ii/dω² at 0)` is the sign of `BΦ(0) - A·Φ'(0)` with `Φ'` taken
/// with respect to ω². Along ω² the numerator of `dS/d(ω²)` is a downward
/// quadratic, so a positive value here is exactly the two-maximum regime.
fn has_split_curvature(params: &ValidatedParams, which: Oscillator) -> bool {
    let (a, b) = diagonal_numerator(params, which);
    let (g1, g2, om) = (params.gamma1(), params.gamma2(), params.coupling());
    let phi0 = (g1 * g2 + om * om).powi(2);
    let slope = g1 * g1 + g2 * g2 - 2.0 * om * om;
    b * phi0 - a * slope > 0.0
}

pub fn count_peaks(values: &[f64]) -> usize {
    values
        .windows(3)
        .filter(|w| w[1] > w[0] && w[1] > w[2])
        .count()
}

fn has_split_peak_count(params: &ValidatedParams, which: Oscillator, points: usize, half_width: f64) -> bool {
    let n = points.max(3);
    let step = 2.0 * half_width / (n - 1) as f64;
    let k = which.index();
    let values: Vec<f64> = (0..n)
        .map(|i| {
            let w = -half_width + step * i as f64;
            spectrum_matrix(params, w).get(k, k).re
        })
        .collect();
    count_peaks(&values) >= 2
}

/// Smallest coupling in `(0, search.upper]` at which `S_ii` has two maxima,
/// or `None` if no transition occurs in the bracket. Temperatures and rates
/// are taken from `params`; its coupling is ignored.
pub fn splitting_coupling(
    params: &ValidatedParams,
    which: Oscillator,
    criterion: SplitCriterion,
    search: SplitSearch,
) -> Option<f64> {
    let split = |om: f64| -> bool {
        let p = params.with_coupling(om).expect("positive coupling keeps params valid");
        match criterion {
            SplitCriterion::Curvature => has_split_curvature(&p, which),
            SplitCriterion::PeakCount { points, half_width } => has_split_peak_count(&p, which, points, half_width),
        }
    };
    let m = search.scan_points.max(2);
    let mut lo = 0.0;
    let mut hi = None;
    for i in 1..=m {
        let om = search.upper * i as f64 / m as f64;
        if split(om) {
            hi = Some(om);
            break;
        }
        lo = om;
    }
    let mut hi = hi?;
    while hi - lo > search.rel_tol * hi {
        let mid = 0.5 * (lo + hi);
        if split(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Some(0.5 * (lo + hi))
}
