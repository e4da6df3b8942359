//! Physical parameters of the oscillator pair and the Langevin matrices.
//!
//! All rates and frequencies are in units of the common natural frequency
//! ω0 and the dynamics are written in the frame rotating at ω0, so every
//! frequency below is a detuning. Temperatures are classical energy scales
//! with k_B = 1.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Field, Result};
use crate::linalg::{Mat2, C64, ZERO};

/// Raw, unvalidated parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OscillatorPairParams {
    /// Relaxation rate of oscillator 1.
    pub gamma1: f64,
    /// Relaxation rate of oscillator 2.
    pub gamma2: f64,
    /// Coupling strength Ω.
    pub coupling: f64,
    /// Temperature of the reservoir attached to oscillator 1.
    pub temp1: f64,
    /// Temperature of the reservoir attached to oscillator 2.
    pub temp2: f64,
}

impl OscillatorPairParams {
    pub fn new(gamma1: f64, gamma2: f64, coupling: f64, temp1: f64, temp2: f64) -> Self {
        Self {
            gamma1,
            gamma2,
            coupling,
            temp1,
            temp2,
        }
    }

    pub fn validate(self) -> Result<ValidatedParams> {
        validate(self)
    }
}

/// Parameters that passed [`validate`]. Only obtainable through validation,
/// so every consumer can rely on a stable drift matrix and a nonzero drive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ValidatedParams(OscillatorPairParams);

pub fn validate(params: OscillatorPairParams) -> Result<ValidatedParams> {
    let fields = [
        (Field::Gamma1, params.gamma1),
        (Field::Gamma2, params.gamma2),
        (Field::Coupling, params.coupling),
        (Field::Temp1, params.temp1),
        (Field::Temp2, params.temp2),
    ];
    for (field, value) in fields {
        if !value.is_finite() {
            return Err(Error::NonFiniteParam(field));
        }
        if value < 0.0 {
            return Err(Error::Negative(field));
        }
    }
    if params.gamma1 + params.gamma2 <= 0.0 {
        return Err(Error::NoDamping);
    }
    if params.coupling == 0.0 {
        // a decoupled oscillator without damping has a zero eigenvalue
        if params.gamma1 == 0.0 {
            return Err(Error::Undamped(Field::Gamma1));
        }
        if params.gamma2 == 0.0 {
            return Err(Error::Undamped(Field::Gamma2));
        }
    }
    if params.temp1 + params.temp2 <= 0.0 {
        return Err(Error::NoTemperature);
    }
    Ok(ValidatedParams(params))
}

impl ValidatedParams {
    pub fn raw(&self) -> &OscillatorPairParams {
        &self.0
    }
    pub fn gamma1(&self) -> f64 {
        self.0.gamma1
    }
    pub fn gamma2(&self) -> f64 {
        self.0.gamma2
    }
    pub fn coupling(&self) -> f64 {
        self.0.coupling
    }
    pub fn temp1(&self) -> f64 {
        self.0.temp1
    }
    pub fn temp2(&self) -> f64 {
        self.0.temp2
    }

    /// Same rates and temperatures, different coupling.
    pub fn with_coupling(&self, coupling: f64) -> Result<Self> {
        validate(OscillatorPairParams { coupling, ..self.0 })
    }

    /// Both temperatures multiplied by `factor`.
    pub fn with_temperature_scale(&self, factor: f64) -> Result<Self> {
        validate(OscillatorPairParams {
            temp1: self.0.temp1 * factor,
            temp2: self.0.temp2 * factor,
            ..self.0
        })
    }

    /// The larger of the two temperatures.
    pub fn reference_temperature(&self) -> f64 {
        self.0.temp1.max(self.0.temp2)
    }

    /// Temperatures divided by [`reference_temperature`](Self::reference_temperature),
    /// together with that reference.
    ///
    /// Trajectories of the reduced system are the physical ones divided by
    /// `√T_ref`, and its spectra are the physical ones divided by `T_ref`.
    /// The reduced parameters depend only on the temperature ratio.
    pub fn reduced(&self) -> (ValidatedParams, f64) {
        let t_ref = self.reference_temperature();
        let reduced = OscillatorPairParams {
            temp1: self.0.temp1 / t_ref,
            temp2: self.0.temp2 / t_ref,
            ..self.0
        };
        (ValidatedParams(reduced), t_ref)
    }

    /// `sign(T2 - T1)`, or `None` at equal temperatures.
    pub fn flow_sign(&self) -> Option<f64> {
        let d = self.0.temp2 - self.0.temp1;
        if d > 0.0 {
            Some(1.0)
        } else if d < 0.0 {
            Some(-1.0)
        } else {
            None
        }
    }

    pub fn max_rate(&self) -> f64 {
        self.0.gamma1.max(self.0.gamma2).max(self.0.coupling)
    }

    pub fn min_nonzero_gamma(&self) -> f64 {
        match (self.0.gamma1 > 0.0, self.0.gamma2 > 0.0) {
            (true, true) => self.0.gamma1.min(self.0.gamma2),
            (true, false) => self.0.gamma1,
            _ => self.0.gamma2,
        }
    }
}

/// Drift and diffusion of `da/dt = M a + ξ` with `<ξ*(t+τ) ξᵀ(t)> = 2 D δ(τ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearSystem {
    pub drift: Mat2,
    /// Hermitian, positive semi-definite; diagonal for the oscillator pair.
    pub diffusion: Mat2,
}

impl LinearSystem {
    pub fn new(drift: Mat2, diffusion: Mat2) -> Self {
        Self { drift, diffusion }
    }

    /// Largest eigenvalue real part of the drift; negative for a stable system.
    pub fn spectral_abscissa(&self) -> f64 {
        let [a, b] = self.drift.eigenvalues();
        a.re.max(b.re)
    }

    pub fn ensure_stable(&self) -> Result<()> {
        let abscissa = self.spectral_abscissa();
        if abscissa < 0.0 {
            Ok(())
        } else {
            Err(Error::Unstable(abscissa))
        }
    }

    /// `max_i |M_ii| + max_{i≠j} |M_ij|`, the rate the Euler step must resolve.
    pub fn rate_scale(&self) -> f64 {
        let m = &self.drift.0;
        m[0][0].norm().max(m[1][1].norm()) + m[0][1].norm().max(m[1][0].norm())
    }
}

/// `M = [[-γ1, -iΩ], [-iΩ, -γ2]]`, `D = diag(γ1 T1, γ2 T2)`.
pub fn build_system(params: &ValidatedParams) -> LinearSystem {
    let p = params.raw();
    let off = C64::new(0.0, -p.coupling);
    let drift = Mat2::new(C64::new(-p.gamma1, 0.0), off, off, C64::new(-p.gamma2, 0.0));
    let diffusion = Mat2::new(C64::new(p.gamma1 * p.temp1, 0.0), ZERO, ZERO, C64::new(p.gamma2 * p.temp2, 0.0));
    LinearSystem { drift, diffusion }
}
