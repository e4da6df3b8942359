use thiserror::Error;

/// Which parameter an invariant violation refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Field {
    Gamma1,
    Gamma2,
    Coupling,
    Temp1,
    Temp2,
}

impl std::fmt::Display for Field {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            Field::Gamma1 => "gamma1",
            Field::Gamma2 => "gamma2",
            Field::Coupling => "coupling",
            Field::Temp1 => "temp1",
            Field::Temp2 => "temp2",
        };
        f.write_str(name)
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{0} is not finite")]
    NonFiniteParam(Field),
    #[error("{0} must be non-negative")]
    Negative(Field),
    #[error("no damping: gamma1 + gamma2 must be positive")]
    NoDamping,
    #[error("{0} is zero while the oscillators are decoupled")]
    Undamped(Field),
    #[error("both reservoir temperatures are zero")]
    NoTemperature,

    #[error("drift matrix is not stable (eigenvalue real part {0:e} >= 0)")]
    Unstable(f64),
    #[error("singular linear system in {0}")]
    Singular(&'static str),

    #[error("invalid config: {0}")]
    Config(String),
    #[error("invalid simulation config: {0}")]
    SimConfig(String),
    #[error("realization {index}: {reason}")]
    Realization { index: u64, reason: String },

    #[error("trajectory too short: {0} samples (need at least 2)")]
    TooShort(usize),
    #[error("spectral grids do not match: {0}")]
    GridMismatch(String),
    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("flow orientation undefined for equal temperatures; pass an explicit sign")]
    UndefinedOrientation,
    #[error("insufficient sweep points in fit window: {found} (need at least {needed})")]
    InsufficientPoints { found: usize, needed: usize },
    #[error("non-positive dispersion {value:e} at coupling {coupling:e}")]
    NonPositiveDispersion { coupling: f64, value: f64 },
    #[error("coupling {coupling:e}: {source}")]
    AtCoupling {
        coupling: f64,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    /// Wraps an error with the sweep coupling it occurred at.
    pub fn at_coupling(self, coupling: f64) -> Self {
        Error::AtCoupling {
            coupling,
            source: Box::new(self),
        }
    }

    /// True for failures of the numerical machinery rather than of the inputs.
    pub fn is_numerical(&self) -> bool {
        match self {
            Error::Unstable(_) | Error::Singular(_) | Error::Realization { .. } => true,
            Error::NonPositiveDispersion { .. } | Error::InsufficientPoints { .. } => true,
            Error::AtCoupling { source, .. } => source.is_numerical(),
            _ => false,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
