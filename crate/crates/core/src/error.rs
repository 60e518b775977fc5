use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("form degree {p} out of range for dimension {m}")]
    DegreeOutOfRange { m: usize, p: usize },

    #[error("dimension {m} too small: {what}")]
    DimensionTooSmall { m: usize, what: &'static str },

    #[error("second fundamental form is not symmetric")]
    NonSymmetric,

    #[error("second fundamental form has size {got}, expected {expected}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("Weitzenböck endomorphism unsupported for p = {p} in dimension {m} on a curved fibre")]
    UnsupportedEndomorphism { m: usize, p: usize },

    #[error("unsupported combination: {0}")]
    Unsupported(String),

    #[error("quadratic coefficient samples are inconsistent (m = {m}, p = {p}, {bc})")]
    InconsistentSamples { m: usize, p: usize, bc: String },

    #[error("pair closed form disagrees with the general evaluator: {0}")]
    SpecializationMismatch(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("cannot add exact values with π-exponents {left}/2 and {right}/2")]
    MixedPiPowers { left: i64, right: i64 },

    #[error("tail bound {tail:e} exceeds 1e-3 of the heat trace {theta:e} at t = {t:e}; raise lambda_max or t")]
    TailBoundTooLarge { t: f64, tail: f64, theta: f64 },

    #[error("fit precondition failed: {0}")]
    FitPrecondition(String),

    #[error("design matrix ill-conditioned (condition estimate {condition:e})")]
    IllConditioned { condition: f64 },

    #[error("failed to bracket Bessel zero of order {order}")]
    RootBracketing { order: usize },

    #[error("singular 2x2 system (determinant zero)")]
    SingularSystem,

    #[error("inconsistent volume estimates: {0}")]
    InconsistentVolumes(String),

    #[error("hypothesis violated: {0}")]
    HypothesisViolation(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// True for failures caused by numerical preconditions (tail bounds,
    /// conditioning, root bracketing) rather than malformed input.
    pub fn is_numeric_precondition(&self) -> bool {
        matches!(
            self,
            Error::TailBoundTooLarge { .. }
                | Error::FitPrecondition(_)
                | Error::IllConditioned { .. }
                | Error::RootBracketing { .. }
                | Error::InconsistentVolumes(_)
                | Error::SingularSystem
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
