use num_complex::Complex64;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("half-periods must be non-zero")]
    ZeroPeriod,

    #[error("period ratio tau = {tau} must have positive imaginary part")]
    InvalidPeriodRatio { tau: Complex64 },

    #[error("nome magnitude |q| = {q_abs:.6} exceeds the supported maximum {q_max}")]
    ConvergencePolicy { q_abs: f64, q_max: f64 },

    #[error("series did not meet its truncation test within {max_terms} terms")]
    SeriesDivergence { max_terms: usize },

    #[error("theta value {magnitude:e} is below the zero guard {threshold:e}")]
    NearZeroDenominator { magnitude: f64, threshold: f64 },

    #[error("indices must differ, got {0} twice")]
    IdenticalIndices(u8),

    #[error("lattice is degenerate (e1 = e3 or vanishing discriminant)")]
    DegenerateLattice,

    #[error("argument {point} lies within the pole guard of {translate}")]
    PoleProximity { point: Complex64, translate: Complex64 },

    #[error("logarithm branch could not be tracked along the path to {point}")]
    BranchAmbiguity { point: Complex64 },

    #[error("invalid series configuration: {0}")]
    InvalidConfig(String),

    #[error("unknown function '{0}'")]
    UnknownFunction(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("suite configuration: {0}")]
    SuiteConfig(String),

    #[error("could not draw a sample outside the exclusion set after {attempts} attempts")]
    Sampling { attempts: usize },
}
