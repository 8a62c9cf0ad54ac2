use thiserror::Error;

/// Failure modes of the estimators and analysis routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum QspeError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("probability {value} outside [0, 1]")]
    ProbabilityOutOfRange { value: f64 },
    #[error("no signal: every |c_k| is below {threshold:e}")]
    NoSignal { threshold: f64 },
    #[error("estimated fidelity {alpha_hat} is too low to invert")]
    FidelityTooLow { alpha_hat: f64 },
    #[error("matrix is singular or ill-conditioned (condition estimate {condition:e})")]
    IllConditioned { condition: f64 },
    #[error("degenerate Bernoulli weight: probability {value} is within 1e-12 of 0 or 1")]
    DegenerateProbability { value: f64 },
    #[error("missing depth {depth} in peak-differentiation records")]
    MissingDepth { depth: usize },
    #[error("interval solver found no satisfied equation (corrupted amplitudes)")]
    EmptyCandidates,
}

pub type Result<T> = std::result::Result<T, QspeError>;
