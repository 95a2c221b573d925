use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Reasons a junction or compressor problem is rejected at construction.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ProblemError {
    #[error("pipe {pipe}: cross-section area must be positive, got {area}")]
    NonPositiveArea { pipe: usize, area: f64 },
    #[error("pipe {pipe}: state model does not match the declared model")]
    ModelMismatch { pipe: usize },
    #[error("pipe {pipe}: declared orientation does not match the flow direction of its state")]
    OrientationMismatch { pipe: usize },
    #[error("pipe {pipe}: initial state is not subsonic with nonzero velocity")]
    NotSubsonic { pipe: usize },
    #[error("pipe {pipe}: invalid state ({reason})")]
    InvalidState { pipe: usize, reason: &'static str },
    #[error("junction needs N > dim(I_i) > 0: {incoming} incoming of {total} pipes")]
    Topology { incoming: usize, total: usize },
    #[error("compressor pipes must have equal cross-section areas ({inlet} vs {outlet})")]
    UnequalAreas { inlet: f64, outlet: f64 },
    #[error("compressor control value must be non-negative, got {0}")]
    NegativeControl(f64),
    #[error("{0}")]
    Other(String),
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("non-positive pressure {0}")]
    NonPositivePressure(f64),
    #[error("non-positive density {0}")]
    NonPositiveDensity(f64),
    #[error("non-positive mass flux {0} at compressor outlet")]
    NonPositiveFlux(f64),
    #[error("state is not subsonic")]
    NotSubsonic,
    #[error("initial data would produce vacuum")]
    VacuumFormation,
    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("entropy mix is singular: incoming mass flux {0:e} vanishes")]
    SingularEntropyMix(f64),
    #[error("singular Jacobian in coupling solve")]
    SingularJacobian,
    #[error("star state of pipe {pipe} left the subsonic region of its orientation")]
    SubsonicViolation { pipe: usize },
    #[error("states belong to different models or isentropic coefficients")]
    ModelMismatch,
    #[error("no pending event and the horizon is unbounded")]
    EventStarvation,
    #[error("event budget of {0} exhausted before the horizon")]
    EventBudget(usize),
    #[error("invalid gas constants: {0}")]
    InvalidGas(&'static str),
    #[error(transparent)]
    Problem(#[from] ProblemError),
}
