use thiserror::Error;

/// Errors raised across the lab.
#[derive(Debug, Error)]
pub enum Error {
    #[error("arity {arity} exceeds the configured bound {bound}")]
    ArityBound { arity: usize, bound: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("gapmaj requires t = 4s^2 with s >= 2, got t = {0}")]
    InadmissibleGapMaj(usize),

    #[error("linear program is malformed: {0}")]
    MalformedLp(String),

    #[error("simplex iteration limit of {0} pivots exceeded")]
    IterationLimit(usize),

    #[error("linear program unexpectedly {0}")]
    LpStatus(&'static str),

    #[error("certificate check failed: worst violation {violation:e} exceeds {tolerance:e}")]
    Certificate { violation: f64, tolerance: f64 },

    #[error("{0}")]
    Verification(String),

    #[error("walk step cap of {0} exceeded")]
    StepCap(u64),

    #[error("noisy algorithm issued bias {got}, but only 1 and {allowed} are permitted")]
    BiasNormalForm { got: f64, allowed: f64 },

    #[error("spec file: {0}")]
    Spec(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    /// Errors caused by a configured size bound rather than bad input.
    pub fn is_resource_bound(&self) -> bool {
        matches!(
            self,
            Error::ArityBound { .. } | Error::IterationLimit(_) | Error::StepCap(_)
        )
    }
}
