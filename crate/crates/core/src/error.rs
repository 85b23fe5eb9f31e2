use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("malformed number {0:?}")]
    Parse(String),

    #[error("expected a rotation, got a reflection")]
    NotARotation,

    #[error("matrix is not orthogonal")]
    NotOrthogonal,

    #[error("matrix is singular")]
    Singular,

    #[error("unknown prototile {0:?}")]
    UnknownPrototile(String),

    #[error("exact cover violated: {0}")]
    ExactCover(String),

    #[error("depth {depth} exceeds the configured maximum {max}")]
    DepthOverflow { depth: u32, max: u32 },

    #[error("need at least {need} grid scales, got {got}")]
    TooFewScales { need: usize, got: usize },

    #[error("kite-domino fusion left {0} unpaired triangles")]
    Unpaired(usize),

    #[error("non-manifold junction at {0}")]
    NonManifold(String),

    #[error("dangling aorta at {0} matches no continuation configuration")]
    UnknownContinuation(String),

    #[error("completeness violation: {0}")]
    Completeness(String),

    #[error("power iteration did not converge after {0} iterations")]
    NoConvergence(usize),

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("json: {0}")]
    Json(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}
