use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("malformed partition: {0}")]
    MalformedPartition(String),

    #[error("point {0} lies outside [0,1)")]
    OutOfDomain(String),

    #[error("element of class {found} cannot be used in group {expected}")]
    ClassMismatch { expected: String, found: String },

    #[error("element is not the identity on [1/2,1) and does not normalize the half stabilizer")]
    NotNormalizing,

    #[error(
        "vertex budget of {budget} exceeded while exploring radius {radius_in_progress} \
         ({vertices} vertices, radius {completed_radius} complete)"
    )]
    ResourceLimit {
        budget: usize,
        vertices: usize,
        completed_radius: u32,
        radius_in_progress: u32,
    },

    #[error("i/o failure: {0}")]
    Io(#[from] std::io::Error),

    #[error("cache format mismatch at line {line}: {reason}")]
    FormatVersionMismatch { line: usize, reason: String },

    #[error("compact set comes within distance 1 of the frontier (depth {depth}, radius {radius})")]
    MarginTooSmall { depth: u32, radius: u32 },

    #[error("precondition cannot be certified inside the ball: {0}")]
    PreconditionUnverifiable(String),

    #[error("no ellipticity evidence route applies to {0}")]
    NoEvidence(String),

    #[error("certificate check failed: {0}")]
    CertificateFailure(String),

    #[error("image of vertex leaves the ball: {0}")]
    OutOfBall(String),
}
