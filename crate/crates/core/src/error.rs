use thiserror::Error;

/// Crate-wide error type. Variants name the violated contract rather than the
/// call site, so callers can match on the failure class.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("polytope is unbounded (recession direction {0})")]
    UnboundedPolytope(String),

    #[error("polytope is empty")]
    EmptyPolytope,

    #[error("polytope is not full-dimensional")]
    DegeneratePolytope,

    #[error("cone is not strongly convex (contains a line)")]
    NonPointedCone,

    #[error("invalid fan: {0}")]
    InvalidFan(String),

    #[error("conewise data disagrees on a shared face: {0}")]
    DiscontinuousData(String),

    #[error("vector lies in no maximal cone")]
    NotInFan,

    #[error("denominator is not strictly positive at ray {0}")]
    NonpositiveDenominator(String),

    #[error("fan is not smooth: {0}")]
    NotSmooth(String),

    #[error("fan is not complete: {0}")]
    NotComplete(String),

    #[error("projectivity witness is not ample")]
    NotProjective,

    #[error("divisor is not big")]
    NotBig,

    #[error("divisor is not ample")]
    NotAmple,

    #[error("slope undefined: {0}")]
    SlopeUndefined(String),

    #[error("epsilon exceeds the admissible comparison range")]
    EpsilonTooLarge,

    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),

    #[error("potential is not admissible: {0}")]
    NotAdmissible(String),

    #[error("Monge-Ampere density vanishes on a set of positive mass")]
    ZeroDensity,

    #[error("twist is not admitted by the background class: {0}")]
    TwistNotAdmitted(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("numeric overflow or non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
