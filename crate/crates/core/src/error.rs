use thiserror::Error;

/// Every failure the engine can report. Variants map one-to-one onto the
/// documented error conditions of the individual operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("polynomial is identically zero")]
    ZeroPolynomial,
    #[error("polynomial is not real (P != conj(P))")]
    NotReal,
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("z-bar encountered at position {pos} in a holomorphic polynomial")]
    NonHolomorphic { pos: usize },
    #[error("exponent {0} exceeds the per-variable bound 2^16")]
    ExponentOverflow(u64),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("Gram matrix of the frame is singular everywhere")]
    SingularGram,
    #[error("terms {0} and {1} of the harmonic sequence are not orthogonal")]
    NotOrthogonal(usize, usize),
    #[error("harmonic sequence did not terminate within {0} steps")]
    NonTerminating(usize),
    #[error("ranks sum to {sum}, ambient dimension is {n}")]
    NotAFlag { sum: usize, n: usize },
    #[error("gamma_{0} vanishes identically; the lift is not an immersion")]
    NotImmersion(usize),
    #[error("only {found} independent derivative vectors, {needed} required")]
    RankDeficient { needed: usize, found: usize },
    #[error("expected {expected} metric weights, got {found}")]
    WeightCountMismatch { expected: usize, found: usize },
    #[error("metric weights must be positive")]
    NonPositiveWeight,
    #[error("metric density is identically zero")]
    ZeroMetric,
    #[error("index {index} out of range (bound {bound})")]
    IndexOutOfRange { index: usize, bound: usize },
    #[error("denominator vanishes at the evaluation point")]
    PoleHit,
    #[error("degree vector is zero")]
    ZeroDegrees,
    #[error("curve is not defined on the whole sphere; area and degree are undefined")]
    NonCompactDomain,
    #[error("tensor lift ambient dimension {0} exceeds 10^6")]
    DimensionOverflow(u128),
    #[error("function is not positive at a stencil point")]
    NonPositive,
    #[error("quadrature did not converge (estimate {estimate}, error {error})")]
    NoConvergence { estimate: f64, error: f64 },
    #[error("ill-conditioned rank decision (relative singular value {0:e})")]
    RankAmbiguous(f64),
    #[error("operation requires the exact backend")]
    ExactBackendRequired,
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
