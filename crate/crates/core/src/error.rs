use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("generator `{0}` is declared differently in the two operands")]
    UniverseMismatch(String),
    #[error("no image given for generator `{0}`")]
    MissingImage(String),
    #[error("tensor position {position} out of range for arity {arity}")]
    PositionOutOfRange { position: usize, arity: usize },
    #[error("flip needs arity 2, got arity {0}")]
    FlipArity(usize),
    #[error("ill-formed tensor element: {0}")]
    IllFormed(String),
    #[error("series mismatch: {0}")]
    SeriesMismatch(String),
    #[error("substitution would not converge: {0}")]
    NonConvergent(String),
    #[error("leading coefficient `{0}` is not a truncation unit")]
    NotTruncationUnit(String),
    #[error("tag map is not injective")]
    NonInjectiveTagMap,
    #[error("not a formal group law: {0}")]
    InvalidFgl(String),
    #[error("not a formal group over a Hopf algebra: {0}")]
    InvalidHopfFgl(String),
    #[error("builtin Hopf algebra needs at least one generator")]
    EmptyBuiltin,
    #[error("divisibility precondition violated: {0}")]
    Divisibility(String),
    #[error("degree {r} is outside the stable range r < 2*min({k},{l})")]
    OutOfStableRange { r: u64, k: u64, l: u64 },
    #[error("formal group law fails verification at cutoff {0}")]
    FglFailsVerification(u32),
}

pub type Result<T> = std::result::Result<T, Error>;
