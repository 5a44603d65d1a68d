use thiserror::Error;

use crate::coalition::Coalition;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("value of the empty coalition must be 0")]
    NonzeroEmptySet,
    #[error("coalition {coalition} has a negative or non-finite value")]
    NegativeValue { coalition: Coalition },
    #[error("expected {expected} entries, found {found}")]
    WrongLength { expected: usize, found: usize },
    #[error("player count {n} outside the supported range 1..={max}")]
    TooManyPlayers { n: usize, max: usize },
    #[error("coalition must be nonempty")]
    EmptySubset,
    #[error("coalition {coalition} is not a subset of the {n} players")]
    SubsetOutOfRange { coalition: Coalition, n: usize },
    #[error("not a permutation of the players: {0:?}")]
    InvalidOrder(Vec<usize>),
    #[error("allocation has length {found}, game has {expected} players")]
    LengthMismatch { expected: usize, found: usize },
    #[error("allocation entry {index} is negative or non-finite")]
    NegativeAllocation { index: usize },
    #[error("collection contains the empty set")]
    EmptySetInCollection,
    #[error("weights are not a fractional partition")]
    InvalidPartition,
    #[error("the core is empty")]
    EmptyCore,
    #[error("operation requires a {expected} game")]
    WrongOrientation { expected: &'static str },
    #[error("value function is not monotone: v({smaller}) > v({larger})")]
    NotMonotone {
        smaller: Coalition,
        larger: Coalition,
    },
    #[error("subgame on {coalition} is not balanced")]
    NotBalanced { coalition: Coalition },
    #[error("prefix {k}: allocation violates the constraint of coalition {coalition}")]
    VerificationFailed { k: usize, coalition: Coalition },
    #[error("malformed linear program: {0}")]
    MalformedProgram(String),
    #[error("simplex iteration limit reached")]
    IterationLimit,
    #[error("probabilities must be nonnegative and sum to 1")]
    UnnormalizedInput,
    #[error("coalitions overlap")]
    OverlappingSubsets,
    #[error("noise variance must be positive")]
    NonpositiveNoise,
    #[error("variances must be positive")]
    NonpositiveVariance,
    #[error("covariance matrix {index} is not symmetric positive definite")]
    NotPositiveDefinite { index: usize },
    #[error("support of the convolution exceeds {limit} points")]
    SupportTooLarge { limit: usize },
    #[error("raw differential entropies of sums do not define a game (v(empty) = -inf)")]
    NotAGame,
    #[error("density has infinite or undefined variance")]
    InfiniteVariance,
    #[error("sample size {0} unsupported (1..=3)")]
    UnsupportedSampleSize(usize),
    #[error("invalid density: {0}")]
    InvalidDensity(String),
    #[error("invalid quadrature: {0}")]
    InvalidQuadrature(String),
    #[error("family of distributions is empty")]
    EmptyFamily,
    #[error("outcome spaces differ in size")]
    MismatchedOutcomeSpaces,
    #[error("parameter {0} out of range [0, 1)")]
    ParameterOutOfRange(f64),
    #[error("set function is not a capacity")]
    NotACapacity,
    #[error("capacity is not 2-alternating")]
    NotTwoAlternating,
    #[error("starting point lies outside the core")]
    StartOutsideCore,
    #[error("every pair of core elements has infinite divergence")]
    DivergenceInfinite,
    #[error("outcome space of size {size} too large (max {max})")]
    OutcomeSpaceTooLarge { size: usize, max: usize },
    #[error("{0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
