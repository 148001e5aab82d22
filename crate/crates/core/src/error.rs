use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("point {point} appears twice in the domain")]
    DuplicateKey { point: u8 },
    #[error("point {point} appears twice in the image")]
    DuplicateValue { point: u8 },
    #[error("point {point} is outside 1..={n}")]
    PointOutOfRange { point: usize, n: usize },
    #[error("chain size {n} is not supported (must be in 1..={max})")]
    ChainTooLarge { n: usize, max: usize },
    #[error("operands live on chains of different sizes ({left} and {right})")]
    MismatchedChainSize { left: usize, right: usize },
    #[error("bad parameters: {0}")]
    BadParameters(String),
    #[error("generator {0} is not a member of the semigroup")]
    GeneratorOutsideSemigroup(String),
    #[error("{0} is not a member of the semigroup")]
    NotAMember(String),
    #[error("{0} is not orientation-preserving")]
    NotOrientationPreserving(String),
    #[error("rank {rank} is too high (at most {max} allowed)")]
    RankTooHigh { rank: usize, max: usize },
    #[error("rank {rank} does not match the required rank {expected}")]
    BadRank { rank: usize, expected: usize },
    #[error("{0} is not in V (order-preserving, domain inside Y, rank |Y|-1)")]
    NotInV(String),
    #[error("elements have different domains")]
    DomainMismatch,
    #[error("the full chain as range is handled by the rank search, not by this construction")]
    FullRangeNotSupported,
    #[error("the dihedral group of order {order} does not act on a chain of size {n}", order = 2 * .n)]
    ChainTooSmall { n: usize },
    #[error("permutation does not map Y onto Z")]
    NotARangeMap,
    #[error("conjugation is not an isomorphism: {0}")]
    NotValid(String),
    #[error("no decomposition found for {0}")]
    DecompositionNotFound(String),
}

impl Error {
    /// Stable machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DuplicateKey { .. } => "DuplicateKey",
            Error::DuplicateValue { .. } => "DuplicateValue",
            Error::PointOutOfRange { .. } => "PointOutOfRange",
            Error::ChainTooLarge { .. } => "ChainTooLarge",
            Error::MismatchedChainSize { .. } => "MismatchedChainSize",
            Error::BadParameters(_) => "BadParameters",
            Error::GeneratorOutsideSemigroup(_) => "GeneratorOutsideSemigroup",
            Error::NotAMember(_) => "NotAMember",
            Error::NotOrientationPreserving(_) => "NotOrientationPreserving",
            Error::RankTooHigh { .. } => "RankTooHigh",
            Error::BadRank { .. } => "BadRank",
            Error::NotInV(_) => "NotInV",
            Error::DomainMismatch => "DomainMismatch",
            Error::FullRangeNotSupported => "FullRangeNotSupported",
            Error::ChainTooSmall { .. } => "ChainTooSmall",
            Error::NotARangeMap => "NotARangeMap",
            Error::NotValid(_) => "NotValid",
            Error::DecompositionNotFound(_) => "DecompositionNotFound",
        }
    }
}
