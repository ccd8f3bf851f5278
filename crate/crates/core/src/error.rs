use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("partition parts must be weakly decreasing and non-negative: {0:?}")]
    InvalidPartition(Vec<i64>),

    #[error("weight {weight:?} is not dominant")]
    NonDominant { weight: Vec<i32> },

    #[error("weight {weight:?} has length {len}, expected at most {rank}")]
    WeightLength { weight: Vec<i32>, len: usize, rank: usize },

    #[error("character is not symmetric in block {block}: swapping roots {i} and {j} of {monomial:?} changes the multiplicity")]
    NotSymmetric { block: usize, i: usize, j: usize, monomial: Vec<i32> },

    #[error("character has a negative multiplicity {mult} at {weight:?}")]
    NegativeMultiplicity { weight: Vec<i32>, mult: i64 },

    #[error("invalid Grassmannian Gr({k},{n}): k must be < n and positive")]
    InvalidFactor { k: usize, n: usize },

    #[error("bundle refers to factor {index} but the ambient has {count} factors")]
    FactorIndex { index: usize, count: usize },

    #[error("twist has {got} entries but the ambient has {expected} factors")]
    TwistArity { got: usize, expected: usize },

    #[error("expected {expected} factors, got {got}")]
    FactorCount { expected: usize, got: usize },

    #[error("expected dimension {0} is negative")]
    NegativeDimension(i64),

    #[error("zero locus has dimension {0}; at least 1 is required")]
    TooSmall(i64),

    #[error("integer overflow in {0}")]
    Overflow(&'static str),

    #[error("internal consistency check failed: {0}")]
    Consistency(String),

    #[error("classification refused: undetermined entries {0:?}")]
    Undetermined(Vec<(usize, usize)>),

    #[error("{0}")]
    Parse(#[from] crate::dsl::ParseError),

    #[error("unknown family '{0}'")]
    UnknownFamily(String),

    #[error("{0}")]
    Invalid(String),
}
