use thiserror::Error;

/// Errors raised by permutation arithmetic, constructions and searches.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("degree must be at least {min}, got {got}")]
    DegreeTooSmall { min: usize, got: usize },
    #[error("degree {got} exceeds the cap of {cap}")]
    DegreeCapExceeded { got: usize, cap: usize },
    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },
    #[error("not a permutation word: {0}")]
    NotAPermutation(String),
    #[error("point {point} out of range 1..={degree}")]
    PointOutOfRange { point: usize, degree: usize },
    #[error("transposition needs two distinct points, got {0} twice")]
    RepeatedPoint(usize),
    #[error("rank {rank} out of range for degree {degree}")]
    RankOutOfRange { rank: u64, degree: usize },
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("field order {got} exceeds the cap of {cap}")]
    FieldTooLarge { got: u64, cap: u64 },
    #[error("closure exceeded the cap of {cap} elements")]
    ClosureCapExceeded { cap: usize },
    #[error("left factor of an automorphism must fix point 1")]
    LeftFactorMovesOne,
    #[error("code does not have minimum distance 3")]
    MinDistanceViolated,
    #[error("codeword does not fix the last point {0}")]
    LastPointMoved(usize),
    #[error("code is not perfect")]
    NotPerfect,
    #[error("the two codes are equal")]
    EqualCodes,
    #[error("bitrade halves intersect")]
    OverlappingHalves,
    #[error("the pair is not a perfect bitrade")]
    NotABitrade,
    #[error("rank {0} is both forced and forbidden")]
    ConflictingConstraints(u64),
    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("duplicate codeword on line {line}")]
    DuplicateCodeword { line: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
