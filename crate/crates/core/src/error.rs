use thiserror::Error;

use crate::dsl::ParseError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid letter {0:?}: expected one of a, b, c, d")]
    InvalidLetter(char),
    #[error("invalid omega letter {0:?}: expected one of b, c, d")]
    InvalidOmegaLetter(char),
    #[error("omega cycle must be nonempty")]
    EmptyCycle,
    #[error("invalid omega literal {0:?}")]
    InvalidOmega(String),
    #[error("invalid binary string {0:?}")]
    InvalidBits(String),
    #[error("offset mismatch: {0} vs {1}")]
    OffsetMismatch(usize, usize),
    #[error("element does not stabilize level {0}")]
    NotInStabilizer(usize),
    #[error("tuple mixes moduli or dimensions")]
    MixedModuli,
    #[error("unsupported dimension {0}: the free abelian generation test handles d <= 3")]
    UnsupportedDimension(usize),
    #[error("Nielsen move needs distinct indices, got i = j = {0}")]
    SameIndex(usize),
    #[error("index {index} out of range for a tuple of length {len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("no-witness: omega is eventually constant, use infinite-order path")]
    NoWitness,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("level {level} exceeds configured maximum {max}")]
    LevelTooLarge { level: usize, max: usize },
    #[error("{0} elements exceed the brute-force cap of 16: use support criterion")]
    TooManyForBruteForce(usize),
    #[error("Schreier graph at level {0} is disconnected")]
    Disconnected(usize),
    #[error("enumeration of {count} tuples exceeds the bound {bound}")]
    TooLarge { count: u128, bound: u128 },
    #[error("radius {0} of the subsequence is missing or truncated in the ball table")]
    TruncatedRadius(usize),
    #[error("subsequence is not log-dense: {0}")]
    NotLogDense(String),
    #[error("unresolved generator reference {0:?}")]
    UnresolvedRef(String),
    #[error("tuple lacks the generator letter {0}")]
    MissingGenerator(char),
    #[error("malformed record: {0}")]
    Format(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
}
