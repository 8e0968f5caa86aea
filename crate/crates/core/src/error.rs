use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("sequence windows must contain at least one term")]
    EmptyWindow,
    #[error("prefix covers {have} terms but {need} are required")]
    PrefixTooShort { need: usize, have: usize },
    #[error("arithmetic function is not invertible: f(1) = 0")]
    NonInvertible,
    #[error("psi fails its admissibility conditions at n = {0}")]
    InvalidPsi(usize),
    #[error("sequence is not a Dold sequence (first failure at n = {0})")]
    NotDold(usize),
    #[error("sequence is not realizable (first failure at n = {index}, orbit count {witness})")]
    NotRealizable { index: usize, witness: String },
    #[error("window of length {len} is too short: need at least {need}")]
    ShortWindow { need: usize, len: usize },
    #[error("map table entry {index} points to {target}, outside 0..{size}")]
    InvalidMap {
        index: usize,
        target: usize,
        size: usize,
    },
    #[error("matrix is not square: {0}")]
    NotSquare(String),
    #[error("malformed matrix input: {0}")]
    MatrixParse(String),
    #[error("power series precondition failed: {0}")]
    SeriesDomain(&'static str),
    #[error("coefficient {0} of the logarithm times n is not an integer")]
    NonIntegral(usize),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("time change needs index {needed} but the source horizon is {horizon}")]
    HorizonExceeded { needed: u64, horizon: u64 },
    #[error("not a permutation of 1..{0}")]
    NotPermutation(usize),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
