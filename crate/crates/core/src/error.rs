use thiserror::Error;

/// Every failure the library can report.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("saddle equation did not converge for n = {0}")]
    NoConvergence(String),
    #[error("cannot reach the requested accuracy at {bits} bits: {detail}")]
    PrecisionInsufficient { bits: u32, detail: String },
    #[error("peak hint lies below the lower integration limit")]
    BadBracket,
    #[error("{0} is not a fundamental discriminant")]
    NotFundamental(i64),
    #[error("first coefficient must be 1")]
    NotNormalized,
    #[error("coefficient list is empty")]
    Empty,
    #[error("exact coefficients exceed the digit budget of {0} bits")]
    Overflow(u32),
    #[error("form ({0}, {1}, {2}) is not reduced")]
    NotReduced(i64, i64, i64),
    #[error("form has discriminant {found}, expected {expected}")]
    WrongDiscriminant { expected: i64, found: i64 },
    #[error("enumeration bound contains no nonzero lattice point")]
    EmptyBound,
    #[error("no tail majorant is available: {0}")]
    NoDecayProof(String),
    #[error("weight {0} is odd")]
    OddWeight(u32),
    #[error("eps_f must be +1 or -1, got {0}")]
    InvalidEpsF(i64),
    #[error("no gamma record for n = {0}")]
    MissingRecord(u64),
    #[error("leading coefficient interval contains zero")]
    LeadingIntervalContainsZero,
    #[error("delta radicand is not positive at n = {0}")]
    NegativeRadicand(u64),
    #[error("curvature is not positive at m = {0}")]
    NonpositiveCurvature(u64),
    #[error("shift {jshift} is not below m/2 = {half}")]
    ShiftTooLarge { jshift: u64, half: u64 },
    #[error("polynomial has degree {found}, expected {expected}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("functional sign is inconclusive: {0}")]
    Inconclusive(String),
    #[error("cache file {0} failed its checksum")]
    CacheCorrupt(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
