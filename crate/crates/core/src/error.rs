use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("arithmetic overflow: {0}")]
    Overflow(String),
    #[error("coefficient {0} is not a positive integer")]
    InvalidCoefficient(i64),
    #[error("operation needs a non-empty sum")]
    EmptySum,
    #[error("invalid residue constraint: {0}")]
    InvalidConstraint(String),
    #[error("repair input is zero")]
    ZeroInput,
    #[error("parity mismatch: {0} and {1} must agree mod 2")]
    ParityMismatch(i64, i64),
    #[error("tau image of ({0}, {1}, {2}) is not integral")]
    NonIntegralImage(i64, i64, i64),
    #[error("vector norm {actual} does not match the recorded norm {expected}")]
    NormMismatch { expected: i64, actual: i64 },
    #[error("no closed-form criterion is catalogued for form {0}")]
    UnknownCatalogForm(String),
    #[error("escalation tree too shallow for criterion extraction (depth {depth}, bound {bound})")]
    ShallowTree { depth: usize, bound: i64 },
    #[error("unknown theorem id `{0}`")]
    UnknownTheorem(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("cache audit mismatch for {0}")]
    CacheAudit(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("json error: {0}")]
    Json(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}
