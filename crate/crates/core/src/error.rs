use thiserror::Error;

/// Errors surfaced by ring construction, module operations and suites.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("modulus {0} is not prime")]
    NotPrime(u64),

    #[error("relation `{0}` has a nonzero constant term; the quotient would not be local")]
    NonLocalRelation(String),

    #[error("ring is not Artinian: degree cap {0} reached with a nonempty graded piece")]
    NotArtinian(usize),

    #[error("element is not a unit (zero constant coefficient)")]
    NotAUnit,

    #[error("characteristic mismatch: {0} vs {1}")]
    CharMismatch(u64, u64),

    #[error("stage budget exceeded: stage {stage} needs {rows} scalar rows, cap is {cap}")]
    StageBudgetExceeded {
        stage: usize,
        rows: usize,
        cap: usize,
    },

    #[error("not a ring map: relation `{0}` does not vanish on the given images")]
    NotARingMap(String),

    #[error("wrong ring class for this suite: {0}")]
    WrongRingClass(String),

    #[error("bad exponents: {0}")]
    BadExponents(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
