use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("ground set must contain at least one label")]
    EmptyGround,
    #[error("duplicate label `{0}` in ground set")]
    DuplicateLabel(String),
    #[error("label `{0}` is not in the ground set")]
    UnknownLabel(String),
    #[error("multisets live over different ground sets")]
    GroundMismatch,
    #[error("operation needs the numeric levels 0..N-1 as ground set")]
    NonNumericGround,
    #[error("{what} = {value} is outside the valid range 0..={max}")]
    OutOfRange {
        what: &'static str,
        value: u64,
        max: u64,
    },
    #[error("domain violation: {0}")]
    Domain(String),
    #[error("enumeration needs {needed} steps, budget is {budget}")]
    BudgetExceeded { needed: String, budget: u64 },
    #[error("frequentist learning needs a nonempty multiset")]
    EmptyMultiset,
    #[error("distribution over an empty set")]
    EmptySupport,
    #[error("weights sum to {0}, not 1")]
    NotNormalized(String),
    #[error("negative weight {0}")]
    NegativeWeight(String),
    #[error("support of the first distribution is not contained in the second")]
    SupportViolation,
    #[error("{0} is not a state of this chain")]
    NotInSpace(String),
    #[error("level {0} is not attainable in any configuration")]
    Unattainable(usize),
    #[error("identity failed: {0}")]
    IdentityMismatch(String),
    #[error("root finding failed: {0}")]
    NoSignChange(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{0}")]
    Io(String),
    #[error("output closed")]
    BrokenPipe,
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            return Error::BrokenPipe;
        }
        Error::Io(e.to_string())
    }
}
