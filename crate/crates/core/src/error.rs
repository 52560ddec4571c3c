use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("image sequence {0:?} is not a bijection")]
    NotBijective(Vec<u32>),
    #[error("point {point} out of range for degree {degree}")]
    PointOutOfRange { point: u32, degree: usize },
    #[error("parse error at position {position}: {message}")]
    Parse { message: String, position: usize },
    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("{0} is not an element of the group")]
    NotInGroup(String),
    #[error("subgroup is not normal")]
    NotNormal,
    #[error("{what}: budget exceeded ({needed} > {limit})")]
    BudgetExceeded {
        what: String,
        needed: u128,
        limit: u128,
    },
    #[error("word needs {needed} arguments, got {supplied}")]
    Arity { needed: usize, supplied: usize },
    #[error("undecidable with current fixtures: {0}")]
    Undecidable(String),
    #[error("function has non-identity tails; the commutator equation leaves the tail-constant class")]
    NonIdentityTails,
    #[error("parameter mismatch: {0}")]
    ParameterMismatch(String),
    #[error("series has constant term {0}, expected 1")]
    NotAUnit(u32),
    #[error("empty word")]
    EmptyWord,
    #[error("unknown group name '{0}'")]
    UnknownGroup(String),
    #[error("line {line}: {message}")]
    Line { line: usize, message: String },
    #[error("{0}")]
    Invalid(String),
}

impl Error {
    pub(crate) fn budget(what: impl Into<String>, needed: u128, limit: u128) -> Self {
        Error::BudgetExceeded {
            what: what.into(),
            needed,
            limit,
        }
    }
}
