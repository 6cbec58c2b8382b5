use thiserror::Error;

/// Errors shared by all modules.
#[derive(Debug, Error)]
pub enum Error {
    #[error("base size mismatch: {0} vs {1}")]
    BaseMismatch(usize, usize),
    #[error("set is not a member of the family")]
    NotAMember,
    #[error("witness is not a subfamily of the family")]
    NotASubfamily,
    #[error("operation undefined for the empty family")]
    EmptyFamily,
    #[error("size cap exceeded: {0}")]
    CapExceeded(String),
    #[error("search budget exhausted")]
    BudgetExhausted,
    #[error("parse error at {line}:{col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("arity error: {0}")]
    Arity(String),
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("duplicate member on line {0}")]
    DuplicateMember(usize),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("dimension functions require an empty vocabulary, found relation `{0}`")]
    UnsupportedVocabulary(String),
    #[error("unknown quantifier class `{0}`")]
    UnknownClass(String),
    #[error("unknown atom `{0}`")]
    UnknownAtom(String),
}

impl Error {
    pub fn parse(line: usize, col: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            col,
            msg: msg.into(),
        }
    }
}
