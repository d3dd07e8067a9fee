use std::path::PathBuf;

use thiserror::Error;

use crate::linalg::DenseMatrix;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid prime {0}: {1}")]
    InvalidPrime(u32, &'static str),

    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("field mismatch: F_{0} vs F_{1}")]
    FieldMismatch(u32, u32),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("not a complex: {0}")]
    NotAComplex(String),

    #[error("expected a linear form: {0}")]
    NotLinear(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("distinguished quadric lies in the span of the remaining quadrics")]
    DistinguishedInSpan,

    #[error("missing distinguished quadric in presentation over variables {0}")]
    MissingDistinguished(String),

    #[error("variable name collision: {0}")]
    NameCollision(String),

    #[error("truncation is not faithful for {0}: some cubic monomial survives")]
    TruncationUnfaithful(String),

    #[error("glued socle element is zero in the connected sum")]
    DeltaZero,

    #[error("graph hypothesis violated: {0}")]
    GraphHypothesis(String),

    #[error("search budget exceeded: {candidates} candidates > budget {budget} (use force to override)")]
    BudgetExceeded { candidates: u128, budget: u128 },

    #[error("composite at position {position} is not a scalar multiple of the distinguished quadric")]
    NotScalarSpan { position: usize },

    #[error("U_{position} = {matrix:?} is not invertible")]
    NotInvertible { position: usize, matrix: DenseMatrix },

    #[error("composite at position {position} has coefficient matrix {found:?}, expected {expected}")]
    CompositeMismatch {
        position: usize,
        expected: &'static str,
        found: Option<DenseMatrix>,
    },

    #[error("normal form unsupported for coefficient matrix {0:?}")]
    NormalFormUnsupported(DenseMatrix),

    #[error("block-diagonal claim violated at level {level}: {message}")]
    ClaimViolation { level: usize, message: String },

    #[error("invariant violated: {0}")]
    InvariantViolation(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }
}
