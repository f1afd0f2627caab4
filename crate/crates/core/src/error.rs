use thiserror::Error;

/// Every fallible operation in the crate reports one of these.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by the zero polynomial")]
    ZeroPolynomialDivisor,
    #[error("operation undefined on the zero polynomial")]
    ZeroPolynomial,
    #[error("division by zero")]
    DivisionByZero,
    #[error("elements belong to different number fields")]
    FieldMismatch,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is singular")]
    Singular,
    #[error("matrix has a negative entry at ({row}, {col})")]
    NegativeEntry { row: usize, col: usize },
    #[error("matrix is not primitive")]
    NotPrimitive,
    #[error("invalid companion specification: {0}")]
    InvalidCompanion(String),
    #[error("matrix is not of companion form: {0}")]
    NotCompanionForm(String),
    #[error("Perron data differ: {0}")]
    PerronMismatch(String),
    #[error("intertwiner condition ({which}) fails: {detail}")]
    IntertwinerCondition { which: u8, detail: String },
    #[error("integrality precondition fails at prime {prime}: {detail}")]
    IntegralityPrecondition { prime: u64, detail: String },
    #[error("budget exhausted: {0}")]
    BudgetExhausted(String),
    #[error("not a member of the dimension group")]
    NotMember,
    #[error("unsupported input: {0}")]
    Unsupported(String),
    #[error("numerical certification failed: {0}")]
    Certification(String),
}

pub type Result<T> = std::result::Result<T, Error>;
