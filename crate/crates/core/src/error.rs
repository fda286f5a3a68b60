use thiserror::Error;

/// Errors surfaced by the exact computation pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("field mismatch: Q(z_{left}) vs Q(z_{right})")]
    FieldMismatch { left: u32, right: u32 },

    #[error("division by zero")]
    DivisionByZero,

    #[error("scalar is not rational: {0}")]
    NotRational(String),

    #[error("group mismatch: '{left}' vs '{right}'")]
    GroupMismatch { left: String, right: String },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("group of size {size} exceeds the size cap {cap}")]
    SizeCapExceeded { size: usize, cap: usize },

    #[error("invalid multiplication table: {0}")]
    BadTable(String),

    #[error("invalid automorphism action: {0}")]
    BadAction(String),

    #[error("subgroup is not normal in its parent")]
    NotNormal,

    #[error("invalid transversal: {0}")]
    BadTransversal(String),

    #[error("quotient map carries no section")]
    MissingSection,

    #[error("matrix is singular")]
    Singular,

    #[error("cannot parse {what}: {detail}")]
    Parse { what: &'static str, detail: String },

    #[error("unknown generator or element '{0}'")]
    UnknownElement(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("modular screening failed: {0}")]
    Screening(String),
}

pub type Result<T> = std::result::Result<T, Error>;
