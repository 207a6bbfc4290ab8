use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("characteristic 2 is not supported")]
    CharTwo,
    #[error("modulus {0} is not prime")]
    NotPrime(u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("scalars belong to different fields")]
    FieldMismatch,
    #[error("elements belong to different posets")]
    PosetMismatch,

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("duplicate element `{0}`")]
    DuplicateElement(String),
    #[error("order relation has a cycle through `{0}` and `{1}`")]
    CycleDetected(String, String),
    #[error("not a partial order: {0}")]
    NotPartialOrder(String),
    #[error("`{0}` is not below `{1}`")]
    NotComparable(String, String),

    #[error("element is not invertible: zero diagonal entry at `{0}`")]
    NotInvertible(String),
    #[error("invalid poset involution: {0}")]
    InvalidInvolution(String),
    #[error("`{0} < {1}` is not a cover relation")]
    NotCover(String, String),
    #[error("zero value on cover `{0} < {1}`")]
    ZeroValue(String, String),
    #[error("cover values are inconsistent on the interval [{0}, {1}]")]
    Inconsistent(String, String),
    #[error("not multiplicative: {0}")]
    NotMultiplicative(String),

    #[error("not an involution: {0}")]
    NotInvolution(String),
    #[error("involution factorization failed: {reason}")]
    FactorizationFailed {
        reason: String,
        /// Basis of the solution space of the conjugator equations, as
        /// coordinate vectors rendered canonically.
        solution_basis: Vec<Vec<String>>,
    },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("map is not a Jordan *-derivation (witness pair {0}, {1})")]
    NotJordan(String, String),
    #[error("decomposition failed: {0}")]
    DecompositionFailed(String),
}

impl Error {
    /// Stable variant name, used in reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::CharTwo => "CharTwo",
            Error::NotPrime(_) => "NotPrime",
            Error::DivisionByZero => "DivisionByZero",
            Error::FieldMismatch => "FieldMismatch",
            Error::PosetMismatch => "PosetMismatch",
            Error::Parse { .. } => "ParseError",
            Error::UnknownElement(_) => "UnknownElement",
            Error::DuplicateElement(_) => "DuplicateElement",
            Error::CycleDetected(..) => "CycleDetected",
            Error::NotPartialOrder(_) => "NotPartialOrder",
            Error::NotComparable(..) => "NotComparable",
            Error::NotInvertible(_) => "NotInvertible",
            Error::InvalidInvolution(_) => "InvalidInvolution",
            Error::NotCover(..) => "NotCover",
            Error::ZeroValue(..) => "ZeroValue",
            Error::Inconsistent(..) => "Inconsistent",
            Error::NotMultiplicative(_) => "NotMultiplicative",
            Error::NotInvolution(_) => "NotInvolution",
            Error::FactorizationFailed { .. } => "FactorizationFailed",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::NotJordan(..) => "NotJordan",
            Error::DecompositionFailed(_) => "DecompositionFailed",
        }
    }
}
