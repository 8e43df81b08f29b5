use thiserror::Error;

/// Everything that can go wrong while constructing or manipulating modules.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("division by zero in E")]
    DivisionByZero,

    #[error("valuation of zero is undefined")]
    ZeroElement,

    #[error("coefficient field is not certified p-indecomposable; pass an attestation or use an Eisenstein/irreducible-mod-p defining polynomial")]
    UncertifiedField,

    #[error("field too small: {0}")]
    FieldTooSmall(String),

    #[error("mismatched field or extension data: {0}")]
    SpecMismatch(String),

    #[error("bad input: {0}")]
    BadInput(String),

    #[error("validation failed: {0}")]
    Validation(String),

    #[error("filtration vector has a zero coordinate pair at index {0}")]
    ZeroCoordinate(usize),

    #[error("module is not in canonical presentation: {0}")]
    NotCanonical(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// CLI exit code classification: FieldTooSmall-like conditions are
    /// distinguishable so callers can react (enlarge E, supply witnesses).
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::FieldTooSmall(_) => 2,
            _ => 1,
        }
    }
}
