use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DmsError {
    #[error("invalid input: {0}")]
    Input(String),
    #[error("unsupported configuration: {0}")]
    Unsupported(String),
    #[error("word is not reduced: digon at position {position}")]
    NotReduced { position: usize },
    #[error("word does not describe a simple arc: {0}")]
    NotSimple(String),
    #[error("module is not a string: {0}")]
    NotAString(String),
    #[error("map is not closed in the Hom complex")]
    NotClosed,
    #[error("module is not minimal")]
    NotMinimal,
    #[error("object is not 3-spherical")]
    NotSpherical,
    #[error("cap exceeded: {0}")]
    CapExceeded(String),
    /// A convention or identity that must hold failed. Never expected.
    #[error("internal identity violated: {0}")]
    Identity(String),
}

pub type Result<T> = std::result::Result<T, DmsError>;
