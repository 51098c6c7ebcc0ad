use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },

    #[error("order relation has a cycle through `{0}`")]
    Cycle(String),

    #[error("duplicate element name `{0}`")]
    DuplicateName(String),

    #[error("a poset needs at least one element")]
    EmptyPoset,

    #[error("poset has {0} elements; at most {max} are supported", max = crate::set::MAX_ELEMENTS)]
    TooManyElements(usize),

    #[error("size mismatch: expected {expected} elements, found {found}")]
    SizeMismatch { expected: usize, found: usize },

    #[error("sequence is not a linear extension of the poset")]
    NotLinearExtension,

    #[error("labeling is not a natural labeling of the poset")]
    NotNaturalLabeling,

    #[error("lattice would exceed the size cap of {cap} elements")]
    LatticeTooLarge { cap: usize },

    #[error("enumeration exceeded the cap of {cap}")]
    EnumerationCap { cap: u64 },

    #[error("interval endpoints are incomparable")]
    IncomparableEndpoints,

    #[error("position {position} out of range 1..={max}")]
    PositionOutOfRange { position: usize, max: usize },

    #[error("not a maximal chain: {0}")]
    InvalidChain(String),

    #[error("corrupted planar embedding: {0}")]
    CorruptEmbedding(String),

    #[error("f-vector is inconsistent: h_{index} would be negative")]
    NegativeH { index: usize },

    #[error("unsupported export dialect `{0}`")]
    UnsupportedDialect(String),

    #[error("unknown builtin `{0}`")]
    UnknownBuiltin(String),
}

pub type Result<T> = std::result::Result<T, Error>;
