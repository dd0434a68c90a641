use thiserror::Error;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("hyperplane {index} is the zero form")]
    ZeroForm { index: usize },
    #[error("hyperplane {index} has {found} coefficients, expected {expected}")]
    DimensionMismatch {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("hyperplanes {first} and {second} coincide")]
    DuplicateHyperplane { first: usize, second: usize },
    #[error("no hyperplane with index {index} (arrangement has {len})")]
    NoSuchHyperplane { index: usize, len: usize },
    #[error("not a flat of the arrangement")]
    NotAFlat,
    #[error("lattice computations support at most 128 hyperplanes, got {0}")]
    TooLarge(usize),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("malformed certificate: {0}")]
    MalformedCertificate(String),
    #[error("unknown corpus entry `{0}`")]
    UnknownCorpus(String),
    #[error("invalid parameters for `{name}`: {msg}")]
    InvalidParams { name: String, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
