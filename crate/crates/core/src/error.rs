use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("columns are linearly dependent")]
    DependentColumns,
    #[error("column span is not a direct summand")]
    NotSummand,
    #[error("invalid complex: {0}")]
    InvalidComplex(String),
    #[error("not a chain map: {0}")]
    NotChainMap(String),
    #[error("not a chain homotopy: {0}")]
    NotHomotopy(String),
    #[error("invalid morphism: {0}")]
    InvalidMorphism(String),
    #[error("invalid exact sequence: {0}")]
    InvalidSes(String),
    #[error("bound exceeded: {0}")]
    BoundExceeded(String),
    #[error("not a transversal: {0}")]
    NotTransversal(String),
    #[error("invalid carrier: {0}")]
    InvalidCarrier(String),
    #[error("carrier is not a star carrier at simplex {0}")]
    NotStar(String),
    #[error("support violation at simplex {0}")]
    Support(String),
    #[error("not a refinement: {0}")]
    NotRefinement(String),
    #[error("not a subcomplex: {0}")]
    NotSubcomplex(String),
    #[error("incompatible data: {0}")]
    Incompatible(String),
    #[error("stage class does not vanish at stage {0}")]
    NonvanishingClass(usize),
    #[error("invalid input at `{key}`: {msg}")]
    Parse { key: String, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn parse_err(key: impl Into<String>, msg: impl Into<String>) -> Error {
    Error::Parse {
        key: key.into(),
        msg: msg.into(),
    }
}
