use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("not a generalized Cartan matrix: {0}")]
    NotGcm(String),
    #[error("matrix is not symmetrizable")]
    NotSymmetrizable,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("root table box {table} does not dominate {requested}")]
    BoxTooSmall { table: String, requested: String },
    #[error("weight is not dominant: {0}")]
    NotDominant(String),
    #[error("weight is not integral: {0}")]
    NotIntegral(String),
    #[error("{0} is not in the positive root cone")]
    NotInPositiveCone(String),
    #[error("Freudenthal recurrence is singular at dominant weight {0}")]
    SingularWeight(String),
    #[error("principal degrees are not homogeneous or not opposite: {0}")]
    DegreeMismatch(String),
    #[error("unsupported algebra: {0}")]
    Unsupported(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
}

impl Error {
    /// True for errors caused by bad input rather than a broken invariant.
    pub fn is_input_error(&self) -> bool {
        !matches!(
            self,
            Error::InternalInconsistency(_) | Error::SingularWeight(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
