use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("functions belong to different bases")]
    BasisMismatch,

    #[error("source is not orthogonal to the ground mode: overlap {overlap:e} with norm {norm:e}")]
    NotOrthogonal { overlap: f64, norm: f64 },

    #[error("seed eigenfunction is not normalized: norm {norm}")]
    NotNormalized { norm: f64 },

    #[error("order {requested} requested but only {available} orders computed")]
    OrderOutOfRange { requested: usize, available: usize },

    #[error("quadrature under-resolved: orthonormality error {max_error:e}")]
    QuadratureUnderResolved { max_error: f64 },

    #[error("basis function {mode} does not vanish at the box edge: value^2 = {value_sq:e}")]
    BoxTooSmall { mode: usize, value_sq: f64 },

    #[error("exact and quadrature products disagree by {deviation:e}")]
    PathMismatch { deviation: f64 },

    #[error("tail formula and direct residual disagree at nu = {nu}: relative mismatch {mismatch:e}")]
    CancellationMismatch { nu: f64, mismatch: f64 },

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("root not bracketed for target {target}")]
    NotBracketed { target: f64 },

    #[error("elliptic solution check failed: {0}")]
    EllipticCheck(String),
}
