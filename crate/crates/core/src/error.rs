use crate::Vector;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not symmetric (max asymmetry {asymmetry:e})")]
    NotSymmetric { asymmetry: f64 },
    #[error("matrix is not positive definite")]
    NotPositiveDefinite,
    #[error("columns are not orthonormal (max deviation {deviation:e})")]
    NotOrthonormal { deviation: f64 },
    #[error("no basis vector has a usable residual against the given columns")]
    DegenerateBasis,
    #[error("operator maps the iterate to the zero vector")]
    SingularDirection,
    #[error("invalid kernel size {0}")]
    InvalidKernelSize(f64),
    #[error("kernel size too small: every correntropy weight underflowed")]
    SigmaTooSmall { last_valid: Vector },
    #[error("Woodbury denominator {denominator:e} is numerically singular")]
    WoodburySingular { denominator: f64 },
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}
