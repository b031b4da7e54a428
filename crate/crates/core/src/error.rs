use thiserror::Error;

/// Errors raised by state construction, observable evaluation and sampling.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpinError {
    #[error("at least one site is required")]
    NoSites,
    #[error("site {site} is out of range for a {n_sites}-site assembly (sites are 1-based)")]
    SiteOutOfRange { site: usize, n_sites: usize },
    #[error("{n_sites} sites exceed the dense cap of {cap}; use the product-state fast path")]
    DenseCapExceeded { n_sites: usize, cap: usize },
    #[error("balanced orderings need an even site count >= 2, got {0}")]
    OddSiteCount(usize),
    #[error("enumerating balanced orderings of {n_sites} sites exceeds the cap of {cap}")]
    EnumerationCapExceeded { n_sites: usize, cap: usize },
    #[error("state is not normalized (squared norm {norm_sqr})")]
    NotNormalized { norm_sqr: f64 },
    #[error("amplitude vector length {0} is not a power of two >= 2")]
    BadDimension(usize),
    #[error("invalid ensemble weights: {0}")]
    InvalidWeights(String),
    #[error("an ensemble needs at least one member")]
    EmptyEnsemble,
    #[error("site count mismatch: expected {expected}, found {found}")]
    SiteCountMismatch { expected: usize, found: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("expectation value has imaginary part {0:e}; the observable is not Hermitian")]
    ImaginaryResidue(f64),
    #[error("expected a single-spin density operator, got {0} sites")]
    NotSingleSpin(usize),
    #[error("basis is not orthonormal (max Gram deviation {0:e})")]
    NotOrthonormal(f64),
    #[error("matrix is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),
    #[error("trace is {0}, expected 1")]
    TraceNotOne(f64),
    #[error("matrix is not positive semidefinite (smallest eigenvalue {0:e})")]
    NotPositive(f64),
    #[error("ensemble member {0} is not a product state")]
    NotProductState(usize),
    #[error("no shot records to summarize")]
    NoRecords,
    #[error("observable coefficient must be finite, got {0}")]
    NonFiniteCoefficient(f64),
}

pub type Result<T, E = SpinError> = std::result::Result<T, E>;
