use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix has odd dimension {0}")]
    OddDimension(usize),
    #[error("matrix does not square to -I (residual {0:.3e})")]
    NotComplexStructure(f64),
    #[error("Schur iteration did not converge within {0} iterations")]
    NoConvergence(usize),
    #[error("columns are linearly dependent at tolerance {0:e}")]
    RankDeficient(f64),
    #[error("conjugating matrix is numerically singular")]
    SingularConjugator,
    #[error("gave up after {0} attempts without meeting the condition bound")]
    SamplingExhausted(usize),
    #[error("NotOrthogonal: pair is not orthogonal (residual {0:.3e})")]
    NotOrthogonal(f64),
    #[error("eigenvalue clusters are ambiguous at the clustering tolerance: {0}")]
    ClusterAmbiguity(String),
    #[error("invalid signature: {0}")]
    InvalidSignature(String),
    #[error("kernel of -J0J1 -/+ I is trivial")]
    EmptySubspace,
    #[error("non-generic spectrum: {0}")]
    NonGenericSpectrum(String),
    #[error("plane is not invariant (residual {0:.3e})")]
    NotInvariant(f64),
    #[error("intersection is not transverse (gap {0:.3e})")]
    NotTransverse(f64),
    #[error("frame is not orthonormal (residual {0:.3e})")]
    NotOrthonormal(f64),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
