use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("matrix data has {len} entries, expected {rows}x{cols}")]
    BadShape { rows: usize, cols: usize, len: usize },

    #[error("expected a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("map {index} has zero determinant and is not an epimorphism")]
    ZeroDeterminant { index: usize },

    #[error("a family needs at least {needed} maps, got {found}")]
    TooFewMaps { needed: usize, found: usize },

    #[error("empty family")]
    EmptyFamily,

    #[error("gcd of two zero polynomials is undefined")]
    BothZero,

    #[error("zero polynomial is not allowed here")]
    ZeroPolynomial,

    #[error("polynomial degree {degree} exceeds bound {bound}")]
    DegreeTooLarge { degree: usize, bound: usize },

    #[error("input vectors are linearly dependent")]
    DependentVectors,

    #[error("argument must be positive")]
    NonPositive,

    #[error("maps do not commute")]
    NonCommuting,

    #[error("matrix {index} is not unimodular (det = {det})")]
    NotUnimodular { index: usize, det: String },

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("parameter out of range: {0}")]
    InvalidParameter(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("zero character is not allowed here")]
    ZeroCharacter,

    #[error("relation kernel did not stabilize at exponent {exponent}: {detail}")]
    StabilizationViolated { exponent: u64, detail: String },

    #[error("construction failed verification: {0}")]
    ConstructionFailed(String),
}
