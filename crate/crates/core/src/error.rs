use thiserror::Error;

/// Errors raised by the tenspec core library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("variable count mismatch: {left} vs {right}")]
    NvarsMismatch { left: usize, right: usize },

    #[error("point has length {got}, polynomial has {expected} variables")]
    PointLength { expected: usize, got: usize },

    #[error("variable index {index} out of range for {nvars} variables")]
    VariableIndex { index: usize, nvars: usize },

    #[error("interpolation nodes are not pairwise distinct")]
    DuplicateNodes,

    #[error("need at least {needed} samples for degree {degree}, got {got}")]
    TooFewSamples { needed: usize, degree: usize, got: usize },

    #[error("the zero polynomial has no finite vanishing order")]
    ZeroPolynomial,

    #[error("polynomial has degree 0; nothing to solve")]
    ConstantPolynomial,

    #[error("root finder did not converge after {iterations} iterations")]
    NoConvergence {
        iterations: usize,
        best: Vec<num_complex::Complex64>,
    },

    #[error("unsupported case (n, d) = ({n}, {d}): {reason}")]
    Unsupported { n: usize, d: usize, reason: String },

    #[error("reference tensor t has vanishing resultant")]
    SingularReference,

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("{lambda} is not an eigenvalue (char poly residual {residual:e})")]
    NotAnEigenvalue { lambda: String, residual: f64 },

    #[error("zero torus entry at position {0}")]
    ZeroTorusEntry(usize),

    #[error("forms are proportional; they do not span a line")]
    Proportional,

    #[error("form has distinct roots; its tangent cone is not of interest")]
    NotSingular,

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid field `{field}`: {reason}")]
    InvalidField { field: String, reason: String },

    #[error("classification inconclusive: {0}")]
    Inconclusive(String),
}

pub type Result<T> = std::result::Result<T, Error>;
