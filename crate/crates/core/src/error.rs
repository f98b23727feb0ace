use thiserror::Error;

use crate::ssyt::DTightViolation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("size mismatch: {left} vs {right}")]
    SizeMismatch { left: usize, right: usize },

    #[error("unsupported size n = {n} (supported: {min}..={max})")]
    UnsupportedSize { n: usize, min: usize, max: usize },

    #[error("index out of range: {0}")]
    OutOfRange(String),

    #[error("invalid tableau: {0}")]
    InvalidTableau(String),

    #[error("array is not D-tight: {0}")]
    NotDTight(DTightViolation),

    #[error("not a Gelfand-Tsetlin pattern: inequality fails at (i, j) = ({i}, {j})")]
    NotGt { i: usize, j: usize },

    #[error("invalid flag set {0:?}")]
    InvalidFlagSet(Vec<u32>),

    #[error("zero polynomial has no leading term")]
    ZeroPolynomial,

    #[error("exponent overflow while multiplying monomials")]
    ExponentOverflow,

    #[error("not divisible: {0}")]
    NotDivisible(String),

    #[error("leading coefficient is {coeff}, expected 1")]
    NotMonic { coeff: String },

    #[error("leading monomial uses x[{i},{j}] above the diagonal")]
    NotTriangular { i: usize, j: usize },

    #[error("vertex {0} is frozen")]
    FrozenVertex(usize),

    #[error("vertex {0} does not exist")]
    NoSuchVertex(usize),

    #[error("two distinct cluster variables share the label {label}:\n  {first}\n  {second}")]
    LabelCollision { label: String, first: String, second: String },

    #[error("seeds with equal clusters have non-isomorphic quivers (key {0})")]
    QuiverMismatch(String),

    #[error("mutation at vertex {vertex} failed: {source}")]
    Mutation {
        vertex: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("cone generators are not unimodular (determinant {0})")]
    NotUnimodular(String),

    #[error("cone generators are singular")]
    SingularGenerators,

    #[error("frozen arrays are linearly dependent")]
    DegenerateFrozenSpan,
}

impl Error {
    /// Whether the error contradicts an expected mathematical property, as
    /// opposed to bad input or a resource limit.
    pub fn is_violation(&self) -> bool {
        match self {
            Error::NotDTight(_)
            | Error::NotDivisible(_)
            | Error::NotMonic { .. }
            | Error::NotTriangular { .. }
            | Error::LabelCollision { .. }
            | Error::QuiverMismatch(_)
            | Error::NotUnimodular(_)
            | Error::SingularGenerators
            | Error::DegenerateFrozenSpan => true,
            Error::Mutation { source, .. } => source.is_violation(),
            _ => false,
        }
    }
}
