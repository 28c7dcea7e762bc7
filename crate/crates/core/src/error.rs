use thiserror::Error;

use crate::models::{GroupVariant, ModelSpec};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unsupported parameters for {spec}: {reason}")]
    UnsupportedParams { spec: ModelSpec, reason: String },

    #[error("group {group} is not available for {spec}")]
    UnsupportedGroup {
        spec: ModelSpec,
        group: GroupVariant,
    },

    #[error("elements belong to different models ({left} vs {right})")]
    ModelMismatch { left: ModelSpec, right: ModelSpec },

    #[error("matrix does not lie in the algebra of {0}")]
    NotInAlgebra(ModelSpec),

    #[error("element is not homogeneous of degree {0}")]
    NotHomogeneous(i32),

    #[error("invalid degree {0}; expected one of -1, 0, 1")]
    InvalidDegree(i32),

    #[error("invalid cochain form degree {0}")]
    InvalidFormDegree(usize),

    #[error("linear solution space has dimension {0}, more than the supported 4")]
    SolutionSpaceTooLarge(usize),

    #[error("group normalisation needs an irrational scale factor")]
    IrrationalNormalization,

    #[error("matrix is not invertible")]
    NotInvertible,

    #[error("shape mismatch: expected {expected}, got {got}")]
    Shape { expected: String, got: String },

    #[error("harmonic curvature has homogeneity 1 and 3 but not 2")]
    Ambiguous,

    #[error("the difference element Z must be nonzero")]
    ZeroDifference,

    #[error("malformed budget {0}")]
    InvalidBudget(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
