use thiserror::Error;

/// Errors raised by the library. Everything here is a domain error except
/// [`Error::Parse`], which the CLI reports as malformed input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("zero is not an element of the multiplicative group")]
    Zero,

    #[error("cannot factor {value}: cofactor {cofactor} is not certified prime below the trial-division bound {bound}")]
    FactorBound {
        value: String,
        cofactor: String,
        bound: u64,
    },

    #[error("lattice is not saturated (index {0})")]
    NotSaturated(String),

    #[error("value {0} is not a root of unity")]
    NotTorsion(String),

    #[error("result leaves the group of cyclo-rationals: {0}")]
    NotRepresentable(String),

    #[error("parametrization is constant; use point closures for points")]
    ConstantCurve,

    #[error("parameter value {param} is a zero or pole of coordinate {coord}")]
    OffTorus { param: String, coord: usize },

    #[error("relation vector {0} is identically constant on the curve; it belongs to the weakly special closure")]
    RelationInClosure(String),

    #[error("vector {0} is not primitive")]
    NotPrimitive(String),

    #[error("order must be positive")]
    NonPositiveOrder,

    #[error("zero polynomial where a nonzero one is required")]
    ZeroPolynomial,

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Stable machine-readable tag.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::Zero => "zero",
            Error::FactorBound { .. } => "factor_bound",
            Error::NotSaturated(_) => "not_saturated",
            Error::NotTorsion(_) => "not_torsion",
            Error::NotRepresentable(_) => "not_representable",
            Error::ConstantCurve => "constant_curve",
            Error::OffTorus { .. } => "off_torus",
            Error::RelationInClosure(_) => "relation_in_closure",
            Error::NotPrimitive(_) => "not_primitive",
            Error::NonPositiveOrder => "non_positive_order",
            Error::ZeroPolynomial => "zero_polynomial",
            Error::InvalidModel(_) => "invalid_model",
            Error::InvalidArgument(_) => "invalid_argument",
            Error::Parse(_) => "parse",
        }
    }

    pub fn is_malformed_input(&self) -> bool {
        matches!(self, Error::Parse(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
