use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("perturbation sup norm {sup_norm} exceeds the admissible bound {bound}")]
    PerturbationTooLarge { sup_norm: f64, bound: f64 },
    #[error("period must be at least 1")]
    InvalidPeriod,
    #[error("displacement table has {got} entries, expected {expected}")]
    TableSize { expected: usize, got: usize },
    #[error("torus class ({a}, {b}) is out of range for period {n}")]
    ClassOutOfRange { a: i64, b: i64, n: usize },
    #[error("torus class ({a}, {b}) listed twice")]
    DuplicateClass { a: i64, b: i64 },
    #[error("non-finite displacement")]
    NonFinite,
    #[error("tolerance must be positive and finite, got {0}")]
    InvalidTolerance(f64),
    #[error("{name} must be positive and finite, got {value}")]
    NonPositive { name: &'static str, value: f64 },
    #[error("Riesz exponent must exceed 2, got {0}")]
    RieszExponent(f64),
    #[error("direction vector must have unit norm, got norm {0}")]
    NonUnitDirection(f64),
    #[error("all shell weights vanish (k lies in the reciprocal lattice)")]
    DegenerateWeights,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("malformed perturbation file: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_positive(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(Error::NonPositive { name, value })
    }
}

pub(crate) fn check_tol(tol: f64) -> Result<f64> {
    if tol.is_finite() && tol > 0.0 {
        Ok(tol)
    } else {
        Err(Error::InvalidTolerance(tol))
    }
}
