use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("square root of negative value {0}")]
    NegativeSqrt(String),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeomError {
    #[error("zero vector where a direction is required")]
    ZeroVector,
    #[error("determinant must be positive")]
    DetNotPositive,
    #[error("determinant must equal 1")]
    DetNotOne,
    #[error("scale factor must be positive")]
    NonPositiveScale,
    #[error("points do not share an open pi-sector or are parallel")]
    NotInPiSector,
    #[error("component {0} out of range")]
    BadComponent(usize),
    #[error("sector {sector} out of range for component {comp}")]
    BadSector { comp: usize, sector: u32 },
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("stratum must have at least one order")]
    EmptyStratum,
    #[error("sum of orders must be even, got {0}")]
    OddStratum(u32),
    #[error("bad stratum text {0:?}")]
    BadStratum(String),
    #[error("bad matrix text {0:?}: {1}")]
    BadMatrix(String, String),
    #[error("generator {0} does not have determinant 1")]
    GeneratorDet(usize),
    #[error("depth schedule must be nonempty and strictly increasing")]
    BadSchedule,
    #[error("{0}")]
    Other(String),
}

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("bad point text {0:?}")]
    BadPoint(String),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error("inconsistent record: {0}")]
    Inconsistent(String),
}
