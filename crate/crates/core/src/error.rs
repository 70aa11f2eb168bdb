use thiserror::Error;

use crate::algebra::parse::ParseError;

#[derive(Debug, Error)]
pub enum Error {
    #[error("forms live in different charts")]
    ChartMismatch,
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("{curve} is not an integral curve of the form; remainder {remainder}")]
    NotIntegral { curve: String, remainder: String },
    #[error("invalid configuration: {0}")]
    InvalidConfiguration(String),
    #[error("target degree {target} is below the actual degree {actual}")]
    DegreeTooLow { target: u32, actual: u32 },
    #[error("relation does not hold; remainder {0}")]
    RelationFails(String),
    #[error("point {0} is not a zero of the form")]
    NotAZero(String),
    #[error("point {0} does not lie on the configuration")]
    NotOnConfiguration(String),
    #[error("cannot classify the singularity at {0}")]
    Unclassifiable(String),
    #[error("the η row at {point} is {computed}, not proportional to the weighted degrees {predicted}")]
    GeometricMismatch { point: String, computed: String, predicted: String },
    #[error("non-isolated locus: {0}")]
    NonIsolated(String),
    #[error("no admissible shear found after {0} attempts")]
    ShearsExhausted(usize),
    #[error("Hilbert function does not stabilize: {0:?}")]
    NoStabilization(Vec<i64>),
    #[error("required square root does not exist in the field: {0}")]
    FieldOfDefinition(String),
    #[error("no center certificate at this zero: {0}")]
    NoCenterCertificate(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("internal inconsistency: {0}")]
    Internal(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("{0}")]
    Config(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
