use num_bigint::BigInt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("valuation of zero is undefined")]
    UndefinedValuation,

    #[error("argument must be nonzero: {0}")]
    ZeroArgument(&'static str),

    #[error("|{0}| exceeds the trial-division budget")]
    Capacity(BigInt),

    #[error("invalid input: {0}")]
    Validation(String),

    #[error("point is not on the curve: {0}")]
    OffCurve(String),

    #[error("point is torsion")]
    Torsion,

    #[error("outside the domain of the map: {0}")]
    Domain(String),

    #[error("inapplicable: {0}")]
    Inapplicable(String),

    #[error("form structure violated: {0}")]
    Structure(String),

    #[error("data format: {0}")]
    Data(String),

    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
