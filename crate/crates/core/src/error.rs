use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("operands live over different variable tables")]
    VarTableMismatch,
    #[error("variable `{0}` does not admit negative exponents")]
    NegativeExponent(String),
    #[error("exponent vector has length {got}, expected {expected}")]
    ExponentArity { expected: usize, got: usize },
    #[error("invalid variable table: {0}")]
    InvalidVarTable(String),
    #[error("variable table declares no canonical (q, p) pairing")]
    NoPairing,
    #[error("divisor is not monic with nonnegative exponents: {0}")]
    NonMonicDivisor(String),
    #[error("constant term `{0}` of the divisor is not a unit; cannot divide negative powers of l")]
    NonUnitConstantTerm(String),
    #[error("localized variable `{0}` evaluated at zero")]
    ZeroLocalized(String),
    #[error("negative powers of l evaluated at l = 0")]
    ZeroLambda,
    #[error("point has {got} coordinates, expected {expected}")]
    PointArity { expected: usize, got: usize },
    #[error("invalid system definition: {0}")]
    InvalidSpec(String),
    #[error("index {index} out of range 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("separation coordinates are degenerate: {0}")]
    DegeneratePoint(String),
    #[error("matrix is not invertible: determinant `{0}` is not a unit")]
    NotInvertible(String),
    #[error("unknown example id `{0}`")]
    UnknownExample(String),
    #[error("trajectory hit a singularity at t = {time}: {reason}")]
    Singularity { time: f64, reason: String },
    #[error("invalid simulation parameters: {0}")]
    InvalidSimulation(String),
    #[error("malformed document: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
