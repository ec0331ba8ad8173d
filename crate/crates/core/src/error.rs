use thiserror::Error;

use crate::report::Report;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("division by zero in the base field at byte {offset}")]
    DivisionByZero { offset: usize },
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("ring mismatch: {0}")]
    RingMismatch(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("negative degree bound {0}")]
    NegativeBound(i64),
    #[error("invalid backend: {0}")]
    InvalidBackend(String),
    #[error("no quasi-inverse: {0}")]
    NoInverse(String),
    #[error("unsupported backend: {0}")]
    Unsupported(String),
    #[error("n = {0} is odd; suspension and cones need even n")]
    OddN(usize),
    #[error("n = {0} is too small; factorizations need n >= 2")]
    SmallN(usize),
    #[error("index {index} out of range 0..{n}")]
    IndexRange { index: usize, n: usize },
    #[error("backend or length mismatch: {0}")]
    Incompatible(String),
    #[error("not a factorization: {0}")]
    InvalidFactorization(Box<Report>),
    #[error("not a morphism: {0}")]
    InvalidMorphism(Box<Report>),
    #[error("homotopy witness fails: {0}")]
    InvalidHomotopy(Box<Report>),
    #[error("infeasible parameters: {0}")]
    Infeasible(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
}
