use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("gamma has a pole at {0}")]
    PoleArgument(f64),

    #[error("{what} = {value} is outside the supported range {range}")]
    OutOfRange {
        what: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("dimension {0} is not supported here")]
    Dimension(usize),

    #[error("point {0:?} is a declared singularity of the field")]
    SingularPoint(Vec<f64>),

    #[error("singularity exponent {0} is not integrable (must exceed -1)")]
    NonIntegrable(f64),

    #[error("invalid integration domain: {0}")]
    Domain(String),

    #[error("field kind `{0}` has no known fractional variation measure")]
    UnsupportedField(String),

    #[error("test field violates the sup-norm bound: |phi| reaches {0}")]
    TestFieldNorm(f64),

    #[error("ball averages did not stabilise (last two: {0}, {1})")]
    NonConvergentAverage(f64, f64),

    #[error("potential diverges: decay exponent {decay} does not exceed order {order}")]
    DivergentPotential { decay: f64, order: f64 },

    #[error("quadrature budget of {0} evaluations exceeded")]
    BudgetExceeded(usize),

    #[error("bad field descriptor: {0}")]
    Descriptor(String),

    #[error("{0}")]
    Invalid(String),
}
