use thiserror::Error;

/// Errors raised by instance validation and the solvers.
///
/// Indices carried by the variants are 1-based, matching the trial numbering
/// used everywhere else in the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("length mismatch: {p_len} probabilities but {w_len} payoffs")]
    LengthMismatch { p_len: usize, w_len: usize },

    #[error("instance has no trials")]
    EmptyInstance,

    #[error("probability p[{index}] = {value} is outside [0, 1]")]
    ProbabilityOutOfRange { index: usize, value: String },

    #[error("payoff w[{index}] = {value} is not strictly positive")]
    NonPositivePayoff { index: usize, value: String },

    #[error("index {index} is outside {lo}..={hi}")]
    IndexOutOfRange { index: usize, lo: usize, hi: usize },

    #[error("p[{index}] = 1 has no finite odds ratio")]
    DegenerateProbability { index: usize },

    #[error("instance with n = {n} exceeds the limit of {limit}")]
    InstanceTooLarge { n: usize, limit: usize },

    #[error("no closed-form value is known for family `{0}`")]
    UnsupportedFamily(&'static str),

    #[error("invalid family parameters: {0}")]
    InvalidFamily(String),

    #[error("simulation needs at least one trial")]
    ZeroTrials,

    #[error("cannot parse `{0}` as a number")]
    Parse(String),

    #[error("{0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_index(index: usize, lo: usize, hi: usize) -> Result<()> {
    if index < lo || index > hi {
        return Err(Error::IndexOutOfRange { index, lo, hi });
    }
    Ok(())
}
