use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch for {what}: expected {expected}, found {found}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("{what} row {row} is not a probability distribution (sum = {sum})")]
    NotADistribution {
        what: &'static str,
        row: usize,
        sum: f64,
    },

    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("{what} did not converge after {iterations} iterations (residual {residual:e})")]
    NotConverged {
        what: &'static str,
        iterations: usize,
        residual: f64,
    },

    #[error("policy iteration exceeded {iterations} iterations without stabilizing")]
    PolicyIterationCap {
        iterations: usize,
        previous: Box<crate::mdp::StochasticPolicy>,
        last: Box<crate::mdp::StochasticPolicy>,
    },

    #[error("baseline assigns zero probability to observed pair (state {state}, action {action})")]
    ZeroBaselineProbability { state: usize, action: usize },

    #[error("terminal state {0} cannot be stepped")]
    TerminalState(String),

    #[error("temperature bisection failed: {0}")]
    Bisection(String),

    #[error("parse error on line {line}: {reason}")]
    Parse { line: usize, reason: String },

    #[error("singular linear system in policy evaluation")]
    Singular,

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
