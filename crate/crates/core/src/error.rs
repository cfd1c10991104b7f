use thiserror::Error;

use crate::model::Violation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid batch: {0}")]
    InvalidBatch(String),

    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    /// A solver was called on an instance outside the subproblem it solves.
    #[error("{solver} does not apply: {reason}")]
    WrongSubproblem { solver: &'static str, reason: String },

    #[error("size limit exceeded: {size} > {limit}")]
    OracleLimit { size: usize, limit: usize },

    #[error("infeasible schedule: {}", violation_list(.0))]
    Infeasible(Vec<Violation>),

    #[error("unsupported batch mode: {0}")]
    UnsupportedMode(String),

    #[error("gap undefined for a best value of zero")]
    UndefinedGap,

    #[error("invalid configuration: {0}")]
    Config(String),

    /// Two independent computations disagreed. Always a bug.
    #[error("internal consistency check failed: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }

    pub(crate) fn wrong(solver: &'static str, reason: impl Into<String>) -> Self {
        Error::WrongSubproblem {
            solver,
            reason: reason.into(),
        }
    }
}

fn violation_list(v: &[Violation]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}
