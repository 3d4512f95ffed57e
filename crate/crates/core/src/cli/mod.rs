//! Configuration files, command dispatch and reports for the `coarse` binary.
//!
//! A config is a list of `section.key = value` lines; see
//! `config-grammar.ebnf` at the crate root for the full grammar.

mod config;
mod report;
mod run;
mod syntax;

use thiserror::Error;

use crate::cohomology::CohomologyError;
use crate::ends::EndsError;
use crate::logic::LogicError;
use crate::spaces::SpaceError;

pub use config::{parse_config, Command, Job, JobConfig, MapExpr, PairExpr, Params, PointLit, SetExpr};
pub use report::{Entry, Report, EXIT_ERROR, EXIT_FAILS, EXIT_INCONCLUSIVE, EXIT_OK, REPORT_FORMAT};
pub use run::run;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CliError {
    #[error("{line}:{col}: {message}")]
    SyntaxError { line: usize, col: usize, message: String },
    #[error("unknown name `{0}`")]
    UnknownName(String),
    #[error("missing required key `{0}`")]
    MissingKey(String),
    #[error("{name} = {value} is out of range: {reason}")]
    ParamOutOfRange { name: String, value: String, reason: String },
    #[error("command {index} `{label}`: {source}")]
    Command { index: usize, label: String, source: ModuleError },
}

/// Errors raised while executing a command.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModuleError {
    #[error("point `{0}` is not in the space window")]
    UnknownPoint(String),
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error(transparent)]
    Logic(#[from] LogicError),
    #[error(transparent)]
    Ends(#[from] EndsError),
    #[error(transparent)]
    Cohomology(#[from] CohomologyError),
}
