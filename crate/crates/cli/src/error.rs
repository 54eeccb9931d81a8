use std::fmt;
use std::path::Path;

use odkg::analytics::AnalyticsError;
use odkg::emr::EmrError;
use odkg::parser::VocabError;
use odkg::terminology::TerminologyError;
use odkg::{BuildError, GraphError};

/// Process exit status. Every failure maps to exactly one of these.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitStatus {
    Success = 0,
    Usage = 1,
    Input = 2,
    GraphValidation = 3,
    Io = 4,
}

#[derive(Debug)]
pub struct CliError {
    pub status: ExitStatus,
    pub message: String,
}

impl CliError {
    pub fn new(status: ExitStatus, message: impl Into<String>) -> Self {
        CliError {
            status,
            message: message.into(),
        }
    }

    pub fn usage(message: impl Into<String>) -> Self {
        CliError::new(ExitStatus::Usage, message)
    }

    pub fn input(message: impl Into<String>) -> Self {
        CliError::new(ExitStatus::Input, message)
    }

    pub fn io(path: &Path, err: std::io::Error) -> Self {
        CliError::new(ExitStatus::Io, format!("{}: {err}", path.display()))
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<TerminologyError> for CliError {
    fn from(e: TerminologyError) -> Self {
        let status = match e {
            TerminologyError::Io { .. } => ExitStatus::Io,
            _ => ExitStatus::Input,
        };
        CliError::new(status, e.to_string())
    }
}

impl From<GraphError> for CliError {
    fn from(e: GraphError) -> Self {
        let status = match e {
            GraphError::Io { .. } => ExitStatus::Io,
            GraphError::Json(_) | GraphError::UnknownNode(_) | GraphError::WrongKind { .. } => {
                ExitStatus::Input
            }
            GraphError::InvalidNode { .. } | GraphError::DanglingEdge { .. } => {
                ExitStatus::GraphValidation
            }
        };
        CliError::new(status, e.to_string())
    }
}

impl From<BuildError> for CliError {
    fn from(e: BuildError) -> Self {
        match e {
            BuildError::Graph(g) => g.into(),
            BuildError::MissingSeed(_) | BuildError::InvalidConfig(_) => {
                CliError::input(e.to_string())
            }
            BuildError::ExpansionBudgetExceeded { .. } | BuildError::ValidationFailed { .. } => {
                CliError::new(ExitStatus::GraphValidation, e.to_string())
            }
        }
    }
}

impl From<EmrError> for CliError {
    fn from(e: EmrError) -> Self {
        let status = match e {
            EmrError::Io { .. } => ExitStatus::Io,
            _ => ExitStatus::Input,
        };
        CliError::new(status, e.to_string())
    }
}

impl From<AnalyticsError> for CliError {
    fn from(e: AnalyticsError) -> Self {
        let status = match e {
            AnalyticsError::Io { .. } => ExitStatus::Io,
            _ => ExitStatus::Usage,
        };
        CliError::new(status, e.to_string())
    }
}

impl From<VocabError> for CliError {
    fn from(e: VocabError) -> Self {
        CliError::new(ExitStatus::Io, e.to_string())
    }
}
