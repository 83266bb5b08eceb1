use std::process::ExitCode;

use matbeta::integrate::Verdict;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Library(#[from] matbeta::Error),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error(transparent)]
    Output(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    pub fn status(&self) -> ExitStatus {
        match self {
            CliError::Usage(_) => ExitStatus::Invalid,
            CliError::Library(e) if e.is_invalid_input() => ExitStatus::Invalid,
            CliError::Io { .. } => ExitStatus::Invalid,
            _ => ExitStatus::Internal,
        }
    }
}

/// Process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum ExitStatus {
    Pass = 0,
    Fail = 1,
    Invalid = 2,
    Inconclusive = 3,
    Internal = 4,
}

impl ExitStatus {
    pub fn code(self) -> u8 {
        self as u8
    }

    /// Severity used when several results are folded into one status.
    fn rank(self) -> u8 {
        match self {
            ExitStatus::Pass => 0,
            ExitStatus::Inconclusive => 1,
            ExitStatus::Fail => 2,
            ExitStatus::Invalid => 3,
            ExitStatus::Internal => 4,
        }
    }

    pub fn worst(self, other: ExitStatus) -> ExitStatus {
        if other.rank() > self.rank() {
            other
        } else {
            self
        }
    }
}

impl From<Verdict> for ExitStatus {
    fn from(v: Verdict) -> Self {
        match v {
            Verdict::Pass => ExitStatus::Pass,
            Verdict::Fail => ExitStatus::Fail,
            Verdict::Inconclusive => ExitStatus::Inconclusive,
        }
    }
}

impl From<ExitStatus> for ExitCode {
    fn from(s: ExitStatus) -> Self {
        ExitCode::from(s.code())
    }
}
