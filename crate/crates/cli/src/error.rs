use std::path::PathBuf;

use thiserror::Error;

/// Failures of a command, grouped by the exit code they map to.
#[derive(Debug, Error)]
pub enum CliError {
    /// Malformed input: channel files, distributions, flag values.
    #[error("{0}")]
    Input(String),

    /// A grid or rate outside the region where the requested quantity exists.
    #[error("{0}")]
    Infeasible(String),

    #[error("{0}")]
    WorkBound(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{0}")]
    Other(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Infeasible(_) => 3,
            CliError::WorkBound(_) => 4,
            CliError::Io { .. } | CliError::Other(_) => 1,
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }
}

impl From<remcode::Error> for CliError {
    fn from(e: remcode::Error) -> Self {
        use remcode::Error as E;
        let msg = e.to_string();
        match e {
            E::InvalidChannel(_)
            | E::ChannelFile { .. }
            | E::InvalidDistribution(_)
            | E::UnreachableOutput { .. } => CliError::Input(msg),
            E::OutOfRange { .. }
            | E::RateUnreachable { .. }
            | E::InfeasibleConstraint { .. }
            | E::DistortionOutOfRange { .. }
            | E::BelowCapacity { .. }
            | E::AboveCapacity { .. }
            | E::InvalidGrid(_)
            | E::InvalidConfig(_) => CliError::Infeasible(msg),
            E::WorkBound(_) => CliError::WorkBound(msg),
            E::NoRoot { .. } | E::EmptySupport | E::Optimization(_) => CliError::Other(msg),
        }
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Other(format!("csv output: {e}"))
    }
}

pub type CliResult<T> = Result<T, CliError>;
