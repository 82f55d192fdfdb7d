use std::io;
use std::path::PathBuf;

use macfarlane_core::{DomainError, HypError, NumError, QuatError};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{0}")]
    Precondition(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Io { .. } => 1,
            CliError::Parse(_) => 2,
            CliError::Precondition(_) => 3,
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Parse(e.to_string())
    }
}

impl From<NumError> for CliError {
    fn from(e: NumError) -> Self {
        match e {
            NumError::Parse(_) | NumError::BadRadicand(_) | NumError::RadicandMismatch(..) => {
                CliError::Parse(e.to_string())
            }
            other => CliError::Precondition(other.to_string()),
        }
    }
}

macro_rules! precondition {
    ($($t:ty),*) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::Precondition(e.to_string())
            }
        }
    )*};
}

precondition!(QuatError, HypError, DomainError);
