//! Command-line front end: configuration, sweeps, CSV tables and the
//! verification report.

pub mod commands;
pub mod config;
pub mod sweep;
pub mod table;
pub mod verify;

use std::fmt;

pub use config::{RawConfig, Settings, UsageError};

#[derive(Debug)]
pub enum CliError {
    /// Bad flags, config keys or parameter values.
    Usage(String),
    /// A check of `verify` failed.
    Verification(Vec<String>),
    /// The numerics refused the request.
    Numerical(qotto::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Usage(_) => 1,
            Self::Verification(_) => 2,
            Self::Numerical(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Usage(m) => write!(f, "{m}"),
            Self::Verification(names) => write!(f, "verification failed: {}", names.join(", ")),
            Self::Numerical(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<UsageError> for CliError {
    fn from(e: UsageError) -> Self {
        Self::Usage(e.0)
    }
}

impl From<qotto::Error> for CliError {
    fn from(e: qotto::Error) -> Self {
        match e {
            qotto::Error::InvalidParameter { .. } | qotto::Error::DiscordOutOfRange { .. } => Self::Usage(e.to_string()),
            other => Self::Numerical(other),
        }
    }
}
