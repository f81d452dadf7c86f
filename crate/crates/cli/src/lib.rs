//! File formats, configuration, and the command implementations behind the
//! `casir` binary.

pub mod commands;
pub mod config;
pub mod pipeline;
pub mod pnm;
pub mod report;

use std::fmt;

/// Top-level failure classes, mapped onto exit codes by `main`:
/// invalid input → 2, runtime failure → 1.
#[derive(Debug)]
pub enum AppError {
    Invalid(String),
    Runtime(String),
}

impl AppError {
    pub fn invalid(msg: impl Into<String>) -> Self {
        AppError::Invalid(msg.into())
    }

    pub fn runtime(msg: impl Into<String>) -> Self {
        AppError::Runtime(msg.into())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            AppError::Invalid(_) => 2,
            AppError::Runtime(_) => 1,
        }
    }
}

impl fmt::Display for AppError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AppError::Invalid(msg) | AppError::Runtime(msg) => write!(f, "{msg}"),
        }
    }
}

impl std::error::Error for AppError {}

pub type AppResult<T> = Result<T, AppError>;
