//! CLI error with exit-code classification.
//!
//! Exit codes: 0 success, 1 unreadable/invalid input, 2 infeasible or
//! degenerate configuration.

use std::fmt;

#[derive(Debug)]
pub struct CliError {
    message: String,
    exit_code: i32,
}

impl CliError {
    /// I/O or parse problem: exit code 1.
    pub fn input(message: String) -> Self {
        Self {
            message,
            exit_code: 1,
        }
    }

    /// Infeasible or degenerate configuration: exit code 2.
    pub fn config(message: String) -> Self {
        Self {
            message,
            exit_code: 2,
        }
    }

    pub fn exit_code(&self) -> i32 {
        self.exit_code
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

impl From<hetsample::Error> for CliError {
    fn from(err: hetsample::Error) -> Self {
        if err.is_config_error() {
            CliError::config(err.to_string())
        } else {
            CliError::input(err.to_string())
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        CliError::input(err.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(err: csv::Error) -> Self {
        CliError::input(err.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(err: serde_json::Error) -> Self {
        CliError::input(err.to_string())
    }
}

impl From<image::ImageError> for CliError {
    fn from(err: image::ImageError) -> Self {
        CliError::input(err.to_string())
    }
}
