use std::fmt;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{}", config_message(line, message))]
    Config { line: Option<usize>, message: String },

    #[error("{0}")]
    Domain(#[from] optomech::Error),

    #[error("io: {0}")]
    Io(String),
}

fn config_message(line: &Option<usize>, message: &str) -> String {
    match line {
        Some(l) => format!("config error at line {l}: {message}"),
        None => format!("config error: {message}"),
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io(_) => 1,
            CliError::Config { .. } => 2,
            CliError::Domain(_) => 3,
        }
    }

    pub fn io(context: impl fmt::Display, err: std::io::Error) -> Self {
        CliError::Io(format!("{context}: {err}"))
    }
}
