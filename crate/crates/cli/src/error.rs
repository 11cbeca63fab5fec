use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("line {line}, column {column}: cannot parse `{cell}` as a number")]
    Parse { line: usize, column: usize, cell: String },

    #[error("line {line}, column {column}: value `{cell}` is not finite")]
    NonFinite { line: usize, column: usize, cell: String },

    #[error("line {line}: column {column} is missing (row has {width} fields)")]
    MissingColumn { line: usize, column: usize, width: usize },

    #[error("input contains no observations")]
    NoData,

    #[error(transparent)]
    Analysis(#[from] regime_core::Error),

    #[error("{0}")]
    Usage(String),
}

impl CliError {
    /// Process exit status: every error is a usage or data error.
    pub fn exit_code(&self) -> i32 {
        2
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
