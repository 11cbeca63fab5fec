//! Reading one numeric column from delimited text.
//!
//! The delimiter is chosen from the first data line: comma, then tab, then
//! runs of whitespace. A first row whose selected cell does not parse as a
//! number is taken as a header. Blank lines and lines starting with `#` are
//! skipped. Line and column numbers in errors are 1-based.

use std::io::Read;
use std::path::Path;

use regime_core::TimeSeries;

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Delimiter {
    Comma,
    Tab,
    Whitespace,
}

impl Delimiter {
    pub fn detect(line: &str) -> Self {
        if line.contains(',') {
            Delimiter::Comma
        } else if line.contains('\t') {
            Delimiter::Tab
        } else {
            Delimiter::Whitespace
        }
    }

    fn split<'a>(&self, line: &'a str) -> Vec<&'a str> {
        match self {
            Delimiter::Comma => line.split(',').map(str::trim).collect(),
            Delimiter::Tab => line.split('\t').map(str::trim).collect(),
            Delimiter::Whitespace => line.split_whitespace().collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InputSpec {
    /// `-` reads standard input.
    pub path: String,
    /// 0-based column index.
    pub column: usize,
}

impl InputSpec {
    pub fn new(path: impl Into<String>, column: usize) -> Self {
        Self {
            path: path.into(),
            column,
        }
    }

    pub fn read(&self) -> CliResult<TimeSeries> {
        let mut text = String::new();
        let result = if self.path == "-" {
            std::io::stdin().read_to_string(&mut text).map(|_| ())
        } else {
            std::fs::File::open(&self.path).and_then(|mut f| f.read_to_string(&mut text).map(|_| ()))
        };
        result.map_err(|source| CliError::Read {
            path: Path::new(&self.path).to_path_buf(),
            source,
        })?;
        parse_column(&text, self.column)
    }
}

/// Parses column `column` (0-based) of delimited `text`.
pub fn parse_column(text: &str, column: usize) -> CliResult<TimeSeries> {
    let mut delimiter = None;
    let mut values = Vec::new();
    let mut seen_row = false;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let delim = *delimiter.get_or_insert_with(|| Delimiter::detect(line));
        let fields = delim.split(line);
        let first_row = !seen_row;
        seen_row = true;
        let Some(cell) = fields.get(column) else {
            if first_row {
                // a short header row is still a header
                continue;
            }
            return Err(CliError::MissingColumn {
                line: line_no,
                column: column + 1,
                width: fields.len(),
            });
        };
        match cell.parse::<f64>() {
            Ok(v) if v.is_finite() => values.push(v),
            Ok(_) => {
                return Err(CliError::NonFinite {
                    line: line_no,
                    column: column + 1,
                    cell: cell.to_string(),
                })
            }
            Err(_) if first_row => {}
            Err(_) => {
                return Err(CliError::Parse {
                    line: line_no,
                    column: column + 1,
                    cell: cell.to_string(),
                })
            }
        }
    }
    if values.is_empty() {
        return Err(CliError::NoData);
    }
    Ok(TimeSeries::new(values)?)
}
