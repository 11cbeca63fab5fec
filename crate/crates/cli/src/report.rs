//! Structured-text reports.
//!
//! ```text
//! command = detect
//! n = 2000
//! l_hat = 1000
//!
//! [table rss]
//! k,rss
//! 2,14.5
//! ```
//!
//! Scalars are `key = value` lines. Tables start with `[table name]`,
//! followed by a comma-separated header and rows, and end at a blank line.
//! A comma inside a cell is written as `;`.
//! Reals are written in the shortest form that parses back to the same
//! `f64`, so values round-trip exactly.

use std::fmt::Write as _;

#[derive(Debug, Clone, PartialEq)]
enum Block {
    Field(String, String),
    Table {
        name: String,
        header: Vec<String>,
        rows: Vec<Vec<String>>,
    },
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Report {
    blocks: Vec<Block>,
}

/// Shortest round-trip rendering; non-finite values as `nan`, `inf`, `-inf`.
pub fn real(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{v:?}")
    }
}

impl Report {
    pub fn new(command: &str) -> Self {
        let mut r = Self::default();
        r.field("command", command);
        r
    }

    pub fn field(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.blocks.push(Block::Field(key.to_string(), value.to_string()));
        self
    }

    pub fn real(&mut self, key: &str, value: f64) -> &mut Self {
        self.field(key, real(value))
    }

    pub fn table(&mut self, name: &str, header: &[&str], rows: Vec<Vec<String>>) -> &mut Self {
        self.blocks.push(Block::Table {
            name: name.to_string(),
            header: header.iter().map(|h| h.to_string()).collect(),
            rows,
        });
        self
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let mut after_table = false;
        for block in &self.blocks {
            match block {
                Block::Field(k, v) => {
                    if after_table {
                        out.push('\n');
                        after_table = false;
                    }
                    let _ = writeln!(out, "{k} = {v}");
                }
                Block::Table { name, header, rows } => {
                    let _ = writeln!(out, "\n[table {name}]");
                    let _ = writeln!(out, "{}", header.join(","));
                    for row in rows {
                        let cells: Vec<String> = row.iter().map(|c| c.replace(',', ";")).collect();
                        let _ = writeln!(out, "{}", cells.join(","));
                    }
                    after_table = true;
                }
            }
        }
        out
    }
}

/// Parsed view of a rendered report, for tests and downstream scripts.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ParsedReport {
    pub fields: Vec<(String, String)>,
    pub tables: Vec<(String, Vec<String>, Vec<Vec<String>>)>,
}

impl ParsedReport {
    pub fn parse(text: &str) -> Result<Self, String> {
        let mut parsed = Self::default();
        let mut lines = text.lines().enumerate().peekable();
        while let Some((i, line)) = lines.next() {
            if line.is_empty() {
                continue;
            }
            if let Some(name) = line.strip_prefix("[table ").and_then(|s| s.strip_suffix(']')) {
                let (_, header) = lines
                    .next()
                    .ok_or_else(|| format!("line {}: table without header", i + 1))?;
                let header: Vec<String> = header.split(',').map(String::from).collect();
                let mut rows = Vec::new();
                while let Some((j, row)) = lines.next_if(|(_, l)| !l.is_empty()) {
                    let cells: Vec<String> = row.split(',').map(String::from).collect();
                    if cells.len() != header.len() {
                        return Err(format!(
                            "line {}: expected {} cells, got {}",
                            j + 1,
                            header.len(),
                            cells.len()
                        ));
                    }
                    rows.push(cells);
                }
                parsed.tables.push((name.to_string(), header, rows));
            } else if let Some((k, v)) = line.split_once(" = ") {
                parsed.fields.push((k.to_string(), v.to_string()));
            } else {
                return Err(format!("line {}: unrecognised `{line}`", i + 1));
            }
        }
        Ok(parsed)
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.fields.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    /// Rows of the named table.
    pub fn table(&self, name: &str) -> Option<(&[String], &[Vec<String>])> {
        self.tables
            .iter()
            .find(|(n, _, _)| n == name)
            .map(|(_, h, r)| (h.as_slice(), r.as_slice()))
    }

    /// One column of the named table.
    pub fn column(&self, table: &str, column: &str) -> Option<Vec<&str>> {
        let (header, rows) = self.table(table)?;
        let idx = header.iter().position(|h| h == column)?;
        Some(rows.iter().map(|r| r[idx].as_str()).collect())
    }
}
