//! Reading and writing kernels as dense text, CSV and JSON.
//!
//! * dense text: a line holding `n`, then `n` lines of `n` whitespace-separated reals
//! * CSV: a header row, then `n` rows of `n` comma-separated reals
//! * JSON: `{"n": n, "kernel": [[...], ...]}`

use std::fmt::Write as _;
use std::path::Path;

use graphon_cheeger::{Error, StepGraphon};
use serde::{Deserialize, Serialize};

use crate::canonical::to_canonical_string;
use crate::error::{io_error, CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    DenseText,
    Csv,
    Json,
}

impl Format {
    /// Guesses the format from a file extension, defaulting to dense text.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some("csv") => Format::Csv,
            Some("json") => Format::Json,
            _ => Format::DenseText,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Format::DenseText => "dense-text",
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

#[derive(Serialize, Deserialize)]
struct KernelDoc {
    n: usize,
    kernel: Vec<Vec<f64>>,
}

/// Builds the graphon, attaching the file position of the entry behind any
/// entry-level validation error.
fn build(
    n: usize,
    values: Vec<f64>,
    positions: &[(usize, usize)],
    require_connected: bool,
) -> Result<StepGraphon> {
    StepGraphon::from_flat(n, values, require_connected).map_err(|e| {
        let at = match e {
            Error::ValueOutOfRange { row, col, .. } | Error::Asymmetric { row, col, .. } => {
                positions.get(row * n + col).copied()
            }
            _ => None,
        };
        match at {
            Some((line, column)) => CliError::Located {
                line,
                column,
                source: e,
            },
            None => CliError::Domain(e),
        }
    })
}

fn parse_real(token: &str, line: usize, column: usize) -> Result<f64> {
    token.trim().parse().map_err(|_| CliError::Parse {
        line,
        column,
        message: format!("`{token}` is not a number"),
    })
}

fn parse_dense_text(text: &str, require_connected: bool) -> Result<StepGraphon> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| !l.trim().is_empty());
    let (first, header) = lines.next().ok_or(CliError::Parse {
        line: 1,
        column: 1,
        message: "empty input".into(),
    })?;
    let n: usize = header.trim().parse().map_err(|_| CliError::Parse {
        line: first,
        column: 1,
        message: format!("expected the cell count, found `{}`", header.trim()),
    })?;
    if n == 0 {
        return Err(Error::EmptyKernel.into());
    }
    let mut values = Vec::with_capacity(n * n);
    let mut positions = Vec::with_capacity(n * n);
    let mut last = first;
    for row in 0..n {
        let (line, content) = lines.next().ok_or(CliError::Parse {
            line: last + 1,
            column: 1,
            message: format!("expected {n} rows, found {row}"),
        })?;
        last = line;
        let mut count = 0;
        let mut offset = 0;
        for token in content.split_whitespace() {
            let start = offset + content[offset..].find(token).unwrap_or(0);
            offset = start + token.len();
            let column = content[..start].chars().count() + 1;
            if count == n {
                return Err(CliError::Parse {
                    line,
                    column,
                    message: format!("row {row} has more than {n} entries"),
                });
            }
            values.push(parse_real(token, line, column)?);
            positions.push((line, column));
            count += 1;
        }
        if count != n {
            return Err(CliError::Parse {
                line,
                column: content.chars().count() + 1,
                message: format!("row {row} has {count} entries, expected {n}"),
            });
        }
    }
    if let Some((line, _)) = lines.next() {
        return Err(CliError::Parse {
            line,
            column: 1,
            message: "unexpected trailing content".into(),
        });
    }
    build(n, values, &positions, require_connected)
}

fn parse_csv(text: &str, require_connected: bool) -> Result<StepGraphon> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(text.as_bytes());
    let csv_error = |e: csv::Error| {
        let line = e.position().map_or(0, |p| p.line() as usize);
        CliError::Parse {
            line,
            column: 1,
            message: e.to_string(),
        }
    };
    let width = reader.headers().map_err(csv_error)?.len();
    let mut values = Vec::new();
    let mut positions = Vec::new();
    let mut rows = 0;
    for record in reader.records() {
        let record = record.map_err(csv_error)?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        if record.len() != width {
            return Err(CliError::Parse {
                line,
                column: 1,
                message: format!("row has {} fields, header has {width}", record.len()),
            });
        }
        for (col, field) in record.iter().enumerate() {
            values.push(parse_real(field, line, col + 1)?);
            positions.push((line, col + 1));
        }
        rows += 1;
    }
    if rows != width {
        return Err(CliError::Parse {
            line: 1,
            column: 1,
            message: format!("{rows} data rows for {width} columns; the kernel must be square"),
        });
    }
    build(width, values, &positions, require_connected)
}

fn parse_json(text: &str, require_connected: bool) -> Result<StepGraphon> {
    let doc: KernelDoc = serde_json::from_str(text).map_err(|e| CliError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    if doc.kernel.len() != doc.n {
        return Err(CliError::Parse {
            line: 1,
            column: 1,
            message: format!("n = {} but the kernel has {} rows", doc.n, doc.kernel.len()),
        });
    }
    Ok(StepGraphon::new(doc.kernel, require_connected)?)
}

pub fn parse_graphon(text: &str, format: Format, require_connected: bool) -> Result<StepGraphon> {
    match format {
        Format::DenseText => parse_dense_text(text, require_connected),
        Format::Csv => parse_csv(text, require_connected),
        Format::Json => parse_json(text, require_connected),
    }
}

pub fn load_graphon(path: &Path, format: Format, require_connected: bool) -> Result<StepGraphon> {
    let text = std::fs::read_to_string(path).map_err(io_error(path))?;
    parse_graphon(&text, format, require_connected)
}

/// Writes the kernel so that [`parse_graphon`] reads back identical values.
pub fn emit_graphon(w: &StepGraphon, format: Format) -> Result<String> {
    let n = w.n();
    match format {
        Format::DenseText => {
            let mut out = format!("{n}\n");
            for i in 0..n {
                let row: Vec<String> = w.row(i).iter().map(|v| format!("{v:?}")).collect();
                let _ = writeln!(out, "{}", row.join(" "));
            }
            Ok(out)
        }
        Format::Csv => {
            let mut writer = csv::Writer::from_writer(Vec::new());
            let header: Vec<String> = (0..n).map(|j| format!("c{j}")).collect();
            let rows = std::iter::once(header)
                .chain((0..n).map(|i| w.row(i).iter().map(|v| format!("{v:?}")).collect()));
            for row in rows {
                writer
                    .write_record(&row)
                    .map_err(|e| CliError::Report(e.to_string()))?;
            }
            let bytes = writer
                .into_inner()
                .map_err(|e| CliError::Report(e.to_string()))?;
            String::from_utf8(bytes).map_err(|e| CliError::Report(e.to_string()))
        }
        Format::Json => to_canonical_string(&KernelDoc {
            n,
            kernel: w.kernel_rows(),
        }),
    }
}
