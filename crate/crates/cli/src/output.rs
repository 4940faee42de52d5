//! CSV, JSON and manifest writers.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use serde::Serialize;

use crate::error::{CliError, Result};

pub const SCHEMA_VERSION: u32 = 1;

/// Encoding of the main per-replicate table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

/// 17 significant digits, enough to round-trip any `f64`.
pub fn fmt_f64(x: f64) -> String {
    if x == 0.0 {
        // no "-0" in tables
        "0.0000000000000000e0".to_string()
    } else if x.is_finite() {
        format!("{x:.16e}")
    } else {
        x.to_string()
    }
}

pub fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_f64).unwrap_or_default()
}

/// A header plus rows of already formatted fields.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Self {
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn write_csv<W: Write>(&self, w: W) -> csv::Result<()> {
        let mut writer = csv::WriterBuilder::new()
            .terminator(csv::Terminator::CRLF)
            .from_writer(w);
        writer.write_record(&self.header)?;
        for row in &self.rows {
            writer.write_record(row)?;
        }
        writer.flush()?;
        Ok(())
    }
}

fn csv_to_io(e: csv::Error) -> std::io::Error {
    match e.into_kind() {
        csv::ErrorKind::Io(e) => e,
        other => std::io::Error::other(format!("{other:?}")),
    }
}

/// `<prefix>.<suffix>`, keeping any dots already in the prefix.
pub fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(".");
    s.push(suffix);
    PathBuf::from(s)
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| CliError::io(path, e))
}

pub fn write_table_file(path: &Path, table: &Table) -> Result<()> {
    let mut f = create(path)?;
    table
        .write_csv(&mut f)
        .map_err(|e| CliError::io(path, csv_to_io(e)))?;
    f.flush().map_err(|e| CliError::io(path, e))
}

pub fn write_table(out: &mut dyn Write, table: &Table) -> Result<()> {
    table
        .write_csv(&mut *out)
        .map_err(|e| CliError::io("<stdout>", csv_to_io(e)))
}

/// The table as a JSON array of objects keyed by column name. Numeric
/// fields are emitted as numbers, empty fields as null.
pub fn table_to_json(table: &Table) -> serde_json::Value {
    let rows = table
        .rows
        .iter()
        .map(|row| {
            let obj = table
                .header
                .iter()
                .zip(row)
                .map(|(k, v)| (k.clone(), field_to_json(v)))
                .collect();
            serde_json::Value::Object(obj)
        })
        .collect();
    serde_json::Value::Array(rows)
}

fn field_to_json(field: &str) -> serde_json::Value {
    if field.is_empty() {
        return serde_json::Value::Null;
    }
    if let Ok(i) = field.parse::<u64>() {
        return i.into();
    }
    match field.parse::<f64>() {
        Ok(x) if x.is_finite() => x.into(),
        _ => field.into(),
    }
}

pub fn to_value<T: Serialize + ?Sized>(value: &T) -> Result<serde_json::Value> {
    serde_json::to_value(value).map_err(|e| CliError::Internal(e.to_string()))
}

pub fn write_json_file<T: Serialize + ?Sized>(path: &Path, value: &T) -> Result<()> {
    let mut f = create(path)?;
    serde_json::to_writer_pretty(&mut f, value)
        .map_err(|e| CliError::io(path, std::io::Error::other(e)))?;
    writeln!(f)
        .and_then(|_| f.flush())
        .map_err(|e| CliError::io(path, e))
}

pub fn write_json<T: Serialize + ?Sized>(out: &mut dyn Write, value: &T) -> Result<()> {
    let text =
        serde_json::to_string_pretty(value).map_err(|e| CliError::Internal(e.to_string()))?;
    writeln!(out, "{text}").map_err(|e| CliError::io("<stdout>", e))
}

/// Where a run's files go. Without `--out` the main table is written to
/// stdout and the manifest to stderr; side tables are then skipped.
pub struct Sink<'a> {
    pub prefix: Option<PathBuf>,
    pub format: Format,
    pub stdout: &'a mut dyn Write,
    pub stderr: &'a mut dyn Write,
    written: Vec<String>,
}

impl<'a> Sink<'a> {
    pub fn new(
        prefix: Option<PathBuf>,
        format: Format,
        stdout: &'a mut dyn Write,
        stderr: &'a mut dyn Write,
    ) -> Self {
        Self {
            prefix,
            format,
            stdout,
            stderr,
            written: Vec::new(),
        }
    }

    pub fn main_table(&mut self, table: &Table) -> Result<()> {
        match (&self.prefix, self.format) {
            (Some(prefix), Format::Csv) => {
                let path = with_suffix(prefix, "csv");
                write_table_file(&path, table)?;
                self.written.push(path.display().to_string());
            }
            (Some(prefix), Format::Json) => {
                let path = with_suffix(prefix, self.format.extension());
                write_json_file(&path, &table_to_json(table))?;
                self.written.push(path.display().to_string());
            }
            (None, Format::Csv) => write_table(self.stdout, table)?,
            (None, Format::Json) => write_json(self.stdout, &table_to_json(table))?,
        }
        Ok(())
    }

    /// A secondary CSV such as `<out>.levels.csv`; skipped without `--out`.
    pub fn side_table(&mut self, suffix: &str, table: &Table) -> Result<()> {
        if let Some(prefix) = &self.prefix {
            let path = with_suffix(prefix, &format!("{suffix}.csv"));
            write_table_file(&path, table)?;
            self.written.push(path.display().to_string());
        }
        Ok(())
    }

    pub fn written(&self) -> &[String] {
        &self.written
    }

    pub fn manifest(&mut self, manifest: &Manifest) -> Result<()> {
        match &self.prefix {
            Some(prefix) => write_json_file(&with_suffix(prefix, "manifest.json"), manifest),
            None => write_json(self.stderr, manifest),
        }
    }

    pub fn warn(&mut self, message: &str) {
        // A failed warning write is not worth aborting a finished run over.
        let _ = writeln!(self.stderr, "warning: {message}");
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Tool {
    pub name: &'static str,
    pub version: &'static str,
}

impl Default for Tool {
    fn default() -> Self {
        Self {
            name: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
        }
    }
}

/// Everything needed to reproduce a run and read its results.
#[derive(Debug, Clone, Serialize)]
pub struct Manifest {
    pub schema_version: u32,
    pub tool: Tool,
    pub command: String,
    pub argv: Vec<String>,
    pub params: serde_json::Value,
    pub wall_clock_seconds: f64,
    pub summary: serde_json::Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub regime: Option<serde_json::Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub comparison: Option<serde_json::Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub figure: Option<serde_json::Value>,
    pub outputs: Vec<String>,
}
