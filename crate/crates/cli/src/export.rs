//! CSV and JSON output, plus reading sweep data back for fitting.

use std::fs::File;
use std::io::{self, Write};
use std::path::Path;

use serde::Serialize;

use crate::error::{CliError, CliResult};
use crate::sweep::SweepRow;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Header plus one `delta,p_mean,p_std,p_exact` line per row.
pub fn write_sweep_csv<W: Write>(rows: &[SweepRow], out: W) -> CliResult<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row).map_err(csv_err)?;
    }
    w.flush().map_err(|e| CliError::io("<output>", e))
}

/// Generic CSV writer for any list of flat records.
pub fn write_records_csv<W: Write, T: Serialize>(records: &[T], out: W) -> CliResult<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in records {
        w.serialize(r).map_err(csv_err)?;
    }
    w.flush().map_err(|e| CliError::io("<output>", e))
}

pub fn write_json<W: Write, T: Serialize + ?Sized>(value: &T, mut out: W) -> CliResult<()> {
    serde_json::to_writer_pretty(&mut out, value).map_err(|e| CliError::Usage(e.to_string()))?;
    writeln!(out).map_err(|e| CliError::io("<output>", e))
}

pub fn read_sweep_csv(path: &Path) -> CliResult<Vec<SweepRow>> {
    let mut r = csv::Reader::from_path(path).map_err(|e| match e.into_kind() {
        csv::ErrorKind::Io(io) => CliError::io(path, io),
        other => CliError::input(path, format!("{other:?}")),
    })?;
    r.deserialize()
        .collect::<Result<Vec<SweepRow>, _>>()
        .map_err(|e| CliError::input(path, e))
}

/// Reads rows from a CSV file or from the `rows` field of a JSON report.
pub fn read_sweep_rows(path: &Path) -> CliResult<Vec<SweepRow>> {
    if path.extension().is_some_and(|e| e == "json") {
        #[derive(serde::Deserialize)]
        struct Doc {
            rows: Vec<SweepRow>,
        }
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let doc: Doc = serde_json::from_str(&text).map_err(|e| CliError::input(path, e))?;
        return Ok(doc.rows);
    }
    read_sweep_csv(path)
}

/// Runs `f` against the file at `path`, or stdout when no path is given.
pub fn with_output<F>(path: Option<&Path>, f: F) -> CliResult<()>
where
    F: FnOnce(&mut dyn Write) -> CliResult<()>,
{
    match path {
        Some(p) => {
            let file = File::create(p).map_err(|e| CliError::io(p, e))?;
            let mut buf = io::BufWriter::new(file);
            f(&mut buf)?;
            buf.flush().map_err(|e| CliError::io(p, e))
        }
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            f(&mut lock)
        }
    }
}

fn csv_err(e: csv::Error) -> CliError {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => CliError::io("<output>", io),
        other => CliError::Usage(format!("{other:?}")),
    }
}
