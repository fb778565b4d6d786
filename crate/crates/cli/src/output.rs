use std::io::Write;
use std::path::Path;

use cesaro_core::config::OutputFormat;
use serde::Serialize;

use crate::Failure;

/// Renders flat rows as CSV (header row included).
pub fn csv_table<T: Serialize>(rows: &[T]) -> Result<Vec<u8>, Failure> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row).map_err(|e| Failure::Input(e.to_string()))?;
    }
    w.into_inner().map_err(|e| Failure::Input(e.to_string()))
}

pub fn json_document<T: Serialize + ?Sized>(doc: &T) -> Result<Vec<u8>, Failure> {
    let mut out = serde_json::to_vec_pretty(doc).map_err(|e| Failure::Input(e.to_string()))?;
    out.push(b'\n');
    Ok(out)
}

/// CSV from `rows` or JSON from `doc`, depending on the format.
pub fn render<R: Serialize, D: Serialize + ?Sized>(
    format: OutputFormat,
    rows: &[R],
    doc: &D,
) -> Result<Vec<u8>, Failure> {
    match format {
        OutputFormat::Csv => csv_table(rows),
        OutputFormat::Json => json_document(doc),
    }
}

/// Writes the whole output at once, to a file or to stdout.
pub fn emit(bytes: &[u8], path: Option<&Path>) -> Result<(), Failure> {
    match path {
        Some(p) => std::fs::write(p, bytes)
            .map_err(|e| Failure::Input(format!("cannot write {}: {e}", p.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(bytes)
                .and_then(|_| out.flush())
                .map_err(|e| Failure::Input(e.to_string()))
        }
    }
}
