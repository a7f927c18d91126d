//! Sweep tables as CSV with a fixed header and 17 significant digits.

use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::num::Real;

use super::{SweepResult, SweepRow};

pub const CSV_HEADER: [&str; 10] = [
    "delta", "rho11", "rho22", "re_rho12", "rho_bb", "rho_cc", "rho_dd", "i_u", "i_v", "i_p0",
];

fn csv_error(e: csv::Error) -> Error {
    let line = e.position().map_or(0, |p| p.line());
    Error::CsvParse { line, reason: e.to_string() }
}

pub fn to_writer<T: Real, W: Write>(result: &SweepResult<T>, w: W) -> Result<()> {
    let mut wr = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(w);
    let io = |e: csv::Error| match e.into_kind() {
        csv::ErrorKind::Io(source) => Error::Io { path: "<stream>".into(), source },
        other => Error::CsvParse { line: 0, reason: format!("{other:?}") },
    };
    wr.write_record(CSV_HEADER).map_err(io)?;
    for row in &result.rows {
        wr.write_record(row.values().iter().map(|v| format!("{v:.16e}"))).map_err(io)?;
    }
    wr.flush().map_err(|source| Error::Io { path: "<stream>".into(), source })
}

pub fn write_csv<T: Real>(result: &SweepResult<T>, path: &Path) -> Result<()> {
    let file = File::create(path).map_err(|source| Error::Io { path: path.into(), source })?;
    to_writer(result, file).map_err(|e| match e {
        Error::Io { source, .. } => Error::Io { path: path.into(), source },
        other => other,
    })
}

pub fn from_reader<T: Real, R: Read>(r: R) -> Result<SweepResult<T>> {
    let mut rd = csv::ReaderBuilder::new().has_headers(true).from_reader(r);
    let found = rd.headers().map_err(csv_error)?.clone();
    if found.iter().ne(CSV_HEADER.iter().copied()) {
        return Err(Error::HeaderMismatch {
            expected: CSV_HEADER.join(","),
            found: found.iter().collect::<Vec<_>>().join(","),
        });
    }
    let mut rows: Vec<SweepRow<T>> = Vec::new();
    for rec in rd.records() {
        let rec = rec.map_err(csv_error)?;
        let line = rec.position().map_or(0, |p| p.line());
        let mut vals = [T::zero(); 10];
        for (slot, field) in vals.iter_mut().zip(rec.iter()) {
            *slot = field.trim().parse().map_err(|_| Error::CsvParse {
                line,
                reason: format!("invalid number `{field}`"),
            })?;
        }
        let row = SweepRow::from_values(vals);
        if let Some(prev) = rows.last() {
            if !(row.delta > prev.delta) {
                return Err(Error::CsvParse {
                    line,
                    reason: format!("delta {} does not increase", row.delta),
                });
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::EmptyCsv);
    }
    Ok(SweepResult { rows })
}

pub fn read_csv<T: Real>(path: &Path) -> Result<SweepResult<T>> {
    let file = File::open(path).map_err(|source| Error::Io { path: path.into(), source })?;
    from_reader(file)
}
