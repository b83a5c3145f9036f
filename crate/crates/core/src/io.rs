//! CSV and JSON serialisation.
//!
//! Numbers are written with 17 significant digits so that every `f64`
//! survives a write/read cycle bit for bit.

use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::Path;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fourier::SpectrumSignal;
use crate::grid::{SampledSignal, UniformGrid};
use crate::lab::ErrorReport;
use crate::stft::StftMatrix;

pub const SIGNAL_HEADER: [&str; 3] = ["x", "re", "im"];
pub const SPECTRUM_HEADER: [&str; 3] = ["omega", "re", "im"];
pub const STFT_HEADER: [&str; 4] = ["t", "omega", "re", "im"];
pub const REPORT_HEADER: [&str; 10] = [
    "fixture",
    "window",
    "pathway",
    "p",
    "A",
    "lp_error",
    "sup_error",
    "operator_ratio",
    "tail_estimate",
    "runtime_ms",
];

/// Relative spacing deviation tolerated when reading a grid back.
const UNIFORMITY_TOL: f64 = 1e-9;

pub fn num(v: f64) -> String {
    format!("{v:.16e}")
}

fn csv_err(e: csv::Error) -> Error {
    match e.kind() {
        csv::ErrorKind::Io(_) => Error::Io(e.to_string()),
        _ => Error::Parse(e.to_string()),
    }
}

fn writer<W: Write>(w: W) -> csv::Writer<W> {
    csv::WriterBuilder::new().has_headers(false).from_writer(w)
}

fn write_columns<W: Write>(w: W, header: &[&str], grid: &UniformGrid, values: &[Complex64]) -> Result<()> {
    let mut out = writer(w);
    out.write_record(header).map_err(csv_err)?;
    for (k, v) in values.iter().enumerate() {
        out.write_record([num(grid.point(k)), num(v.re), num(v.im)]).map_err(csv_err)?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_signal<W: Write>(w: W, s: &SampledSignal) -> Result<()> {
    write_columns(w, &SIGNAL_HEADER, s.grid(), s.values())
}

pub fn write_spectrum<W: Write>(w: W, s: &SpectrumSignal) -> Result<()> {
    write_columns(w, &SPECTRUM_HEADER, s.grid(), s.values())
}

pub fn write_stft<W: Write>(w: W, s: &StftMatrix) -> Result<()> {
    let mut out = writer(w);
    out.write_record(STFT_HEADER).map_err(csv_err)?;
    let (tg, fg) = (s.time_grid(), s.freq_grid());
    for i in 0..tg.len() {
        let t = num(tg.point(i));
        for (j, v) in s.row(i).iter().enumerate() {
            out.write_record([t.as_str(), &num(fg.point(j)), &num(v.re), &num(v.im)]).map_err(csv_err)?;
        }
    }
    out.flush()?;
    Ok(())
}

pub fn write_report<W: Write>(w: W, r: &ErrorReport) -> Result<()> {
    let mut out = writer(w);
    out.write_record(REPORT_HEADER).map_err(csv_err)?;
    for rec in &r.records {
        out.write_record([
            rec.fixture.clone(),
            rec.window.clone(),
            rec.pathway.clone(),
            rec.p.to_string(),
            num(rec.a),
            num(rec.lp_error),
            num(rec.sup_error),
            num(rec.operator_ratio),
            num(rec.tail_estimate),
            num(rec.runtime_ms),
        ])
        .map_err(csv_err)?;
    }
    out.flush()?;
    Ok(())
}

fn parse_f64(field: &str, line: usize) -> Result<f64> {
    field
        .trim()
        .parse::<f64>()
        .map_err(|_| Error::Parse(format!("line {line}: `{field}` is not a number")))
}

/// Reads a three-column CSV (`coordinate,re,im`) with the given header and
/// checks that the coordinates are uniformly spaced.
fn read_columns<R: Read>(r: R, header: &[&str]) -> Result<(UniformGrid, Vec<Complex64>)> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).trim(csv::Trim::All).from_reader(r);
    let got: Vec<String> = rdr.headers().map_err(csv_err)?.iter().map(str::to_string).collect();
    if got != header {
        return Err(Error::Parse(format!("expected header `{}`, found `{}`", header.join(","), got.join(","))));
    }
    let mut xs = Vec::new();
    let mut values = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(csv_err)?;
        let line = i + 2;
        if rec.len() != 3 {
            return Err(Error::Parse(format!("line {line}: expected 3 fields, found {}", rec.len())));
        }
        xs.push(parse_f64(&rec[0], line)?);
        let v = Complex64::new(parse_f64(&rec[1], line)?, parse_f64(&rec[2], line)?);
        if !(v.re.is_finite() && v.im.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        values.push(v);
    }
    if xs.len() < 2 {
        return Err(Error::InvalidGrid(format!("need at least 2 samples, found {}", xs.len())));
    }
    let grid = UniformGrid::new(xs[0], xs[xs.len() - 1], xs.len())?;
    let dx = grid.spacing();
    for (k, x) in xs.iter().enumerate() {
        if (x - grid.point(k)).abs() > UNIFORMITY_TOL * dx.max(grid.start().abs().max(grid.end().abs())) {
            return Err(Error::InvalidGrid(format!("coordinate {x} at row {k} breaks uniform spacing")));
        }
    }
    Ok((grid, values))
}

pub fn read_signal<R: Read>(r: R) -> Result<SampledSignal> {
    let (grid, values) = read_columns(r, &SIGNAL_HEADER)?;
    SampledSignal::new(grid, values)
}

pub fn read_spectrum<R: Read>(r: R) -> Result<SpectrumSignal> {
    let (grid, values) = read_columns(r, &SPECTRUM_HEADER)?;
    SpectrumSignal::new(grid, values)
}

pub fn read_signal_file(path: &Path) -> Result<SampledSignal> {
    let f = File::open(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    read_signal(f)
}

/// Creates `path` (and its parent directories) for buffered writing.
pub fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent).map_err(|e| Error::Io(format!("{}: {e}", parent.display())))?;
        }
    }
    let f = File::create(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    Ok(BufWriter::new(f))
}

/// Pretty-printed JSON followed by a newline.
pub fn write_json<W: Write, T: Serialize>(mut w: W, value: &T) -> Result<()> {
    serde_json::to_writer_pretty(&mut w, value).map_err(|e| Error::Io(e.to_string()))?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}
