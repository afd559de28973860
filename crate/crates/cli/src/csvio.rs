//! CSV reading and writing. Floats are written with 17 significant digits
//! so every value round-trips exactly.

use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use geofreq::geomalg::VecN;

use crate::error::{CliError, CliResult};

/// Relative tolerance on the spacing of input time stamps.
const SPACING_TOL: f64 = 1e-6;

pub fn signal_header(dim: usize) -> Vec<String> {
    let mut h = vec!["t".to_string()];
    match dim {
        1 => h.push("v_dc".into()),
        3 => h.extend(["v_alpha", "v_beta", "v_gamma"].map(String::from)),
        n => h.extend((1..=n).map(|k| format!("v_{k}"))),
    }
    h
}

pub fn fmt_float(x: f64) -> String {
    // Adding +0.0 folds -0.0 into 0.0.
    format!("{:.16e}", x + 0.0)
}

pub struct Sink {
    writer: csv::Writer<Box<dyn Write>>,
    path: PathBuf,
}

impl Sink {
    /// Writes to `path`, or stdout when `None`.
    pub fn open(path: Option<&Path>) -> CliResult<Self> {
        let (inner, path): (Box<dyn Write>, PathBuf) = match path {
            Some(p) => {
                let f = File::create(p).map_err(|e| CliError::io(p, e))?;
                (Box::new(BufWriter::new(f)), p.to_path_buf())
            }
            None => (
                Box::new(BufWriter::new(io::stdout().lock())),
                "<stdout>".into(),
            ),
        };
        let writer = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(inner);
        Ok(Self { writer, path })
    }

    pub fn header<S: AsRef<str>>(&mut self, cols: &[S]) -> CliResult<()> {
        self.writer
            .write_record(cols.iter().map(|c| c.as_ref()))
            .map_err(Into::into)
    }

    pub fn floats(&mut self, row: &[f64]) -> CliResult<()> {
        self.writer
            .write_record(row.iter().map(|&x| fmt_float(x)))
            .map_err(Into::into)
    }

    pub fn fields<S: AsRef<[u8]>>(&mut self, row: impl IntoIterator<Item = S>) -> CliResult<()> {
        self.writer.write_record(row).map_err(Into::into)
    }

    pub fn finish(mut self) -> CliResult<()> {
        self.writer.flush().map_err(|e| CliError::io(&self.path, e))
    }
}

/// A uniformly sampled signal read from CSV.
#[derive(Debug, Clone)]
pub struct SignalTable {
    pub times: Vec<f64>,
    pub values: Vec<VecN>,
}

impl SignalTable {
    pub fn dt(&self) -> f64 {
        self.times[1] - self.times[0]
    }
}

/// Reads `t,<value columns...>`. Every row must have the header's width and
/// end in a newline, and time stamps must be evenly spaced.
pub fn read_signal(path: &Path) -> CliResult<SignalTable> {
    let bytes = fs::read(path).map_err(|e| CliError::io(path, e))?;
    let parse_err = |line: u64, reason: String| CliError::Parse {
        path: path.to_path_buf(),
        line,
        reason,
    };
    // A cut-off file can end in a row that still parses; require the newline.
    if !bytes.is_empty() && !bytes.ends_with(b"\n") {
        let line = bytes.iter().filter(|&&b| b == b'\n').count() as u64 + 1;
        return Err(parse_err(
            line,
            "last row is not newline-terminated (truncated file?)".into(),
        ));
    }
    let mut reader = csv::ReaderBuilder::new()
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(bytes.as_slice());

    let header = reader
        .headers()
        .map_err(|e| parse_err(1, e.to_string()))?
        .clone();
    if header.len() < 2 || &header[0] != "t" {
        return Err(parse_err(
            1,
            "header must be 't' followed by at least one value column".into(),
        ));
    }
    let width = header.len();

    let mut times = Vec::new();
    let mut values = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            parse_err(line, e.to_string())
        })?;
        let line = record.position().map_or(0, |p| p.line());
        if record.len() != width {
            return Err(parse_err(
                line,
                format!("expected {width} fields, found {}", record.len()),
            ));
        }
        let mut row = Vec::with_capacity(width);
        for (k, field) in record.iter().enumerate() {
            let x: f64 = field.parse().map_err(|_| {
                parse_err(
                    line,
                    format!("column '{}': invalid number '{field}'", &header[k]),
                )
            })?;
            if !x.is_finite() {
                return Err(parse_err(
                    line,
                    format!("column '{}': non-finite value", &header[k]),
                ));
            }
            row.push(x);
        }
        times.push(row[0]);
        values.push(VecN::new(row[1..].to_vec())?);
    }

    if times.len() < 3 {
        return Err(parse_err(
            times.len() as u64 + 1,
            format!("need at least 3 data rows, found {}", times.len()),
        ));
    }
    let dt = times[1] - times[0];
    if !(dt > 0.0) {
        return Err(parse_err(3, "time stamps must increase".into()));
    }
    for (k, &t) in times.iter().enumerate() {
        let expected = times[0] + k as f64 * dt;
        if (t - expected).abs() > SPACING_TOL * dt {
            return Err(parse_err(
                k as u64 + 2,
                format!("non-uniform time step at t = {t}"),
            ));
        }
    }
    Ok(SignalTable { times, values })
}
