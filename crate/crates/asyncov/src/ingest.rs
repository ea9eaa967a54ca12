//! Two-column tick CSV files: `time,logprice`, header optional.

use std::fs::File;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use asyncov_core::TickSeries;

use crate::error::{AppError, AppResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum HeaderMode {
    /// Skip the first row if its time field is not a number.
    #[default]
    Auto,
    Present,
    Absent,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IngestOptions {
    pub delimiter: u8,
    pub header: HeaderMode,
    /// Zero-based column holding the timestamp.
    pub time_col: usize,
    /// Zero-based column holding the log-price.
    pub value_col: usize,
    /// Keep the last row of each run of equal timestamps instead of failing.
    pub dedup: bool,
}

impl Default for IngestOptions {
    fn default() -> Self {
        Self { delimiter: b',', header: HeaderMode::Auto, time_col: 0, value_col: 1, dedup: false }
    }
}

pub fn ingest_ticks(path: impl AsRef<Path>, opts: &IngestOptions) -> AppResult<TickSeries> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| AppError::io(path, e))?;
    read_ticks(file, opts, path)
}

pub fn read_ticks<R: Read>(reader: R, opts: &IngestOptions, source: &Path) -> AppResult<TickSeries> {
    let mut rdr = csv::ReaderBuilder::new()
        .delimiter(opts.delimiter)
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(reader);

    let path = PathBuf::from(source);
    let parse_err = |line: u64, msg: String| AppError::Parse { path: path.clone(), line, msg };

    let mut times: Vec<f64> = Vec::new();
    let mut values: Vec<f64> = Vec::new();
    let mut first = true;
    for record in rdr.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            parse_err(line, e.to_string())
        })?;
        let line = record.position().map_or(0, |p| p.line());
        if record.iter().all(str::is_empty) {
            continue;
        }
        let field = |col: usize, name: &str| -> AppResult<&str> {
            record
                .get(col)
                .ok_or_else(|| parse_err(line, format!("missing {name} column {col}")))
        };
        let time_field = field(opts.time_col, "time")?;
        if first {
            first = false;
            let skip = match opts.header {
                HeaderMode::Present => true,
                HeaderMode::Absent => false,
                HeaderMode::Auto => time_field.parse::<f64>().is_err(),
            };
            if skip {
                continue;
            }
        }
        let number = |s: &str, name: &str| -> AppResult<f64> {
            let v: f64 = s.parse().map_err(|_| parse_err(line, format!("invalid {name} {s:?}")))?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(parse_err(line, format!("non-finite {name} {s:?}")))
            }
        };
        let t = number(time_field, "time")?;
        let v = number(field(opts.value_col, "value")?, "value")?;
        if let Some(&previous) = times.last() {
            if t == previous && opts.dedup {
                *values.last_mut().expect("parallel vectors") = v;
                continue;
            }
            if t <= previous {
                return Err(AppError::NonMonotoneLine { path, line, time: t, previous });
            }
        }
        times.push(t);
        values.push(v);
    }
    TickSeries::new(times, values).map_err(|source| AppError::Series { path, source })
}

/// Writes `time,logprice` with a header row. Floats use the shortest
/// representation that parses back to the same value.
pub fn write_ticks<W: Write>(writer: W, series: &TickSeries) -> AppResult<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["time", "logprice"])?;
    for (t, v) in series.times().iter().zip(series.values()) {
        w.write_record([t.to_string(), v.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

pub fn save_ticks(path: impl AsRef<Path>, series: &TickSeries) -> AppResult<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| AppError::io(path, e))?;
    write_ticks(std::io::BufWriter::new(file), series)
}
