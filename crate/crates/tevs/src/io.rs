//! Dataset file formats.
//!
//! JSON carries any dimension:
//!
//! ```json
//! {"d": 1, "series": [{"label": "A", "samples": [{"t": 0.0, "v": [1.0]}]}]}
//! ```
//!
//! CSV is for one-dimensional data only: a `label,t,v` header, one sample per
//! row, series formed by consecutive rows sharing a label, rows in timestamp
//! order. Floats are written in shortest round-trip form, so storing and
//! re-loading reproduces every finite value bit for bit.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::{Dataset, Sample, TimeSeries};

/// Supported dataset file formats.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

impl Format {
    /// Picks a format from a file extension, defaulting to JSON.
    pub fn from_path(path: &Path) -> Format {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("csv") => Format::Csv,
            _ => Format::Json,
        }
    }
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(Error::parse("format", format!("unknown format `{other}`"))),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct DatasetFile {
    d: usize,
    series: Vec<SeriesEntry>,
}

#[derive(Serialize, Deserialize)]
struct SeriesEntry {
    #[serde(skip_serializing_if = "Option::is_none")]
    label: Option<String>,
    samples: Vec<SampleEntry>,
}

#[derive(Serialize, Deserialize)]
struct SampleEntry {
    t: f64,
    v: Vec<f64>,
}

/// Loads a dataset from a file. With `sanitize = Some(eps)` every exactly-zero
/// coordinate is replaced by `eps` before validation; otherwise a zero value
/// is an error.
pub fn load(path: impl AsRef<Path>, format: Format, sanitize: Option<f64>) -> Result<Dataset> {
    let file = File::open(path.as_ref())?;
    let mut reader = BufReader::new(file);
    match format {
        Format::Json => read_json(&mut reader, sanitize),
        Format::Csv => read_csv(&mut reader, sanitize),
    }
}

/// Stores a dataset to a file.
pub fn store(dataset: &Dataset, path: impl AsRef<Path>, format: Format) -> Result<()> {
    let file = File::create(path.as_ref())?;
    let mut writer = BufWriter::new(file);
    match format {
        Format::Json => write_json(&mut writer, dataset)?,
        Format::Csv => write_csv(&mut writer, dataset)?,
    }
    writer.flush()?;
    Ok(())
}

/// Reads the JSON dataset format. An empty (or whitespace-only) input yields
/// the empty one-dimensional dataset.
pub fn read_json(reader: &mut impl Read, sanitize: Option<f64>) -> Result<Dataset> {
    let mut text = String::new();
    reader.read_to_string(&mut text)?;
    if text.trim().is_empty() {
        return Dataset::with_dim(Vec::new(), None, 1);
    }
    let file: DatasetFile = serde_json::from_str(&text).map_err(|e| {
        Error::parse(format!("line {} column {}", e.line(), e.column()), e.to_string())
    })?;
    if file.d == 0 {
        return Err(Error::parse("field d", "dimension must be at least 1"));
    }

    let mut series = Vec::with_capacity(file.series.len());
    let mut labels = Vec::with_capacity(file.series.len());
    let mut any_label = false;
    for (index, entry) in file.series.into_iter().enumerate() {
        let mut samples = Vec::with_capacity(entry.samples.len());
        for sample in entry.samples {
            if sample.v.len() != file.d {
                return Err(Error::DimensionMismatch {
                    expected: file.d,
                    found: sample.v.len(),
                });
            }
            samples.push(Sample::new(sample.v, sample.t));
        }
        series.push(build_series(samples, sanitize)?);
        any_label |= entry.label.is_some();
        labels.push(entry.label.unwrap_or_else(|| index.to_string()));
    }
    Dataset::with_dim(series, any_label.then_some(labels), file.d)
}

/// Writes the JSON dataset format.
pub fn write_json(writer: &mut impl Write, dataset: &Dataset) -> Result<()> {
    let file = DatasetFile {
        d: dataset.dim(),
        series: dataset
            .series()
            .iter()
            .enumerate()
            .map(|(i, s)| SeriesEntry {
                label: dataset.labels().map(|l| l[i].clone()),
                samples: s
                    .samples()
                    .iter()
                    .map(|sample| SampleEntry {
                        t: sample.timestamp,
                        v: sample.value.clone(),
                    })
                    .collect(),
            })
            .collect(),
    };
    serde_json::to_writer(&mut *writer, &file)
        .map_err(|e| Error::parse("serialization", e.to_string()))?;
    writeln!(writer)?;
    Ok(())
}

/// Reads the CSV dataset format (`label,t,v` header, d = 1).
pub fn read_csv(reader: &mut impl Read, sanitize: Option<f64>) -> Result<Dataset> {
    let mut text = String::new();
    reader.read_to_string(&mut text)?;
    if text.trim().is_empty() {
        return Dataset::with_dim(Vec::new(), None, 1);
    }
    let mut csv_reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(text.as_bytes());
    {
        let headers = csv_reader
            .headers()
            .map_err(|e| Error::parse("header", e.to_string()))?;
        let expected = ["label", "t", "v"];
        if headers.len() != 3 || headers.iter().zip(expected).any(|(h, e)| h != e) {
            return Err(Error::parse("header", "expected header `label,t,v`"));
        }
    }

    let mut series: Vec<TimeSeries> = Vec::new();
    let mut labels: Vec<String> = Vec::new();
    let mut current_label: Option<String> = None;
    let mut current: Vec<Sample> = Vec::new();
    for (row, record) in csv_reader.records().enumerate() {
        let location = format!("row {}", row + 1);
        let record = record.map_err(|e| Error::parse(&location, e.to_string()))?;
        if record.len() != 3 {
            return Err(Error::parse(&location, "expected 3 fields"));
        }
        let label = record[0].to_string();
        let t: f64 = record[1]
            .parse()
            .map_err(|_| Error::parse(&location, format!("bad timestamp `{}`", &record[1])))?;
        let v: f64 = record[2]
            .parse()
            .map_err(|_| Error::parse(&location, format!("bad value `{}`", &record[2])))?;
        if current_label.as_deref() != Some(&label) {
            if let Some(done) = current_label.take() {
                series.push(build_series(std::mem::take(&mut current), sanitize)?);
                labels.push(done);
            }
            current_label = Some(label);
        }
        current.push(Sample::scalar(v, t));
    }
    if let Some(done) = current_label {
        series.push(build_series(current, sanitize)?);
        labels.push(done);
    }
    Dataset::with_dim(series, Some(labels), 1)
}

/// Writes the CSV dataset format; unlabeled datasets get index labels.
pub fn write_csv(writer: &mut impl Write, dataset: &Dataset) -> Result<()> {
    if dataset.dim() != 1 {
        return Err(Error::UnsupportedCsvDimension { dim: dataset.dim() });
    }
    let mut csv_writer = csv::Writer::from_writer(writer);
    csv_writer
        .write_record(["label", "t", "v"])
        .map_err(|e| Error::parse("header", e.to_string()))?;
    for (i, s) in dataset.series().iter().enumerate() {
        let label = dataset.label_or_index(i);
        for sample in s.samples() {
            csv_writer
                .write_record([
                    label.as_str(),
                    &sample.timestamp.to_string(),
                    &sample.value[0].to_string(),
                ])
                .map_err(|e| Error::parse("record", e.to_string()))?;
        }
    }
    csv_writer
        .flush()
        .map_err(|e| Error::parse("flush", e.to_string()))?;
    Ok(())
}

fn build_series(samples: Vec<Sample>, sanitize: Option<f64>) -> Result<TimeSeries> {
    match sanitize {
        Some(eps) => TimeSeries::sanitize(samples, eps),
        None => TimeSeries::validate(samples),
    }
}
