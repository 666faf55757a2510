//! CSV and JSON emitters (and matching readers) for series, tables and
//! thresholds.
//!
//! Floats are written in their shortest round-trip form, so every file
//! re-parses to bit-identical values. CSV uses LF line endings and a header
//! row.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::str::FromStr;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::experiments::{PowerLawFit, ScalingResult, SweepRow, SweepTable, ThresholdCriterion, ThresholdResult};
use crate::potentials::PotentialField;
use crate::state::PositionDistribution;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl Format {
    pub fn extension(&self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown format `{other}` (expected csv or json)")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesPoint {
    pub t: usize,
    pub success_probability: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistributionPoint {
    pub x: usize,
    pub y: usize,
    pub probability: f64,
}

/// One flat CSV record per threshold.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThresholdRecord {
    pub grid_side: usize,
    pub criterion: ThresholdCriterion,
    pub epsilon: f64,
    pub sigma_star: f64,
    pub p_max_at_star: f64,
    pub last_failing_sigma: Option<f64>,
    pub sigma_below: f64,
    pub p_max_below: f64,
    pub fails_below: bool,
    pub non_monotone: bool,
    pub p_akr: f64,
    pub p_uniform: f64,
}

impl From<&ThresholdResult> for ThresholdRecord {
    fn from(t: &ThresholdResult) -> Self {
        ThresholdRecord {
            grid_side: t.grid_side,
            criterion: t.criterion,
            epsilon: t.epsilon,
            sigma_star: t.sigma_star,
            p_max_at_star: t.p_max_at_star,
            last_failing_sigma: t.last_failing_sigma,
            sigma_below: t.certificate.sigma_below,
            p_max_below: t.certificate.p_max_below,
            fails_below: t.certificate.fails_below,
            non_monotone: t.non_monotone,
            p_akr: t.p_akr,
            p_uniform: t.p_uniform,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitRecord {
    pub criterion: ThresholdCriterion,
    pub epsilon: f64,
    pub points: usize,
    pub exponent: Option<f64>,
    pub prefactor: Option<f64>,
    pub residual: Option<f64>,
}

impl From<&ScalingResult> for FitRecord {
    fn from(s: &ScalingResult) -> Self {
        let fit: Option<PowerLawFit> = s.fit;
        FitRecord {
            criterion: s.criterion,
            epsilon: s.epsilon,
            points: s.thresholds.len(),
            exponent: fit.map(|f| f.exponent),
            prefactor: fit.map(|f| f.prefactor),
            residual: fit.map(|f| f.residual),
        }
    }
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path).map_err(|e| Error::io(path, e))?))
}

fn csv_error(path: &Path, e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::io(path, io),
        other => Error::Parse { path: path.to_path_buf(), message: format!("{other:?}") },
    }
}

/// Serializes records to CSV text.
pub fn to_csv<T: Serialize>(records: &[T]) -> std::result::Result<String, csv::Error> {
    let mut wtr = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    for r in records {
        wtr.serialize(r)?;
    }
    let bytes = wtr.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

pub fn from_csv<T: DeserializeOwned>(text: &str) -> std::result::Result<Vec<T>, csv::Error> {
    csv::Reader::from_reader(text.as_bytes()).deserialize().collect()
}

pub fn write_csv<T: Serialize>(path: &Path, records: &[T]) -> Result<()> {
    let text = to_csv(records).map_err(|e| csv_error(path, e))?;
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

pub fn read_csv<T: DeserializeOwned>(path: &Path) -> Result<Vec<T>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    from_csv(&text).map_err(|e| csv_error(path, e))
}

pub fn write_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> Result<()> {
    let mut w = create(path)?;
    serde_json::to_writer_pretty(&mut w, value)
        .map_err(|e| Error::Parse { path: path.to_path_buf(), message: e.to_string() })?;
    w.write_all(b"\n").and_then(|_| w.flush()).map_err(|e| Error::io(path, e))
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse { path: path.to_path_buf(), message: e.to_string() })
}

pub fn series_points(series: &[f64]) -> Vec<SeriesPoint> {
    series.iter().enumerate().map(|(t, &p)| SeriesPoint { t, success_probability: p }).collect()
}

pub fn distribution_points(d: &PositionDistribution) -> Vec<DistributionPoint> {
    let g = d.geometry();
    d.values()
        .iter()
        .enumerate()
        .map(|(i, &p)| {
            let v = g.vertex_at(i);
            DistributionPoint { x: v.x, y: v.y, probability: p }
        })
        .collect()
}

/// Writes `t, success_probability` for `t = 0..series.len()`.
pub fn emit_series(series: &[f64], format: Format, path: &Path) -> Result<()> {
    let points = series_points(series);
    match format {
        Format::Csv => write_csv(path, &points),
        Format::Json => write_json(path, &points),
    }
}

pub fn read_series(format: Format, path: &Path) -> Result<Vec<f64>> {
    let points: Vec<SeriesPoint> = match format {
        Format::Csv => read_csv(path)?,
        Format::Json => read_json(path)?,
    };
    Ok(points.into_iter().map(|p| p.success_probability).collect())
}

pub fn emit_distribution(d: &PositionDistribution, format: Format, path: &Path) -> Result<()> {
    let points = distribution_points(d);
    match format {
        Format::Csv => write_csv(path, &points),
        Format::Json => write_json(path, &points),
    }
}

/// CSV holds the rows only; JSON carries metadata and failures as well.
pub fn emit_table(table: &SweepTable, format: Format, path: &Path) -> Result<()> {
    match format {
        Format::Csv => write_csv(path, &table.rows),
        Format::Json => write_json(path, table),
    }
}

pub fn read_table_rows(format: Format, path: &Path) -> Result<Vec<SweepRow>> {
    match format {
        Format::Csv => read_csv(path),
        Format::Json => Ok(read_json::<SweepTable>(path)?.rows),
    }
}

pub fn emit_thresholds(results: &[ScalingResult], format: Format, dir: &Path) -> Result<()> {
    let records: Vec<ThresholdRecord> =
        results.iter().flat_map(|s| s.thresholds.iter().map(ThresholdRecord::from)).collect();
    let fits: Vec<FitRecord> = results.iter().map(FitRecord::from).collect();
    match format {
        Format::Csv => {
            write_csv(&dir.join("thresholds.csv"), &records)?;
            write_csv(&dir.join("fits.csv"), &fits)
        }
        Format::Json => write_json(&dir.join("thresholds.json"), results),
    }
}

/// Potential grid in the plain-text format read by [`PotentialField::load`].
pub fn emit_field(field: &PotentialField, path: &Path) -> Result<()> {
    field.save(path)
}
