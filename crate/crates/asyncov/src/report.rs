//! CSV and JSON emission. JSON output carries the same flat rows as CSV.

use std::io::Write;
use std::str::FromStr;

use asyncov_core::lan::ConvergenceRow;
use asyncov_core::simulation::{EstimatorSummary, ReplicationRecord};
use asyncov_core::EstimateReport;
use serde::Serialize;

use crate::error::{AppError, AppResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = AppError;

    fn from_str(s: &str) -> AppResult<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(AppError::Usage(format!("unknown format {other:?} (expected csv or json)"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EstimateRow {
    pub estimator: &'static str,
    pub estimate: f64,
    pub n_sync: usize,
    pub tuning: Option<usize>,
    pub eta2_x: Option<f64>,
    pub eta2_y: Option<f64>,
}

impl From<&EstimateReport> for EstimateRow {
    fn from(r: &EstimateReport) -> Self {
        Self {
            estimator: r.estimator.name(),
            estimate: r.estimate,
            n_sync: r.n_sync,
            tuning: r.tuning,
            eta2_x: r.noise_variances_used.map(|v| v.0),
            eta2_y: r.noise_variances_used.map(|v| v.1),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReplicationRow {
    pub replication: usize,
    pub estimator: &'static str,
    pub estimate: f64,
    pub n_sync: usize,
    pub tuning: Option<usize>,
}

impl From<&ReplicationRecord> for ReplicationRow {
    fn from(r: &ReplicationRecord) -> Self {
        Self {
            replication: r.replication,
            estimator: r.estimator.name(),
            estimate: r.estimate,
            n_sync: r.n_sync,
            tuning: r.tuning,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SummaryRow {
    pub estimator: &'static str,
    pub mean: f64,
    pub bias: f64,
    pub variance: f64,
    pub rmse: f64,
    pub mean_tuning: Option<f64>,
    pub mean_nsync: f64,
}

impl From<&EstimatorSummary> for SummaryRow {
    fn from(s: &EstimatorSummary) -> Self {
        Self {
            estimator: s.estimator.name(),
            mean: s.mean,
            bias: s.bias,
            variance: s.variance,
            rmse: s.rmse,
            mean_tuning: s.mean_tuning,
            mean_nsync: s.mean_nsync,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LanEqualRow {
    #[serde(rename = "N")]
    pub n: usize,
    pub sum_gamma_sq: f64,
    pub target: f64,
    pub rel_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LanBracketRow {
    #[serde(rename = "N")]
    pub n: usize,
    pub lower_sum_gamma_sq: f64,
    pub lower_target: f64,
    pub lower_rel_error: f64,
    pub upper_sum_gamma_sq: f64,
    pub upper_target: f64,
    pub upper_rel_error: f64,
}

pub fn write_rows<W: Write, T: Serialize>(writer: W, rows: &[T], format: Format) -> AppResult<()> {
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(writer);
            for row in rows {
                w.serialize(row)?;
            }
            w.flush()?;
        }
        Format::Json => {
            let mut writer = writer;
            serde_json::to_writer_pretty(&mut writer, rows)?;
            writer.write_all(b"\n")?;
            writer.flush()?;
        }
    }
    Ok(())
}

pub fn write_estimates<W: Write>(writer: W, reports: &[EstimateReport], format: Format) -> AppResult<()> {
    let rows: Vec<EstimateRow> = reports.iter().map(Into::into).collect();
    write_rows(writer, &rows, format)
}

pub fn write_replications<W: Write>(writer: W, records: &[ReplicationRecord], format: Format) -> AppResult<()> {
    let rows: Vec<ReplicationRow> = records.iter().map(Into::into).collect();
    write_rows(writer, &rows, format)
}

pub fn write_summary<W: Write>(writer: W, summaries: &[EstimatorSummary], format: Format) -> AppResult<()> {
    let rows: Vec<SummaryRow> = summaries.iter().map(Into::into).collect();
    write_rows(writer, &rows, format)
}

/// Equal-noise tables get `N,sum_gamma_sq,target,rel_error`; bracket tables
/// get the same three columns once per bound.
pub fn write_lan_table<W: Write>(writer: W, rows: &[ConvergenceRow], format: Format) -> AppResult<()> {
    let mut equal = Vec::new();
    let mut bracket = Vec::new();
    for row in rows {
        match *row {
            ConvergenceRow::Equal { n, point } => equal.push(LanEqualRow {
                n,
                sum_gamma_sq: point.sum_gamma_sq,
                target: point.target,
                rel_error: point.rel_error,
            }),
            ConvergenceRow::Bracket { n, lower, upper } => bracket.push(LanBracketRow {
                n,
                lower_sum_gamma_sq: lower.sum_gamma_sq,
                lower_target: lower.target,
                lower_rel_error: lower.rel_error,
                upper_sum_gamma_sq: upper.sum_gamma_sq,
                upper_target: upper.target,
                upper_rel_error: upper.rel_error,
            }),
        }
    }
    if bracket.is_empty() {
        write_rows(writer, &equal, format)
    } else if equal.is_empty() {
        write_rows(writer, &bracket, format)
    } else {
        Err(AppError::Output("mixed equal and unequal noise rows".into()))
    }
}
