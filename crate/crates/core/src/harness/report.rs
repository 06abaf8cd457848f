//! Comparison reports and their CSV / JSON renderings.
//!
//! CSV layout, top to bottom:
//!
//! 1. `#` comment lines with run metadata.
//! 2. `target_size,strategy,label,metric,value`, with per-label rows
//!    (`accuracy`, `iou`, `bf`) followed by `label=ALL` aggregate rows
//!    (`global_accuracy`, `mean_accuracy`, `mean_iou`, `weighted_iou`,
//!    `mean_bf`) for every size and strategy.
//! 3. A blank line, `baseline=NN-NN`, then
//!    `target_size,strategy,label,metric,percent_increase` with the same row
//!    keys plus `label=AVG` rows averaging the per-label increases of each
//!    per-label metric.
//!
//! Numbers carry 6 decimals (ties to even); undefined values print as `NA`.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::config::OutputFormat;
use super::experiment::Strategy;
use crate::error::{Error, Result};
use crate::metrics::{mean_defined, percentage_increase, MetricsReport, Score};
use crate::raster::Size;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunMetadata {
    pub seed: u64,
    pub config_hash: String,
    pub version: String,
    pub source_size: Size,
    pub bf_tolerance: String,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub target_size: Size,
    pub strategy: String,
    pub samples: usize,
    pub metrics: MetricsReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IncreaseRow {
    pub target_size: Size,
    pub strategy: String,
    /// A label value, `ALL` or `AVG`.
    pub label: String,
    pub metric: String,
    pub percent: Score,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub schema_version: u32,
    pub metadata: RunMetadata,
    pub baseline: String,
    pub results: Vec<ResultRow>,
    pub increases: Vec<IncreaseRow>,
}

pub const CLASS_METRICS: [&str; 3] = ["accuracy", "iou", "bf"];
pub const AGGREGATE_METRICS: [&str; 5] = [
    "global_accuracy",
    "mean_accuracy",
    "mean_iou",
    "weighted_iou",
    "mean_bf",
];

/// Scalar rows of one metrics report as `(label, metric, value)`.
pub fn score_cells(m: &MetricsReport) -> Vec<(String, &'static str, Score)> {
    let mut cells = Vec::new();
    for c in &m.classes {
        for (metric, value) in CLASS_METRICS.iter().zip([c.accuracy, c.iou, c.bf]) {
            cells.push((c.label.to_string(), *metric, value));
        }
    }
    let aggregates = [
        Some(m.global_accuracy),
        m.mean_accuracy,
        m.mean_iou,
        m.weighted_iou,
        m.mean_bf,
    ];
    for (metric, value) in AGGREGATE_METRICS.iter().zip(aggregates) {
        cells.push(("ALL".to_owned(), *metric, value));
    }
    cells
}

fn increase(a: Score, b: Score) -> Score {
    percentage_increase(a?, b?)
}

impl ComparisonReport {
    pub const NOTE: &'static str =
        "mask-resampling fidelity: ground truth reduced to the source size with \
         nearest neighbour, restored with each strategy, scored against the original; \
         no network training is involved and the image resampler does not affect these scores";

    /// Assembles a report and derives the percentage-increase rows against
    /// the baseline strategy at each size.
    pub fn build(metadata: RunMetadata, results: Vec<ResultRow>) -> Self {
        let mut increases = Vec::new();
        for row in &results {
            let Some(base) = results
                .iter()
                .find(|r| r.target_size == row.target_size && r.strategy == Strategy::BASELINE)
            else {
                continue;
            };
            let ours = score_cells(&row.metrics);
            let theirs = score_cells(&base.metrics);
            let mut per_metric: Vec<(&str, Vec<Score>)> =
                CLASS_METRICS.iter().map(|m| (*m, Vec::new())).collect();
            for ((label, metric, a), (_, _, b)) in ours.into_iter().zip(theirs) {
                let percent = increase(a, b);
                if label != "ALL" {
                    if let Some((_, v)) = per_metric.iter_mut().find(|(m, _)| *m == metric) {
                        v.push(percent);
                    }
                }
                increases.push(IncreaseRow {
                    target_size: row.target_size,
                    strategy: row.strategy.clone(),
                    label,
                    metric: metric.to_owned(),
                    percent,
                });
            }
            for (metric, values) in per_metric {
                increases.push(IncreaseRow {
                    target_size: row.target_size,
                    strategy: row.strategy.clone(),
                    label: "AVG".to_owned(),
                    metric: metric.to_owned(),
                    percent: mean_defined(&values),
                });
            }
        }
        ComparisonReport {
            schema_version: SCHEMA_VERSION,
            metadata,
            baseline: Strategy::BASELINE.to_owned(),
            results,
            increases,
        }
    }

    pub fn result(&self, size: Size, strategy: &str) -> Option<&ResultRow> {
        self.results
            .iter()
            .find(|r| r.target_size == size && r.strategy == strategy)
    }

    pub fn increase(&self, size: Size, strategy: &str, label: &str, metric: &str) -> Option<Score> {
        self.increases
            .iter()
            .find(|r| {
                r.target_size == size
                    && r.strategy == strategy
                    && r.label == label
                    && r.metric == metric
            })
            .map(|r| r.percent)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let m = &self.metadata;
        let _ = writeln!(
            out,
            "# maskresize comparison report, schema {}",
            self.schema_version
        );
        let _ = writeln!(out, "# {}", m.note);
        let _ = writeln!(
            out,
            "# seed={} config_hash={} version={} source_size={} bf_tolerance={}",
            m.seed, m.config_hash, m.version, m.source_size, m.bf_tolerance
        );
        out.push_str("target_size,strategy,label,metric,value\n");
        for row in &self.results {
            for (label, metric, value) in score_cells(&row.metrics) {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{}",
                    row.target_size,
                    row.strategy,
                    label,
                    metric,
                    format_score(value)
                );
            }
        }
        let _ = writeln!(out, "\nbaseline={}", self.baseline);
        out.push_str("target_size,strategy,label,metric,percent_increase\n");
        for r in &self.increases {
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                r.target_size,
                r.strategy,
                r.label,
                r.metric,
                format_score(r.percent)
            );
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::invalid(format!("bad report JSON: {e}")))
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Csv => self.to_csv(),
            OutputFormat::Json => self.to_json(),
        }
    }
}

pub fn format_score(value: Score) -> String {
    match value {
        Some(v) => format!("{v:.6}"),
        None => "NA".to_owned(),
    }
}

pub fn emit_report(report: &ComparisonReport, format: OutputFormat, path: &Path) -> Result<()> {
    std::fs::write(path, report.render(format)).map_err(|e| Error::io(path, e))
}
