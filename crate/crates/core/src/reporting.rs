//! Flat metric rows, CSV output and the per-seed mechanism comparison.
//!
//! Floats are written rounded to six significant digits so files stay
//! diff-stable across platforms.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize, Serializer};

use crate::engine::{RunSummary, SimConfig, SweepCell};
use crate::error::{Error, Result};
use crate::mechanisms::Mechanism;
use crate::scalar::Scalar;

pub const SUMMARY_HEADER: &str =
    "mechanism,axis,axis_value,seed,total_revenue,total_rides,revenue_per_ride,mean_income,income_sd,gini";

/// Axis label used for rows that are not part of a sweep.
pub const NO_AXIS: &str = "none";

/// Rounds `v` to six significant digits.
pub fn round_sig6(v: f64) -> f64 {
    if v == 0.0 || !v.is_finite() {
        return v;
    }
    format!("{v:.5e}").parse().expect("formatted float parses")
}

/// Six-significant-digit rendering without exponent notation.
pub fn render_sig6(v: f64) -> String {
    let r = round_sig6(v);
    if r == 0.0 {
        "0".to_string()
    } else {
        r.to_string()
    }
}

fn sig6<S: Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&render_sig6(*v))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsRow {
    pub mechanism: Mechanism,
    pub axis: String,
    #[serde(serialize_with = "sig6")]
    pub axis_value: f64,
    pub seed: u64,
    #[serde(serialize_with = "sig6")]
    pub total_revenue: f64,
    pub total_rides: u64,
    #[serde(serialize_with = "sig6")]
    pub revenue_per_ride: f64,
    #[serde(serialize_with = "sig6")]
    pub mean_income: f64,
    #[serde(serialize_with = "sig6")]
    pub income_sd: f64,
    #[serde(serialize_with = "sig6")]
    pub gini: f64,
}

impl MetricsRow {
    /// The row as it reads back from a CSV file.
    pub fn rounded(&self) -> Self {
        Self {
            axis_value: round_sig6(self.axis_value),
            total_revenue: round_sig6(self.total_revenue),
            revenue_per_ride: round_sig6(self.revenue_per_ride),
            mean_income: round_sig6(self.mean_income),
            income_sd: round_sig6(self.income_sd),
            gini: round_sig6(self.gini),
            ..self.clone()
        }
    }
}

/// Flattens a run into one row. Income statistics are recomputed from the
/// final per-driver incomes.
pub fn summarize<F: Scalar>(summary: &RunSummary<F>, axis: &str, axis_value: f64) -> MetricsRow {
    let incomes: Vec<f64> = summary.driver_incomes.iter().map(|v| v.as_f64()).collect();
    let total_revenue = summary.total_revenue.as_f64();
    MetricsRow {
        mechanism: summary.mechanism,
        axis: axis.to_string(),
        axis_value,
        seed: summary.seed,
        total_revenue,
        total_rides: summary.total_rides as u64,
        revenue_per_ride: total_revenue / summary.total_rides.max(1) as f64,
        mean_income: crate::stats::mean(&incomes),
        income_sd: crate::stats::population_sd(&incomes),
        gini: summary.gini.as_f64(),
    }
}

pub fn sweep_rows<F: Scalar>(cells: &[SweepCell<F>]) -> Vec<MetricsRow> {
    cells
        .iter()
        .map(|c| summarize(&c.summary, c.axis.tag(), c.value.as_f64()))
        .collect()
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn csv_err(path: &Path) -> impl FnOnce(csv::Error) -> Error + '_ {
    move |source| Error::Csv {
        path: path.to_path_buf(),
        source,
    }
}

fn write_records<T: Serialize>(rows: &[T], path: &Path) -> Result<()> {
    let file = File::create(path).map_err(io_err(path))?;
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(BufWriter::new(file));
    for row in rows {
        w.serialize(row).map_err(csv_err(path))?;
    }
    w.flush().map_err(io_err(path))
}

pub fn write_csv(rows: &[MetricsRow], path: &Path) -> Result<()> {
    if rows.is_empty() {
        return Err(Error::Config("no rows to write".into()));
    }
    write_records(rows, path)
}

pub fn read_csv(path: &Path) -> Result<Vec<MetricsRow>> {
    let mut r = csv::Reader::from_path(path).map_err(csv_err(path))?;
    r.deserialize().map(|row| row.map_err(csv_err(path))).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoundRow {
    pub run_id: String,
    pub round: usize,
    #[serde(serialize_with = "sig6")]
    pub revenue: f64,
    pub rides: usize,
}

pub fn run_id<F>(summary: &RunSummary<F>) -> String {
    format!("{}-seed{}", summary.mechanism, summary.seed)
}

/// Long-format per-round series: `run_id,round,revenue,rides`.
pub fn round_rows<F: Scalar>(summary: &RunSummary<F>) -> Vec<RoundRow> {
    let id = run_id(summary);
    summary
        .rounds
        .iter()
        .map(|r| RoundRow {
            run_id: id.clone(),
            round: r.round,
            revenue: r.revenue.as_f64(),
            rides: r.rides,
        })
        .collect()
}

pub fn write_rounds_csv(rows: &[RoundRow], path: &Path) -> Result<()> {
    write_records(rows, path)
}

/// Total revenue of every mechanism for one seed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub seed: u64,
    #[serde(serialize_with = "sig6")]
    pub da: f64,
    #[serde(serialize_with = "sig6")]
    pub boston: f64,
    #[serde(serialize_with = "sig6")]
    pub closest: f64,
    #[serde(serialize_with = "sig6")]
    pub random: f64,
    /// Highest total; ties go to the earliest mechanism in tag order.
    pub best: Mechanism,
    pub tie: bool,
}

impl ComparisonRow {
    pub fn total(&self, m: Mechanism) -> f64 {
        match m {
            Mechanism::Da => self.da,
            Mechanism::Boston => self.boston,
            Mechanism::Closest => self.closest,
            Mechanism::Random => self.random,
        }
    }
}

/// One row per seed, in order of first appearance.
pub fn compare_table(rows: &[MetricsRow]) -> Result<Vec<ComparisonRow>> {
    let mut seeds: Vec<u64> = Vec::new();
    for r in rows {
        if !seeds.contains(&r.seed) {
            seeds.push(r.seed);
        }
    }
    seeds
        .into_iter()
        .map(|seed| {
            let mut totals = [0.0f64; 4];
            for (slot, m) in totals.iter_mut().zip(Mechanism::ALL) {
                *slot = rows
                    .iter()
                    .find(|r| r.seed == seed && r.mechanism == m)
                    .ok_or(Error::MissingMechanism {
                        seed,
                        mechanism: m.tag(),
                    })?
                    .total_revenue;
            }
            let mut best = 0;
            for i in 1..4 {
                if totals[i] > totals[best] {
                    best = i;
                }
            }
            let tie = (0..4).any(|i| i != best && totals[i] == totals[best]);
            Ok(ComparisonRow {
                seed,
                da: totals[0],
                boston: totals[1],
                closest: totals[2],
                random: totals[3],
                best: Mechanism::ALL[best],
                tie,
            })
        })
        .collect()
}

pub fn write_comparison_csv(rows: &[ComparisonRow], path: &Path) -> Result<()> {
    write_records(rows, path)
}

pub fn read_config<F: Scalar>(path: &Path) -> Result<SimConfig<F>> {
    let text = std::fs::read_to_string(path).map_err(io_err(path))?;
    serde_json::from_str(&text).map_err(|source| Error::Json {
        path: path.to_path_buf(),
        source,
    })
}

pub fn write_config<F: Scalar>(cfg: &SimConfig<F>, path: &Path) -> Result<()> {
    let mut file = File::create(path).map_err(io_err(path))?;
    let text = serde_json::to_string_pretty(cfg).expect("config serializes");
    writeln!(file, "{text}").map_err(io_err(path))
}
