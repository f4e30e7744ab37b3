use std::fs::{self, File};
use std::io::{self, Write};
use std::path::Path;

use pareto_forge::engine::RunResult;
use pareto_forge::metrics::{FrontMetrics, MetricReport};
use pareto_forge::{ObjectiveVector, Solution};
use serde::Serialize;

use crate::config::ConfigFile;

/// Archive members ordered by f1, then f2.
pub fn sorted_front(members: &[Solution]) -> Vec<&Solution> {
    let mut sorted: Vec<&Solution> = members.iter().collect();
    sorted.sort_by(|a, b| {
        a.objectives
            .iter()
            .zip(b.objectives.iter())
            .fold(std::cmp::Ordering::Equal, |o, (x, y)| o.then(x.total_cmp(y)))
    });
    sorted
}

fn csv_writer(path: &Path) -> io::Result<csv::Writer<File>> {
    Ok(csv::Writer::from_writer(File::create(path)?))
}

pub fn write_points<W: Write>(out: W, points: &[ObjectiveVector]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["f1", "f2"])?;
    for p in points {
        w.write_record(p.iter().map(|v| v.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct ResultFile<'a> {
    config: &'a ConfigFile,
    #[serde(flatten)]
    result: &'a RunResult,
}

/// Writes front.csv, decisions.csv, trace.csv and result.json into `dir`.
pub fn write_run(dir: &Path, result: &RunResult, config: &ConfigFile) -> csv::Result<()> {
    fs::create_dir_all(dir)?;
    let front = sorted_front(&result.archive_members);

    let objectives: Vec<ObjectiveVector> = front.iter().map(|s| s.objectives.clone()).collect();
    write_points(File::create(dir.join("front.csv"))?, &objectives)?;

    let mut w = csv_writer(&dir.join("decisions.csv"))?;
    let d = front.first().map_or(0, |s| s.decision.len());
    w.write_record((1..=d).map(|j| format!("x{j}")))?;
    for s in &front {
        w.write_record(s.decision.iter().map(|v| v.to_string()))?;
    }
    w.flush()?;

    let mut w = csv_writer(&dir.join("trace.csv"))?;
    for record in &result.trace {
        w.serialize(record)?;
    }
    if result.trace.is_empty() {
        w.write_record(["generation", "archive_size", "n_qabc", "n_tbga", "xi"])?;
    }
    w.flush()?;

    let json = serde_json::to_string_pretty(&ResultFile { config, result })
        .map_err(io::Error::from)?;
    fs::write(dir.join("result.json"), json + "\n")?;
    Ok(())
}

/// One row of metrics.csv.
#[derive(Debug, Clone, Serialize)]
pub struct MetricRow {
    pub problem: String,
    pub algorithm: String,
    pub run: usize,
    pub seed: u64,
    pub gamma: f64,
    pub delta: f64,
    pub igd: f64,
    pub spread: f64,
    pub archive_size: usize,
    pub wall_time: f64,
}

impl MetricRow {
    pub fn metrics(&self) -> FrontMetrics {
        FrontMetrics {
            gamma: self.gamma,
            delta: self.delta,
            igd: self.igd,
            spread: self.spread,
        }
    }
}

pub fn write_metrics(path: &Path, rows: &[MetricRow]) -> csv::Result<()> {
    let mut w = csv_writer(path)?;
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_summary(path: &Path, reports: &[MetricReport]) -> csv::Result<()> {
    let mut w = csv_writer(path)?;
    w.write_record([
        "problem",
        "algorithm",
        "runs",
        "gamma_mean",
        "gamma_std",
        "delta_mean",
        "delta_std",
        "igd_mean",
        "igd_std",
        "spread_mean",
        "spread_std",
    ])?;
    for r in reports {
        let mut record = vec![r.problem.clone(), r.algorithm.clone(), r.runs.to_string()];
        for s in [r.gamma, r.delta, r.igd, r.spread] {
            record.push(s.mean.to_string());
            record.push(s.std.to_string());
        }
        w.write_record(&record)?;
    }
    w.flush()?;
    Ok(())
}
