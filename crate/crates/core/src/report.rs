//! Deterministic CSV and JSON output for runs and benchmark suites.
//!
//! Output is a pure function of its input: rows are pre-sorted, floats use
//! the shortest round-trip representation and undefined values print as
//! `NA`. Wall-clock figures can be left out to make repeated runs
//! byte-identical.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bench::BenchReport;
use crate::error::{Error, Result};
use crate::pipeline::RunResult;

pub const BENCH_CSV_HEADER: &str = "schema_version,algorithm,n,population,seed,metric,value";
pub const SUMMARY_CSV_HEADER: &str = "schema_version,algorithm,n,population,metric,median,defined,runs";
pub const RUN_CSV_HEADER: &str = "schema_version,index,members,time,cost,size,feasible,degree,admitted,selected";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            _ => Err(Error::invalid(format!("unknown format {s:?}; expected csv or json"))),
        }
    }
}

fn value(v: Option<f64>) -> String {
    v.map_or_else(|| "NA".to_string(), |x| x.to_string())
}

pub fn bench_csv(report: &BenchReport) -> String {
    let mut out = format!("{BENCH_CSV_HEADER}\n");
    for r in &report.rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            report.schema_version,
            r.algorithm,
            r.n,
            r.population,
            r.seed,
            r.metric,
            value(r.value)
        );
    }
    out
}

pub fn summary_csv(report: &BenchReport) -> String {
    let mut out = format!("{SUMMARY_CSV_HEADER}\n");
    for s in &report.summary {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            report.schema_version,
            s.algorithm,
            s.n,
            s.population,
            s.metric,
            value(s.median),
            s.defined,
            s.runs
        );
    }
    out
}

pub fn bench_json(report: &BenchReport) -> Result<String> {
    to_json(report)
}

/// One row per Pareto solution; members are `;`-separated original ids.
pub fn run_csv(result: &RunResult) -> String {
    let mut out = format!("{RUN_CSV_HEADER}\n");
    for (i, s) in result.pareto_set.iter().enumerate() {
        let members: Vec<String> = s.members.iter().map(usize::to_string).collect();
        let o = s.evaluation.objectives;
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{}",
            result.schema_version,
            i,
            members.join(";"),
            o.time,
            o.cost,
            o.size,
            s.evaluation.feasibility.feasible,
            s.evaluation.feasibility.degree,
            s.admitted,
            result.selected == Some(i)
        );
    }
    out
}

/// The run as a JSON document; `include_timings = false` drops the
/// `timing` member.
pub fn run_json(result: &RunResult, include_timings: bool) -> Result<String> {
    let mut doc = serde_json::to_value(result).map_err(|e| Error::Internal(e.to_string()))?;
    if !include_timings {
        if let Some(obj) = doc.as_object_mut() {
            obj.remove("timing");
        }
    }
    to_json(&doc)
}

fn to_json(value: &impl Serialize) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| Error::Internal(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn write(path: PathBuf, contents: &str) -> Result<PathBuf> {
    fs::write(&path, contents).map_err(|e| Error::io(&path, e))?;
    Ok(path)
}

fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

/// Writes `run.json` or `run.csv` into `dir`.
pub fn write_run(dir: &Path, result: &RunResult, format: Format, include_timings: bool) -> Result<Vec<PathBuf>> {
    ensure_dir(dir)?;
    Ok(vec![match format {
        Format::Json => write(dir.join("run.json"), &run_json(result, include_timings)?)?,
        Format::Csv => write(dir.join("run.csv"), &run_csv(result))?,
    }])
}

/// Writes `bench.json`, or `bench.csv` plus `bench_summary.csv`, into `dir`.
pub fn write_bench(dir: &Path, report: &BenchReport, format: Format, include_timings: bool) -> Result<Vec<PathBuf>> {
    ensure_dir(dir)?;
    let stripped;
    let report = if include_timings {
        report
    } else {
        stripped = report.without_timings();
        &stripped
    };
    match format {
        Format::Json => Ok(vec![write(dir.join("bench.json"), &bench_json(report)?)?]),
        Format::Csv => Ok(vec![
            write(dir.join("bench.csv"), &bench_csv(report))?,
            write(dir.join("bench_summary.csv"), &summary_csv(report))?,
        ]),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bench::MetricRow;

    fn row(algorithm: &str, seed: u64, metric: &str, v: Option<f64>) -> MetricRow {
        MetricRow {
            algorithm: algorithm.into(),
            n: 10,
            population: 20,
            seed,
            metric: metric.into(),
            value: v,
        }
    }

    #[test]
    fn empty_report_is_header_only() {
        let r = BenchReport::from_rows(vec![], vec![]);
        assert_eq!(bench_csv(&r), format!("{BENCH_CSV_HEADER}\n"));
        assert_eq!(summary_csv(&r), format!("{SUMMARY_CSV_HEADER}\n"));
    }

    #[test]
    fn rows_are_grouped_by_algorithm_then_seed() {
        let r = BenchReport::from_rows(
            vec![
                row("qmopso", 1, "spacing", Some(2.0)),
                row("nsga2", 0, "spacing", None),
                row("qmopso", 0, "spacing", Some(1.5)),
            ],
            vec![],
        );
        let csv = bench_csv(&r);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(
            lines[1..],
            [
                "1,nsga2,10,20,0,spacing,NA",
                "1,qmopso,10,20,0,spacing,1.5",
                "1,qmopso,10,20,1,spacing,2",
            ]
        );
        assert_eq!(r.median_of("qmopso", 10, 20, "spacing"), Some(1.75));
        assert_eq!(r.median_of("nsga2", 10, 20, "spacing"), None);
    }

    #[test]
    fn timing_rows_can_be_dropped() {
        let r = BenchReport::from_rows(
            vec![row("qmopso", 0, "processing_time", Some(0.1)), row("qmopso", 0, "spacing", Some(1.0))],
            vec![],
        );
        let s = r.without_timings();
        assert_eq!(s.rows.len(), 1);
        assert_eq!(s.rows[0].metric, "spacing");
    }

    #[test]
    fn formats_parse() {
        assert_eq!("csv".parse::<Format>().unwrap(), Format::Csv);
        assert!("xml".parse::<Format>().is_err());
    }
}
