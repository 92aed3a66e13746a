//! Benchmark harness: algorithms x fleet sizes x populations x seeds, every
//! cell scored against its own reference front.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::analysis::metrics::{error_ratio, reference_front, set_coverage, spacing, Front, FrontPoint};
use crate::analysis::oracle::brute_force_front;
use crate::analysis::promethee::CriteriaWeights;
use crate::error::{Error, Result};
use crate::generate::{generate_scenario, GenerationRanges};
use crate::model::{Coalition, Scenario};
use crate::objectives::FeasibilityWeights;
use crate::pipeline::{Algorithm, Fleet, RunConfig, RunResult, SCHEMA_VERSION};

/// An optimizer, optionally preceded by battery filtering.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Variant {
    pub algorithm: Algorithm,
    pub filtered: bool,
}

impl Variant {
    pub const fn plain(algorithm: Algorithm) -> Self {
        Self {
            algorithm,
            filtered: false,
        }
    }

    pub const fn filtered(algorithm: Algorithm) -> Self {
        Self {
            algorithm,
            filtered: true,
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.algorithm, if self.filtered { "+filter" } else { "" })
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.strip_suffix("+filter") {
            Some(base) => Ok(Variant::filtered(base.parse()?)),
            None => Ok(Variant::plain(s.parse()?)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkSpec {
    pub variants: Vec<Variant>,
    pub sizes: Vec<usize>,
    pub populations: Vec<usize>,
    pub seeds: Vec<u64>,
    pub iterations: usize,
    pub filter_threshold: f64,
    pub ranges: GenerationRanges,
    pub criteria: CriteriaWeights,
    pub feasibility: FeasibilityWeights,
    /// Cells with at most this many robots are scored against the exact
    /// front; larger ones against the union of the variants' fronts.
    pub exact_reference_limit: usize,
}

impl Default for BenchmarkSpec {
    fn default() -> Self {
        Self {
            variants: vec![
                Variant::plain(Algorithm::Qmopso),
                Variant::plain(Algorithm::Nsga2),
                Variant::plain(Algorithm::Spea2),
            ],
            sizes: vec![10],
            populations: vec![100],
            seeds: vec![0, 1, 2],
            iterations: 100,
            filter_threshold: 40.0,
            ranges: GenerationRanges::default(),
            criteria: CriteriaWeights::default(),
            feasibility: FeasibilityWeights::default(),
            exact_reference_limit: 16,
        }
    }
}

/// Metric names whose values are wall-clock measurements.
pub const TIMING_METRICS: [&str; 5] = [
    "processing_time",
    "filtering_time",
    "repository_update_mean",
    "feasibility_check_mean",
    "feasibility_share",
];

#[derive(Debug, Clone, PartialEq)]
pub struct CellRun {
    pub variant: Variant,
    pub n: usize,
    pub population: usize,
    pub seed: u64,
    /// Feasible non-empty Pareto solutions in original robot ids.
    pub front: Front,
    pub result: RunResult,
    /// Metric name to value; `None` where the metric is undefined.
    pub metrics: BTreeMap<String, Option<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricRow {
    pub algorithm: String,
    pub n: usize,
    pub population: usize,
    pub seed: u64,
    pub metric: String,
    pub value: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub algorithm: String,
    pub n: usize,
    pub population: usize,
    pub metric: String,
    /// Median over the seeds where the metric is defined.
    pub median: Option<f64>,
    pub defined: usize,
    pub runs: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellFailure {
    pub algorithm: String,
    pub n: usize,
    pub population: usize,
    pub seed: u64,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub schema_version: u32,
    pub rows: Vec<MetricRow>,
    pub summary: Vec<SummaryRow>,
    pub failures: Vec<CellFailure>,
}

pub fn median(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    Some(if v.len() % 2 == 1 { v[m] } else { (v[m - 1] + v[m]) / 2.0 })
}

/// Front of a run's feasible, non-empty Pareto solutions.
pub fn run_front(result: &RunResult) -> Result<Front> {
    let mut points = Vec::new();
    for record in &result.pareto_set {
        if record.evaluation.is_feasible() && !record.members.is_empty() {
            points.push(FrontPoint {
                coalition: Coalition::from_members(result.fleet_size, &record.members)?,
                objectives: record.evaluation.objectives,
            });
        }
    }
    Ok(Front::from_points(points))
}

/// Runs every variant on one generated scenario and scores them. Variants
/// that fail are reported in the second list.
pub fn run_cell(spec: &BenchmarkSpec, n: usize, population: usize, seed: u64) -> Result<(Vec<CellRun>, Vec<CellFailure>)> {
    let scenario = generate_scenario(seed, n, &spec.ranges)?;
    let mut runs = Vec::new();
    let mut failures = Vec::new();
    for &variant in &spec.variants {
        match run_variant(spec, &scenario, variant, population, seed) {
            Ok(run) => runs.push(run),
            Err(e) => failures.push(CellFailure {
                algorithm: variant.to_string(),
                n,
                population,
                seed,
                message: e.to_string(),
            }),
        }
    }
    let reference = if n <= spec.exact_reference_limit {
        Some(brute_force_front(&scenario)?.front).filter(|f| !f.is_empty())
    } else {
        reference_front(runs.iter().map(|r| &r.front)).ok()
    };
    let fronts: Vec<(Variant, Front)> = runs.iter().map(|r| (r.variant, r.front.clone())).collect();
    for run in &mut runs {
        let m = &mut run.metrics;
        m.insert("front_size".into(), Some(run.front.len() as f64));
        m.insert(
            "error_ratio".into(),
            reference.as_ref().and_then(|r| error_ratio(&run.front, r).ok()),
        );
        m.insert("spacing".into(), spacing(&run.front).ok());
        for (other, front) in &fronts {
            if *other != run.variant {
                m.insert(format!("coverage_over:{other}"), set_coverage(&run.front, front).ok());
            }
        }
        let t = &run.result.timing;
        let rep = t.repository_update_total();
        m.insert("processing_time".into(), Some(t.total));
        m.insert("filtering_time".into(), Some(t.filtering));
        m.insert("repository_update_mean".into(), Some(t.mean_repository_update()));
        m.insert("feasibility_check_mean".into(), Some(t.mean_feasibility_check()));
        m.insert(
            "feasibility_share".into(),
            (rep > 0.0).then(|| t.feasibility_check_total() / rep),
        );
    }
    Ok((runs, failures))
}

fn run_variant(spec: &BenchmarkSpec, scenario: &Scenario, variant: Variant, population: usize, seed: u64) -> Result<CellRun> {
    let config = RunConfig {
        algorithm: variant.algorithm,
        population,
        iterations: spec.iterations,
        filter_threshold: variant.filtered.then_some(spec.filter_threshold),
        thresholds: None,
        criteria: spec.criteria,
        feasibility: spec.feasibility,
        seed,
        oracle_metrics: false,
    };
    let result = Fleet::new(scenario.clone()).run(&config)?;
    Ok(CellRun {
        variant,
        n: scenario.len(),
        population,
        seed,
        front: run_front(&result)?,
        result,
        metrics: BTreeMap::new(),
    })
}

/// Runs the whole suite. A cell whose scenario cannot even be generated is
/// recorded as a failure of every variant; the suite always continues.
pub fn run_benchmark(spec: &BenchmarkSpec) -> BenchReport {
    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for &n in &spec.sizes {
        for &population in &spec.populations {
            for &seed in &spec.seeds {
                match run_cell(spec, n, population, seed) {
                    Ok((runs, failed)) => {
                        failures.extend(failed);
                        for run in runs {
                            for (metric, value) in run.metrics {
                                rows.push(MetricRow {
                                    algorithm: run.variant.to_string(),
                                    n,
                                    population,
                                    seed,
                                    metric,
                                    value,
                                });
                            }
                        }
                    }
                    Err(e) => failures.extend(spec.variants.iter().map(|v| CellFailure {
                        algorithm: v.to_string(),
                        n,
                        population,
                        seed,
                        message: e.to_string(),
                    })),
                }
            }
        }
    }
    BenchReport::from_rows(rows, failures)
}

impl BenchReport {
    /// Sorts rows by (algorithm, n, seed, population, metric) and derives
    /// the per-seed medians.
    pub fn from_rows(mut rows: Vec<MetricRow>, failures: Vec<CellFailure>) -> Self {
        rows.sort_by(|a, b| {
            (&a.algorithm, a.n, a.seed, a.population, &a.metric).cmp(&(&b.algorithm, b.n, b.seed, b.population, &b.metric))
        });
        let mut groups: BTreeMap<(String, usize, usize, String), (Vec<f64>, usize)> = BTreeMap::new();
        for r in &rows {
            let g = groups
                .entry((r.algorithm.clone(), r.n, r.population, r.metric.clone()))
                .or_default();
            g.1 += 1;
            if let Some(v) = r.value {
                g.0.push(v);
            }
        }
        let summary = groups
            .into_iter()
            .map(|((algorithm, n, population, metric), (values, runs))| SummaryRow {
                algorithm,
                n,
                population,
                metric,
                median: median(&values),
                defined: values.len(),
                runs,
            })
            .collect();
        Self {
            schema_version: SCHEMA_VERSION,
            rows,
            summary,
            failures,
        }
    }

    /// The report without wall-clock metrics, which differ between runs.
    pub fn without_timings(&self) -> Self {
        let keep = |m: &str| !TIMING_METRICS.contains(&m);
        Self::from_rows(
            self.rows.iter().filter(|r| keep(&r.metric)).cloned().collect(),
            self.failures.clone(),
        )
    }

    pub fn median_of(&self, algorithm: &str, n: usize, population: usize, metric: &str) -> Option<f64> {
        self.summary
            .iter()
            .find(|s| s.algorithm == algorithm && s.n == n && s.population == population && s.metric == metric)
            .and_then(|s| s.median)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn variant_labels() {
        for v in [Variant::plain(Algorithm::Spea2), Variant::filtered(Algorithm::Qmopso)] {
            assert_eq!(v.to_string().parse::<Variant>().unwrap(), v);
        }
        assert_eq!(Variant::filtered(Algorithm::Qmopso).to_string(), "qmopso+filter");
        assert!("nope+filter".parse::<Variant>().is_err());
    }

    #[test]
    fn medians() {
        assert_eq!(median(&[]), None);
        assert_eq!(median(&[3.0, 1.0, 2.0]), Some(2.0));
        assert_eq!(median(&[4.0, 1.0, 2.0, 3.0]), Some(2.5));
    }

    #[test]
    fn small_suite_composition() {
        let spec = BenchmarkSpec {
            variants: vec![Variant::plain(Algorithm::Qmopso)],
            seeds: vec![0, 1, 2],
            populations: vec![20],
            iterations: 10,
            ..BenchmarkSpec::default()
        };
        let report = run_benchmark(&spec);
        assert!(report.failures.is_empty());
        let er: Vec<_> = report.rows.iter().filter(|r| r.metric == "error_ratio").collect();
        assert_eq!(er.len(), 3);
        assert_eq!(er.iter().map(|r| r.seed).collect::<Vec<_>>(), vec![0, 1, 2]);
        let s = report.summary.iter().find(|s| s.metric == "error_ratio").unwrap();
        assert_eq!(s.runs, 3);
    }

    #[test]
    fn empty_suite_has_no_rows() {
        let spec = BenchmarkSpec {
            variants: vec![],
            ..BenchmarkSpec::default()
        };
        let report = run_benchmark(&spec);
        assert!(report.rows.is_empty() && report.summary.is_empty());
    }
}
