//! A small comparison suite printed as the summary CSV.

use coalition::bench::{run_benchmark, BenchmarkSpec, Variant};
use coalition::report;
use coalition::Algorithm;

fn main() {
    let spec = BenchmarkSpec {
        variants: vec![
            Variant::plain(Algorithm::Qmopso),
            Variant::filtered(Algorithm::Qmopso),
            Variant::plain(Algorithm::Nsga2),
            Variant::plain(Algorithm::Spea2),
        ],
        sizes: vec![10, 50],
        populations: vec![50],
        seeds: vec![0, 1, 2],
        iterations: 50,
        ..BenchmarkSpec::default()
    };
    let report = run_benchmark(&spec);
    for f in &report.failures {
        eprintln!("{} n={} seed={}: {}", f.algorithm, f.n, f.seed, f.message);
    }
    print!("{}", report::summary_csv(&report));
}
