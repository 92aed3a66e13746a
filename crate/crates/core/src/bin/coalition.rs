use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use coalition::analysis::oracle::brute_force_front;
use coalition::bench::{run_benchmark, BenchmarkSpec, Variant};
use coalition::report::{self, Format};
use coalition::{
    generate_scenario, Algorithm, CriteriaWeights, Error, Fleet, GenerationRanges, RunConfig, Scenario, Thresholds,
};

/// Coalition formation solver and benchmark driver.
#[derive(Parser)]
#[command(name = "coalition", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the filter-optimize-rank pipeline once.
    Solve(SolveArgs),
    /// Run a benchmark suite.
    Bench(BenchArgs),
    /// Generate a random scenario file.
    Gen(GenArgs),
    /// Enumerate the exact Pareto front of a small scenario.
    Oracle(OracleArgs),
}

#[derive(Args)]
struct ScenarioArgs {
    /// Scenario TOML file; without it a scenario is generated from --seed.
    #[arg(long)]
    scenario: Option<PathBuf>,
    /// Fleet size when generating.
    #[arg(long, default_value_t = 10)]
    robots: usize,
}

#[derive(Args)]
struct OutputArgs {
    /// Directory for output files; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value = "json", value_parser = parse_format)]
    format: Format,
    /// Leave wall-clock timings out of the output.
    #[arg(long)]
    no_timings: bool,
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    scenario: ScenarioArgs,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "qmopso", value_parser = parse_algorithm)]
    algorithm: Algorithm,
    #[arg(long, default_value_t = 100)]
    population: usize,
    #[arg(long, default_value_t = 100)]
    iterations: usize,
    /// Minimum battery percentage.
    #[arg(long, default_value_t = 40.0)]
    filter_threshold: f64,
    /// Skip battery filtering.
    #[arg(long)]
    no_filter: bool,
    #[arg(long)]
    max_time: Option<f64>,
    #[arg(long)]
    max_cost: Option<f64>,
    #[arg(long)]
    max_robots: Option<usize>,
    /// Ranking weights for time, cost and size.
    #[arg(long, value_parser = parse_weights)]
    weights: Option<CriteriaWeights>,
    /// Also score the result against the exact front (small fleets).
    #[arg(long)]
    with_oracle: bool,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct BenchArgs {
    /// Comma-separated variants, e.g. qmopso,qmopso+filter,nsga2,spea2.
    #[arg(long, default_value = "qmopso,nsga2,spea2", value_delimiter = ',', value_parser = parse_variant)]
    algorithm: Vec<Variant>,
    #[arg(long, default_value = "10", value_delimiter = ',')]
    sizes: Vec<usize>,
    #[arg(long, default_value = "100", value_delimiter = ',')]
    population: Vec<usize>,
    #[arg(long, default_value_t = 100)]
    iterations: usize,
    /// First seed of the suite.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of consecutive seeds.
    #[arg(long, default_value_t = 3)]
    runs: u64,
    #[arg(long, default_value_t = 40.0)]
    filter_threshold: f64,
    #[arg(long, value_parser = parse_weights)]
    weights: Option<CriteriaWeights>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 10)]
    robots: usize,
    /// Directory to write scenario.toml into; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct OracleArgs {
    #[command(flatten)]
    scenario: ScenarioArgs,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_algorithm(s: &str) -> Result<Algorithm, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_variant(s: &str) -> Result<Variant, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_format(s: &str) -> Result<Format, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_weights(s: &str) -> Result<CriteriaWeights, String> {
    let parts: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|e| format!("{p:?}: {e}")))
        .collect::<Result<_, _>>()?;
    match parts[..] {
        [t, c, n] => CriteriaWeights::new(t, c, n).map_err(|e| e.to_string()),
        _ => Err(format!("expected three weights t,c,s, got {}", parts.len())),
    }
}

fn load_scenario(args: &ScenarioArgs, seed: u64) -> coalition::Result<Scenario> {
    match &args.scenario {
        Some(path) => Scenario::load(path),
        None => generate_scenario(seed, args.robots, &GenerationRanges::default()),
    }
}

fn emit(out: &Option<PathBuf>, name: &str, contents: &str) -> coalition::Result<()> {
    match out {
        Some(dir) => {
            std::fs::create_dir_all(dir).map_err(|e| Error::Io { path: dir.clone(), source: e })?;
            let path = dir.join(name);
            std::fs::write(&path, contents).map_err(|e| Error::Io { path, source: e })
        }
        None => {
            print!("{contents}");
            Ok(())
        }
    }
}

fn solve(args: SolveArgs) -> coalition::Result<ExitCode> {
    let scenario = load_scenario(&args.scenario, args.seed)?;
    let mut thresholds = scenario.task.thresholds;
    thresholds.max_time = args.max_time.or(thresholds.max_time);
    thresholds.max_cost = args.max_cost.or(thresholds.max_cost);
    thresholds.max_robots = args.max_robots.or(thresholds.max_robots);
    let config = RunConfig {
        algorithm: args.algorithm,
        population: args.population,
        iterations: args.iterations,
        filter_threshold: (!args.no_filter).then_some(args.filter_threshold),
        thresholds: Some(thresholds).filter(|t| *t != Thresholds::default()),
        criteria: args.weights.unwrap_or_default(),
        seed: args.seed,
        oracle_metrics: args.with_oracle,
        ..RunConfig::default()
    };
    let result = Fleet::new(scenario).run(&config)?;
    let include_timings = !args.output.no_timings;
    match &args.output.out {
        Some(dir) => {
            report::write_run(dir, &result, args.output.format, include_timings)?;
        }
        None => match args.output.format {
            Format::Json => print!("{}", report::run_json(&result, include_timings)?),
            Format::Csv => print!("{}", report::run_csv(&result)),
        },
    }
    if result.selected.is_none() {
        eprintln!("no feasible coalition within the thresholds");
        return Ok(ExitCode::from(2));
    }
    Ok(ExitCode::SUCCESS)
}

fn bench(args: BenchArgs) -> coalition::Result<ExitCode> {
    let spec = BenchmarkSpec {
        variants: args.algorithm,
        sizes: args.sizes,
        populations: args.population,
        seeds: (args.seed..args.seed + args.runs).collect(),
        iterations: args.iterations,
        filter_threshold: args.filter_threshold,
        criteria: args.weights.unwrap_or_default(),
        ..BenchmarkSpec::default()
    };
    let full = run_benchmark(&spec);
    for f in &full.failures {
        eprintln!("cell {} n={} pop={} seed={} failed: {}", f.algorithm, f.n, f.population, f.seed, f.message);
    }
    let include_timings = !args.output.no_timings;
    match &args.output.out {
        Some(dir) => {
            report::write_bench(dir, &full, args.output.format, include_timings)?;
        }
        None => {
            let report = if include_timings { full } else { full.without_timings() };
            match args.output.format {
                Format::Json => print!("{}", report::bench_json(&report)?),
                Format::Csv => print!("{}", report::bench_csv(&report)),
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn gen(args: GenArgs) -> coalition::Result<ExitCode> {
    let scenario = generate_scenario(args.seed, args.robots, &GenerationRanges::default())?;
    emit(&args.out, "scenario.toml", &scenario.to_toml_string()?)?;
    Ok(ExitCode::SUCCESS)
}

fn oracle(args: OracleArgs) -> coalition::Result<ExitCode> {
    let scenario = load_scenario(&args.scenario, args.seed)?;
    let oracle = brute_force_front(&scenario)?;
    let mut text = serde_json::to_string_pretty(&oracle).map_err(|e| Error::Internal(e.to_string()))?;
    text.push('\n');
    emit(&args.out, "oracle.json", &text)?;
    if !oracle.feasible {
        eprintln!("no feasible coalition exists");
        return Ok(ExitCode::from(2));
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Solve(a) => solve(a),
        Command::Bench(a) => bench(a),
        Command::Gen(a) => gen(a),
        Command::Oracle(a) => oracle(a),
    };
    outcome.unwrap_or_else(|e| {
        eprintln!("error: {e}");
        ExitCode::FAILURE
    })
}
