//! Command-line front end.
//!
//! Subcommands: `solve` (one instance, one algorithm), `compare` (both
//! algorithms on one instance, one-line report), `gen` (write a random
//! instance), `verify` (oracle plus both algorithms must agree), and
//! `bench` (a declared grid of generator settings and seeds).
//!
//! Exit codes: 0 success, 1 verification mismatch or general failure,
//! 2 malformed input (also used by argument parsing), 3 solver resource
//! limits, 4 oracle budget refusal.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use crate::engine::{self, SolveStats};
use crate::instances::{
    brute_force_nd, generate_random, parse_problem, write_nd, write_problem, GeneratorConfig,
    OracleError, ParseError,
};
use crate::ipsolver::{Backend, SolveError};
use crate::model::{NDSet, Problem};

/// Default point budget for the `verify` oracle.
const DEFAULT_ORACLE_BUDGET: u64 = 1 << 22;

/// `auto` backend rule: enumerate boxes up to this many points, otherwise
/// branch-and-bound.
const AUTO_ENUM_LIMIT: u128 = 1 << 20;

#[derive(Parser)]
#[command(
    name = "moipnd",
    version,
    about = "Complete nondominated-set enumeration for multi-objective integer programs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one instance and write its nondominated set.
    Solve(SolveArgs),
    /// Run both algorithms on one instance and report both costs.
    Compare(CompareArgs),
    /// Generate a random instance.
    Gen(GenArgs),
    /// Check both algorithms against brute-force enumeration.
    Verify(VerifyArgs),
    /// Run a grid of generator settings and summarize per-setting means.
    Bench(BenchArgs),
}

#[derive(clap::Args)]
struct SolveArgs {
    /// Instance file.
    #[arg(long)]
    input: PathBuf,
    /// Which algorithm to run.
    #[arg(long, value_enum, default_value_t = Algorithm::Improved)]
    algorithm: Algorithm,
    /// Scalar solver backend.
    #[arg(long, value_enum, default_value_t = BackendOpt::Auto)]
    backend: BackendOpt,
    /// Nondominated-set output file (stdout when absent).
    #[arg(long)]
    output: Option<PathBuf>,
    /// Stats JSON output file (not written when absent).
    #[arg(long)]
    stats: Option<PathBuf>,
}

#[derive(clap::Args)]
struct CompareArgs {
    /// Instance file.
    #[arg(long)]
    input: PathBuf,
    /// Scalar solver backend.
    #[arg(long, value_enum, default_value_t = BackendOpt::Auto)]
    backend: BackendOpt,
}

#[derive(clap::Args)]
struct GenArgs {
    /// Number of binary variables.
    #[arg(long)]
    cols: usize,
    /// Number of constraints.
    #[arg(long)]
    rows: usize,
    /// Number of objectives.
    #[arg(long)]
    objectives: usize,
    /// Coefficients are uniform integers in [1, coeff-max].
    #[arg(long, default_value_t = 10)]
    coeff_max: i64,
    /// Generator seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Instance output file (stdout when absent).
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(clap::Args)]
struct VerifyArgs {
    /// Instance file.
    #[arg(long)]
    input: PathBuf,
    /// Maximum variable-box points the oracle may enumerate.
    #[arg(long, default_value_t = DEFAULT_ORACLE_BUDGET)]
    budget: u64,
    /// Scalar solver backend.
    #[arg(long, value_enum, default_value_t = BackendOpt::Auto)]
    backend: BackendOpt,
}

#[derive(clap::Args)]
struct BenchArgs {
    /// Suite file: one `cols rows objectives coeff_max seed_first
    /// seed_last` line per setting; `#` comments.
    #[arg(long)]
    suite: PathBuf,
    /// Directory for the summary table and per-cell CSV.
    #[arg(long)]
    out: PathBuf,
    /// Scalar solver backend.
    #[arg(long, value_enum, default_value_t = BackendOpt::Auto)]
    backend: BackendOpt,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Algorithm {
    Basic,
    Improved,
}

impl Algorithm {
    fn name(self) -> &'static str {
        match self {
            Algorithm::Basic => "basic",
            Algorithm::Improved => "improved",
        }
    }

    fn run(self, p: &Problem, backend: Backend) -> Result<(NDSet, SolveStats), SolveError> {
        match self {
            Algorithm::Basic => engine::solve_basic(p, backend),
            Algorithm::Improved => engine::solve_improved(p, backend),
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum BackendOpt {
    /// Enumerate small variable boxes, branch-and-bound otherwise.
    Auto,
    Enum,
    Bb,
}

impl BackendOpt {
    fn resolve(self, p: &Problem) -> Backend {
        match self {
            BackendOpt::Enum => Backend::Enum,
            BackendOpt::Bb => Backend::Bb,
            BackendOpt::Auto => {
                if p.box_point_count() <= AUTO_ENUM_LIMIT {
                    Backend::Enum
                } else {
                    Backend::Bb
                }
            }
        }
    }
}

/// One solve's machine-readable report.
#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    /// Instance identifier (file path or generator coordinates).
    pub instance: String,
    /// `basic` or `improved`.
    pub algorithm: String,
    /// Backend that answered the scalar solves.
    pub backend: String,
    /// Size of the nondominated set.
    pub nd_size: usize,
    /// Base-level lexicographic solves.
    pub ip_count: u64,
    /// Scalar solver invocations.
    pub raw_scalar_solves: u64,
    /// Subproblems answered from the store.
    pub cache_reuses: u64,
    /// Subproblems proven infeasible from the store.
    pub infeasible_shortcuts: u64,
    /// Stored relaxations examined.
    pub relaxations_examined: u64,
    /// Sweep iterations per level.
    pub per_level_iterations: BTreeMap<usize, u64>,
    /// Wall-clock milliseconds for the solve.
    pub wall_time_ms: u64,
}

impl RunReport {
    fn new(
        instance: &str,
        algorithm: Algorithm,
        backend: Backend,
        nd: &NDSet,
        stats: &SolveStats,
        wall_time_ms: u64,
    ) -> Self {
        RunReport {
            instance: instance.to_string(),
            algorithm: algorithm.name().to_string(),
            backend: backend.to_string(),
            nd_size: nd.len(),
            ip_count: stats.ip_count,
            raw_scalar_solves: stats.raw_scalar_solves,
            cache_reuses: stats.cache_reuses,
            infeasible_shortcuts: stats.infeasible_shortcuts,
            relaxations_examined: stats.relaxations_examined,
            per_level_iterations: stats.per_level_iterations.clone(),
            wall_time_ms,
        }
    }
}

#[derive(Debug)]
enum CliError {
    /// Malformed input content: exit 2.
    Usage(String),
    /// Solver resource refusal: exit 3.
    Resource(String),
    /// Oracle budget refusal: exit 4.
    Budget(String),
    /// Verification mismatch or environment failure: exit 1.
    Failure(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Failure(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Resource(_) => 3,
            CliError::Budget(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m)
            | CliError::Resource(m)
            | CliError::Budget(m)
            | CliError::Failure(m) => m,
        }
    }
}

impl From<ParseError> for CliError {
    fn from(e: ParseError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<SolveError> for CliError {
    fn from(e: SolveError) -> Self {
        CliError::Resource(e.to_string())
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> Self {
        CliError::Budget(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Failure(e.to_string())
    }
}

/// Parses arguments, dispatches, and maps failures to exit codes.
pub fn main_entry() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}

fn dispatch(command: Command) -> Result<(), CliError> {
    match command {
        Command::Solve(args) => cmd_solve(args),
        Command::Compare(args) => cmd_compare(args),
        Command::Gen(args) => cmd_gen(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Bench(args) => cmd_bench(args),
    }
}

fn read_problem(path: &Path) -> Result<Problem, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Failure(format!("{}: {e}", path.display())))?;
    Ok(parse_problem(&text)?)
}

fn write_text(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Failure(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cmd_solve(args: SolveArgs) -> Result<(), CliError> {
    let p = read_problem(&args.input)?;
    let backend = args.backend.resolve(&p);
    let start = Instant::now();
    let (nd, stats) = args.algorithm.run(&p, backend)?;
    let wall_time_ms = start.elapsed().as_millis() as u64;
    write_text(args.output.as_deref(), &write_nd(&nd, p.num_objectives()))?;
    if let Some(stats_path) = &args.stats {
        let report = RunReport::new(
            &args.input.display().to_string(),
            args.algorithm,
            backend,
            &nd,
            &stats,
            wall_time_ms,
        );
        let json = serde_json::to_string_pretty(&report)
            .map_err(|e| CliError::Failure(e.to_string()))?;
        std::fs::write(stats_path, json + "\n")
            .map_err(|e| CliError::Failure(format!("{}: {e}", stats_path.display())))?;
    }
    Ok(())
}

fn cmd_compare(args: CompareArgs) -> Result<(), CliError> {
    let p = read_problem(&args.input)?;
    let backend = args.backend.resolve(&p);
    let (nd_basic, stats_basic) = Algorithm::Basic.run(&p, backend)?;
    let (nd_improved, stats_improved) = Algorithm::Improved.run(&p, backend)?;
    if nd_basic != nd_improved {
        return Err(CliError::Failure(
            "algorithms disagree on the nondominated set".to_string(),
        ));
    }
    println!("{}", compare_line(&args.input, &nd_basic, &stats_basic, &stats_improved));
    Ok(())
}

fn compare_line(
    input: &Path,
    nd: &NDSet,
    basic: &SolveStats,
    improved: &SolveStats,
) -> String {
    let ratio = improved.ip_count as f64 / basic.ip_count as f64;
    let ip_per_nd = if nd.is_empty() {
        "inf".to_string()
    } else {
        format!("{:.3}", improved.ip_count as f64 / nd.len() as f64)
    };
    format!(
        "instance={} nd={} ip_basic={} ip_improved={} ratio={:.3} ip_per_nd={} reuses={} infeasible_shortcuts={}",
        input.display(),
        nd.len(),
        basic.ip_count,
        improved.ip_count,
        ratio,
        ip_per_nd,
        improved.cache_reuses,
        improved.infeasible_shortcuts,
    )
}

fn cmd_gen(args: GenArgs) -> Result<(), CliError> {
    let cfg = GeneratorConfig {
        cols: args.cols,
        rows: args.rows,
        objectives: args.objectives,
        coeff_max: args.coeff_max,
        seed: args.seed,
    };
    validate_config(&cfg)?;
    let p = generate_random(&cfg).map_err(|e| CliError::Usage(e.to_string()))?;
    write_text(args.output.as_deref(), &write_problem(&p))
}

fn validate_config(cfg: &GeneratorConfig) -> Result<(), CliError> {
    if cfg.cols < 1 || cfg.rows < 1 || cfg.objectives < 1 {
        return Err(CliError::Usage(
            "cols, rows, and objectives must be at least 1".to_string(),
        ));
    }
    if cfg.coeff_max < 1 {
        return Err(CliError::Usage("coeff-max must be at least 1".to_string()));
    }
    Ok(())
}

fn cmd_verify(args: VerifyArgs) -> Result<(), CliError> {
    let p = read_problem(&args.input)?;
    let backend = args.backend.resolve(&p);
    let oracle = brute_force_nd(&p, args.budget)?;
    let (nd_basic, _) = Algorithm::Basic.run(&p, backend)?;
    let (nd_improved, _) = Algorithm::Improved.run(&p, backend)?;

    let mut mismatches = Vec::new();
    describe_diff("basic", &nd_basic, &oracle.nd, &mut mismatches);
    describe_diff("improved", &nd_improved, &oracle.nd, &mut mismatches);
    if mismatches.is_empty() {
        println!(
            "verified: {} nondominated vectors, {} feasible points examined",
            oracle.nd.len(),
            oracle.feasible_points_enumerated
        );
        Ok(())
    } else {
        Err(CliError::Failure(mismatches.join("; ")))
    }
}

fn describe_diff(name: &str, got: &NDSet, want: &NDSet, out: &mut Vec<String>) {
    if got == want {
        return;
    }
    for v in got.iter() {
        if !want.contains(v) {
            out.push(format!("{name} reports ({v}) which the oracle does not"));
            return;
        }
    }
    for v in want.iter() {
        if !got.contains(v) {
            out.push(format!("{name} misses the oracle vector ({v})"));
            return;
        }
    }
}

/// One suite line: a generator setting and an inclusive seed range.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
struct SuiteSetting {
    cols: usize,
    rows: usize,
    objectives: usize,
    coeff_max: i64,
    seed_first: u64,
    seed_last: u64,
}

impl SuiteSetting {
    fn label(&self) -> String {
        format!(
            "{}x{} k={} cmax={}",
            self.cols, self.rows, self.objectives, self.coeff_max
        )
    }
}

fn parse_suite(text: &str) -> Result<Vec<SuiteSetting>, CliError> {
    let mut settings = Vec::new();
    for (index, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 6 {
            return Err(CliError::Usage(format!(
                "suite line {}: expected 6 fields `cols rows objectives coeff_max seed_first seed_last`, found {}",
                index + 1,
                fields.len()
            )));
        }
        let parse = |what: &str, s: &str| -> Result<u64, CliError> {
            s.parse::<u64>().map_err(|_| {
                CliError::Usage(format!("suite line {}: bad {what} {s:?}", index + 1))
            })
        };
        let setting = SuiteSetting {
            cols: parse("cols", fields[0])? as usize,
            rows: parse("rows", fields[1])? as usize,
            objectives: parse("objectives", fields[2])? as usize,
            coeff_max: parse("coeff_max", fields[3])? as i64,
            seed_first: parse("seed_first", fields[4])?,
            seed_last: parse("seed_last", fields[5])?,
        };
        if setting.seed_first > setting.seed_last {
            return Err(CliError::Usage(format!(
                "suite line {}: seed range is empty",
                index + 1
            )));
        }
        validate_config(&GeneratorConfig {
            cols: setting.cols,
            rows: setting.rows,
            objectives: setting.objectives,
            coeff_max: setting.coeff_max,
            seed: setting.seed_first,
        })?;
        settings.push(setting);
    }
    Ok(settings)
}

/// One bench measurement: a setting, a seed, and both algorithms' stats.
struct BenchCell {
    setting: usize,
    seed: u64,
    nd_size: usize,
    basic: SolveStats,
    improved: SolveStats,
    wall_time_ms: u64,
}

fn cmd_bench(args: BenchArgs) -> Result<(), CliError> {
    let text = std::fs::read_to_string(&args.suite)
        .map_err(|e| CliError::Failure(format!("{}: {e}", args.suite.display())))?;
    let settings = parse_suite(&text)?;
    std::fs::create_dir_all(&args.out)
        .map_err(|e| CliError::Failure(format!("{}: {e}", args.out.display())))?;

    let mut work: Vec<(usize, u64)> = Vec::new();
    for (i, s) in settings.iter().enumerate() {
        for seed in s.seed_first..=s.seed_last {
            work.push((i, seed));
        }
    }

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(bench_threads(work.len()))
        .build()
        .map_err(|e| CliError::Failure(e.to_string()))?;
    let backend_opt = args.backend;
    let cells: Result<Vec<BenchCell>, CliError> = pool.install(|| {
        work.par_iter()
            .map(|&(setting, seed)| run_cell(&settings[setting], setting, seed, backend_opt))
            .collect()
    });
    let mut cells = cells?;
    cells.sort_by_key(|c| (c.setting, c.seed));

    let csv = cells_csv(&settings, &cells);
    let csv_path = args.out.join("cells.csv");
    std::fs::write(&csv_path, csv)
        .map_err(|e| CliError::Failure(format!("{}: {e}", csv_path.display())))?;

    let table = summary_table(&settings, &cells);
    let summary_path = args.out.join("summary.txt");
    std::fs::write(&summary_path, &table)
        .map_err(|e| CliError::Failure(format!("{}: {e}", summary_path.display())))?;
    print!("{table}");
    Ok(())
}

fn bench_threads(cells: usize) -> usize {
    let configured = std::env::var("MOIPND_THREADS")
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
        .filter(|&n| n >= 1);
    let available = std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1);
    configured.unwrap_or(available).min(cells.max(1))
}

fn run_cell(
    setting: &SuiteSetting,
    index: usize,
    seed: u64,
    backend_opt: BackendOpt,
) -> Result<BenchCell, CliError> {
    let p = generate_random(&GeneratorConfig {
        cols: setting.cols,
        rows: setting.rows,
        objectives: setting.objectives,
        coeff_max: setting.coeff_max,
        seed,
    })
    .map_err(|e| CliError::Usage(e.to_string()))?;
    let backend = backend_opt.resolve(&p);
    let start = Instant::now();
    let (nd_basic, basic) = engine::solve_basic(&p, backend)?;
    let (nd_improved, improved) = engine::solve_improved(&p, backend)?;
    let wall_time_ms = start.elapsed().as_millis() as u64;
    if nd_basic != nd_improved {
        return Err(CliError::Failure(format!(
            "algorithms disagree on setting {} seed {seed}",
            setting.label()
        )));
    }
    Ok(BenchCell {
        setting: index,
        seed,
        nd_size: nd_basic.len(),
        basic,
        improved,
        wall_time_ms,
    })
}

fn cells_csv(settings: &[SuiteSetting], cells: &[BenchCell]) -> String {
    let mut out = String::from(
        "setting,cols,rows,objectives,coeff_max,seed,nd,ip_basic,ip_improved,ratio,reuses,infeasible_shortcuts,wall_time_ms\n",
    );
    for c in cells {
        let s = &settings[c.setting];
        let ratio = c.improved.ip_count as f64 / c.basic.ip_count as f64;
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{:.6},{},{},{}",
            c.setting,
            s.cols,
            s.rows,
            s.objectives,
            s.coeff_max,
            c.seed,
            c.nd_size,
            c.basic.ip_count,
            c.improved.ip_count,
            ratio,
            c.improved.cache_reuses,
            c.improved.infeasible_shortcuts,
            c.wall_time_ms,
        )
        .expect("writing to a String cannot fail");
    }
    out
}

fn summary_table(settings: &[SuiteSetting], cells: &[BenchCell]) -> String {
    let mut out = String::new();
    writeln!(
        out,
        "{:<24} {:>5} {:>8} {:>10} {:>12} {:>7} {:>9}",
        "setting", "runs", "mean_nd", "mean_ip_1", "mean_ip_2", "ratio", "ip2_per_nd"
    )
    .expect("writing to a String cannot fail");
    for (i, s) in settings.iter().enumerate() {
        let mine: Vec<&BenchCell> = cells.iter().filter(|c| c.setting == i).collect();
        if mine.is_empty() {
            continue;
        }
        let n = mine.len() as f64;
        let mean_nd = mine.iter().map(|c| c.nd_size as f64).sum::<f64>() / n;
        let mean_basic = mine.iter().map(|c| c.basic.ip_count as f64).sum::<f64>() / n;
        let mean_improved = mine.iter().map(|c| c.improved.ip_count as f64).sum::<f64>() / n;
        let mean_ratio = mine
            .iter()
            .map(|c| c.improved.ip_count as f64 / c.basic.ip_count as f64)
            .sum::<f64>()
            / n;
        let mean_ip_per_nd = mine
            .iter()
            .filter(|c| c.nd_size > 0)
            .map(|c| c.improved.ip_count as f64 / c.nd_size as f64)
            .sum::<f64>()
            / mine.iter().filter(|c| c.nd_size > 0).count().max(1) as f64;
        writeln!(
            out,
            "{:<24} {:>5} {:>8.2} {:>10.2} {:>12.2} {:>7.3} {:>9.3}",
            s.label(),
            mine.len(),
            mean_nd,
            mean_basic,
            mean_improved,
            mean_ratio,
            mean_ip_per_nd,
        )
        .expect("writing to a String cannot fail");
    }
    out
}
