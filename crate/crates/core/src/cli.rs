//! The `fuchsian` command line.
//!
//! Exit codes: 0 on success, 1 on bad input, 2 when a sampled configuration
//! numerically violates an inequality that should hold.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;
use thiserror::Error;

use crate::freegroup::{build_schottky, builtin, random_disks, FreeGroupError, GroupSpec, Letter};
use crate::hyperbolic::Point;
use crate::inequality::{
    bound_bk, defect_report, evaluate_defect, log_2k_minus_1, DefectReport, InequalityError,
    THEOREM_SLACK,
};
use crate::measure::{
    decompose_by_first_letter, decomposition_identity_residual, mass_chain_bound, BoundaryMeasure,
    MeasureError, PoincareApprox, DEFAULT_BINS, DEFAULT_EXPONENT,
};
use crate::optimizer::{
    maximize_angular_sum, minimize_max_displacement, Method, OptimizerConfig, OptimizerError,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_VIOLATION: i32 = 2;

/// Largest radius of a random basepoint around `i`.
const BASEPOINT_RADIUS: f64 = 4.0;
/// Largest angular radius of a random sweep disk.
const SWEEP_MAX_RADIUS: f64 = 1.2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Group(#[from] FreeGroupError),
    #[error("{0}")]
    Measure(#[from] MeasureError),
    #[error("{0}")]
    Optimizer(#[from] OptimizerError),
    #[error("{0}")]
    Inequality(#[from] InequalityError),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "fuchsian", version, about = "Displacement inequalities for free Fuchsian groups")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate the defect of one group at given or random basepoints.
    Verify(VerifyArgs),
    /// Evaluate the defect over random Schottky groups and basepoints.
    Sweep(SweepArgs),
    /// Minimize the largest generator displacement over basepoints.
    Optimize(OptimizeArgs),
    /// Maximize the angular sum over basepoints.
    Sharpness(OptimizeArgs),
    /// Truncated Patterson–Sullivan measure and its first-letter decomposition.
    Measure(MeasureArgs),
    /// Table of B(k) against log(2k - 1).
    Bounds(BoundsArgs),
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct OutputArgs {
    /// Output file; stdout when omitted. A run manifest is written next to it.
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct VerifyArgs {
    /// GroupSpec JSON file or builtin name (`gamma2`, `schottky:k=3,r=0.2[,seed=5]`).
    #[arg(long)]
    pub input: String,
    /// Single basepoint `x+yi`; random basepoints are used when omitted.
    #[arg(long)]
    #[serde(serialize_with = "serialize_display")]
    pub z: Option<Point>,
    #[arg(long, default_value_t = 1)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SweepArgs {
    /// Use this group for every trial instead of random Schottky groups.
    #[arg(long)]
    pub input: Option<String>,
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Inclusive rank range `a..b` for random groups.
    #[arg(long, default_value = "2..4")]
    pub k_range: String,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct OptimizeArgs {
    #[arg(long)]
    pub input: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    #[arg(long, default_value_t = 2000)]
    pub max_iters: usize,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct MeasureArgs {
    #[arg(long)]
    pub input: String,
    /// Basepoint `x+yi`, default `i`.
    #[arg(long)]
    #[serde(serialize_with = "serialize_display")]
    pub z: Option<Point>,
    #[arg(long, default_value_t = 8)]
    pub max_len: usize,
    #[arg(long, default_value_t = DEFAULT_EXPONENT)]
    pub s: f64,
    #[arg(long, default_value_t = DEFAULT_BINS)]
    pub bins: usize,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct BoundsArgs {
    /// Inclusive range `a..b`.
    #[arg(long, default_value = "2..10")]
    pub k_range: String,
    #[command(flatten)]
    pub out: OutputArgs,
}

fn serialize_display<S: serde::Serializer>(z: &Option<Point>, s: S) -> Result<S::Ok, S::Error> {
    match z {
        Some(p) => s.serialize_str(&p.to_string()),
        None => s.serialize_none(),
    }
}

/// What a command produced.
struct Outcome {
    body: String,
    violations: usize,
    summary: String,
}

/// Reads a GroupSpec from a JSON file or parses a builtin name.
pub fn load_spec(input: &str) -> Result<GroupSpec, CliError> {
    let path = Path::new(input);
    if path.is_file() {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        return Ok(GroupSpec::from_json(&text)?);
    }
    match builtin(input) {
        Err(FreeGroupError::UnknownBuiltin(_)) if input.ends_with(".json") || input.contains('/') => {
            Err(CliError::Io {
                path: path.to_path_buf(),
                source: std::io::Error::new(std::io::ErrorKind::NotFound, "no such file"),
            })
        }
        other => Ok(other?),
    }
}

/// Parses an inclusive range `a..b` (or a single integer) with `a >= 2`.
pub fn parse_k_range(text: &str) -> Result<(usize, usize), CliError> {
    let bad = || CliError::InvalidArgument(format!("k range `{text}` must look like `2..8`"));
    let (lo, hi) = match text.split_once("..") {
        Some((a, b)) => (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?),
        None => {
            let k = text.trim().parse().map_err(|_| bad())?;
            (k, k)
        }
    };
    if lo < 2 || hi < lo {
        return Err(CliError::InvalidArgument(format!("k range `{text}` needs 2 <= a <= b")));
    }
    Ok((lo, hi))
}

fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

fn random_basepoint(rng: &mut impl Rng) -> Point {
    Point::from_polar(
        Point::I,
        rng.gen_range(0.0..BASEPOINT_RADIUS),
        rng.gen_range(0.0..std::f64::consts::TAU),
    )
}

fn reports_body(reports: &[DefectReport], format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(reports).expect("reports serialize") + "\n",
        Format::Csv => {
            let k_max = reports.iter().map(|r| r.k).max().unwrap_or(2);
            let mut out = DefectReport::csv_header(k_max);
            out.push('\n');
            for r in reports {
                let mut row = r.csv_row();
                if r.k < k_max {
                    // pad the displacement columns of smaller ranks
                    let cols: Vec<&str> = row.split(',').collect();
                    let (head, tail) = cols.split_at(3 + r.k);
                    let mut padded: Vec<&str> = head.to_vec();
                    padded.extend(std::iter::repeat("").take(k_max - r.k));
                    padded.extend_from_slice(tail);
                    row = padded.join(",");
                }
                out.push_str(&row);
                out.push('\n');
            }
            out
        }
    }
}

fn count_violations(reports: &[DefectReport]) -> usize {
    reports
        .iter()
        .filter(|r| !(r.satisfies_main && r.satisfies_accs))
        .count()
}

fn defect_summary(reports: &[DefectReport], violations: usize) -> String {
    let min = reports.iter().map(|r| r.defect).fold(f64::INFINITY, f64::min);
    format!("{} configurations, {violations} violations, smallest defect {min:e}", reports.len())
}

fn cmd_verify(args: &VerifyArgs) -> Result<Outcome, CliError> {
    if args.trials == 0 {
        return Err(CliError::InvalidArgument("--trials must be at least 1".into()));
    }
    let spec = load_spec(&args.input)?;
    let certified = spec.is_certified();
    let points: Vec<Point> = match args.z {
        Some(z) => vec![z],
        None => (0..args.trials)
            .map(|t| random_basepoint(&mut trial_rng(args.seed, t)))
            .collect(),
    };
    let reports: Vec<DefectReport> = points
        .par_iter()
        .map(|&z| match defect_report(&spec, z) {
            Ok(r) => r,
            Err(InequalityError::UncertifiedGroup { report }) => *report,
            Err(e) => unreachable!("defect_report only fails on certification: {e}"),
        })
        .collect();
    let violations = count_violations(&reports);
    let mut summary = defect_summary(&reports, violations);
    if !certified {
        summary.push_str(" (advisory: group is not certified free)");
    }
    Ok(Outcome {
        body: reports_body(&reports, args.out.format.unwrap_or(Format::Csv)),
        violations,
        summary,
    })
}

fn cmd_sweep(args: &SweepArgs) -> Result<Outcome, CliError> {
    if args.trials == 0 {
        return Err(CliError::InvalidArgument("--trials must be at least 1".into()));
    }
    let fixed = args.input.as_deref().map(load_spec).transpose()?;
    let (lo, hi) = parse_k_range(&args.k_range)?;
    let reports: Vec<DefectReport> = (0..args.trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(args.seed, t);
            let spec = match &fixed {
                Some(spec) => spec.clone(),
                None => {
                    let k = rng.gen_range(lo..=hi);
                    build_schottky(&random_disks(k, SWEEP_MAX_RADIUS, &mut rng))?
                }
            };
            let z = random_basepoint(&mut rng);
            let mut report = evaluate_defect(spec.generators(), z);
            report.advisory = !spec.is_certified();
            Ok(report)
        })
        .collect::<Result<_, CliError>>()?;
    let violations = count_violations(&reports);
    Ok(Outcome {
        body: reports_body(&reports, args.out.format.unwrap_or(Format::Csv)),
        violations,
        summary: defect_summary(&reports, violations),
    })
}

fn optimizer_config(args: &OptimizeArgs) -> OptimizerConfig {
    OptimizerConfig {
        method: Method::SimplexSearch,
        max_iters: args.max_iters,
        tol: args.tol,
        seed: args.seed,
    }
}

fn cmd_optimize(args: &OptimizeArgs, sharpness: bool) -> Result<Outcome, CliError> {
    let spec = load_spec(&args.input)?;
    let cfg = optimizer_config(args);
    let opt = if sharpness {
        maximize_angular_sum(&spec, &cfg)?
    } else {
        minimize_max_displacement(&spec, &cfg)?
    };
    let (violated, what) = if sharpness {
        (opt.value > std::f64::consts::FRAC_PI_2 + THEOREM_SLACK, "angular sum")
    } else {
        (opt.value < bound_bk(spec.k()) - 1e-6, "min-max displacement")
    };
    let mut summary = format!("{what} {} at {} after {} iterations", opt.value, opt.z_star, opt.iterations);
    if !opt.converged {
        summary.push_str(" (not converged)");
    }
    let body = match args.out.format.unwrap_or(Format::Json) {
        Format::Json => opt.to_json() + "\n",
        Format::Csv => opt.history_csv(),
    };
    Ok(Outcome {
        body,
        violations: usize::from(violated),
        summary,
    })
}

#[derive(Serialize)]
struct LetterSummary {
    letter: String,
    total: f64,
    residual: f64,
}

fn cmd_measure(args: &MeasureArgs) -> Result<Outcome, CliError> {
    let spec = load_spec(&args.input)?;
    let z0 = args.z.unwrap_or(Point::I);
    let approx = PoincareApprox::new(&spec, z0, args.max_len, args.s)?;
    let full = approx.measure(args.bins)?;
    let parts = decompose_by_first_letter(&approx, args.bins)?;
    let letters: Vec<LetterSummary> = Letter::alphabet(spec.k())
        .map(|l| {
            Ok(LetterSummary {
                letter: l.to_string(),
                total: parts[l.index()].total(),
                residual: decomposition_identity_residual(&approx, l, args.bins)?,
            })
        })
        .collect::<Result<_, MeasureError>>()?;
    let totals: Vec<f64> = parts.iter().map(BoundaryMeasure::total).collect();
    let chain = mass_chain_bound(&totals)?;
    let max_residual = letters.iter().map(|l| l.residual).fold(0.0, f64::max);
    let body = match args.out.format.unwrap_or(Format::Json) {
        Format::Csv => full.to_csv(),
        Format::Json => {
            let doc = json!({
                "basepoint": z0,
                "max_len": args.max_len,
                "s": args.s,
                "atoms": approx.atom_count(),
                "measure": full,
                "tv_from_uniform": full.total_variation_from_uniform(),
                "first_letters": letters,
                "chain_bounds": chain,
            });
            serde_json::to_string_pretty(&doc).expect("measure summary serializes") + "\n"
        }
    };
    Ok(Outcome {
        body,
        violations: 0,
        summary: format!(
            "{} atoms, total {}, largest decomposition residual {max_residual:e}",
            approx.atom_count(),
            full.total()
        ),
    })
}

#[derive(Serialize)]
struct BoundRow {
    k: usize,
    #[serde(rename = "B_k")]
    b_k: f64,
    log_2k_minus_1: f64,
    ratio: f64,
}

fn cmd_bounds(args: &BoundsArgs) -> Result<Outcome, CliError> {
    let (lo, hi) = parse_k_range(&args.k_range)?;
    let rows: Vec<BoundRow> = (lo..=hi)
        .map(|k| {
            let b_k = bound_bk(k);
            let l = log_2k_minus_1(k);
            BoundRow {
                k,
                b_k,
                log_2k_minus_1: l,
                ratio: b_k / l,
            }
        })
        .collect();
    let violations = rows.iter().filter(|r| r.b_k <= r.log_2k_minus_1).count();
    let body = match args.out.format.unwrap_or(Format::Csv) {
        Format::Json => serde_json::to_string_pretty(&rows).expect("rows serialize") + "\n",
        Format::Csv => {
            let mut out = String::from("k,B_k,log_2k_minus_1,ratio\n");
            for r in &rows {
                out.push_str(&format!("{},{},{},{}\n", r.k, r.b_k, r.log_2k_minus_1, r.ratio));
            }
            out
        }
    };
    Ok(Outcome {
        body,
        violations,
        summary: format!("{} rows", rows.len()),
    })
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Verify(_) => "verify",
            Command::Sweep(_) => "sweep",
            Command::Optimize(_) => "optimize",
            Command::Sharpness(_) => "sharpness",
            Command::Measure(_) => "measure",
            Command::Bounds(_) => "bounds",
        }
    }

    fn output(&self) -> &OutputArgs {
        match self {
            Command::Verify(a) => &a.out,
            Command::Sweep(a) => &a.out,
            Command::Optimize(a) | Command::Sharpness(a) => &a.out,
            Command::Measure(a) => &a.out,
            Command::Bounds(a) => &a.out,
        }
    }

    fn args_json(&self) -> serde_json::Value {
        let v = match self {
            Command::Verify(a) => serde_json::to_value(a),
            Command::Sweep(a) => serde_json::to_value(a),
            Command::Optimize(a) | Command::Sharpness(a) => serde_json::to_value(a),
            Command::Measure(a) => serde_json::to_value(a),
            Command::Bounds(a) => serde_json::to_value(a),
        };
        v.expect("arguments serialize")
    }

    fn execute(&self) -> Result<Outcome, CliError> {
        match self {
            Command::Verify(a) => cmd_verify(a),
            Command::Sweep(a) => cmd_sweep(a),
            Command::Optimize(a) => cmd_optimize(a, false),
            Command::Sharpness(a) => cmd_optimize(a, true),
            Command::Measure(a) => cmd_measure(a),
            Command::Bounds(a) => cmd_bounds(a),
        }
    }
}

/// Path of the run manifest written next to `output`.
pub fn manifest_path(output: &Path) -> PathBuf {
    let mut name = output.as_os_str().to_owned();
    name.push(".manifest.json");
    PathBuf::from(name)
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Runs a parsed command, writing the artifact to `--output` or `stdout`.
pub fn run(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let started = Instant::now();
    let outcome = match cli.command.execute() {
        Ok(o) => o,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return EXIT_INPUT;
        }
    };
    let code = if outcome.violations > 0 { EXIT_VIOLATION } else { EXIT_OK };
    let out = cli.command.output();
    let written = match &out.output {
        Some(path) => write_file(path, &outcome.body).and_then(|_| {
            let manifest = json!({
                "command": cli.command.name(),
                "arguments": cli.command.args_json(),
                "version": env!("CARGO_PKG_VERSION"),
                "output": path,
                "exit_code": code,
                "violations": outcome.violations,
                "summary": outcome.summary,
                "wall_time_seconds": started.elapsed().as_secs_f64(),
            });
            write_file(
                &manifest_path(path),
                &(serde_json::to_string_pretty(&manifest).expect("manifest serializes") + "\n"),
            )
        }),
        None => stdout
            .write_all(outcome.body.as_bytes())
            .map_err(|source| CliError::Io {
                path: PathBuf::from("<stdout>"),
                source,
            }),
    };
    if let Err(e) = written {
        let _ = writeln!(stderr, "error: {e}");
        return EXIT_INPUT;
    }
    let _ = writeln!(stderr, "{}: {}", cli.command.name(), outcome.summary);
    if code == EXIT_VIOLATION {
        let _ = writeln!(stderr, "VIOLATION: {} configurations break the inequality", outcome.violations);
    }
    code
}

/// Parses `args` (program name first) and runs. Usage errors exit with 1.
pub fn main_with_args<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli, stdout, stderr),
        Err(e) => {
            use clap::error::ErrorKind;
            let rendered = e.render().to_string();
            match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{rendered}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(stderr, "{rendered}");
                    EXIT_INPUT
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut full = vec!["fuchsian"];
        full.extend_from_slice(args);
        let code = main_with_args(full, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn k_ranges() {
        assert_eq!(parse_k_range("2..4").unwrap(), (2, 4));
        assert_eq!(parse_k_range("3").unwrap(), (3, 3));
        assert!(parse_k_range("1..4").is_err());
        assert!(parse_k_range("5..4").is_err());
        assert!(parse_k_range("a..b").is_err());
    }

    #[test]
    fn verify_extremal_row() {
        let (code, out, _) = run_args(&["verify", "--input", "gamma2", "--z", "0+1i"]);
        assert_eq!(code, EXIT_OK);
        let row: Vec<&str> = out.lines().nth(1).unwrap().split(',').collect();
        let defect: f64 = row[6].parse().unwrap();
        assert!(defect.abs() < 1e-12);
    }

    #[test]
    fn usage_errors_exit_one() {
        assert_eq!(run_args(&["verify"]).0, EXIT_INPUT);
        assert_eq!(run_args(&["nonsense"]).0, EXIT_INPUT);
        assert_eq!(run_args(&["verify", "--input", "gamma2", "--z", "1-2i"]).0, EXIT_INPUT);
        assert_eq!(run_args(&["verify", "--input", "nope"]).0, EXIT_INPUT);
        assert_eq!(run_args(&["bounds", "--k-range", "1..3"]).0, EXIT_INPUT);
        assert_eq!(run_args(&["--help"]).0, EXIT_OK);
    }

    #[test]
    fn bounds_rows() {
        let (code, out, _) = run_args(&["bounds", "--k-range", "2..3"]);
        assert_eq!(code, EXIT_OK);
        let lines: Vec<&str> = out.lines().collect();
        assert_eq!(lines[0], "k,B_k,log_2k_minus_1,ratio");
        assert!(lines[1].starts_with("2,1.76274717403908"));
        assert!(lines[2].starts_with("3,2.63391579384963"));
    }
}
