mod grid;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use polydisc_core::asymptotic::{lambda0, Lambda0Result, McBudget, Normalization};
use polydisc_core::census::{run_census, threshold_for_delta, CensusRow, CensusSpec, DEFAULT_WORK_BUDGET};
use polydisc_core::checks::{run_check, CheckBudget, CheckOutcome, CHECK_NAMES};
use polydisc_core::harness::{theorem1_plot_rows, theorem1_report, theorem2_plot_rows, theorem2_report, DensityPoint};
use polydisc_core::io::{self, Config, VolumeBody, VolumeRow};
use polydisc_core::volume::{estimate_all, VolumeSpec};
use polydisc_core::{Error, HeightKind, Result};
use serde::Serialize;

#[derive(Parser, Debug)]
#[command(name = "polydisc", version, about = "Counts integer polynomials by discriminant and estimates the limiting densities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact counts N_s(Q, X) of integer polynomials of degree n and height ≤ Q with |D| ≤ X.
    Census(CensusArgs),
    /// Monte Carlo estimates of the limit density f_s(δ).
    Volume(VolumeArgs),
    /// The constant λ₀ in f_0(δ) ~ λ₀ δ^{(n+2)/(2n)}.
    Lambda0(Lambda0Args),
    /// Property checks with pass/fail verdicts.
    Check(CheckArgs),
    /// Reports joining census, volume and λ₀ outputs.
    #[command(subcommand)]
    Report(ReportCommand),
}

#[derive(Args, Debug)]
struct CensusArgs {
    /// Degree n (dimensionless, ≥ 2).
    #[arg(long)]
    n: usize,
    /// Height bound Q (integer, ≥ 1).
    #[arg(long = "Q")]
    q: u64,
    /// Height function: naive, length or mahler.
    #[arg(long, default_value = "naive")]
    height: HeightKind,
    /// Discriminant thresholds X as comma-separated decimal integers (absolute units of |D|).
    #[arg(long = "X")]
    x: Option<String>,
    /// Normalized thresholds δ = X / Q^{2n-2} (dimensionless), as a comma list or geometric:<lo>:<hi>:<count>.
    #[arg(long)]
    delta: Option<String>,
    /// Worker threads (count).
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// Maximum estimated work (discriminant evaluations).
    #[arg(long, default_value_t = DEFAULT_WORK_BUDGET)]
    work_budget: f64,
    /// Enumerate every polynomial instead of one per sign/reflection class (flag).
    #[arg(long)]
    no_symmetry: bool,
    /// Output CSV path; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct VolumeArgs {
    /// Degree n (dimensionless, ≥ 2).
    #[arg(long)]
    n: usize,
    /// Signature s (number of complex-conjugate root pairs); all signatures when absent.
    #[arg(long)]
    s: Option<u32>,
    /// Height function: naive, length or mahler.
    #[arg(long, default_value = "naive")]
    height: HeightKind,
    /// Thresholds δ (dimensionless) as a comma list or geometric:<lo>:<hi>:<count>.
    #[arg(long)]
    delta: String,
    /// Sample count (points drawn from the unit ball, or the enclosing box for mahler).
    #[arg(long, default_value_t = 1_000_000)]
    samples: u64,
    /// Random seed (integer).
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Worker threads (count); results depend on it.
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// Output format: csv or json.
    #[arg(long, default_value = "csv")]
    format: Format,
    /// Output path; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, clap::ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args, Debug)]
struct Lambda0Args {
    /// Degree n (dimensionless, 2 ≤ n ≤ 12).
    #[arg(long)]
    n: usize,
    /// Height function: naive, length or mahler.
    #[arg(long, default_value = "naive")]
    height: HeightKind,
    /// Lift from one cone to the full space: times-2m, times-m or cone.
    #[arg(long, default_value = "times-2m")]
    normalization: Normalization,
    /// Target relative error of λ₀ (dimensionless fraction).
    #[arg(long, default_value_t = 1e-3)]
    target_rel_err: f64,
    /// Maximum Monte Carlo samples for the singular integral at n ≥ 5 (count).
    #[arg(long, default_value_t = 100_000_000)]
    samples: u64,
    /// Random seed (integer).
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Worker threads (count); results do not depend on it.
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// Output JSON path; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CheckArgs {
    /// Check to run, or `all`.
    #[arg(value_parser = check_name)]
    name: String,
    /// Size of randomized checks (count of polynomials, points or samples).
    #[arg(long, default_value_t = 10_000)]
    samples: u64,
    /// Random seed (integer).
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Worker threads (count).
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// Output JSON path; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn check_name(s: &str) -> std::result::Result<String, String> {
    if s == "all" || CHECK_NAMES.contains(&s) {
        Ok(s.to_string())
    } else {
        Err(format!("expected `all` or one of {}", CHECK_NAMES.join(", ")))
    }
}

#[derive(Subcommand, Debug)]
enum ReportCommand {
    /// |N_s(Q, δQ^{2n-2}) - Q^{n+1} f_s(δ)| / Q^n across Q, with a boundedness verdict.
    Theorem1(Theorem1Args),
    /// Small-δ power law of f_0 against λ₀, and census counts along X = Q^{2n-2-2v}.
    Theorem2(Theorem2Args),
}

#[derive(Args, Debug)]
struct Theorem1Args {
    /// Census CSV files (comma-separated paths), one or more per Q.
    #[arg(long, value_delimiter = ',', required = true)]
    census: Vec<PathBuf>,
    /// Volume output (CSV or .json) holding f_s(δ).
    #[arg(long)]
    volume: PathBuf,
    /// Degree n (dimensionless).
    #[arg(long)]
    n: usize,
    /// Signature s (count of complex-conjugate pairs).
    #[arg(long)]
    s: u32,
    /// Normalized threshold δ (dimensionless); must appear in the volume file.
    #[arg(long)]
    delta: f64,
    /// Height function: naive, length or mahler.
    #[arg(long, default_value = "naive")]
    height: HeightKind,
    /// Bounded when max r over the two largest Q ≤ this multiple of the median r (dimensionless).
    #[arg(long, default_value_t = 3.0)]
    ratio_limit: f64,
    /// Output JSON path; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Plot data path (columns Q, count, predicted, r, r_band).
    #[arg(long)]
    plot: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct Theorem2Args {
    /// λ₀ JSON file from the lambda0 subcommand.
    #[arg(long)]
    lambda0: PathBuf,
    /// Volume output (CSV or .json) with f_0 on a small-δ grid.
    #[arg(long)]
    volume: PathBuf,
    /// Census CSV files (comma-separated paths) for the count comparison.
    #[arg(long, value_delimiter = ',')]
    census: Vec<PathBuf>,
    /// Exponents v (dimensionless) with X = floor(Q^{2n-2-2v}), comma-separated.
    #[arg(long, value_delimiter = ',')]
    v: Vec<f64>,
    /// Output JSON path; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Plot data path (columns δ, f̂, stderr, model).
    #[arg(long)]
    plot: Option<PathBuf>,
}

#[derive(Serialize)]
struct ErrorRecord<'a> {
    error: ErrorBody<'a>,
}

#[derive(Serialize)]
struct ErrorBody<'a> {
    kind: &'a str,
    message: String,
}

fn report_error(kind: &str, message: String) {
    let rec = ErrorRecord { error: ErrorBody { kind, message } };
    eprintln!("{}", serde_json::to_string(&rec).expect("error record serializes"));
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            report_error("usage", e.to_string().trim_end().to_string());
            return ExitCode::from(2);
        }
    };
    match dispatch(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            report_error(e.kind(), e.to_string());
            ExitCode::from(2)
        }
    }
}

/// Runs a subcommand; `Ok(false)` means it completed but a check failed.
fn dispatch(cmd: Command) -> Result<bool> {
    match cmd {
        Command::Census(a) => census(a).map(|_| true),
        Command::Volume(a) => volume(a).map(|_| true),
        Command::Lambda0(a) => lambda0_cmd(a).map(|_| true),
        Command::Check(a) => check(a),
        Command::Report(ReportCommand::Theorem1(a)) => theorem1(a).map(|_| true),
        Command::Report(ReportCommand::Theorem2(a)) => theorem2(a).map(|_| true),
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => io::write_atomic(p, text.as_bytes()),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn positive(name: &str, v: u64) -> Result<()> {
    if v == 0 {
        return Err(Error::InvalidInput(format!("--{name} must be positive")));
    }
    Ok(())
}

fn config(command: &str, pairs: &[(&str, String)]) -> Config {
    let mut c = Config::new();
    c.insert("command".into(), command.into());
    for (k, v) in pairs {
        c.insert(k.to_string(), v.clone());
    }
    c
}

fn path_list(paths: &[PathBuf]) -> String {
    paths.iter().map(|p| p.display().to_string()).collect::<Vec<_>>().join(";")
}

fn census(a: CensusArgs) -> Result<()> {
    positive("Q", a.q)?;
    positive("workers", a.workers as u64)?;
    let mut xs = match &a.x {
        Some(s) => grid::parse_thresholds(s)?,
        None => Vec::new(),
    };
    if let Some(d) = &a.delta {
        for delta in grid::parse_real_grid(d)? {
            xs.push(threshold_for_delta(delta, a.q, a.n)?);
        }
    }
    if xs.is_empty() {
        return Err(Error::InvalidInput("give thresholds with --X or --delta".into()));
    }
    xs.sort();
    xs.dedup();
    let spec = CensusSpec::new(a.n, a.q, a.height, xs)?
        .with_workers(a.workers)
        .with_reduce(!a.no_symmetry)
        .with_work_budget(a.work_budget);
    spec.validate()?;
    let cfg = config(
        "census",
        &[
            ("n", a.n.to_string()),
            ("Q", a.q.to_string()),
            ("height", a.height.to_string()),
            ("X", a.x.clone().unwrap_or_default()),
            ("delta", a.delta.clone().unwrap_or_default()),
            ("workers", a.workers.to_string()),
            ("work_budget", format!("{:e}", a.work_budget)),
            ("no_symmetry", a.no_symmetry.to_string()),
        ],
    );
    let table = run_census(&spec)?;
    emit(a.out.as_deref(), &io::census_csv(&table, &cfg))
}

fn volume(a: VolumeArgs) -> Result<()> {
    positive("samples", a.samples)?;
    positive("workers", a.workers as u64)?;
    let deltas = grid::parse_real_grid(&a.delta)?;
    if let Some(s) = a.s {
        if s as usize > a.n / 2 {
            return Err(Error::InvalidInput(format!("signature {s} exceeds n/2 for n = {}", a.n)));
        }
    }
    let cfg = config(
        "volume",
        &[
            ("n", a.n.to_string()),
            ("s", a.s.map(|s| s.to_string()).unwrap_or_else(|| "all".into())),
            ("height", a.height.to_string()),
            ("delta", a.delta.clone()),
            ("samples", a.samples.to_string()),
            ("seed", a.seed.to_string()),
            ("workers", a.workers.to_string()),
        ],
    );
    let spec = VolumeSpec::new(a.n, a.height, a.samples, a.seed).with_workers(a.workers);
    let all = estimate_all(&spec, &deltas)?;
    let estimates: Vec<_> = all.into_iter().flatten().filter(|e| a.s.is_none_or(|s| e.s == s)).collect();
    let text = match a.format {
        Format::Csv => io::volume_csv(&estimates, &cfg),
        Format::Json => io::to_json(&cfg, &VolumeBody { estimates })?,
    };
    emit(a.out.as_deref(), &text)
}

fn lambda0_cmd(a: Lambda0Args) -> Result<()> {
    positive("samples", a.samples)?;
    positive("workers", a.workers as u64)?;
    if !(a.target_rel_err > 0.0 && a.target_rel_err < 1.0) {
        return Err(Error::InvalidInput("--target-rel-err must lie in (0, 1)".into()));
    }
    let cfg = config(
        "lambda0",
        &[
            ("n", a.n.to_string()),
            ("height", a.height.to_string()),
            ("normalization", a.normalization.as_str().to_string()),
            ("target_rel_err", format!("{:e}", a.target_rel_err)),
            ("samples", a.samples.to_string()),
            ("seed", a.seed.to_string()),
            ("workers", a.workers.to_string()),
        ],
    );
    let budget = McBudget::new(a.samples, a.seed).with_workers(a.workers);
    let r = lambda0(a.n, a.height, a.target_rel_err, a.normalization, &budget)?;
    emit(a.out.as_deref(), &io::to_json(&cfg, &r)?)
}

#[derive(Serialize)]
struct CheckBody {
    pass: bool,
    checks: Vec<CheckOutcome>,
}

fn check(a: CheckArgs) -> Result<bool> {
    positive("samples", a.samples)?;
    positive("workers", a.workers as u64)?;
    let cfg = config(
        "check",
        &[
            ("name", a.name.clone()),
            ("samples", a.samples.to_string()),
            ("seed", a.seed.to_string()),
            ("workers", a.workers.to_string()),
        ],
    );
    let names: Vec<&str> = if a.name == "all" { CHECK_NAMES.to_vec() } else { vec![a.name.as_str()] };
    let budget = CheckBudget { samples: a.samples, seed: a.seed, workers: a.workers };
    let checks = names.iter().map(|n| run_check(n, &budget)).collect::<Result<Vec<_>>>()?;
    let pass = checks.iter().all(|c| c.pass);
    emit(a.out.as_deref(), &io::to_json(&cfg, &CheckBody { pass, checks: checks.clone() })?)?;
    if !pass {
        let failed: Vec<&str> = checks.iter().filter(|c| !c.pass).map(|c| c.name.as_str()).collect();
        report_error("check-failed", format!("failed: {}", failed.join(", ")));
    }
    Ok(pass)
}

fn read_census_rows(paths: &[PathBuf]) -> Result<Vec<CensusRow>> {
    let mut rows = Vec::new();
    for p in paths {
        rows.extend(io::read_census_csv(p)?.rows);
    }
    Ok(rows)
}

fn read_volume_rows(path: &Path) -> Result<Vec<VolumeRow>> {
    if path.extension().is_some_and(|e| e == "json") {
        let doc: io::Document<VolumeBody> = io::read_json(path)?;
        Ok(doc.body.estimates.iter().map(VolumeRow::from).collect())
    } else {
        Ok(io::parse_volume_csv(&std::fs::read_to_string(path)?)?.1)
    }
}

fn density(r: &VolumeRow) -> DensityPoint {
    DensityPoint { delta: r.delta, value: r.mean, stderr: r.stderr }
}

fn theorem1(a: Theorem1Args) -> Result<()> {
    if !(a.ratio_limit > 0.0) {
        return Err(Error::InvalidInput("--ratio-limit must be positive".into()));
    }
    let cfg = config(
        "report theorem1",
        &[
            ("census", path_list(&a.census)),
            ("volume", a.volume.display().to_string()),
            ("n", a.n.to_string()),
            ("s", a.s.to_string()),
            ("delta", format!("{:e}", a.delta)),
            ("height", a.height.to_string()),
            ("ratio_limit", a.ratio_limit.to_string()),
        ],
    );
    let rows = read_census_rows(&a.census)?;
    let vol = read_volume_rows(&a.volume)?;
    let f = vol
        .iter()
        .find(|r| r.n == a.n && r.s == a.s && r.height == a.height && r.delta == a.delta)
        .ok_or_else(|| Error::Domain(format!("volume file has no estimate for n = {}, s = {}, δ = {}", a.n, a.s, a.delta)))?;
    let rep = theorem1_report(&rows, a.n, a.s, a.height, &density(f), a.ratio_limit)?;
    if let Some(p) = &a.plot {
        let data = theorem1_plot_rows(&rep);
        io::write_atomic(p, io::plot_data(&["Q", "count", "predicted", "r", "r_band"], data).as_bytes())?;
    }
    emit(a.out.as_deref(), &io::to_json(&cfg, &rep)?)
}

fn theorem2(a: Theorem2Args) -> Result<()> {
    let cfg = config(
        "report theorem2",
        &[
            ("lambda0", a.lambda0.display().to_string()),
            ("volume", a.volume.display().to_string()),
            ("census", path_list(&a.census)),
            ("v", a.v.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(";")),
        ],
    );
    let lam: io::Document<Lambda0Result> = io::read_json(&a.lambda0)?;
    let lam = lam.body;
    let vol = read_volume_rows(&a.volume)?;
    let points: Vec<DensityPoint> = vol
        .iter()
        .filter(|r| r.n == lam.n && r.s == 0 && r.height == lam.height && r.delta > 0.0)
        .map(density)
        .collect();
    let census = read_census_rows(&a.census)?;
    let rep = theorem2_report(&lam, &points, &census, &a.v)?;
    if let Some(p) = &a.plot {
        let data = theorem2_plot_rows(&rep, &points).into_iter().map(|r| vec![r.delta, r.value, r.stderr, r.model]);
        io::write_atomic(p, io::plot_data(&["delta", "f_hat", "stderr", "model"], data).as_bytes())?;
    }
    emit(a.out.as_deref(), &io::to_json(&cfg, &rep)?)
}
