//! `fidur`: command-line front end.
//!
//! Exit codes: 0 success, 2 usage or input error, 3 uncertainty-relation
//! violation found.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use fidelity_ur::domains::{region_file_name, region_samples, write_region_csv, DomainSpec, RegionData};
use fidelity_ur::fidelity::fidelity;
use fidelity_ur::metrics::{f_of, MetricKind};
use fidelity_ur::states::{sample_mixed, sample_observable, sample_pure, Fixture};
use fidelity_ur::sweep::{run_sweep, Mixedness, SweepConfig};
use fidelity_ur::tolerances::UR_TOLERANCE;
use fidelity_ur::uncertainty::{check_ur, Finding};

#[derive(Parser)]
#[command(name = "fidur", version, about = "Fidelity-based uncertainty relations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print F, d_A, d_B and d_RI between two state fixtures.
    Fidelity { rho: PathBuf, sigma: PathBuf },
    /// Evaluate U(A;ρ) + U(B;ρ) ≥ f(c²) and print the report as JSON.
    CheckUr {
        rho: PathBuf,
        a: PathBuf,
        b: PathBuf,
        #[arg(long)]
        metric: String,
        #[arg(long, default_value_t = UR_TOLERANCE)]
        tolerance: f64,
    },
    /// Seeded Monte Carlo sweep; SweepResult JSON on stdout.
    Sweep {
        /// JSON SweepConfig; individual flags are ignored when given.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, value_delimiter = ',')]
        dim: Vec<usize>,
        #[arg(long)]
        trials: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_delimiter = ',')]
        metric: Vec<String>,
        #[arg(long)]
        mixedness: Option<String>,
        #[arg(long, default_value_t = UR_TOLERANCE)]
        tolerance: f64,
        /// Worker threads; 1 runs sequentially.
        #[arg(long, default_value_t = 1)]
        workers: usize,
    },
    /// Write boundary samples of a feasibility domain (CSV, or JSON for a
    /// `.json` path; a directory gets the conventional file name).
    Region {
        #[arg(long)]
        metric: String,
        #[arg(long)]
        overlap: f64,
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        points: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Write a random state or observable fixture.
    Sample {
        what: SampleKind,
        #[arg(long)]
        dim: usize,
        #[arg(long, default_value_t = 1)]
        aux_dim: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SampleKind {
    Pure,
    Mixed,
    Observable,
}

enum Failure {
    Input(String),
    Violation,
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Input(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Violation) => ExitCode::from(3),
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Fidelity { rho, sigma } => cmd_fidelity(&rho, &sigma),
        Command::CheckUr { rho, a, b, metric, tolerance } => cmd_check_ur(&rho, &a, &b, &metric, tolerance),
        Command::Sweep { config, dim, trials, seed, metric, mixedness, tolerance, workers } => {
            let config = match config {
                Some(path) => {
                    let text = fs::read_to_string(&path)
                        .map_err(|e| format!("{}: {e}", path.display()))?;
                    serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?
                }
                None => SweepConfig {
                    dims: if dim.is_empty() { return Err(missing("--dim")) } else { dim },
                    trials_per_dim: trials.ok_or_else(|| missing("--trials"))?,
                    seed: seed.ok_or_else(|| missing("--seed"))?,
                    kinds: if metric.is_empty() {
                        return Err(missing("--metric"));
                    } else {
                        metric.iter().map(|m| m.parse()).collect::<Result<_, _>>()?
                    },
                    mixedness: mixedness.ok_or_else(|| missing("--mixedness"))?.parse::<Mixedness>()?,
                    tolerance,
                },
            };
            cmd_sweep(&config, workers)
        }
        Command::Region { metric, overlap, dim, points, out } => {
            cmd_region(&metric, overlap, dim, points, &out)
        }
        Command::Sample { what, dim, aux_dim, seed, out } => cmd_sample(what, dim, aux_dim, seed, &out),
    }
}

fn missing(flag: &str) -> Failure {
    Failure::Input(format!("{flag} is required unless --config is given"))
}

fn read_fixture(path: &Path) -> Result<Fixture, Failure> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    Ok(serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?)
}

/// `x` rounded to 12 significant digits, trailing zeros dropped.
fn sig12(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{}", if x == 0.0 { 0.0 } else { x });
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (11 - magnitude).max(0) as usize;
    let s = format!("{x:.decimals$}");
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

fn cmd_fidelity(rho: &Path, sigma: &Path) -> Result<(), Failure> {
    let rho = read_fixture(rho)?.into_density()?;
    let sigma = read_fixture(sigma)?.into_density()?;
    let f = fidelity(&rho, &sigma)?;
    println!("F = {}", sig12(f));
    println!("d_A = {}", sig12(f_of(MetricKind::Angle, f)?));
    println!("d_B = {}", sig12(f_of(MetricKind::Bures, f)?));
    println!("d_RI = {}", sig12(f_of(MetricKind::RootInfidelity, f)?));
    Ok(())
}

fn cmd_check_ur(rho: &Path, a: &Path, b: &Path, metric: &str, tolerance: f64) -> Result<(), Failure> {
    let kind: MetricKind = metric.parse()?;
    let rho = read_fixture(rho)?.into_density()?;
    let a = read_fixture(a)?.into_observable()?;
    let b = read_fixture(b)?.into_observable()?;
    let report = check_ur(kind, &a, &b, &rho)?;
    println!("{}", serde_json::to_string_pretty(&report)?);
    match report.finding(tolerance) {
        Finding::Holds => Ok(()),
        Finding::Violation { slack } => {
            eprintln!("violation: slack {slack:e} below -{tolerance:e}");
            Err(Failure::Violation)
        }
    }
}

fn cmd_sweep(config: &SweepConfig, workers: usize) -> Result<(), Failure> {
    let progress = |dim: usize, trials: u64| eprintln!("dim {dim}: {trials} trials done");
    let result = run_sweep(config, workers.max(1), &progress)?;
    println!("{}", serde_json::to_string_pretty(&result)?);
    eprintln!(
        "{} evaluations, {} violations, min slack {:e}",
        result.total_trials, result.violations, result.min_slack
    );
    if result.violations > 0 {
        return Err(Failure::Violation);
    }
    Ok(())
}

fn cmd_region(metric: &str, overlap: f64, dim: usize, points: usize, out: &Path) -> Result<(), Failure> {
    let spec = DomainSpec::new(metric.parse()?, overlap, dim)?;
    let samples = region_samples(&spec, points)?;
    let path = if out.is_dir() { out.join(region_file_name(&spec)) } else { out.to_path_buf() };
    let file = File::create(&path).map_err(|e| format!("{}: {e}", path.display()))?;
    let mut w = BufWriter::new(file);
    if path.extension().is_some_and(|e| e == "json") {
        serde_json::to_writer_pretty(&mut w, &RegionData { spec, points: samples })?;
        writeln!(w)?;
    } else {
        write_region_csv(&mut w, &samples)?;
    }
    w.flush()?;
    println!("{}", path.display());
    Ok(())
}

fn cmd_sample(what: SampleKind, dim: usize, aux_dim: usize, seed: u64, out: &Path) -> Result<(), Failure> {
    if dim < 1 || aux_dim < 1 {
        return Err(Failure::Input("--dim and --aux-dim must be at least 1".into()));
    }
    let fixture = match what {
        SampleKind::Pure => Fixture::Pure(sample_pure(dim, seed)),
        SampleKind::Mixed => Fixture::Density(sample_mixed(dim, aux_dim, seed)),
        SampleKind::Observable => Fixture::Observable(sample_observable(dim, seed)),
    };
    let text = serde_json::to_string_pretty(&fixture)?;
    fs::write(out, text + "\n").map_err(|e| format!("{}: {e}", out.display()))?;
    println!("{}", out.display());
    Ok(())
}
