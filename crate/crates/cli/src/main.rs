use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use gme_core::experiment::{
    parse_amplitudes, reproduce, run_sweep, vanishing_time, write_csv, ExperimentConfig,
    ExperimentError, GammaGrid, StateChoice, DEFAULT_ALPHA,
};
use gme_core::gmn::genuine_negativity;
use gme_core::recovery::{run_scheme, Scheme, SchemeKind};

const EXIT_USAGE: u8 = 2;
const EXIT_NUMERICAL: u8 = 3;

/// Genuine multipartite negativity of damped three-qubit states and their
/// filter-based recovery.
///
/// Sweeps run on a thread pool sized by RAYON_NUM_THREADS when it is set.
#[derive(Parser, Debug)]
#[command(name = "gme", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Genuine negativity of one state, optionally after damping and recovery.
    Gmn(GmnArgs),
    /// Run the sweep described by a configuration file and write CSV.
    Sweep(SweepArgs),
    /// Locate the Gamma*t at which genuine negativity vanishes.
    Vanish(VanishArgs),
    /// Write the full set of figure datasets into a directory.
    Reproduce(ReproduceArgs),
}

#[derive(Args, Debug)]
struct SchemeArgs {
    /// none, after_once, after_twice, before_once or before_and_after
    #[arg(long, default_value = "none")]
    scheme: String,
    /// The s or x parameter of the scheme.
    #[arg(long)]
    param: Option<f64>,
}

impl SchemeArgs {
    fn scheme(&self) -> Result<Scheme, ExperimentError> {
        let kind: SchemeKind = self.scheme.parse()?;
        Ok(Scheme::new(kind, self.param)?)
    }
}

#[derive(Args, Debug)]
struct GmnArgs {
    /// ghz, w, wtilde or custom
    #[arg(long, conflicts_with = "config")]
    state: Option<String>,
    /// Comma-separated amplitudes for a custom state, e.g. "1,0,0,0,0,0,0,1i".
    #[arg(long)]
    amplitudes: Option<String>,
    /// Weight of the pure state against white noise.
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    #[command(flatten)]
    scheme: SchemeArgs,
    #[arg(long = "gamma-t", default_value_t = 0.0)]
    gamma_t: f64,
    /// Take the state, alpha and scheme from a configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[arg(long)]
    config: PathBuf,
    /// Output CSV; overrides the file's `output` key. Defaults to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct VanishArgs {
    #[arg(long, default_value = "ghz")]
    state: String,
    #[arg(long)]
    amplitudes: Option<String>,
    #[arg(long, default_value_t = DEFAULT_ALPHA)]
    alpha: f64,
    #[command(flatten)]
    scheme: SchemeArgs,
}

#[derive(Args, Debug)]
struct ReproduceArgs {
    #[arg(long)]
    out: PathBuf,
    /// Gamma*t grid as start:stop:step.
    #[arg(long, default_value = "0:1.2:0.02")]
    grid: GammaGrid,
}

enum Failure {
    Usage(String),
    Numerical(String),
}

impl From<ExperimentError> for Failure {
    fn from(e: ExperimentError) -> Self {
        if e.is_usage() {
            Failure::Usage(e.to_string())
        } else {
            Failure::Numerical(e.to_string())
        }
    }
}

fn state_choice(label: &str, amplitudes: Option<&str>) -> Result<StateChoice, ExperimentError> {
    let amps = amplitudes.map(parse_amplitudes).transpose()?;
    StateChoice::from_label(label, amps)
}

fn cmd_gmn(args: &GmnArgs) -> Result<(), Failure> {
    let (state, alpha, scheme) = match &args.config {
        Some(path) => {
            let cfg = ExperimentConfig::load(path)?;
            let scheme = cfg.schemes()?[0];
            (cfg.state, cfg.alpha, scheme)
        }
        None => {
            let label = args.state.as_deref().unwrap_or("ghz");
            (state_choice(label, args.amplitudes.as_deref())?, args.alpha, args.scheme.scheme()?)
        }
    };
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Failure::Usage(format!("alpha {alpha} outside [0, 1]")));
    }
    let rho0 = state.mixture(alpha)?;
    let outcome = run_scheme(&rho0, scheme, args.gamma_t).map_err(ExperimentError::from)?;
    let w = genuine_negativity(&outcome.state).map_err(ExperimentError::from)?;
    println!("E = {:.6}", w.e);
    if scheme != Scheme::None {
        println!("success_prob = {:.6}", outcome.success_prob);
    }
    if !w.is_optimal() {
        return Err(Failure::Numerical(format!("solver stopped with status {:?}", w.status)));
    }
    Ok(())
}

fn cmd_sweep(args: &SweepArgs) -> Result<(), Failure> {
    let cfg = ExperimentConfig::load(&args.config)?;
    let records = run_sweep(&cfg)?;
    let target = args.out.clone().or_else(|| cfg.output.clone());
    let io_fail = |p: &dyn std::fmt::Display, e: io::Error| Failure::Usage(format!("{p}: {e}"));
    match target {
        Some(path) => {
            let file = File::create(&path).map_err(|e| io_fail(&path.display(), e))?;
            let mut w = BufWriter::new(file);
            write_csv(&mut w, &records)
                .and_then(|_| w.flush())
                .map_err(|e| io_fail(&path.display(), e))?;
        }
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            write_csv(&mut w, &records).map_err(|e| io_fail(&"stdout", e))?;
        }
    }
    let bad = records.iter().filter(|r| !r.status.is_ok()).count();
    if bad > 0 {
        return Err(Failure::Numerical(format!("{bad} of {} sweep points failed", records.len())));
    }
    Ok(())
}

fn cmd_vanish(args: &VanishArgs) -> Result<(), Failure> {
    let state = state_choice(&args.state, args.amplitudes.as_deref())?;
    let t = vanishing_time(&state, args.alpha, args.scheme.scheme()?)?;
    println!("Gamma*t = {t:.6}");
    Ok(())
}

fn cmd_reproduce(args: &ReproduceArgs) -> Result<(), Failure> {
    for path in reproduce(&args.out, args.grid)? {
        println!("{}", path.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Gmn(a) => cmd_gmn(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Vanish(a) => cmd_vanish(a),
        Command::Reproduce(a) => cmd_reproduce(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("gme: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Numerical(msg)) => {
            eprintln!("gme: {msg}");
            ExitCode::from(EXIT_NUMERICAL)
        }
    }
}
