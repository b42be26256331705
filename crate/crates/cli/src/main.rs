//! `pinlab`: configuration-driven experiments on disordered pinning and
//! copolymer models.
//!
//! Exit codes: 0 success, 1 config error, 2 numerical precondition
//! violation, 3 verify failure.

mod cache;
mod commands;
mod config;
mod manifest;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use commands::{CertificateArgs, CliError, Context, Format};
use config::Config;

#[derive(Parser)]
#[command(name = "pinlab", version, about = "Disordered pinning / copolymer model laboratory")]
struct Cli {
    /// Experiment config (flat key-value text with [sections]).
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Override the config's seed.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Worker pool size (defaults to the core count).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,

    /// Primary output format.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Csv)]
    format: OutputFormat,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum OutputFormat {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Quenched free-energy estimates over a (coupling, h, N) grid.
    FreeEnergy,
    /// Critical-point ladder with normalized ratios and plot data.
    CriticalScan,
    /// Exact annealed free energies on a bias grid.
    Annealed,
    /// Coarse-graining feasibility certificate.
    Certificate {
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        epsilon: Option<f64>,
        /// Block-length parameter; searched for when omitted.
        #[arg(long)]
        t: Option<f64>,
        /// Mean return time (else derived from the configured law).
        #[arg(long)]
        mu: Option<f64>,
        /// Renewal diagnostic constant (with --mu; default 2.0).
        #[arg(long)]
        c1: Option<f64>,
        /// Force pulling mu and C1 from the configured law's diagnostics.
        #[arg(long)]
        law: bool,
    },
    /// Monte Carlo fractional moment against its Hölder bound.
    FractionalMoment,
    /// Quadratic smoothing bound around an estimated critical point.
    SmoothingCheck,
    /// Run a verification suite (fast | full).
    Verify { suite: String },
}

fn load_config(cli: &Cli) -> Result<Config, CliError> {
    let mut config = match &cli.config {
        Some(path) => Config::load(path)?,
        None => Config::default(),
    };
    if let Some(seed) = cli.seed {
        // The seed override participates in hashing via the effective config.
        for section in ["grid", "scan", "fm", "smoothing"] {
            config.set(section, "seed", seed.to_string());
        }
    }
    Ok(config)
}

fn run(cli: Cli) -> Result<(), CliError> {
    if let Some(n) = cli.threads {
        // Best effort: the pool may already exist in tests.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    std::fs::create_dir_all(&cli.out).map_err(|e| CliError::Io(e.to_string()))?;

    let config = load_config(&cli)?;
    let ctx = Context {
        config,
        out_dir: cli.out.clone(),
        format: match cli.format {
            OutputFormat::Csv => Format::Csv,
            OutputFormat::Json => Format::Json,
        },
    };

    match &cli.command {
        Command::FreeEnergy => commands::cmd_free_energy(&ctx),
        Command::CriticalScan => commands::cmd_critical_scan(&ctx),
        Command::Annealed => commands::cmd_annealed(&ctx),
        Command::Certificate {
            alpha,
            epsilon,
            t,
            mu,
            c1,
            law,
        } => commands::cmd_certificate(
            &ctx,
            &CertificateArgs {
                alpha: *alpha,
                epsilon: *epsilon,
                t: *t,
                mu: *mu,
                c1: *c1,
                from_law: *law,
            },
        ),
        Command::FractionalMoment => commands::cmd_fractional_moment(&ctx),
        Command::SmoothingCheck => commands::cmd_smoothing_check(&ctx),
        Command::Verify { suite } => commands::cmd_verify(&ctx, suite),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.message());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
