//! `hyperinfo`: spectra, mutual information, bound checks, exhaustive
//! searches and high-noise scans from the command line.
//!
//! Exit codes: 0 complete, 1 violation found, 2 usage or input error,
//! 3 resource guard, 4 checkpoint rejected.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use hyperinfo::grid::{default_alpha_grid, linear_grid, log_grid};
use hyperinfo::{Error, NoiseParams};

use crate::output::Format;

/// Seed used by randomized families when `--seed` is absent.
pub const DEFAULT_SEED: u64 = 20240601;

#[derive(Parser, Debug)]
#[command(name = "hyperinfo", version, about = "Information-theoretic analysis of Boolean functions on the noisy hypercube")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Output file, replaced atomically; stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Walsh-Hadamard spectrum of a truth-table file.
    Spectrum { file: PathBuf },
    /// Total and per-coordinate mutual information.
    Mi {
        file: PathBuf,
        #[arg(long, value_parser = parse_alpha)]
        alpha: f64,
    },
    /// Monotonize by compressions, recording every step.
    Compress {
        file: PathBuf,
        #[arg(long, value_parser = parse_alpha)]
        alpha: f64,
    },
    /// `M_K` and `M_K'` on a grid, with the comparison against `K = 1`.
    Oq1Curves {
        /// Crossover probabilities, turned into `ρ = 1 − 2α`; must avoid 0 and 1/2.
        #[arg(long, value_parser = parse_alpha_grid, default_value = "0.05:0.45:0.05")]
        alpha_grid: Grid,
        #[arg(long, value_parser = parse_linear_grid, default_value = "1:32:1")]
        k_grid: Grid,
    },
    /// Exhaustive check of `I(b(X); Y) ≤ 1 − H(α)`.
    VerifyCk(SearchArgs),
    /// Exhaustive check of `Σ_i I(b(X); Y_i) ≤ 1 − H(α)` and the bound chain.
    VerifyThm2(SearchArgs),
    /// Moments, entropy residuals and log-log fits of a density over a λ grid.
    HighnoiseScan {
        /// One of dictator, even-pair, majority3, majority5, tribes6, random.
        #[arg(long, default_value = "majority3")]
        family: String,
        /// Dimension of the `random` family.
        #[arg(long, default_value_t = 4)]
        n: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, value_parser = parse_lambda_grid, default_value = "log:1e-4:1e-1:16")]
        lambda_grid: Grid,
    },
    /// The two high-noise threshold functions and their ratio.
    Thresholds {
        #[arg(long, value_parser = parse_lambda_grid, default_value = "log:1e-6:1e-1:26")]
        lambda_grid: Grid,
    },
    /// Fourier tail weight of every orbit with near-maximal information.
    Concentration {
        #[arg(long)]
        n: usize,
        #[arg(long, value_parser = parse_alpha)]
        alpha: f64,
        /// Keep orbits with `I ≥ τ · (1 − H(α))`.
        #[arg(long, default_value_t = 0.9)]
        tau: f64,
    },
}

#[derive(Args, Debug)]
pub struct SearchArgs {
    #[arg(long)]
    pub n: usize,
    /// Single crossover probability; overrides `--alpha-grid`.
    #[arg(long, value_parser = parse_alpha, conflicts_with = "alpha_grid")]
    pub alpha: Option<f64>,
    /// `a:b:step`; defaults to 0.05, 0.10, ..., 0.45, 0.49.
    #[arg(long, value_parser = parse_alpha_grid)]
    pub alpha_grid: Option<Grid>,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..=4096))]
    pub shards: u32,
    /// Required for `n = 5`.
    #[arg(long)]
    pub allow_long_run: bool,
    /// Resume from and periodically save to this file.
    #[arg(long)]
    pub checkpoint: Option<PathBuf>,
    /// Keys per shard between checkpoint writes.
    #[arg(long, default_value_t = hyperinfo::search::DEFAULT_CHECKPOINT_EVERY, value_parser = clap::value_parser!(u64).range(1..))]
    pub checkpoint_every: u64,
}

impl SearchArgs {
    pub fn grid(&self) -> Vec<f64> {
        match (self.alpha, &self.alpha_grid) {
            (Some(a), _) => vec![a],
            (None, Some(g)) => g.0.clone(),
            (None, None) => default_alpha_grid(),
        }
    }
}

/// A parsed numeric grid.
#[derive(Clone, PartialEq, Debug)]
pub struct Grid(pub Vec<f64>);

fn parse_f64(s: &str) -> Result<f64, String> {
    let x: f64 = s.trim().parse().map_err(|_| format!("{s:?} is not a number"))?;
    if x.is_finite() {
        Ok(x)
    } else {
        Err(format!("{s:?} is not finite"))
    }
}

fn parse_alpha(s: &str) -> Result<f64, String> {
    let a = parse_f64(s)?;
    NoiseParams::new(a).map(|_| a).map_err(|e| e.to_string())
}

fn parse_linear_grid(s: &str) -> Result<Grid, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [a, b, step] = parts[..] else {
        return Err(format!("expected a:b:step, got {s:?}"));
    };
    linear_grid(parse_f64(a)?, parse_f64(b)?, parse_f64(step)?)
        .map(Grid)
        .map_err(|e| e.to_string())
}

fn parse_alpha_grid(s: &str) -> Result<Grid, String> {
    let grid = parse_linear_grid(s)?;
    for &a in &grid.0 {
        NoiseParams::new(a).map_err(|e| e.to_string())?;
    }
    Ok(grid)
}

fn parse_lambda_grid(s: &str) -> Result<Grid, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let ["log", a, b, points] = parts[..] else {
        return Err(format!("expected log:a:b:points, got {s:?}"));
    };
    let points: usize = points.parse().map_err(|_| format!("{points:?} is not a point count"))?;
    let grid = log_grid(parse_f64(a)?, parse_f64(b)?, points).map_err(|e| e.to_string())?;
    if grid.iter().any(|&l| l > 1.0) {
        return Err("λ grid must lie in (0, 1]".into());
    }
    Ok(Grid(grid))
}

/// Process exit status of a failed command.
pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::ResourceGuard(_) => 3,
        Error::Checkpoint(_) => 4,
        _ => 2,
    }
}

fn configure_threads() -> Result<(), String> {
    let Ok(value) = std::env::var("HYPERINFO_THREADS") else {
        return Ok(());
    };
    let threads: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| format!("HYPERINFO_THREADS must be a positive integer, got {value:?}"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code().clamp(0, 255) as u8);
        }
    };
    if let Err(msg) = configure_threads() {
        eprintln!("error: {msg}");
        return ExitCode::from(2);
    }
    let start = Instant::now();
    let result = commands::run(&cli.command, cli.format).and_then(|out| {
        output::deliver(&out.text, cli.out.as_deref())?;
        Ok(out.violation)
    });
    eprintln!("elapsed: {:.3}s", start.elapsed().as_secs_f64());
    match result {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
