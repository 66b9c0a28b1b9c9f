//! Sharded exhaustive runs with atomic checkpoints.
//!
//! The key space `[0, 2^(2^n))` is cut into contiguous shard ranges. Work
//! proceeds in rounds: every unfinished shard advances its cursor by at most
//! `checkpoint_every` keys in parallel, then the main thread writes a
//! checkpoint. The final merge runs in shard order, and the
//! accumulator merge is order-independent, so neither the shard count nor
//! interruption points change the report.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cube::NoiseParams;
use crate::error::{Error, Result};
use crate::search::group::{check_run_size, dictator_key, points, SymmetryGroup};
use crate::search::verify::{Accumulator, Evaluator, SearchReport, SearchTask};

/// Version tag written into every checkpoint.
pub const CHECKPOINT_FORMAT_VERSION: u32 = 1;

/// Keys processed per shard between checkpoints by default.
pub const DEFAULT_CHECKPOINT_EVERY: u64 = 1 << 14;

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub n: usize,
    pub task: SearchTask,
    pub alpha_grid: Vec<f64>,
    pub shards: usize,
    pub allow_long_run: bool,
    pub checkpoint: Option<PathBuf>,
    pub checkpoint_every: u64,
    /// Stop after this many rounds without finishing, as if killed.
    pub stop_after_rounds: Option<usize>,
}

impl RunConfig {
    pub fn new(n: usize, task: SearchTask, alpha_grid: Vec<f64>) -> Self {
        Self {
            n,
            task,
            alpha_grid,
            shards: 1,
            allow_long_run: false,
            checkpoint: None,
            checkpoint_every: DEFAULT_CHECKPOINT_EVERY,
            stop_after_rounds: None,
        }
    }
}

/// How a run ended.
#[derive(Clone, PartialEq, Debug)]
pub enum RunOutcome {
    Complete(SearchReport),
    /// Stopped by `stop_after_rounds`; the checkpoint holds the progress.
    Interrupted { rounds: usize },
}

impl RunOutcome {
    pub fn into_report(self) -> Option<SearchReport> {
        match self {
            RunOutcome::Complete(r) => Some(r),
            RunOutcome::Interrupted { .. } => None,
        }
    }
}

/// Progress of one shard.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct ShardState {
    /// Half-open key range `[start, end)`.
    pub range: [u64; 2],
    /// Next key to examine.
    pub cursor: u64,
    pub partial: Accumulator,
}

impl ShardState {
    fn done(&self) -> bool {
        self.cursor >= self.range[1]
    }
}

/// On-disk progress of a run.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct Checkpoint {
    pub format_version: u32,
    pub n: usize,
    pub task: SearchTask,
    pub alpha_grid: Vec<f64>,
    pub shards: Vec<ShardState>,
    /// Seconds since the Unix epoch at write time.
    pub timestamp: u64,
}

impl Checkpoint {
    pub fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        let cp: Checkpoint = serde_json::from_str(&text)
            .map_err(|e| Error::Checkpoint(format!("{}: {e}", path.display())))?;
        if cp.format_version != CHECKPOINT_FORMAT_VERSION {
            return Err(Error::Checkpoint(format!(
                "format version {} is not supported (expected {CHECKPOINT_FORMAT_VERSION})",
                cp.format_version
            )));
        }
        Ok(cp)
    }

    /// Writes to a sibling temporary file, then renames over `path`.
    pub fn write(&self, path: &Path) -> Result<()> {
        let tmp = tmp_sibling(path);
        fs::write(&tmp, serde_json::to_vec(self)?)?;
        fs::rename(&tmp, path)?;
        Ok(())
    }

    fn check_matches(&self, config: &RunConfig) -> Result<()> {
        let mismatch = |what: &str| {
            Err(Error::Checkpoint(format!(
                "checkpoint was written for a different {what}"
            )))
        };
        if self.n != config.n {
            return mismatch("dimension");
        }
        if self.task != config.task {
            return mismatch("task");
        }
        if self.alpha_grid != config.alpha_grid {
            return mismatch("α grid");
        }
        if self.shards.len() != config.shards {
            return mismatch("shard count");
        }
        let expected = shard_ranges(config.n, config.shards);
        let alphas = config.alpha_grid.len();
        for (s, r) in self.shards.iter().zip(expected) {
            let sane = s.range == r
                && (r[0]..=r[1]).contains(&s.cursor)
                && s.partial.per_alpha.len() == alphas;
            if !sane {
                return Err(Error::Checkpoint("inconsistent shard state".into()));
            }
        }
        Ok(())
    }
}

pub(crate) fn tmp_sibling(path: &Path) -> PathBuf {
    let mut name = path.file_name().unwrap_or_default().to_os_string();
    name.push(".tmp");
    path.with_file_name(name)
}

/// Contiguous, nearly equal ranges covering all keys.
pub fn shard_ranges(n: usize, shards: usize) -> Vec<[u64; 2]> {
    let total = 1u64 << points(n);
    let shards = shards as u64;
    (0..shards)
        .map(|s| [total * s / shards, total * (s + 1) / shards])
        .collect()
}

fn now() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

/// Runs (or resumes) an exhaustive verification.
///
/// An existing checkpoint at `config.checkpoint` is resumed when it matches
/// the configuration and rejected with [`Error::Checkpoint`] otherwise.
pub fn run_sharded(config: &RunConfig) -> Result<RunOutcome> {
    check_run_size(config.n, config.allow_long_run)?;
    if config.shards == 0 || config.checkpoint_every == 0 {
        return Err(Error::InvalidParameter(
            "shards and checkpoint interval must be positive".into(),
        ));
    }
    let params = config
        .alpha_grid
        .iter()
        .map(|&a| NoiseParams::new(a))
        .collect::<Result<Vec<_>>>()?;
    if params.is_empty() {
        return Err(Error::InvalidParameter("empty α grid".into()));
    }
    let group = SymmetryGroup::new(config.n)?;
    let evaluator = Evaluator::new(config.n, config.task, params);
    let alphas = config.alpha_grid.len();

    let mut shards = match &config.checkpoint {
        Some(path) if path.exists() => {
            let cp = Checkpoint::read(path)?;
            cp.check_matches(config)?;
            cp.shards
        }
        _ => shard_ranges(config.n, config.shards)
            .into_iter()
            .map(|range| ShardState { range, cursor: range[0], partial: Accumulator::empty(alphas) })
            .collect(),
    };

    let mut rounds = 0;
    while shards.iter().any(|s| !s.done()) {
        if config.stop_after_rounds == Some(rounds) {
            return Ok(RunOutcome::Interrupted { rounds });
        }
        shards
            .par_iter_mut()
            .filter(|s| !s.done())
            .try_for_each(|s| -> Result<()> {
                let end = s.range[1].min(s.cursor.saturating_add(config.checkpoint_every));
                for key in s.cursor..end {
                    if let Some(orbit) = group.canonical_orbit(key) {
                        evaluator.add(&mut s.partial, key, orbit)?;
                    }
                }
                s.cursor = end;
                Ok(())
            })?;
        rounds += 1;
        if let Some(path) = &config.checkpoint {
            Checkpoint {
                format_version: CHECKPOINT_FORMAT_VERSION,
                n: config.n,
                task: config.task,
                alpha_grid: config.alpha_grid.clone(),
                shards: shards.clone(),
                timestamp: now(),
            }
            .write(path)?;
        }
    }

    let mut total = Accumulator::empty(alphas);
    for s in shards {
        total.merge(s.partial);
    }
    Ok(RunOutcome::Complete(SearchReport::from_accumulator(
        config.task,
        config.n,
        &config.alpha_grid,
        total,
        dictator_key(config.n)?,
    )))
}

fn run_simple(n: usize, task: SearchTask, alpha_grid: &[f64], allow_long_run: bool) -> Result<SearchReport> {
    let mut config = RunConfig::new(n, task, alpha_grid.to_vec());
    config.shards = rayon::current_num_threads().max(1) * 4;
    config.allow_long_run = allow_long_run;
    config.checkpoint_every = u64::MAX;
    Ok(run_sharded(&config)?.into_report().expect("no interruption requested"))
}

/// Exhaustive check of `I(b(X); Y) ≤ 1 − H(α)` over all functions on `n` variables.
pub fn verify_total_mi(n: usize, alpha_grid: &[f64], allow_long_run: bool) -> Result<SearchReport> {
    run_simple(n, SearchTask::TotalMi, alpha_grid, allow_long_run)
}

/// Exhaustive check of `Σ_i I(b(X); Y_i) ≤ 1 − H(α)` and the per-bias chain.
pub fn verify_coordinate_sum(n: usize, alpha_grid: &[f64], allow_long_run: bool) -> Result<SearchReport> {
    run_simple(n, SearchTask::CoordinateSum, alpha_grid, allow_long_run)
}
