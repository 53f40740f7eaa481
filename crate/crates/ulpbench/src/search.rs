//! Input-space search strategies.
//!
//! A strategy is either `exhaustive` or one of four wall-time budgets
//! (`seconds`, `minutes`, `hours`, `days`). Budgets are converted into a
//! per-worker point count `N` by timing the full per-point pipeline on
//! 10^5 domain points; the domain's rank range is then split into one
//! contiguous chunk per worker and each chunk is visited at a fixed
//! stride. Sampling is uniform over representable values (logarithmic
//! over the reals), so every binade gets exercised.
//!
//! Everything here is a pure function of its inputs; given the same
//! `(domain, N, P)` the visited input set is identical across runs.

use std::time::Instant;

use crate::fpcore::{self, FloatFormat};
use crate::registry::Interval;
use crate::Rank;

/// The five user-facing search strategies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Strategy {
    Seconds,
    Minutes,
    Hours,
    Days,
    Exhaustive,
}

impl Strategy {
    pub const ALL: [Strategy; 5] = [
        Strategy::Seconds,
        Strategy::Minutes,
        Strategy::Hours,
        Strategy::Days,
        Strategy::Exhaustive,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Strategy::Seconds => "seconds",
            Strategy::Minutes => "minutes",
            Strategy::Hours => "hours",
            Strategy::Days => "days",
            Strategy::Exhaustive => "exhaustive",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Strategy::ALL.into_iter().find(|v| v.name() == s)
    }

    /// Per-function wall-time budget in nanoseconds; `None` for exhaustive.
    pub fn budget_ns(self) -> Option<u64> {
        match self {
            Strategy::Seconds => Some(1_000_000_000),
            Strategy::Minutes => Some(60 * 1_000_000_000),
            Strategy::Hours => Some(3_600 * 1_000_000_000),
            Strategy::Days => Some(24 * 3_600 * 1_000_000_000),
            Strategy::Exhaustive => None,
        }
    }
}

impl std::fmt::Display for Strategy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// One worker's contiguous slice of rank space, visited at a fixed stride
/// starting from `rank_lo`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Chunk {
    pub rank_lo: Rank,
    pub rank_hi: Rank,
    pub stride: u64,
}

impl Chunk {
    fn span(&self) -> u64 {
        self.rank_hi - self.rank_lo + 1
    }

    /// Ranks this chunk visits under a per-worker budget.
    pub fn ranks(&self, budget: u64) -> impl Iterator<Item = Rank> + '_ {
        let (hi, stride) = (self.rank_hi, self.stride);
        (0..budget).scan(Some(self.rank_lo), move |state, _| {
            let cur = (*state)?;
            *state = cur.checked_add(stride).filter(|&n| n <= hi);
            Some(cur)
        })
    }

    pub fn visit_count(&self, budget: u64) -> u64 {
        budget.min((self.span() - 1) / self.stride + 1)
    }
}

/// A ready-to-run sweep: per-worker budget `N`, worker count `P`, and one
/// chunk per worker partitioning the domain's rank range.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchPlan {
    /// Calibrated single-point cost in nanoseconds (budgeted strategies).
    pub per_point_ns: Option<f64>,
    /// `N`: maximum points per worker.
    pub per_worker_budget: u64,
    /// `P`: workers the plan was cut for.
    pub workers: usize,
    pub chunks: Vec<Chunk>,
}

impl SearchPlan {
    /// Total points the sweep will visit (excluding special points).
    pub fn total_visits(&self) -> u64 {
        self.chunks
            .iter()
            .map(|c| c.visit_count(self.per_worker_budget))
            .sum()
    }
}

/// Convert a strategy into the per-worker test count `N`.
///
/// For time budgets, `N = floor(budget_ns / t_ns)`; each worker then runs
/// its `N` points in parallel with the others, so one function costs about
/// the budgeted wall time and `N x P` points in total. For exhaustive, `N`
/// is the per-worker share of the domain. Chunk clamping happens later in
/// [`plan`]; domains smaller than `N x P` simply finish early.
pub fn budget_to_count(
    strategy: Strategy,
    t_ns: f64,
    domain_size: u64,
    workers: usize,
) -> u64 {
    match strategy.budget_ns() {
        Some(ns) => {
            assert!(t_ns > 0.0, "calibration produced a non-positive cost");
            ((ns as f64 / t_ns) as u64).max(1)
        }
        None => domain_size.div_ceil(workers.max(1) as u64).max(1),
    }
}

/// Cut the domain's rank range into `workers` contiguous chunks whose
/// sizes differ by at most one, each with stride
/// `max(1, chunk_size / n)` so a worker visits `min(n, chunk_size)` points.
pub fn plan(domain: Interval, fmt: &FloatFormat, n: u64, workers: usize) -> SearchPlan {
    assert!(n >= 1 && workers >= 1);
    let rank_lo = fpcore::rank(domain.lo, fmt);
    let rank_hi = fpcore::rank(domain.hi, fmt);
    let size = rank_hi - rank_lo + 1;
    let workers_used = (workers as u64).min(size);
    let base = size / workers_used;
    let extra = size % workers_used;
    let mut chunks = Vec::with_capacity(workers_used as usize);
    let mut lo = rank_lo;
    for i in 0..workers_used {
        let len = base + u64::from(i < extra);
        let chunk = Chunk {
            rank_lo: lo,
            rank_hi: lo + len - 1,
            stride: (len / n).max(1),
        };
        chunks.push(chunk);
        lo += len;
    }
    SearchPlan {
        per_point_ns: None,
        per_worker_budget: n,
        workers,
        chunks,
    }
}

/// Outcome of a calibration run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Calibration {
    /// Average single-point cost per worker, in nanoseconds.
    pub t_ns: f64,
    /// Points actually timed.
    pub points: u64,
}

/// Time the full per-point pipeline on 10^5 points (or the whole domain if
/// smaller) spread across the domain and the worker pool, and return the
/// average per-worker cost of one point.
///
/// `run_block` receives a contiguous slice of ranks and must evaluate the
/// complete pipeline (native + reference + error) for each. A sample that
/// finishes in under 100 ms is too exposed to scheduler and timer noise to
/// trust, so it is grown tenfold and retried (up to 10^6 points).
pub fn calibrate<F>(
    domain: Interval,
    fmt: &FloatFormat,
    workers: usize,
    pool: &rayon::ThreadPool,
    run_block: F,
) -> Calibration
where
    F: Fn(&[Rank]) + Sync,
{
    use rayon::prelude::*;
    let rank_lo = fpcore::rank(domain.lo, fmt);
    let size = domain.member_count(fmt);
    let workers = workers.max(1);
    // wake the pool first: thread spin-up must not pollute the sample
    pool.install(|| {
        (0..workers)
            .into_par_iter()
            .for_each(|w| std::hint::black_box(drop(w)))
    });
    let mut target = size.min(100_000);
    loop {
        let stride = (size / target).max(1);
        let ranks: Vec<Rank> = (0..target).map(|i| rank_lo + i * stride).collect();
        // blocks well below a worker's share keep all workers busy for the
        // whole wall time, which the t formula assumes
        let per_block = ranks.len().div_ceil(workers * 8).max(256);
        let start = Instant::now();
        pool.install(|| {
            ranks
                .par_chunks(per_block)
                .for_each(&run_block);
        });
        let wall = start.elapsed();
        if wall.as_millis() >= 100 || target >= size || target >= 1_000_000 {
            let t_ns = (wall.as_nanos() as f64 * workers as f64 / ranks.len() as f64)
                .max(f64::MIN_POSITIVE);
            return Calibration {
                t_ns,
                points: ranks.len() as u64,
            };
        }
        target = (target * 10).min(size);
    }
}
