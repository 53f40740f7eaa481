//! Test orchestration: calibrate, plan, fan out, reduce.
//!
//! Workers share only the immutable registry; each owns its reference
//! context and folds its chunk into a partial result. Partials merge
//! associatively and commutatively (ties on the maximum break toward the
//! smallest input rank, then the smallest input encoding), so the worker
//! count and completion order never change the outcome.

use std::time::Instant;

use rayon::prelude::*;
use rug::Float;

use crate::config::TestConfigEntry;
use crate::fpcore::{self, FloatFormat};
use crate::refeval::{self, ErrorRecord, Outcome, RefCtx, SkipReason, UlpError};
use crate::registry::{BenchFormat, FuncId, Registry};
use crate::search::{self, SearchPlan, Strategy};

/// Per-function outcome of a run.
#[derive(Debug, Clone, PartialEq)]
pub struct FunctionResult {
    pub name: &'static str,
    /// False when every point was skipped ("no measurable points").
    pub measurable: bool,
    pub max_err_ulps: f64,
    pub argmax_input: f64,
    pub argmax_output: f64,
    /// Reference value at the maximum, rendered to policy precision.
    pub argmax_ref: String,
    /// All visited points, including skipped ones and special points.
    pub tests_run: u64,
    /// Asymptote, domain and native-infinity skips.
    pub skipped: u64,
    /// Special points injected on top of the sweep (deduplicated against
    /// points the plan already visits).
    pub special_tests: u64,
    /// Calibrated per-point cost (budgeted strategies only).
    pub per_point_ns: Option<f64>,
    /// Wall time of the sweep itself, excluding calibration.
    pub sweep_seconds: f64,
    pub warnings: Vec<String>,
}

/// Running maximum plus bookkeeping counts for one worker.
#[derive(Debug, Default, Clone)]
pub(crate) struct Partial {
    best: Option<Best>,
    tests: u64,
    asymptote_skips: u64,
    domain_skips: u64,
    native_inf_skips: u64,
    nan_failures: u64,
}

#[derive(Debug, Clone)]
struct Best {
    err: f64,
    rank: u64,
    input: f64,
    output: f64,
    ref_val: Float,
}

impl Partial {
    fn offer(&mut self, err: f64, rank: u64, input: f64, output: f64, ref_val: &Float) {
        let better = match &self.best {
            None => true,
            Some(b) => {
                err > b.err
                    || (err == b.err
                        && (rank < b.rank
                            || (rank == b.rank && input.to_bits() < b.input.to_bits())))
            }
        };
        if better {
            self.best = Some(Best {
                err,
                rank,
                input,
                output,
                ref_val: ref_val.clone(),
            });
        }
    }

    pub(crate) fn merge(mut self, other: Partial) -> Partial {
        self.tests += other.tests;
        self.asymptote_skips += other.asymptote_skips;
        self.domain_skips += other.domain_skips;
        self.native_inf_skips += other.native_inf_skips;
        self.nan_failures += other.nan_failures;
        if let Some(b) = other.best {
            self.offer(b.err, b.rank, b.input, b.output, &b.ref_val);
        }
        self
    }

    fn skipped(&self) -> u64 {
        self.asymptote_skips + self.domain_skips + self.native_inf_skips
    }
}

/// Run the full pipeline on one point and fold it into `acc`.
#[allow(clippy::too_many_arguments)]
fn fold_point(
    acc: &mut Partial,
    ctx: &mut RefCtx,
    val: &mut Float,
    registry: &Registry,
    func: FuncId,
    bench: BenchFormat,
    x: f64,
    rank: u64,
) {
    acc.tests += 1;
    let native = registry.eval_native(func, bench, x);
    match ctx.eval_into(val, func, x) {
        Err(_) => acc.domain_skips += 1,
        Ok(()) => match ctx.ulp_error(native, val) {
            Ok(err) => acc.offer(err, rank, x, native, val),
            Err(UlpError::Overflow(_)) => acc.asymptote_skips += 1,
            Err(UlpError::NativeNan) => acc.nan_failures += 1,
            Err(UlpError::NativeInfinite) => acc.native_inf_skips += 1,
        },
    }
}

/// Test a single input through the complete pipeline.
pub fn test_point(
    ctx: &mut RefCtx,
    registry: &Registry,
    func: FuncId,
    bench: BenchFormat,
    x: f64,
) -> ErrorRecord {
    let native = registry.eval_native(func, bench, x);
    let mut val = ctx.new_value();
    match ctx.eval_into(&mut val, func, x) {
        Err(_) => ErrorRecord {
            input: x,
            native_out: native,
            ref_value: None,
            outcome: Outcome::Skipped(SkipReason::DomainError),
        },
        Ok(()) => {
            let outcome = match ctx.ulp_error(native, &val) {
                Ok(err_ulps) => Outcome::Measured { err_ulps },
                Err(UlpError::Overflow(_)) => Outcome::Skipped(SkipReason::Asymptote),
                Err(UlpError::NativeNan) => Outcome::NativeNan,
                Err(UlpError::NativeInfinite) => Outcome::Skipped(SkipReason::NativeInfinite),
            };
            ErrorRecord {
                input: x,
                native_out: native,
                ref_value: Some(val),
                outcome,
            }
        }
    }
}

/// Reduced maximum over a record stream.
#[derive(Debug, Clone, PartialEq)]
pub struct MaxSummary {
    pub max_err_ulps: f64,
    pub argmax_input: f64,
    pub argmax_output: f64,
    pub argmax_rank: u64,
}

/// Maximum over the measured records; ties break toward the smallest input
/// rank. `None` when every record was skipped.
pub fn reduce_max(records: &[ErrorRecord], fmt: &FloatFormat) -> Option<MaxSummary> {
    let mut acc = Partial::default();
    for rec in records {
        if let Outcome::Measured { err_ulps } = rec.outcome {
            let r = fpcore::rank(rec.input, fmt);
            let refv = rec.ref_value.as_ref().expect("measured record has a reference");
            acc.offer(err_ulps, r, rec.input, rec.native_out, refv);
        }
    }
    acc.best.map(|b| MaxSummary {
        max_err_ulps: b.err,
        argmax_input: b.input,
        argmax_output: b.output,
        argmax_rank: b.rank,
    })
}

/// Does the sweep plan already visit this exact value (bit-for-bit)?
fn plan_visits(plan: &SearchPlan, fmt: &FloatFormat, x: f64) -> bool {
    let r = fpcore::rank(x, fmt);
    if fpcore::unrank(r, fmt).to_bits() != x.to_bits() {
        // collapsed -0 is swept as +0 only
        return false;
    }
    plan.chunks.iter().any(|c| {
        r >= c.rank_lo
            && r <= c.rank_hi
            && (r - c.rank_lo).is_multiple_of(c.stride)
            && (r - c.rank_lo) / c.stride < plan.per_worker_budget
    })
}

/// Run one function: calibrate (budgeted strategies), plan, execute chunks
/// in parallel, inject special points, reduce.
pub fn run_function(
    registry: &Registry,
    func: FuncId,
    bench: BenchFormat,
    strategy: Strategy,
    workers: usize,
    pool: &rayon::ThreadPool,
) -> FunctionResult {
    let fmt = bench.fmt();
    let spec = registry.get(func).expect("function is registered");
    let domain = spec.domain(bench);
    let size = domain.member_count(fmt);

    let calibration = strategy.budget_ns().map(|_| {
        search::calibrate(domain, fmt, workers, pool, |block| {
            let mut ctx = RefCtx::new(fmt);
            let mut val = ctx.new_value();
            let mut sink = Partial::default();
            for &r in block {
                let x = fpcore::unrank(r, fmt);
                fold_point(&mut sink, &mut ctx, &mut val, registry, func, bench, x, r);
            }
            std::hint::black_box(&sink);
        })
    });
    let n = search::budget_to_count(
        strategy,
        calibration.map(|c| c.t_ns).unwrap_or(0.0),
        size,
        workers,
    );
    let mut plan = search::plan(domain, fmt, n, workers);
    plan.per_point_ns = calibration.map(|c| c.t_ns);

    let started = Instant::now();
    let sweep = pool.install(|| {
        plan.chunks
            .par_iter()
            .map(|chunk| {
                let mut ctx = RefCtx::new(fmt);
                let mut val = ctx.new_value();
                let mut acc = Partial::default();
                for r in chunk.ranks(plan.per_worker_budget) {
                    let x = fpcore::unrank(r, fmt);
                    fold_point(&mut acc, &mut ctx, &mut val, registry, func, bench, x, r);
                }
                acc
            })
            .reduce(Partial::default, Partial::merge)
    });
    let sweep_seconds = started.elapsed().as_secs_f64();

    // Special points are always tested, on top of any strategy; points the
    // sweep already visited are not double-counted.
    let mut ctx = RefCtx::new(fmt);
    let mut val = ctx.new_value();
    let mut specials = Partial::default();
    for &x in spec.special_points(bench) {
        if !plan_visits(&plan, fmt, x) {
            let r = fpcore::rank(x, fmt);
            fold_point(&mut specials, &mut ctx, &mut val, registry, func, bench, x, r);
        }
    }
    let special_tests = specials.tests;
    let total = sweep.merge(specials);

    let mut warnings = Vec::new();
    if total.asymptote_skips > 0 {
        warnings.push(format!(
            "skipped {} points: {}",
            total.asymptote_skips,
            SkipReason::Asymptote.describe()
        ));
    }
    if total.domain_skips > 0 {
        warnings.push(format!(
            "skipped {} points: {}",
            total.domain_skips,
            SkipReason::DomainError.describe()
        ));
    }
    if total.native_inf_skips > 0 {
        warnings.push(format!(
            "skipped {} points: {}",
            total.native_inf_skips,
            SkipReason::NativeInfinite.describe()
        ));
    }
    if total.nan_failures > 0 {
        warnings.push(format!(
            "{} native NaN results with a finite reference",
            total.nan_failures
        ));
    }
    let dropped = spec.dropped_special_points(bench);
    if dropped > 0 {
        warnings.push(format!(
            "{dropped} out-of-domain special points dropped at load"
        ));
    }
    if total.best.is_none() {
        warnings.push("no measurable points".to_string());
    }

    let result = match &total.best {
        Some(b) => FunctionResult {
            name: func.name(),
            measurable: true,
            max_err_ulps: b.err,
            argmax_input: b.input,
            argmax_output: b.output,
            argmax_ref: refeval::render_reference(&b.ref_val),
            tests_run: total.tests,
            skipped: total.skipped(),
            special_tests,
            per_point_ns: plan.per_point_ns,
            sweep_seconds,
            warnings,
        },
        None => FunctionResult {
            name: func.name(),
            measurable: false,
            max_err_ulps: 0.0,
            argmax_input: 0.0,
            argmax_output: 0.0,
            argmax_ref: "-".to_string(),
            tests_run: total.tests,
            skipped: total.skipped(),
            special_tests,
            per_point_ns: plan.per_point_ns,
            sweep_seconds,
            warnings,
        },
    };
    eprintln!(
        "{} {}: max {} ULP, {} tests ({} skipped), {:.2}s",
        bench.name(),
        func.name(),
        if result.measurable {
            format!("{:.5}", result.max_err_ulps)
        } else {
            "n/a".to_string()
        },
        result.tests_run,
        result.skipped,
        result.sweep_seconds,
    );
    result
}

/// Run every registered function for one config entry, in registry order.
///
/// The `rounding` and `fastmath` fields of the entry are recorded by the
/// caller in report metadata; execution always measures the RN-referenced
/// error semantics and the platform offers no fast-math variants, so they
/// do not alter the run itself.
pub fn run_config_entry(
    registry: &Registry,
    entry: &TestConfigEntry,
    workers: usize,
) -> Vec<FunctionResult> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .expect("worker pool");
    registry
        .functions()
        .map(|spec| run_function(registry, spec.id, entry.format, entry.search, workers, &pool))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::TestConfigEntry;
    use crate::fpcore::{RoundingMode, BINARY16};
    use proptest::prelude::{prop_assert_eq, proptest};
    use rug::Float;

    fn pool(n: usize) -> rayon::ThreadPool {
        rayon::ThreadPoolBuilder::new().num_threads(n).build().unwrap()
    }

    #[test]
    fn test_point_exact_sqrt() {
        let registry = Registry::with_functions(&[FuncId::Sqrt]);
        let mut ctx = RefCtx::new(&BINARY16);
        let rec = test_point(&mut ctx, &registry, FuncId::Sqrt, BenchFormat::Binary16, 4.0);
        assert_eq!(rec.native_out, 2.0);
        assert_eq!(rec.outcome, Outcome::Measured { err_ulps: 0.0 });
    }

    #[test]
    fn test_point_tanpi_pole_skips() {
        let registry = Registry::with_functions(&[FuncId::Tanpi]);
        let mut ctx = RefCtx::new(&BINARY16);
        let rec = test_point(&mut ctx, &registry, FuncId::Tanpi, BenchFormat::Binary16, 0.5);
        assert_eq!(rec.outcome, Outcome::Skipped(SkipReason::Asymptote));
    }

    #[test]
    fn reduce_max_single_and_tie() {
        let fmt = &BINARY16;
        let mk = |input: f64, err: f64| ErrorRecord {
            input,
            native_out: 1.0,
            ref_value: Some(Float::with_val(31, 1.0)),
            outcome: Outcome::Measured { err_ulps: err },
        };
        let single = [mk(2.0, 0.25)];
        let got = reduce_max(&single, fmt).unwrap();
        assert_eq!(got.max_err_ulps, 0.25);
        assert_eq!(got.argmax_input, 2.0);
        // equal errors: the smaller rank (more negative input) wins
        let a = crate::fpcore::unrank(5, fmt);
        let b = crate::fpcore::unrank(9, fmt);
        let tie = [mk(b, 0.5), mk(a, 0.5)];
        assert_eq!(reduce_max(&tie, fmt).unwrap().argmax_input, a);
        // all skipped reduces to none
        let skipped = [ErrorRecord {
            input: 0.5,
            native_out: f64::INFINITY,
            ref_value: None,
            outcome: Outcome::Skipped(SkipReason::Asymptote),
        }];
        assert!(reduce_max(&skipped, fmt).is_none());
    }

    proptest! {
        #[test]
        fn partial_merge_equals_flat_fold(
            errs in proptest::collection::vec((0u16..200, 0.0f64..3.0), 1..60),
            cut in 0usize..60,
        ) {
            // merging per-worker partials equals folding the concatenated
            // stream, for any split point
            let fmt = &BINARY16;
            let recs: Vec<(f64, u64, f64)> = errs
                .iter()
                .map(|&(r, e)| (e, r as u64, crate::fpcore::unrank(r as u64, fmt)))
                .collect();
            let fold = |slice: &[(f64, u64, f64)]| {
                let mut p = Partial::default();
                let refv = Float::with_val(31, 1.0);
                for &(e, r, x) in slice {
                    p.tests += 1;
                    p.offer(e, r, x, 1.0, &refv);
                }
                p
            };
            let cut = cut.min(recs.len());
            let split = fold(&recs[..cut]).merge(fold(&recs[cut..]));
            let flat = fold(&recs);
            let (a, b) = (split.best.unwrap(), flat.best.unwrap());
            prop_assert_eq!(a.err, b.err);
            prop_assert_eq!(a.rank, b.rank);
            prop_assert_eq!(split.tests, flat.tests);
            // and the swapped merge agrees (commutativity)
            let swapped = fold(&recs[cut..]).merge(fold(&recs[..cut]));
            let c = swapped.best.unwrap();
            prop_assert_eq!(c.err, b.err);
            prop_assert_eq!(c.rank, b.rank);
        }
    }

    #[test]
    fn exhaustive_sqrt_binary16_counts_and_ceiling() {
        let registry = Registry::with_functions(&[FuncId::Sqrt]);
        let p = pool(2);
        let res = run_function(
            &registry,
            FuncId::Sqrt,
            BenchFormat::Binary16,
            Strategy::Exhaustive,
            2,
            &p,
        );
        // nonnegative binary16 count; special points all dedup into the sweep
        assert_eq!(res.tests_run, 31744);
        assert_eq!(res.special_tests, 0);
        assert_eq!(res.skipped, 0);
        assert!(res.measurable);
        assert!(res.max_err_ulps <= 0.5 + 1e-5, "sqrt err {}", res.max_err_ulps);
        assert!(res.max_err_ulps > 0.49);
    }

    #[test]
    fn worker_count_independence_exhaustive() {
        let registry = Registry::with_functions(&[FuncId::Exp]);
        let r1 = run_function(
            &registry,
            FuncId::Exp,
            BenchFormat::Binary16,
            Strategy::Exhaustive,
            1,
            &pool(1),
        );
        let r8 = run_function(
            &registry,
            FuncId::Exp,
            BenchFormat::Binary16,
            Strategy::Exhaustive,
            8,
            &pool(8),
        );
        assert_eq!(r1.max_err_ulps, r8.max_err_ulps);
        assert_eq!(r1.argmax_input, r8.argmax_input);
        assert_eq!(r1.argmax_output, r8.argmax_output);
        assert_eq!(r1.argmax_ref, r8.argmax_ref);
        assert_eq!(r1.tests_run, r8.tests_run);
        assert_eq!(r1.skipped, r8.skipped);
    }

    #[test]
    fn odd_function_injects_negative_zero() {
        let registry = Registry::with_functions(&[FuncId::Sin]);
        let p = pool(2);
        let res = run_function(
            &registry,
            FuncId::Sin,
            BenchFormat::Binary16,
            Strategy::Exhaustive,
            2,
            &p,
        );
        // full range sweep visits 63487 distinct values; -0 is injected
        assert_eq!(res.tests_run, 63488);
        assert_eq!(res.special_tests, 1);
    }

    #[test]
    fn budgeted_max_bounded_by_exhaustive() {
        let registry = Registry::with_functions(&[FuncId::Tanh]);
        let p = pool(2);
        let exhaustive = run_function(
            &registry,
            FuncId::Tanh,
            BenchFormat::Binary16,
            Strategy::Exhaustive,
            2,
            &p,
        );
        let budgeted = run_function(
            &registry,
            FuncId::Tanh,
            BenchFormat::Binary16,
            Strategy::Seconds,
            2,
            &p,
        );
        assert!(budgeted.max_err_ulps <= exhaustive.max_err_ulps);
        assert!(budgeted.per_point_ns.is_some());
        assert!(exhaustive.per_point_ns.is_none());
    }

    #[test]
    fn run_config_entry_row_order_and_determinism() {
        let registry = Registry::with_functions(&[FuncId::Exp, FuncId::Sqrt, FuncId::Tanh]);
        let entry = TestConfigEntry {
            test_name: "t".into(),
            format: BenchFormat::Binary16,
            rounding: RoundingMode::Nearest,
            fastmath: 0,
            search: Strategy::Exhaustive,
        };
        let rows1 = run_config_entry(&registry, &entry, 2);
        let rows2 = run_config_entry(&registry, &entry, 2);
        let names: Vec<_> = rows1.iter().map(|r| r.name).collect();
        assert_eq!(names, ["exp", "sqrt", "tanh"]);
        for (a, b) in rows1.iter().zip(&rows2) {
            assert_eq!(a.max_err_ulps, b.max_err_ulps);
            assert_eq!(a.argmax_input.to_bits(), b.argmax_input.to_bits());
            assert_eq!(a.tests_run, b.tests_run);
        }
    }
}
