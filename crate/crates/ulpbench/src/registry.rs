//! Catalog of the functions under test.
//!
//! For each of the 24 univariate functions this holds the native evaluator
//! binding, the exact per-format input domain, and the always-tested
//! special points. Domains guarantee that the mathematically exact result
//! stays within the format's finite range (isolated tanpi asymptotes are
//! skipped at run time instead).
//!
//! binary16 and binary32 domains are fixed tables; binary64 domains are
//! derived at startup from the same bound constructions the tables encode
//! (largest input before overflow / saturation), using the high-precision
//! backend, and cached in the registry.

use std::io::{BufRead, BufReader};
use std::path::Path;

use rug::{Float, Integer};
use thiserror::Error;

use crate::fpcore::{
    self, next_down, next_up, round_to_format, FloatFormat, RoundingMode, BINARY16, BINARY32,
    BINARY64,
};
use crate::native;
use crate::refeval::{self, RefCtx};

/// The 24 univariate functions of the catalog, in registry (report) order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FuncId {
    Acos,
    Acosh,
    Asin,
    Asinh,
    Atan,
    Atanh,
    Cbrt,
    Cos,
    Cosh,
    Exp,
    Exp10,
    Exp2,
    Log,
    Log10,
    Log1p,
    Log2,
    Sin,
    Sinh,
    Sqrt,
    Tan,
    Tanh,
    Cospi,
    Sinpi,
    Tanpi,
}

impl FuncId {
    pub const ALL: [FuncId; 24] = [
        FuncId::Acos,
        FuncId::Acosh,
        FuncId::Asin,
        FuncId::Asinh,
        FuncId::Atan,
        FuncId::Atanh,
        FuncId::Cbrt,
        FuncId::Cos,
        FuncId::Cosh,
        FuncId::Exp,
        FuncId::Exp10,
        FuncId::Exp2,
        FuncId::Log,
        FuncId::Log10,
        FuncId::Log1p,
        FuncId::Log2,
        FuncId::Sin,
        FuncId::Sinh,
        FuncId::Sqrt,
        FuncId::Tan,
        FuncId::Tanh,
        FuncId::Cospi,
        FuncId::Sinpi,
        FuncId::Tanpi,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FuncId::Acos => "acos",
            FuncId::Acosh => "acosh",
            FuncId::Asin => "asin",
            FuncId::Asinh => "asinh",
            FuncId::Atan => "atan",
            FuncId::Atanh => "atanh",
            FuncId::Cbrt => "cbrt",
            FuncId::Cos => "cos",
            FuncId::Cosh => "cosh",
            FuncId::Exp => "exp",
            FuncId::Exp10 => "exp10",
            FuncId::Exp2 => "exp2",
            FuncId::Log => "log",
            FuncId::Log10 => "log10",
            FuncId::Log1p => "log1p",
            FuncId::Log2 => "log2",
            FuncId::Sin => "sin",
            FuncId::Sinh => "sinh",
            FuncId::Sqrt => "sqrt",
            FuncId::Tan => "tan",
            FuncId::Tanh => "tanh",
            FuncId::Cospi => "cospi",
            FuncId::Sinpi => "sinpi",
            FuncId::Tanpi => "tanpi",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        FuncId::ALL.into_iter().find(|f| f.name() == s)
    }

    /// Odd functions get both signed zeros as special points.
    fn is_odd(self) -> bool {
        matches!(
            self,
            FuncId::Asin
                | FuncId::Asinh
                | FuncId::Atan
                | FuncId::Atanh
                | FuncId::Cbrt
                | FuncId::Sin
                | FuncId::Sinh
                | FuncId::Tan
                | FuncId::Tanh
                | FuncId::Sinpi
                | FuncId::Tanpi
        )
    }
}

impl std::fmt::Display for FuncId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// The formats a test entry can select.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BenchFormat {
    Binary16,
    Binary32,
    Binary64,
}

impl BenchFormat {
    pub const ALL: [BenchFormat; 3] = [
        BenchFormat::Binary16,
        BenchFormat::Binary32,
        BenchFormat::Binary64,
    ];

    pub fn fmt(self) -> &'static FloatFormat {
        match self {
            BenchFormat::Binary16 => &BINARY16,
            BenchFormat::Binary32 => &BINARY32,
            BenchFormat::Binary64 => &BINARY64,
        }
    }

    pub fn name(self) -> &'static str {
        self.fmt().name
    }

    pub fn parse(s: &str) -> Option<Self> {
        BenchFormat::ALL.into_iter().find(|b| b.name() == s)
    }

    fn index(self) -> usize {
        match self {
            BenchFormat::Binary16 => 0,
            BenchFormat::Binary32 => 1,
            BenchFormat::Binary64 => 2,
        }
    }
}

impl std::fmt::Display for BenchFormat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Closed input interval of format members with `lo <= hi`, both finite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        assert!(lo.is_finite() && hi.is_finite() && lo <= hi);
        Interval { lo, hi }
    }

    pub fn contains(&self, x: f64) -> bool {
        x.is_finite() && self.lo <= x && x <= self.hi
    }

    /// Number of format members in the interval.
    pub fn member_count(&self, fmt: &FloatFormat) -> u64 {
        fpcore::rank(self.hi, fmt) - fpcore::rank(self.lo, fmt) + 1
    }
}

/// Exponential base selector for [`derive_exp_like_domain`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExpBase {
    E,
    Two,
    Ten,
}

/// Evaluate `compute` at increasing precision until the value rounded into
/// `fmt` stabilizes; returns the rounded endpoint and whether the exact
/// value was hit (the computed approximation is itself a format member).
fn round_derived(
    compute: impl Fn(u32) -> Float,
    fmt: &FloatFormat,
    mode: RoundingMode,
) -> (f64, bool) {
    let mut prec = fmt.p + 96;
    let mut z = compute(prec);
    let mut prev = round_to_format(&z, fmt, mode);
    loop {
        prec *= 2;
        z = compute(prec);
        let cur = round_to_format(&z, fmt, mode);
        if cur == prev {
            return (cur, z == cur);
        }
        prev = cur;
        assert!(prec < 1 << 16, "derived endpoint did not stabilize");
    }
}

/// Largest input interval on which `base^x` neither overflows `fmt` nor
/// underflows to zero: `[RU(log_base(s_min)), RD(log_base(f_max))]`.
pub fn derive_exp_like_domain(fmt: &FloatFormat, base: ExpBase) -> Interval {
    let log_of = |v: f64, prec: u32| {
        let mut z = Float::with_val(prec, v);
        match base {
            ExpBase::E => z.ln_mut(),
            ExpBase::Two => z.log2_mut(),
            ExpBase::Ten => z.log10_mut(),
        }
        z
    };
    let (hi, _) = round_derived(|prec| log_of(fmt.f_max(), prec), fmt, RoundingMode::Down);
    let (lo, _) = round_derived(|prec| log_of(fmt.s_min(), prec), fmt, RoundingMode::Up);
    Interval::new(lo, hi)
}

/// Largest symmetric interval on which tanh has not yet saturated:
/// `hi = RZ(log((4 - u)/u) / 2)` with `u = 2^-p`, stepped down one value
/// if the expression happened to be exactly representable.
pub fn derive_tanh_domain(fmt: &FloatFormat) -> Interval {
    let p = fmt.p;
    let (hi, exact) = round_derived(
        |prec| {
            // (4 - u)/u = 2^(p+2) - 1 exactly
            let arg = (Integer::from(1) << (p + 2)) - 1u32;
            let mut z = Float::with_val(prec, arg);
            z.ln_mut();
            z >>= 1;
            z
        },
        fmt,
        RoundingMode::Zero,
    );
    let hi = if exact { next_down(hi, fmt) } else { hi };
    Interval::new(-hi, hi)
}

/// Saturation bound for cosh/sinh: `RD(arcosh(f_max))` resp.
/// `RD(arsinh(f_max))`, mirrored to a symmetric interval.
pub fn derive_cosh_like_domain(fmt: &FloatFormat, func: FuncId) -> Interval {
    assert!(matches!(func, FuncId::Cosh | FuncId::Sinh));
    let (hi, _) = round_derived(
        |prec| {
            let mut z = Float::with_val(prec, fmt.f_max());
            if func == FuncId::Cosh {
                z.acosh_mut();
            } else {
                z.asinh_mut();
            }
            z
        },
        fmt,
        RoundingMode::Down,
    );
    Interval::new(-hi, hi)
}

// endpoint literals are exact decimal expansions of the format members
#[allow(clippy::excessive_precision)]
fn fixed_domain(func: FuncId, bench: BenchFormat) -> Interval {
    use BenchFormat::*;
    use FuncId::*;
    let fmt = bench.fmt();
    let full = Interval::new(-fmt.f_max(), fmt.f_max());
    match (func, bench) {
        (Acos | Asin, _) => Interval::new(-1.0, 1.0),
        (Acosh, _) => Interval::new(1.0, fmt.f_max()),
        (Asinh | Atan | Cbrt | Cos | Sin | Tan | Cospi | Sinpi | Tanpi, _) => full,
        (Atanh, _) => Interval::new(next_up(-1.0, fmt), next_down(1.0, fmt)),
        (Log | Log10 | Log2, _) => Interval::new(fmt.s_min(), fmt.f_max()),
        (Log1p, _) => Interval::new(next_up(-1.0, fmt), fmt.f_max()),
        (Sqrt, _) => Interval::new(0.0, fmt.f_max()),

        (Exp, Binary16) => Interval::new(-16.625, 11.0859375),
        (Exp, Binary32) => Interval::new(-103.27892303466796875, 88.72283172607421875),
        (Exp10, Binary16) => Interval::new(-7.22265625, 4.8125),
        // upper endpoint is RD(log10(f_max)); the published variant one
        // step up is the RN value, where 10^x already exceeds 2^128
        (Exp10, Binary32) => Interval::new(-44.853466033935546875, 38.53183746337890625),
        (Exp2, Binary16) => Interval::new(-24.0, 15.9921875),
        (Exp2, Binary32) => Interval::new(-149.0, 127.99999237060546875),
        (Cosh | Sinh, Binary16) => Interval::new(-11.78125, 11.78125),
        (Cosh | Sinh, Binary32) => {
            Interval::new(-89.415985107421875, 89.415985107421875)
        }
        (Tanh, Binary16) => Interval::new(-4.50390625, 4.50390625),
        (Tanh, Binary32) => {
            Interval::new(-9.01091289520263671875, 9.01091289520263671875)
        }

        (Exp, Binary64) => derive_exp_like_domain(fmt, ExpBase::E),
        (Exp10, Binary64) => derive_exp_like_domain(fmt, ExpBase::Ten),
        (Exp2, Binary64) => derive_exp_like_domain(fmt, ExpBase::Two),
        (Cosh, Binary64) => derive_cosh_like_domain(fmt, Cosh),
        (Sinh, Binary64) => derive_cosh_like_domain(fmt, Sinh),
        (Tanh, Binary64) => derive_tanh_domain(fmt),
    }
}

/// Format-independent curated inputs, tested whenever they fall inside the
/// function's domain. The exp entry is the classic difficult case for
/// 8-bit output precision.
fn curated_points(func: FuncId) -> &'static [f64] {
    match func {
        FuncId::Exp => &[1.46875],
        FuncId::Log | FuncId::Log2 | FuncId::Log10 => &[1.0],
        FuncId::Cospi | FuncId::Sinpi | FuncId::Tanpi => &[0.25, 2.5],
        _ => &[],
    }
}

/// Assemble the always-tested point list for one function and domain.
pub fn special_points_for(func: FuncId, domain: Interval, fmt: &FloatFormat) -> Vec<f64> {
    let mut pts = vec![domain.lo, domain.hi];
    if domain.contains(0.0) {
        pts.push(0.0);
        if func.is_odd() {
            pts.push(-0.0);
        }
    }
    for &c in curated_points(func) {
        debug_assert_eq!(c, round_to_format(&Float::with_val(60, c), fmt, RoundingMode::Zero));
        if domain.contains(c) {
            pts.push(c);
        }
    }
    pts
}

/// One function under test with its per-format data.
#[derive(Debug, Clone)]
pub struct FunctionSpec {
    pub id: FuncId,
    domains: [Interval; 3],
    specials: [Vec<f64>; 3],
    dropped_specials: [u64; 3],
}

impl FunctionSpec {
    fn build(id: FuncId) -> Self {
        let domains = [
            fixed_domain(id, BenchFormat::Binary16),
            fixed_domain(id, BenchFormat::Binary32),
            fixed_domain(id, BenchFormat::Binary64),
        ];
        let specials = [
            special_points_for(id, domains[0], BenchFormat::Binary16.fmt()),
            special_points_for(id, domains[1], BenchFormat::Binary32.fmt()),
            special_points_for(id, domains[2], BenchFormat::Binary64.fmt()),
        ];
        FunctionSpec {
            id,
            domains,
            specials,
            dropped_specials: [0; 3],
        }
    }

    pub fn domain(&self, bench: BenchFormat) -> Interval {
        self.domains[bench.index()]
    }

    pub fn special_points(&self, bench: BenchFormat) -> &[f64] {
        &self.specials[bench.index()]
    }

    /// Out-of-domain points dropped while loading worst-case files.
    pub fn dropped_special_points(&self, bench: BenchFormat) -> u64 {
        self.dropped_specials[bench.index()]
    }
}

#[derive(Debug, Error)]
pub enum RegistryError {
    #[error("domain endpoint check failed for {func} in {format}: {detail}")]
    EndpointCheck {
        func: &'static str,
        format: &'static str,
        detail: String,
    },
    #[error("worst-case file {path}: {source}")]
    WorstcaseIo {
        path: String,
        source: std::io::Error,
    },
    #[error("worst-case file {path} line {line}: {detail}")]
    WorstcaseParse {
        path: String,
        line: usize,
        detail: String,
    },
}

/// Immutable-after-startup catalog; safe for concurrent reads.
#[derive(Debug, Clone)]
pub struct Registry {
    specs: Vec<FunctionSpec>,
}

impl Registry {
    /// Build the full 24-function catalog (derives binary64 domains).
    pub fn new() -> Self {
        Self::with_functions(&FuncId::ALL)
    }

    /// Build a catalog restricted to `subset`, kept in registry order.
    pub fn with_functions(subset: &[FuncId]) -> Self {
        let specs = FuncId::ALL
            .into_iter()
            .filter(|f| subset.contains(f))
            .map(FunctionSpec::build)
            .collect();
        Registry { specs }
    }

    pub fn functions(&self) -> impl Iterator<Item = &FunctionSpec> {
        self.specs.iter()
    }

    pub fn len(&self) -> usize {
        self.specs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.specs.is_empty()
    }

    pub fn get(&self, func: FuncId) -> Option<&FunctionSpec> {
        self.specs.iter().find(|s| s.id == func)
    }

    pub fn domain_of(&self, func: FuncId, bench: BenchFormat) -> Option<Interval> {
        self.get(func).map(|s| s.domain(bench))
    }

    /// Native evaluation of `func` at the format member `x` under the
    /// format's platform convention.
    pub fn eval_native(&self, func: FuncId, bench: BenchFormat, x: f64) -> f64 {
        match bench {
            BenchFormat::Binary16 => native::eval_binary16(func, x),
            BenchFormat::Binary32 => native::eval_native::<f32>(func, x as f32) as f64,
            BenchFormat::Binary64 => native::eval_native::<f64>(func, x),
        }
    }

    /// Startup check: reference evaluation at both interval endpoints never
    /// overflows the format. A failure here means a domain-table bug.
    pub fn validate_domains(&self) -> Result<(), RegistryError> {
        for bench in BenchFormat::ALL {
            let mut ctx = RefCtx::new(bench.fmt());
            let mut val = Float::new(ctx.bits());
            for spec in &self.specs {
                let d = spec.domain(bench);
                for x in [d.lo, d.hi] {
                    let fail = |detail: String| RegistryError::EndpointCheck {
                        func: spec.id.name(),
                        format: bench.name(),
                        detail,
                    };
                    ctx.eval_into(&mut val, spec.id, x)
                        .map_err(|e| fail(format!("reference eval at {x:e}: {e}")))?;
                    refeval::check_no_overflow(&val, bench.fmt()).map_err(|_| {
                        fail(format!("|RZ(f({x:e}))| exceeds f_max"))
                    })?;
                }
            }
        }
        Ok(())
    }

    /// Load hardest-to-round input files: one file per (function, format)
    /// at `<dir>/<format>/<function>.txt`, one hex encoding per line,
    /// `#` comments allowed. Out-of-domain points are dropped and counted.
    pub fn load_worstcases(&mut self, dir: &Path) -> Result<WorstcaseSummary, RegistryError> {
        let mut summary = WorstcaseSummary::default();
        for bench in BenchFormat::ALL {
            for spec in &mut self.specs {
                let path = dir.join(bench.name()).join(format!("{}.txt", spec.id.name()));
                if !path.is_file() {
                    continue;
                }
                let display = path.display().to_string();
                let file = std::fs::File::open(&path).map_err(|source| {
                    RegistryError::WorstcaseIo {
                        path: display.clone(),
                        source,
                    }
                })?;
                summary.files += 1;
                let domain = spec.domain(bench);
                for (no, line) in BufReader::new(file).lines().enumerate() {
                    let line = line.map_err(|source| RegistryError::WorstcaseIo {
                        path: display.clone(),
                        source,
                    })?;
                    let token = line.split('#').next().unwrap_or("").trim();
                    if token.is_empty() {
                        continue;
                    }
                    let x = fpcore::decode_hex(token, bench.fmt()).map_err(|e| {
                        RegistryError::WorstcaseParse {
                            path: display.clone(),
                            line: no + 1,
                            detail: e.to_string(),
                        }
                    })?;
                    if domain.contains(x) {
                        spec.specials[bench.index()].push(x);
                        summary.points += 1;
                    } else {
                        spec.dropped_specials[bench.index()] += 1;
                        summary.dropped += 1;
                    }
                }
            }
        }
        Ok(summary)
    }
}

impl Default for Registry {
    fn default() -> Self {
        Self::new()
    }
}

#[derive(Debug, Default, Clone, Copy, PartialEq, Eq)]
pub struct WorstcaseSummary {
    pub files: usize,
    pub points: usize,
    pub dropped: usize,
}

#[cfg(test)]
#[allow(clippy::excessive_precision)]
mod tests {
    use super::*;
    use crate::fpcore::BFLOAT16;

    #[test]
    fn domain_table_examples() {
        let reg = Registry::new();
        assert_eq!(
            reg.domain_of(FuncId::Exp, BenchFormat::Binary16).unwrap(),
            Interval::new(-16.625, 11.0859375)
        );
        assert_eq!(
            reg.domain_of(FuncId::Tanh, BenchFormat::Binary32).unwrap(),
            Interval::new(-9.01091289520263671875, 9.01091289520263671875)
        );
        let atanh16 = reg.domain_of(FuncId::Atanh, BenchFormat::Binary16).unwrap();
        assert_eq!(atanh16.lo, next_up(-1.0, &BINARY16));
        assert_eq!(atanh16.hi, next_down(1.0, &BINARY16));
        assert_eq!(atanh16.hi, 1.0 - fpcore::pow2(-11));
    }

    #[test]
    fn derivations_reproduce_fixed_tables() {
        // Table-vs-formula consistency for both fixed formats
        for (bench, fmt) in [
            (BenchFormat::Binary16, &BINARY16),
            (BenchFormat::Binary32, &BINARY32),
        ] {
            assert_eq!(
                derive_exp_like_domain(fmt, ExpBase::E),
                fixed_domain(FuncId::Exp, bench),
                "exp {bench}"
            );
            assert_eq!(
                derive_exp_like_domain(fmt, ExpBase::Two),
                fixed_domain(FuncId::Exp2, bench),
                "exp2 {bench}"
            );
            assert_eq!(
                derive_exp_like_domain(fmt, ExpBase::Ten),
                fixed_domain(FuncId::Exp10, bench),
                "exp10 {bench}"
            );
            assert_eq!(
                derive_tanh_domain(fmt),
                fixed_domain(FuncId::Tanh, bench),
                "tanh {bench}"
            );
            assert_eq!(
                derive_cosh_like_domain(fmt, FuncId::Cosh),
                fixed_domain(FuncId::Cosh, bench),
                "cosh {bench}"
            );
            assert_eq!(
                derive_cosh_like_domain(fmt, FuncId::Sinh),
                fixed_domain(FuncId::Sinh, bench),
                "sinh {bench}"
            );
        }
    }

    #[test]
    fn derived_exp_domain_for_8bit_format() {
        let d = derive_exp_like_domain(&BFLOAT16, ExpBase::E);
        // endpoints land inside the format and exp stays finite there
        assert!(d.lo < 0.0 && d.hi > 0.0);
        assert!(d.hi.exp() <= BFLOAT16.f_max());
        assert!(d.lo.exp() >= BFLOAT16.s_min());
    }

    #[test]
    fn tanh_binary64_boundary_oracle() {
        // native-independent check: tanh(hi) < 1 - u/2 <= tanh(next_up(hi))
        let d = derive_tanh_domain(&BINARY64);
        let mut thresh = Float::with_val(200, BINARY64.u());
        thresh >>= 1;
        thresh = 1.0 - thresh;
        let t_hi = Float::with_val(200, d.hi).tanh();
        let t_next = Float::with_val(200, next_up(d.hi, &BINARY64)).tanh();
        assert!(t_hi < thresh);
        assert!(t_next >= thresh);
    }

    #[test]
    fn domain_family_patterns() {
        let reg = Registry::new();
        for bench in BenchFormat::ALL {
            let fmt = bench.fmt();
            for f in [FuncId::Log, FuncId::Log10, FuncId::Log2] {
                let d = reg.domain_of(f, bench).unwrap();
                assert_eq!(d, Interval::new(fmt.s_min(), fmt.f_max()), "{f} {bench}");
            }
            assert_eq!(
                reg.domain_of(FuncId::Sqrt, bench).unwrap(),
                Interval::new(0.0, fmt.f_max())
            );
            for f in [FuncId::Acos, FuncId::Asin] {
                assert_eq!(reg.domain_of(f, bench).unwrap(), Interval::new(-1.0, 1.0));
            }
        }
    }

    #[test]
    fn special_points_lie_in_domain() {
        let reg = Registry::new();
        for spec in reg.functions() {
            for bench in BenchFormat::ALL {
                let d = spec.domain(bench);
                for &x in spec.special_points(bench) {
                    assert!(d.contains(x), "{} {} {x:e}", spec.id, bench);
                }
            }
        }
    }

    #[test]
    fn exp_specials_include_difficult_case_for_8bit() {
        // the classic e^1.46875 difficult case stays in any exp domain that
        // an 8-bit-precision format induces
        let d = derive_exp_like_domain(&BFLOAT16, ExpBase::E);
        let pts = special_points_for(FuncId::Exp, d, &BFLOAT16);
        assert!(pts.contains(&1.46875));
    }

    #[test]
    fn registry_order_and_filter() {
        let reg = Registry::new();
        let names: Vec<_> = reg.functions().map(|s| s.id.name()).collect();
        assert_eq!(names.len(), 24);
        assert_eq!(names[0], "acos");
        assert_eq!(names[23], "tanpi");
        let sub = Registry::with_functions(&[FuncId::Tanh, FuncId::Exp]);
        let names: Vec<_> = sub.functions().map(|s| s.id.name()).collect();
        assert_eq!(names, ["exp", "tanh"]);
    }

    #[test]
    fn startup_endpoint_check_all_domains() {
        Registry::new().validate_domains().unwrap();
    }

    #[test]
    fn worstcase_loading_drops_out_of_domain_points() {
        use std::io::Write;
        let dir = tempfile::tempdir().unwrap();
        let sub = dir.path().join("binary16");
        std::fs::create_dir(&sub).unwrap();
        let mut f = std::fs::File::create(sub.join("exp.txt")).unwrap();
        // 1.46875 = 0x3DE0, 1.0 = 0x3C00, 4000.0 = 0x6BD0 (out of exp16 domain)
        writeln!(f, "# worst cases for exp / binary16").unwrap();
        writeln!(f, "3DE0").unwrap();
        writeln!(f, "3C00  # one").unwrap();
        writeln!(f, "6BD0").unwrap();
        drop(f);
        let mut reg = Registry::with_functions(&[FuncId::Exp]);
        let before = reg.get(FuncId::Exp).unwrap().special_points(BenchFormat::Binary16).len();
        let summary = reg.load_worstcases(dir.path()).unwrap();
        assert_eq!(summary.files, 1);
        assert_eq!(summary.points, 2);
        assert_eq!(summary.dropped, 1);
        let spec = reg.get(FuncId::Exp).unwrap();
        assert_eq!(spec.special_points(BenchFormat::Binary16).len(), before + 2);
        assert_eq!(spec.dropped_special_points(BenchFormat::Binary16), 1);
        assert!(spec.special_points(BenchFormat::Binary16).contains(&1.46875));
    }

    #[test]
    fn unknown_function_name_is_rejected() {
        assert!(FuncId::parse("expm1").is_none());
        assert_eq!(FuncId::parse("exp"), Some(FuncId::Exp));
    }
}
