//! Reference evaluation and the ULP error metric.
//!
//! The reference backend is MPFR: each function is evaluated correctly
//! rounded (to nearest) at the policy precision, `p + 20` bits for a
//! format of precision `p` — 31, 44 and 73 bits for binary16/32/64. That
//! is enough for the error quotient
//!
//! ```text
//! err(x) = |native(x) - ref(x)| / ulp(RZ(ref(x)))
//! ```
//!
//! to come out accurate to at least six decimal digits, which separates
//! maxima like 0.49993 from 0.50001 ULP.
//!
//! The denominator needs the reference rounded toward zero. Rather than
//! flipping any global rounding state, the ulp is computed from the
//! round-to-nearest value and halved exactly when that rounding stepped up
//! onto a power of two (the one case where RZ would have stayed in the
//! binade below, where the grid is twice as fine). The numerator is
//! computed at the reference precision with the native output injected
//! exactly, and the closing division is an exact exponent shift because
//! the denominator is a power of two.
//!
//! Contexts are not shared: each worker owns a [`RefCtx`]. Everything here
//! is pure given a context; no global rounding state is ever touched.

use rug::float::Round;
use rug::ops::AssignRound;
use rug::{Assign, Float};
use thiserror::Error;

use crate::fpcore::{
    self, floor_log2, is_pow2_f64, round_with_scratch, FloatFormat, RoundingMode,
};
use crate::registry::FuncId;

/// Reference working precision for a format: `p + 20` bits.
///
/// Raising this changes measured errors by less than `1e-6` ULP; see the
/// precision-invariance test.
pub fn policy_bits(fmt: &FloatFormat) -> u32 {
    fmt.p + 20
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("{func} is undefined at the given input")]
pub struct DomainError {
    pub func: &'static str,
}

/// Reference value would leave the format's finite range under RZ.
#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
#[error("reference value overflows the target format")]
pub struct Overflow;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum UlpError {
    #[error(transparent)]
    Overflow(#[from] Overflow),
    #[error("native output is NaN")]
    NativeNan,
    #[error("native output is infinite but the reference is finite")]
    NativeInfinite,
}

/// Why a tested point produced no numeric error value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SkipReason {
    /// Reference result at or beyond the format's finite range
    /// (tanpi asymptotes).
    Asymptote,
    /// Input outside the function's mathematical domain.
    DomainError,
    /// Native result infinite while the reference is finite.
    NativeInfinite,
}

impl SkipReason {
    pub fn describe(self) -> &'static str {
        match self {
            SkipReason::Asymptote => "reference overflow near an asymptote",
            SkipReason::DomainError => "input outside mathematical domain",
            SkipReason::NativeInfinite => "native infinity with finite reference",
        }
    }
}

/// Outcome of testing one input.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Outcome {
    Measured { err_ulps: f64 },
    Skipped(SkipReason),
    /// Native NaN where the reference is finite: a failure category of its
    /// own, never folded into the numeric maximum.
    NativeNan,
}

/// One tested input with its native output, reference value and outcome.
#[derive(Debug, Clone)]
pub struct ErrorRecord {
    pub input: f64,
    pub native_out: f64,
    /// Reference value at policy precision, when it was computable.
    pub ref_value: Option<Float>,
    pub outcome: Outcome,
}

impl ErrorRecord {
    pub fn err_ulps(&self) -> Option<f64> {
        match self.outcome {
            Outcome::Measured { err_ulps } => Some(err_ulps),
            _ => None,
        }
    }
}

/// Ok iff the reference value rounded toward zero stays finite, i.e.
/// `|RZ(ref)| <= f_max`, which holds exactly when `|ref| < 2^(emax + 1)`.
///
/// Domains are constructed so this never fires during a sweep except at
/// isolated asymptotes; a failure at a domain endpoint is a table bug and
/// is surfaced as a hard error at startup.
pub fn check_no_overflow(ref_value: &Float, fmt: &FloatFormat) -> Result<(), Overflow> {
    if ref_value.is_nan() {
        return Ok(());
    }
    if ref_value.is_infinite() {
        return Err(Overflow);
    }
    match ref_value.get_exp() {
        // |ref| in [2^(E-1), 2^E) stays below 2^(emax+1) iff E <= emax + 1
        Some(e) if e > fmt.emax + 1 => Err(Overflow),
        _ => Ok(()),
    }
}

/// Per-worker reference evaluation context.
///
/// Owns the MPFR scratch space for one format at one working precision, so
/// the per-point pipeline allocates nothing.
pub struct RefCtx {
    fmt: FloatFormat,
    bits: u32,
    rnd_main: Float,
    rnd_sub: Float,
    nat: Float,
    num: Float,
}

impl RefCtx {
    /// Context at the format's policy precision.
    pub fn new(fmt: &FloatFormat) -> Self {
        Self::with_bits(fmt, policy_bits(fmt))
    }

    /// Context at an explicit working precision (>= p + 20 for full
    /// accuracy guarantees; oracles use 200).
    pub fn with_bits(fmt: &FloatFormat, bits: u32) -> Self {
        RefCtx {
            fmt: *fmt,
            bits,
            rnd_main: Float::new(fmt.p),
            rnd_sub: Float::new(fmt.p),
            nat: Float::new(53),
            num: Float::new(bits),
        }
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn format(&self) -> &FloatFormat {
        &self.fmt
    }

    /// Fresh reference-result buffer at this context's precision.
    pub fn new_value(&self) -> Float {
        Float::new(self.bits)
    }

    /// Evaluate the reference function into `out` (correctly rounded RN at
    /// `out`'s precision). `x` must inject exactly, which holds for any
    /// member of a format with `p <= out.prec()`.
    pub fn eval_into(
        &mut self,
        out: &mut Float,
        func: FuncId,
        x: f64,
    ) -> Result<(), DomainError> {
        out.assign(x);
        apply_ref_func(out, func);
        if out.is_nan() {
            return Err(DomainError { func: func.name() });
        }
        Ok(())
    }

    /// Round a high-precision value into this context's format.
    pub fn round(&mut self, value: &Float, mode: RoundingMode) -> f64 {
        round_with_scratch(value, &self.fmt, mode, &mut self.rnd_main, &mut self.rnd_sub)
    }

    /// `ulp(RZ(ref_value))` computed without any directed rounding:
    /// take `ulp(RN(ref_value))` and halve it exactly when RN rounded the
    /// magnitude up onto a power of two `2^k`, `k` in `[emin+1, emax]`.
    pub fn ulp_rz_of_reference(&mut self, ref_value: &Float) -> Result<f64, Overflow> {
        check_no_overflow(ref_value, &self.fmt)?;
        if ref_value.is_zero() {
            return Ok(self.fmt.s_min());
        }
        let rn = self.round(ref_value, RoundingMode::Nearest);
        if rn.is_infinite() {
            // RN overflowed but RZ clamps to f_max, whose ulp applies
            return Ok(fpcore::ulp(self.fmt.f_max(), &self.fmt));
        }
        let u = fpcore::ulp(rn, &self.fmt);
        if is_pow2_f64(rn) {
            let k = floor_log2(rn.abs());
            if k > self.fmt.emin && k <= self.fmt.emax && {
                // |RN(ref)| > |ref|: the rounding stepped up onto 2^k
                let below = ref_value.as_abs();
                *below < rn.abs()
            } {
                return Ok(u / 2.0);
            }
        }
        Ok(u)
    }

    /// Eq.-style ULP error of a native output against the reference value.
    ///
    /// The numerator is computed at the reference precision with
    /// `native_out` injected exactly; the division is an exact shift.
    /// Accurate to at least six decimal digits at policy precision.
    pub fn ulp_error(&mut self, native_out: f64, ref_value: &Float) -> Result<f64, UlpError> {
        // reference overflow (asymptote) takes precedence over native
        // misbehaviour: near a pole both sides blow up together
        let u = self.ulp_rz_of_reference(ref_value)?;
        if native_out.is_nan() {
            return Err(UlpError::NativeNan);
        }
        if native_out.is_infinite() {
            return Err(UlpError::NativeInfinite);
        }
        if self.num.prec() != ref_value.prec() {
            self.num.set_prec(ref_value.prec());
        }
        self.nat.assign(native_out);
        self.num
            .assign_round(&self.nat - ref_value, Round::Nearest);
        self.num.abs_mut();
        let q = floor_log2(u);
        self.num >>= q;
        // finite for any plausible native output; a platform wrong by
        // ~2^2000 quotients would read back as +inf in the report
        Ok(self.num.to_f64())
    }
}

/// Render a reference value with its precision's worth of decimal digits,
/// `ceil(bits * log10(2)) + 1`.
pub fn render_reference(value: &Float) -> String {
    if value.is_zero() {
        return if value.is_sign_negative() { "-0.0" } else { "0.0" }.to_string();
    }
    if !value.is_finite() {
        return if value.is_sign_negative() { "-inf" } else { "inf" }.to_string();
    }
    let digits = (value.prec() as f64 * std::f64::consts::LOG10_2).ceil() as usize + 1;
    value.to_string_radix(10, Some(digits))
}

/// One-shot reference evaluation at an explicit precision.
pub fn reference_eval(func: FuncId, x: f64, bits: u32) -> Result<Float, DomainError> {
    let mut out = Float::new(bits);
    out.assign(x);
    apply_ref_func(&mut out, func);
    if out.is_nan() {
        return Err(DomainError { func: func.name() });
    }
    Ok(out)
}

fn apply_ref_func(out: &mut Float, func: FuncId) {
    use FuncId::*;
    match func {
        Acos => out.acos_mut(),
        Acosh => out.acosh_mut(),
        Asin => out.asin_mut(),
        Asinh => out.asinh_mut(),
        Atan => out.atan_mut(),
        Atanh => out.atanh_mut(),
        Cbrt => out.cbrt_mut(),
        Cos => out.cos_mut(),
        Cosh => out.cosh_mut(),
        Exp => out.exp_mut(),
        Exp10 => out.exp10_mut(),
        Exp2 => out.exp2_mut(),
        Log => out.ln_mut(),
        Log10 => out.log10_mut(),
        Log1p => out.ln_1p_mut(),
        Log2 => out.log2_mut(),
        Sin => out.sin_mut(),
        Sinh => out.sinh_mut(),
        Sqrt => out.sqrt_mut(),
        Tan => out.tan_mut(),
        Tanh => out.tanh_mut(),
        Cospi => out.cos_pi_mut(),
        Sinpi => out.sin_pi_mut(),
        Tanpi => out.tan_pi_mut(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fpcore::{next_up, pow2, round_to_format, unrank, BINARY16, BINARY32, BINARY64};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn policy_precisions() {
        assert_eq!(policy_bits(&BINARY16), 31);
        assert_eq!(policy_bits(&BINARY32), 44);
        assert_eq!(policy_bits(&BINARY64), 73);
    }

    #[test]
    fn worked_exponential_difficult_case() {
        // e^1.46875 at 30 bits rounds toward zero, at 8 bits of precision,
        // to binary 100.01011 = 4.34375
        let v = reference_eval(FuncId::Exp, 1.46875, 30).unwrap();
        let fmt8 = crate::fpcore::BFLOAT16;
        assert_eq!(round_to_format(&v, &fmt8, RoundingMode::Zero), 4.34375);
    }

    #[test]
    fn exact_fixed_points() {
        let v = reference_eval(FuncId::Sqrt, 1.0, 53).unwrap();
        assert_eq!(v, 1.0);
        let v = reference_eval(FuncId::Log, 1.0, 31).unwrap();
        assert!(v.is_zero());
    }

    #[test]
    fn policy_value_consistent_with_200_bits() {
        // sin(0.5) at 44 bits agrees with the 200-bit value to 2^-44 rel.
        let x = 0.5f64;
        let lo = reference_eval(FuncId::Sin, x, 44).unwrap();
        let hi = reference_eval(FuncId::Sin, x, 200).unwrap();
        let rel = Float::with_val(200, &lo - &hi) / hi.clone();
        assert!(rel.abs() <= pow2(-44));
    }

    #[test]
    fn domain_error_is_signalled() {
        assert!(reference_eval(FuncId::Log, -1.0, 44).is_err());
        assert!(reference_eval(FuncId::Asin, 2.0, 44).is_err());
    }

    #[test]
    fn overflow_check_examples() {
        let fmt = &BINARY16;
        let fmax = fmt.f_max();
        let just_above = Float::with_val(80, fmax) + Float::with_val(80, 0.4 * pow2(5));
        assert!(check_no_overflow(&just_above, fmt).is_ok());
        let double = Float::with_val(80, 2.0 * fmax);
        assert!(check_no_overflow(&double, fmt).is_err());
        let inf = Float::with_val(80, f64::INFINITY);
        assert!(check_no_overflow(&inf, fmt).is_err());
    }

    #[test]
    fn exp_domain_never_overflows_exhaustively_binary16() {
        // the whole Table-style exp domain keeps RZ(exp(x)) finite
        let reg = crate::registry::Registry::with_functions(&[FuncId::Exp]);
        let bench = crate::registry::BenchFormat::Binary16;
        let d = reg.domain_of(FuncId::Exp, bench).unwrap();
        let fmt = &BINARY16;
        let mut ctx = RefCtx::new(fmt);
        let mut val = ctx.new_value();
        for i in fpcore::rank(d.lo, fmt)..=fpcore::rank(d.hi, fmt) {
            let x = unrank(i, fmt);
            ctx.eval_into(&mut val, FuncId::Exp, x).unwrap();
            assert!(check_no_overflow(&val, fmt).is_ok(), "x={x}");
        }
    }

    #[test]
    fn ulp_rz_halving_examples() {
        let fmt = &BINARY16;
        let mut ctx = RefCtx::new(fmt);
        // slightly below 2.0: RN lands on 2.0, RZ stays below, ulp halves
        let just_under_two = Float::with_val(60, 2.0) - pow2(-30);
        assert_eq!(ctx.ulp_rz_of_reference(&just_under_two).unwrap(), pow2(-10));
        // representable value: no branch
        let v = Float::with_val(60, 1.5);
        assert_eq!(ctx.ulp_rz_of_reference(&v).unwrap(), pow2(-10));
        // underflow to zero uses the subnormal ulp
        let tiny = Float::with_val(60, 1e-12);
        assert_eq!(ctx.ulp_rz_of_reference(&tiny).unwrap(), fmt.s_min());
        // just below the smallest normal: same gap on either side, no halve
        let near_fmin = Float::with_val(60, fmt.f_min()) - pow2(-40);
        assert_eq!(ctx.ulp_rz_of_reference(&near_fmin).unwrap(), fmt.s_min());
    }

    fn random_real(rng: &mut ChaCha8Rng, fmt: &FloatFormat, prec: u32) -> Float {
        // log-uniform over the finite range including the subnormal zone
        // and the sliver just above f_max where RZ still clamps
        let e = rng.random_range(fmt.emin - fmt.p as i32 - 2..=fmt.emax + 1);
        let mut f = if rng.random_range(0..4) == 0 {
            // snap near a power of two to stress the halving branch
            Float::with_val(prec, 1.0)
                + (Float::with_val(prec, rng.random_range(-8i32..=8)) >> (fmt.p + 3))
        } else {
            let mut mant = rug::Integer::from(1u32) << (prec - 1);
            for limb in 0..prec.div_ceil(64) {
                mant ^= rug::Integer::from(rng.random::<u64>()) << (64 * limb);
            }
            mant |= rug::Integer::from(1u32) << (prec - 1);
            Float::with_val(prec, mant) >> (prec as i32 - 1)
        };
        // f in [0.5, 2); scale into the binade of 2^e
        f <<= e;
        if rng.random() {
            f = -f;
        }
        f
    }

    #[test]
    fn ulp_rz_matches_direct_rz_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for fmt in [&BINARY16, &BINARY32, &BINARY64] {
            let mut ctx = RefCtx::new(fmt);
            for _ in 0..10_000 {
                let v = random_real(&mut rng, fmt, policy_bits(fmt));
                if check_no_overflow(&v, fmt).is_err() {
                    continue;
                }
                let got = ctx.ulp_rz_of_reference(&v).unwrap();
                let rz = round_to_format(&v, fmt, RoundingMode::Zero);
                assert_eq!(got, fpcore::ulp(rz, fmt), "{} v={:e}", fmt.name, v.to_f64());
            }
        }
    }

    #[test]
    fn ulp_error_identity_and_one_ulp() {
        let fmt = &BINARY16;
        let mut ctx = RefCtx::new(fmt);
        let v = Float::with_val(31, 1.5f64);
        assert_eq!(ctx.ulp_error(1.5, &v).unwrap(), 0.0);
        let next = next_up(1.5, fmt);
        assert_eq!(ctx.ulp_error(next, &v).unwrap(), 1.0);
    }

    #[test]
    fn ulp_error_six_digit_resolution() {
        // reference placed at known sub-ulp offsets from a member
        let fmt = &BINARY16;
        let mut ctx = RefCtx::new(fmt);
        for (offset, expect) in [(0.49993f64, 0.49993), (0.50001, 0.50001)] {
            let v = 1.0 + 100.0 * pow2(-10); // mid-binade member
            let u = fpcore::ulp(v, fmt);
            let reference = Float::with_val(200, v) + Float::with_val(200, offset) * u;
            let err = ctx.ulp_error(v, &reference).unwrap();
            assert!((err - expect).abs() < 1e-10, "err={err}");
        }
    }

    #[test]
    fn ulp_error_invariant_under_reference_precision() {
        // err at policy bits vs at 200 bits differs by < 1e-6
        let fmt = &BINARY16;
        let reg = crate::registry::Registry::with_functions(&[FuncId::Exp]);
        let bench = crate::registry::BenchFormat::Binary16;
        let d = reg.domain_of(FuncId::Exp, bench).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut ctx_policy = RefCtx::new(fmt);
        let mut ctx_hi = RefCtx::with_bits(fmt, 200);
        let (rlo, rhi) = (fpcore::rank(d.lo, fmt), fpcore::rank(d.hi, fmt));
        let mut val_p = ctx_policy.new_value();
        let mut val_h = ctx_hi.new_value();
        for _ in 0..1000 {
            let x = unrank(rng.random_range(rlo..=rhi), fmt);
            let native = reg.eval_native(FuncId::Exp, bench, x);
            ctx_policy.eval_into(&mut val_p, FuncId::Exp, x).unwrap();
            ctx_hi.eval_into(&mut val_h, FuncId::Exp, x).unwrap();
            let e1 = ctx_policy.ulp_error(native, &val_p).unwrap();
            let e2 = ctx_hi.ulp_error(native, &val_h).unwrap();
            assert!((e1 - e2).abs() < 1e-6, "x={x} e1={e1} e2={e2}");
        }
    }

    #[test]
    fn nan_native_is_a_distinct_category() {
        let fmt = &BINARY16;
        let mut ctx = RefCtx::new(fmt);
        let v = Float::with_val(31, 1.5f64);
        assert_eq!(ctx.ulp_error(f64::NAN, &v), Err(UlpError::NativeNan));
        assert_eq!(
            ctx.ulp_error(f64::INFINITY, &v),
            Err(UlpError::NativeInfinite)
        );
    }

    #[test]
    fn correctly_rounded_native_stays_at_half_ulp() {
        // sqrt is IEEE-correctly-rounded: every tested input errs <= 0.5 + 1e-5
        let fmt = &BINARY16;
        let reg = crate::registry::Registry::with_functions(&[FuncId::Sqrt]);
        let bench = crate::registry::BenchFormat::Binary16;
        let mut ctx = RefCtx::new(fmt);
        let mut val = ctx.new_value();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..2000 {
            let x = unrank(
                rng.random_range(fpcore::rank(0.0, fmt)..fmt.rank_count()),
                fmt,
            );
            let native = reg.eval_native(FuncId::Sqrt, bench, x);
            ctx.eval_into(&mut val, FuncId::Sqrt, x).unwrap();
            let err = ctx.ulp_error(native, &val).unwrap();
            assert!(err <= 0.5 + 1e-5, "x={x} err={err}");
        }
    }
}
