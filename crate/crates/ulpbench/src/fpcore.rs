//! Floating-point format descriptors and bit-level operations.
//!
//! A [`FloatFormat`] describes a binary IEEE-style format by its exponent
//! range and precision. Values of any supported format are carried in `f64`
//! (every finite binary16, bfloat16 and binary32 value embeds exactly into
//! `f64`, and binary64 is `f64`). On top of the descriptor this module
//! provides:
//!
//! * the ULP function over the reals,
//! * neighbour stepping (`next_up` / `next_down`),
//! * an order-preserving bijection between finite values and a contiguous
//!   integer range (`rank` / `unrank`), used for enumeration and chunking,
//! * rounding of exact `f64` values and of arbitrary-precision reals into a
//!   format under the four IEEE rounding modes,
//! * interchange-encoding helpers (`encode_hex` / `decode_hex`).
//!
//! Signed zero is collapsed to a single rank; `-0.0` is still preserved as
//! a value (and in encodings) wherever it flows through untouched.

use rug::float::Round;
use rug::ops::AssignRound;
use rug::Float;
use thiserror::Error;

/// One of the four required IEEE 754 rounding modes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RoundingMode {
    /// Round to nearest, ties to even significand.
    Nearest,
    /// Round toward positive infinity.
    Up,
    /// Round toward negative infinity.
    Down,
    /// Round toward zero.
    Zero,
}

impl RoundingMode {
    pub const ALL: [RoundingMode; 4] = [
        RoundingMode::Nearest,
        RoundingMode::Up,
        RoundingMode::Down,
        RoundingMode::Zero,
    ];

    /// Conventional two-letter name: RN, RU, RD or RZ.
    pub fn name(self) -> &'static str {
        match self {
            RoundingMode::Nearest => "RN",
            RoundingMode::Up => "RU",
            RoundingMode::Down => "RD",
            RoundingMode::Zero => "RZ",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "RN" => Some(RoundingMode::Nearest),
            "RU" => Some(RoundingMode::Up),
            "RD" => Some(RoundingMode::Down),
            "RZ" => Some(RoundingMode::Zero),
            _ => None,
        }
    }

    fn mpfr(self) -> Round {
        match self {
            RoundingMode::Nearest => Round::Nearest,
            RoundingMode::Up => Round::Up,
            RoundingMode::Down => Round::Down,
            RoundingMode::Zero => Round::Zero,
        }
    }
}

impl std::fmt::Display for RoundingMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Descriptor of a binary floating-point format.
///
/// `emin`/`emax` bound the unbiased exponent of normal values and `p` is the
/// precision in bits (significand width including the implicit bit).
/// Subnormals are always supported; flush-to-zero is never applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FloatFormat {
    pub emin: i32,
    pub emax: i32,
    pub p: u32,
    /// Interchange encoding width in bits; required for hex reporting.
    pub total_width: Option<u32>,
    pub name: &'static str,
}

/// IEEE 754 binary16 (half precision).
pub const BINARY16: FloatFormat = FloatFormat {
    emin: -14,
    emax: 15,
    p: 11,
    total_width: Some(16),
    name: "binary16",
};

/// bfloat16: the truncated-binary32 16-bit format.
pub const BFLOAT16: FloatFormat = FloatFormat {
    emin: -126,
    emax: 127,
    p: 8,
    total_width: Some(16),
    name: "bfloat16",
};

/// IEEE 754 binary32 (single precision).
pub const BINARY32: FloatFormat = FloatFormat {
    emin: -126,
    emax: 127,
    p: 24,
    total_width: Some(32),
    name: "binary32",
};

/// IEEE 754 binary64 (double precision).
pub const BINARY64: FloatFormat = FloatFormat {
    emin: -1022,
    emax: 1023,
    p: 53,
    total_width: Some(64),
    name: "binary64",
};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FormatError {
    #[error("emin must equal 1 - emax (got emin={emin}, emax={emax})")]
    ExponentRelation { emin: i32, emax: i32 },
    #[error("precision must be in 2..=53 (got {0})")]
    Precision(u32),
    #[error("exponent range does not embed into the f64 carrier")]
    CarrierRange,
    #[error("total width {width} cannot encode exponent range with p={p}")]
    EncodingWidth { width: u32, p: u32 },
}

impl FloatFormat {
    /// Smallest positive subnormal, `2^(emin - p + 1)`.
    pub fn s_min(&self) -> f64 {
        pow2(self.emin - self.p as i32 + 1)
    }

    /// Smallest positive normal value, `2^emin`.
    pub fn f_min(&self) -> f64 {
        pow2(self.emin)
    }

    /// Largest finite value, `(2 - 2^(1-p)) * 2^emax`.
    pub fn f_max(&self) -> f64 {
        // (2^p - 1) * 2^(emax - p + 1), both factors exact
        (exp2_u64(self.p) - 1) as f64 * pow2(self.emax - self.p as i32 + 1)
    }

    /// Unit roundoff numerator, `u = 2^(-p)`.
    pub fn u(&self) -> f64 {
        pow2(-(self.p as i32))
    }

    /// Number of finite encodings, counting -0 and +0 separately.
    ///
    /// This matches the conventional "finite numbers" count for interchange
    /// formats (e.g. 2^16 - 2^11 = 63488 for binary16): all bit patterns
    /// except the infinity and NaN encodings.
    pub fn finite_count(&self) -> u64 {
        2 * (self.max_nonneg_index() + 1)
    }

    /// Number of distinct finite values, i.e. the size of the rank space
    /// (signed zero collapsed): `finite_count() - 1`.
    pub fn rank_count(&self) -> u64 {
        2 * self.max_nonneg_index() + 1
    }

    /// Rank of zero; also the largest index on the nonnegative side.
    fn max_nonneg_index(&self) -> u64 {
        (self.emax - self.emin) as u64 * exp2_u64(self.p - 1) + exp2_u64(self.p) - 1
    }

    pub fn validate(&self) -> Result<(), FormatError> {
        if self.emin != 1 - self.emax {
            return Err(FormatError::ExponentRelation {
                emin: self.emin,
                emax: self.emax,
            });
        }
        if !(2..=53).contains(&self.p) {
            return Err(FormatError::Precision(self.p));
        }
        if self.emax > 1023 || self.emin - (self.p as i32) + 1 < -1074 {
            return Err(FormatError::CarrierRange);
        }
        if let Some(w) = self.total_width {
            let we = w as i64 - self.p as i64;
            if !(2..32).contains(&we) || (1i64 << we) < 2 * self.emax as i64 + 2 {
                return Err(FormatError::EncodingWidth { width: w, p: self.p });
            }
        }
        Ok(())
    }
}

impl std::fmt::Display for FloatFormat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name)
    }
}

/// Exact `2^q` as `f64` for `q` in `[-1074, 1023]`; saturates outside.
pub(crate) fn pow2(q: i32) -> f64 {
    match q {
        -1022..=1023 => f64::from_bits(((q + 1023) as u64) << 52),
        -1074..=-1023 => f64::from_bits(1u64 << (q + 1074)),
        q if q > 1023 => f64::INFINITY,
        _ => 0.0,
    }
}

fn exp2_u64(b: u32) -> u64 {
    debug_assert!(b < 64);
    1u64 << b
}

/// `floor(log2(|x|))` for finite nonzero `x`, exact (subnormals included).
pub(crate) fn floor_log2(x: f64) -> i32 {
    debug_assert!(x.is_finite() && x != 0.0);
    let bits = x.to_bits() & !(1u64 << 63);
    let be = (bits >> 52) as i32;
    if be > 0 {
        be - 1023
    } else {
        // subnormal: value = frac * 2^-1074
        63 - bits.leading_zeros() as i32 - 1074
    }
}

/// True if `|x|` is an exact power of two.
pub(crate) fn is_pow2_f64(x: f64) -> bool {
    if x == 0.0 || !x.is_finite() {
        return false;
    }
    let bits = x.to_bits() & !(1u64 << 63);
    let frac = bits & ((1u64 << 52) - 1);
    if bits >> 52 == 0 {
        frac & (frac - 1) == 0
    } else {
        frac == 0
    }
}

/// Decompose a format member into `(negative, m, e)` with
/// `|x| = m * 2^(e - p + 1)`, `e = max(emin, floor(log2|x|))`, `m < 2^p`.
fn decompose(x: f64, fmt: &FloatFormat) -> (bool, u64, i32) {
    debug_assert!(x.is_finite());
    let neg = x.is_sign_negative();
    if x == 0.0 {
        return (neg, 0, fmt.emin);
    }
    let ax = x.abs();
    let e = floor_log2(ax).max(fmt.emin);
    let q = e - fmt.p as i32 + 1;
    // |x| = m2 * 2^(e2 - 52)
    let bits = ax.to_bits();
    let be = (bits >> 52) as i32;
    let (m2, e2) = if be > 0 {
        ((bits & ((1u64 << 52) - 1)) | (1u64 << 52), be - 1023)
    } else {
        (bits, -1022)
    };
    let shift = e2 - 52 - q;
    let m = if shift >= 0 {
        m2 << shift
    } else {
        let d = (-shift) as u32;
        debug_assert!(d < 64 && m2 & ((1u64 << d) - 1) == 0, "not a member of {}", fmt.name);
        m2 >> d
    };
    debug_assert!(m < exp2_u64(fmt.p));
    (neg, m, e)
}

/// Unit in the last place of `x` relative to `fmt`, per the usual
/// real-argument definition:
///
/// `ulp(x) = 2^(max(emin, floor(log2|x|)) - p + 1)` for `x != 0`, and
/// `2^(emin - p + 1)` (the smallest subnormal) at zero.
///
/// The result is always a power of two in `[s_min, 2^(emax - p + 1)]`
/// provided `|x| <= f_max`.
pub fn ulp(x: f64, fmt: &FloatFormat) -> f64 {
    debug_assert!(x.is_finite());
    if x == 0.0 {
        fmt.s_min()
    } else {
        pow2(floor_log2(x.abs()).max(fmt.emin) - fmt.p as i32 + 1)
    }
}

/// Order-preserving index of a finite format member.
///
/// Ranks run from `0` at `-f_max` to `rank_count() - 1` at `f_max`;
/// `-0` and `+0` share one rank.
///
/// # Panics
/// If `x` is not finite (values that are not exact members are a caller
/// bug and only caught by debug assertions).
pub fn rank(x: f64, fmt: &FloatFormat) -> u64 {
    assert!(x.is_finite(), "rank of non-finite value");
    let mid = fmt.max_nonneg_index();
    if x.is_sign_negative() && x != 0.0 {
        mid - nonneg_index(-x, fmt)
    } else {
        mid + nonneg_index(x, fmt)
    }
}

fn nonneg_index(ax: f64, fmt: &FloatFormat) -> u64 {
    if ax == 0.0 {
        return 0;
    }
    let (_, m, e) = decompose(ax, fmt);
    (e - fmt.emin) as u64 * exp2_u64(fmt.p - 1) + m
}

/// Inverse of [`rank`].
///
/// # Panics
/// If `i >= rank_count()`.
pub fn unrank(i: u64, fmt: &FloatFormat) -> f64 {
    let mid = fmt.max_nonneg_index();
    assert!(i <= 2 * mid, "rank {i} out of range for {}", fmt.name);
    if i >= mid {
        unindex(i - mid, fmt)
    } else {
        -unindex(mid - i, fmt)
    }
}

fn unindex(j: u64, fmt: &FloatFormat) -> f64 {
    if j == 0 {
        return 0.0;
    }
    let half = exp2_u64(fmt.p - 1);
    let d = j >> (fmt.p - 1);
    let r = j & (half - 1);
    let (m, e) = if d == 0 {
        (r, fmt.emin)
    } else {
        (r + half, fmt.emin + d as i32 - 1)
    };
    m as f64 * pow2(e - fmt.p as i32 + 1)
}

/// Smallest format member greater than `x`; `+inf` past `f_max`.
/// Crossing zero traverses the subnormals.
pub fn next_up(x: f64, fmt: &FloatFormat) -> f64 {
    let r = rank(x, fmt);
    if r == fmt.rank_count() - 1 {
        f64::INFINITY
    } else {
        unrank(r + 1, fmt)
    }
}

/// Largest format member smaller than `x`; `-inf` below `-f_max`.
pub fn next_down(x: f64, fmt: &FloatFormat) -> f64 {
    let r = rank(x, fmt);
    if r == 0 {
        f64::NEG_INFINITY
    } else {
        unrank(r - 1, fmt)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Frac {
    Zero,
    BelowHalf,
    Half,
    AboveHalf,
}

fn should_bump(neg: bool, k: u64, frac: Frac, mode: RoundingMode) -> bool {
    match mode {
        RoundingMode::Zero => false,
        RoundingMode::Nearest => {
            frac == Frac::AboveHalf || (frac == Frac::Half && k & 1 == 1)
        }
        RoundingMode::Up => !neg && frac != Frac::Zero,
        RoundingMode::Down => neg && frac != Frac::Zero,
    }
}

fn overflow_result(neg: bool, fmt: &FloatFormat, mode: RoundingMode) -> f64 {
    let inf = if neg { f64::NEG_INFINITY } else { f64::INFINITY };
    let cap = if neg { -fmt.f_max() } else { fmt.f_max() };
    match mode {
        RoundingMode::Nearest => inf,
        RoundingMode::Zero => cap,
        RoundingMode::Up => {
            if neg {
                cap
            } else {
                inf
            }
        }
        RoundingMode::Down => {
            if neg {
                inf
            } else {
                cap
            }
        }
    }
}

/// Round an exact `f64` into `fmt` under `mode`.
///
/// The input is taken at face value (an `f64` is an exact real), so this is
/// a single correct rounding; it is how native results wider than the
/// target format are demoted. Non-finite inputs pass through unchanged.
pub fn round_f64_to_format(x: f64, fmt: &FloatFormat, mode: RoundingMode) -> f64 {
    if !x.is_finite() {
        return x;
    }
    if x == 0.0 {
        return x;
    }
    let neg = x.is_sign_negative();
    let ax = x.abs();
    let fl = floor_log2(ax);
    let e = fl.max(fmt.emin);
    let q = e - fmt.p as i32 + 1;

    let bits = ax.to_bits();
    let be = (bits >> 52) as i32;
    let (m2, e2) = if be > 0 {
        ((bits & ((1u64 << 52) - 1)) | (1u64 << 52), be - 1023)
    } else {
        (bits, -1022)
    };
    let shift = e2 - 52 - q;
    let (k, frac) = if shift >= 0 {
        (m2 << shift, Frac::Zero)
    } else {
        let d = -shift;
        if d >= 64 {
            // entirely below one grid step: classify against 2^(q-1)
            let frac = match fl.cmp(&(q - 1)) {
                std::cmp::Ordering::Less => Frac::BelowHalf,
                std::cmp::Ordering::Equal => {
                    if m2 & (m2 - 1) == 0 {
                        Frac::Half
                    } else {
                        Frac::AboveHalf
                    }
                }
                std::cmp::Ordering::Greater => unreachable!("k would be nonzero"),
            };
            (0, frac)
        } else {
            let d = d as u32;
            let rem = m2 & ((1u64 << d) - 1);
            let half = 1u64 << (d - 1);
            let frac = if rem == 0 {
                Frac::Zero
            } else if rem < half {
                Frac::BelowHalf
            } else if rem == half {
                Frac::Half
            } else {
                Frac::AboveHalf
            };
            (m2 >> d, frac)
        }
    };

    let k = k + should_bump(neg, k, frac, mode) as u64;
    if k == 0 {
        return if neg { -0.0 } else { 0.0 };
    }
    let mag = k as f64 * pow2(q);
    if mag > fmt.f_max() {
        return overflow_result(neg, fmt, mode);
    }
    if neg {
        -mag
    } else {
        mag
    }
}

/// Round an arbitrary-precision real into `fmt` under `mode`.
///
/// Total over the extended reals: `±inf` maps to `±inf`, NaN to NaN.
/// Overflow follows the mode semantics (`RZ`/inward-directed rounding never
/// passes `±f_max`; `RN` and outward-directed rounding yield `±inf`).
///
/// Inputs should carry at least `p + 20` significant bits; lower-precision
/// inputs give mode-correct results only relative to that input.
pub fn round_to_format(x: &Float, fmt: &FloatFormat, mode: RoundingMode) -> f64 {
    let mut main = Float::new(fmt.p);
    let mut sub = Float::new(fmt.p);
    round_with_scratch(x, fmt, mode, &mut main, &mut sub)
}

/// [`round_to_format`] with caller-owned scratch space, for hot paths.
///
/// `main` must have precision `fmt.p`; `sub` is resized as needed.
pub(crate) fn round_with_scratch(
    x: &Float,
    fmt: &FloatFormat,
    mode: RoundingMode,
    main: &mut Float,
    sub: &mut Float,
) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x.is_infinite() {
        return if x.is_sign_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        };
    }
    if x.is_zero() {
        return if x.is_sign_negative() { -0.0 } else { 0.0 };
    }
    debug_assert_eq!(main.prec(), fmt.p);
    // Round the significand to p bits first; the exponent is unbounded at
    // this stage. For results in the normal range this IS the format
    // rounding, because the p-bit grid and the format grid coincide there.
    main.assign_round(x, mode.mpfr());
    let fl = main.get_exp().expect("nonzero finite") - 1;
    let neg = x.is_sign_negative();
    if fl > fmt.emax {
        return overflow_result(neg, fmt, mode);
    }
    if fl >= fmt.emin {
        return main.to_f64();
    }

    // Subnormal zone: |x| < 2^emin. Rounding onto the fixed grid
    // 2^(emin - p + 1) is the same as rounding to the reduced precision
    // that the subnormal significand retains; redo from the original x to
    // avoid double rounding.
    let q = fmt.emin - fmt.p as i32 + 1;
    let xfl = x.get_exp().expect("nonzero finite") - 1;
    let eff = xfl - q + 1;
    if eff >= 1 {
        sub.set_prec(eff as u32);
        sub.assign_round(x, mode.mpfr());
        let out = sub.to_f64();
        sub.set_prec(fmt.p);
        debug_assert!(out.abs() <= fmt.f_min());
        return out;
    }
    // |x| < 2^q: the result is 0 or ±s_min, decided against 2^(q-1).
    // |x| lies in [2^xfl, 2^(xfl+1)), so it equals the halfway point
    // exactly when xfl = q-1 and the significand is a power of two.
    let frac = match xfl.cmp(&(q - 1)) {
        std::cmp::Ordering::Less => Frac::BelowHalf,
        std::cmp::Ordering::Equal => {
            let pow2 = x
                .get_significand()
                .map(|m| m.is_power_of_two())
                .unwrap_or(false);
            if pow2 {
                Frac::Half
            } else {
                Frac::AboveHalf
            }
        }
        std::cmp::Ordering::Greater => unreachable!("bounded by the eff < 1 branch"),
    };
    if should_bump(neg, 0, frac, mode) {
        if neg {
            -fmt.s_min()
        } else {
            fmt.s_min()
        }
    } else if neg {
        -0.0
    } else {
        0.0
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum HexError {
    #[error("expected {expected} hex digits, got {got}")]
    Width { expected: usize, got: usize },
    #[error("invalid hex string {0:?}")]
    Parse(String),
    #[error("encoding is not a finite value ({0})")]
    NonFinite(&'static str),
    #[error("format {0} has no interchange width")]
    NoWidth(&'static str),
}

fn encoding_params(fmt: &FloatFormat) -> Result<(u32, u32), HexError> {
    let w = fmt.total_width.ok_or(HexError::NoWidth(fmt.name))?;
    Ok((w, w - fmt.p))
}

/// Interchange encoding of a finite format member as an integer.
pub fn encode_bits(x: f64, fmt: &FloatFormat) -> Result<u64, HexError> {
    let (w, _we) = encoding_params(fmt)?;
    debug_assert!(x.is_finite());
    let (neg, m, e) = decompose(x, fmt);
    let half = exp2_u64(fmt.p - 1);
    let (biased, frac) = if m < half {
        (0u64, m)
    } else {
        ((e + fmt.emax) as u64, m - half)
    };
    Ok((neg as u64) << (w - 1) | biased << (fmt.p - 1) | frac)
}

/// Decode an interchange encoding back into a value.
///
/// Infinity and NaN encodings are rejected (quiet vs signaling NaN is
/// distinguished in the error message; payloads are not interpreted).
pub fn decode_bits(bits: u64, fmt: &FloatFormat) -> Result<f64, HexError> {
    let (w, we) = encoding_params(fmt)?;
    if w < 64 && bits >> w != 0 {
        return Err(HexError::Parse(format!("{bits:#x} exceeds {w} bits")));
    }
    let half = exp2_u64(fmt.p - 1);
    let frac = bits & (half - 1);
    let biased = (bits >> (fmt.p - 1)) & ((1u64 << we) - 1);
    let neg = bits >> (w - 1) & 1 == 1;
    if biased == (1u64 << we) - 1 {
        return Err(HexError::NonFinite(if frac == 0 {
            "infinity"
        } else if frac >> (fmt.p - 2) & 1 == 1 {
            "quiet NaN"
        } else {
            "signaling NaN"
        }));
    }
    let (m, e) = if biased == 0 {
        (frac, fmt.emin)
    } else {
        (frac + half, biased as i32 - fmt.emax)
    };
    let mag = m as f64 * pow2(e - fmt.p as i32 + 1);
    Ok(if neg { -mag } else { mag })
}

/// Fixed-width uppercase hex encoding (4 digits for binary16, 8 for
/// binary32, 16 for binary64). Lowercase is accepted on input.
pub fn encode_hex(x: f64, fmt: &FloatFormat) -> Result<String, HexError> {
    let (w, _) = encoding_params(fmt)?;
    let bits = encode_bits(x, fmt)?;
    Ok(format!("{bits:0width$X}", width = w as usize / 4))
}

/// Inverse of [`encode_hex`]; the digit count must match the format.
pub fn decode_hex(s: &str, fmt: &FloatFormat) -> Result<f64, HexError> {
    let (w, _) = encoding_params(fmt)?;
    let expected = w as usize / 4;
    if s.len() != expected {
        return Err(HexError::Width {
            expected,
            got: s.len(),
        });
    }
    let bits = u64::from_str_radix(s, 16).map_err(|_| HexError::Parse(s.to_string()))?;
    decode_bits(bits, fmt)
}
