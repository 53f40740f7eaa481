//! Native (platform) evaluation of the functions under test.
//!
//! The bench measures whatever the platform ships. For `f32`/`f64` that is
//! the std math surface; the few functions std does not expose are bound to
//! the documented platform conventions below, which the report header
//! records:
//!
//! * `exp10` — `powf(10, x)` in the target width.
//! * `sinpi`/`cospi`/`tanpi` — exact dyadic argument reduction (x mod 2 and
//!   octant folding are error-free) followed by the platform `sin`/`cos`/
//!   `tan` on `[0, pi/4]`; the binary32 variant promotes to the binary64
//!   composite and demotes once.
//! * binary16 — no native half-precision libm exists, so inputs are
//!   promoted to binary32 (exact), evaluated there, and the result rounded
//!   back to binary16 with round-to-nearest.

use crate::fpcore::{round_f64_to_format, RoundingMode, BINARY16};
use crate::registry::FuncId;

/// Scalar types the platform can evaluate the catalog on.
pub trait NativeFloat: num_traits::Float {
    fn exp10(self) -> Self;
    fn sin_pi(self) -> Self;
    fn cos_pi(self) -> Self;
    fn tan_pi(self) -> Self;
}

impl NativeFloat for f64 {
    fn exp10(self) -> Self {
        10f64.powf(self)
    }
    fn sin_pi(self) -> Self {
        sin_pi_f64(self)
    }
    fn cos_pi(self) -> Self {
        cos_pi_f64(self)
    }
    fn tan_pi(self) -> Self {
        tan_pi_f64(self)
    }
}

impl NativeFloat for f32 {
    fn exp10(self) -> Self {
        10f32.powf(self)
    }
    fn sin_pi(self) -> Self {
        sin_pi_f64(self as f64) as f32
    }
    fn cos_pi(self) -> Self {
        cos_pi_f64(self as f64) as f32
    }
    fn tan_pi(self) -> Self {
        tan_pi_f64(self as f64) as f32
    }
}

/// Evaluate one catalog function natively on `T`.
pub fn eval_native<T: NativeFloat>(func: FuncId, x: T) -> T {
    use FuncId::*;
    match func {
        Acos => x.acos(),
        Acosh => x.acosh(),
        Asin => x.asin(),
        Asinh => x.asinh(),
        Atan => x.atan(),
        Atanh => x.atanh(),
        Cbrt => x.cbrt(),
        Cos => x.cos(),
        Cosh => x.cosh(),
        Exp => x.exp(),
        Exp10 => x.exp10(),
        Exp2 => x.exp2(),
        Log => x.ln(),
        Log10 => x.log10(),
        Log1p => x.ln_1p(),
        Log2 => x.log2(),
        Sin => x.sin(),
        Sinh => x.sinh(),
        Sqrt => x.sqrt(),
        Tan => x.tan(),
        Tanh => x.tanh(),
        Cospi => x.cos_pi(),
        Sinpi => x.sin_pi(),
        Tanpi => x.tan_pi(),
    }
}

/// Evaluate under the binary16 platform convention:
/// promote to binary32 (exact), evaluate, round back with RN.
pub fn eval_binary16(func: FuncId, x: f64) -> f64 {
    let y = eval_native::<f32>(func, x as f32);
    round_f64_to_format(y as f64, &BINARY16, RoundingMode::Nearest)
}

/// Split `r in [0, 2)` as `n/2 + f` with `n` integral and `f in [0, 0.5)`.
/// All steps are exact dyadic arithmetic.
fn split_half(r: f64) -> (u32, f64) {
    debug_assert!((0.0..2.0).contains(&r));
    let n = (2.0 * r).floor();
    let f = r - n * 0.5;
    (n as u32, f)
}

/// `sin(pi * f)` for `f in [0, 0.5)`, folded so the platform trig call
/// always sees an argument in `[0, pi/4]`.
fn sin_pi_frac(f: f64) -> f64 {
    if f <= 0.25 {
        (std::f64::consts::PI * f).sin()
    } else {
        (std::f64::consts::PI * (0.5 - f)).cos()
    }
}

/// `cos(pi * f)` for `f in [0, 0.5)`, folded likewise.
fn cos_pi_frac(f: f64) -> f64 {
    if f <= 0.25 {
        (std::f64::consts::PI * f).cos()
    } else {
        (std::f64::consts::PI * (0.5 - f)).sin()
    }
}

fn sin_pi_f64(x: f64) -> f64 {
    if x.is_nan() {
        return x;
    }
    if x.is_infinite() {
        return f64::NAN;
    }
    let neg = x.is_sign_negative();
    let (n, f) = split_half(x.abs() % 2.0);
    let mag = match n {
        0 => sin_pi_frac(f),
        1 => cos_pi_frac(f),
        2 => -sin_pi_frac(f),
        _ => -cos_pi_frac(f),
    };
    if neg {
        -mag
    } else {
        mag
    }
}

fn cos_pi_f64(x: f64) -> f64 {
    if x.is_nan() {
        return x;
    }
    if x.is_infinite() {
        return f64::NAN;
    }
    let (n, f) = split_half(x.abs() % 2.0);
    match n {
        0 => cos_pi_frac(f),
        1 => -sin_pi_frac(f),
        2 => -cos_pi_frac(f),
        _ => sin_pi_frac(f),
    }
}

/// `tan(pi * t)` for `t in (0, 0.5)` via the cotangent identity above 1/4.
fn tan_pi_half(t: f64) -> f64 {
    debug_assert!(t > 0.0 && t < 0.5);
    if t <= 0.25 {
        (std::f64::consts::PI * t).tan()
    } else {
        1.0 / (std::f64::consts::PI * (0.5 - t)).tan()
    }
}

fn tan_pi_f64(x: f64) -> f64 {
    if x.is_nan() {
        return x;
    }
    if x.is_infinite() {
        return f64::NAN;
    }
    let neg = x.is_sign_negative();
    let m = x.abs() % 1.0;
    let mag = if m == 0.0 {
        0.0
    } else if m == 0.5 {
        f64::INFINITY
    } else if m < 0.5 {
        tan_pi_half(m)
    } else {
        -tan_pi_half(1.0 - m)
    };
    if neg {
        -mag
    } else {
        mag
    }
}
