//! Decimal and hexadecimal result tables.
//!
//! One run emits `<dir>/<test_name>.txt` with whitespace-separated columns
//!
//! ```text
//! Function ULPs Input Output MPFR Tests
//! ```
//!
//! and `<dir>/HEX_<test_name>.txt` with `Function ULPs Input Output` where
//! the points are fixed-width interchange-encoding hex. The column label
//! "MPFR" is kept for compatibility with existing tooling that diffs these
//! tables; it holds the reference value, and the `#` metadata header names
//! the backend explicitly.
//!
//! Input/Output are printed as the shortest decimal that parses back (via
//! `f64` and a final round-to-nearest into the format) to the exact same
//! value; the reference is printed to its policy precision. Identical
//! reports produce identical bytes.

use std::io;
use std::path::{Path, PathBuf};

use crate::fpcore::{encode_hex, round_f64_to_format, FloatFormat, RoundingMode};
use crate::registry::BenchFormat;
use crate::runner::FunctionResult;
use crate::search::Strategy;

/// Everything the report headers record about a run.
#[derive(Debug, Clone)]
pub struct RunMetadata {
    pub test_name: String,
    pub format: BenchFormat,
    pub rounding: RoundingMode,
    pub fastmath: u8,
    pub strategy: Strategy,
    pub workers: usize,
    /// Unix timestamp (seconds) when the run finished.
    pub timestamp_unix: u64,
    /// Reference backend description (library and working precision).
    pub backend: String,
    /// Native-evaluation conventions in effect.
    pub convention: String,
}

#[derive(Debug, Clone)]
pub struct RunReport {
    pub meta: RunMetadata,
    pub rows: Vec<FunctionResult>,
}

/// Shortest decimal string that parses back (f64 parse, then RN into the
/// format) to exactly `x`.
pub fn shortest_roundtrip(x: f64, fmt: &FloatFormat) -> String {
    if x == 0.0 {
        return if x.is_sign_negative() { "-0.0" } else { "0.0" }.to_string();
    }
    for digits in 1..=17usize {
        let s = format!("{:.*e}", digits - 1, x);
        let parsed: f64 = s.parse().expect("own formatting parses");
        if round_f64_to_format(parsed, fmt, RoundingMode::Nearest).to_bits() == x.to_bits() {
            return prettify(&s);
        }
    }
    unreachable!("17 digits always round-trip an f64")
}

/// Errors (in ULPs) print with five significant digits, trimmed.
pub fn format_ulps(v: f64) -> String {
    if v == 0.0 {
        return "0.0".to_string();
    }
    let s = prettify(&format!("{:.4e}", v));
    trim_trailing_zeros(&s)
}

/// Turn `d.ddde[+-]k` into a plain decimal for moderate exponents.
fn prettify(sci: &str) -> String {
    let (mant, exp) = match sci.split_once(['e', 'E']) {
        Some((m, e)) => (m, e.parse::<i32>().expect("exponent")),
        None => (sci, 0),
    };
    let (sign, mant) = match mant.strip_prefix('-') {
        Some(rest) => ("-", rest),
        None => ("", mant),
    };
    let digits: String = mant.chars().filter(|c| *c != '.').collect();
    let int_len = mant.find('.').map(|i| i as i32).unwrap_or(mant.len() as i32);
    let point = int_len + exp;
    if !(-4..=17).contains(&point) {
        // keep scientific form for extreme magnitudes
        return format!("{sign}{mant}e{exp}");
    }
    let digits_len = digits.len() as i32;
    let body = if point <= 0 {
        format!("0.{}{}", "0".repeat(-point as usize), digits)
    } else if point >= digits_len {
        format!("{}{}.0", digits, "0".repeat((point - digits_len) as usize))
    } else {
        let (a, b) = digits.split_at(point as usize);
        format!("{a}.{b}")
    };
    format!("{sign}{body}")
}

fn trim_trailing_zeros(s: &str) -> String {
    if let Some((head, tail)) = s.split_once('e') {
        return format!("{}e{}", trim_trailing_zeros(head), tail);
    }
    if !s.contains('.') {
        return s.to_string();
    }
    let t = s.trim_end_matches('0');
    if t.ends_with('.') {
        format!("{t}0")
    } else {
        t.to_string()
    }
}

fn header_block(meta: &RunMetadata, rows: &[FunctionResult]) -> String {
    let mut out = String::new();
    out.push_str(&format!("# test: {}\n", meta.test_name));
    out.push_str(&format!("# format: {}\n", meta.format));
    if meta.rounding == RoundingMode::Nearest {
        out.push_str("# rounding: RN\n");
    } else {
        out.push_str(&format!(
            "# rounding: {} (placeholder; round-to-nearest error semantics used)\n",
            meta.rounding
        ));
    }
    out.push_str(&format!(
        "# fastmath: {} (platform offers no fast-math variants; recorded only)\n",
        meta.fastmath
    ));
    out.push_str(&format!("# search: {}\n", meta.strategy));
    out.push_str(&format!("# workers: {}\n", meta.workers));
    out.push_str(&format!("# reference: {}\n", meta.backend));
    out.push_str(&format!("# native-convention: {}\n", meta.convention));
    let calibrated: Vec<String> = rows
        .iter()
        .filter_map(|r| r.per_point_ns.map(|t| format!("{}={:.0}ns", r.name, t)))
        .collect();
    if !calibrated.is_empty() {
        out.push_str(&format!(
            "# calibration (per point, excluded from the time budget): {}\n",
            calibrated.join(" ")
        ));
    }
    out.push_str(&format!("# timestamp: {}\n", meta.timestamp_unix));
    for row in rows {
        for w in &row.warnings {
            out.push_str(&format!("# warning: {}: {}\n", row.name, w));
        }
    }
    out
}

/// Write the decimal table; returns the file path.
pub fn write_decimal_report(report: &RunReport, dir: &Path) -> io::Result<PathBuf> {
    std::fs::create_dir_all(dir)?;
    let fmt = report.meta.format.fmt();
    let mut out = header_block(&report.meta, &report.rows);
    out.push_str("Function ULPs Input Output MPFR Tests\n");
    for row in &report.rows {
        if row.measurable {
            out.push_str(&format!(
                "{} {} {} {} {} {}\n",
                row.name,
                format_ulps(row.max_err_ulps),
                shortest_roundtrip(row.argmax_input, fmt),
                shortest_roundtrip(row.argmax_output, fmt),
                row.argmax_ref,
                row.tests_run,
            ));
        } else {
            out.push_str(&format!("{} NA - - - {}\n", row.name, row.tests_run));
        }
    }
    let path = dir.join(format!("{}.txt", report.meta.test_name));
    std::fs::write(&path, out)?;
    Ok(path)
}

/// Write the hex-encoded table; returns the file path.
pub fn write_hex_report(report: &RunReport, dir: &Path) -> io::Result<PathBuf> {
    std::fs::create_dir_all(dir)?;
    let fmt = report.meta.format.fmt();
    let mut out = header_block(&report.meta, &report.rows);
    out.push_str("Function ULPs Input Output\n");
    for row in &report.rows {
        if row.measurable {
            out.push_str(&format!(
                "{} {} {} {}\n",
                row.name,
                format_ulps(row.max_err_ulps),
                encode_hex(row.argmax_input, fmt).expect("argmax is a format member"),
                encode_hex(row.argmax_output, fmt).expect("argmax is a format member"),
            ));
        } else {
            out.push_str(&format!("{} NA - -\n", row.name));
        }
    }
    let path = dir.join(format!("HEX_{}.txt", report.meta.test_name));
    std::fs::write(&path, out)?;
    Ok(path)
}

/// Table body of a report: everything that is not a `#` metadata line.
/// Used to compare runs while ignoring timestamps and calibration noise.
pub fn report_body(text: &str) -> String {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .collect::<Vec<_>>()
        .join("\n")
}
