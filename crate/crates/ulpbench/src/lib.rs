//! Accuracy test bench for elementary mathematical functions.
//!
//! Measures the worst-case error, in units in the last place (ULP), of the
//! platform's univariate math functions in binary16, binary32 and binary64
//! against an arbitrary-precision reference, using exhaustive or
//! time-budgeted sweeps of each function's input domain, and writes
//! machine-readable accuracy reports.
//!
//! The crate is organised around the pipeline:
//!
//! * [`fpcore`] — format descriptors, bit-level encode/decode, ordered
//!   enumeration (rank/unrank) and rounding of high-precision reals into a
//!   target format under the four IEEE 754 rounding modes.
//! * [`refeval`] — high-precision reference evaluation and the ULP error
//!   metric.
//! * [`registry`] — the catalog of tested functions, their native bindings
//!   and per-format input domains.
//! * [`search`] — time-budget calibration and deterministic chunked plans
//!   over rank space.
//! * [`runner`] — parallel execution and reduction to per-function maxima.
//! * [`report`] — decimal and hexadecimal result tables.
//! * [`config`] — the JSON test-descriptor format consumed by the CLI.

pub mod config;
pub mod fpcore;
pub mod native;
pub mod refeval;
pub mod registry;
pub mod report;
pub mod runner;
pub mod search;

pub use fpcore::{FloatFormat, RoundingMode, BFLOAT16, BINARY16, BINARY32, BINARY64};
pub use refeval::{ErrorRecord, RefCtx};
pub use registry::{FuncId, Registry};
pub use runner::FunctionResult;
pub use search::Strategy;

/// Integer index into a format's ordered finite-value space.
pub type Rank = u64;

/// Carrier for a value of any supported format.
///
/// Every finite binary16, bfloat16, binary32 and binary64 value embeds
/// exactly into an `f64`, so format members are passed around as `f64`
/// with the owning [`FloatFormat`] alongside.
pub type FormatValue = f64;
