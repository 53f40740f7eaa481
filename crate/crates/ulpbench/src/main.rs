//! Command-line entry point.
//!
//! Reads a JSON test descriptor (default `config.json`), runs each entry
//! over the function catalog, and writes decimal and hex report tables to
//! the output directory.
//!
//! Exit codes: 0 on success, 1 on configuration errors, 2 when a run
//! failed at runtime (remaining entries are still attempted).

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::Parser;

use ulpbench::config::{self, TestConfigEntry};
use ulpbench::fpcore::RoundingMode;
use ulpbench::refeval;
use ulpbench::registry::{FuncId, Registry};
use ulpbench::report::{self, RunMetadata, RunReport};
use ulpbench::runner;

#[derive(Debug, Parser)]
#[command(
    name = "ulpbench",
    about = "Measure worst-case ULP errors of the platform's math functions \
             against a high-precision reference"
)]
struct Args {
    /// Worker threads: a positive integer or "auto" (hardware cores).
    #[arg(short = 't', long = "threads", default_value = "auto")]
    threads: String,

    /// JSON test descriptor.
    #[arg(long, default_value = "config.json")]
    config: PathBuf,

    /// Directory for report files (created if absent).
    #[arg(long, default_value = "outputs")]
    outputs: PathBuf,

    /// Comma-separated subset of functions to test (default: all 24).
    #[arg(long)]
    functions: Option<String>,

    /// Directory of hardest-to-round input files
    /// (`<dir>/<format>/<function>.txt`); loaded when present.
    #[arg(long, default_value = "worstcases")]
    worstcases: PathBuf,
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(args) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(msg) => {
            eprintln!("config error: {msg}");
            ExitCode::from(1)
        }
    }
}

/// Returns Ok(true) when every entry completed, Ok(false) after runtime
/// failures, Err for configuration problems.
fn run(args: Args) -> Result<bool, String> {
    let workers = parse_threads(&args.threads)?;
    let entries = config::parse_config(&args.config).map_err(|e| e.to_string())?;
    if entries.is_empty() {
        eprintln!("nothing to do: {} defines no tests", args.config.display());
        return Ok(true);
    }
    let subset = parse_function_filter(args.functions.as_deref())?;

    let mut registry = Registry::with_functions(&subset);
    if args.worstcases.is_dir() {
        match registry.load_worstcases(&args.worstcases) {
            Ok(summary) if summary.files > 0 => eprintln!(
                "loaded {} worst-case points from {} files ({} out-of-domain dropped)",
                summary.points, summary.files, summary.dropped
            ),
            Ok(_) => {}
            Err(e) => return Err(e.to_string()),
        }
    }

    let mut all_ok = true;
    if let Err(e) = registry.validate_domains() {
        eprintln!("runtime error: {e}");
        return Ok(false);
    }

    for entry in &entries {
        eprintln!(
            "running {} ({}, {}, {} workers)",
            entry.test_name, entry.format, entry.search, workers
        );
        if entry.rounding != RoundingMode::Nearest {
            eprintln!(
                "warning: rounding {} is a placeholder; directed-rounding \
                 function variants are not supported by this platform and \
                 round-to-nearest error semantics are used",
                entry.rounding
            );
        }
        let rows = runner::run_config_entry(&registry, entry, workers);
        let report = RunReport {
            meta: metadata(entry, workers),
            rows,
        };
        match report::write_decimal_report(&report, &args.outputs)
            .and_then(|p1| report::write_hex_report(&report, &args.outputs).map(|p2| (p1, p2)))
        {
            Ok((p1, p2)) => eprintln!("wrote {} and {}", p1.display(), p2.display()),
            Err(e) => {
                eprintln!("runtime error: cannot write reports for {}: {e}", entry.test_name);
                all_ok = false;
            }
        }
    }
    Ok(all_ok)
}

fn metadata(entry: &TestConfigEntry, workers: usize) -> RunMetadata {
    RunMetadata {
        test_name: entry.test_name.clone(),
        format: entry.format,
        rounding: entry.rounding,
        fastmath: entry.fastmath,
        strategy: entry.search,
        workers,
        timestamp_unix: SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0),
        backend: format!(
            "MPFR via rug, {} bits (p+20)",
            refeval::policy_bits(entry.format.fmt())
        ),
        convention: "binary16 = promote to binary32, evaluate, round RN back; \
                     exp10 = powf(10,x); sinpi/cospi/tanpi = exact-reduction \
                     composites over platform sin/cos/tan"
            .to_string(),
    }
}

fn parse_threads(s: &str) -> Result<usize, String> {
    if s == "auto" {
        return Ok(std::thread::available_parallelism()
            .map(|n| n.get())
            .unwrap_or(1));
    }
    match s.parse::<usize>() {
        Ok(n) if n >= 1 => Ok(n),
        _ => Err(format!(
            "-t expects a positive integer or \"auto\", got {s:?}"
        )),
    }
}

fn parse_function_filter(csv: Option<&str>) -> Result<Vec<FuncId>, String> {
    match csv {
        None => Ok(FuncId::ALL.to_vec()),
        Some(list) => {
            let mut subset = Vec::new();
            for name in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                let id = FuncId::parse(name)
                    .ok_or_else(|| format!("unknown function {name:?} in --functions"))?;
                if !subset.contains(&id) {
                    subset.push(id);
                }
            }
            if subset.is_empty() {
                return Err("--functions selected nothing".to_string());
            }
            Ok(subset)
        }
    }
}
