//! JSON test-descriptor parsing.
//!
//! The config file is a single JSON object; each key is a test name and
//! each value holds exactly the four fields `format`, `rounding`,
//! `fastmath` and `search`:
//!
//! ```json
//! {
//!   "test-binary16RN-exhaustive-nofastmath" : {
//!     "format" : "binary16",
//!     "rounding" : "RN",
//!     "fastmath" : 0,
//!     "search" : "exhaustive"
//!   }
//! }
//! ```
//!
//! Entries run in file order. Validation is strict and fails fast: a bad
//! entry is reported with its key and field before anything runs.

use std::path::Path;

use serde_json::Value;
use thiserror::Error;

use crate::fpcore::RoundingMode;
use crate::registry::BenchFormat;
use crate::search::Strategy;

/// One validated entry of the test descriptor.
#[derive(Debug, Clone, PartialEq)]
pub struct TestConfigEntry {
    /// Verbatim key from the config; also the output file stem.
    pub test_name: String,
    pub format: BenchFormat,
    /// Placeholder field: recorded in reports, execution is RN-referenced.
    pub rounding: RoundingMode,
    /// 0 or 1; recorded in reports, no fast-math variants exist to bind.
    pub fastmath: u8,
    pub search: Strategy,
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("config {path} is not valid JSON: {source}")]
    Json {
        path: String,
        source: serde_json::Error,
    },
    #[error("config root must be a JSON object mapping test names to entries")]
    RootNotObject,
    #[error("entry {key:?} must be a JSON object")]
    EntryNotObject { key: String },
    #[error("entry {key:?} is missing field {field:?}")]
    MissingField { key: String, field: &'static str },
    #[error("entry {key:?} has unknown field {field:?}")]
    UnknownField { key: String, field: String },
    #[error("entry {key:?} field {field:?}: {detail}")]
    BadValue {
        key: String,
        field: &'static str,
        detail: String,
    },
}

const FIELDS: [&str; 4] = ["format", "rounding", "fastmath", "search"];

/// Parse and validate a config file, preserving entry order.
pub fn parse_config(path: &Path) -> Result<Vec<TestConfigEntry>, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let root: Value = serde_json::from_str(&text).map_err(|source| ConfigError::Json {
        path: path.display().to_string(),
        source,
    })?;
    parse_entries(&root)
}

fn parse_entries(root: &Value) -> Result<Vec<TestConfigEntry>, ConfigError> {
    let map = root.as_object().ok_or(ConfigError::RootNotObject)?;
    let mut entries = Vec::with_capacity(map.len());
    for (key, value) in map {
        let obj = value.as_object().ok_or_else(|| ConfigError::EntryNotObject {
            key: key.clone(),
        })?;
        for field in obj.keys() {
            if !FIELDS.contains(&field.as_str()) {
                return Err(ConfigError::UnknownField {
                    key: key.clone(),
                    field: field.clone(),
                });
            }
        }
        let get = |field: &'static str| {
            obj.get(field).ok_or(ConfigError::MissingField {
                key: key.clone(),
                field,
            })
        };
        let bad = |field: &'static str, detail: String| ConfigError::BadValue {
            key: key.clone(),
            field,
            detail,
        };
        let str_field = |field: &'static str| -> Result<&str, ConfigError> {
            get(field)?
                .as_str()
                .ok_or_else(|| bad(field, "expected a string".to_string()))
        };

        let format = BenchFormat::parse(str_field("format")?).ok_or_else(|| {
            bad(
                "format",
                "expected one of binary16, binary32, binary64".to_string(),
            )
        })?;
        let rounding = RoundingMode::parse(str_field("rounding")?).ok_or_else(|| {
            bad("rounding", "expected one of RN, RU, RD, RZ".to_string())
        })?;
        let search = Strategy::parse(str_field("search")?).ok_or_else(|| {
            bad(
                "search",
                "expected one of seconds, minutes, hours, days, exhaustive".to_string(),
            )
        })?;
        let fastmath = match get("fastmath")?.as_u64() {
            Some(v @ (0 | 1)) => v as u8,
            _ => return Err(bad("fastmath", "expected 0 or 1".to_string())),
        };

        entries.push(TestConfigEntry {
            test_name: key.clone(),
            format,
            rounding,
            fastmath,
            search,
        });
    }
    Ok(entries)
}

#[cfg(test)]
mod tests {
    use super::*;

    const THREE_FORMAT_DESCRIPTOR: &str = r#"{
      "test-binary16RN-exhaustive-nofastmath" : {
        "format" : "binary16",
        "rounding" : "RN",
        "fastmath" : 0,
        "search" : "exhaustive"
      },
      "test-binary32RN-exhaustive-nofastmath" : {
        "format" : "binary32",
        "rounding" : "RN",
        "fastmath" : 0,
        "search" : "exhaustive"
      },
      "test-binary64RN-hours-nofastmath" : {
        "format" : "binary64",
        "rounding" : "RN",
        "fastmath" : 0,
        "search" : "hours"
      }
    }"#;

    fn parse_str(s: &str) -> Result<Vec<TestConfigEntry>, ConfigError> {
        parse_entries(&serde_json::from_str(s).unwrap())
    }

    #[test]
    fn three_entry_descriptor_in_file_order() {
        let entries = parse_str(THREE_FORMAT_DESCRIPTOR).unwrap();
        assert_eq!(entries.len(), 3);
        assert_eq!(entries[0].test_name, "test-binary16RN-exhaustive-nofastmath");
        assert_eq!(entries[0].format, BenchFormat::Binary16);
        assert_eq!(entries[0].search, Strategy::Exhaustive);
        assert_eq!(entries[1].format, BenchFormat::Binary32);
        assert_eq!(entries[2].format, BenchFormat::Binary64);
        assert_eq!(entries[2].search, Strategy::Hours);
        assert!(entries.iter().all(|e| e.rounding == RoundingMode::Nearest));
        assert!(entries.iter().all(|e| e.fastmath == 0));
    }

    #[test]
    fn empty_object_is_nothing_to_do() {
        assert!(parse_str("{}").unwrap().is_empty());
    }

    #[test]
    fn unknown_strategy_names_the_entry() {
        let s = r#"{"t1": {"format":"binary16","rounding":"RN","fastmath":0,"search":"weeks"}}"#;
        let err = parse_str(s).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("t1") && msg.contains("search"), "{msg}");
    }

    #[test]
    fn missing_and_unknown_fields_name_key_and_field() {
        let s = r#"{"t2": {"format":"binary16","rounding":"RN","fastmath":0}}"#;
        let msg = parse_str(s).unwrap_err().to_string();
        assert!(msg.contains("t2") && msg.contains("search"), "{msg}");
        let s = r#"{"t3": {"format":"binary16","rounding":"RN","fastmath":0,"search":"seconds","extra":1}}"#;
        let msg = parse_str(s).unwrap_err().to_string();
        assert!(msg.contains("t3") && msg.contains("extra"), "{msg}");
    }

    #[test]
    fn bad_values_are_rejected() {
        for (field, s) in [
            (
                "format",
                r#"{"t": {"format":"binary8","rounding":"RN","fastmath":0,"search":"seconds"}}"#,
            ),
            (
                "rounding",
                r#"{"t": {"format":"binary16","rounding":"RNA","fastmath":0,"search":"seconds"}}"#,
            ),
            (
                "fastmath",
                r#"{"t": {"format":"binary16","rounding":"RN","fastmath":2,"search":"seconds"}}"#,
            ),
        ] {
            let msg = parse_str(s).unwrap_err().to_string();
            assert!(msg.contains(field), "{field}: {msg}");
        }
    }

    #[test]
    fn entry_order_is_file_order_not_alphabetical() {
        let s = r#"{"zzz": {"format":"binary16","rounding":"RN","fastmath":0,"search":"seconds"},
                    "aaa": {"format":"binary32","rounding":"RN","fastmath":1,"search":"minutes"}}"#;
        let entries = parse_str(s).unwrap();
        assert_eq!(entries[0].test_name, "zzz");
        assert_eq!(entries[1].test_name, "aaa");
        assert_eq!(entries[1].fastmath, 1);
    }
}
