//! Append-only JSON-lines run ledger. One record per experiment: timestamp,
//! command, full parameter set, seed, result payload, and tool version.
//! Replaying a record's command and seed reproduces its result payload.

use std::fs::OpenOptions;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Environment variable overriding the default ledger path.
pub const LEDGER_ENV: &str = "BOHR_LEDGER";
/// Environment variable pinning the record timestamp (used by replay
/// checks; wall clock otherwise).
pub const TIMESTAMP_ENV: &str = "BOHR_TIMESTAMP";

pub const DEFAULT_LEDGER: &str = "bohr-ledger.jsonl";

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct RunRecord {
    pub timestamp: String,
    pub command: String,
    pub params: serde_json::Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub result: serde_json::Value,
    pub version: String,
}

/// Resolves the ledger path: explicit flag, then `BOHR_LEDGER`, then the
/// default file in the working directory.
pub fn resolve_path(flag: Option<&Path>) -> PathBuf {
    if let Some(p) = flag {
        return p.to_path_buf();
    }
    if let Ok(env) = std::env::var(LEDGER_ENV) {
        if !env.is_empty() {
            return PathBuf::from(env);
        }
    }
    PathBuf::from(DEFAULT_LEDGER)
}

/// Current timestamp, honoring the `BOHR_TIMESTAMP` override.
pub fn timestamp() -> String {
    if let Ok(fixed) = std::env::var(TIMESTAMP_ENV) {
        if !fixed.is_empty() {
            return fixed;
        }
    }
    let now = time::OffsetDateTime::now_utc();
    now.format(&time::format_description::well_known::Rfc3339)
        .unwrap_or_else(|_| String::from("unknown"))
}

/// Serialized writer for run records.
pub struct Ledger {
    path: PathBuf,
    timestamp: String,
    pub records: Vec<RunRecord>,
}

impl Ledger {
    pub fn open(path: PathBuf) -> Self {
        Ledger { path, timestamp: timestamp(), records: Vec::new() }
    }

    /// Fixed timestamp for deterministic replay.
    pub fn with_timestamp(path: PathBuf, timestamp: String) -> Self {
        Ledger { path, timestamp, records: Vec::new() }
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn append(
        &mut self,
        command: &str,
        params: serde_json::Value,
        seed: Option<u64>,
        result: serde_json::Value,
    ) -> std::io::Result<RunRecord> {
        let record = RunRecord {
            timestamp: self.timestamp.clone(),
            command: command.to_string(),
            params,
            seed,
            result,
            version: TOOL_VERSION.to_string(),
        };
        let line = serde_json::to_string(&record).expect("record serialization cannot fail");
        let mut file = OpenOptions::new().create(true).append(true).open(&self.path)?;
        file.write_all(line.as_bytes())?;
        file.write_all(b"\n")?;
        self.records.push(record.clone());
        Ok(record)
    }
}
