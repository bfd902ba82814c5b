//! Deterministic output: CSV tables, JSON sidecars, and the result cache.
//!
//! Floats are rendered with 17 significant digits so a round trip through
//! the CSV reproduces the bits. The cache stores the final CSV and sidecar
//! bytes keyed by a hash of the canonical request, which makes a warm rerun
//! byte-identical by construction.

use std::path::{Path, PathBuf};

use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::spec::{version, CliError, CliResult};

/// 17 significant digits; enough to reconstruct an f64 exactly.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// A finished table: fixed header plus pre-rendered rows.
pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(headers: &[&str]) -> Self {
        Table { headers: headers.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }

    pub fn to_csv_bytes(&self) -> CliResult<Vec<u8>> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.headers).map_err(io_err)?;
        for row in &self.rows {
            w.write_record(row).map_err(io_err)?;
        }
        w.into_inner().map_err(|e| CliError::Validation(format!("csv: {e}")))
    }
}

fn io_err(e: impl std::fmt::Display) -> CliError {
    CliError::Validation(format!("output: {e}"))
}

/// Sidecar metadata written next to every CSV. Carries no timestamps so
/// repeated runs serialize identically.
pub struct Sidecar {
    pub operation: String,
    pub request: String,
    pub tolerances: Value,
    pub substitutions: Vec<String>,
    pub results: Value,
}

impl Sidecar {
    pub fn new(operation: &str, request: &str) -> Self {
        Sidecar {
            operation: operation.to_string(),
            request: request.to_string(),
            tolerances: json!({}),
            substitutions: Vec::new(),
            results: Value::Null,
        }
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let doc = json!({
            "version": version(),
            "operation": self.operation,
            "request": self.request,
            "request_sha256": key_hash(&self.request),
            "tolerances": self.tolerances,
            "substitutions": self.substitutions,
            "results": self.results,
        });
        let mut bytes = serde_json::to_vec_pretty(&doc).expect("sidecar serializes");
        bytes.push(b'\n');
        bytes
    }
}

pub fn key_hash(canonical: &str) -> String {
    let mut hasher = Sha256::new();
    hasher.update(canonical.as_bytes());
    hasher.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

fn sidecar_path(out: &Path) -> PathBuf {
    out.with_extension("json")
}

/// Look up a finished result by request hash. A hit returns the stored CSV
/// bytes and sidecar bytes.
pub fn cache_lookup(dir: Option<&Path>, canonical: &str) -> Option<(Vec<u8>, Vec<u8>)> {
    let dir = dir?;
    let key = key_hash(canonical);
    let csv = std::fs::read(dir.join(format!("{key}.csv"))).ok()?;
    let json = std::fs::read(dir.join(format!("{key}.json"))).ok()?;
    Some((csv, json))
}

pub fn cache_store(
    dir: Option<&Path>,
    canonical: &str,
    csv: &[u8],
    sidecar: &[u8],
) -> CliResult<()> {
    let Some(dir) = dir else { return Ok(()) };
    std::fs::create_dir_all(dir).map_err(io_err)?;
    let key = key_hash(canonical);
    std::fs::write(dir.join(format!("{key}.csv")), csv).map_err(io_err)?;
    std::fs::write(dir.join(format!("{key}.json")), sidecar).map_err(io_err)?;
    Ok(())
}

/// Write the CSV (to the path, or stdout when none) and its sidecar.
pub fn emit(out: Option<&Path>, csv: &[u8], sidecar: &[u8]) -> CliResult<()> {
    match out {
        Some(path) => {
            if let Some(parent) = path.parent() {
                if !parent.as_os_str().is_empty() {
                    std::fs::create_dir_all(parent).map_err(io_err)?;
                }
            }
            std::fs::write(path, csv).map_err(io_err)?;
            std::fs::write(sidecar_path(path), sidecar).map_err(io_err)?;
        }
        None => {
            use std::io::Write;
            std::io::stdout().write_all(csv).map_err(io_err)?;
        }
    }
    Ok(())
}

/// Cache-aware pipeline: consult the cache, otherwise build the table and
/// sidecar with `produce`, then store and emit.
pub fn deliver(
    out: Option<&Path>,
    cache_dir: Option<&Path>,
    canonical: &str,
    produce: impl FnOnce() -> CliResult<(Table, Sidecar)>,
) -> CliResult<()> {
    if let Some((csv, sidecar)) = cache_lookup(cache_dir, canonical) {
        eprintln!("cache hit {}", &key_hash(canonical)[..12]);
        return emit(out, &csv, &sidecar);
    }
    let (table, sidecar) = produce()?;
    let csv = table.to_csv_bytes()?;
    let sidecar_bytes = sidecar.to_bytes();
    cache_store(cache_dir, canonical, &csv, &sidecar_bytes)?;
    emit(out, &csv, &sidecar_bytes)
}
