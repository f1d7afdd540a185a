use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

/// Enough to re-run a command and check that its primary output is unchanged.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: Vec<String>,
    pub versions: BTreeMap<String, String>,
    /// SHA-256 of every input file, keyed by path.
    pub input_digests: BTreeMap<String, String>,
    pub seed: Option<u64>,
    pub wall_time_seconds: f64,
    pub workers: usize,
    /// SHA-256 of the primary output bytes.
    pub output_digest: String,
    pub exit_code: u8,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    format!("{:x}", Sha256::digest(bytes))
}

pub fn digest_file(path: &Path) -> std::io::Result<String> {
    Ok(sha256_hex(&std::fs::read(path)?))
}

pub fn versions() -> BTreeMap<String, String> {
    BTreeMap::from([
        ("hultman-cli".to_string(), env!("CARGO_PKG_VERSION").to_string()),
        ("signed-hultman".to_string(), signed_hultman::VERSION.to_string()),
    ])
}
