use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::Result;

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct ArtifactDigest {
    pub path: String,
    pub sha256: String,
}

/// Record of one CLI invocation. `config` uses the same keys as the flat
/// config file, so a manifest can be fed back with `--config`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    pub subcommand: String,
    pub config: BTreeMap<String, String>,
    pub tool_version: String,
    pub rng_seed: Option<u64>,
    pub started_at: String,
    pub finished_at: String,
    pub outputs: Vec<ArtifactDigest>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn now_rfc3339() -> String {
    chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Millis, true)
}

impl RunManifest {
    pub fn start(subcommand: &str, config: BTreeMap<String, String>, rng_seed: Option<u64>) -> Self {
        Self {
            subcommand: subcommand.to_string(),
            config,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            rng_seed,
            started_at: now_rfc3339(),
            finished_at: String::new(),
            outputs: Vec::new(),
        }
    }

    pub fn add_file(&mut self, path: &Path) -> Result<()> {
        let bytes = std::fs::read(path)?;
        self.add_bytes(&path.display().to_string(), &bytes);
        Ok(())
    }

    /// Records a non-file artifact such as the text printed to stdout.
    pub fn add_bytes(&mut self, name: &str, bytes: &[u8]) {
        self.outputs.push(ArtifactDigest {
            path: name.to_string(),
            sha256: sha256_hex(bytes),
        });
    }

    pub fn finish_and_write(mut self, path: &Path) -> Result<()> {
        self.finished_at = now_rfc3339();
        let json = serde_json::to_string_pretty(&self).expect("manifest serializes") + "\n";
        std::fs::write(path, json)?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digest_is_sha256() {
        assert_eq!(
            sha256_hex(b"abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }
}
