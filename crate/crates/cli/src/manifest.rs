//! Run manifests: enough metadata to replay a run bit-for-bit.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::config::Config;

/// SHA-256 of the canonical config text plus the command name.
pub fn config_hash(config: &Config, command: &str) -> String {
    let mut hasher = Sha256::new();
    hasher.update(command.as_bytes());
    hasher.update(b"\n");
    hasher.update(config.canonical().as_bytes());
    let digest = hasher.finalize();
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TaskSeed {
    pub task: String,
    pub seed: u64,
}

/// Identical manifest (minus wall time) implies bit-identical outputs.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub config_hash: String,
    pub rng_algorithm: String,
    pub artifact_version: String,
    pub wall_time_s: f64,
    pub cache_hit: bool,
    pub per_task_seeds: Vec<TaskSeed>,
    pub outputs: Vec<String>,
}

impl RunManifest {
    pub fn new(command: &str, hash: &str) -> RunManifest {
        RunManifest {
            command: command.to_string(),
            config_hash: hash.to_string(),
            rng_algorithm: pinlab::rng::RNG_ALGORITHM.to_string(),
            artifact_version: env!("CARGO_PKG_VERSION").to_string(),
            wall_time_s: 0.0,
            cache_hit: false,
            per_task_seeds: Vec::new(),
            outputs: Vec::new(),
        }
    }

    pub fn record_output(&mut self, path: &Path) {
        self.outputs.push(path.display().to_string());
    }

    pub fn write(&self, out_dir: &Path) -> std::io::Result<PathBuf> {
        let path = out_dir.join(format!(
            "{}-{}-manifest.json",
            self.command,
            &self.config_hash[..12]
        ));
        std::fs::write(&path, serde_json::to_string_pretty(self).unwrap())?;
        Ok(path)
    }
}
