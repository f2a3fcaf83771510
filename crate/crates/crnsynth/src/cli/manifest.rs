//! Run manifests: enough metadata next to every output to rerun the command
//! and account for its inputs.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

#[derive(Debug, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    /// Full argument vector (without the binary name); replaying it rebuilds
    /// every output.
    pub args: Vec<String>,
    /// Digests of files read by the run, keyed by path.
    pub input_digests: BTreeMap<String, String>,
    pub rng_seeds: Vec<u64>,
    /// Files written by the run, relative to the output directory.
    pub outputs: Vec<String>,
    pub wall_seconds: f64,
}

impl RunManifest {
    pub fn new(command: &str, args: Vec<String>) -> Self {
        Self {
            tool: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            args,
            input_digests: BTreeMap::new(),
            rng_seeds: Vec::new(),
            outputs: Vec::new(),
            wall_seconds: 0.0,
        }
    }

    pub fn record_input(&mut self, path: &Path) -> std::io::Result<()> {
        let bytes = std::fs::read(path)?;
        let mut hasher = Sha256::new();
        hasher.update(&bytes);
        let digest = hasher.finalize();
        let mut hex = String::with_capacity(64);
        for byte in digest {
            hex.push_str(&format!("{byte:02x}"));
        }
        self.input_digests.insert(path.display().to_string(), hex);
        Ok(())
    }

    pub fn record_output(&mut self, name: &str) {
        self.outputs.push(name.to_string());
    }

    pub fn write(&self, out_dir: &Path) -> std::io::Result<()> {
        let json = serde_json::to_string_pretty(self).expect("manifest serializes");
        std::fs::write(out_dir.join("manifest.json"), json + "\n")
    }

    pub fn load(path: &Path) -> std::io::Result<Self> {
        let text = std::fs::read_to_string(path)?;
        serde_json::from_str(&text)
            .map_err(|e| std::io::Error::new(std::io::ErrorKind::InvalidData, e))
    }
}
