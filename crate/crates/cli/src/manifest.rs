//! Reproducibility manifests: every command that writes files drops a
//! JSON manifest next to its primary output with the full parameter set
//! and tool version, enough to regenerate the outputs exactly.

use serde::Serialize;
use std::path::{Path, PathBuf};

#[derive(Debug, Serialize)]
pub struct Manifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub parameters: serde_json::Value,
    pub outputs: Vec<String>,
}

impl Manifest {
    pub fn new(command: &str, parameters: serde_json::Value, outputs: &[&Path]) -> Self {
        Self {
            tool: "pppm",
            version: env!("CARGO_PKG_VERSION"),
            command: command.to_string(),
            parameters,
            outputs: outputs.iter().map(|p| p.display().to_string()).collect(),
        }
    }

    /// Write `<primary output stem>.manifest.json`.
    pub fn write_alongside(&self, primary: &Path) -> std::io::Result<PathBuf> {
        let path = manifest_path(primary);
        let body = serde_json::to_string_pretty(self).expect("manifest serializes");
        std::fs::write(&path, body + "\n")?;
        Ok(path)
    }
}

pub fn manifest_path(primary: &Path) -> PathBuf {
    primary.with_extension("manifest.json")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn manifest_path_replaces_extension() {
        assert_eq!(
            manifest_path(Path::new("out/sweep.csv")),
            PathBuf::from("out/sweep.manifest.json")
        );
    }
}
