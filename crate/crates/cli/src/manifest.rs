use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use wsm::SamplerConfig;

use crate::CliError;

pub const MANIFEST_PREFIX: &str = "# manifest: ";

/// Everything needed to reproduce an output file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    /// Arguments after the program name, with output destinations removed.
    pub argv: Vec<String>,
    pub config: SamplerConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub instance: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<PathBuf>,
    pub seed: u64,
    pub version: String,
    pub outputs: Vec<PathBuf>,
}

impl RunManifest {
    pub fn new(command: &str, argv: &[String], config: SamplerConfig) -> Self {
        RunManifest {
            command: command.to_string(),
            argv: strip_destinations(argv),
            seed: config.seed,
            config,
            n: None,
            instance: None,
            weights: None,
            version: env!("CARGO_PKG_VERSION").to_string(),
            outputs: Vec::new(),
        }
    }

    pub fn header_line(&self) -> String {
        format!(
            "{MANIFEST_PREFIX}{}\n",
            serde_json::to_string(self).expect("manifest serialises")
        )
    }

    pub fn read_from(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
        for line in text.lines() {
            if let Some(json) = line.strip_prefix(MANIFEST_PREFIX) {
                return serde_json::from_str(json).map_err(|e| {
                    CliError::Usage(format!("bad manifest in {}: {e}", path.display()))
                });
            }
            // audit logs carry the manifest as their first JSON line
            if let Ok(wrapper) = serde_json::from_str::<ManifestLine>(line) {
                return Ok(wrapper.manifest);
            }
        }
        Err(CliError::Usage(format!(
            "{} has no run manifest",
            path.display()
        )))
    }
}

#[derive(Serialize, Deserialize)]
pub struct ManifestLine {
    pub manifest: RunManifest,
}

const DESTINATION_FLAGS: [&str; 2] = ["--out", "--audit"];

fn strip_destinations(argv: &[String]) -> Vec<String> {
    let mut kept = Vec::with_capacity(argv.len());
    let mut skip_next = false;
    for arg in argv {
        if skip_next {
            skip_next = false;
            continue;
        }
        if DESTINATION_FLAGS.contains(&arg.as_str()) {
            skip_next = true;
            continue;
        }
        if DESTINATION_FLAGS
            .iter()
            .any(|f| arg.starts_with(&format!("{f}=")))
        {
            continue;
        }
        kept.push(arg.clone());
    }
    kept
}
