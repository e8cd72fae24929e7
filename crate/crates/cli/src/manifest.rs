use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::Context;
use plltm::model::ModelConfig;
use serde::Serialize;

/// Written next to every primary output as `<output>.manifest.toml`.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub tool_version: String,
    pub seed: u64,
    pub arguments: Vec<String>,
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub config: Option<ModelConfig>,
    pub timings: Timings,
}

#[derive(Debug, Serialize, Default)]
pub struct Timings {
    pub wall_clock_seconds: f64,
    pub started_unix_seconds: u64,
}

pub struct ManifestBuilder {
    manifest: RunManifest,
    started: Instant,
}

impl ManifestBuilder {
    pub fn new(command: &str, seed: u64) -> Self {
        let started_unix_seconds = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or_default();
        Self {
            manifest: RunManifest {
                command: command.to_owned(),
                tool_version: env!("CARGO_PKG_VERSION").to_owned(),
                seed,
                arguments: std::env::args().skip(1).collect(),
                inputs: Vec::new(),
                outputs: Vec::new(),
                config: None,
                timings: Timings {
                    started_unix_seconds,
                    ..Timings::default()
                },
            },
            started: Instant::now(),
        }
    }

    pub fn input(&mut self, path: &Path) -> &mut Self {
        self.manifest.inputs.push(path.display().to_string());
        self
    }

    pub fn output(&mut self, path: &Path) -> &mut Self {
        self.manifest.outputs.push(path.display().to_string());
        self
    }

    pub fn config(&mut self, config: &ModelConfig) -> &mut Self {
        self.manifest.config = Some(config.clone());
        self
    }

    pub fn write_next_to(mut self, primary: &Path) -> anyhow::Result<PathBuf> {
        self.manifest.timings.wall_clock_seconds = self.started.elapsed().as_secs_f64();
        let path = with_suffix(primary, "manifest.toml");
        let text = toml::to_string_pretty(&self.manifest).context("serializing run manifest")?;
        fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
        Ok(path)
    }
}

pub fn with_suffix(path: &Path, suffix: &str) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".");
    s.push(suffix);
    PathBuf::from(s)
}
