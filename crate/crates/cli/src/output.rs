use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;
use serde_json::Value;

use crate::settings::Settings;

/// Record of one command run, written next to its outputs as
/// `<command>.manifest.json`.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub tool_version: String,
    pub config: Settings,
    pub options: Value,
    pub seeds: Vec<u64>,
    pub outputs: Vec<String>,
    pub wall_time_seconds: f64,
}

/// Collects output files for one command and writes the manifest last.
pub struct Outputs {
    dir: PathBuf,
    written: Vec<String>,
    started: Instant,
}

impl Outputs {
    pub fn new(dir: &Path) -> std::io::Result<Self> {
        std::fs::create_dir_all(dir)?;
        Ok(Self {
            dir: dir.to_path_buf(),
            written: Vec::new(),
            started: Instant::now(),
        })
    }

    pub fn write(&mut self, name: &str, contents: &str) -> std::io::Result<()> {
        std::fs::write(self.dir.join(name), contents)?;
        self.written.push(name.to_string());
        Ok(())
    }

    pub fn write_json<T: Serialize>(&mut self, name: &str, value: &T) -> std::io::Result<String> {
        let mut text = serde_json::to_string_pretty(value).map_err(std::io::Error::other)?;
        text.push('\n');
        self.write(name, &text)?;
        Ok(text)
    }

    pub fn finish<O: Serialize>(
        self,
        command: &str,
        settings: &Settings,
        options: &O,
        seeds: Vec<u64>,
    ) -> std::io::Result<()> {
        let manifest = RunManifest {
            command: command.to_string(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            config: settings.clone(),
            options: serde_json::to_value(options).map_err(std::io::Error::other)?,
            seeds,
            outputs: self.written,
            wall_time_seconds: self.started.elapsed().as_secs_f64(),
        };
        let text = serde_json::to_string_pretty(&manifest).map_err(std::io::Error::other)? + "\n";
        std::fs::write(self.dir.join(format!("{command}.manifest.json")), text)
    }
}
