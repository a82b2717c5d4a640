//! Run configuration: flags over `cipscan.toml` over defaults.

use std::path::{Path, PathBuf};

use anyhow::Context;
use serde::Deserialize;

pub const CONFIG_FILE: &str = "cipscan.toml";

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Table,
}

impl Format {
    fn parse(s: &str) -> Option<Format> {
        match s {
            "json" => Some(Format::Json),
            "csv" => Some(Format::Csv),
            "table" => Some(Format::Table),
            _ => None,
        }
    }
}

/// Keys accepted in the config file. All optional.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub depth: Option<u32>,
    pub cap: Option<usize>,
    pub seed: Option<u64>,
    pub format: Option<String>,
    pub system: Option<String>,
    pub constraints: Option<PathBuf>,
}

impl FileConfig {
    pub fn parse(text: &str) -> anyhow::Result<FileConfig> {
        Ok(toml::from_str(text)?)
    }

    /// `explicit` must exist; otherwise `cipscan.toml` in the working
    /// directory is read when present.
    pub fn load(explicit: Option<&Path>) -> anyhow::Result<FileConfig> {
        let path = match explicit {
            Some(p) => p.to_path_buf(),
            None => {
                let p = PathBuf::from(CONFIG_FILE);
                if !p.is_file() {
                    return Ok(FileConfig::default());
                }
                p
            }
        };
        let text = std::fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
        FileConfig::parse(&text).with_context(|| format!("in {}", path.display()))
    }
}

/// Values given on the command line.
#[derive(Debug, Default, Clone)]
pub struct Overrides {
    pub depth: Option<u32>,
    pub cap: Option<usize>,
    pub seed: Option<u64>,
    pub format: Option<Format>,
    pub system: Option<String>,
    pub constraints: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunConfig {
    pub depth: u32,
    pub cap: usize,
    pub seed: u64,
    pub format: Format,
    pub system: Option<String>,
    pub constraints: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            depth: cipscan_core::dataflow::DEFAULT_DEPTH,
            cap: cipscan_core::detectors::DEFAULT_CAP,
            seed: 0,
            format: Format::Json,
            system: None,
            constraints: None,
        }
    }
}

impl RunConfig {
    /// Merge the layers. Errors are usage errors.
    pub fn resolve(flags: Overrides, file: FileConfig) -> Result<RunConfig, String> {
        let d = RunConfig::default();
        let file_format = match file.format.as_deref() {
            Some(s) => Some(Format::parse(s).ok_or_else(|| format!("config: unknown format `{s}`"))?),
            None => None,
        };
        let cfg = RunConfig {
            depth: flags.depth.or(file.depth).unwrap_or(d.depth),
            cap: flags.cap.or(file.cap).unwrap_or(d.cap),
            seed: flags.seed.or(file.seed).unwrap_or(d.seed),
            format: flags.format.or(file_format).unwrap_or(d.format),
            system: flags.system.or(file.system),
            constraints: flags.constraints.or(file.constraints),
        };
        if cfg.cap < 1 {
            return Err("--cap must be at least 1".into());
        }
        Ok(cfg)
    }
}
