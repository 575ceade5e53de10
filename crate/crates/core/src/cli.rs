//! Config files and output bundles for the command-line front end.
//!
//! Config files are flat `key = value` lines. `#` starts a comment, blank
//! lines are ignored and every key not given keeps its default.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::config::ScenarioConfig;
use crate::error::{Error, Result};
use crate::harness::ComparisonSummary;
use crate::trace::{write_csv, SlotRecord};

pub const TRACE_FILE: &str = "trace.csv";
pub const SUMMARY_FILE: &str = "summary.json";
pub const CONFIG_ECHO_FILE: &str = "config.txt";

pub fn parse_config(text: &str) -> Result<ScenarioConfig> {
    let mut cfg = ScenarioConfig::default();
    let mut seen = std::collections::HashSet::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(Error::Parse {
                line: line_no,
                reason: format!("expected `key = value`, found `{line}`"),
            });
        };
        let (key, value) = (key.trim(), value.trim());
        if !ScenarioConfig::KEYS.contains(&key) {
            return Err(Error::Parse {
                line: line_no,
                reason: format!("unknown key `{key}`"),
            });
        }
        if !seen.insert(key.to_string()) {
            return Err(Error::Parse {
                line: line_no,
                reason: format!("duplicate key `{key}`"),
            });
        }
        cfg.set(key, value).map_err(|e| Error::Parse {
            line: line_no,
            reason: e.to_string(),
        })?;
    }
    cfg.validate()?;
    Ok(cfg)
}

pub fn load_config(path: &Path) -> Result<ScenarioConfig> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    parse_config(&text)
}

/// Every key with its effective value, in a form [`parse_config`] reads back.
pub fn echo_config(cfg: &ScenarioConfig) -> String {
    let mut out = String::new();
    for (k, v) in cfg.entries() {
        out.push_str(k);
        out.push_str(" = ");
        out.push_str(&v);
        out.push('\n');
    }
    out
}

/// Write via a temporary file in the same directory and rename into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or(Path::new("."));
    let io = |e: std::io::Error| Error::io(path.display().to_string(), e);
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(bytes).map_err(io)?;
    tmp.as_file().sync_all().map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut bytes = serde_json::to_vec_pretty(value).map_err(|e| Error::Trace(e.to_string()))?;
    bytes.push(b'\n');
    write_atomic(path, &bytes)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutputBundle {
    pub trace_path: PathBuf,
    pub summary_path: PathBuf,
    pub config_echo_path: PathBuf,
}

impl OutputBundle {
    pub fn in_dir(dir: &Path) -> Self {
        Self {
            trace_path: dir.join(TRACE_FILE),
            summary_path: dir.join(SUMMARY_FILE),
            config_echo_path: dir.join(CONFIG_ECHO_FILE),
        }
    }
}

pub fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir.display().to_string(), e))
}

pub fn write_run_bundle(
    dir: &Path,
    cfg: &ScenarioConfig,
    trace: &[SlotRecord],
    summary: &ComparisonSummary,
) -> Result<OutputBundle> {
    ensure_dir(dir)?;
    let bundle = OutputBundle::in_dir(dir);
    let mut csv = Vec::with_capacity(trace.len() * 96);
    write_csv(trace, &mut csv)?;
    write_atomic(&bundle.trace_path, &csv)?;
    write_json(&bundle.summary_path, summary)?;
    write_atomic(&bundle.config_echo_path, echo_config(cfg).as_bytes())?;
    Ok(bundle)
}

/// Config keys with their defaults; angles also shown in mrad.
pub fn defaults_help() -> String {
    let mut out = String::from("Config keys and defaults (angles in rad):\n");
    for (k, v) in ScenarioConfig::default().entries() {
        let mrad = match v.parse::<f64>() {
            Ok(x) if k.ends_with("_rad") => format!("  ({} mrad)", x * 1e3),
            _ => String::new(),
        };
        out.push_str(&format!("  {k} = {v}{mrad}\n"));
    }
    out
}
