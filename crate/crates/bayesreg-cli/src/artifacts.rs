//! Artifact writing.
//!
//! Every CSV artifact starts with a comment header recording the seed, the
//! resolved-config hash, and the toolkit version; JSON artifacts carry the
//! same triple in a `meta` object (JSON has no comments). Nothing
//! time-dependent is written, so identical configurations produce
//! byte-identical files.

use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::json;

use crate::error::CliError;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Serialize)]
pub struct ArtifactMeta {
    pub seed: u64,
    pub config_hash: String,
    pub version: String,
}

impl ArtifactMeta {
    pub fn new(seed: u64, config_hash: String) -> Self {
        ArtifactMeta { seed, config_hash, version: VERSION.to_string() }
    }

    pub fn comment_header(&self) -> String {
        format!(
            "# seed={}\n# config={}\n# version={}\n",
            self.seed, self.config_hash, self.version
        )
    }
}

/// Ensure the output directory exists and is writable.
pub fn prepare_out_dir(dir: &Path) -> Result<(), CliError> {
    std::fs::create_dir_all(dir)
        .map_err(|e| CliError::Io(format!("cannot create {}: {e}", dir.display())))?;
    // Probe writability up front so compute never runs for an unwritable sink.
    let probe = dir.join(".write-probe");
    std::fs::write(&probe, b"ok")
        .map_err(|e| CliError::Io(format!("{} is not writable: {e}", dir.display())))?;
    let _ = std::fs::remove_file(&probe);
    Ok(())
}

/// Write a CSV artifact: comment header, then the data section.
pub fn write_csv_artifact(
    dir: &Path,
    name: &str,
    meta: &ArtifactMeta,
    data_section: &str,
) -> Result<PathBuf, CliError> {
    let path = dir.join(name);
    let content = format!("{}{}", meta.comment_header(), data_section);
    std::fs::write(&path, content)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    Ok(path)
}

/// Write a JSON artifact with the meta object injected at the top level.
/// NaN/infinite values are replaced by null plus a reason field by the
/// caller; this writer rejects non-finite values outright.
pub fn write_json_artifact<T: Serialize>(
    dir: &Path,
    name: &str,
    meta: &ArtifactMeta,
    payload: &T,
) -> Result<PathBuf, CliError> {
    let path = dir.join(name);
    let mut value = serde_json::to_value(payload)
        .map_err(|e| CliError::Io(format!("serializing {name}: {e}")))?;
    let obj = value
        .as_object_mut()
        .ok_or_else(|| CliError::Io(format!("{name}: top-level JSON must be an object")))?;
    obj.insert("meta".into(), json!(meta));
    let text = serde_json::to_string_pretty(&value)
        .map_err(|e| CliError::Io(format!("serializing {name}: {e}")))?;
    std::fs::write(&path, text + "\n")
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    Ok(path)
}

/// Map non-finite floats to `None` so JSON output never contains NaN
/// literals; pair with a reason string where context matters.
pub fn finite_or_none(v: f64) -> Option<f64> {
    v.is_finite().then_some(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_format() {
        let meta = ArtifactMeta::new(42, "abc123".into());
        let h = meta.comment_header();
        assert!(h.starts_with("# seed=42\n# config=abc123\n# version="));
    }

    #[test]
    fn json_meta_injected() {
        let dir = std::env::temp_dir().join("bayesreg-artifact-test");
        std::fs::create_dir_all(&dir).unwrap();
        let meta = ArtifactMeta::new(7, "cfg".into());
        #[derive(Serialize)]
        struct P {
            x: u32,
        }
        let path = write_json_artifact(&dir, "t.json", &meta, &P { x: 5 }).unwrap();
        let text = std::fs::read_to_string(path).unwrap();
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["meta"]["seed"], 7);
        assert_eq!(v["x"], 5);
    }
}
