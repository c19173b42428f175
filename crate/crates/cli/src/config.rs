//! JSON config files: optional defaults for flags, always overridden by the
//! command line. The schema is flat and closed (unknown keys are rejected so
//! typos fail loudly); every field maps to one long flag of the same name.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::report::Format;

/// Flag defaults loadable from `--config <file>`.
#[derive(Debug, Default, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    /// Default for `--format`.
    pub format: Option<Format>,
    /// Default for `--out`.
    pub out: Option<PathBuf>,
    /// Default for `--work-limit`.
    pub work_limit: Option<u64>,
    /// Default for `--sweep`.
    pub sweep: Option<u64>,
    /// Default for `--stages`.
    pub stages: Option<usize>,
    /// Default for `--rho`, in `num/den` form.
    pub rho: Option<String>,
    /// Default for `--require-certified`.
    pub require_certified: Option<bool>,
}

/// Loads the config file when one was named; absent file flag means empty
/// defaults, but a named file that fails to read or parse is an error.
pub fn load(path: Option<&Path>) -> Result<FileConfig, String> {
    let Some(path) = path else {
        return Ok(FileConfig::default());
    };
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("invalid config {}: {e}", path.display()))
}
