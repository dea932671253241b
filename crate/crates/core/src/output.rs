//! Text output helpers shared by the CLI and the examples.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

/// Floats in output files: scientific notation with 17 significant digits,
/// enough to round-trip every `f64`.
pub fn float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        x.to_string()
    }
}

pub fn opt_float(x: Option<f64>) -> String {
    x.map(float).unwrap_or_default()
}

/// First 16 hex digits of the SHA-256 of `text`.
pub fn config_hash(text: &str) -> String {
    let digest = Sha256::digest(text.as_bytes());
    digest.iter().take(8).fold(String::new(), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

/// Comment block prefixed to every output file: version, config hash,
/// seed and the resolved configuration.
pub fn header(resolved_config: &str, seed: Option<u64>) -> String {
    let mut s = format!(
        "# oversmooth {}\n# config_hash: {}\n# seed: {}\n",
        env!("CARGO_PKG_VERSION"),
        config_hash(resolved_config),
        seed.map_or_else(|| "none".to_string(), |v| v.to_string())
    );
    for line in resolved_config.lines() {
        s.push_str("# | ");
        s.push_str(line);
        s.push('\n');
    }
    s
}

/// Lines that are not `#` comments.
pub fn body(text: &str) -> String {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| format!("{l}\n"))
        .collect()
}

pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(|source| Error::Io {
            path: parent.display().to_string(),
            source,
        })?;
    }
    fs::write(path, contents).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}
