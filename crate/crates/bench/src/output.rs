//! File output helpers.

use std::io::Write;
use std::path::Path;

/// Writes `contents` to a temporary file next to `path` and renames it into place.
pub fn write_atomic(path: &Path, contents: &[u8]) -> std::io::Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    std::fs::create_dir_all(dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

/// Fixed-precision float formatting shared by all CSV outputs.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.17e}")
}

pub fn threshold_label(eps: f64) -> String {
    format!("{eps:.0e}")
}

/// `1e-1, .., 1e-6`.
pub const GAP_THRESHOLDS: [f64; 6] = [1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6];
