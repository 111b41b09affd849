//! Canonical JSON documents: sorted object keys, pretty-printed, trailing
//! newline, written atomically (temp file in the target directory, then
//! rename).

use std::fs;
use std::io::Write as _;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::error::{Error, Result};

/// Serializes to the canonical text form. Keys are sorted because the
/// intermediate `serde_json::Value` object map is ordered.
pub fn to_canonical_json<T: Serialize>(value: &T) -> Result<String> {
    let v = serde_json::to_value(value)
        .map_err(|e| Error::InvalidParams(format!("serialization failed: {e}")))?;
    let mut s = serde_json::to_string_pretty(&v)
        .map_err(|e| Error::InvalidParams(format!("serialization failed: {e}")))?;
    s.push('\n');
    Ok(s)
}

/// Writes the canonical form atomically: a temp file next to the target is
/// renamed over it, so readers never observe a partial document.
pub fn write_canonical<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    use std::sync::atomic::{AtomicU64, Ordering};
    static COUNTER: AtomicU64 = AtomicU64::new(0);

    let text = to_canonical_json(value)?;
    let io_err = |e: std::io::Error| Error::InvalidParams(format!("write {}: {e}", path.display()));
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(format!(
        ".tmp.{}.{}",
        std::process::id(),
        COUNTER.fetch_add(1, Ordering::Relaxed)
    ));
    let tmp = std::path::PathBuf::from(tmp);
    let result = (|| {
        let mut f = fs::File::create(&tmp).map_err(io_err)?;
        f.write_all(text.as_bytes()).map_err(io_err)?;
        f.sync_all().map_err(io_err)?;
        fs::rename(&tmp, path).map_err(io_err)
    })();
    if result.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    result
}

/// Reads and parses a JSON document, running the type's own validation
/// (words reduce, matrices re-check det = 1, keys re-run their checks).
pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::InvalidParams(format!("read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| Error::InvalidParams(format!("parse {}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde::Deserialize;

    #[derive(Serialize, Deserialize, PartialEq, Debug)]
    struct Doc {
        zeta: u32,
        alpha: String,
    }

    #[test]
    fn keys_are_sorted_and_newline_terminated() {
        let s = to_canonical_json(&Doc { zeta: 1, alpha: "x".into() }).unwrap();
        assert!(s.ends_with('\n'));
        assert!(s.find("alpha").unwrap() < s.find("zeta").unwrap());
    }

    #[test]
    fn serialization_is_deterministic() {
        let d = Doc { zeta: 9, alpha: "y".into() };
        assert_eq!(to_canonical_json(&d).unwrap(), to_canonical_json(&d).unwrap());
    }

    #[test]
    fn write_then_read_roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("doc.json");
        let d = Doc { zeta: 3, alpha: "z".into() };
        write_canonical(&path, &d).unwrap();
        let back: Doc = read_json(&path).unwrap();
        assert_eq!(back, d);
        // overwrite is atomic and leaves no temp litter
        write_canonical(&path, &d).unwrap();
        let entries: Vec<_> = std::fs::read_dir(dir.path()).unwrap().collect();
        assert_eq!(entries.len(), 1);
    }
}
