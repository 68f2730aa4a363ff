//! On-disk cache of positive root tables, one file per matrix hash.

use std::path::{Path, PathBuf};

use kmq_core::roots::{extend_table, PositiveRootTable};
use kmq_core::{Gcm, Result, RootVector};

fn table_path(dir: &Path, gcm: &Gcm) -> PathBuf {
    dir.join(format!("roots-{}.json", gcm.hash()))
}

/// The cached table for `gcm`, if present and intact. Corrupt files are
/// reported on stderr; tables for a different matrix are ignored.
pub fn load(dir: &Path, gcm: &Gcm) -> Option<PositiveRootTable> {
    let path = table_path(dir, gcm);
    let text = std::fs::read_to_string(&path).ok()?;
    match PositiveRootTable::from_json(&text) {
        Ok(t) if t.gcm_hash() == gcm.hash() && t.bound().rank() == gcm.rank() => Some(t),
        Ok(_) => None,
        Err(e) => {
            eprintln!("warning: ignoring corrupt cache {}: {e}; rebuilding", path.display());
            None
        }
    }
}

pub fn save(dir: &Path, table: &PositiveRootTable) -> std::io::Result<()> {
    std::fs::create_dir_all(dir)?;
    let path = dir.join(format!("roots-{}.json", table.gcm_hash()));
    let tmp = path.with_extension("json.tmp");
    std::fs::write(&tmp, table.to_json())?;
    std::fs::rename(tmp, path)
}

/// A table covering `corner`, reusing and growing the cache when a
/// directory is given.
pub fn table_for(dir: Option<&Path>, gcm: &Gcm, corner: &RootVector) -> Result<PositiveRootTable> {
    let Some(dir) = dir else {
        return extend_table(gcm, None, corner);
    };
    let cached = load(dir, gcm);
    if let Some(t) = &cached {
        if t.covers(corner) {
            return extend_table(gcm, Some(t), corner);
        }
    }
    // Grow to the union box so the cache never shrinks.
    let target = match &cached {
        Some(t) => RootVector::new(
            t.bound()
                .coeffs()
                .iter()
                .zip(corner.coeffs())
                .map(|(a, b)| *a.max(b))
                .collect(),
        ),
        None => corner.clone(),
    };
    let grown = extend_table(gcm, cached.as_ref(), &target)?;
    if let Err(e) = save(dir, &grown) {
        eprintln!("warning: could not write cache in {}: {e}", dir.display());
    }
    extend_table(gcm, Some(&grown), corner)
}
