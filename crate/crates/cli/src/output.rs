use std::io::Write;
use std::path::{Path, PathBuf};

use tempfile::NamedTempFile;

/// Output files staged in memory and written together at the end of a
/// successful run, so a failing command leaves no partial outputs behind.
#[derive(Default)]
pub struct Outputs {
    pending: Vec<(PathBuf, Vec<u8>)>,
}

impl Outputs {
    pub fn add(&mut self, path: impl Into<PathBuf>, contents: impl Into<Vec<u8>>) {
        self.pending.push((path.into(), contents.into()));
    }

    /// Writes every file to a temporary sibling, then renames them all into
    /// place. Files already renamed are removed if a later rename fails.
    pub fn commit(self) -> std::io::Result<()> {
        let mut staged = Vec::with_capacity(self.pending.len());
        for (path, contents) in self.pending {
            let dir = match path.parent() {
                Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
                _ => PathBuf::from("."),
            };
            let mut tmp = NamedTempFile::new_in(&dir).map_err(|e| with_path(e, &path))?;
            tmp.write_all(&contents).map_err(|e| with_path(e, &path))?;
            staged.push((path, tmp));
        }
        let mut done: Vec<PathBuf> = Vec::new();
        for (path, tmp) in staged {
            if let Err(e) = tmp.persist(&path) {
                for p in &done {
                    let _ = std::fs::remove_file(p);
                }
                return Err(with_path(e.error, &path));
            }
            done.push(path);
        }
        Ok(())
    }
}

fn with_path(e: std::io::Error, path: &Path) -> std::io::Error {
    std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))
}
