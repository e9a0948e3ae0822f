//! Output directories: a lock file guards against concurrent runs, and all
//! files are written to a staging area that is moved into place only when
//! the command succeeds.

use std::fs::{self, OpenOptions};
use std::io::ErrorKind;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};

const LOCK_FILE: &str = ".wwqe.lock";
const STAGING_DIR: &str = ".wwqe-staging";

pub struct OutputDir {
    dir: PathBuf,
    staging: PathBuf,
    lock: PathBuf,
    created: bool,
    committed: bool,
}

impl OutputDir {
    pub fn open(dir: &Path) -> Result<Self> {
        let created = !dir.exists();
        fs::create_dir_all(dir).with_context(|| format!("creating output directory {}", dir.display()))?;
        let lock = dir.join(LOCK_FILE);
        match OpenOptions::new().write(true).create_new(true).open(&lock) {
            Ok(_) => {}
            Err(e) if e.kind() == ErrorKind::AlreadyExists => bail!(
                "output directory {} is in use by another run (remove {} if no run is active)",
                dir.display(),
                lock.display()
            ),
            Err(e) => return Err(e).with_context(|| format!("creating lock {}", lock.display())),
        }
        let staging = dir.join(STAGING_DIR);
        let out = Self { dir: dir.to_path_buf(), staging, lock, created, committed: false };
        if out.staging.exists() {
            fs::remove_dir_all(&out.staging)?;
        }
        fs::create_dir(&out.staging)?;
        Ok(out)
    }

    /// Staging location for `rel`; parent directories are created.
    pub fn path(&self, rel: impl AsRef<Path>) -> Result<PathBuf> {
        let p = self.staging.join(rel);
        if let Some(parent) = p.parent() {
            fs::create_dir_all(parent)?;
        }
        Ok(p)
    }

    pub fn write(&self, rel: impl AsRef<Path>, contents: impl AsRef<[u8]>) -> Result<()> {
        let p = self.path(rel)?;
        fs::write(&p, contents).with_context(|| format!("writing {}", p.display()))
    }

    /// The directory itself, for callers that save whole stores.
    pub fn staging(&self) -> &Path {
        &self.staging
    }

    /// Moves every staged entry into the output directory, replacing old ones.
    pub fn commit(mut self) -> Result<()> {
        let mut entries: Vec<_> = fs::read_dir(&self.staging)?.collect::<Result<_, _>>()?;
        entries.sort_by_key(|e| e.file_name());
        for e in entries {
            let target = self.dir.join(e.file_name());
            if target.is_dir() {
                fs::remove_dir_all(&target)?;
            } else if target.exists() {
                fs::remove_file(&target)?;
            }
            fs::rename(e.path(), &target).with_context(|| format!("moving output into {}", target.display()))?;
        }
        self.committed = true;
        Ok(())
    }
}

impl Drop for OutputDir {
    fn drop(&mut self) {
        let _ = fs::remove_dir_all(&self.staging);
        let _ = fs::remove_file(&self.lock);
        if self.created && !self.committed {
            let _ = fs::remove_dir(&self.dir);
        }
    }
}
