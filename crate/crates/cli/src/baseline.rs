//! Append-only store of prior results in the cache directory.
//!
//! Each line of `baselines.jsonl` is one [`Record`]. A rerun with the same
//! `(command, config_hash, code_version)` key must reproduce the stored
//! payload byte for byte. Concurrent processes serialise on a lock file
//! created with `O_EXCL` semantics.

use std::fs::{self, File, OpenOptions};
use std::io::{self, BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::thread;
use std::time::{Duration, SystemTime};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub const STORE_FILE: &str = "baselines.jsonl";
pub const LOCK_FILE: &str = "smoothek.lock";

const LOCK_RETRY: Duration = Duration::from_millis(50);
const LOCK_TIMEOUT: Duration = Duration::from_secs(60);
/// A lock older than this is assumed to belong to a crashed process.
const LOCK_STALE: Duration = Duration::from_secs(600);

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub command: String,
    pub config_hash: String,
    pub code_version: String,
    /// The frozen thresholds the checks were judged against.
    pub thresholds: serde_json::Value,
    pub payload_sha256: String,
    pub payload: String,
}

#[derive(Debug, PartialEq, Eq)]
pub enum Outcome {
    /// No earlier record had this key; one was appended.
    Stored,
    Reproduced,
    Mismatch { stored: String, fresh: String },
}

/// Holds the cache-directory lock until dropped.
pub struct DirLock {
    path: PathBuf,
}

impl DirLock {
    pub fn acquire(dir: &Path) -> io::Result<Self> {
        fs::create_dir_all(dir)?;
        let path = dir.join(LOCK_FILE);
        let start = SystemTime::now();
        loop {
            match OpenOptions::new().write(true).create_new(true).open(&path) {
                Ok(mut f) => {
                    writeln!(f, "{}", std::process::id())?;
                    return Ok(DirLock { path });
                }
                Err(e) if e.kind() == io::ErrorKind::AlreadyExists => {
                    let age = fs::metadata(&path)
                        .and_then(|m| m.modified())
                        .ok()
                        .and_then(|t| t.elapsed().ok());
                    if age.is_some_and(|a| a > LOCK_STALE) {
                        let _ = fs::remove_file(&path);
                        continue;
                    }
                    if start.elapsed().unwrap_or_default() > LOCK_TIMEOUT {
                        return Err(io::Error::new(
                            io::ErrorKind::TimedOut,
                            format!("cache directory is locked by {}", path.display()),
                        ));
                    }
                    thread::sleep(LOCK_RETRY);
                }
                Err(e) => return Err(e),
            }
        }
    }
}

impl Drop for DirLock {
    fn drop(&mut self) {
        let _ = fs::remove_file(&self.path);
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

pub struct BaselineStore {
    dir: PathBuf,
}

impl BaselineStore {
    pub fn new(dir: &Path) -> Self {
        BaselineStore {
            dir: dir.to_path_buf(),
        }
    }

    pub fn path(&self) -> PathBuf {
        self.dir.join(STORE_FILE)
    }

    pub fn records(&self) -> io::Result<Vec<Record>> {
        let file = match File::open(self.path()) {
            Ok(f) => f,
            Err(e) if e.kind() == io::ErrorKind::NotFound => return Ok(Vec::new()),
            Err(e) => return Err(e),
        };
        BufReader::new(file)
            .lines()
            .filter(|l| !l.as_ref().is_ok_and(|l| l.trim().is_empty()))
            .map(|l| {
                let l = l?;
                serde_json::from_str(&l).map_err(|e| io::Error::new(io::ErrorKind::InvalidData, e))
            })
            .collect()
    }

    /// Compares against the first record with the same key, or appends one.
    pub fn check_or_store(&self, record: Record) -> io::Result<Outcome> {
        let _lock = DirLock::acquire(&self.dir)?;
        let prior = self.records()?.into_iter().find(|r| {
            r.command == record.command
                && r.config_hash == record.config_hash
                && r.code_version == record.code_version
        });
        if let Some(prior) = prior {
            return Ok(if prior.payload == record.payload {
                Outcome::Reproduced
            } else {
                Outcome::Mismatch {
                    stored: sha256_hex(prior.payload.as_bytes()),
                    fresh: record.payload_sha256,
                }
            });
        }
        let mut f = OpenOptions::new().create(true).append(true).open(self.path())?;
        let line = serde_json::to_string(&record).map_err(io::Error::other)?;
        writeln!(f, "{line}")?;
        f.sync_all()?;
        Ok(Outcome::Stored)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(payload: &str) -> Record {
        Record {
            command: "count".into(),
            config_hash: "abc".into(),
            code_version: "v".into(),
            thresholds: serde_json::json!({}),
            payload_sha256: sha256_hex(payload.as_bytes()),
            payload: payload.into(),
        }
    }

    #[test]
    fn append_then_reproduce_then_mismatch() {
        let dir = tempfile::tempdir().unwrap();
        let store = BaselineStore::new(dir.path());
        assert_eq!(store.check_or_store(record("1")).unwrap(), Outcome::Stored);
        assert_eq!(store.check_or_store(record("1")).unwrap(), Outcome::Reproduced);
        assert!(matches!(
            store.check_or_store(record("2")).unwrap(),
            Outcome::Mismatch { .. }
        ));
        let mut other = record("2");
        other.config_hash = "def".into();
        assert_eq!(store.check_or_store(other).unwrap(), Outcome::Stored);
        assert_eq!(store.records().unwrap().len(), 2);
        assert!(!dir.path().join(LOCK_FILE).exists());
    }

    #[test]
    fn stale_lock_is_removed() {
        let dir = tempfile::tempdir().unwrap();
        let lock = dir.path().join(LOCK_FILE);
        let f = File::create(&lock).unwrap();
        f.set_modified(SystemTime::now() - LOCK_STALE - Duration::from_secs(5))
            .unwrap();
        drop(f);
        let guard = DirLock::acquire(dir.path()).unwrap();
        assert!(lock.exists());
        drop(guard);
        assert!(!lock.exists());
    }

    #[test]
    fn concurrent_writers_serialise() {
        let dir = tempfile::tempdir().unwrap();
        let handles: Vec<_> = (0..8)
            .map(|i| {
                let d = dir.path().to_path_buf();
                thread::spawn(move || {
                    let mut r = record("p");
                    r.config_hash = format!("h{i}");
                    BaselineStore::new(&d).check_or_store(r).unwrap()
                })
            })
            .collect();
        for h in handles {
            assert_eq!(h.join().unwrap(), Outcome::Stored);
        }
        assert_eq!(BaselineStore::new(dir.path()).records().unwrap().len(), 8);
    }
}
