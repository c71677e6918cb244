//! Append-only store of computed numbers, one JSON record per line.
//!
//! Records written by a different engine version are never returned.
//! Writers take an exclusive whole-file lock and readers a shared one; if a
//! lock cannot be acquired the cache switches itself off for the rest of the
//! process.

use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicBool, Ordering};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::numbers::{NumberKind, NumberResult, Semantics};
use crate::pebbling::Configuration;
use crate::ENGINE_VERSION;

/// Environment variable naming the cache file.
pub const CACHE_ENV: &str = "NSDCP_CACHE";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheRecord {
    pub digest: String,
    pub kind: NumberKind,
    pub mode: Semantics,
    pub value: u64,
    pub worst_witness: Configuration,
    pub engine_version: String,
    /// Seconds since the Unix epoch.
    pub timestamp: u64,
}

impl CacheRecord {
    pub fn from_result(result: &NumberResult) -> Self {
        CacheRecord {
            digest: result.digest.clone(),
            kind: result.kind,
            mode: result.semantics,
            value: result.value,
            worst_witness: result.worst_witness.clone(),
            engine_version: ENGINE_VERSION.to_string(),
            timestamp: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
        }
    }

    fn matches(&self, digest: &str, kind: NumberKind, mode: Semantics) -> bool {
        self.digest == digest && self.kind == kind && self.mode == mode
    }
}

#[derive(Debug)]
pub struct Cache {
    path: PathBuf,
    enabled: AtomicBool,
}

impl Cache {
    pub fn open(path: impl Into<PathBuf>) -> Self {
        Cache {
            path: path.into(),
            enabled: AtomicBool::new(true),
        }
    }

    /// The cache named by [`CACHE_ENV`], if set and non-empty.
    pub fn from_env() -> Option<Self> {
        std::env::var_os(CACHE_ENV)
            .filter(|p| !p.is_empty())
            .map(Cache::open)
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn is_enabled(&self) -> bool {
        self.enabled.load(Ordering::Relaxed)
    }

    fn disable(&self, why: &str) {
        if self.enabled.swap(false, Ordering::Relaxed) {
            log::warn!("cache {} disabled: {why}", self.path.display());
        }
    }

    /// The newest record for the key written by this engine version.
    pub fn get(&self, digest: &str, kind: NumberKind, mode: Semantics) -> Option<CacheRecord> {
        if !self.is_enabled() {
            return None;
        }
        let file = match File::open(&self.path) {
            Ok(f) => f,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return None,
            Err(e) => {
                self.disable(&e.to_string());
                return None;
            }
        };
        if let Err(e) = file.lock_shared() {
            self.disable(&format!("shared lock failed: {e}"));
            return None;
        }
        let mut found = None;
        for (number, line) in BufReader::new(&file).lines().enumerate() {
            let line = match line {
                Ok(l) => l,
                Err(e) => {
                    log::warn!("cache {} line {}: {e}", self.path.display(), number + 1);
                    continue;
                }
            };
            if line.trim().is_empty() {
                continue;
            }
            match serde_json::from_str::<CacheRecord>(&line) {
                Ok(r) if r.engine_version == ENGINE_VERSION && r.matches(digest, kind, mode) => {
                    found = Some(r);
                }
                Ok(_) => {}
                Err(e) => {
                    log::warn!(
                        "skipping corrupted cache line {} in {}: {e}",
                        number + 1,
                        self.path.display()
                    );
                }
            }
        }
        let _ = file.unlock();
        found
    }

    /// Appends `record`. Failures switch the cache off and are not errors.
    pub fn put(&self, record: &CacheRecord) {
        if !self.is_enabled() {
            return;
        }
        if let Err(e) = self.append(record) {
            self.disable(&e.to_string());
        }
    }

    fn append(&self, record: &CacheRecord) -> Result<()> {
        let mut line = serde_json::to_string(record)?;
        line.push('\n');
        let mut file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(&self.path)?;
        file.lock()?;
        let written = file.write_all(line.as_bytes()).and_then(|()| file.flush());
        let _ = file.unlock();
        Ok(written?)
    }
}
