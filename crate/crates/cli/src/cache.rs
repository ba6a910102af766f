//! On-disk cache of derived systems, solutions and reports.
//!
//! One JSON file per key. The payload is itself a JSON string so that its
//! SHA-256 can be checked byte-for-byte on load.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{de::DeserializeOwned, Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::CliError;

pub const SCHEMA_VERSION: u32 = 1;
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");
pub const CACHE_DIR_ENV: &str = "EPN_CACHE_DIR";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheKey {
    pub dimension: usize,
    /// `general` when `z` is kept symbolic.
    pub z0: String,
    pub stage: String,
}

impl CacheKey {
    pub fn new(dimension: usize, z0: &str, stage: &str) -> Self {
        CacheKey {
            dimension,
            z0: z0.to_string(),
            stage: stage.to_string(),
        }
    }

    pub fn file_name(&self) -> String {
        let clean = |s: &str| -> String {
            s.chars()
                .map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '.' { c } else { '_' })
                .collect()
        };
        format!("n{}-z{}-{}.json", self.dimension, clean(&self.z0), clean(&self.stage))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheEntry {
    pub schema: u32,
    pub tool_version: String,
    pub key: CacheKey,
    /// Hex SHA-256 of `payload`.
    pub hash: String,
    pub payload: String,
}

pub fn sha256_hex(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}

impl CacheEntry {
    pub fn new<T: Serialize>(key: CacheKey, value: &T) -> Result<Self, CliError> {
        let payload = serde_json::to_string(value)?;
        Ok(CacheEntry {
            schema: SCHEMA_VERSION,
            tool_version: TOOL_VERSION.to_string(),
            key,
            hash: sha256_hex(&payload),
            payload,
        })
    }

    pub fn is_intact(&self) -> bool {
        self.schema == SCHEMA_VERSION && self.tool_version == TOOL_VERSION && sha256_hex(&self.payload) == self.hash
    }

    pub fn decode<T: DeserializeOwned>(&self) -> Result<T, CliError> {
        Ok(serde_json::from_str(&self.payload)?)
    }
}

#[derive(Clone, Debug)]
pub struct Cache {
    dir: Option<PathBuf>,
}

impl Cache {
    /// `dir` overrides the environment; `None` with `enabled = false` turns caching off.
    pub fn new(dir: Option<PathBuf>, enabled: bool) -> Self {
        if !enabled {
            return Cache { dir: None };
        }
        let dir = dir
            .or_else(|| std::env::var_os(CACHE_DIR_ENV).map(PathBuf::from))
            .or_else(|| std::env::var_os("HOME").map(|h| PathBuf::from(h).join(".cache").join("epn")));
        Cache { dir }
    }

    pub fn disabled() -> Self {
        Cache { dir: None }
    }

    pub fn dir(&self) -> Option<&Path> {
        self.dir.as_deref()
    }

    pub fn load_entry(&self, key: &CacheKey) -> Option<CacheEntry> {
        let path = self.dir.as_ref()?.join(key.file_name());
        let text = fs::read_to_string(&path).ok()?;
        match serde_json::from_str::<CacheEntry>(&text) {
            Ok(e) if e.is_intact() && &e.key == key => Some(e),
            _ => {
                eprintln!("warning: ignoring stale or corrupt cache file {}", path.display());
                None
            }
        }
    }

    pub fn load<T: DeserializeOwned>(&self, key: &CacheKey) -> Option<T> {
        self.load_entry(key)?.decode().ok()
    }

    /// Atomic write: temp file in the cache directory, then rename.
    pub fn store<T: Serialize>(&self, key: &CacheKey, value: &T) -> Result<(), CliError> {
        let Some(dir) = &self.dir else { return Ok(()) };
        fs::create_dir_all(dir)?;
        let entry = CacheEntry::new(key.clone(), value)?;
        let text = serde_json::to_string_pretty(&entry)?;
        let target = dir.join(key.file_name());
        let tmp = dir.join(format!(".{}.{}.tmp", key.file_name(), std::process::id()));
        {
            let mut f = fs::File::create(&tmp)?;
            f.write_all(text.as_bytes())?;
            f.sync_all()?;
        }
        fs::rename(&tmp, &target)?;
        Ok(())
    }
}
