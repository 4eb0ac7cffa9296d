//! On-disk result cache.
//!
//! One JSON file per computation, named by the SHA-256 of its key. The key
//! always includes the engine version, so results from an older engine are
//! never reused. Cache I/O is best effort: failures only cost recomputation.

use std::fs;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use slodowy::ENGINE_VERSION;

/// Environment variable overriding the cache directory.
pub const CACHE_ENV: &str = "SLODOWY_CACHE_DIR";

/// Identifies one computation: an operation name plus ordered parameters.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheKey {
    pub engine_version: String,
    pub operation: String,
    pub params: Vec<(String, String)>,
}

impl CacheKey {
    pub fn new(operation: &str) -> Self {
        Self { engine_version: ENGINE_VERSION.into(), operation: operation.into(), params: Vec::new() }
    }

    pub fn with(mut self, name: &str, value: impl ToString) -> Self {
        self.params.push((name.into(), value.to_string()));
        self
    }

    /// Hex SHA-256 of the canonical key text.
    pub fn digest(&self) -> String {
        let mut text = format!("engine={}\nop={}\n", self.engine_version, self.operation);
        for (k, v) in &self.params {
            text.push_str(&format!("{k}={v}\n"));
        }
        Sha256::digest(text.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
    }
}

/// Stored file layout: the key as a manifest next to the value.
#[derive(Serialize, Deserialize)]
struct Entry<T> {
    manifest: CacheKey,
    value: T,
}

/// A cache directory, or a disabled cache.
#[derive(Debug, Clone)]
pub struct Cache {
    dir: Option<PathBuf>,
}

impl Cache {
    pub fn disabled() -> Self {
        Self { dir: None }
    }

    pub fn at(dir: impl Into<PathBuf>) -> Self {
        Self { dir: Some(dir.into()) }
    }

    /// `$XDG_CACHE_HOME/slodowy`, else `$HOME/.cache/slodowy`.
    pub fn default_dir() -> Option<PathBuf> {
        let base = std::env::var_os("XDG_CACHE_HOME")
            .map(PathBuf::from)
            .or_else(|| std::env::var_os("HOME").map(|h| Path::new(&h).join(".cache")))?;
        Some(base.join("slodowy"))
    }

    pub fn dir(&self) -> Option<&Path> {
        self.dir.as_deref()
    }

    fn path(&self, key: &CacheKey) -> Option<PathBuf> {
        self.dir.as_ref().map(|d| d.join(format!("{}.json", key.digest())))
    }

    /// The stored value, if present, readable and recorded under the same key.
    pub fn load<T: DeserializeOwned>(&self, key: &CacheKey) -> Option<T> {
        let text = fs::read_to_string(self.path(key)?).ok()?;
        let entry: Entry<T> = serde_json::from_str(&text).ok()?;
        (entry.manifest == *key).then_some(entry.value)
    }

    /// Writes atomically through a temporary file; errors are ignored.
    pub fn store<T: Serialize>(&self, key: &CacheKey, value: &T) {
        let (Some(dir), Some(path)) = (self.dir.as_ref(), self.path(key)) else {
            return;
        };
        let entry = Entry { manifest: key.clone(), value };
        let Ok(text) = serde_json::to_string_pretty(&entry) else {
            return;
        };
        let tmp = path.with_extension(format!("tmp{}", std::process::id()));
        if fs::create_dir_all(dir).is_ok() && fs::write(&tmp, text).is_ok() && fs::rename(&tmp, &path).is_err() {
            let _ = fs::remove_file(&tmp);
        }
    }

    /// Cached value for `key`, computing and storing it on a miss.
    pub fn get_or_compute<T, E>(&self, key: &CacheKey, compute: impl FnOnce() -> Result<T, E>) -> Result<T, E>
    where
        T: Serialize + DeserializeOwned,
    {
        if let Some(v) = self.load(key) {
            return Ok(v);
        }
        let v = compute()?;
        self.store(key, &v);
        Ok(v)
    }
}
