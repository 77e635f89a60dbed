//! On-disk result cache: JSON payloads next to an `index.json` that maps
//! each key to its payload file and SHA-256. A payload whose hash no longer
//! matches is evicted and recomputed, never used.

use std::collections::BTreeMap;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub const ENV_DIR: &str = "GTM_CACHE_DIR";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheKey {
    pub kind: String,
    pub spec: String,
    pub domain: String,
    pub u: String,
    #[serde(rename = "N")]
    pub n: u64,
    /// Remaining parameters that change the payload (strategy, terms, ...).
    pub extra: String,
}

impl CacheKey {
    fn id(&self) -> String {
        sha256_hex(serde_json::to_string(self).expect("key serializes").as_bytes())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheEntry {
    pub key: CacheKey,
    pub payload: String,
    pub hash: String,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    format!("{:x}", Sha256::digest(bytes))
}

#[derive(Debug)]
pub enum Lookup {
    Hit(serde_json::Value),
    Miss,
    /// The stored payload failed verification and was removed.
    Evicted,
}

pub struct Cache {
    dir: PathBuf,
}

fn with_path(path: &Path, e: io::Error) -> String {
    format!("{}: {e}", path.display())
}

impl Cache {
    /// `$GTM_CACHE_DIR`, else `$XDG_CACHE_HOME/gtm`, else `~/.cache/gtm`.
    pub fn default_dir() -> Option<PathBuf> {
        if let Some(d) = std::env::var_os(ENV_DIR) {
            return Some(PathBuf::from(d));
        }
        if let Some(d) = std::env::var_os("XDG_CACHE_HOME") {
            return Some(PathBuf::from(d).join("gtm"));
        }
        std::env::var_os("HOME").map(|h| PathBuf::from(h).join(".cache").join("gtm"))
    }

    pub fn new(dir: PathBuf) -> Self {
        Self { dir }
    }

    fn index_path(&self) -> PathBuf {
        self.dir.join("index.json")
    }

    fn read_index(&self) -> Result<BTreeMap<String, CacheEntry>, String> {
        let path = self.index_path();
        match fs::read(&path) {
            Ok(bytes) => Ok(serde_json::from_slice(&bytes).unwrap_or_default()),
            Err(e) if e.kind() == io::ErrorKind::NotFound => Ok(BTreeMap::new()),
            Err(e) => Err(with_path(&path, e)),
        }
    }

    fn write_index(&self, index: &BTreeMap<String, CacheEntry>) -> Result<(), String> {
        let path = self.index_path();
        let tmp = self.dir.join("index.json.tmp");
        let body = serde_json::to_vec_pretty(index).expect("index serializes");
        fs::write(&tmp, body).map_err(|e| with_path(&tmp, e))?;
        fs::rename(&tmp, &path).map_err(|e| with_path(&path, e))
    }

    pub fn get(&self, key: &CacheKey) -> Result<Lookup, String> {
        let mut index = self.read_index()?;
        let id = key.id();
        let Some(entry) = index.get(&id) else { return Ok(Lookup::Miss) };
        let path = self.dir.join(&entry.payload);
        let bytes = match fs::read(&path) {
            Ok(b) => Some(b),
            Err(e) if e.kind() == io::ErrorKind::NotFound => None,
            Err(e) => return Err(with_path(&path, e)),
        };
        let valid = bytes.as_ref().filter(|b| entry.key == *key && sha256_hex(b) == entry.hash);
        if let Some(value) = valid.and_then(|b| serde_json::from_slice(b).ok()) {
            return Ok(Lookup::Hit(value));
        }
        if path.exists() {
            fs::remove_file(&path).map_err(|e| with_path(&path, e))?;
        }
        index.remove(&id);
        self.write_index(&index)?;
        Ok(Lookup::Evicted)
    }

    pub fn put(&self, key: &CacheKey, value: &serde_json::Value) -> Result<PathBuf, String> {
        fs::create_dir_all(&self.dir).map_err(|e| with_path(&self.dir, e))?;
        let id = key.id();
        let name = format!("{}-{}.json", key.kind, &id[..16]);
        let path = self.dir.join(&name);
        let body = serde_json::to_vec(value).expect("payload serializes");
        fs::write(&path, &body).map_err(|e| with_path(&path, e))?;
        let mut index = self.read_index()?;
        index.insert(id, CacheEntry { key: key.clone(), payload: name, hash: sha256_hex(&body) });
        self.write_index(&index)?;
        Ok(path)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn key() -> CacheKey {
        CacheKey {
            kind: "grid".into(),
            spec: "P=t+u;d=2".into(),
            domain: "Zu".into(),
            u: "u".into(),
            n: 24,
            extra: "direct".into(),
        }
    }

    #[test]
    fn roundtrip_and_eviction() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path().to_path_buf());
        assert!(matches!(cache.get(&key()).unwrap(), Lookup::Miss));
        let v = serde_json::json!({"cells": [1, 2, 3]});
        let path = cache.put(&key(), &v).unwrap();
        match cache.get(&key()).unwrap() {
            Lookup::Hit(got) => assert_eq!(got, v),
            other => panic!("{other:?}"),
        }
        fs::write(&path, b"{\"cells\": [1, 2, 4]}").unwrap();
        assert!(matches!(cache.get(&key()).unwrap(), Lookup::Evicted));
        assert!(!path.exists());
        assert!(matches!(cache.get(&key()).unwrap(), Lookup::Miss));
    }
}
