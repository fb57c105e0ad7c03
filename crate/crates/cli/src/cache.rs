//! One-file-per-entry JSON cache with FNV-1a checksums.
//!
//! An entry is `{"checksum": "<16 hex digits>", "key": ..., "payload": ...}`
//! where the payload is the expansion JSON as a string, so the checksum covers
//! exact bytes. Writers take `<entry>.lock` and publish via rename.

use std::fs::{self, OpenOptions};
use std::hash::Hasher;
use std::io::{ErrorKind, Write};
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};
use std::thread;
use std::time::Duration;

use fnv::FnvHasher;
use serde_json::{json, Value};

use crate::CliError;

pub const ENV_VAR: &str = "MAASS_CACHE_DIR";
pub const DEFAULT_DIR: &str = ".maass-cache";

const LOCK_POLL: Duration = Duration::from_millis(10);
const LOCK_ATTEMPTS: u32 = 3000;

static TMP_COUNTER: AtomicU64 = AtomicU64::new(0);

pub fn checksum(payload: &[u8]) -> u64 {
    let mut h = FnvHasher::default();
    h.write(payload);
    h.finish()
}

/// Checks a stored entry and returns its payload if intact.
pub fn decode_entry(text: &str, key: &str) -> Option<String> {
    let v: Value = serde_json::from_str(text).ok()?;
    let obj = v.as_object()?;
    if obj.get("key")?.as_str()? != key {
        return None;
    }
    let payload = obj.get("payload")?.as_str()?;
    let sum = u64::from_str_radix(obj.get("checksum")?.as_str()?, 16).ok()?;
    (sum == checksum(payload.as_bytes())).then(|| payload.to_string())
}

pub fn encode_entry(key: &str, payload: &str) -> String {
    json!({"checksum": format!("{:016x}", checksum(payload.as_bytes())), "key": key, "payload": payload}).to_string()
}

#[derive(Clone, Debug)]
pub struct Cache {
    dir: Option<PathBuf>,
}

struct LockGuard(PathBuf);

impl Drop for LockGuard {
    fn drop(&mut self) {
        let _ = fs::remove_file(&self.0);
    }
}

impl Cache {
    pub fn disabled() -> Self {
        Cache { dir: None }
    }

    pub fn at(dir: impl Into<PathBuf>) -> Self {
        Cache { dir: Some(dir.into()) }
    }

    /// `--cache-dir`, then `MAASS_CACHE_DIR`, then `./.maass-cache`.
    pub fn resolve(flag: Option<PathBuf>, no_cache: bool) -> Self {
        if no_cache {
            return Cache::disabled();
        }
        let dir = flag
            .or_else(|| std::env::var_os(ENV_VAR).filter(|v| !v.is_empty()).map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from(DEFAULT_DIR));
        Cache::at(dir)
    }

    pub fn dir(&self) -> Option<&Path> {
        self.dir.as_deref()
    }

    pub fn entry_path(&self, key: &str) -> Option<PathBuf> {
        let name: String = key.chars().map(|c| if c == '/' { '_' } else { c }).collect();
        self.dir.as_ref().map(|d| d.join(format!("{name}.json")))
    }

    fn read_valid(&self, path: &Path, key: &str) -> Option<String> {
        let text = match fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) if e.kind() == ErrorKind::NotFound => return None,
            Err(e) => {
                eprintln!("warning: cannot read cache entry {}: {e}", path.display());
                return None;
            }
        };
        let payload = decode_entry(&text, key);
        if payload.is_none() {
            eprintln!("warning: discarding corrupted cache entry {key}");
            let _ = fs::remove_file(path);
        }
        payload
    }

    fn lock(path: &Path) -> std::io::Result<LockGuard> {
        let lock = path.with_extension("json.lock");
        for attempt in 0..=LOCK_ATTEMPTS {
            match OpenOptions::new().write(true).create_new(true).open(&lock) {
                Ok(_) => return Ok(LockGuard(lock)),
                Err(e) if e.kind() == ErrorKind::AlreadyExists => {
                    if attempt == LOCK_ATTEMPTS {
                        // held far longer than any write takes: assume a dead writer
                        eprintln!("warning: removing stale lock {}", lock.display());
                        fs::remove_file(&lock)?;
                    } else {
                        thread::sleep(LOCK_POLL);
                    }
                }
                Err(e) => return Err(e),
            }
        }
        OpenOptions::new().write(true).create_new(true).open(&lock)?;
        Ok(LockGuard(lock))
    }

    fn write(&self, path: &Path, key: &str, payload: &str) -> std::io::Result<()> {
        let dir = path.parent().expect("entry path has a parent");
        fs::create_dir_all(dir)?;
        let _guard = Self::lock(path)?;
        if self.read_valid(path, key).is_some() {
            return Ok(());
        }
        let n = TMP_COUNTER.fetch_add(1, Ordering::Relaxed);
        let tmp = path.with_extension(format!("json.tmp.{}.{n}", std::process::id()));
        {
            let mut f = fs::File::create(&tmp)?;
            f.write_all(encode_entry(key, payload).as_bytes())?;
            f.sync_all()?;
        }
        fs::rename(&tmp, path)
    }

    /// Cached payload for `key`, computing and storing it when absent or corrupt.
    pub fn get_or_compute(&self, key: &str, compute: impl FnOnce() -> Result<String, CliError>) -> Result<String, CliError> {
        let Some(path) = self.entry_path(key) else {
            return compute();
        };
        if let Some(p) = self.read_valid(&path, key) {
            return Ok(p);
        }
        let payload = compute()?;
        if let Err(e) = self.write(&path, key, &payload) {
            eprintln!("warning: cannot write cache entry {key}: {e}");
        }
        Ok(payload)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fnv1a_reference_values() {
        assert_eq!(checksum(b""), 0xcbf29ce484222325);
        assert_eq!(checksum(b"a"), 0xaf63dc4c8601ec8c);
        assert_eq!(checksum(b"foobar"), 0x85944171f73967e8);
    }

    #[test]
    fn entry_roundtrip_and_tamper() {
        let e = encode_entry("siegel2/k=4/B=1", "{\"x\":1}");
        assert_eq!(decode_entry(&e, "siegel2/k=4/B=1").as_deref(), Some("{\"x\":1}"));
        assert_eq!(decode_entry(&e, "siegel2/k=4/B=2"), None);
        let bad = e.replace("{\\\"x\\\":1}", "{\\\"x\\\":2}");
        assert_ne!(bad, e);
        assert_eq!(decode_entry(&bad, "siegel2/k=4/B=1"), None);
        assert_eq!(decode_entry("not json", "k"), None);
    }

    #[test]
    fn recompute_after_corruption() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::at(dir.path());
        let key = "jacobi/k=4/m=1/N=2";
        let first = cache.get_or_compute(key, || Ok("payload".into())).unwrap();
        let hit = cache.get_or_compute(key, || panic!("should be cached")).unwrap();
        assert_eq!(first, hit);
        let path = cache.entry_path(key).unwrap();
        fs::write(&path, "garbage").unwrap();
        let again = cache.get_or_compute(key, || Ok("payload".into())).unwrap();
        assert_eq!(again, "payload");
        assert!(decode_entry(&fs::read_to_string(&path).unwrap(), key).is_some());
    }
}
