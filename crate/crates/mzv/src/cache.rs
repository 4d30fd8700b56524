//! Checksummed disk cache for expensive artifacts (H/G polynomials,
//! solved shuffle sets).
//!
//! Layout: one file per entry, named by the entry key, all inside a single
//! directory. Each file holds exactly four lines:
//!
//! ```text
//! mzvcache/1          file format version
//! <key>               must match the file's own key
//! <payload>           one line, producer-defined text
//! sha256:<hex>        digest of the three lines above
//! ```
//!
//! Any mismatch (version, key, checksum, line count) makes [`DiskCache::load`]
//! report a miss; callers recompute and overwrite. The cache never invents
//! data and never errors on corruption: correctness lives with the producers,
//! which re-verify mathematical content after parsing anyway.
//!
//! Writes go through a temp file in the same directory followed by a rename,
//! so concurrent readers see either the old entry or the new one, never a
//! torn file. Concurrent writers of the same key are idempotent by design
//! (both write the same verified content).

use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use sha2::{Digest, Sha256};

use crate::error::Result;
use crate::ffield::FieldCtx;

/// File format tag; bump on any layout change.
const CACHE_VERSION: &str = "mzvcache/1";

/// Environment variable naming the default cache directory.
pub const CACHE_DIR_ENV: &str = "MZV_CACHE_DIR";

/// A directory of checksummed single-line entries.
#[derive(Debug, Clone)]
pub struct DiskCache {
    dir: PathBuf,
}

impl DiskCache {
    /// Opens (creating if needed) a cache rooted at `dir`.
    pub fn new(dir: impl Into<PathBuf>) -> Result<DiskCache> {
        let dir = dir.into();
        fs::create_dir_all(&dir)?;
        Ok(DiskCache { dir })
    }

    /// Opens the cache named by `MZV_CACHE_DIR`, if set and usable.
    pub fn from_env() -> Option<DiskCache> {
        let dir = std::env::var_os(CACHE_DIR_ENV)?;
        DiskCache::new(PathBuf::from(dir)).ok()
    }

    /// Explicit directory if given, else the environment default, else none.
    pub fn resolve(explicit: Option<&Path>) -> Option<DiskCache> {
        match explicit {
            Some(dir) => DiskCache::new(dir).ok(),
            None => DiskCache::from_env(),
        }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    /// Returns the payload for `key`, or `None` on absence or any corruption.
    pub fn load(&self, key: &str) -> Option<String> {
        let text = fs::read_to_string(self.path_of(key)).ok()?;
        let mut lines = text.lines();
        let version = lines.next()?;
        let stored_key = lines.next()?;
        let payload = lines.next()?;
        let digest_line = lines.next()?;
        if lines.next().is_some() {
            return None;
        }
        if version != CACHE_VERSION || stored_key != key {
            return None;
        }
        let expected = format!("sha256:{}", hex_sha256(version, stored_key, payload));
        if digest_line != expected {
            return None;
        }
        Some(payload.to_string())
    }

    /// Writes `payload` (which must be a single line) under `key`.
    pub fn store(&self, key: &str, payload: &str) -> Result<()> {
        debug_assert!(!payload.contains('\n'));
        let digest = hex_sha256(CACHE_VERSION, key, payload);
        let body = format!("{CACHE_VERSION}\n{key}\n{payload}\nsha256:{digest}\n");
        let nanos = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.subsec_nanos())
            .unwrap_or(0);
        let tmp = self
            .dir
            .join(format!(".tmp-{}-{}-{key}", std::process::id(), nanos));
        fs::write(&tmp, body)?;
        fs::rename(&tmp, self.path_of(key))?;
        Ok(())
    }

    /// Removes one entry; reports whether it existed.
    pub fn remove(&self, key: &str) -> Result<bool> {
        match fs::remove_file(self.path_of(key)) {
            Ok(()) => Ok(true),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(false),
            Err(e) => Err(e.into()),
        }
    }

    /// Deletes every entry; returns how many were removed.
    pub fn clear(&self) -> Result<usize> {
        let mut n = 0;
        for key in self.keys()? {
            if self.remove(&key)? {
                n += 1;
            }
        }
        Ok(n)
    }

    /// Sorted list of entry keys currently present.
    pub fn keys(&self) -> Result<Vec<String>> {
        let mut keys = Vec::new();
        for entry in fs::read_dir(&self.dir)? {
            let name = entry?.file_name();
            if let Some(name) = name.to_str() {
                if name.ends_with(".mzv") {
                    keys.push(name.trim_end_matches(".mzv").to_string());
                }
            }
        }
        keys.sort();
        Ok(keys)
    }

    fn path_of(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.mzv"))
    }
}

/// Key for a cached H_k or G_k: field shape, modulus codes, kind, index.
pub fn hg_key(ctx: &FieldCtx, kind: char, k: u64) -> String {
    debug_assert!(kind == 'h' || kind == 'g');
    format!("{kind}_{}_k{k}", ctx_key(ctx))
}

/// Key for a cached solved shuffle set.
pub fn shuffle_key(ctx: &FieldCtx, a: u64, b: u64) -> String {
    format!("s_{}_a{a}_b{b}", ctx_key(ctx))
}

fn ctx_key(ctx: &FieldCtx) -> String {
    let modulus = ctx
        .modulus()
        .iter()
        .map(|c| c.to_string())
        .collect::<Vec<_>>()
        .join("-");
    format!("p{}_n{}_m{}", ctx.p(), ctx.n(), modulus)
}

fn hex_sha256(version: &str, key: &str, payload: &str) -> String {
    let mut hasher = Sha256::new();
    hasher.update(version.as_bytes());
    hasher.update(b"\n");
    hasher.update(key.as_bytes());
    hasher.update(b"\n");
    hasher.update(payload.as_bytes());
    hasher.update(b"\n");
    hasher
        .finalize()
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_listing() {
        let dir = tempfile::tempdir().unwrap();
        let cache = DiskCache::new(dir.path()).unwrap();
        assert!(cache.load("h_p2_n1_m0-1_k3").is_none());
        cache.store("h_p2_n1_m0-1_k3", "payload-one").unwrap();
        cache.store("g_p2_n1_m0-1_k2", "payload-two").unwrap();
        assert_eq!(cache.load("h_p2_n1_m0-1_k3").as_deref(), Some("payload-one"));
        assert_eq!(
            cache.keys().unwrap(),
            vec!["g_p2_n1_m0-1_k2", "h_p2_n1_m0-1_k3"]
        );
        assert!(cache.remove("g_p2_n1_m0-1_k2").unwrap());
        assert!(!cache.remove("g_p2_n1_m0-1_k2").unwrap());
        assert_eq!(cache.clear().unwrap(), 1);
        assert!(cache.load("h_p2_n1_m0-1_k3").is_none());
    }

    #[test]
    fn corruption_is_a_miss_not_an_error() {
        let dir = tempfile::tempdir().unwrap();
        let cache = DiskCache::new(dir.path()).unwrap();
        cache.store("h_p3_n1_m0-1_k5", "t^2+1").unwrap();
        let path = dir.path().join("h_p3_n1_m0-1_k5.mzv");

        // Flip a payload byte: checksum mismatch.
        let good = fs::read_to_string(&path).unwrap();
        fs::write(&path, good.replace("t^2+1", "t^2+2")).unwrap();
        assert!(cache.load("h_p3_n1_m0-1_k5").is_none());

        // Wrong version line.
        fs::write(&path, good.replace(CACHE_VERSION, "mzvcache/0")).unwrap();
        assert!(cache.load("h_p3_n1_m0-1_k5").is_none());

        // Entry stored under one key, read under another.
        fs::write(&path, &good).unwrap();
        assert_eq!(cache.load("h_p3_n1_m0-1_k5").as_deref(), Some("t^2+1"));
        fs::rename(&path, dir.path().join("h_p3_n1_m0-1_k7.mzv")).unwrap();
        assert!(cache.load("h_p3_n1_m0-1_k7").is_none());
    }

    #[test]
    fn keys_depend_on_field_shape() {
        let f4 = FieldCtx::new(2, 2).unwrap();
        let f2 = FieldCtx::new(2, 1).unwrap();
        assert_ne!(hg_key(&f4, 'h', 3), hg_key(&f2, 'h', 3));
        assert_ne!(hg_key(&f2, 'h', 3), hg_key(&f2, 'g', 3));
        assert_ne!(shuffle_key(&f2, 2, 30), shuffle_key(&f2, 30, 2));
    }
}
