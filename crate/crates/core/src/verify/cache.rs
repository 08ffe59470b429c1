use std::collections::hash_map::DefaultHasher;
use std::fs;
use std::hash::{Hash, Hasher};
use std::path::Path;
use std::sync::atomic::{AtomicU64, Ordering};

use dashmap::DashMap;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::octagonal::{represents, OctSum, OctWitness};
use crate::ENGINE_VERSION;

/// One cache hit in this many is recomputed and compared.
const AUDIT_ONE_IN: u64 = 100;

type Key = (Vec<i64>, i64);

/// Memoized `represents` results keyed by canonical coefficients and target.
#[derive(Debug, Default)]
pub struct ResultCache {
    map: DashMap<Key, Option<Vec<i64>>>,
    hits: AtomicU64,
    misses: AtomicU64,
    audited: AtomicU64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CacheStats {
    pub entries: usize,
    pub hits: u64,
    pub misses: u64,
    pub audited: u64,
}

#[derive(Serialize, Deserialize)]
struct CacheFile {
    engine_version: String,
    entries: Vec<CacheEntry>,
}

#[derive(Serialize, Deserialize)]
struct CacheEntry {
    coeffs: Vec<i64>,
    n: i64,
    witness: Option<Vec<i64>>,
}

fn sampled(key: &Key) -> bool {
    let mut h = DefaultHasher::new();
    key.hash(&mut h);
    h.finish().is_multiple_of(AUDIT_ONE_IN)
}

impl ResultCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn represents(&self, sum: &OctSum, n: i64) -> Result<Option<OctWitness>> {
        let key = (sum.coeffs().to_vec(), n);
        let cached = self.map.get(&key).map(|e| e.value().clone());
        if let Some(v) = cached {
            self.hits.fetch_add(1, Ordering::Relaxed);
            if sampled(&key) {
                self.audited.fetch_add(1, Ordering::Relaxed);
                let fresh = represents(sum, n)?.map(|w| w.xs);
                if fresh != v {
                    return Err(Error::CacheAudit(format!("{sum} at {n}")));
                }
            }
            return Ok(v.map(|xs| OctWitness { xs }));
        }
        self.misses.fetch_add(1, Ordering::Relaxed);
        let fresh = represents(sum, n)?;
        // Concurrent writers of one key compute the same deterministic value.
        self.map.insert(key, fresh.as_ref().map(|w| w.xs.clone()));
        Ok(fresh)
    }

    pub fn stats(&self) -> CacheStats {
        CacheStats {
            entries: self.map.len(),
            hits: self.hits.load(Ordering::Relaxed),
            misses: self.misses.load(Ordering::Relaxed),
            audited: self.audited.load(Ordering::Relaxed),
        }
    }

    /// Loads a persisted cache; a file written by another engine version or
    /// a missing file yields an empty cache.
    pub fn load(path: &Path) -> Result<Self> {
        let cache = Self::new();
        let text = match fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(cache),
            Err(e) => return Err(e.into()),
        };
        let file: CacheFile = serde_json::from_str(&text)?;
        if file.engine_version != ENGINE_VERSION {
            return Ok(cache);
        }
        for e in file.entries {
            cache.map.insert((e.coeffs, e.n), e.witness);
        }
        Ok(cache)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let mut entries: Vec<CacheEntry> = self
            .map
            .iter()
            .map(|e| CacheEntry {
                coeffs: e.key().0.clone(),
                n: e.key().1,
                witness: e.value().clone(),
            })
            .collect();
        entries.sort_by(|x, y| (&x.coeffs, x.n).cmp(&(&y.coeffs, y.n)));
        let file = CacheFile {
            engine_version: ENGINE_VERSION.to_string(),
            entries,
        };
        fs::write(path, serde_json::to_string(&file)?)?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hits_match_fresh_computation() {
        let cache = ResultCache::new();
        let s = OctSum::new(vec![1, 1, 2, 14]).unwrap();
        for n in 0..300 {
            let a = cache.represents(&s, n).unwrap();
            let b = cache.represents(&s, n).unwrap();
            assert_eq!(a, b);
            assert_eq!(a, represents(&s, n).unwrap());
        }
        let st = cache.stats();
        assert_eq!((st.entries, st.hits, st.misses), (300, 300, 300));
        assert!(st.audited > 0);
    }

    #[test]
    fn poisoned_entry_is_caught_by_audit() {
        let cache = ResultCache::new();
        let s = OctSum::new(vec![1, 2]).unwrap();
        let n = (0..10_000)
            .find(|&n| sampled(&(s.coeffs().to_vec(), n)))
            .unwrap();
        cache
            .map
            .insert((s.coeffs().to_vec(), n), Some(vec![99, 99]));
        assert!(matches!(cache.represents(&s, n), Err(Error::CacheAudit(_))));
    }
}
