//! On-disk γ cache and the parallel `gamma_range` driver.
//!
//! One JSON document per family hash, `<hash>.json`, holding entries
//! `{n, value, error_bound, bits}` with hex-encoded floats and a SHA-256
//! checksum over the serialized entry list. Writes go through a temporary
//! file and a rename, so a reader never sees a half-written document.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::RwLock;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::lfunction::{taylor_gamma, GammaRecord, LFamily};
use crate::numerics::{from_hex, to_hex, HexFloat, PrecisionContext};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
struct CacheEntry {
    n: u64,
    value: HexFloat,
    error_bound: HexFloat,
    bits: u32,
}

#[derive(Debug, Serialize, Deserialize)]
struct CacheDocument {
    family_hash: String,
    family: String,
    entries: Vec<CacheEntry>,
    checksum: String,
}

fn checksum(entries: &[CacheEntry]) -> String {
    let body = serde_json::to_string(entries).expect("entries serialize");
    hex::encode(Sha256::digest(body.as_bytes()))
}

/// Directory-backed γ cache; many readers, one writer.
#[derive(Debug)]
pub struct GammaCache {
    dir: PathBuf,
    lock: RwLock<()>,
    computed: AtomicU64,
    corrupt: AtomicU64,
}

type EntryMap = BTreeMap<(u64, u32), CacheEntry>;

impl GammaCache {
    pub fn open(dir: impl AsRef<Path>) -> Result<Self> {
        fs::create_dir_all(dir.as_ref())?;
        Ok(GammaCache {
            dir: dir.as_ref().to_path_buf(),
            lock: RwLock::new(()),
            computed: AtomicU64::new(0),
            corrupt: AtomicU64::new(0),
        })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path_for(&self, family_hash: &str) -> PathBuf {
        self.dir.join(format!("{family_hash}.json"))
    }

    /// γ values computed (not served from disk) through this handle.
    pub fn computed(&self) -> u64 {
        self.computed.load(Ordering::Relaxed)
    }

    /// Documents discarded for a bad checksum or unreadable JSON.
    pub fn corrupt_seen(&self) -> u64 {
        self.corrupt.load(Ordering::Relaxed)
    }

    fn read_doc(&self, family_hash: &str) -> Result<EntryMap> {
        let path = self.path_for(family_hash);
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(EntryMap::new()),
            Err(e) => return Err(e.into()),
        };
        let doc: CacheDocument = serde_json::from_str(&text)
            .map_err(|e| Error::CacheCorrupt(format!("{}: {e}", path.display())))?;
        if doc.family_hash != family_hash || checksum(&doc.entries) != doc.checksum {
            return Err(Error::CacheCorrupt(format!("{}: checksum mismatch", path.display())));
        }
        Ok(doc.entries.into_iter().map(|e| ((e.n, e.bits), e)).collect())
    }

    /// Entries on disk; a corrupt document is reported and treated as empty.
    fn load(&self, family_hash: &str) -> Result<EntryMap> {
        match self.read_doc(family_hash) {
            Err(Error::CacheCorrupt(msg)) => {
                log::warn!("discarding corrupt gamma cache ({msg}); recomputing");
                self.corrupt.fetch_add(1, Ordering::Relaxed);
                Ok(EntryMap::new())
            }
            other => other,
        }
    }

    /// Records for `ns` at exactly `bits`; absent indices are skipped.
    pub fn lookup(&self, family: &LFamily, ns: &[u64], bits: u32) -> Result<Vec<GammaRecord>> {
        let _guard = self.lock.read().map_err(|_| Error::Io("cache lock poisoned".into()))?;
        let map = self.load(family.hash())?;
        ns.iter()
            .filter_map(|&n| map.get(&(n, bits)))
            .map(|e| {
                Ok(GammaRecord {
                    n: e.n,
                    value: from_hex(&e.value)?,
                    error_bound: from_hex(&e.error_bound)?,
                    family_hash: family.hash().to_string(),
                    working_bits: e.bits,
                })
            })
            .collect()
    }

    pub fn store(&self, family: &LFamily, records: &[GammaRecord]) -> Result<()> {
        if records.is_empty() {
            return Ok(());
        }
        let _guard = self.lock.write().map_err(|_| Error::Io("cache lock poisoned".into()))?;
        // a corrupt document was already reported by the lookup; overwrite it
        let mut map = match self.read_doc(family.hash()) {
            Err(Error::CacheCorrupt(_)) => EntryMap::new(),
            other => other?,
        };
        for r in records {
            let e = CacheEntry {
                n: r.n,
                value: to_hex(&r.value),
                error_bound: to_hex(&r.error_bound),
                bits: r.working_bits,
            };
            map.insert((r.n, r.working_bits), e);
        }
        let entries: Vec<CacheEntry> = map.into_values().collect();
        let doc = CacheDocument {
            family_hash: family.hash().to_string(),
            family: family.name.clone(),
            checksum: checksum(&entries),
            entries,
        };
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir)?;
        serde_json::to_writer(&mut tmp, &doc).map_err(|e| Error::Io(e.to_string()))?;
        tmp.flush()?;
        tmp.persist(self.path_for(family.hash())).map_err(|e| Error::Io(e.to_string()))?;
        Ok(())
    }
}

/// `γ(n)` for `n_lo..=n_hi`, ascending. Cached records are reused only at
/// the same working precision; the rest are computed on the current rayon
/// pool and written back.
pub fn gamma_range(
    family: &LFamily,
    n_lo: u64,
    n_hi: u64,
    ctx: &PrecisionContext,
    cache: Option<&GammaCache>,
) -> Result<Vec<GammaRecord>> {
    if n_lo > n_hi {
        return Err(Error::InvalidParams(format!("empty range {n_lo}..{n_hi}")));
    }
    let ns: Vec<u64> = (n_lo..=n_hi).collect();
    let mut have = match cache {
        Some(c) => c.lookup(family, &ns, ctx.working_bits)?,
        None => Vec::new(),
    };
    let missing: Vec<u64> = ns.iter().copied().filter(|n| !have.iter().any(|r| r.n == *n)).collect();
    let fresh = missing
        .par_iter()
        .map(|&n| taylor_gamma(family, n, ctx))
        .collect::<Result<Vec<_>>>()?;
    if let Some(c) = cache {
        c.computed.fetch_add(fresh.len() as u64, Ordering::Relaxed);
        c.store(family, &fresh)?;
    }
    have.extend(fresh);
    have.sort_by_key(|r| r.n);
    Ok(have)
}

/// [`gamma_range`] on a dedicated pool of `workers` threads.
pub fn gamma_range_with_workers(
    family: &LFamily,
    n_lo: u64,
    n_hi: u64,
    ctx: &PrecisionContext,
    cache: Option<&GammaCache>,
    workers: usize,
) -> Result<Vec<GammaRecord>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::InvalidParams(e.to_string()))?;
    pool.install(|| gamma_range(family, n_lo, n_hi, ctx, cache))
}
