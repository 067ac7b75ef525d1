//! Append-only count cache: one CSV line `model,p,count` per record.
//!
//! The file is human-diffable and trivially mergeable. Reload ignores
//! corrupt lines with a warning (never silently trusting them), collapses
//! duplicate records with identical values, and treats a duplicate key
//! with a conflicting value as a hard error, since that can only mean
//! nondeterminism upstream. Writers are serialized behind a mutex and each
//! record is written as one full line, so concurrent use never interleaves
//! partial lines.

use std::collections::BTreeMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::Path;
use std::sync::Mutex;

use anyhow::{bail, Context, Result};

/// Environment variable consulted for the cache location when no `--cache`
/// flag is given; the flag wins.
pub const CACHE_ENV: &str = "VERRILL_CACHE";

#[derive(Debug)]
struct Inner {
    entries: BTreeMap<(String, u64), u64>,
    file: Option<File>,
}

/// Count records keyed by `(model name, p)`.
#[derive(Debug)]
pub struct CountCache {
    inner: Mutex<Inner>,
}

impl CountCache {
    /// An in-memory cache that persists nothing.
    pub fn disabled() -> CountCache {
        CountCache {
            inner: Mutex::new(Inner {
                entries: BTreeMap::new(),
                file: None,
            }),
        }
    }

    /// Opens (or creates) a cache file, loading every valid record.
    pub fn open(path: &Path) -> Result<CountCache> {
        let mut entries = BTreeMap::new();
        if path.exists() {
            let reader = BufReader::new(
                File::open(path).with_context(|| format!("opening cache {}", path.display()))?,
            );
            for (lineno, line) in reader.lines().enumerate() {
                let line = line?;
                if line.trim().is_empty() {
                    continue;
                }
                match parse_line(&line) {
                    Some((model, p, count)) => {
                        if let Some(&existing) = entries.get(&(model.clone(), p)) {
                            if existing != count {
                                bail!(
                                    "cache {}:{}: conflicting count for ({model}, {p}): \
                                     {existing} vs {count}",
                                    path.display(),
                                    lineno + 1
                                );
                            }
                        } else {
                            entries.insert((model, p), count);
                        }
                    }
                    None => {
                        eprintln!(
                            "warning: ignoring corrupt cache line {}:{}: {line:?}",
                            path.display(),
                            lineno + 1
                        );
                    }
                }
            }
        }
        let file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(path)
            .with_context(|| format!("opening cache {} for append", path.display()))?;
        Ok(CountCache {
            inner: Mutex::new(Inner {
                entries,
                file: Some(file),
            }),
        })
    }

    /// Resolves the cache location: explicit flag, then the environment
    /// variable, then no cache.
    pub fn from_flag_or_env(flag: Option<&Path>) -> Result<CountCache> {
        match flag {
            Some(p) => CountCache::open(p),
            None => match std::env::var_os(CACHE_ENV) {
                Some(p) => CountCache::open(Path::new(&p)),
                None => Ok(CountCache::disabled()),
            },
        }
    }

    pub fn get(&self, model: &str, p: u64) -> Option<u64> {
        let inner = self.inner.lock().unwrap();
        inner.entries.get(&(model.to_string(), p)).copied()
    }

    /// Records a count; identical duplicates are no-ops and conflicting
    /// values are hard errors.
    pub fn put(&self, model: &str, p: u64, count: u64) -> Result<()> {
        let mut inner = self.inner.lock().unwrap();
        if let Some(&existing) = inner.entries.get(&(model.to_string(), p)) {
            if existing != count {
                bail!(
                    "cache conflict for ({model}, {p}): stored {existing}, computed {count} \
                     -- upstream nondeterminism"
                );
            }
            return Ok(());
        }
        inner.entries.insert((model.to_string(), p), count);
        if let Some(file) = inner.file.as_mut() {
            // One full line per write keeps concurrent appends intact.
            let line = format!("{model},{p},{count}\n");
            file.write_all(line.as_bytes())?;
            file.flush()?;
        }
        Ok(())
    }

    /// Fetches or computes-and-records a count.
    pub fn get_or_compute(
        &self,
        model: &str,
        p: u64,
        compute: impl FnOnce() -> u64,
    ) -> Result<u64> {
        if let Some(c) = self.get(model, p) {
            return Ok(c);
        }
        let c = compute();
        self.put(model, p, c)?;
        Ok(c)
    }
}

fn parse_line(line: &str) -> Option<(String, u64, u64)> {
    let mut parts = line.split(',');
    let model = parts.next()?.trim();
    let p = parts.next()?.trim().parse().ok()?;
    let count = parts.next()?.trim().parse().ok()?;
    if model.is_empty() || parts.next().is_some() {
        return None;
    }
    Some((model.to_string(), p, count))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::path::PathBuf;

    fn tmp(name: &str) -> PathBuf {
        let mut dir = std::env::temp_dir();
        dir.push(format!("verrill-cache-test-{}-{name}", std::process::id()));
        let _ = std::fs::remove_file(&dir);
        dir
    }

    #[test]
    fn roundtrip_and_dedupe() {
        let path = tmp("roundtrip");
        {
            let cache = CountCache::open(&path).unwrap();
            cache.put("surface", 5, 61).unwrap();
            cache.put("surface", 5, 61).unwrap(); // identical duplicate ok
            assert_eq!(cache.get("surface", 5), Some(61));
        }
        let reloaded = CountCache::open(&path).unwrap();
        assert_eq!(reloaded.get("surface", 5), Some(61));
        // Exactly one line was written.
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(text, "surface,5,61\n");
        std::fs::remove_file(&path).unwrap();
    }

    #[test]
    fn conflicting_value_is_a_hard_error() {
        let path = tmp("conflict");
        let cache = CountCache::open(&path).unwrap();
        cache.put("verrill", 5, 425).unwrap();
        assert!(cache.put("verrill", 5, 426).is_err());
        drop(cache);
        // A conflicting line already in the file also fails the load.
        std::fs::write(&path, "verrill,5,425\nverrill,5,999\n").unwrap();
        assert!(CountCache::open(&path).is_err());
        std::fs::remove_file(&path).unwrap();
    }

    #[test]
    fn corrupt_lines_are_skipped_with_warning() {
        let path = tmp("corrupt");
        std::fs::write(&path, "surface,5,61\nnot a record\nfiberprod,5,715\n").unwrap();
        let cache = CountCache::open(&path).unwrap();
        assert_eq!(cache.get("surface", 5), Some(61));
        assert_eq!(cache.get("fiberprod", 5), Some(715));
        std::fs::remove_file(&path).unwrap();
    }
}
