//! Cached, parallel trace inputs for the verification pipeline.
//!
//! Per-prime counts are pure and independent, so they are precomputed by a
//! small worker pool over the prime list and stored in ordered maps; the
//! core verification then runs single-threaded over exact integers, which
//! makes reports byte-identical for any worker count. The count cache is
//! consulted first and populated afterwards, so warm runs recompute
//! nothing.

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use anyhow::Result;

use verrill_core::ffield::PrimeModulus;
use verrill_core::geometry;
use verrill_core::lefschetz::TraceInputs;
use verrill_core::qseries::{self, EtaQuotientSpec, IntSeries};

use crate::cache::CountCache;

/// Cache model names for the derived per-prime quantities.
pub const RESOLVED_MODEL: &str = "fiberprod_resolved";
pub const CENSUS_MODEL: &str = "node_census";

/// Fully materialized inputs for a prime range.
pub struct PrecomputedInputs {
    resolved: BTreeMap<u64, u64>,
    census: BTreeMap<u64, u64>,
    ap: IntSeries,
}

impl PrecomputedInputs {
    /// Computes (or loads) the resolved self-product count and node census
    /// for every good prime `<= pmax`, distributing primes over `workers`
    /// threads, and expands the eta oracle once.
    pub fn build(pmax: u64, workers: usize, cache: &CountCache) -> Result<PrecomputedInputs> {
        let primes: Vec<u64> = qseries::sieve_primes(pmax as usize)
            .into_iter()
            .map(|p| p as u64)
            .filter(|&p| p >= 5)
            .collect();

        let results: Mutex<Vec<(u64, u64, u64)>> = Mutex::new(Vec::with_capacity(primes.len()));
        let next: AtomicUsize = AtomicUsize::new(0);
        let workers = workers.max(1).min(primes.len().max(1));

        std::thread::scope(|scope| {
            for _ in 0..workers {
                scope.spawn(|| loop {
                    let i = next.fetch_add(1, Ordering::Relaxed);
                    let Some(&p) = primes.get(i) else { break };
                    let resolved = cache.get(RESOLVED_MODEL, p).unwrap_or_else(|| {
                        let m = PrimeModulus::new(p).expect("good prime");
                        geometry::resolved_self_product_count(m)
                    });
                    let census = cache.get(CENSUS_MODEL, p).unwrap_or_else(|| {
                        let m = PrimeModulus::new(p).expect("good prime");
                        geometry::node_census(m).r
                    });
                    results.lock().unwrap().push((p, resolved, census));
                });
            }
        });

        let mut resolved = BTreeMap::new();
        let mut census = BTreeMap::new();
        for (p, n2, r) in results.into_inner().unwrap() {
            // Populate the cache serially; identical re-insertions are
            // no-ops, conflicts are hard errors.
            cache.put(RESOLVED_MODEL, p, n2)?;
            cache.put(CENSUS_MODEL, p, r)?;
            resolved.insert(p, n2);
            census.insert(p, r);
        }

        let ap = qseries::eta_quotient_expansion(
            &EtaQuotientSpec::newform_gamma0_6(),
            pmax.max(13) as usize,
        )
        .expect("the target eta quotient expands");

        Ok(PrecomputedInputs {
            resolved,
            census,
            ap,
        })
    }
}

impl TraceInputs for PrecomputedInputs {
    fn resolved_count(&self, p: u64) -> u64 {
        self.resolved[&p]
    }

    fn census_r(&self, p: u64) -> u64 {
        self.census[&p]
    }

    fn ap(&self, p: u64) -> i64 {
        self.ap
            .coeff_i64(p as usize)
            .expect("oracle expanded far enough")
    }
}
