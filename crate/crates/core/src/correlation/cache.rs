use std::collections::{BTreeMap, HashMap, HashSet};
use std::io::Write;
use std::sync::RwLock;

use super::FeaturePair;
use crate::error::{Error, Result};

/// Symmetric store of SU values, filled lazily as the search asks for pairs.
///
/// A batch insert happens under a single write lock, so concurrent readers see
/// either none or all of a batch. Values are write-once.
#[derive(Debug, Default)]
pub struct CorrelationCache {
    values: RwLock<HashMap<FeaturePair, f64>>,
}

impl CorrelationCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, a: usize, b: usize) -> Option<f64> {
        let pair = FeaturePair::new(a, b).ok()?;
        self.get_pair(pair)
    }

    pub fn get_pair(&self, pair: FeaturePair) -> Option<f64> {
        self.values.read().expect("cache lock").get(&pair).copied()
    }

    /// Like [`get`](Self::get) but treats absence as a programming error.
    pub fn require(&self, a: usize, b: usize) -> Result<f64> {
        let pair = FeaturePair::new(a, b)?;
        self.get_pair(pair).ok_or(Error::MissingCorrelation(pair))
    }

    pub fn contains(&self, pair: FeaturePair) -> bool {
        self.values.read().expect("cache lock").contains_key(&pair)
    }

    /// The requested pairs that are not cached yet, deduplicated, in request order.
    pub fn get_missing(&self, pairs: &[FeaturePair]) -> Vec<FeaturePair> {
        let values = self.values.read().expect("cache lock");
        let mut seen = HashSet::new();
        pairs
            .iter()
            .copied()
            .filter(|p| !values.contains_key(p) && seen.insert(*p))
            .collect()
    }

    /// Stores a batch of computed values. Pairs already present keep their value.
    pub fn insert_batch<I>(&self, batch: I)
    where
        I: IntoIterator<Item = (FeaturePair, f64)>,
    {
        let mut values = self.values.write().expect("cache lock");
        for (pair, su) in batch {
            let stored = *values.entry(pair).or_insert(su);
            debug_assert_eq!(
                stored.to_bits(),
                su.to_bits(),
                "cached value changed for {pair}"
            );
        }
    }

    /// Number of distinct pairs computed so far.
    pub fn len(&self) -> usize {
        self.values.read().expect("cache lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// All entries sorted by pair.
    pub fn snapshot(&self) -> BTreeMap<FeaturePair, f64> {
        self.values
            .read()
            .expect("cache lock")
            .iter()
            .map(|(p, v)| (*p, *v))
            .collect()
    }

    /// Debug dump as `lo,hi,su` lines sorted by pair. Values print in shortest
    /// round-trip form so dumps diff exactly.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "lo,hi,su")?;
        for (pair, su) in self.snapshot() {
            writeln!(out, "{},{},{}", pair.lo(), pair.hi(), su)?;
        }
        Ok(())
    }
}
