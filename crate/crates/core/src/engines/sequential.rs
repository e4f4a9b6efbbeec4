use std::sync::Arc;
use std::time::Instant;

use super::{distinct_pairs, CorrelationProvider, EngineStats, Layout, SuMap};
use crate::correlation::{pair_table, symmetrical_uncertainty, FeaturePair};
use crate::dataset::DiscreteDataset;
use crate::error::Result;

/// Reference computation: one full pass over the rows per pair.
pub fn sequential_compute(ds: &DiscreteDataset, pairs: &[FeaturePair]) -> Result<SuMap> {
    distinct_pairs(pairs, ds.class_index() + 1)?
        .into_iter()
        .map(|p| Ok((p, symmetrical_uncertainty(&pair_table(ds, p)?)?)))
        .collect()
}

pub struct SequentialProvider {
    ds: Arc<DiscreteDataset>,
    stats: EngineStats,
}

impl SequentialProvider {
    pub fn new(ds: Arc<DiscreteDataset>) -> Self {
        SequentialProvider {
            ds,
            stats: EngineStats::default(),
        }
    }
}

impl CorrelationProvider for SequentialProvider {
    fn compute(&mut self, pairs: &[FeaturePair]) -> Result<SuMap> {
        let start = Instant::now();
        let out = sequential_compute(&self.ds, pairs)?;
        let pairs: Vec<FeaturePair> = out.keys().copied().collect();
        self.stats.rows_scanned += (self.ds.n_rows() * pairs.len()) as u64;
        self.stats.partition_tasks += pairs.len() as u64;
        self.stats.record_round(&pairs, start.elapsed());
        Ok(out)
    }

    fn stats(&self) -> &EngineStats {
        &self.stats
    }

    fn layout(&self) -> Layout {
        Layout::Sequential
    }

    fn partitions(&self) -> usize {
        1
    }
}
