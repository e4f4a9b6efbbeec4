use std::sync::Arc;
use std::time::Instant;

use super::pool::run_tasks;
use super::{distinct_pairs, CorrelationProvider, EngineStats, Layout, SuMap};
use crate::correlation::table::local_ctables_aligned;
use crate::correlation::{symmetrical_uncertainty, CTables, ContingencyTable, FeaturePair};
use crate::dataset::{partition_rows, DiscreteDataset, RowPartition};
use crate::error::{Error, Result};

fn check_cover(ds: &DiscreteDataset, partitions: &[RowPartition]) -> Result<()> {
    let mut next = 0;
    for p in partitions {
        if p.rows.start != next {
            return Err(Error::InvalidConfig(format!(
                "row partition {} starts at {} instead of {next}",
                p.id, p.rows.start
            )));
        }
        next = p.rows.end;
    }
    if next != ds.n_rows() || partitions.is_empty() {
        return Err(Error::InvalidConfig(format!(
            "row partitions cover {next} of {} rows",
            ds.n_rows()
        )));
    }
    Ok(())
}

/// Per-partition counting followed by an id-order reduction. Returns merged tables
/// aligned with `pairs`.
fn merged_tables(
    ds: &DiscreteDataset,
    partitions: &[RowPartition],
    pairs: &[FeaturePair],
    workers: usize,
) -> Result<Vec<ContingencyTable>> {
    let local = run_tasks(partitions, workers, |part| {
        local_ctables_aligned(ds, pairs, part)
    });
    let mut parts = local.into_iter();
    let mut merged = parts.next().unwrap_or_default();
    for tables in parts {
        for (acc, t) in merged.iter_mut().zip(&tables) {
            acc.add_assign(t)?;
        }
    }
    Ok(merged)
}

/// Merged contingency tables for `pairs` over row partitions.
pub fn horizontal_tables(
    ds: &DiscreteDataset,
    partitions: &[RowPartition],
    pairs: &[FeaturePair],
    workers: usize,
) -> Result<CTables> {
    check_cover(ds, partitions)?;
    let pairs = distinct_pairs(pairs, ds.class_index() + 1)?;
    let tables = merged_tables(ds, partitions, &pairs, workers)?;
    Ok(pairs.into_iter().zip(tables).collect())
}

/// SU of `pairs` computed from row partitions: local counting on the pool, exact
/// merge, then SU per merged table (also on the pool).
pub fn horizontal_compute(
    ds: &DiscreteDataset,
    partitions: &[RowPartition],
    pairs: &[FeaturePair],
    workers: usize,
) -> Result<SuMap> {
    check_cover(ds, partitions)?;
    let pairs = distinct_pairs(pairs, ds.class_index() + 1)?;
    let tables = merged_tables(ds, partitions, &pairs, workers)?;
    let su = run_tasks(&tables, workers, symmetrical_uncertainty);
    pairs
        .into_iter()
        .zip(su)
        .map(|(p, su)| Ok((p, su?)))
        .collect()
}

pub struct HorizontalProvider {
    ds: Arc<DiscreteDataset>,
    partitions: Vec<RowPartition>,
    workers: usize,
    stats: EngineStats,
}

impl HorizontalProvider {
    pub fn new(ds: Arc<DiscreteDataset>, partitions: usize, workers: usize) -> Result<Self> {
        let partitions = partition_rows(&ds, partitions)?;
        Ok(HorizontalProvider {
            ds,
            partitions,
            workers: workers.max(1),
            stats: EngineStats::default(),
        })
    }

    pub fn row_partitions(&self) -> &[RowPartition] {
        &self.partitions
    }
}

impl CorrelationProvider for HorizontalProvider {
    fn compute(&mut self, pairs: &[FeaturePair]) -> Result<SuMap> {
        let start = Instant::now();
        let out = horizontal_compute(&self.ds, &self.partitions, pairs, self.workers)?;
        if !out.is_empty() {
            self.stats.rows_scanned += self.ds.n_rows() as u64;
            self.stats.partition_tasks += self.partitions.len() as u64;
        }
        let pairs: Vec<FeaturePair> = out.keys().copied().collect();
        self.stats.record_round(&pairs, start.elapsed());
        Ok(out)
    }

    fn stats(&self) -> &EngineStats {
        &self.stats
    }

    fn layout(&self) -> Layout {
        Layout::Horizontal
    }

    fn partitions(&self) -> usize {
        self.partitions.len()
    }
}
