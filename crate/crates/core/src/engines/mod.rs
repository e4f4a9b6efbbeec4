//! Correlation providers: given a batch of pairs, return their SU values.
//!
//! Three interchangeable implementations exist. [`SequentialProvider`] counts each
//! pair over the whole dataset and is the reference. [`HorizontalProvider`] splits
//! rows into partitions, counts every requested pair per partition on a worker
//! pool and merges the per-partition tables by exact integer addition.
//! [`VerticalProvider`] works on a transposed, feature-partitioned copy of the
//! data and pairs locally stored columns against one broadcast column.

mod horizontal;
mod pool;
mod sequential;
mod vertical;

use std::collections::{BTreeMap, HashSet};
use std::sync::Arc;
use std::time::Duration;

use serde::{Deserialize, Serialize};

pub use horizontal::{horizontal_compute, horizontal_tables, HorizontalProvider};
pub use sequential::{sequential_compute, SequentialProvider};
pub use vertical::{group_by_endpoint, vertical_compute, vertical_tables, VerticalProvider};

use crate::correlation::FeaturePair;
use crate::dataset::{ColumnAssignment, DiscreteDataset};
use crate::error::{Error, Result};

/// SU values keyed by pair.
pub type SuMap = BTreeMap<FeaturePair, f64>;

/// Batch-in, map-out correlation contract used by the search.
pub trait CorrelationProvider: Send {
    /// Computes SU for every requested pair. The result covers exactly the
    /// distinct requested pairs.
    fn compute(&mut self, pairs: &[FeaturePair]) -> Result<SuMap>;

    fn stats(&self) -> &EngineStats;

    fn layout(&self) -> Layout;

    /// Number of partitions the data is split into (1 for the sequential engine).
    fn partitions(&self) -> usize;
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Layout {
    #[default]
    Sequential,
    Horizontal,
    Vertical,
}

impl std::str::FromStr for Layout {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "sequential" => Ok(Layout::Sequential),
            "horizontal" => Ok(Layout::Horizontal),
            "vertical" => Ok(Layout::Vertical),
            other => Err(format!(
                "unknown engine `{other}` (expected sequential, horizontal or vertical)"
            )),
        }
    }
}

impl std::fmt::Display for Layout {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Layout::Sequential => "sequential",
            Layout::Horizontal => "horizontal",
            Layout::Vertical => "vertical",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EngineConfig {
    pub layout: Layout,
    /// `None` picks the layout default: one partition per worker for horizontal,
    /// one per feature for vertical.
    pub partitions: Option<usize>,
    pub workers: usize,
    pub assignment: ColumnAssignment,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            layout: Layout::Sequential,
            partitions: None,
            workers: 1,
            assignment: ColumnAssignment::Contiguous,
        }
    }
}

impl EngineConfig {
    pub fn new(layout: Layout) -> Self {
        EngineConfig {
            layout,
            ..Self::default()
        }
    }

    pub fn partitions(mut self, partitions: usize) -> Self {
        self.partitions = Some(partitions);
        self
    }

    pub fn workers(mut self, workers: usize) -> Self {
        self.workers = workers;
        self
    }

    /// Partition count this config produces for `ds`, validated.
    pub fn resolve_partitions(&self, ds: &DiscreteDataset) -> Result<usize> {
        if self.workers == 0 {
            return Err(Error::InvalidConfig("workers must be at least 1".into()));
        }
        let (p, max) = match self.layout {
            Layout::Sequential => (self.partitions.unwrap_or(1), 1),
            Layout::Horizontal => (self.partitions.unwrap_or(self.workers), ds.n_rows()),
            Layout::Vertical => (self.partitions.unwrap_or(ds.n_features()), ds.n_features()),
        };
        if p == 0 || p > max {
            return Err(Error::InvalidConfig(format!(
                "{} engine needs 1..={max} partitions, got {p}",
                self.layout
            )));
        }
        Ok(p)
    }
}

/// Counters an engine keeps across `compute` rounds.
#[derive(Clone, Debug, Default, Serialize)]
pub struct EngineStats {
    pub rounds: usize,
    /// Distinct canonical pairs ever requested.
    pub pairs_computed: usize,
    /// Wall time of each round in milliseconds.
    pub round_ms: Vec<f64>,
    /// Row visits performed while counting.
    pub rows_scanned: u64,
    /// Partition tasks executed.
    pub partition_tasks: u64,
    #[serde(skip)]
    seen: HashSet<FeaturePair>,
}

impl EngineStats {
    pub(crate) fn record_round(&mut self, pairs: &[FeaturePair], elapsed: Duration) {
        self.rounds += 1;
        self.seen.extend(pairs.iter().copied());
        self.pairs_computed = self.seen.len();
        self.round_ms.push(elapsed.as_secs_f64() * 1e3);
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("stats serialize")
    }
}

/// Deduplicates in first-seen order and checks every index against the dataset.
pub(crate) fn distinct_pairs(pairs: &[FeaturePair], width: usize) -> Result<Vec<FeaturePair>> {
    let mut seen = HashSet::new();
    let mut out = Vec::with_capacity(pairs.len());
    for &p in pairs {
        if p.hi() >= width {
            return Err(Error::IndexOutOfRange {
                index: p.hi(),
                columns: width,
            });
        }
        if seen.insert(p) {
            out.push(p);
        }
    }
    Ok(out)
}

/// Binds a dataset to an engine. Partitioning (or the columnar transform) happens
/// here, once.
pub fn make_provider(
    ds: Arc<DiscreteDataset>,
    cfg: &EngineConfig,
) -> Result<Box<dyn CorrelationProvider>> {
    let partitions = cfg.resolve_partitions(&ds)?;
    Ok(match cfg.layout {
        Layout::Sequential => Box::new(SequentialProvider::new(ds)),
        Layout::Horizontal => Box::new(HorizontalProvider::new(ds, partitions, cfg.workers)?),
        Layout::Vertical => Box::new(VerticalProvider::new(
            &ds,
            partitions,
            cfg.workers,
            cfg.assignment,
        )?),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{generate_synthetic, SyntheticConfig};

    fn ds() -> Arc<DiscreteDataset> {
        Arc::new(generate_synthetic(&SyntheticConfig::new(40, 6, 1).relevant(2, 1)).unwrap())
    }

    #[test]
    fn default_partitions_follow_layout() {
        let ds = ds();
        let cfg = EngineConfig::new(Layout::Vertical).workers(3);
        assert_eq!(cfg.resolve_partitions(&ds).unwrap(), 6);
        let cfg = EngineConfig::new(Layout::Horizontal).workers(3);
        assert_eq!(cfg.resolve_partitions(&ds).unwrap(), 3);
        assert_eq!(make_provider(ds.clone(), &cfg).unwrap().partitions(), 3);
        let p = make_provider(ds, &EngineConfig::new(Layout::Vertical)).unwrap();
        assert_eq!((p.layout(), p.partitions()), (Layout::Vertical, 6));
    }

    #[test]
    fn invalid_configs_are_rejected() {
        let ds = ds();
        for cfg in [
            EngineConfig::new(Layout::Vertical).partitions(7),
            EngineConfig::new(Layout::Horizontal).partitions(41),
            EngineConfig::new(Layout::Horizontal).partitions(0),
            EngineConfig::new(Layout::Sequential).workers(0),
            EngineConfig::new(Layout::Sequential).partitions(2),
        ] {
            assert!(
                matches!(
                    make_provider(ds.clone(), &cfg),
                    Err(Error::InvalidConfig(_))
                ),
                "{cfg:?}"
            );
        }
    }

    #[test]
    fn sequential_config_wires_sequential_engine() {
        let ds = ds();
        let mut p = make_provider(ds.clone(), &EngineConfig::default()).unwrap();
        assert_eq!(p.layout(), Layout::Sequential);
        let pairs = [FeaturePair::new(0, 6).unwrap()];
        assert_eq!(
            p.compute(&pairs).unwrap(),
            sequential_compute(&ds, &pairs).unwrap()
        );
    }

    #[test]
    fn stats_count_distinct_pairs() {
        let ds = ds();
        let mut p = make_provider(ds, &EngineConfig::new(Layout::Horizontal).workers(2)).unwrap();
        let a = FeaturePair::new(0, 6).unwrap();
        let b = FeaturePair::new(1, 6).unwrap();
        p.compute(&[a, b, a]).unwrap();
        p.compute(&[b]).unwrap();
        assert_eq!(p.stats().rounds, 2);
        assert_eq!(p.stats().pairs_computed, 2);
        assert_eq!(p.stats().round_ms.len(), 2);
        assert!(p.stats().to_json().contains("\"pairs_computed\": 2"));
    }

    #[test]
    fn layout_names_round_trip() {
        for l in [Layout::Sequential, Layout::Horizontal, Layout::Vertical] {
            assert_eq!(l.to_string().parse::<Layout>().unwrap(), l);
        }
        assert!("diagonal".parse::<Layout>().is_err());
    }
}
