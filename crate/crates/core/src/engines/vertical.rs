use std::collections::{BTreeMap, HashMap};
use std::time::Instant;

use super::pool::run_tasks;
use super::{distinct_pairs, CorrelationProvider, EngineStats, Layout, SuMap};
use crate::correlation::table::columns_table;
use crate::correlation::{symmetrical_uncertainty, CTables, ContingencyTable, FeaturePair};
use crate::dataset::{
    columnar_transform_with, Code, ColumnAssignment, ColumnPartition, DiscreteDataset,
};
use crate::error::{Error, Result};

/// Work for one column partition: the candidates it stores.
struct LocalWork<'a> {
    partition: &'a ColumnPartition,
    candidates: Vec<usize>,
}

/// Runs `per_table` for every candidate paired with the broadcast column, one task
/// per column partition that holds at least one candidate. The class column is
/// replicated everywhere; a class candidate is served by the first partition.
fn broadcast_round<T, F>(
    partitions: &[ColumnPartition],
    arities: &[usize],
    broadcast: usize,
    candidates: &[usize],
    workers: usize,
    per_table: F,
) -> Result<(Vec<(FeaturePair, T)>, usize)>
where
    T: Send,
    F: Fn(&ContingencyTable) -> Result<T> + Sync,
{
    let class = arities.len() - 1;
    if broadcast > class {
        return Err(Error::IndexOutOfRange {
            index: broadcast,
            columns: arities.len(),
        });
    }
    let first = partitions
        .first()
        .ok_or_else(|| Error::InvalidConfig("no column partitions".into()))?;
    let broadcast_col: &[Code] = if broadcast == class {
        first.class_column()
    } else {
        partitions
            .iter()
            .find_map(|p| p.column(broadcast))
            .ok_or(Error::CandidateNotFound(broadcast))?
    };

    let mut work: Vec<LocalWork> = partitions
        .iter()
        .map(|partition| LocalWork {
            partition,
            candidates: Vec::new(),
        })
        .collect();
    let mut ordered = candidates.to_vec();
    ordered.sort_unstable();
    ordered.dedup();
    for c in ordered {
        if c == broadcast {
            return Err(Error::InvalidPair(c, broadcast));
        }
        let slot = if c == class {
            Some(0)
        } else {
            partitions.iter().position(|p| p.holds(c))
        };
        match slot {
            Some(i) => work[i].candidates.push(c),
            None => return Err(Error::CandidateNotFound(c)),
        }
    }
    work.retain(|w| !w.candidates.is_empty());
    let touched = work.len();

    let results = run_tasks(&work, workers, |w| {
        w.candidates
            .iter()
            .map(|&c| {
                let col = if c == class {
                    w.partition.class_column()
                } else {
                    w.partition.column(c).expect("candidate stored here")
                };
                let pair = FeaturePair::new(c, broadcast)?;
                let table = if c < broadcast {
                    columns_table(col, arities[c], broadcast_col, arities[broadcast])
                } else {
                    columns_table(broadcast_col, arities[broadcast], col, arities[c])
                };
                Ok((pair, per_table(&table)?))
            })
            .collect::<Result<Vec<_>>>()
    });
    let mut out = Vec::with_capacity(candidates.len());
    for r in results {
        out.extend(r?);
    }
    Ok((out, touched))
}

/// Contingency tables of every candidate against the broadcast column.
pub fn vertical_tables(
    partitions: &[ColumnPartition],
    arities: &[usize],
    broadcast: usize,
    candidates: &[usize],
    workers: usize,
) -> Result<CTables> {
    let (tables, _) = broadcast_round(partitions, arities, broadcast, candidates, workers, |t| {
        Ok(t.clone())
    })?;
    Ok(tables.into_iter().collect())
}

/// SU of every candidate against the broadcast column, computed inside the
/// partition that stores the candidate.
pub fn vertical_compute(
    partitions: &[ColumnPartition],
    arities: &[usize],
    broadcast: usize,
    candidates: &[usize],
    workers: usize,
) -> Result<SuMap> {
    let (su, _) = broadcast_round(
        partitions,
        arities,
        broadcast,
        candidates,
        workers,
        symmetrical_uncertainty,
    )?;
    Ok(su.into_iter().collect())
}

/// Splits a batch of pairs into broadcast groups. Each step picks the endpoint
/// shared by the most remaining pairs (ties go to the higher index, so the class
/// column wins), and emits `(broadcast, candidates)`.
pub fn group_by_endpoint(pairs: &[FeaturePair]) -> Vec<(usize, Vec<usize>)> {
    let mut remaining: Vec<FeaturePair> = pairs.to_vec();
    remaining.sort_unstable();
    remaining.dedup();
    let mut groups = Vec::new();
    while !remaining.is_empty() {
        let mut freq: HashMap<usize, usize> = HashMap::new();
        for p in &remaining {
            *freq.entry(p.lo()).or_default() += 1;
            *freq.entry(p.hi()).or_default() += 1;
        }
        let (&hub, _) = freq
            .iter()
            .max_by_key(|(&idx, &count)| (count, idx))
            .expect("non-empty");
        let (group, rest): (Vec<FeaturePair>, Vec<FeaturePair>) =
            remaining.into_iter().partition(|p| p.contains(hub));
        groups.push((hub, group.iter().filter_map(|p| p.other(hub)).collect()));
        remaining = rest;
    }
    groups
}

pub struct VerticalProvider {
    partitions: Vec<ColumnPartition>,
    arities: Vec<usize>,
    n_rows: usize,
    workers: usize,
    stats: EngineStats,
}

impl VerticalProvider {
    /// Runs the columnar transform once; later rounds only broadcast one column each.
    pub fn new(
        ds: &DiscreteDataset,
        partitions: usize,
        workers: usize,
        assignment: ColumnAssignment,
    ) -> Result<Self> {
        Ok(VerticalProvider {
            partitions: columnar_transform_with(ds, partitions, assignment)?,
            arities: ds.arities().to_vec(),
            n_rows: ds.n_rows(),
            workers: workers.max(1),
            stats: EngineStats::default(),
        })
    }

    pub fn column_partitions(&self) -> &[ColumnPartition] {
        &self.partitions
    }
}

impl CorrelationProvider for VerticalProvider {
    fn compute(&mut self, pairs: &[FeaturePair]) -> Result<SuMap> {
        let start = Instant::now();
        let pairs = distinct_pairs(pairs, self.arities.len())?;
        let mut out = BTreeMap::new();
        for (broadcast, candidates) in group_by_endpoint(&pairs) {
            let (su, touched) = broadcast_round(
                &self.partitions,
                &self.arities,
                broadcast,
                &candidates,
                self.workers,
                symmetrical_uncertainty,
            )?;
            self.stats.partition_tasks += touched as u64;
            self.stats.rows_scanned += (self.n_rows * su.len()) as u64;
            out.extend(su);
        }
        self.stats.record_round(&pairs, start.elapsed());
        Ok(out)
    }

    fn stats(&self) -> &EngineStats {
        &self.stats
    }

    fn layout(&self) -> Layout {
        Layout::Vertical
    }

    fn partitions(&self) -> usize {
        self.partitions.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{columnar_transform, generate_synthetic, SyntheticConfig};
    use crate::engines::sequential_compute;

    fn pair(a: usize, b: usize) -> FeaturePair {
        FeaturePair::new(a, b).unwrap()
    }

    fn data() -> DiscreteDataset {
        generate_synthetic(
            &SyntheticConfig::new(211, 7, 5)
                .relevant(3, 2)
                .arities(vec![2, 3, 4, 2, 5, 3, 6])
                .class_arity(3),
        )
        .unwrap()
    }

    #[test]
    fn class_broadcast_covers_first_expansion() {
        let ds = data();
        let class = ds.class_index();
        let all: Vec<usize> = (0..7).collect();
        let pairs: Vec<FeaturePair> = all.iter().map(|&f| pair(f, class)).collect();
        let reference = sequential_compute(&ds, &pairs).unwrap();
        for q in [1, 3, 7] {
            let parts = columnar_transform(&ds, q).unwrap();
            let got = vertical_compute(&parts, ds.arities(), class, &all, 2).unwrap();
            assert_eq!(got, reference, "q={q}");
        }
    }

    #[test]
    fn feature_broadcast_against_remaining_features() {
        let ds = data();
        let parts = columnar_transform(&ds, 4).unwrap();
        let remaining = [0, 1, 3, 5, 6];
        let got = vertical_compute(&parts, ds.arities(), 4, &remaining, 3).unwrap();
        let pairs: Vec<FeaturePair> = remaining.iter().map(|&f| pair(f, 4)).collect();
        assert_eq!(got, sequential_compute(&ds, &pairs).unwrap());
        // Tables are oriented canonically regardless of which side was broadcast.
        let tables = vertical_tables(&parts, ds.arities(), 4, &remaining, 1).unwrap();
        assert_eq!(tables[&pair(4, 6)].shape(), (ds.arity(4), ds.arity(6)));
    }

    #[test]
    fn class_can_be_a_candidate() {
        let ds = data();
        let parts = columnar_transform(&ds, 3).unwrap();
        let class = ds.class_index();
        let got = vertical_compute(&parts, ds.arities(), 2, &[class, 0], 1).unwrap();
        let pairs = [pair(2, class), pair(0, 2)];
        assert_eq!(got, sequential_compute(&ds, &pairs).unwrap());
    }

    #[test]
    fn bad_broadcast_or_candidate() {
        let ds = data();
        let parts = columnar_transform(&ds, 2).unwrap();
        assert!(vertical_compute(&parts, ds.arities(), 99, &[0], 1).is_err());
        assert!(vertical_compute(&parts, ds.arities(), 1, &[1], 1).is_err());
        assert!(matches!(
            vertical_compute(&parts, ds.arities(), 1, &[42], 1),
            Err(Error::CandidateNotFound(42))
        ));
    }

    #[test]
    fn grouping_prefers_shared_endpoints() {
        let groups = group_by_endpoint(&[pair(0, 7), pair(1, 7), pair(2, 7), pair(0, 3)]);
        assert_eq!(groups, vec![(7, vec![0, 1, 2]), (3, vec![0])]);
        // No shared endpoint: one broadcast per pair.
        let groups = group_by_endpoint(&[pair(0, 1), pair(2, 3)]);
        assert_eq!(groups.len(), 2);
        assert!(group_by_endpoint(&[]).is_empty());
    }

    #[test]
    fn untouched_partitions_do_no_work() {
        let ds = std::sync::Arc::new(data());
        let mut p = VerticalProvider::new(&ds, 7, 2, ColumnAssignment::Contiguous).unwrap();
        p.compute(&[pair(0, 4), pair(1, 4)]).unwrap();
        assert_eq!(p.stats().partition_tasks, 2);
        p.compute(&[pair(5, 7)]).unwrap();
        assert_eq!(p.stats().partition_tasks, 3);
        assert_eq!(p.stats().pairs_computed, 3);
    }

    #[test]
    fn provider_matches_sequential_for_mixed_batch() {
        let ds = data();
        let pairs = [
            pair(0, 1),
            pair(2, 7),
            pair(1, 5),
            pair(3, 6),
            pair(0, 7),
            pair(4, 5),
        ];
        let reference = sequential_compute(&ds, &pairs).unwrap();
        for q in [1, 2, 7] {
            for w in [1, 4] {
                let mut p = VerticalProvider::new(&ds, q, w, ColumnAssignment::RoundRobin).unwrap();
                assert_eq!(p.compute(&pairs).unwrap(), reference);
            }
        }
    }
}
