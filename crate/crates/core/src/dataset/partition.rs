use std::collections::BTreeMap;
use std::ops::Range;
use std::sync::Arc;

use super::{Code, DiscreteDataset};
use crate::error::{Error, Result};

/// A contiguous block of rows, the unit of work of the row-partitioned engine.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowPartition {
    pub id: usize,
    pub rows: Range<usize>,
}

impl RowPartition {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
}

/// Splits `total` items into `parts` contiguous ranges whose sizes differ by at
/// most one; the first `total % parts` ranges get the extra item.
fn balanced_ranges(total: usize, parts: usize) -> impl Iterator<Item = Range<usize>> {
    let base = total / parts;
    let extra = total % parts;
    (0..parts).scan(0, move |start, i| {
        let len = base + usize::from(i < extra);
        let range = *start..*start + len;
        *start += len;
        Some(range)
    })
}

pub fn partition_rows(ds: &DiscreteDataset, p: usize) -> Result<Vec<RowPartition>> {
    let n = ds.n_rows();
    if p == 0 || p > n {
        return Err(Error::PartitionCount {
            requested: p,
            max: n,
        });
    }
    Ok(balanced_ranges(n, p)
        .enumerate()
        .map(|(id, rows)| RowPartition { id, rows })
        .collect())
}

/// How features are dealt out to column partitions.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ColumnAssignment {
    /// Partition `i` holds a contiguous run of feature indices.
    #[default]
    Contiguous,
    /// Feature `f` goes to partition `f % q`.
    RoundRobin,
}

/// A set of full feature columns plus a replica of the class column.
///
/// This is the transposed layout: each stored feature is one "row" of the
/// transposed matrix, so dropping a feature from a computation means skipping a
/// row rather than reading the whole dataset.
#[derive(Clone, Debug)]
pub struct ColumnPartition {
    pub id: usize,
    columns: BTreeMap<usize, Vec<Code>>,
    class_column: Arc<[Code]>,
}

impl ColumnPartition {
    pub fn features(&self) -> impl Iterator<Item = usize> + '_ {
        self.columns.keys().copied()
    }

    pub fn feature_count(&self) -> usize {
        self.columns.len()
    }

    pub fn holds(&self, feature: usize) -> bool {
        self.columns.contains_key(&feature)
    }

    pub fn column(&self, feature: usize) -> Option<&[Code]> {
        self.columns.get(&feature).map(Vec::as_slice)
    }

    pub fn class_column(&self) -> &[Code] {
        &self.class_column
    }
}

pub fn columnar_transform(ds: &DiscreteDataset, q: usize) -> Result<Vec<ColumnPartition>> {
    columnar_transform_with(ds, q, ColumnAssignment::Contiguous)
}

/// Transposes the dataset into `q` column partitions. Every feature lands in
/// exactly one partition; every partition carries the class column.
pub fn columnar_transform_with(
    ds: &DiscreteDataset,
    q: usize,
    assignment: ColumnAssignment,
) -> Result<Vec<ColumnPartition>> {
    let m = ds.n_features();
    if q == 0 || q > m {
        return Err(Error::PartitionCount {
            requested: q,
            max: m,
        });
    }
    let owners: Vec<Vec<usize>> = match assignment {
        ColumnAssignment::Contiguous => balanced_ranges(m, q).map(|r| r.collect()).collect(),
        ColumnAssignment::RoundRobin => (0..q).map(|i| (i..m).step_by(q).collect()).collect(),
    };

    // One pass over the rows fills every output column.
    let n = ds.n_rows();
    let mut transposed: Vec<Vec<Code>> = (0..=m).map(|_| Vec::with_capacity(n)).collect();
    for i in 0..n {
        for (col, &code) in transposed.iter_mut().zip(ds.row(i)) {
            col.push(code);
        }
    }
    let class_column: Arc<[Code]> = transposed.pop().expect("class column").into();
    let mut transposed: Vec<Option<Vec<Code>>> = transposed.into_iter().map(Some).collect();

    Ok(owners
        .into_iter()
        .enumerate()
        .map(|(id, features)| ColumnPartition {
            id,
            columns: features
                .into_iter()
                .map(|f| (f, transposed[f].take().expect("feature assigned once")))
                .collect(),
            class_column: Arc::clone(&class_column),
        })
        .collect())
}
