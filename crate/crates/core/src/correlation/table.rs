use std::collections::BTreeMap;

use super::FeaturePair;
use crate::dataset::{DiscreteDataset, RowPartition};
use crate::error::{Error, Result};

/// Joint counts of two discrete columns: `rows` indexes the `lo` column's codes,
/// `cols` the `hi` column's codes.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ContingencyTable {
    rows: usize,
    cols: usize,
    counts: Vec<u64>,
}

/// Per-pair tables, keyed by pair.
pub type CTables = BTreeMap<FeaturePair, ContingencyTable>;

impl ContingencyTable {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ContingencyTable {
            rows,
            cols,
            counts: vec![0; rows * cols],
        }
    }

    pub fn from_counts(rows: usize, cols: usize, counts: Vec<u64>) -> Result<Self> {
        if counts.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                left: (rows, cols),
                right: (counts.len(), 1),
            });
        }
        Ok(ContingencyTable { rows, cols, counts })
    }

    /// Builds a table from nested rows, e.g. `[[1, 1], [0, 2]]`.
    pub fn from_rows<R: AsRef<[u64]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut counts = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.as_ref().len() != cols {
                return Err(Error::DimensionMismatch {
                    left: (rows.len(), cols),
                    right: (rows.len(), r.as_ref().len()),
                });
            }
            counts.extend_from_slice(r.as_ref());
        }
        Ok(ContingencyTable {
            rows: rows.len(),
            cols,
            counts,
        })
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, x: usize, y: usize) -> u64 {
        self.counts[x * self.cols + y]
    }

    #[inline]
    pub fn increment(&mut self, x: usize, y: usize) {
        self.counts[x * self.cols + y] += 1;
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Marginal counts of the row variable.
    pub fn row_marginals(&self) -> Vec<u64> {
        self.counts
            .chunks_exact(self.cols.max(1))
            .map(|r| r.iter().sum())
            .take(self.rows)
            .collect()
    }

    /// Marginal counts of the column variable.
    pub fn col_marginals(&self) -> Vec<u64> {
        let mut out = vec![0; self.cols];
        for r in self.counts.chunks_exact(self.cols.max(1)) {
            for (o, c) in out.iter_mut().zip(r) {
                *o += c;
            }
        }
        out
    }

    pub fn row(&self, x: usize) -> &[u64] {
        &self.counts[x * self.cols..(x + 1) * self.cols]
    }

    pub fn column(&self, y: usize) -> Vec<u64> {
        (0..self.rows).map(|x| self.get(x, y)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = ContingencyTable::zeros(self.cols, self.rows);
        for x in 0..self.rows {
            for y in 0..self.cols {
                t.counts[y * self.rows + x] = self.get(x, y);
            }
        }
        t
    }

    pub(crate) fn add_assign(&mut self, other: &ContingencyTable) -> Result<()> {
        if self.shape() != other.shape() {
            return Err(Error::DimensionMismatch {
                left: self.shape(),
                right: other.shape(),
            });
        }
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
        Ok(())
    }
}

/// Element-wise sum of two tables of the same shape.
pub fn merge_tables(a: &ContingencyTable, b: &ContingencyTable) -> Result<ContingencyTable> {
    let mut out = a.clone();
    out.add_assign(b)?;
    Ok(out)
}

fn check_pairs(ds: &DiscreteDataset, pairs: &[FeaturePair]) -> Result<()> {
    for p in pairs {
        ds.check_column(p.hi())?;
    }
    Ok(())
}

/// Counts every requested pair over the rows of one partition in a single pass.
/// Tables are sized by the dataset's global arities and aligned with `pairs`.
pub(crate) fn local_ctables_aligned(
    ds: &DiscreteDataset,
    pairs: &[FeaturePair],
    partition: &RowPartition,
) -> Vec<ContingencyTable> {
    let mut tables: Vec<ContingencyTable> = pairs
        .iter()
        .map(|p| ContingencyTable::zeros(ds.arity(p.lo()), ds.arity(p.hi())))
        .collect();
    let slots: Vec<(usize, usize, usize)> = pairs
        .iter()
        .map(|p| (p.lo(), p.hi(), ds.arity(p.hi())))
        .collect();
    for i in partition.rows.clone() {
        let row = ds.row(i);
        for (table, &(x, y, cols)) in tables.iter_mut().zip(&slots) {
            table.counts[row[x] as usize * cols + row[y] as usize] += 1;
        }
    }
    tables
}

/// Contingency tables of `pairs` restricted to the rows of `partition`.
pub fn local_ctables(
    ds: &DiscreteDataset,
    pairs: &[FeaturePair],
    partition: &RowPartition,
) -> Result<CTables> {
    check_pairs(ds, pairs)?;
    if partition.rows.end > ds.n_rows() {
        return Err(Error::IndexOutOfRange {
            index: partition.rows.end,
            columns: ds.n_rows(),
        });
    }
    let mut unique: Vec<FeaturePair> = pairs.to_vec();
    unique.sort_unstable();
    unique.dedup();
    let tables = local_ctables_aligned(ds, &unique, partition);
    Ok(unique.into_iter().zip(tables).collect())
}

/// Table of one pair over all rows.
pub fn pair_table(ds: &DiscreteDataset, pair: FeaturePair) -> Result<ContingencyTable> {
    check_pairs(ds, &[pair])?;
    let all = RowPartition {
        id: 0,
        rows: 0..ds.n_rows(),
    };
    Ok(local_ctables_aligned(ds, &[pair], &all)
        .pop()
        .expect("one table"))
}

/// Table between two full columns given as slices, `lo_col` indexing rows.
pub(crate) fn columns_table(
    lo_col: &[crate::dataset::Code],
    lo_arity: usize,
    hi_col: &[crate::dataset::Code],
    hi_arity: usize,
) -> ContingencyTable {
    let mut table = ContingencyTable::zeros(lo_arity, hi_arity);
    for (&x, &y) in lo_col.iter().zip(hi_col) {
        table.counts[x as usize * hi_arity + y as usize] += 1;
    }
    table
}
