//! Dataset ingestion, discretization and partitioned layouts.

mod discretize;
mod partition;
mod raw;
mod synthetic;

use std::io::Write;
use std::path::Path;

pub use discretize::{
    discretize_mdl, find_cut_points, mdl_accepts_cut, ColumnKind, ColumnModel, CutPointModel,
    SplitSide,
};
pub use partition::{
    columnar_transform, columnar_transform_with, partition_rows, ColumnAssignment, ColumnPartition,
    RowPartition,
};
pub use raw::{load_csv, ClassColumn, RawColumn, RawDataset, RawValues};
pub use synthetic::{generate_synthetic, SyntheticConfig};

use crate::error::{Error, Result};

/// A category code. Every discrete column stores codes in `0..arity`.
pub type Code = u16;

/// Largest arity representable by [`Code`].
pub const MAX_ARITY: usize = Code::MAX as usize + 1;

/// Dense table of category codes: `m` feature columns followed by the class column.
///
/// Rows are stored contiguously (row-major), which is the layout the row-partitioned
/// engine scans. The column-partitioned engine works on a transposed copy built by
/// [`columnar_transform`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiscreteDataset {
    n_rows: usize,
    width: usize,
    codes: Vec<Code>,
    arities: Vec<usize>,
    names: Vec<String>,
}

impl DiscreteDataset {
    /// Builds a dataset from per-column code vectors. The last column is the class.
    pub fn from_columns(
        columns: Vec<Vec<Code>>,
        arities: Vec<usize>,
        names: Vec<String>,
    ) -> Result<Self> {
        let width = columns.len();
        if width < 2 {
            return Err(Error::InvalidDataset(
                "need at least one feature and a class column".into(),
            ));
        }
        if arities.len() != width || names.len() != width {
            return Err(Error::InvalidDataset(format!(
                "{} columns but {} arities and {} names",
                width,
                arities.len(),
                names.len()
            )));
        }
        let n_rows = columns[0].len();
        if n_rows == 0 {
            return Err(Error::InvalidDataset("dataset has no rows".into()));
        }
        for (j, col) in columns.iter().enumerate() {
            if col.len() != n_rows {
                return Err(Error::InvalidDataset(format!(
                    "column `{}` has {} rows, expected {}",
                    names[j],
                    col.len(),
                    n_rows
                )));
            }
            let arity = arities[j];
            if arity == 0 || arity > MAX_ARITY {
                return Err(Error::InvalidDataset(format!(
                    "column `{}` has arity {}",
                    names[j], arity
                )));
            }
            if let Some(&bad) = col.iter().find(|&&c| c as usize >= arity) {
                return Err(Error::InvalidDataset(format!(
                    "column `{}` holds code {} but arity is {}",
                    names[j], bad, arity
                )));
            }
        }
        if arities[width - 1] < 2 {
            return Err(Error::InvalidDataset(
                "class arity must be at least 2".into(),
            ));
        }
        let mut codes = Vec::with_capacity(n_rows * width);
        for i in 0..n_rows {
            codes.extend(columns.iter().map(|col| col[i]));
        }
        Ok(DiscreteDataset {
            n_rows,
            width,
            codes,
            arities,
            names,
        })
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    /// Number of features `m` (the class column is not counted).
    pub fn n_features(&self) -> usize {
        self.width - 1
    }

    /// Index of the class column, always `m`.
    pub fn class_index(&self) -> usize {
        self.width - 1
    }

    pub fn arity(&self, column: usize) -> usize {
        self.arities[column]
    }

    pub fn arities(&self) -> &[usize] {
        &self.arities
    }

    pub fn name(&self, column: usize) -> &str {
        &self.names[column]
    }

    pub fn feature_names(&self) -> &[String] {
        &self.names[..self.width - 1]
    }

    pub fn column_names(&self) -> &[String] {
        &self.names
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[Code] {
        &self.codes[i * self.width..(i + 1) * self.width]
    }

    #[inline]
    pub fn code(&self, row: usize, column: usize) -> Code {
        self.codes[row * self.width + column]
    }

    /// Copies one column out of the row-major table.
    pub fn column(&self, column: usize) -> Vec<Code> {
        self.codes
            .iter()
            .skip(column)
            .step_by(self.width)
            .copied()
            .collect()
    }

    pub fn class_column(&self) -> Vec<Code> {
        self.column(self.class_index())
    }

    pub(crate) fn check_column(&self, column: usize) -> Result<()> {
        if column < self.width {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange {
                index: column,
                columns: self.width,
            })
        }
    }

    /// Oversizes (or shrinks) the dataset by rows. A fraction above 1.0 appends
    /// whole copies of the data followed by a prefix, so `2.0` yields `2n` rows.
    pub fn scale_rows(&self, fraction: f64) -> Result<Self> {
        let target = scaled_count(self.n_rows, fraction)?;
        let mut codes = Vec::with_capacity(target * self.width);
        for i in 0..target {
            codes.extend_from_slice(self.row(i % self.n_rows));
        }
        Ok(DiscreteDataset {
            n_rows: target,
            width: self.width,
            codes,
            arities: self.arities.clone(),
            names: self.names.clone(),
        })
    }

    /// Oversizes (or shrinks) the dataset by features, duplicating feature columns
    /// cyclically. Duplicated columns get a `#k` suffix on their name.
    pub fn scale_features(&self, fraction: f64) -> Result<Self> {
        let m = self.n_features();
        let target = scaled_count(m, fraction)?;
        let mut columns: Vec<Vec<Code>> = (0..target).map(|j| self.column(j % m)).collect();
        let mut arities: Vec<usize> = (0..target).map(|j| self.arities[j % m]).collect();
        let mut names: Vec<String> = (0..target)
            .map(|j| {
                let base = &self.names[j % m];
                match j / m {
                    0 => base.clone(),
                    copy => format!("{base}#{copy}"),
                }
            })
            .collect();
        columns.push(self.class_column());
        arities.push(self.arities[self.class_index()]);
        names.push(self.names[self.class_index()].clone());
        DiscreteDataset::from_columns(columns, arities, names)
    }

    /// Writes the codes as CSV with a header row of column names.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut writer = csv::Writer::from_writer(out);
        writer.write_record(&self.names)?;
        let mut record = Vec::with_capacity(self.width);
        for i in 0..self.n_rows {
            record.clear();
            record.extend(self.row(i).iter().map(|c| c.to_string()));
            writer.write_record(&record)?;
        }
        writer.flush().map_err(|e| Error::Output(e.to_string()))?;
        Ok(())
    }

    pub fn write_csv_file(&self, path: &Path) -> Result<()> {
        let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
        self.write_csv(std::io::BufWriter::new(file))
    }
}

fn scaled_count(base: usize, fraction: f64) -> Result<usize> {
    if !(fraction.is_finite() && fraction > 0.0) {
        return Err(Error::InvalidConfig(format!(
            "scaling fraction must be positive, got {fraction}"
        )));
    }
    Ok(((base as f64 * fraction).round() as usize).max(1))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny() -> DiscreteDataset {
        DiscreteDataset::from_columns(
            vec![vec![0, 1, 2], vec![1, 1, 0], vec![0, 1, 0]],
            vec![3, 2, 2],
            vec!["a".into(), "b".into(), "class".into()],
        )
        .unwrap()
    }

    #[test]
    fn row_major_access_matches_columns() {
        let ds = tiny();
        assert_eq!(ds.row(1), &[1, 1, 1]);
        assert_eq!(ds.column(0), vec![0, 1, 2]);
        assert_eq!(ds.class_column(), vec![0, 1, 0]);
        assert_eq!(ds.class_index(), 2);
        assert_eq!(ds.n_features(), 2);
    }

    #[test]
    fn rejects_code_outside_arity() {
        let err = DiscreteDataset::from_columns(
            vec![vec![0, 3], vec![0, 1]],
            vec![3, 2],
            vec!["a".into(), "c".into()],
        )
        .unwrap_err();
        assert!(matches!(err, Error::InvalidDataset(_)));
    }

    #[test]
    fn rejects_unary_class() {
        let err = DiscreteDataset::from_columns(
            vec![vec![0, 1], vec![0, 0]],
            vec![2, 1],
            vec!["a".into(), "c".into()],
        )
        .unwrap_err();
        assert!(matches!(err, Error::InvalidDataset(_)));
    }

    #[test]
    fn scale_rows_duplicates_instances() {
        let ds = tiny();
        let big = ds.scale_rows(2.0).unwrap();
        assert_eq!(big.n_rows(), 6);
        assert_eq!(big.row(4), ds.row(1));
        let small = ds.scale_rows(0.34).unwrap();
        assert_eq!(small.n_rows(), 1);
    }

    #[test]
    fn scale_features_duplicates_columns() {
        let ds = tiny();
        let wide = ds.scale_features(2.0).unwrap();
        assert_eq!(wide.n_features(), 4);
        assert_eq!(wide.column(2), ds.column(0));
        assert_eq!(wide.name(3), "b#1");
        assert_eq!(wide.class_column(), ds.class_column());
    }

    #[test]
    fn csv_output_has_header_and_codes() {
        let mut buf = Vec::new();
        tiny().write_csv(&mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "a,b,class\n0,1,0\n1,1,1\n2,0,0\n"
        );
    }
}
