use super::ContingencyTable;
use crate::error::{Error, Result};

/// Overshoot beyond `[0, 1]` that is still treated as round-off.
const SU_ROUNDOFF: f64 = 1e-9;

/// Shannon entropy in bits of a count vector. Zero counts contribute nothing and
/// an all-zero vector has entropy 0.
pub fn entropy(counts: &[u64]) -> f64 {
    let total: u64 = counts.iter().sum();
    if total == 0 {
        return 0.0;
    }
    let total = total as f64;
    -counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / total;
            p * p.log2()
        })
        .sum::<f64>()
}

/// The variable being conditioned on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axis {
    /// Condition on the row variable: `H(cols | rows)`.
    Rows,
    /// Condition on the column variable: `H(rows | cols)`.
    Cols,
}

/// Conditional entropy in bits: the marginal-weighted average of the entropies of
/// each slice along `given`.
pub fn conditional_entropy(table: &ContingencyTable, given: Axis) -> f64 {
    let total = table.total();
    if total == 0 {
        return 0.0;
    }
    let (rows, cols) = table.shape();
    let total = total as f64;
    let mut h = 0.0;
    match given {
        Axis::Rows => {
            for x in 0..rows {
                let slice = table.row(x);
                let weight: u64 = slice.iter().sum();
                if weight > 0 {
                    h += weight as f64 / total * entropy(slice);
                }
            }
        }
        Axis::Cols => {
            for y in 0..cols {
                let slice = table.column(y);
                let weight: u64 = slice.iter().sum();
                if weight > 0 {
                    h += weight as f64 / total * entropy(&slice);
                }
            }
        }
    }
    h
}

/// Symmetrical uncertainty `2 (H(X) - H(X|Y)) / (H(X) + H(Y))` with `X` the row
/// variable. Two constant variables share no information, so SU is 0 when both
/// entropies vanish.
pub fn symmetrical_uncertainty(table: &ContingencyTable) -> Result<f64> {
    if table.total() == 0 {
        return Err(Error::EmptyTable);
    }
    let hx = entropy(&table.row_marginals());
    let hy = entropy(&table.col_marginals());
    let denom = hx + hy;
    if denom == 0.0 {
        return Ok(0.0);
    }
    let su = 2.0 * (hx - conditional_entropy(table, Axis::Cols)) / denom;
    if !(-SU_ROUNDOFF..=1.0 + SU_ROUNDOFF).contains(&su) {
        return Err(Error::SuOutOfRange(su));
    }
    Ok(su.clamp(0.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(rows: &[[u64; 2]]) -> ContingencyTable {
        ContingencyTable::from_rows(rows).unwrap()
    }

    #[test]
    fn entropy_by_hand() {
        assert_eq!(entropy(&[2, 2]), 1.0);
        assert_eq!(entropy(&[4, 0]), 0.0);
        assert_eq!(entropy(&[1, 1, 1, 1]), 2.0);
        assert_eq!(entropy(&[0, 0]), 0.0);
        assert_eq!(entropy(&[]), 0.0);
    }

    #[test]
    fn conditional_entropy_by_hand() {
        assert_eq!(conditional_entropy(&t(&[[2, 0], [0, 2]]), Axis::Cols), 0.0);
        assert_eq!(conditional_entropy(&t(&[[1, 1], [1, 1]]), Axis::Cols), 1.0);
        let h = conditional_entropy(&t(&[[1, 1], [0, 2]]), Axis::Cols);
        assert!((h - 0.6887).abs() < 1e-4, "{h}");
    }

    #[test]
    fn su_by_hand() {
        assert_eq!(symmetrical_uncertainty(&t(&[[2, 0], [0, 2]])).unwrap(), 1.0);
        assert_eq!(symmetrical_uncertainty(&t(&[[1, 1], [1, 1]])).unwrap(), 0.0);
        let su = symmetrical_uncertainty(&t(&[[1, 1], [0, 2]])).unwrap();
        assert!((su - 0.3437).abs() < 1e-4, "{su}");
    }

    #[test]
    fn su_of_constant_columns_is_zero() {
        let c = ContingencyTable::from_rows(&[[5u64]]).unwrap();
        assert_eq!(symmetrical_uncertainty(&c).unwrap(), 0.0);
        // One constant side against a varying one: no shared information either.
        assert_eq!(symmetrical_uncertainty(&t(&[[3, 4]])).unwrap(), 0.0);
    }

    #[test]
    fn su_of_empty_table_is_an_error() {
        assert!(matches!(
            symmetrical_uncertainty(&ContingencyTable::zeros(2, 2)),
            Err(Error::EmptyTable)
        ));
    }
}
