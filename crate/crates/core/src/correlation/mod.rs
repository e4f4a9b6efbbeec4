//! Contingency tables and the information-theoretic measures built on them.

mod cache;
mod info;
pub(crate) mod table;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use cache::CorrelationCache;
pub use info::{conditional_entropy, entropy, symmetrical_uncertainty, Axis};
pub use table::{local_ctables, merge_tables, pair_table, CTables, ContingencyTable};

use crate::error::{Error, Result};

/// Unordered pair of column indices, stored with `lo < hi`. The class column
/// takes part through its index `m`, so it is always the `hi` side.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct FeaturePair {
    lo: usize,
    hi: usize,
}

impl FeaturePair {
    pub fn new(a: usize, b: usize) -> Result<Self> {
        match a.cmp(&b) {
            std::cmp::Ordering::Less => Ok(FeaturePair { lo: a, hi: b }),
            std::cmp::Ordering::Greater => Ok(FeaturePair { lo: b, hi: a }),
            std::cmp::Ordering::Equal => Err(Error::InvalidPair(a, b)),
        }
    }

    pub fn lo(self) -> usize {
        self.lo
    }

    pub fn hi(self) -> usize {
        self.hi
    }

    pub fn contains(self, column: usize) -> bool {
        self.lo == column || self.hi == column
    }

    /// The endpoint that is not `column`.
    pub fn other(self, column: usize) -> Option<usize> {
        if self.lo == column {
            Some(self.hi)
        } else if self.hi == column {
            Some(self.lo)
        } else {
            None
        }
    }
}

impl fmt::Display for FeaturePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.lo, self.hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairs_are_canonical() {
        let p = FeaturePair::new(5, 2).unwrap();
        assert_eq!((p.lo(), p.hi()), (2, 5));
        assert_eq!(p, FeaturePair::new(2, 5).unwrap());
        assert_eq!(p.other(5), Some(2));
        assert_eq!(p.other(3), None);
        assert!(FeaturePair::new(4, 4).is_err());
    }
}
