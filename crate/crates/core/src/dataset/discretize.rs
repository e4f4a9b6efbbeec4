//! Supervised discretization with the recursive MDL stopping rule of Fayyad and Irani.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::raw::{RawDataset, RawValues};
use super::{Code, DiscreteDataset, MAX_ARITY};
use crate::correlation::entropy;
use crate::error::{Error, Result};

/// One side of a candidate binary split.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SplitSide {
    pub size: usize,
    /// Class entropy of this side, in bits.
    pub entropy: f64,
    /// Number of distinct classes present on this side.
    pub classes: usize,
}

/// MDL acceptance test for a binary cut of a set of `n` examples with `k` classes.
///
/// Accepts iff `gain > log2(n - 1) / n + delta / n` where
/// `delta = log2(3^k - 2) - (k * Ent(S) - k1 * Ent(S1) - k2 * Ent(S2))`.
pub fn mdl_accepts_cut(
    n: usize,
    base_entropy: f64,
    left: SplitSide,
    right: SplitSide,
    k: usize,
) -> bool {
    debug_assert_eq!(n, left.size + right.size);
    if n < 2 {
        return false;
    }
    let nf = n as f64;
    let gain = base_entropy
        - (left.size as f64 / nf) * left.entropy
        - (right.size as f64 / nf) * right.entropy;
    let delta = (3f64.powi(k as i32) - 2.0).log2()
        - (k as f64 * base_entropy
            - left.classes as f64 * left.entropy
            - right.classes as f64 * right.entropy);
    let threshold = (nf - 1.0).log2() / nf + delta / nf;
    gain > threshold
}

/// Finds MDL cut points for one numeric column.
///
/// Candidates are midpoints between adjacent distinct values, restricted to
/// boundary points (two neighbouring value groups that are pure in the same class
/// never get a cut between them). Among equally good cuts the lowest threshold wins.
pub fn find_cut_points(values: &[f64], labels: &[Code]) -> Vec<f64> {
    assert_eq!(
        values.len(),
        labels.len(),
        "values and labels differ in length"
    );
    if values.is_empty() {
        return Vec::new();
    }
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let sorted_values: Vec<f64> = order.iter().map(|&i| values[i]).collect();
    let sorted_labels: Vec<usize> = order.iter().map(|&i| labels[i] as usize).collect();
    let n_classes = sorted_labels.iter().max().map_or(0, |&c| c + 1);

    let mut cuts = Vec::new();
    split_range(
        &sorted_values,
        &sorted_labels,
        n_classes,
        0,
        sorted_values.len(),
        &mut cuts,
    );
    cuts
}

const TIE_EPS: f64 = 1e-12;

struct ValueGroup {
    end: usize,
    /// The single class of the group, or `None` when the group is mixed.
    pure_class: Option<usize>,
}

fn class_counts(labels: &[usize], n_classes: usize) -> Vec<u64> {
    let mut counts = vec![0u64; n_classes];
    for &l in labels {
        counts[l] += 1;
    }
    counts
}

fn present(counts: &[u64]) -> usize {
    counts.iter().filter(|&&c| c > 0).count()
}

/// Lowest-entropy boundary cut in `lo..hi`: the split index and the class counts
/// left of it. Earlier (lower) cuts win ties.
fn best_boundary(
    values: &[f64],
    labels: &[usize],
    total: &[u64],
    lo: usize,
    hi: usize,
) -> Option<(usize, Vec<u64>)> {
    let n = (hi - lo) as f64;
    let mut groups = Vec::new();
    let mut start = lo;
    for i in lo + 1..=hi {
        if i == hi || values[i] != values[i - 1] {
            let first = labels[start];
            let pure = labels[start..i].iter().all(|&l| l == first);
            groups.push(ValueGroup {
                end: i,
                pure_class: pure.then_some(first),
            });
            start = i;
        }
    }

    let mut left = vec![0u64; total.len()];
    let mut best: Option<(usize, f64, Vec<u64>)> = None;
    let mut cursor = lo;
    for pair in groups.windows(2) {
        let (g, next) = (&pair[0], &pair[1]);
        for &l in &labels[cursor..g.end] {
            left[l] += 1;
        }
        cursor = g.end;
        if g.pure_class.is_some() && g.pure_class == next.pure_class {
            continue;
        }
        let right: Vec<u64> = total.iter().zip(&left).map(|(t, l)| t - l).collect();
        let left_n = (g.end - lo) as f64;
        let weighted = (left_n * entropy(&left) + (n - left_n) * entropy(&right)) / n;
        // Differences below round-off count as ties.
        if best
            .as_ref()
            .is_none_or(|(_, w, _)| weighted < *w - TIE_EPS)
        {
            best = Some((g.end, weighted, left.clone()));
        }
    }
    best.map(|(at, _, left)| (at, left))
}

fn split_range(
    values: &[f64],
    labels: &[usize],
    n_classes: usize,
    lo: usize,
    hi: usize,
    cuts: &mut Vec<f64>,
) {
    let n = hi - lo;
    if n < 2 {
        return;
    }
    let total = class_counts(&labels[lo..hi], n_classes);
    let base = entropy(&total);
    if base == 0.0 {
        return;
    }

    let Some((at, left)) = best_boundary(values, labels, &total, lo, hi) else {
        return;
    };
    let right: Vec<u64> = total.iter().zip(&left).map(|(t, l)| t - l).collect();
    let accepted = mdl_accepts_cut(
        n,
        base,
        SplitSide {
            size: at - lo,
            entropy: entropy(&left),
            classes: present(&left),
        },
        SplitSide {
            size: hi - at,
            entropy: entropy(&right),
            classes: present(&right),
        },
        present(&total),
    );
    if !accepted {
        return;
    }
    let (a, b) = (values[at - 1], values[at]);
    split_range(values, labels, n_classes, lo, at, cuts);
    cuts.push(a + (b - a) / 2.0);
    split_range(values, labels, n_classes, at, hi, cuts);
}

/// How one discrete column was derived from its raw column.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ColumnKind {
    /// `value <= cut_points[i]` maps to bin `i`; values above the last cut map to
    /// bin `cut_points.len()`.
    Numeric {
        cut_points: Vec<f64>,
        /// No cut was accepted, so every present value shares one bin.
        uninformative: bool,
    },
    /// Labels in code order (first appearance in the input).
    Categorical { categories: Vec<String> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ColumnModel {
    pub name: String,
    /// Position of the column in the input file.
    pub source_index: usize,
    #[serde(flatten)]
    pub kind: ColumnKind,
    pub arity: usize,
    /// Code reserved for missing cells, present only if the column had any.
    pub missing_code: Option<Code>,
}

/// Everything needed to reproduce the discretization: one entry per output
/// column, features first and the class last.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CutPointModel {
    pub class_column: String,
    pub columns: Vec<ColumnModel>,
}

impl CutPointModel {
    /// Cut points of output column `j`, or `None` for categorical columns.
    pub fn cut_points(&self, j: usize) -> Option<&[f64]> {
        match &self.columns[j].kind {
            ColumnKind::Numeric { cut_points, .. } => Some(cut_points),
            ColumnKind::Categorical { .. } => None,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("cut-point model serializes")
    }
}

fn bin(cuts: &[f64], value: f64) -> usize {
    cuts.partition_point(|&t| t < value)
}

fn code_categorical(name: &str, values: &[Option<String>]) -> Result<(Vec<Code>, ColumnModel)> {
    let mut index: HashMap<&str, usize> = HashMap::new();
    let mut categories: Vec<String> = Vec::new();
    let mut raw_codes: Vec<Option<usize>> = Vec::with_capacity(values.len());
    for v in values {
        raw_codes.push(v.as_deref().map(|label| {
            *index.entry(label).or_insert_with(|| {
                categories.push(label.to_string());
                categories.len() - 1
            })
        }));
    }
    let has_missing = raw_codes.iter().any(Option::is_none);
    let missing = categories.len();
    let arity = (categories.len() + usize::from(has_missing)).max(1);
    if arity > MAX_ARITY {
        return Err(Error::TooManyCategories {
            column: name.to_string(),
            max: MAX_ARITY,
        });
    }
    let codes = raw_codes
        .into_iter()
        .map(|c| c.unwrap_or(missing) as Code)
        .collect();
    Ok((
        codes,
        ColumnModel {
            name: name.to_string(),
            source_index: 0,
            kind: ColumnKind::Categorical { categories },
            arity,
            missing_code: has_missing.then_some(missing as Code),
        },
    ))
}

fn code_numeric(
    name: &str,
    values: &[Option<f64>],
    class: &[Code],
    class_missing: Option<Code>,
) -> Result<(Vec<Code>, ColumnModel)> {
    let (present, labels): (Vec<f64>, Vec<Code>) = values
        .iter()
        .zip(class)
        .filter_map(|(v, &c)| match v {
            Some(x) if Some(c) != class_missing => Some((*x, c)),
            _ => None,
        })
        .unzip();
    let cuts = find_cut_points(&present, &labels);
    let bins = cuts.len() + 1;
    let has_missing = values.iter().any(Option::is_none);
    let arity = bins + usize::from(has_missing);
    if arity > MAX_ARITY {
        return Err(Error::TooManyCategories {
            column: name.to_string(),
            max: MAX_ARITY,
        });
    }
    let codes = values
        .iter()
        .map(|v| match v {
            Some(x) => bin(&cuts, *x) as Code,
            None => bins as Code,
        })
        .collect();
    Ok((
        codes,
        ColumnModel {
            name: name.to_string(),
            source_index: 0,
            kind: ColumnKind::Numeric {
                uninformative: cuts.is_empty(),
                cut_points: cuts,
            },
            arity,
            missing_code: has_missing.then_some(bins as Code),
        },
    ))
}

/// Discretizes every numeric column against the class and code-maps the rest.
/// The class column moves to the last position of the result.
pub fn discretize_mdl(raw: &RawDataset) -> Result<(DiscreteDataset, CutPointModel)> {
    let class_col = raw.class();
    let RawValues::Categorical(class_values) = &class_col.values else {
        unreachable!("RawDataset keeps the class column categorical");
    };
    let (class_codes, mut class_model) = code_categorical(&class_col.name, class_values)?;
    class_model.source_index = raw.class_index();

    let mut columns = Vec::with_capacity(raw.columns().len());
    let mut models = Vec::with_capacity(raw.columns().len());
    for (j, col) in raw.columns().iter().enumerate() {
        if j == raw.class_index() {
            continue;
        }
        let (codes, mut model) = match &col.values {
            RawValues::Numeric(v) => {
                code_numeric(&col.name, v, &class_codes, class_model.missing_code)?
            }
            RawValues::Categorical(v) => code_categorical(&col.name, v)?,
        };
        model.source_index = j;
        columns.push(codes);
        models.push(model);
    }
    columns.push(class_codes);
    models.push(class_model);

    let arities = models.iter().map(|m| m.arity).collect();
    let names = models.iter().map(|m| m.name.clone()).collect();
    let dataset = DiscreteDataset::from_columns(columns, arities, names)?;
    Ok((
        dataset,
        CutPointModel {
            class_column: class_col.name.clone(),
            columns: models,
        },
    ))
}
