use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Code, DiscreteDataset, MAX_ARITY};
use crate::error::{Error, Result};

/// Parameters for a synthetic discrete dataset with known structure.
///
/// Features `0..relevant` are noisy functions of the class, features
/// `relevant..relevant + redundant` are exact copies of relevant features
/// (feature `relevant + j` copies feature `j % relevant`), and the rest are
/// uniform noise.
#[derive(Clone, Debug, PartialEq)]
pub struct SyntheticConfig {
    pub rows: usize,
    pub features: usize,
    /// Per-feature arity. A single entry applies to every feature.
    pub arities: Vec<usize>,
    pub class_arity: usize,
    pub relevant: usize,
    pub redundant: usize,
    /// Probability that a relevant feature takes a uniform random value instead
    /// of the class-derived one. Feature `j` uses `noise + 0.05 * j`, capped at 0.95.
    pub noise: f64,
    pub seed: u64,
}

impl SyntheticConfig {
    pub fn new(rows: usize, features: usize, seed: u64) -> Self {
        SyntheticConfig {
            rows,
            features,
            arities: vec![3],
            class_arity: 2,
            relevant: 0,
            redundant: 0,
            noise: 0.2,
            seed,
        }
    }

    pub fn relevant(mut self, relevant: usize, redundant: usize) -> Self {
        self.relevant = relevant;
        self.redundant = redundant;
        self
    }

    pub fn arities(mut self, arities: Vec<usize>) -> Self {
        self.arities = arities;
        self
    }

    pub fn class_arity(mut self, class_arity: usize) -> Self {
        self.class_arity = class_arity;
        self
    }

    pub fn noise(mut self, noise: f64) -> Self {
        self.noise = noise;
        self
    }

    fn arity(&self, feature: usize) -> usize {
        if self.arities.len() == 1 {
            self.arities[0]
        } else {
            self.arities[feature]
        }
    }

    fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Synthetic(msg));
        if self.rows == 0 || self.features == 0 {
            return fail("rows and features must be positive".into());
        }
        if self.relevant + self.redundant > self.features {
            return fail(format!(
                "relevant ({}) + redundant ({}) exceeds features ({})",
                self.relevant, self.redundant, self.features
            ));
        }
        if self.redundant > 0 && self.relevant == 0 {
            return fail("redundant features need at least one relevant feature".into());
        }
        if self.arities.len() != 1 && self.arities.len() != self.features {
            return fail(format!(
                "{} arities given for {} features",
                self.arities.len(),
                self.features
            ));
        }
        if self.arities.iter().any(|&a| a == 0 || a > MAX_ARITY) {
            return fail("feature arities must be in 1..=65536".into());
        }
        if self.class_arity < 2 || self.class_arity > MAX_ARITY {
            return fail("class arity must be in 2..=65536".into());
        }
        if !(0.0..=1.0).contains(&self.noise) {
            return fail(format!("noise {} outside [0, 1]", self.noise));
        }
        Ok(())
    }
}

/// Generates a deterministic dataset for tests and benchmarks.
pub fn generate_synthetic(cfg: &SyntheticConfig) -> Result<DiscreteDataset> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let n = cfg.rows;
    let m = cfg.features;

    let class: Vec<Code> = (0..n)
        .map(|_| rng.gen_range(0..cfg.class_arity) as Code)
        .collect();
    let mut columns: Vec<Vec<Code>> = Vec::with_capacity(m + 1);
    let mut arities: Vec<usize> = Vec::with_capacity(m + 1);
    for j in 0..m {
        if j < cfg.relevant {
            let arity = cfg.arity(j);
            let noise = (cfg.noise + 0.05 * j as f64).min(0.95);
            let col = class
                .iter()
                .map(|&c| {
                    if rng.gen_bool(noise) {
                        rng.gen_range(0..arity) as Code
                    } else {
                        (c as usize % arity) as Code
                    }
                })
                .collect();
            columns.push(col);
            arities.push(arity);
        } else if j < cfg.relevant + cfg.redundant {
            let source = (j - cfg.relevant) % cfg.relevant;
            columns.push(columns[source].clone());
            arities.push(arities[source]);
        } else {
            let arity = cfg.arity(j);
            columns.push((0..n).map(|_| rng.gen_range(0..arity) as Code).collect());
            arities.push(arity);
        }
    }
    columns.push(class);
    arities.push(cfg.class_arity);
    let names = (0..m)
        .map(|j| format!("f{j}"))
        .chain(std::iter::once("class".to_string()))
        .collect();
    DiscreteDataset::from_columns(columns, arities, names)
}
