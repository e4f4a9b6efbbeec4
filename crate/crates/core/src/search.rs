//! Best-first subset search driven by the CFS merit heuristic.
//!
//! The search itself is sequential. Every correlation it needs goes through
//! [`Correlations`], which batches the missing pairs of one expansion round into a
//! single provider call and caches the answers.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;
use std::time::{Duration, Instant};

use crate::correlation::{CorrelationCache, FeaturePair};
use crate::dataset::DiscreteDataset;
use crate::engines::{make_provider, CorrelationProvider, EngineConfig, EngineStats};
use crate::error::{Error, Result};

/// Ordered set of feature indices with its merit.
#[derive(Clone, Debug, PartialEq)]
pub struct FeatureSubset {
    features: Vec<usize>,
    sorted: Vec<usize>,
    merit: f64,
    last_added: Option<usize>,
}

impl FeatureSubset {
    pub fn empty() -> Self {
        FeatureSubset {
            features: Vec::new(),
            sorted: Vec::new(),
            merit: 0.0,
            last_added: None,
        }
    }

    /// Builds a subset in the given insertion order. Merit starts at 0.
    pub fn from_features(features: &[usize]) -> Self {
        features
            .iter()
            .fold(FeatureSubset::empty(), |s, &f| s.with(f))
    }

    /// Features in insertion order.
    pub fn features(&self) -> &[usize] {
        &self.features
    }

    /// Features in ascending index order.
    pub fn sorted(&self) -> &[usize] {
        &self.sorted
    }

    pub fn merit(&self) -> f64 {
        self.merit
    }

    pub fn last_added(&self) -> Option<usize> {
        self.last_added
    }

    pub fn len(&self) -> usize {
        self.features.len()
    }

    pub fn is_empty(&self) -> bool {
        self.features.is_empty()
    }

    pub fn contains(&self, feature: usize) -> bool {
        self.sorted.binary_search(&feature).is_ok()
    }

    fn with(&self, feature: usize) -> Self {
        debug_assert!(!self.contains(feature));
        let mut features = self.features.clone();
        features.push(feature);
        let mut sorted = self.sorted.clone();
        let at = sorted.partition_point(|&x| x < feature);
        sorted.insert(at, feature);
        FeatureSubset {
            features,
            sorted,
            merit: 0.0,
            last_added: Some(feature),
        }
    }

    /// Queue priority: higher merit first, then smaller subsets, then the
    /// lexicographically smaller sorted index list.
    fn priority(&self, other: &Self) -> Ordering {
        other
            .merit
            .total_cmp(&self.merit)
            .then_with(|| self.len().cmp(&other.len()))
            .then_with(|| self.sorted.cmp(&other.sorted))
    }
}

impl fmt::Display for FeatureSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, x) in self.features.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str("}")
    }
}

/// On-demand correlation access: a cache in front of a provider.
pub struct Correlations<'p> {
    provider: &'p mut dyn CorrelationProvider,
    cache: CorrelationCache,
    n_features: usize,
    class_index: usize,
}

impl<'p> Correlations<'p> {
    pub fn new(
        provider: &'p mut dyn CorrelationProvider,
        n_features: usize,
        class_index: usize,
    ) -> Self {
        Correlations {
            provider,
            cache: CorrelationCache::new(),
            n_features,
            class_index,
        }
    }

    pub fn n_features(&self) -> usize {
        self.n_features
    }

    pub fn class_index(&self) -> usize {
        self.class_index
    }

    pub fn cache(&self) -> &CorrelationCache {
        &self.cache
    }

    pub fn provider(&self) -> &dyn CorrelationProvider {
        &*self.provider
    }

    /// Requests every uncached pair in one provider round. Returns how many pairs
    /// were requested; no round happens when everything is cached.
    pub fn ensure(&mut self, pairs: &[FeaturePair]) -> Result<usize> {
        let missing = self.cache.get_missing(pairs);
        if missing.is_empty() {
            return Ok(0);
        }
        let computed = self.provider.compute(&missing)?;
        if let Some(p) = missing.iter().find(|p| !computed.contains_key(p)) {
            return Err(Error::MissingCorrelation(*p));
        }
        self.cache.insert_batch(computed);
        Ok(missing.len())
    }

    pub fn su(&self, a: usize, b: usize) -> Result<f64> {
        self.cache.require(a, b)
    }

    fn class_pair(&self, f: usize) -> FeaturePair {
        FeaturePair::new(f, self.class_index).expect("feature index differs from class index")
    }
}

/// CFS merit `k * mean(r_cf) / sqrt(k + k (k - 1) * mean(r_ff))` of a subset from
/// cached correlations. Sums run in ascending index order so the value depends
/// only on the set, not on how it was built.
pub fn merit(subset: &FeatureSubset, cache: &CorrelationCache, class_index: usize) -> Result<f64> {
    let feats = subset.sorted();
    let k = feats.len();
    if k == 0 {
        return Ok(0.0);
    }
    let mut class_sum = 0.0;
    for &f in feats {
        class_sum += cache.require(f, class_index)?;
    }
    let mut pair_sum = 0.0;
    for (i, &a) in feats.iter().enumerate() {
        for &b in &feats[i + 1..] {
            pair_sum += cache.require(a, b)?;
        }
    }
    let kf = k as f64;
    let mean_cf = class_sum / kf;
    let mean_ff = if k > 1 {
        pair_sum / (kf * (kf - 1.0) / 2.0)
    } else {
        0.0
    };
    Ok(kf * mean_cf / (kf + kf * (kf - 1.0) * mean_ff).sqrt())
}

/// Every single-feature extension of `subset`, in ascending order of the added feature.
pub fn expand(subset: &FeatureSubset, m: usize) -> Vec<FeatureSubset> {
    (0..m)
        .filter(|&f| !subset.contains(f))
        .map(|f| subset.with(f))
        .collect()
}

/// Pairs needed to score `children` that are not cached yet: each new feature
/// against the class and against every feature it joined.
pub fn required_pairs(
    children: &[FeatureSubset],
    cache: &CorrelationCache,
    class_index: usize,
) -> Vec<FeaturePair> {
    let mut wanted = Vec::new();
    for child in children {
        let Some(f) = child.last_added() else {
            continue;
        };
        wanted.push(FeaturePair::new(f, class_index).expect("feature differs from class"));
        for &s in child.features().iter().filter(|&&s| s != f) {
            wanted.push(FeaturePair::new(f, s).expect("distinct features"));
        }
    }
    cache.get_missing(&wanted)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchOptions {
    pub max_fails: usize,
    pub queue_capacity: usize,
    /// Compute all `m (m + 1) / 2` correlations before searching. Only useful to
    /// check that on-demand computation changes nothing.
    pub eager: bool,
    /// Record one [`TraceRow`] per iteration.
    pub trace: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            max_fails: 5,
            queue_capacity: 5,
            eager: false,
            trace: false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Termination {
    /// `max_fails` consecutive iterations without a strict improvement.
    FailLimit,
    /// The queue ran dry after expanding the full feature set.
    QueueExhausted,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TraceRow {
    pub iteration: usize,
    pub dequeued: FeatureSubset,
    /// Pairs requested from the provider in this iteration.
    pub requested: usize,
    pub best_merit: f64,
    pub fails: usize,
}

impl fmt::Display for TraceRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}\t{}\t{}\t{:.6}\t{}",
            self.iteration, self.dequeued, self.requested, self.best_merit, self.fails
        )
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SearchOutcome {
    pub best: FeatureSubset,
    pub termination: Termination,
    pub iterations: usize,
    pub trace: Vec<TraceRow>,
}

impl SearchOutcome {
    /// Trace as tab-separated text, one line per iteration.
    pub fn trace_tsv(&self) -> String {
        self.trace.iter().map(|r| format!("{r}\n")).collect()
    }
}

/// Priority queue that keeps at most `capacity` subsets. Overflow drops the
/// lowest-priority entries, incoming or incumbent.
struct BoundedQueue {
    items: Vec<FeatureSubset>,
    capacity: usize,
}

impl BoundedQueue {
    fn add(&mut self, subsets: Vec<FeatureSubset>) {
        self.items.extend(subsets);
        self.items.sort_by(FeatureSubset::priority);
        self.items.truncate(self.capacity);
    }

    fn dequeue(&mut self) -> Option<FeatureSubset> {
        (!self.items.is_empty()).then(|| self.items.remove(0))
    }

    fn head(&self) -> Option<&FeatureSubset> {
        self.items.first()
    }
}

fn all_pairs(m: usize, class_index: usize) -> Vec<FeaturePair> {
    let mut out = Vec::with_capacity(m * (m + 1) / 2);
    for f in 0..m {
        out.push(FeaturePair::new(f, class_index).expect("distinct"));
    }
    for a in 0..m {
        for b in a + 1..m {
            out.push(FeaturePair::new(a, b).expect("distinct"));
        }
    }
    out
}

/// Best-first search from the empty subset.
///
/// Each iteration dequeues the head, scores all its single-feature extensions
/// (requesting their missing correlations in one batch), enqueues them, and
/// compares the new queue head against the best subset so far. Only a strictly
/// higher merit counts as an improvement; anything else is a fail.
pub fn best_first_search(
    corr: &mut Correlations<'_>,
    opts: &SearchOptions,
) -> Result<SearchOutcome> {
    if opts.max_fails == 0 || opts.queue_capacity == 0 {
        return Err(Error::InvalidConfig(
            "max_fails and queue_capacity must be at least 1".into(),
        ));
    }
    let m = corr.n_features();
    let class = corr.class_index();
    if opts.eager {
        corr.ensure(&all_pairs(m, class))?;
    }

    let mut best = FeatureSubset::empty();
    let mut queue = BoundedQueue {
        items: vec![FeatureSubset::empty()],
        capacity: opts.queue_capacity,
    };
    let mut fails = 0;
    let mut iterations = 0;
    let mut trace = Vec::new();
    let mut termination = Termination::FailLimit;

    while fails < opts.max_fails {
        let Some(head) = queue.dequeue() else {
            termination = Termination::QueueExhausted;
            break;
        };
        iterations += 1;
        let mut children = expand(&head, m);
        let needed = required_pairs(&children, corr.cache(), class);
        let requested = corr.ensure(&needed)?;
        for child in &mut children {
            child.merit = merit(child, corr.cache(), class)?;
        }
        queue.add(children);

        let exhausted = match queue.head() {
            None => true,
            Some(local) => {
                if local.merit > best.merit {
                    best = local.clone();
                    fails = 0;
                } else {
                    fails += 1;
                }
                false
            }
        };
        if opts.trace {
            trace.push(TraceRow {
                iteration: iterations,
                dequeued: head,
                requested,
                best_merit: best.merit,
                fails,
            });
        }
        if exhausted {
            termination = Termination::QueueExhausted;
            break;
        }
    }

    Ok(SearchOutcome {
        best,
        termination,
        iterations,
        trace,
    })
}

/// Appends locally predictive features to the search result.
///
/// Non-selected features are visited in descending order of class correlation
/// (ties by index). A feature is appended when its class correlation is positive
/// and strictly higher than its correlation with every feature already in the
/// subset, including features appended earlier in this pass. The returned merit
/// is that of the final subset.
pub fn add_locally_predictive(
    best: &FeatureSubset,
    corr: &mut Correlations<'_>,
) -> Result<FeatureSubset> {
    let m = corr.n_features();
    let class = corr.class_index();
    let candidates: Vec<usize> = (0..m).filter(|&f| !best.contains(f)).collect();
    let class_pairs: Vec<FeaturePair> = candidates.iter().map(|&f| corr.class_pair(f)).collect();
    corr.ensure(&class_pairs)?;
    let mut ranked: Vec<(usize, f64)> = candidates
        .iter()
        .map(|&f| Ok((f, corr.su(f, class)?)))
        .collect::<Result<_>>()?;
    ranked.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));

    let mut subset = best.clone();
    for (f, class_su) in ranked {
        if class_su <= 0.0 {
            break;
        }
        let pairs: Vec<FeaturePair> = subset
            .features()
            .iter()
            .map(|&s| FeaturePair::new(f, s).expect("distinct"))
            .collect();
        corr.ensure(&pairs)?;
        let mut dominated = false;
        for &s in subset.features() {
            if corr.su(f, s)? >= class_su {
                dominated = true;
                break;
            }
        }
        if !dominated {
            subset = subset.with(f);
        }
    }
    let mut needed: Vec<FeaturePair> = subset
        .features()
        .iter()
        .map(|&f| corr.class_pair(f))
        .collect();
    for (i, &a) in subset.sorted().iter().enumerate() {
        for &b in &subset.sorted()[i + 1..] {
            needed.push(FeaturePair::new(a, b).expect("distinct"));
        }
    }
    corr.ensure(&needed)?;
    subset.merit = merit(&subset, corr.cache(), class)?;
    if subset.len() == best.len() {
        subset.last_added = best.last_added;
    }
    Ok(subset)
}

/// Result of [`select_features`].
#[derive(Clone, Debug)]
pub struct Selection {
    /// Final subset, after the locally-predictive pass when it ran.
    pub subset: FeatureSubset,
    pub search: SearchOutcome,
    pub stats: EngineStats,
    pub search_time: Duration,
    pub post_time: Duration,
}

/// Binds `ds` to the configured engine, runs the search and, if asked, the
/// locally-predictive pass.
pub fn select_features(
    ds: Arc<DiscreteDataset>,
    engine: &EngineConfig,
    opts: &SearchOptions,
    locally_predictive: bool,
) -> Result<Selection> {
    let (m, class) = (ds.n_features(), ds.class_index());
    let mut provider = make_provider(ds, engine)?;
    let mut corr = Correlations::new(provider.as_mut(), m, class);
    let start = Instant::now();
    let search = best_first_search(&mut corr, opts)?;
    let search_time = start.elapsed();
    let start = Instant::now();
    let subset = if locally_predictive {
        add_locally_predictive(&search.best, &mut corr)?
    } else {
        search.best.clone()
    };
    let post_time = start.elapsed();
    Ok(Selection {
        subset,
        search,
        stats: provider.stats().clone(),
        search_time,
        post_time,
    })
}
