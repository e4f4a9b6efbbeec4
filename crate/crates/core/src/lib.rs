//! Correlation-based feature selection (CFS) for discrete classification data.
//!
//! The crate is split along the data flow:
//!
//! - [`dataset`]: CSV ingestion, MDL discretization, row and column partitioning,
//!   synthetic data generation.
//! - [`correlation`]: contingency tables, entropies, symmetrical uncertainty and
//!   the lazily filled correlation cache.
//! - [`engines`]: interchangeable correlation providers (sequential, row-partitioned
//!   and column-partitioned) behind one contract.
//! - [`search`]: best-first subset search over the merit heuristic plus the
//!   locally-predictive post-processing pass.
//!
//! All three engines produce bit-identical symmetrical uncertainty values because
//! contingency counts are integers and merged exactly before any floating point
//! math happens.

pub mod correlation;
pub mod dataset;
pub mod engines;
mod error;
pub mod search;

pub use correlation::{
    conditional_entropy, entropy, local_ctables, merge_tables, symmetrical_uncertainty, Axis,
    ContingencyTable, CorrelationCache, FeaturePair,
};
pub use dataset::{
    columnar_transform, discretize_mdl, find_cut_points, generate_synthetic, load_csv,
    mdl_accepts_cut, partition_rows, ClassColumn, Code, ColumnAssignment, ColumnPartition,
    CutPointModel, DiscreteDataset, RawDataset, RowPartition, SyntheticConfig,
};
pub use engines::{
    horizontal_compute, make_provider, sequential_compute, vertical_compute, CorrelationProvider,
    EngineConfig, EngineStats, Layout, SuMap,
};
pub use error::{Error, Result};
pub use search::{
    add_locally_predictive, best_first_search, expand, merit, required_pairs, select_features,
    Correlations, FeatureSubset, SearchOptions, SearchOutcome, Selection, Termination, TraceRow,
};
