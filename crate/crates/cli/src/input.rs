use std::time::{Duration, Instant};

use cfs_core::{discretize_mdl, load_csv, DiscreteDataset};

use crate::args::InputArgs;
use crate::Failure;

pub struct Loaded {
    pub dataset: DiscreteDataset,
    pub load_time: Duration,
    pub discretize_time: Duration,
}

/// Reads the CSV and discretizes it. With `discrete` set every column is coded
/// as categorical, so coded files go through unchanged.
pub fn load(args: &InputArgs) -> Result<Loaded, Failure> {
    let start = Instant::now();
    let mut raw = load_csv(&args.input, &args.class, !args.no_header)?;
    if args.discrete {
        raw = raw.into_categorical();
    }
    let load_time = start.elapsed();
    let start = Instant::now();
    let (dataset, _) = discretize_mdl(&raw)?;
    Ok(Loaded {
        dataset,
        load_time,
        discretize_time: start.elapsed(),
    })
}

pub fn ms(d: Duration) -> f64 {
    d.as_secs_f64() * 1e3
}
