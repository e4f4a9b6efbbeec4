use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::sync::Arc;
use std::time::Instant;

use cfs_core::{
    select_features, DiscreteDataset, EngineConfig, EngineStats, Layout, SearchOptions,
};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::args::BenchArgs;
use crate::input::{load, ms};
use crate::Failure;

#[derive(Clone, Debug, PartialEq)]
pub struct BenchRow {
    pub engine: Layout,
    pub workers: usize,
    pub partitions: usize,
    pub fraction: f64,
    pub median_ms: f64,
    pub speedup: f64,
}

#[derive(Serialize)]
struct StatsEntry<'a> {
    engine: Layout,
    workers: usize,
    partitions: usize,
    fraction: f64,
    stats: &'a EngineStats,
}

pub fn median(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        (values[n / 2 - 1] + values[n / 2]) / 2.0
    }
}

pub fn digest(ds: &DiscreteDataset) -> String {
    let mut bytes = Vec::new();
    ds.write_csv(&mut bytes).expect("in-memory write");
    Sha256::digest(&bytes)
        .iter()
        .fold(String::with_capacity(64), |mut s, b| {
            let _ = write!(s, "{b:02x}");
            s
        })
}

pub fn to_csv(rows: &[BenchRow]) -> String {
    let mut out = String::from("engine,workers,partitions,fraction,median_ms,speedup\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{:.3},{:.4}",
            r.engine, r.workers, r.partitions, r.fraction, r.median_ms, r.speedup
        );
    }
    out
}

fn validate(args: &BenchArgs) -> Result<(), Failure> {
    if args.repeat == 0 {
        return Err(Failure::usage("--repeat must be at least 1"));
    }
    if args.baseline_workers == 0 || args.workers.contains(&0) {
        return Err(Failure::usage("worker counts must be at least 1"));
    }
    if args.engines.is_empty() || args.fractions.is_empty() {
        return Err(Failure::usage(
            "--engines and --fractions need at least one value",
        ));
    }
    Ok(())
}

pub fn run(args: &BenchArgs) -> Result<(), Failure> {
    validate(args)?;
    let base = load(&args.input)?.dataset;
    eprintln!("dataset sha256 {}", digest(&base));

    // The baseline is always measured so every speedup has a reference.
    let workers: BTreeSet<usize> = args
        .workers
        .iter()
        .copied()
        .chain([args.baseline_workers])
        .collect();
    let opts = SearchOptions::default();
    let mut rows = Vec::new();
    let mut stats = Vec::new();

    for &fraction in &args.fractions {
        let ds = Arc::new(if args.scale_features {
            base.scale_features(fraction)?
        } else {
            base.scale_rows(fraction)?
        });
        for &engine in &args.engines {
            let first = rows.len();
            for &w in &workers {
                let cfg = EngineConfig {
                    layout: engine,
                    partitions: args.partitions,
                    workers: w,
                    ..EngineConfig::default()
                };
                let partitions = cfg.resolve_partitions(&ds)?;
                let mut times = Vec::with_capacity(args.repeat);
                let mut last = None;
                for _ in 0..args.repeat {
                    let start = Instant::now();
                    let sel = select_features(ds.clone(), &cfg, &opts, true)?;
                    times.push(ms(start.elapsed()));
                    last = Some(sel.stats);
                }
                rows.push(BenchRow {
                    engine,
                    workers: w,
                    partitions,
                    fraction,
                    median_ms: median(&mut times),
                    speedup: 0.0,
                });
                stats.push((engine, w, partitions, fraction, last.expect("repeat >= 1")));
            }
            let baseline = rows[first..]
                .iter()
                .find(|r| r.workers == args.baseline_workers)
                .map(|r| r.median_ms)
                .expect("baseline measured");
            for r in &mut rows[first..] {
                r.speedup = baseline / r.median_ms;
            }
        }
    }

    print!("{}", to_csv(&rows));
    if let Some(path) = &args.stats {
        let entries: Vec<StatsEntry> = stats
            .iter()
            .map(|(engine, workers, partitions, fraction, s)| StatsEntry {
                engine: *engine,
                workers: *workers,
                partitions: *partitions,
                fraction: *fraction,
                stats: s,
            })
            .collect();
        let json = serde_json::to_string_pretty(&entries).expect("stats serialize");
        std::fs::write(path, json + "\n")
            .map_err(|e| Failure::data(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn median_of_odd_and_even() {
        assert_eq!(median(&mut [3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&mut [4.0, 1.0, 3.0, 2.0]), 2.5);
        assert_eq!(median(&mut [7.0]), 7.0);
    }

    #[test]
    fn csv_layout() {
        let rows = [BenchRow {
            engine: Layout::Horizontal,
            workers: 1,
            partitions: 1,
            fraction: 2.0,
            median_ms: 12.0,
            speedup: 1.0,
        }];
        assert_eq!(
            to_csv(&rows),
            "engine,workers,partitions,fraction,median_ms,speedup\nhorizontal,1,1,2,12.000,1.0000\n"
        );
    }
}
