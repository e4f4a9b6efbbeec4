use std::fmt::Write as _;
use std::sync::Arc;

use cfs_core::{select_features, EngineConfig, Layout, SearchOptions};
use serde::Serialize;

use crate::args::{OutputFormat, SelectArgs};
use crate::input::{load, ms};
use crate::Failure;

#[derive(Debug, Serialize)]
pub struct RunReport {
    pub selected: Vec<String>,
    pub indices: Vec<usize>,
    pub merit: f64,
    pub pairs_computed: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings_ms: Option<Timings>,
    pub config: ConfigEcho,
}

#[derive(Debug, Serialize)]
pub struct Timings {
    pub load: f64,
    pub discretize: f64,
    pub search: f64,
    pub post_process: f64,
}

/// Settings that determine the result. The worker count is left out on purpose:
/// it never changes the outcome.
#[derive(Debug, Serialize)]
pub struct ConfigEcho {
    pub engine: Layout,
    pub partitions: usize,
    pub locally_predictive: bool,
    pub max_fails: usize,
    pub queue_capacity: usize,
}

pub fn run(args: &SelectArgs) -> Result<(), Failure> {
    let loaded = load(&args.input)?;
    let ds = Arc::new(loaded.dataset);
    let engine = EngineConfig {
        layout: args.engine,
        partitions: args.partitions,
        workers: args.workers,
        ..EngineConfig::default()
    };
    let partitions = engine.resolve_partitions(&ds)?;
    let opts = SearchOptions {
        max_fails: args.max_fails,
        queue_capacity: args.queue_capacity,
        eager: false,
        trace: args.trace.is_some(),
    };
    let locally_predictive = !args.no_locally_predictive;
    let sel = select_features(ds.clone(), &engine, &opts, locally_predictive)?;

    if let Some(path) = &args.trace {
        let mut text = String::from("iteration\tsubset\tnc\tbest_merit\tfails\n");
        text.push_str(&sel.search.trace_tsv());
        std::fs::write(path, text)
            .map_err(|e| Failure::data(format!("cannot write {}: {e}", path.display())))?;
    }

    let indices = sel.subset.features().to_vec();
    let report = RunReport {
        selected: indices.iter().map(|&f| ds.name(f).to_string()).collect(),
        indices,
        merit: sel.subset.merit(),
        pairs_computed: sel.stats.pairs_computed,
        timings_ms: (!args.no_timings).then(|| Timings {
            load: ms(loaded.load_time),
            discretize: ms(loaded.discretize_time),
            search: ms(sel.search_time),
            post_process: ms(sel.post_time),
        }),
        config: ConfigEcho {
            engine: args.engine,
            partitions,
            locally_predictive,
            max_fails: args.max_fails,
            queue_capacity: args.queue_capacity,
        },
    };
    match args.output {
        OutputFormat::Json => println!(
            "{}",
            serde_json::to_string_pretty(&report).expect("report serializes")
        ),
        OutputFormat::Text => print!("{}", render_text(&report)),
    }
    Ok(())
}

fn render_text(r: &RunReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "merit\t{}", r.merit);
    let _ = writeln!(out, "pairs_computed\t{}", r.pairs_computed);
    let _ = writeln!(
        out,
        "config\tengine={} partitions={} locally_predictive={} max_fails={} queue_capacity={}",
        r.config.engine,
        r.config.partitions,
        r.config.locally_predictive,
        r.config.max_fails,
        r.config.queue_capacity
    );
    if let Some(t) = &r.timings_ms {
        let _ = writeln!(
            out,
            "timings_ms\tload={:.3} discretize={:.3} search={:.3} post_process={:.3}",
            t.load, t.discretize, t.search, t.post_process
        );
    }
    for (name, idx) in r.selected.iter().zip(&r.indices) {
        let _ = writeln!(out, "selected\t{idx}\t{name}");
    }
    out
}
