use std::path::Path;
use std::process::{Command, Output};

use cfs_core::{generate_synthetic, SyntheticConfig};
use serde_json::Value;

fn cfs(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cfs"))
        .args(args)
        .output()
        .expect("spawn cfs")
}

fn json(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

/// Numeric features with a class-copy feature `key` at column 2.
fn numeric_csv(dir: &Path) -> String {
    let mut text = String::from("u,v,key,w,label\n");
    for i in 0..120 {
        let label = ["yes", "no", "maybe"][i % 3];
        let key = (i % 3) as f64 * 10.0 + (i % 7) as f64 * 0.1;
        let u = ((i * 37) % 101) as f64 / 7.0;
        let v = (i % 2) as f64;
        let w = ((i * 13) % 17) as f64 + if i % 3 == 0 { 0.5 } else { 0.0 };
        text.push_str(&format!("{u},{v},{key},{w},{label}\n"));
    }
    write(dir, "numeric.csv", &text)
}

#[test]
fn missing_class_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let input = numeric_csv(dir.path());
    let out = cfs(&["select", "--input", &input]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--class"));
    assert_eq!(
        cfs(&["select", "--input", &input, "--class", "label", "--engine", "diagonal"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(cfs(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(cfs(&["--help"]).status.code(), Some(0));
}

#[test]
fn bad_data_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let ragged = write(dir.path(), "ragged.csv", "a,b,c\n1,2,x\n3,4\n");
    let out = cfs(&["select", "--input", &ragged, "--class", "c"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));

    let one_class = write(dir.path(), "one.csv", "a,c\n1,x\n2,x\n");
    assert_eq!(
        cfs(&["select", "--input", &one_class, "--class", "c"])
            .status
            .code(),
        Some(2)
    );
    let missing = dir.path().join("nope.csv");
    let out = cfs(&[
        "select",
        "--input",
        missing.to_str().unwrap(),
        "--class",
        "c",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let input = numeric_csv(dir.path());
    assert_eq!(
        cfs(&["select", "--input", &input, "--class", "nope"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn too_many_partitions_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let input = numeric_csv(dir.path());
    let out = cfs(&[
        "select",
        "--input",
        &input,
        "--class",
        "label",
        "--engine",
        "vertical",
        "--partitions",
        "9",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn selects_the_class_copy() {
    let dir = tempfile::tempdir().unwrap();
    let input = numeric_csv(dir.path());
    for engine in ["sequential", "horizontal", "vertical"] {
        let report = json(&cfs(&[
            "select", "--input", &input, "--class", "label", "--engine", engine,
        ]));
        assert_eq!(report["selected"][0], "key", "{engine}");
        assert_eq!(report["indices"][0], 2);
        assert_eq!(report["config"]["engine"], engine);
        for phase in ["load", "discretize", "search", "post_process"] {
            assert!(report["timings_ms"][phase].as_f64().unwrap() >= 0.0);
        }
    }
}

#[test]
fn engines_agree_byte_for_byte_on_selected() {
    let dir = tempfile::tempdir().unwrap();
    let ds = generate_synthetic(&SyntheticConfig::new(900, 25, 3).relevant(5, 3)).unwrap();
    let path = dir.path().join("syn.csv");
    ds.write_csv_file(&path).unwrap();
    let input = path.to_str().unwrap();
    let selected = |engine: &str| {
        let r = json(&cfs(&[
            "select",
            "--input",
            input,
            "--class",
            "class",
            "--engine",
            engine,
            "--workers",
            "3",
        ]));
        serde_json::to_vec(&r["selected"]).unwrap()
    };
    assert_eq!(selected("horizontal"), selected("vertical"));
    assert_eq!(selected("horizontal"), selected("sequential"));
}

#[test]
fn discretize_sidecar_lists_cut_points() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "in.csv", "x,label\n1,A\n2,A\n3,B\n4,B\n");
    let output = dir.path().join("coded.csv");
    let out = cfs(&[
        "discretize",
        "--input",
        &input,
        "--class",
        "label",
        "--output",
        output.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert_eq!(
        std::fs::read_to_string(&output).unwrap(),
        "x,label\n0,0\n0,0\n1,1\n1,1\n"
    );
    let sidecar: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("coded.json")).unwrap())
            .unwrap();
    assert_eq!(
        sidecar["columns"][0]["cut_points"],
        serde_json::json!([2.5])
    );
    assert_eq!(sidecar["columns"][0]["arity"], 2);
    assert_eq!(sidecar["class_column"], "label");
}

#[test]
fn all_categorical_input_has_no_cut_points() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(
        dir.path(),
        "cat.csv",
        "colour,size,label\nred,s,A\nblue,m,B\nred,l,A\ngreen,s,B\n",
    );
    let output = dir.path().join("coded.csv");
    assert!(cfs(&[
        "discretize",
        "--input",
        &input,
        "--class",
        "label",
        "--output",
        output.to_str().unwrap()
    ])
    .status
    .success());
    let sidecar: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("coded.json")).unwrap())
            .unwrap();
    for col in sidecar["columns"].as_array().unwrap() {
        assert_eq!(col["kind"], "categorical");
        assert!(col
            .get("cut_points")
            .is_none_or(|c| c.as_array().unwrap().is_empty()));
    }
    assert_eq!(
        sidecar["columns"][0]["categories"],
        serde_json::json!(["red", "blue", "green"])
    );
}

#[test]
fn coded_output_round_trips_through_select() {
    let dir = tempfile::tempdir().unwrap();
    let input = numeric_csv(dir.path());
    let coded = dir.path().join("coded.csv");
    assert!(cfs(&[
        "discretize",
        "--input",
        &input,
        "--class",
        "label",
        "--output",
        coded.to_str().unwrap()
    ])
    .status
    .success());
    let direct = json(&cfs(&[
        "select",
        "--input",
        &input,
        "--class",
        "label",
        "--no-timings",
    ]));
    let again = json(&cfs(&[
        "select",
        "--input",
        coded.to_str().unwrap(),
        "--class",
        "label",
        "--discrete",
        "--no-timings",
    ]));
    assert_eq!(direct, again);
}

#[test]
fn class_by_index_and_headerless_input() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "nh.csv", "1,a,A\n2,a,A\n3,b,B\n4,b,B\n");
    let report = json(&cfs(&[
        "select",
        "--input",
        &input,
        "--class",
        "2",
        "--no-header",
    ]));
    assert_eq!(report["selected"][0], "col0");
}

#[test]
fn trace_and_text_output() {
    let dir = tempfile::tempdir().unwrap();
    let input = numeric_csv(dir.path());
    let trace = dir.path().join("trace.tsv");
    let out = cfs(&[
        "select",
        "--input",
        &input,
        "--class",
        "label",
        "--output",
        "text",
        "--trace",
        trace.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("selected\t2\tkey"), "{text}");
    let trace = std::fs::read_to_string(trace).unwrap();
    let mut lines = trace.lines();
    assert_eq!(
        lines.next(),
        Some("iteration\tsubset\tnc\tbest_merit\tfails")
    );
    assert_eq!(
        lines
            .next()
            .unwrap()
            .split('\t')
            .take(3)
            .collect::<Vec<_>>(),
        ["1", "{}", "4"]
    );
}

#[test]
fn bench_reports_medians_and_speedups() {
    let dir = tempfile::tempdir().unwrap();
    let input = numeric_csv(dir.path());
    let stats = dir.path().join("stats.json");
    let out = cfs(&[
        "bench",
        "--input",
        &input,
        "--class",
        "label",
        "--engines",
        "horizontal,vertical",
        "--workers",
        "2,4",
        "--fractions",
        "1.0,2.0",
        "--repeat",
        "3",
        "--baseline-workers",
        "1",
        "--stats",
        stats.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let csv = String::from_utf8(out.stdout).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next(),
        Some("engine,workers,partitions,fraction,median_ms,speedup")
    );
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    // Baseline worker count 1 is measured even though it was not listed.
    assert_eq!(rows.len(), 2 * 2 * 3);
    for r in &rows {
        let speedup: f64 = r[5].parse().unwrap();
        assert!(speedup > 0.0);
        if r[1] == "1" {
            assert_eq!(speedup, 1.0);
        }
    }
    assert!(String::from_utf8_lossy(&out.stderr).contains("sha256"));

    // Fraction 2.0 doubles the rows each horizontal round reads.
    let stats: Value = serde_json::from_str(&std::fs::read_to_string(stats).unwrap()).unwrap();
    for entry in stats.as_array().unwrap() {
        if entry["engine"] == "horizontal" {
            let rounds = entry["stats"]["rounds"].as_u64().unwrap();
            let scanned = entry["stats"]["rows_scanned"].as_u64().unwrap();
            let fraction = entry["fraction"].as_f64().unwrap();
            assert_eq!(scanned, rounds * (120.0 * fraction) as u64);
        }
    }
}

#[test]
fn bench_scales_features() {
    let dir = tempfile::tempdir().unwrap();
    let input = numeric_csv(dir.path());
    let stats = dir.path().join("stats.json");
    let out = cfs(&[
        "bench",
        "--input",
        &input,
        "--class",
        "label",
        "--engines",
        "vertical",
        "--fractions",
        "2.0",
        "--repeat",
        "1",
        "--scale-features",
        "--stats",
        stats.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let csv = String::from_utf8(out.stdout).unwrap();
    // Vertical defaults to one partition per feature: 4 features doubled.
    assert!(
        csv.lines().nth(1).unwrap().starts_with("vertical,1,8,2,"),
        "{csv}"
    );
    assert_eq!(
        cfs(&["bench", "--input", &input, "--class", "label", "--repeat", "0"])
            .status
            .code(),
        Some(1)
    );
}
