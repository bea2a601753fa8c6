//! Black-box tests of the `cutrank` binary: exit codes, output formats,
//! and determinism.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cutrank"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

const EXAMPLE_EL: &str = "6 6\n0 3\n0 4\n1 3\n1 4\n1 5\n2 5\n";

fn write_example(dir: &Path) -> std::path::PathBuf {
    let path = dir.join("example.el");
    std::fs::write(&path, EXAMPLE_EL).unwrap();
    path
}

#[test]
fn rank_of_example_partition() {
    let dir = tempfile::tempdir().unwrap();
    let g = write_example(dir.path());
    let out = run(&["rank", g.to_str().unwrap(), "--partition", "0,1,2"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "2");
}

#[test]
fn rank_is_symmetric_in_the_partition() {
    let dir = tempfile::tempdir().unwrap();
    let g = write_example(dir.path());
    let a = run(&["rank", g.to_str().unwrap(), "--partition", "0,1,2"]);
    let b = run(&["rank", g.to_str().unwrap(), "--partition", "3,4,5"]);
    assert_eq!(stdout(&a), stdout(&b));
}

#[test]
fn gen_grid_writes_canonical_edge_list() {
    let out = run(&["gen", "--family", "grid", "--rows", "3", "--cols", "3"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("9 12\n"));
    assert_eq!(text.lines().count(), 13);
}

#[test]
fn gen_er_is_deterministic() {
    let args = ["gen", "--family", "er", "--n", "30", "--c", "2", "--seed", "7"];
    assert_eq!(stdout(&run(&args)), stdout(&run(&args)));
}

#[test]
fn gen_qaoa_from_hamiltonian_json() {
    let dir = tempfile::tempdir().unwrap();
    let ham = dir.path().join("h.json");
    std::fs::write(
        &ham,
        r#"{"num_qubits": 6, "terms": [
            {"qubits": [0,1,2]}, {"qubits": [0,3,5]}, {"qubits": [1,2,4]},
            {"qubits": [3,4,5]}, {"qubits": [2,3,4]}, {"qubits": [2,3,5]}
        ]}"#,
    )
    .unwrap();
    let out = run(&["gen", "--family", "qaoa", "--hamiltonian", ham.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(stdout(&out).starts_with("12 18\n"));
}

#[test]
fn anneal_finds_grid_optimum_and_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g.el");
    let gen = run(&["gen", "--family", "grid", "--rows", "3", "--cols", "3", "--out", g.to_str().unwrap()]);
    assert!(gen.status.success());
    let csv = dir.path().join("runs.csv");
    let args = [
        "anneal", g.to_str().unwrap(),
        "--size", "4", "--restarts", "10",
        "--out", csv.to_str().unwrap(),
    ];
    let a = run(&args);
    assert!(a.status.success());
    assert!(stdout(&a).contains("best rank 3"));
    let first = std::fs::read_to_string(&csv).unwrap();
    assert!(first.starts_with("schema_version,graph,n_vertices,size,backend,"));
    assert_eq!(first.lines().count(), 11); // header + one row per restart
    let b = run(&args);
    assert_eq!(stdout(&a), stdout(&b));
    assert_eq!(
        strip_wall_ms(&first),
        strip_wall_ms(&std::fs::read_to_string(&csv).unwrap())
    );
}

/// Drop the trailing wall_ms column, which is timing noise.
fn strip_wall_ms(csv: &str) -> Vec<String> {
    csv.lines()
        .map(|l| l.rsplit_once(',').unwrap().0.to_string())
        .collect()
}

#[test]
fn anneal_backends_agree_on_best_rank() {
    let dir = tempfile::tempdir().unwrap();
    let g = write_example(dir.path());
    let inc = run(&["anneal", g.to_str().unwrap(), "--size", "3", "--backend", "incremental"]);
    let nai = run(&["anneal", g.to_str().unwrap(), "--size", "3", "--backend", "naive"]);
    assert_eq!(stdout(&inc), stdout(&nai));
}

#[test]
fn distribute_writes_plan_files() {
    let dir = tempfile::tempdir().unwrap();
    let g = write_example(dir.path());
    let prefix = dir.path().join("plan");
    let out = run(&[
        "distribute", g.to_str().unwrap(),
        "--partition", "0,1,2",
        "--out", prefix.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("rank 2"));
    assert!(stdout(&out).contains("recovery verified: true"));
    let el = std::fs::read_to_string(dir.path().join("plan.el")).unwrap();
    assert!(el.starts_with("10 9\n")); // 6 originals + 4 ancillas, 9 edges
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("plan.json")).unwrap())
            .unwrap();
    assert_eq!(json["rank"], 2);
    assert_eq!(json["pairs"].as_array().unwrap().len(), 2);
    assert_eq!(json["recovery_sequence"].as_array().unwrap().len(), 6);
}

#[test]
fn bench_emits_a_row_per_backend() {
    let out = run(&["bench", "--n-range", "4..4", "--reps", "1"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("schema_version,family,side,"));
    assert_eq!(text.lines().count(), 3); // header + incremental + naive
}

#[test]
fn experiment_sparse_sweep_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"ns": [10], "instances": 3}"#).unwrap();
    let out = run(&[
        "experiment", "--name", "sparse-sweep",
        "--config", cfg.to_str().unwrap(),
        "--out", dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let csv = std::fs::read_to_string(dir.path().join("sparse_sweep.csv")).unwrap();
    assert!(csv.starts_with("schema_version,experiment,n_vertices,"));
    assert_eq!(csv.lines().count(), 2);
}

#[test]
fn exit_codes_distinguish_usage_and_io_errors() {
    // usage: missing required choice
    let dir = tempfile::tempdir().unwrap();
    let g = write_example(dir.path());
    let usage = run(&["rank", g.to_str().unwrap()]);
    assert_eq!(usage.status.code(), Some(1));
    // usage: unknown flag value
    let bad_backend = run(&["anneal", g.to_str().unwrap(), "--size", "2", "--backend", "magic"]);
    assert_eq!(bad_backend.status.code(), Some(1));
    // usage: malformed partition
    let bad_part = run(&["rank", g.to_str().unwrap(), "--partition", "0,0"]);
    assert_eq!(bad_part.status.code(), Some(1));
    // clap-level usage error
    let unknown = run(&["frobnicate"]);
    assert_eq!(unknown.status.code(), Some(1));
    // I/O: nonexistent file
    let missing = run(&["rank", "/nonexistent/g.el", "--partition", "0"]);
    assert_eq!(missing.status.code(), Some(2));
    // parse: corrupt edge list
    let corrupt = dir.path().join("bad.el");
    std::fs::write(&corrupt, "2 1\n5 9\n").unwrap();
    let parse = run(&["rank", corrupt.to_str().unwrap(), "--partition", "0"]);
    assert_eq!(parse.status.code(), Some(2));
    // help exits 0
    let help = run(&["--help"]);
    assert_eq!(help.status.code(), Some(0));
}
