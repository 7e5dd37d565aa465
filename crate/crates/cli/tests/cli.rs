use std::path::Path;
use std::process::{Command, Output};

fn berge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_berge"))
        .args(args)
        .env_remove("BERGE_NODE_BUDGET")
        .env_remove("BERGE_TUPLE_BUDGET")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

const C4: &str = "2 4 4\n0 1\n1 2\n2 3\n0 3\n";

#[test]
fn generate_writes_graph_and_stats() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("g.txt");
    let stats = dir.path().join("s.json");
    let o = berge(&[
        "generate",
        "-k",
        "2",
        "-r",
        "3",
        "-q",
        "3",
        "--seed",
        "1",
        "--out",
        out.to_str().unwrap(),
        "--stats",
        stats.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&stats).unwrap()).unwrap();
    assert_eq!(json["expected_edges"], 27);
    assert_eq!(json["params"]["s"], 3);
    assert_eq!(json["params"]["d"], 10);
    assert_eq!(json["vertex_count"], 27);
    assert!(json["timings"]["build_ms"].is_u64());
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("3 27 "));
    assert_eq!(
        json["edge_count"],
        text.lines()
            .next()
            .unwrap()
            .split(' ')
            .nth(2)
            .unwrap()
            .parse::<u64>()
            .unwrap()
    );

    let again = dir.path().join("g2.txt");
    let o = berge(&[
        "generate",
        "-k",
        "2",
        "-r",
        "3",
        "-q",
        "3",
        "--seed",
        "1",
        "--out",
        again.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    assert_eq!(std::fs::read(&out).unwrap(), std::fs::read(&again).unwrap());
}

#[test]
fn generate_rejects_composite_q() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("g.txt");
    let o = berge(&[
        "generate",
        "-k",
        "2",
        "-r",
        "3",
        "-q",
        "4",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("not a prime"));
    assert!(!out.exists());
}

#[test]
fn generate_respects_tuple_budget() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("g.txt");
    let o = Command::new(env!("CARGO_BIN_EXE_berge"))
        .args([
            "generate",
            "-k",
            "2",
            "-r",
            "3",
            "-q",
            "5",
            "--out",
            out.to_str().unwrap(),
        ])
        .env("BERGE_TUPLE_BUDGET", "1000")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("15625"));
}

#[test]
fn detect_reports_witness_and_agrees_with_oracle() {
    let dir = tempfile::tempdir().unwrap();
    let c4 = write(dir.path(), "c4.txt", C4);
    let o = berge(&["detect", &c4, "-k", "2", "-t", "2", "--oracle"]);
    assert!(o.status.success());
    assert_eq!(
        stdout(&o),
        "present x=0 y=2\npath 0 1 2 edges 0 1\npath 0 3 2 edges 3 2\noracle agrees\n"
    );
    let empty = write(dir.path(), "empty.txt", "3 6 0\n");
    let o = berge(&["detect", &empty, "-k", "2", "-t", "2", "--oracle"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "absent\noracle agrees\n");
}

#[test]
fn detect_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let c4 = write(dir.path(), "c4.txt", C4);
    let o = Command::new(env!("CARGO_BIN_EXE_berge"))
        .args(["detect", &c4, "-k", "2", "-t", "2"])
        .env("BERGE_NODE_BUDGET", "1")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(stdout(&o), "inconclusive\n");

    let big = write(dir.path(), "big.txt", "2 12 1\n0 11\n");
    let o = berge(&["detect", &big, "-k", "2", "-t", "2", "--oracle"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("too large"));

    let bad = write(dir.path(), "bad.txt", "2 4 1\n0 9\n");
    let o = berge(&["detect", &bad, "-k", "2", "-t", "2"]);
    assert_eq!(o.status.code(), Some(2));

    let o = berge(&["detect"]);
    assert_eq!(o.status.code(), Some(1));
    let o = berge(&["nonsense"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn reduce_prints_bound() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "h.txt", "3 4 3\n0 1 2\n0 1 2\n1 2 3\n");
    let out = dir.path().join("g.txt");
    let o = berge(&[
        "reduce",
        &input,
        "-m",
        "2",
        "-k",
        "2",
        "-t",
        "2",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(stdout(&o), "max multiplicity 1, bound 21\n");
    assert_eq!(
        std::fs::read_to_string(&out).unwrap(),
        "2 4 3\n0 1\n0 2\n1 2\nsources\n0 1 2\n"
    );
    let o = berge(&["reduce", &input, "-m", "2"]);
    assert_eq!(stdout(&o), "2 4 3\n0 1\n0 2\n1 2\nsources\n0 1 2\n");
    let o = berge(&["reduce", &input, "-m", "3"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn census_and_repair_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("g.txt");
    let o = berge(&[
        "--seed",
        "2",
        "generate",
        "-k",
        "2",
        "-r",
        "3",
        "-q",
        "5",
        "--out",
        graph.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let g = graph.to_str().unwrap();
    let o = berge(&["census", g, "-k", "2", "--cap", "50"]);
    assert!(o.status.success());
    let json: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let hist = json["summary"]["histogram"].as_object().unwrap();
    let total: u64 = hist.values().map(|v| v.as_u64().unwrap()).sum();
    assert_eq!(total, 75 * 74 / 2);
    assert_eq!(json["entries"].as_array().unwrap().len(), 75 * 74 / 2);

    let repaired = dir.path().join("r.txt");
    let log = dir.path().join("log.json");
    let o = berge(&[
        "repair",
        g,
        "-k",
        "2",
        "--out",
        repaired.to_str().unwrap(),
        "--log",
        log.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).ends_with("0 bad pairs remaining\n"));
    let o = berge(&["repair", g, "-k", "3", "--out", repaired.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("--threshold"));
}
