//! End-to-end CLI checks: wire formats round-trip through files and the
//! documented exit codes come back.

use std::path::PathBuf;
use std::process::Command;

fn ff() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ff"))
}

fn tmp(name: &str) -> PathBuf {
    let mut p = std::env::temp_dir();
    p.push(format!("ff-cli-test-{}-{name}", std::process::id()));
    p
}

#[test]
fn gen_stats_solve_verify_round_trip() {
    let graph = tmp("g.json");
    let factor = tmp("h.json");
    let contract = tmp("c.json");

    let out = ff()
        .args(["gen", "--family", "complete", "--n", "5", "--seed", "0"])
        .args(["--out", graph.to_str().unwrap()])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = std::fs::read_to_string(&graph).unwrap();
    assert!(text.starts_with(r#"{"format":"ffg-1","n":5"#));

    let out = ff().args(["stats", graph.to_str().unwrap()]).output().unwrap();
    assert!(out.status.success());
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("edge-connectivity: 4"));

    std::fs::write(
        &contract,
        r#"{"format":"ffc-1","mod":{"k":2,"res":[0,0,0,0,0]},"m":1}"#,
    )
    .unwrap();
    let out = ff()
        .args(["solve", "--graph", graph.to_str().unwrap()])
        .args(["--contract", contract.to_str().unwrap()])
        .args(["--method", "pipeline:eulerian-bounded"])
        .args(["--out", factor.to_str().unwrap()])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let ftext = std::fs::read_to_string(&factor).unwrap();
    assert!(ftext.starts_with(r#"{"format":"fff-1""#));

    let out = ff()
        .args(["verify", "--graph", graph.to_str().unwrap()])
        .args(["--factor", factor.to_str().unwrap()])
        .args(["--contract", contract.to_str().unwrap()])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "pass");

    for p in [graph, factor, contract] {
        let _ = std::fs::remove_file(p);
    }
}

#[test]
fn exit_codes() {
    // invalid input -> 4
    let out = ff()
        .args(["gen", "--family", "no-such-family", "--n", "3"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(4));

    // precondition unmet -> 2 (C4 is not 4-edge-connected)
    let graph = tmp("c4.json");
    let contract = tmp("c4c.json");
    ff().args(["gen", "--family", "cycle", "--n", "4"])
        .args(["--out", graph.to_str().unwrap()])
        .output()
        .unwrap();
    std::fs::write(
        &contract,
        r#"{"format":"ffc-1","mod":{"k":2,"res":[0,0,0,0]},"m":1}"#,
    )
    .unwrap();
    let out = ff()
        .args(["solve", "--graph", graph.to_str().unwrap()])
        .args(["--contract", contract.to_str().unwrap()])
        .args(["--method", "pipeline:eulerian-bounded"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));

    // verify failure -> 3
    let factor = tmp("empty.json");
    std::fs::write(&factor, r#"{"format":"fff-1","edges":[]}"#).unwrap();
    let out = ff()
        .args(["verify", "--graph", graph.to_str().unwrap()])
        .args(["--factor", factor.to_str().unwrap()])
        .args(["--contract", contract.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));

    for p in [graph, contract, factor] {
        let _ = std::fs::remove_file(p);
    }
}

#[test]
fn audit_writes_report_and_signals_findings() {
    let report = tmp("report.json");
    // expected K4 finding makes the exit code 3
    let out = ff()
        .args(["audit", "--theorem", "bi-index-regular", "--seed", "7"])
        .args(["--out", report.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    let text = std::fs::read_to_string(&report).unwrap();
    assert!(text.contains(r#""format": "ffr-1""#));
    assert!(text.contains("odd-bound-recorded"));

    let out = ff()
        .args(["audit", "--theorem", "eulerian-bounded", "--seed", "7"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let _ = std::fs::remove_file(report);
}

#[test]
fn audit_accepts_custom_corpus() {
    let spec = tmp("corpus.json");
    std::fs::write(
        &spec,
        r#"{"instances":[
            {"family":"dipole","params":{"width":"4"}},
            {"family":"complete","params":{"n":"5"}},
            {"family":"circulant","params":{"n":"7","offsets":"1+2"}}
        ]}"#,
    )
    .unwrap();
    let out = ff()
        .args(["audit", "--theorem", "eulerian-bounded", "--seed", "7"])
        .args(["--corpus", spec.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let msg = String::from_utf8_lossy(&out.stderr);
    assert!(msg.contains("3/3"), "unexpected summary: {msg}");

    // parameterized audits refuse custom corpora
    let out = ff()
        .args(["audit", "--theorem", "gen-modk"])
        .args(["--corpus", spec.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(4));
    let _ = std::fs::remove_file(spec);
}

#[test]
fn capacity_exit_code() {
    // 28 edges exceeds the 20-edge brute-force cap; the structural clause
    // forces the oracle path
    let graph = tmp("k8.json");
    let contract = tmp("k8c.json");
    ff().args(["gen", "--family", "complete", "--n", "8"])
        .args(["--out", graph.to_str().unwrap()])
        .output()
        .unwrap();
    std::fs::write(&contract, r#"{"format":"ffc-1","m":1}"#).unwrap();
    let out = ff()
        .args(["solve", "--graph", graph.to_str().unwrap()])
        .args(["--contract", contract.to_str().unwrap()])
        .args(["--method", "exact"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(5));
    for p in [graph, contract] {
        let _ = std::fs::remove_file(p);
    }
}

#[test]
fn tour_method_with_contract_slacks() {
    let graph = tmp("tri.json");
    let contract = tmp("tric.json");
    std::fs::write(
        &graph,
        r#"{"format":"ffg-1","n":3,"edges":[[0,1],[1,2],[2,0]]}"#,
    )
    .unwrap();
    // forward orientation is the directed 3-cycle; force edge 0 in
    std::fs::write(
        &contract,
        r#"{"format":"ffc-1","include":[0],"s":[0,0,0],"s0":[0,0,0]}"#,
    )
    .unwrap();
    let out = ff()
        .args(["solve", "--graph", graph.to_str().unwrap()])
        .args(["--contract", contract.to_str().unwrap()])
        .args(["--method", "tour"])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains(r#"{"format":"fff-1","edges":[0,2]}"#));
    for p in [graph, contract] {
        let _ = std::fs::remove_file(p);
    }
}
