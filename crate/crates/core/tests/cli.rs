//! End-to-end tests of the `convcode` binary: artifact round-trips, exit
//! codes, and deterministic output.

use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_convcode"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn tmp(name: &str) -> PathBuf {
    let mut p = std::env::temp_dir();
    p.push(format!("convcode-test-{}-{name}", std::process::id()));
    p
}

#[test]
fn construct_convert_verify_subgroup_instance() {
    let pair = tmp("ex1.json");
    let out = run(&[
        "construct",
        "--family",
        "subgroup-mult-B",
        "--k",
        "5",
        "--lambda",
        "2",
        "--r",
        "4",
        "--q",
        "13",
        "--out",
        pair.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&pair).unwrap()).unwrap();
    assert_eq!(doc["kind"], "scalar");
    assert_eq!(doc["family"], "subgroup-mult");
    assert_eq!(doc["variant"], "B");
    assert_eq!(doc["sets"]["y"], serde_json::json!([1, 12, 0]));
    assert_eq!(
        doc["sets"]["x_blocks"],
        serde_json::json!([[2, 4, 8, 3, 6], [11, 9, 5, 10, 7]])
    );

    let conv = run(&[
        "convert",
        "--pair",
        pair.to_str().unwrap(),
        "--random",
        "--seed",
        "9",
    ]);
    assert!(conv.status.success());
    let stderr = String::from_utf8_lossy(&conv.stderr);
    assert!(stderr.contains("OPTIMAL"), "stderr: {stderr}");
    let body: Value = serde_json::from_slice(&conv.stdout).unwrap();
    assert_eq!(body["trace"]["reads"], 8);
    assert_eq!(body["trace"]["writes"], 4);
    assert_eq!(body["trace"]["per_symbol"], true);
    assert_eq!(body["optimal"], true);

    let verify = run(&["verify", "--pair", pair.to_str().unwrap()]);
    assert!(verify.status.success());
    let _ = std::fs::remove_file(&pair);
}

#[test]
fn emitted_json_roundtrips_unchanged() {
    let pair = tmp("roundtrip.json");
    let out = run(&[
        "construct",
        "--family",
        "grs",
        "--k",
        "4",
        "--ri",
        "3",
        "--rf",
        "2",
        "--lambda",
        "2",
        "--q",
        "13",
        "--out",
        pair.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&pair).unwrap();
    let loaded: convcode::json::PairFileJson = serde_json::from_str(&text).unwrap();
    let reemitted = serde_json::to_string_pretty(&loaded).unwrap();
    assert_eq!(text, reemitted);
    let _ = std::fs::remove_file(&pair);
}

#[test]
fn fixed_seed_gives_identical_reports() {
    let pair = tmp("det.json");
    assert!(run(&[
        "construct",
        "--family",
        "piggyback",
        "--k",
        "8",
        "--lambda",
        "2",
        "--ri",
        "2",
        "--rf",
        "6",
        "--q",
        "23",
        "--out",
        pair.to_str().unwrap(),
    ])
    .status
    .success());

    let (a, b) = (tmp("det-a.json"), tmp("det-b.json"));
    for path in [&a, &b] {
        let out = run(&[
            "convert",
            "--pair",
            pair.to_str().unwrap(),
            "--random",
            "--seed",
            "1234",
            "--out",
            path.to_str().unwrap(),
        ]);
        assert!(out.status.success());
        let stderr = String::from_utf8_lossy(&out.stderr);
        assert!(
            stderr.contains("read 44/44, write 18/18, OPTIMAL"),
            "stderr: {stderr}"
        );
    }
    assert_eq!(
        std::fs::read(&a).unwrap(),
        std::fs::read(&b).unwrap(),
        "same seed must give byte-identical output"
    );
    for p in [pair, a, b] {
        let _ = std::fs::remove_file(p);
    }
}

#[test]
fn default_flag_reads_all_message_disks() {
    let pair = tmp("default.json");
    assert!(run(&[
        "construct",
        "--family",
        "subgroup-mult-B",
        "--k",
        "5",
        "--lambda",
        "2",
        "--r",
        "4",
        "--q",
        "13",
        "--out",
        pair.to_str().unwrap(),
    ])
    .status
    .success());
    let out = run(&[
        "convert",
        "--pair",
        pair.to_str().unwrap(),
        "--random",
        "--seed",
        "5",
        "--default",
    ]);
    assert!(out.status.success());
    let body: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(body["trace"]["reads"], 10); // lambda * k_i
    assert_eq!(body["trace"]["writes"], 4);
    let _ = std::fs::remove_file(&pair);
}

#[test]
fn precondition_violations_exit_1() {
    // variant B demands lambda <= r - 2
    let out = run(&[
        "construct",
        "--family",
        "subgroup-mult-B",
        "--k",
        "5",
        "--lambda",
        "4",
        "--r",
        "4",
        "--q",
        "13",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("lambda"), "diagnostic names the violation: {stderr}");
}

#[test]
fn tampered_matrix_fails_verification_with_exit_2() {
    let pair = tmp("tampered.json");
    assert!(run(&[
        "construct",
        "--family",
        "subgroup-mult-B",
        "--k",
        "5",
        "--lambda",
        "2",
        "--r",
        "4",
        "--q",
        "13",
        "--out",
        pair.to_str().unwrap(),
    ])
    .status
    .success());

    let mut doc: Value = serde_json::from_str(&std::fs::read_to_string(&pair).unwrap()).unwrap();
    let entry = &mut doc["initial"]["matrix"]["entries"][0][0];
    *entry = Value::from((entry.as_u64().unwrap() + 1) % 13);
    std::fs::write(&pair, serde_json::to_string_pretty(&doc).unwrap()).unwrap();

    let out = run(&["verify", "--pair", pair.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("FAIL mds-initial"), "stdout: {stdout}");
    let _ = std::fs::remove_file(&pair);
}

#[test]
fn auto_field_selects_smallest_admissible() {
    let pair = tmp("auto.json");
    let out = run(&[
        "construct",
        "--family",
        "grs-doubly-ext",
        "--k",
        "4",
        "--ri",
        "3",
        "--rf",
        "3",
        "--lambda",
        "2",
        "--q",
        "auto",
        "--out",
        pair.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("selected q = 11"), "stderr: {stderr}");
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&pair).unwrap()).unwrap();
    assert_eq!(doc["field"]["p"], 11);
    assert_eq!(doc["field_bound"], 10);
    let _ = std::fs::remove_file(&pair);
}

#[test]
fn grs_pair_verifies_with_per_symbol_false() {
    let pair = tmp("grs-verify.json");
    assert!(run(&[
        "construct",
        "--family",
        "grs",
        "--k",
        "4",
        "--ri",
        "3",
        "--rf",
        "2",
        "--lambda",
        "2",
        "--q",
        "13",
        "--out",
        pair.to_str().unwrap(),
    ])
    .status
    .success());
    let report = tmp("grs-report.json");
    let out = run(&[
        "verify",
        "--pair",
        pair.to_str().unwrap(),
        "--out",
        report.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(doc["passed"], true);
    let access = doc["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == "access-optimal")
        .unwrap();
    assert!(access["detail"]
        .as_str()
        .unwrap()
        .contains("per_symbol = false"));
    for p in [pair, report] {
        let _ = std::fs::remove_file(p);
    }
}

#[test]
fn sweep_handles_empty_and_infeasible_cells() {
    let out = run(&["sweep", "--k", "", "--lambda", "2", "--r", "4"]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert_eq!(text.trim().lines().count(), 1, "header only: {text}");

    let out = run(&["sweep", "--k", "4-6", "--lambda", "2,3", "--r", "3,4"]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert_eq!(text.trim().lines().count(), 1 + 3 * 2 * 2);
    // additive subgroup with r = 3 needs q a power of 3: 27 for k = 4
    let row: Vec<&str> = text
        .lines()
        .find(|l| l.starts_with("4,2,3,"))
        .unwrap()
        .split(',')
        .collect();
    let header: Vec<&str> = text.lines().next().unwrap().split(',').collect();
    let col = header
        .iter()
        .position(|h| *h == "min_q[subgroup-add]")
        .unwrap();
    assert_eq!(row[col], "27");
    // triply-extended is r = 3 only
    let col = header
        .iter()
        .position(|h| *h == "min_q[grs-triply-ext]")
        .unwrap();
    let row4: Vec<&str> = text
        .lines()
        .find(|l| l.starts_with("4,2,4,"))
        .unwrap()
        .split(',')
        .collect();
    assert_eq!(row4[col], "n/a");
}

#[test]
fn messages_file_drives_conversion() {
    let pair = tmp("msg-pair.json");
    assert!(run(&[
        "construct",
        "--family",
        "grs",
        "--k",
        "4",
        "--ri",
        "3",
        "--rf",
        "2",
        "--lambda",
        "2",
        "--q",
        "13",
        "--out",
        pair.to_str().unwrap(),
    ])
    .status
    .success());
    let messages = tmp("msgs.json");
    std::fs::write(
        &messages,
        serde_json::json!({"messages": [[1, 2, 3, 4], [5, 6, 7, 8]]}).to_string(),
    )
    .unwrap();
    let out = run(&[
        "convert",
        "--pair",
        pair.to_str().unwrap(),
        "--messages",
        messages.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let body: Value = serde_json::from_slice(&out.stdout).unwrap();
    let symbols = body["final"]["symbols"].as_array().unwrap();
    let prefix: Vec<u64> = symbols[..8].iter().map(|v| v.as_u64().unwrap()).collect();
    assert_eq!(prefix, vec![1, 2, 3, 4, 5, 6, 7, 8]);
    for p in [pair, messages] {
        let _ = std::fs::remove_file(p);
    }
}
