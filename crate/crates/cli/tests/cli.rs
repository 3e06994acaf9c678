//! End-to-end checks of the command-line surface: file formats, exit
//! codes, and byte-identical output across thread counts.

use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_klcells")).args(args).output().expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn write_temp(name: &str, contents: &str) -> String {
    let path = std::env::temp_dir().join(format!("klcells-test-{}-{name}", std::process::id()));
    std::fs::write(&path, contents).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn facets_of_the_dihedral_arrangement() {
    let path = write_temp(
        "dihedral.json",
        r#"{"labels": ["s","t"], "forms": [[1,0],[0,1],[1,-1],[1,1]]}"#,
    );
    let out = run(&["facets", "--arrangement", &path]);
    let v = stdout_json(&out);
    assert_eq!(v["facets"].as_array().unwrap().len(), 17);
    assert_eq!(v["chambers"], 8);
    std::fs::remove_file(path).ok();

    let out = run(&["facets", "--arrangement", "f4"]);
    let v = stdout_json(&out);
    assert_eq!(v["facets"].as_array().unwrap().len(), 33);
}

#[test]
fn malformed_input_exits_2() {
    let path = write_temp("broken.json", "{not json");
    let out = run(&["facets", "--arrangement", &path]);
    assert_eq!(out.status.code(), Some(2));
    std::fs::remove_file(path).ok();

    let out = run(&["cells", "--coxeter", "I2(4)", "--weight", "s=x,t=2"]);
    assert_eq!(out.status.code(), Some(2));

    // Unknown flags are usage errors (clap exits 2).
    let out = run(&["cells", "--no-such-flag"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn cells_counts_for_the_dihedral_regimes() {
    let out = run(&["cells", "--coxeter", "I2(4)", "--weight", "s=1,t=1", "--side", "L"]);
    let v = stdout_json(&out);
    assert_eq!(v["cells"].as_array().unwrap().len(), 4);

    let out = run(&["cells", "--coxeter", "I2(4)", "--weight", "s=1,t=2", "--side", "L"]);
    let v = stdout_json(&out);
    assert_eq!(v["cells"].as_array().unwrap().len(), 6);
    assert_eq!(v["weight"]["t"], 2);
}

#[test]
fn b3_cells_in_the_asymptotic_regime() {
    // All slopes above the last essential one give the same partition.
    let deep = stdout_json(&run(&["cells", "--coxeter", "B3", "--weight", "s=1,t=10"]));
    let shallow = stdout_json(&run(&["cells", "--coxeter", "B3", "--weight", "s=1,t=3"]));
    assert_eq!(deep["cells"], shallow["cells"]);
    assert_ne!(
        deep["cells"],
        stdout_json(&run(&["cells", "--coxeter", "B3", "--weight", "s=1,t=1"]))["cells"]
    );
}

#[test]
fn kl_dump_of_a_generator() {
    let out = run(&["kl", "--coxeter", "I2(4)", "--weight", "s=1,t=2", "--element", "s"]);
    let v = stdout_json(&out);
    // C_s = T_s + e^{-1} T_1.
    assert_eq!(v.as_array().unwrap().len(), 2);
    assert_eq!(v[0][0], "e");
    assert_eq!(v[0][1][0][0][0], -1);
    assert_eq!(v[1][0], "s");
}

#[test]
fn check_table_matches() {
    let out = run(&["check", "table", "--m", "4"]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("TABLE MATCH"));
    // The capitalized conjA alias works.
    let out = run(&["check", "conjA", "--coxeter", "I2(4)"]);
    assert!(out.status.success());
}

#[test]
fn check_conja_pass_and_fail_exit_codes() {
    let out = run(&["check", "conja", "--coxeter", "I2(5)"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["verdict"], "PASS");

    // Dropping H_{s-t} produces a detected failure: exit code 1.
    let path = write_temp(
        "broken-arrangement.json",
        r#"{"labels": ["s","t"], "forms": [[1,0],[0,1],[1,1]]}"#,
    );
    let out = run(&["check", "conja", "--coxeter", "I2(4)", "--arrangement", &path]);
    assert_eq!(out.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["verdict"], "FAIL");
    std::fs::remove_file(path).ok();
}

#[test]
fn check_bminus_passes() {
    let out = run(&["check", "bminus", "--coxeter", "I2(4)"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["verdict"], "PASS");
}

#[test]
fn check_scan_reports_critical_slopes() {
    let out = run(&["check", "scan", "--coxeter", "B3", "--max-den", "4"]);
    let v = stdout_json(&out);
    assert_eq!(
        v["critical_slopes"].as_array().unwrap().iter().map(|s| s.as_str().unwrap()).collect::<Vec<_>>(),
        vec!["0", "1", "2", "inf"]
    );
}

#[test]
fn output_is_byte_identical_across_thread_counts() {
    let args = ["check", "conja", "--coxeter", "I2(4)", "--samples", "3"];
    let one = run(&[&args[..], &["--threads", "1"]].concat());
    let four = run(&[&args[..], &["--threads", "4"]].concat());
    assert!(one.status.success() && four.status.success());
    assert_eq!(one.stdout, four.stdout);

    let scan = ["check", "scan", "--coxeter", "I2(6)", "--max-den", "5"];
    let a = run(&[&scan[..], &["--threads", "1"]].concat());
    let b = run(&[&scan[..], &["--threads", "8"]].concat());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn output_file_flag() {
    let path = std::env::temp_dir().join(format!("klcells-out-{}.json", std::process::id()));
    let out = run(&[
        "cells",
        "--coxeter",
        "I2(4)",
        "--weight",
        "s=1,t=2",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.contains("\"cells\""));
    std::fs::remove_file(path).ok();
}
