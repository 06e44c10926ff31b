use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use zxfloquet::floquet::{build_measurement_circuit, parse_code};

const C422: &str = "n 4\nXXXX\nZZZZ\n";

fn zxf(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zxfloquet"))
        .current_dir(dir)
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn floquetify_then_params() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("422.code"), C422).unwrap();
    let o = zxf(dir.path(), &["floquetify", "422.code", "--out", "422.sched"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let sched = fs::read_to_string(dir.path().join("422.sched")).unwrap();
    assert!(sched.starts_with("qubits 6\n"));
    let o = zxf(dir.path(), &["params", "422.sched"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("n=6 k=2 d=2\n"));
}

#[test]
fn floquetify_is_deterministic_and_audited() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("c.code"), C422).unwrap();
    let a = zxf(dir.path(), &["floquetify", "c.code", "--audit"]);
    let b = zxf(dir.path(), &["floquetify", "c.code", "--audit"]);
    assert_eq!(a.stdout, b.stdout);
    let s = stdout(&a);
    assert!(s.contains("r_pauli-1"));
    assert!(s.contains("r_4"));
    assert!(s.contains("\nqubits 6\n"));
}

#[test]
fn naive_rule_is_refuted_with_a_witness() {
    let dir = tempfile::tempdir().unwrap();
    let o = zxf(dir.path(), &["check-rule", "r_naive", "--witness", "naive.txt"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("weight-1 internal error needs weight 2"));
    let w = fs::read_to_string(dir.path().join("naive.txt")).unwrap();
    assert_eq!(w.lines().filter(|l| l.starts_with("flip ")).count(), 1);
}

#[test]
fn library_rule_passes() {
    let dir = tempfile::tempdir().unwrap();
    let o = zxf(dir.path(), &["check-rule", "r_fuse", "--n", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("semantics equal"));
    assert!(stdout(&o).contains("preserving"));
}

#[test]
fn usage_and_input_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(zxf(dir.path(), &["frobnicate"]).status.code(), Some(2));
    assert_eq!(zxf(dir.path(), &["params"]).status.code(), Some(2));
    fs::write(dir.path().join("bad.code"), "n 2\nXI\nZZ\n").unwrap();
    let o = zxf(dir.path(), &["floquetify", "bad.code"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("anticommute"));
    assert_eq!(zxf(dir.path(), &["floquetify", "missing.code"]).status.code(), Some(2));
    assert_eq!(zxf(dir.path(), &["check-rule", "r_bogus"]).status.code(), Some(2));
}

#[test]
fn decompose_reports_the_bound() {
    let dir = tempfile::tempdir().unwrap();
    let o = zxf(dir.path(), &["decompose", "--pauli", "ZZZZ"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.starts_with("qubits 6\n"));
    assert!(s.contains("4 data + 2 ancillas"));
}

#[test]
fn webs_and_distance_on_a_diagram_file() {
    let dir = tempfile::tempdir().unwrap();
    let d = build_measurement_circuit(&parse_code("n 2\nZZ\n").unwrap(), 2).unwrap();
    fs::write(dir.path().join("zz.zx"), d.to_text()).unwrap();
    let o = zxf(dir.path(), &["webs", "zz.zx"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("detecting regions 1\n"), "{s}");
    assert!(s.contains("stabiliser ZZ\n"));
    let o = zxf(dir.path(), &["distance", "--diagram", "zz.zx", "--wmax", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("distance 1\n"));
}

#[test]
fn bijection_respects_the_seed() {
    let dir = tempfile::tempdir().unwrap();
    let a = zxf(dir.path(), &["bijection", "--samples", "40", "--seed", "5"]);
    let b = zxf(dir.path(), &["--seed", "5", "bijection", "--samples", "40"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}
