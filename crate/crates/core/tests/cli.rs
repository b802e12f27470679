mod common;

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use common::*;
use qprep3::circuit::Circuit;
use qprep3::cli::emit_state_file;
use qprep3::synth::StateInput;
use qprep3::state::PureState3;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_qprep3"))
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

const GHZ: &str = "0.7071067811865476\n0\n0\n0\n0\n0\n0\n0.7071067811865476\n";
const NEG: &str = "0.5\n0\n0\n-0.5\n0\n0.5\n0.5\n0\n";

#[test]
fn ghz_verify() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "ghz.txt", GHZ);
    let o = run(&["synth", f.to_str().unwrap(), "--verify"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("# qprep3 v1 qubits=3"));
    let last = text.lines().last().unwrap();
    assert!(last.starts_with("# cz="), "{last}");
    let cz: usize = last["# cz=".len()..].split(' ').next().unwrap().parse().unwrap();
    assert!(cz <= 2);
    assert_eq!(Circuit::parse(&text).unwrap().cz_count(), cz);
}

#[test]
fn zero_state_has_no_cz() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "zero.txt", "1\n0\n0\n0\n0\n0\n0\n0\n");
    let o = run(&["synth", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(!stdout(&o).lines().any(|l| l.starts_with("CZ")));
}

#[test]
fn negative_delta_real_verify() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "neg.txt", NEG);
    let o = run(&["synth", f.to_str().unwrap(), "--real", "--verify"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let last = text.lines().last().unwrap();
    assert!(last.contains("all_real=true") && last.contains("delta<0"), "{last}");
    let cz: usize = last["# cz=".len()..].split(' ').next().unwrap().parse().unwrap();
    assert!(cz <= 4);
}

#[test]
fn ry_output_parses_back() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "neg.txt", NEG);
    let out = dir.path().join("c.txt");
    let o = run(&["synth", f.to_str().unwrap(), "--real", "--ry", "--verify", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.lines().any(|l| l.starts_with("RY ")));
    assert!(!text.lines().any(|l| l.starts_with("L ")));
    assert!(stdout(&o).starts_with("cz="));
    let s = PureState3::from_real([0.5, 0.0, 0.0, -0.5, 0.0, 0.5, 0.5, 0.0]).unwrap();
    let c = Circuit::parse(&text).unwrap();
    assert!(overlap(c.apply(&s).amplitudes(), &[1.0.into(), 0.0.into(), 0.0.into(), 0.0.into(), 0.0.into(), 0.0.into(), 0.0.into(), 0.0.into()]) >= 1.0 - 1e-9);
}

#[test]
fn delta_values() {
    let dir = tempfile::tempdir().unwrap();
    let ghz = write(dir.path(), "ghz.txt", GHZ);
    let neg = write(dir.path(), "neg.txt", NEG);
    let o = run(&["delta", ghz.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let line = stdout(&o);
    let v: f64 = line.trim().strip_prefix("delta=").unwrap().split(' ').next().unwrap().parse().unwrap();
    assert!((v - 0.25).abs() <= 1e-15);
    assert!(line.trim().ends_with("bound=3"));
    assert_eq!(stdout(&run(&["delta", neg.to_str().unwrap()])).trim(), "delta=-0.25 bound=4");
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.txt", "1\n0\n0\n");
    let complex = write(dir.path(), "c.txt", "0.5 0.5\n0.5\n0.5\n0\n");
    let two = write(dir.path(), "two.txt", "1\n0\n0\n0\n");
    let c8 = write(dir.path(), "c8.txt", "0.5 0.5\n0.5\n0.5\n0\n0\n0\n0\n0\n");
    assert_eq!(run(&["synth", bad.to_str().unwrap()]).status.code(), Some(1));
    assert_eq!(run(&["synth", "/nonexistent/file"]).status.code(), Some(1));
    assert_eq!(run(&["synth", complex.to_str().unwrap(), "--real"]).status.code(), Some(2));
    assert_eq!(run(&["delta", two.to_str().unwrap()]).status.code(), Some(1));
    assert_eq!(run(&["delta", c8.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(run(&["sweep", "--n", "0", "--seed", "1"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn two_qubit_input() {
    let dir = tempfile::tempdir().unwrap();
    let bell = write(dir.path(), "bell.txt", "0.7071067811865476\n0\n0\n0.7071067811865476\n");
    let o = run(&["synth", bell.to_str().unwrap(), "--verify"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("# qprep3 v1 qubits=2"));
    assert!(text.lines().last().unwrap().starts_with("# cz=1 "));
}

#[test]
fn byte_identical_reruns() {
    let dir = tempfile::tempdir().unwrap();
    let input = StateInput::Three(qprep3::state::random_state(5, false));
    let f = write(dir.path(), "s.txt", &emit_state_file(&input));
    let args = ["synth", f.to_str().unwrap(), "--prepare", "--verify"];
    let a = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, run(&args).stdout);
    let sweep = ["sweep", "--n", "200", "--seed", "7", "--real", "--json"];
    let s1 = run(&sweep);
    assert_eq!(s1.status.code(), Some(0));
    assert_eq!(s1.stdout, run(&sweep).stdout);
    let text = stdout(&s1);
    let json: serde_json::Value = serde_json::from_str(text.lines().last().unwrap()).unwrap();
    assert_eq!(json["samples"], 200);
    assert!(text.contains("status"));
}
