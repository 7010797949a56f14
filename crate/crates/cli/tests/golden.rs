//! Runs every `console` block of the README against the binary, plus a few
//! exit-code and file round-trip cases.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_eqchrom"))
        .args(args)
        .current_dir(root())
        .env_remove("EQCHROM_ORDER")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

struct Example {
    command: String,
    expected: Vec<String>,
    exit: i32,
}

/// `$ eqchrom ...` lines followed by the expected output; a final
/// `[exit N]` line gives a nonzero status, whose output is read from stderr.
fn readme_examples() -> Vec<Example> {
    let text = std::fs::read_to_string(root().join("README.md")).unwrap();
    let mut out = Vec::new();
    let mut in_block = false;
    for line in text.lines() {
        if line.trim_start().starts_with("```") {
            in_block = line.trim() == "```console";
            continue;
        }
        if !in_block {
            continue;
        }
        if let Some(cmd) = line.strip_prefix("$ ") {
            out.push(Example {
                command: cmd.to_string(),
                expected: Vec::new(),
                exit: 0,
            });
        } else if let Some(ex) = out.last_mut() {
            if let Some(code) = line.strip_prefix("[exit ").and_then(|r| r.strip_suffix(']')) {
                ex.exit = code.parse().unwrap();
            } else {
                ex.expected.push(line.to_string());
            }
        }
    }
    out
}

#[test]
fn readme_examples_are_golden() {
    let examples = readme_examples();
    assert!(examples.len() >= 8, "found {} examples", examples.len());
    for ex in examples {
        let words = shlex::split(&ex.command).expect("well-formed command");
        assert_eq!(words[0], "eqchrom");
        let args: Vec<&str> = words[1..].iter().map(String::as_str).collect();
        let o = run(&args);
        assert_eq!(o.status.code(), Some(ex.exit), "{}\n{}", ex.command, stderr(&o));
        let got = if ex.exit == 0 { stdout(&o) } else { stderr(&o) };
        let want = ex.expected.join("\n");
        assert_eq!(got.trim_end(), want.trim_end(), "{}", ex.command);
    }
}

#[test]
fn usage_errors_exit_two() {
    let o = run(&["lattice"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["lattice", "--group", "2:[1]", "--bogus"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["fgl", "p-series", "--p", "2", "--mod", "3"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).is_empty());
}

#[test]
fn domain_errors_are_json() {
    let o = run(&["strickland", "--imax", "4", "--order", "2"]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(stderr(&o).trim()).unwrap();
    assert_eq!(v["error"], "PreconditionViolated");
}

#[test]
fn order_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_eqchrom"))
        .args(["fgl", "p-series", "--p", "2", "--vmax", "1"])
        .env("EQCHROM_ORDER", "3")
        .output()
        .unwrap();
    assert_eq!(stdout(&o).trim(), "2*x + v1*x^2 + O(x^3)");
}

#[test]
fn efgl_document_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("model.json");
    let first = run(&["equivariant", "--model", "multiplicative-c2", "--order", "4", "--emit"]);
    assert!(first.status.success());
    std::fs::write(&path, &first.stdout).unwrap();
    let p = path.to_str().unwrap();
    let second = run(&["equivariant", "--input", p, "--emit"]);
    assert_eq!(stdout(&first), stdout(&second));
    let check = run(&["equivariant", "--input", p]);
    assert!(stdout(&check).ends_with("all axioms hold\n"), "{}", stdout(&check));
}

#[test]
fn deterministic_output() {
    let a = run(&["diagram", "--group", "2:[1,1]", "--imax", "1", "--order", "3", "--vmax", "1", "--format", "json"]);
    let b = run(&["diagram", "--group", "2:[1,1]", "--imax", "1", "--order", "3", "--vmax", "1", "--format", "json"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn full_strickland_table() {
    let o = run(&["strickland", "--imax", "8", "--order", "9", "--vmax", "3"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["schema"], "eqchrom/strickland/v1");
    assert_eq!(v["passed"], true);
    assert_eq!(v["generators"].as_array().unwrap().len(), 1 + 8 + 24);
}
