//! Golden-output tests for the `brackets` binary.
//!
//! Expected stdout lives in `tests/golden/<name>.out`. Run with
//! `UPDATE_GOLDEN=1` to rewrite the files after an intended change.

use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

fn brackets(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_brackets"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn brackets");
    let mut pipe = child.stdin.take().unwrap();
    pipe.write_all(stdin.unwrap_or("").as_bytes()).unwrap();
    drop(pipe);
    child.wait_with_output().unwrap()
}

fn golden_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(format!("{name}.out"))
}

fn golden(name: &str) -> String {
    std::fs::read_to_string(golden_path(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// (golden name, arguments, expected exit code)
const CASES: &[(&str, &[&str], i32)] = &[
    ("fmt_worm", &["fmt", "( ( ) )"], 0),
    ("fmt_formula", &["fmt", "T&T"], 0),
    ("fmt_json", &["--json", "fmt", "(())&[()p1]"], 0),
    ("ord_one", &["ord", "()"], 0),
    ("ord_omega", &["ord", "(())"], 0),
    ("ord_epsilon", &["ord", "((()))"], 0),
    ("ord_json", &["ord", "(()())()", "--json"], 0),
    ("cmp_lt", &["cmp", "()", "(())"], 0),
    ("cmp_eq", &["cmp", "()()", "()()"], 0),
    ("cmp_gt", &["cmp", "(())", "T"], 0),
    ("cmp_json", &["--json", "cmp", "(())()", "()(())"], 0),
    ("nf", &["nf", "()(())"], 0),
    ("nf_json", &["--json", "nf", "(())(())"], 0),
    ("prove_lt", &["prove", "lt", "(())", "()"], 0),
    ("prove_le", &["prove", "le", "()()", "()"], 0),
    ("step", &["step", "(())", "--budget", "10"], 0),
    (
        "step_json",
        &["--json", "step", "(())", "--budget", "10"],
        0,
    ),
    (
        "step_window",
        &["step", "(()())", "--budget", "20", "--window", "2"],
        3,
    ),
    (
        "step_window_json",
        &[
            "--json", "--window", "2", "--budget", "20", "step", "(()())",
        ],
        3,
    ),
    ("fs_successor", &["fs", "w+3", "2"], 0),
    ("fs_epsilon", &["fs", "phi(1,0)", "2"], 0),
    ("fs_json", &["--json", "fs", "w^w", "3"], 0),
    ("growth_f1", &["growth", "F", "1", "--budget", "10"], 0),
    ("growth_g1", &["growth", "G", "1"], 0),
    ("growth_g2", &["growth", "G", "2", "--budget", "10"], 3),
    ("growth_json", &["--json", "growth", "F", "2"], 0),
];

#[test]
fn commands_match_golden_output() {
    let update = std::env::var_os("UPDATE_GOLDEN").is_some();
    for (name, args, code) in CASES {
        let out = brackets(args, None);
        assert_eq!(out.status.code(), Some(*code), "{name}: {:?}", out);
        assert!(
            out.stderr.is_empty(),
            "{name}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        if update {
            std::fs::write(golden_path(name), stdout(&out)).unwrap();
        } else {
            assert_eq!(stdout(&out), golden(name), "{name}");
        }
    }
}

#[test]
fn output_is_deterministic() {
    for (name, args, _) in CASES {
        assert_eq!(
            brackets(args, None).stdout,
            brackets(args, None).stdout,
            "{name}"
        );
    }
}

#[test]
fn emitted_certificates_check() {
    for name in ["prove_lt", "prove_le"] {
        let cert = golden(name);
        let out = brackets(&["check", "-"], Some(&cert));
        assert_eq!(out.status.code(), Some(0), "{name}");
        assert_eq!(stdout(&out), "VALID\n");

        let path =
            std::env::temp_dir().join(format!("brackets-{}-{name}.json", std::process::id()));
        std::fs::write(&path, &cert).unwrap();
        let out = brackets(&["--json", "check", path.to_str().unwrap()], None);
        std::fs::remove_file(&path).unwrap();
        assert_eq!(out.status.code(), Some(0));
        let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
        assert_eq!(v["valid"], true);
    }
}

#[test]
fn tampered_certificate_is_invalid() {
    let cert = golden("prove_lt").replacen("\"RMonoOuter\"", "\"RMonoAbsorb\"", 1);
    let out = brackets(&["check", "-"], Some(&cert));
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(text.starts_with("INVALID root"), "{text}");

    let out = brackets(&["--json", "check", "-"], Some(&cert));
    assert_eq!(out.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["valid"], false);
    assert!(v["path"].as_str().unwrap().starts_with("root"));
}

#[test]
fn unprovable_orders_exit_one() {
    let out = brackets(&["prove", "lt", "()", "(())"], None);
    assert_eq!(out.status.code(), Some(1));
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).contains("no derivation"));
}

#[test]
fn parse_errors_exit_two_with_offsets() {
    for (args, offset) in [
        (&["fmt", "(("][..], 2),
        (&["ord", "())"][..], 2),
        (&["cmp", "()", "(x)"][..], 1),
        (&["fs", "phi(1", "2"][..], 5),
    ] {
        let out = brackets(args, None);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        let err = String::from_utf8_lossy(&out.stderr);
        assert!(
            err.contains(&format!("at byte {offset}")),
            "{args:?}: {err}"
        );
    }
    let out = brackets(&["check", "-"], Some("{\"rule\": 3}"));
    assert_eq!(out.status.code(), Some(2));
    let out = brackets(&["check", "/nonexistent/cert.json"], None);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["frobnicate"][..],
        &["prove", "lq", "()", "()"],
        &["growth", "H", "1"],
        &[],
    ] {
        assert_eq!(brackets(args, None).status.code(), Some(2), "{args:?}");
    }
}
