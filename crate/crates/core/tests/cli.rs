use std::path::{Path, PathBuf};
use std::process::Command;

use padic_frames::cli::{run, EXIT_BAD_INPUT, EXIT_INFEASIBLE, EXIT_IO, EXIT_OK, EXIT_VERIFY};
use serde_json::Value;

const BIN: &str = env!("CARGO_BIN_EXE_padic-frames");

fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

/// Compares against a golden file; `PADIC_FRAMES_BLESS=1` rewrites it.
fn check_golden(name: &str, actual: &str) {
    let path = golden_dir().join(name);
    if std::env::var_os("PADIC_FRAMES_BLESS").is_some() {
        std::fs::create_dir_all(golden_dir()).unwrap();
        std::fs::write(&path, actual).unwrap();
        return;
    }
    let want = std::fs::read_to_string(&path)
        .unwrap_or_else(|e| panic!("missing golden file {}: {e}", path.display()));
    assert_eq!(actual, want, "output differs from {}", path.display());
}

fn padic(args: &[&str]) -> i32 {
    let mut all = vec!["padic-frames"];
    all.extend_from_slice(args);
    run(all)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn build_example(dir: &Path) -> PathBuf {
    let out = dir.join("f.json");
    assert_eq!(
        padic(&[
            "build",
            "--p",
            "3",
            "--N",
            "1",
            "--transform",
            "i:0",
            "--out",
            s(&out)
        ]),
        EXIT_OK
    );
    out
}

#[test]
fn example_system_build_and_verify() {
    let dir = tempfile::tempdir().unwrap();
    let out = build_example(dir.path());
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let wavelets = doc["wavelets"].as_array().unwrap();
    assert_eq!(wavelets.len(), 2);
    assert_eq!(wavelets[0]["E"]["level"], -1);
    assert_eq!(wavelets[0]["E"]["word"], serde_json::json!([[-1, 1]]));
    assert_eq!(wavelets[1]["E"]["level"], 0);
    assert_eq!(wavelets[1]["E"]["word"], serde_json::json!([[0, 2]]));
    assert_eq!(doc["verification"]["theorem31"], true);

    let report = dir.path().join("r.json");
    assert_eq!(
        padic(&["verify", "--in", s(&out), "--report", s(&report)]),
        EXIT_OK
    );
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(r["passed"], true);
    assert_eq!(r["parseval"].as_array().unwrap().len(), 50);
}

#[test]
fn default_build_is_general_branch() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("g.json");
    assert_eq!(
        padic(&["build", "--p", "2", "--N", "1", "--out", s(&out)]),
        EXIT_OK
    );
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(doc["wavelets"].as_array().unwrap().len(), 1);
    assert_eq!(doc["branch"]["kind"], "general");
    assert_eq!(doc["n"], 2);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(
        padic(&["build", "--p", "3", "--N", "1", "--transform", "i:9"]),
        EXIT_BAD_INPUT
    );
    assert_eq!(
        padic(&["build", "--p", "3", "--N", "1", "--transform", "ii:0"]),
        EXIT_INFEASIBLE
    );
    assert_eq!(padic(&["build", "--p", "4", "--N", "1"]), EXIT_BAD_INPUT);
    assert_eq!(
        padic(&["build", "--p", "3", "--N", "1", "--transform", "iii:0"]),
        EXIT_BAD_INPUT
    );
    assert_eq!(padic(&["build", "--p", "3"]), EXIT_BAD_INPUT);
    let missing = dir.path().join("missing.json");
    assert_eq!(padic(&["verify", "--in", s(&missing)]), EXIT_IO);
    let junk = dir.path().join("junk.json");
    std::fs::write(&junk, "{\"schema_version\": \"1\"}").unwrap();
    assert_eq!(padic(&["verify", "--in", s(&junk)]), EXIT_IO);
    assert_eq!(padic(&["render", "--in", s(&junk)]), EXIT_IO);
    assert_eq!(
        padic(&["classify", "--p", "3", "--N", "1", "--transform", "ii:0"]),
        EXIT_INFEASIBLE
    );
    assert_eq!(padic(&["classify", "--p", "3", "--N", "1"]), EXIT_OK);
}

#[test]
fn tree_file_input() {
    let dir = tempfile::tempdir().unwrap();
    let tree = dir.path().join("tree.json");
    std::fs::write(
        &tree,
        r#"{"params": {"p": 2, "N": 1, "M": 1}, "tree": [[2, "0"], [6, "0"], [7, "0"]]}"#,
    )
    .unwrap();
    let out = dir.path().join("t.json");
    assert_eq!(
        padic(&[
            "build",
            "--p",
            "2",
            "--N",
            "1",
            "--tree",
            s(&tree),
            "--out",
            s(&out)
        ]),
        EXIT_OK
    );
    assert_eq!(
        padic(&["build", "--p", "3", "--N", "1", "--tree", s(&tree)]),
        EXIT_BAD_INPUT
    );
    std::fs::write(&tree, "not json").unwrap();
    assert_eq!(
        padic(&["build", "--p", "2", "--N", "1", "--tree", s(&tree)]),
        EXIT_IO
    );
}

#[test]
fn tight_tolerance_fails() {
    let dir = tempfile::tempdir().unwrap();
    let out = build_example(dir.path());
    assert_eq!(
        padic(&["verify", "--in", s(&out), "--tol", "1e-16"]),
        EXIT_VERIFY
    );
}

#[test]
fn tampered_lambda_is_detected() {
    let dir = tempfile::tempdir().unwrap();
    let out = build_example(dir.path());
    let mut doc: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let v = doc["lambda"][2][0].as_f64().unwrap();
    doc["lambda"][2][0] = Value::from(v + 1e-3);
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, serde_json::to_string_pretty(&doc).unwrap()).unwrap();
    let report = dir.path().join("bad.report.json");
    assert_eq!(
        padic(&["verify", "--in", s(&bad), "--report", s(&report)]),
        EXIT_VERIFY
    );
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert!(r["parseval_max"].as_f64().unwrap() > 1e-6);
    assert!(r["consistency_residual"].as_f64().unwrap() > 1e-4);
}

#[test]
fn verify_is_deterministic_and_seed_env_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let out = build_example(dir.path());
    let report = |name: &str, seed: &str, env: Option<&str>| -> String {
        let path = dir.path().join(name);
        let mut cmd = Command::new(BIN);
        cmd.args([
            "verify",
            "--in",
            s(&out),
            "--seed",
            seed,
            "--report",
            s(&path),
        ]);
        cmd.env_remove("PADIC_FRAMES_SEED");
        if let Some(v) = env {
            cmd.env("PADIC_FRAMES_SEED", v);
        }
        assert!(cmd.status().unwrap().success());
        std::fs::read_to_string(&path).unwrap()
    };
    let a = report("a.json", "7", None);
    let b = report("b.json", "7", None);
    assert_eq!(a, b);
    let c = report("c.json", "0", Some("7"));
    assert_eq!(a, c);
    let d = report("d.json", "8", None);
    assert_ne!(a, d);
    let parsed: Value = serde_json::from_str(&c).unwrap();
    assert_eq!(parsed["seed"], 7);
}

#[test]
fn default_report_path() {
    let dir = tempfile::tempdir().unwrap();
    let out = build_example(dir.path());
    let status = Command::new(BIN)
        .args(["verify", "--in", s(&out), "--tests", "5"])
        .env_remove("PADIC_FRAMES_SEED")
        .status()
        .unwrap();
    assert!(status.success());
    assert!(dir.path().join("f.report.json").exists());
}

fn sample_document(dir: &Path) -> PathBuf {
    let out = dir.join("fig.json");
    assert_eq!(
        padic(&[
            "build",
            "--p",
            "3",
            "--N",
            "1",
            "--transform",
            "i:0",
            "--transform",
            "ii:4",
            "--out",
            s(&out)
        ]),
        EXIT_OK
    );
    out
}

#[test]
fn golden_document() {
    let dir = tempfile::tempdir().unwrap();
    let out = sample_document(dir.path());
    let text = std::fs::read_to_string(&out).unwrap();
    check_golden("sample_frame.json", &text);

    // Loading and saving again gives the same bytes.
    let again = padic_frames::FrameDocument::from_json(&text).unwrap();
    assert_eq!(again.to_json(), text);
}

#[test]
fn golden_renders() {
    let dir = tempfile::tempdir().unwrap();
    let doc = sample_document(dir.path());
    for (what, format, name) in [
        ("phi-hat", "ascii", "sample_phi_hat.txt"),
        ("phi-hat-shifted", "ascii", "sample_phi_hat_shifted.txt"),
        ("wavelets", "ascii", "sample_wavelets.txt"),
        ("phi-hat", "svg", "sample_phi_hat.svg"),
        ("phi-hat-shifted", "svg", "sample_phi_hat_shifted.svg"),
    ] {
        let out = dir.path().join(name);
        assert_eq!(
            padic(&[
                "render",
                "--in",
                s(&doc),
                "--what",
                what,
                "--format",
                format,
                "--out",
                s(&out)
            ]),
            EXIT_OK
        );
        check_golden(name, &std::fs::read_to_string(&out).unwrap());
    }
}

/// Replaces every floating-point number by a placeholder, keeping integers, flags and strings.
fn mask_floats(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => *v = Value::from("<float>"),
        Value::Array(a) => a.iter_mut().for_each(mask_floats),
        Value::Object(o) => o.values_mut().for_each(mask_floats),
        _ => {}
    }
}

#[test]
fn golden_report() {
    let dir = tempfile::tempdir().unwrap();
    let doc = sample_document(dir.path());
    let report = dir.path().join("fig.report.json");
    let status = Command::new(BIN)
        .args([
            "verify",
            "--in",
            s(&doc),
            "--tests",
            "4",
            "--report",
            s(&report),
        ])
        .env_remove("PADIC_FRAMES_SEED")
        .status()
        .unwrap();
    assert!(status.success());
    let mut r: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    mask_floats(&mut r);
    let mut text = serde_json::to_string_pretty(&r).unwrap();
    text.push('\n');
    check_golden("sample_report.masked.json", &text);
}
