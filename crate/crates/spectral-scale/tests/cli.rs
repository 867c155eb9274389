//! End-to-end tests of the command-line interface: file formats, error
//! handling, determinism, and exit codes.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_spectral-scale"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stderr_of(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

/// diag(1, i, -1) as a matrix JSON file.
fn triangle_json(dir: &Path) -> std::path::PathBuf {
    let path = dir.join("triangle.json");
    std::fs::write(
        &path,
        r#"{
  "n": 3,
  "re": [[1.0, 0.0, 0.0], [0.0, 0.0, 0.0], [0.0, 0.0, -1.0]],
  "im": [[0.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 0.0]]
}"#,
    )
    .expect("write matrix");
    path
}

#[test]
fn numrange_emits_region_json_and_deterministic_svg() {
    let dir = tempfile::tempdir().expect("tempdir");
    let input = triangle_json(dir.path());
    let json = dir.path().join("region.json");
    let svg_a = dir.path().join("a.svg");
    let svg_b = dir.path().join("b.svg");

    let out = run(&[
        "numrange",
        "--input",
        input.to_str().expect("utf8"),
        "--angles",
        "90",
        "--json",
        json.to_str().expect("utf8"),
        "--svg",
        svg_a.to_str().expect("utf8"),
    ]);
    assert!(out.status.success(), "stderr: {}", stderr_of(&out));

    let region: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&json).expect("json file"))
            .expect("region JSON");
    assert_eq!(region["closed"], serde_json::Value::Bool(true));
    assert_eq!(
        region["angles"].as_array().expect("angles").len(),
        region["support"].as_array().expect("support").len()
    );
    assert!(region["boundary"].as_array().expect("boundary").len() >= 3);

    let out = run(&[
        "numrange",
        "--input",
        input.to_str().expect("utf8"),
        "--angles",
        "90",
        "--svg",
        svg_b.to_str().expect("utf8"),
    ]);
    assert!(out.status.success(), "stderr: {}", stderr_of(&out));
    let a = std::fs::read_to_string(&svg_a).expect("svg a");
    let b = std::fs::read_to_string(&svg_b).expect("svg b");
    assert_eq!(a, b, "plot emission must be deterministic");
    assert!(a.starts_with("<svg"));
    assert!(a.contains("viewBox"));
    assert!(!a.to_lowercase().contains("timestamp"));
}

#[test]
fn text_fallback_reads_token_matrices() {
    let dir = tempfile::tempdir().expect("tempdir");
    let input = dir.path().join("jordan.txt");
    std::fs::write(&input, "2\n0+0i 1+0i\n0+0i 0+0i\n").expect("write matrix");
    let mesh_json = dir.path().join("mesh.json");
    let obj = dir.path().join("body.obj");

    let out = run(&[
        "scale",
        "--input",
        input.to_str().expect("utf8"),
        "--grid",
        "64",
        "--json",
        mesh_json.to_str().expect("utf8"),
        "--mesh",
        obj.to_str().expect("utf8"),
    ]);
    assert!(out.status.success(), "stderr: {}", stderr_of(&out));

    let mesh: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&mesh_json).expect("mesh file"))
            .expect("mesh JSON");
    assert!(mesh["vertices"].as_array().expect("vertices").len() > 10);
    assert!(!mesh["faces"].as_array().expect("faces").is_empty());
    let obj_text = std::fs::read_to_string(&obj).expect("obj file");
    assert!(obj_text.starts_with("v "));
    assert!(obj_text.contains("\nf "));
}

#[test]
fn every_analysis_subcommand_runs_on_random_input() {
    let dir = tempfile::tempdir().expect("tempdir");
    let path = |name: &str| {
        dir.path()
            .join(name)
            .to_str()
            .expect("utf8")
            .to_string()
    };

    for (args, file) in [
        (
            vec!["wk", "--input", "random:generic:3", "--seed", "7", "--k", "2", "--angles", "90"],
            "wk.json",
        ),
        (
            vec!["slices", "--input", "random:generic:3", "--seed", "7", "--t", "0.4", "--angles", "90"],
            "slice.json",
        ),
        (
            vec!["slopes", "--input", "random:generic:3", "--seed", "7", "--angles", "90"],
            "slopes.json",
        ),
        (
            vec!["faces", "--input", "random:normal:3", "--seed", "7", "--grid", "64"],
            "faces.json",
        ),
    ] {
        let out_file = path(file);
        let mut full = args.clone();
        full.push("--json");
        full.push(&out_file);
        let out = run(&full);
        assert!(
            out.status.success(),
            "{:?} failed: {}",
            args,
            stderr_of(&out)
        );
        let value: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(&out_file).expect("output"))
                .expect("valid JSON");
        assert!(!value.is_null());
    }
}

#[test]
fn segment_subcommand_reports_presence_and_extent() {
    let dir = tempfile::tempdir().expect("tempdir");
    let input = triangle_json(dir.path());
    let out_file = dir.path().join("segment.json");

    // A corner of the triangle spectrum carries a segment of extent 1/3.
    let out = run(&[
        "segment",
        "--input",
        input.to_str().expect("utf8"),
        "--lambda",
        "0,1",
        "--json",
        out_file.to_str().expect("utf8"),
    ]);
    assert!(out.status.success(), "stderr: {}", stderr_of(&out));
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out_file).expect("output"))
            .expect("segment JSON");
    assert_eq!(v["present"], serde_json::Value::Bool(true));
    let t_max = v["tMax"].as_f64().expect("tMax");
    assert!((t_max - 1.0 / 3.0).abs() < 1e-6, "tMax = {t_max}");

    // A strictly interior point carries none.
    let out = run(&[
        "segment",
        "--input",
        input.to_str().expect("utf8"),
        "--lambda",
        "0,0.33",
        "--json",
        out_file.to_str().expect("utf8"),
    ]);
    assert!(out.status.success(), "stderr: {}", stderr_of(&out));
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out_file).expect("output"))
            .expect("segment JSON");
    assert_eq!(v["present"], serde_json::Value::Bool(false));
    assert!(v["tMax"].is_null());
}

#[test]
fn verify_subcommand_writes_reports_and_honors_filters() {
    let dir = tempfile::tempdir().expect("tempdir");
    let report = dir.path().join("report.json");

    let out = run(&[
        "verify",
        "--suite",
        "T2.1",
        "--report",
        report.to_str().expect("utf8"),
    ]);
    assert!(out.status.success(), "stderr: {}", stderr_of(&out));
    let entries: Vec<serde_json::Value> =
        serde_json::from_str(&std::fs::read_to_string(&report).expect("report"))
            .expect("report JSON");
    assert_eq!(entries.len(), 1);
    assert_eq!(entries[0]["theoremId"], "T2.1");
    assert_eq!(entries[0]["passed"], serde_json::Value::Bool(true));

    // An unknown check id is a usage error.
    let out = run(&["verify", "--suite", "T9.9"]);
    assert_eq!(out.status.code(), Some(2), "stderr: {}", stderr_of(&out));
    assert!(
        stderr_of(&out).to_lowercase().contains("unknown"),
        "stderr: {}",
        stderr_of(&out)
    );
}

#[test]
fn thread_limit_env_is_accepted() {
    let out = bin()
        .env("SPECTRAL_SCALE_THREADS", "1")
        .args(["verify", "--suite", "T2.1"])
        .output()
        .expect("binary runs");
    assert!(out.status.success(), "stderr: {}", stderr_of(&out));
}

#[test]
fn random_input_grammar_and_seeds() {
    let dir = tempfile::tempdir().expect("tempdir");
    let out_a = dir.path().join("a.json");
    let out_b = dir.path().join("b.json");
    let out_c = dir.path().join("c.json");

    for (file, seed) in [(&out_a, "3"), (&out_b, "3"), (&out_c, "4")] {
        let out = run(&[
            "numrange",
            "--input",
            "random:unitary:4",
            "--seed",
            seed,
            "--angles",
            "90",
            "--json",
            file.to_str().expect("utf8"),
        ]);
        assert!(out.status.success(), "stderr: {}", stderr_of(&out));
    }
    let a = std::fs::read_to_string(&out_a).expect("a");
    let b = std::fs::read_to_string(&out_b).expect("b");
    let c = std::fs::read_to_string(&out_c).expect("c");
    assert_eq!(a, b, "equal seeds must reproduce identical output");
    assert_ne!(a, c, "different seeds must give different models");

    let out = run(&["numrange", "--input", "random:banana:4"]);
    assert_eq!(out.status.code(), Some(2), "stderr: {}", stderr_of(&out));
}

#[test]
fn malformed_matrices_are_rejected() {
    let dir = tempfile::tempdir().expect("tempdir");

    // Row count differs from n.
    let short = dir.path().join("short.json");
    std::fs::write(&short, r#"{"n": 3, "re": [[1, 0, 0], [0, 1, 0]]}"#).expect("write");
    let out = run(&["numrange", "--input", short.to_str().expect("utf8")]);
    assert_eq!(out.status.code(), Some(2));
    assert!(
        stderr_of(&out).contains("row"),
        "stderr: {}",
        stderr_of(&out)
    );

    // Ragged rows.
    let ragged = dir.path().join("ragged.json");
    std::fs::write(&ragged, r#"{"n": 2, "re": [[1, 0], [0]]}"#).expect("write");
    let out = run(&["numrange", "--input", ragged.to_str().expect("utf8")]);
    assert_eq!(out.status.code(), Some(2));
    assert!(
        stderr_of(&out).contains("row"),
        "stderr: {}",
        stderr_of(&out)
    );
}

#[test]
fn usage_errors_exit_with_code_two() {
    let dir = tempfile::tempdir().expect("tempdir");
    let input = triangle_json(dir.path());

    // Unknown flag.
    let out = run(&[
        "numrange",
        "--input",
        input.to_str().expect("utf8"),
        "--bogus",
    ]);
    assert_eq!(out.status.code(), Some(2));

    // Missing subcommand.
    let out = run(&[]);
    assert_eq!(out.status.code(), Some(2));

    // Missing input file is caught before any computation.
    let out = run(&["numrange", "--input", "/nonexistent/matrix.json"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(
        stderr_of(&out).contains("does not exist"),
        "stderr: {}",
        stderr_of(&out)
    );

    // Conflicting outputs: two writers aimed at one file.
    let clash = dir.path().join("clash.out");
    let out = run(&[
        "numrange",
        "--input",
        input.to_str().expect("utf8"),
        "--json",
        clash.to_str().expect("utf8"),
        "--svg",
        clash.to_str().expect("utf8"),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(
        stderr_of(&out).contains("conflicting outputs"),
        "stderr: {}",
        stderr_of(&out)
    );

    // Help and version are not errors.
    let out = run(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    let out = run(&["--version"]);
    assert_eq!(out.status.code(), Some(0));
}
