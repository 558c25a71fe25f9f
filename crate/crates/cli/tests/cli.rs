use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
}

fn waring(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_waring"))
        .args(args)
        .env_remove("WARING_OUT_DIR")
        .output()
        .expect("the binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is one JSON document")
}

fn write(dir: &Path, name: &str, value: &Value) -> String {
    let path = dir.join(name);
    fs::write(&path, value.to_string()).unwrap();
    path.to_str().unwrap().to_string()
}

fn assert_error(out: &Output, code: &str, status: i32) {
    assert_eq!(
        out.status.code(),
        Some(status),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert_eq!(stdout_json(out)["error"]["code"], code);
}

#[test]
fn input_errors_have_distinct_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let malformed = d.join("bad.json");
    fs::write(&malformed, "{\"n\": 2, \"points\": [[1, 0,").unwrap();
    assert_error(
        &waring(&["hilbert", malformed.to_str().unwrap()]),
        "MALFORMED_JSON",
        4,
    );

    let floats = write(d, "floats.json", &json!({"n": 2, "points": [[1.5, 0, 0]]}));
    assert_error(&waring(&["hilbert", &floats]), "MALFORMED_JSON", 4);

    let dup = write(
        d,
        "dup.json",
        &json!({"n": 2, "points": [[1, 2, 3], [-2, -4, -6]]}),
    );
    assert_error(&waring(&["hilbert", &dup]), "DUPLICATE_POINT", 5);

    let zero = write(d, "zero.json", &json!({"n": 2, "points": [[1, 0, 0], [0, 0, 0]]}));
    assert_error(&waring(&["kruskal-rank", "-d", "1", &zero]), "ZERO_VECTOR", 6);

    let short = write(d, "short.json", &json!({"n": 2, "points": [[1, 0, 0], [0, 1]]}));
    assert_error(&waring(&["hilbert", &short]), "DIMENSION_MISMATCH", 8);

    let points = data("example11.json");
    let points = points.to_str().unwrap();
    let zero_weight = write(
        d,
        "w0.json",
        &json!({"weights": [1, 1, 1, 1, 1, 0, 1, 1, 1, 1, 1]}),
    );
    assert_error(
        &waring(&["certify", "-d", "7", points, "--weights", &zero_weight]),
        "ZERO_WEIGHT",
        7,
    );
    assert_error(
        &waring(&["synthesize", "-d", "7", points, "--weights", &zero_weight]),
        "ZERO_WEIGHT",
        7,
    );

    let few = write(d, "few.json", &json!({"weights": [1, 2]}));
    assert_error(
        &waring(&["certify", "-d", "7", points, "--weights", &few]),
        "DIMENSION_MISMATCH",
        8,
    );

    // eleven points are dependent in degree 2
    let ones = data("ones11.json");
    assert_error(
        &waring(&["certify", "-d", "2", points, "--weights", ones.to_str().unwrap()]),
        "NOT_MINIMAL",
        9,
    );

    assert_error(
        &waring(&["hilbert", d.join("missing.json").to_str().unwrap()]),
        "IO_ERROR",
        3,
    );
    assert_error(&waring(&["kruskal-rank", points]), "USAGE", 2);
    assert_error(&waring(&["kruskal-rank", "-d", "0", points]), "USAGE", 2);
    assert_error(&waring(&["harness", "--generator", "on-quartic"]), "USAGE", 2);
}

#[test]
fn weighted_certificate_verifies_minimality() {
    let points = data("example11.json");
    let ones = data("ones11.json");
    let out = waring(&[
        "certify",
        "-d",
        "7",
        points.to_str().unwrap(),
        "--weights",
        ones.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let cert = stdout_json(&out);
    assert_eq!(cert["rule"], "EXTENDED_SEPTIC");
    assert_eq!(cert["assumptions"][0]["status"], "VERIFIED");
}

#[test]
fn inconclusive_certificates_exit_zero() {
    let six = data("sixpoints.json");
    let out = waring(&["certify", "-d", "4", six.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(stdout_json(&out)["verdict"], "INCONCLUSIVE");

    let out = waring(&["harness", "--trials", "1", "--generator", "with-collinear-triple"]);
    assert!(out.status.success());
    let report = stdout_json(&out);
    assert_eq!(report["seed"], 1);
    assert_eq!(report["results"][0]["verdict"], "INCONCLUSIVE");
    let diagnostics = report["results"][0]["diagnostics"].as_array().unwrap();
    assert!(diagnostics.iter().any(|d| d.as_str().unwrap().contains("k₁ < 3")));
}

#[test]
fn synthesize_and_verify_round_trip_with_weights() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    // a negated form and a rescaled one: weights refer to the forms as written
    let points = write(
        d,
        "A.json",
        &json!({"n": 2, "points": [[-1, 2, 0], [2, 0, 4], [0, 1, -1], [3, 1, 1]]}),
    );
    let weights = write(d, "w.json", &json!({"weights": ["3/2", -2, "1/7", 5]}));
    let tensor = d.join("T.json");
    let out = waring(&[
        "synthesize",
        "-d",
        "4",
        &points,
        "--weights",
        &weights,
        "--out",
        tensor.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let doc: Value = serde_json::from_str(&fs::read_to_string(&tensor).unwrap()).unwrap();
    assert_eq!(doc["order"], "grlex");
    assert_eq!(doc["coeffs"].as_array().unwrap().len(), 15);

    let report = stdout_json(&waring(&[
        "verify",
        "--tensor",
        tensor.to_str().unwrap(),
        "--points",
        &points,
    ]));
    assert_eq!(
        report,
        json!({"in_span": true, "weights": ["3/2", "-2", "1/7", "5"], "minimal": true})
    );

    let other = write(d, "B.json", &json!({"n": 2, "points": [[1, 0, 0], [0, 1, 0]]}));
    let report = stdout_json(&waring(&[
        "verify",
        "--tensor",
        tensor.to_str().unwrap(),
        "--points",
        &other,
    ]));
    assert_eq!(
        report,
        json!({"in_span": false, "weights": null, "minimal": false})
    );
}

#[test]
fn verify_flags_redundant_points() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let two = write(d, "two.json", &json!({"n": 1, "points": [[1, 0], [0, 1]]}));
    let tensor = d.join("T.json");
    assert!(
        waring(&["synthesize", "-d", "3", &two, "--out", tensor.to_str().unwrap()])
            .status
            .success()
    );
    let three = write(
        d,
        "three.json",
        &json!({"n": 1, "points": [[1, 0], [0, 1], [1, 1]]}),
    );
    let report = stdout_json(&waring(&[
        "verify",
        "--tensor",
        tensor.to_str().unwrap(),
        "--points",
        &three,
    ]));
    assert_eq!(
        report,
        json!({"in_span": true, "weights": ["1", "1", "0"], "minimal": false})
    );
}

#[test]
fn output_directory_from_the_environment() {
    let dir = tempfile::tempdir().unwrap();
    let six = data("sixpoints.json");
    let out = Command::new(env!("CARGO_BIN_EXE_waring"))
        .args(["hilbert", "--dmax", "5", six.to_str().unwrap()])
        .env("WARING_OUT_DIR", dir.path().join("reports"))
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).contains("Dh"));
    let written: Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("reports/hilbert.json")).unwrap()).unwrap();
    assert_eq!(
        written,
        json!({"l": 6, "h": [1, 3, 4, 5, 6, 6], "dh": [1, 2, 1, 1, 1, 0], "h1": [5, 3, 2, 1, 0, 0]})
    );
}

#[test]
fn kruskal_rank_document() {
    let points = data("example11.json");
    let report = stdout_json(&waring(&[
        "kruskal-rank",
        "--degree",
        "3",
        points.to_str().unwrap(),
    ]));
    assert_eq!(report, json!({"d": 3, "k": 10, "witness": null}));
    let report = stdout_json(&waring(&["kruskal-rank", "-d", "2", points.to_str().unwrap()]));
    assert_eq!(report["k"], 5);
    assert_eq!(report["witness"].as_array().unwrap().len(), 6);
}

#[test]
fn cb_failure_reports_a_separating_form() {
    let six = data("sixpoints.json");
    let report = stdout_json(&waring(&["cb-check", "-d", "1", six.to_str().unwrap()]));
    assert_eq!(report["holds"], false);
    assert_eq!(report["separating_point"], 5);
    // the line z = 0 through the five collinear points
    assert_eq!(report["separating_form"], json!([0, 0, 1]));
}
