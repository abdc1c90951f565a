//! Binary-level tests: exit codes, manifest shape, config handling, and
//! reproducibility of the results block.

use std::path::PathBuf;
use std::process::{Command, Output};

fn rwslab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rwslab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn results_of(out: &Output) -> serde_json::Value {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let manifest: serde_json::Value =
        serde_json::from_slice(&out.stdout).expect("stdout is a JSON manifest");
    manifest["results"].clone()
}

const TWO_POINT: &str = "two_point:a=2.718281828459045,b=0.36787944117144233,p=0.5";

#[test]
fn stats_reports_exact_radii() {
    let out = rwslab(&["stats", "--law", TWO_POINT]);
    let r = results_of(&out);
    let get = |k: &str| r[k].as_f64().unwrap();
    assert!((get("r") - 0.36787944117144233).abs() < 1e-12);
    assert!((get("r0") - 1.0).abs() < 1e-12);
    assert!((get("rp1") - 1f64.cosh()).abs() < 1e-12);
    assert!((get("R") - std::f64::consts::E).abs() < 1e-12);
    assert!((r["sigma2"].as_f64().unwrap() - 4.0).abs() < 1e-12);
}

#[test]
fn unknown_law_exits_2_with_one_line_diagnosis() {
    let out = rwslab(&["stats", "--law", "gauss:mu=0"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert_eq!(err.trim().lines().count(), 1, "{err}");
    assert!(err.contains("unknown law kind"));
}

#[test]
fn hypothesis_violation_exits_4() {
    let out = rwslab(&["momentlil", "--law", "degenerate:c=1", "--nmax", "100"]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn missing_required_option_exits_2() {
    let out = rwslab(&["stats"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn dynamics_uniform_law_row() {
    let out = rwslab(&["dynamics", "--law", "uniform:lo=0,hi=1"]);
    let r = results_of(&out);
    assert_eq!(r["hypercyclic"], "almostSurelyNo");
    assert_eq!(r["supercyclic"], "almostSurelyYes");
}

#[test]
fn results_block_is_byte_identical_across_runs_and_threads() {
    // Parallel Monte Carlo inside; the results block must not depend on
    // scheduling or repetition.
    let args = [
        "hardy",
        "--law",
        TWO_POINT,
        "--seq",
        "geometric:rho=0.5",
        "--mc-trials",
        "8",
        "--mc-n",
        "20000",
        "--seed",
        "42",
    ];
    let single: Vec<&str> = args.iter().copied().chain(["--threads", "1"]).collect();
    let multi: Vec<&str> = args.iter().copied().chain(["--threads", "8"]).collect();
    let a = serde_json::to_string(&results_of(&rwslab(&single))).unwrap();
    let b = serde_json::to_string(&results_of(&rwslab(&single))).unwrap();
    let c = serde_json::to_string(&results_of(&rwslab(&multi))).unwrap();
    assert_eq!(a, b, "identical argv must reproduce byte-identical results");
    assert_eq!(a, c, "--threads must not affect results");
}

#[test]
fn pseudospectrum_csv_contract() {
    let dir = std::env::temp_dir();
    let path: PathBuf = dir.join(format!("rwslab-test-ps-{}.csv", std::process::id()));
    let out = rwslab(&[
        "pseudospectrum",
        "--law",
        TWO_POINT,
        "--n",
        "100",
        "--grid",
        "9",
        "--seed",
        "7",
        "--out",
        path.to_str().unwrap(),
    ]);
    let r = results_of(&out);
    assert_eq!(r["rows"].as_u64(), Some(81));
    let body = std::fs::read_to_string(&path).unwrap();
    let mut lines = body.lines();
    assert_eq!(lines.next(), Some("re,im,smin"));
    assert_eq!(body.lines().count(), 82);
    for line in body.lines().skip(1) {
        assert_eq!(line.split(',').count(), 3);
    }
    // Byte-identical on replay.
    let path2: PathBuf = dir.join(format!("rwslab-test-ps2-{}.csv", std::process::id()));
    rwslab(&[
        "pseudospectrum",
        "--law",
        TWO_POINT,
        "--n",
        "100",
        "--grid",
        "9",
        "--seed",
        "7",
        "--out",
        path2.to_str().unwrap(),
    ]);
    assert_eq!(body, std::fs::read_to_string(&path2).unwrap());
    let _ = std::fs::remove_file(path);
    let _ = std::fs::remove_file(path2);
}

#[test]
fn config_file_supplies_defaults_and_flags_override() {
    let dir = std::env::temp_dir();
    let path = dir.join(format!("rwslab-test-cfg-{}.txt", std::process::id()));
    std::fs::write(
        &path,
        "law = degenerate:c=2\nlength = 3  # short sample\nseed = 9\n",
    )
    .unwrap();
    let out = rwslab(&["sample", "--config", path.to_str().unwrap()]);
    let r = results_of(&out);
    assert_eq!(r["weights"].as_array().unwrap().len(), 3);
    assert_eq!(r["weights"][0].as_f64(), Some(2.0));
    // Flag overrides the config length.
    let out = rwslab(&[
        "sample",
        "--config",
        path.to_str().unwrap(),
        "--length",
        "5",
    ]);
    let r = results_of(&out);
    assert_eq!(r["weights"].as_array().unwrap().len(), 5);
    let _ = std::fs::remove_file(path);
}

#[test]
fn vn_fixture_verdict_through_cli() {
    let out = rwslab(&[
        "vn",
        "--law",
        "discrete:atoms=0|1|2;probs=0.3333333333333333|0.3333333333333333|0.3333333333333334",
        "--op",
        "verdict",
        "--shift",
        "example:a1",
        "--direction",
        "t-under-a",
    ]);
    let r = results_of(&out);
    assert_eq!(r["verdict"], "almostSurelyNo");
}

#[test]
fn nspectrum_exact_through_cli() {
    let out = rwslab(&["nspectrum", "--shift", "prefix=0;period=1,2", "--n", "2"]);
    let r = results_of(&out);
    assert_eq!(r["count"].as_u64(), Some(3));
}
