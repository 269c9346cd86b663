use std::process::{Command, Output};

use serde_json::Value;

fn d42sym(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_d42sym"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

const ALPHA: &str = "1/4,1/3,1/5,13/60";

#[test]
fn verify_translations_passes() {
    let out = d42sym(&["verify", "--suite", "translations"]);
    assert_eq!(out.status.code(), Some(0));
    let reports = json(&out);
    let reports = reports.as_array().unwrap();
    assert_eq!(reports.len(), 3);
    for r in reports {
        assert_eq!(r["status"], "pass");
        assert!(r.get("elapsed_ms").is_none());
    }
}

#[test]
fn verify_timings_adds_elapsed() {
    let out = d42sym(&["verify", "--suite", "translations", "--timings"]);
    assert!(json(&out)[0]["elapsed_ms"].is_number());
}

#[test]
fn unknown_suite_is_a_usage_error() {
    assert_eq!(
        d42sym(&["verify", "--suite", "bogus"]).status.code(),
        Some(2)
    );
}

#[test]
fn involution_word_returns_the_point() {
    let out = d42sym(&[
        "apply-word",
        "--word",
        "s1 s1",
        "--point",
        "1,2,3,4,5,6,2",
        "--alpha",
        ALPHA,
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    for (k, want) in ["x", "y", "z", "w", "q", "p", "t"]
        .iter()
        .zip(["1", "2", "3", "4", "5", "6", "2"])
    {
        assert_eq!(v[*k], want);
    }
    assert_eq!(
        v["alpha"],
        serde_json::json!(["1/4", "1/3", "1/5", "13/60"])
    );
}

#[test]
fn single_generator_acts_on_parameters() {
    let out = d42sym(&[
        "apply-word",
        "--word",
        "s3",
        "--point",
        "0,0,0,0,1,2,1",
        "--alpha",
        ALPHA,
    ]);
    let v = json(&out);
    assert_eq!(v["q"], "133/120");
    assert_eq!(
        v["alpha"],
        serde_json::json!(["1/4", "1/3", "19/30", "-13/60"])
    );
}

#[test]
fn pole_names_the_letter() {
    let out = d42sym(&[
        "apply-word",
        "--word",
        "s1 s3",
        "--point",
        "0,0,0,1,0,0,1",
        "--alpha",
        ALPHA,
    ]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("letter 2"), "{err}");
}

#[test]
fn bad_inputs_are_usage_errors() {
    let bad_word = d42sym(&[
        "apply-word",
        "--word",
        "s4",
        "--point",
        "0,0,0,0,0,0,1",
        "--alpha",
        ALPHA,
    ]);
    assert_eq!(bad_word.status.code(), Some(2));
    let bad_sum = d42sym(&[
        "apply-word",
        "--word",
        "s1",
        "--point",
        "0,0,0,1,0,0,1",
        "--alpha",
        "1,1,0,0",
    ]);
    assert_eq!(bad_sum.status.code(), Some(2));
    let zero_t = d42sym(&[
        "apply-word",
        "--word",
        "s1",
        "--point",
        "0,0,0,1,0,0,0",
        "--alpha",
        ALPHA,
    ]);
    assert_eq!(zero_t.status.code(), Some(2));
}

#[test]
fn integrate_writes_csv() {
    let path = std::env::temp_dir().join(format!("d42sym-cli-{}.csv", std::process::id()));
    let out = d42sym(&[
        "integrate",
        "--alpha",
        ALPHA,
        "--init",
        "0.1,-0.2,0.3,0.4,-0.1,0.2",
        "--t0",
        "1",
        "--t1",
        "1.2",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let summary = json(&out);
    let csv = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).ok();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("t,x,y,z,w,q,p"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len() as u64, summary["samples"].as_u64().unwrap());
    assert!(rows.iter().all(|r| r.split(',').count() == 7));
    assert_eq!(summary["final_state"][0], 1.2);
}

#[test]
fn ansatz_is_consistent() {
    let out = d42sym(&["ansatz", "--samples", "5"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["dimension_constant"], true);
}
