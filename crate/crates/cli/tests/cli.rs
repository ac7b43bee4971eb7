use std::process::{Command, Output};

fn hodgelab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hodgelab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

#[test]
fn verify_prop_4_1_passes_and_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let o = hodgelab(&["verify", "prop-4.1", "--dim", "4,6", "--seeds", "1..100", "--backend", "exact", "--json", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["campaign"], "prop-4.1");
    assert_eq!(v["cases"].as_array().unwrap().len(), 200);
    assert_eq!(v["summary"]["all_pass"], true);
    assert_eq!(v["cases"][0]["seed"], 1);
}

#[test]
fn lemma_5_5_reports_zero_kernel() {
    let o = hodgelab(&["verify", "lemma-5.5", "--dim", "6,8"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    for case in v["cases"].as_array().unwrap() {
        assert_eq!(case["value"], 0);
        assert!(case["seed"].is_null());
    }
}

#[test]
fn unknown_campaign_is_a_usage_error() {
    let o = hodgelab(&["verify", "lemma-0.0"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("unknown campaign"));
}

#[test]
fn bad_flags_are_usage_errors() {
    assert_eq!(code(&hodgelab(&["verify", "prop-2.3", "--dim", "5"])), 2);
    assert_eq!(code(&hodgelab(&["verify", "prop-2.3", "--seeds", "9..1"])), 2);
    assert_eq!(code(&hodgelab(&["verify", "prop-4.2", "--backend", "exact"])), 2);
    assert_eq!(code(&hodgelab(&["verify", "prop-4.1", "--backend", "quad"])), 2);
    assert_eq!(code(&hodgelab(&["frobnicate"])), 2);
}

#[test]
fn failing_cases_exit_one() {
    let o = hodgelab(&["verify", "lemma-4.4", "--seeds", "1..2"]);
    assert_eq!(code(&o), 1);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["summary"]["failed"], 2);
}

#[test]
fn decompose_rank_two_skew() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("a.json");
    std::fs::write(&f, r#"{"dim": 4, "matrix": [0,-2,0,0, 2,0,0,0, 0,0,0,0, 0,0,0,0]}"#).unwrap();
    let o = hodgelab(&["decompose", f.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["kind"], "endomorphism");
    assert_eq!(v["kernel_rank"], 2);
    let c = &v["clusters"][0];
    assert!((c["mu"].as_f64().unwrap() + 4.0).abs() < 1e-9);
    assert_eq!(c["omega"]["terms"][0]["index"], serde_json::json!([1, 2]));
}

#[test]
fn decompose_form_reports_bidegrees() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("w.json");
    std::fs::write(
        &f,
        r#"{"dim": 4, "degree": 2, "backend": "exact", "terms": [
            {"index": [1,3], "num": 1, "den": 1}, {"index": [1,2], "num": 1, "den": 2}]}"#,
    )
    .unwrap();
    let o = hodgelab(&["decompose", f.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["kind"], "form");
    let parts = v["bidegree"].as_array().unwrap();
    let kinds: Vec<(u64, u64)> = parts.iter().map(|p| (p["p"].as_u64().unwrap(), p["q"].as_u64().unwrap())).collect();
    assert_eq!(kinds, [(2, 0), (1, 1), (0, 2)]);
    assert!(v["spectral"].is_object());
}

#[test]
fn decompose_parse_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("bad.json");
    std::fs::write(&f, "{\"dim\": 3, \"degree\": 1, \"backend\": \"exact\", \"terms\": [{\"index\": [4], \"num\": 1, \"den\": 1}]}").unwrap();
    assert_eq!(code(&hodgelab(&["decompose", f.to_str().unwrap()])), 2);
    std::fs::write(&f, "not json").unwrap();
    assert_eq!(code(&hodgelab(&["decompose", f.to_str().unwrap()])), 2);
    assert_eq!(code(&hodgelab(&["decompose", "/nonexistent/x.json"])), 2);
}

#[test]
fn decompose_ill_conditioned_spectrum_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("c.json");
    std::fs::write(&f, r#"{"dim": 2, "matrix": [0, -1e200, 1e200, 0]}"#).unwrap();
    let o = hodgelab(&["decompose", f.to_str().unwrap()]);
    assert_eq!(code(&o), 3);
    assert!(String::from_utf8_lossy(&o.stderr).contains("ill-conditioned"));
}

#[test]
fn list_names_every_campaign() {
    let o = hodgelab(&["list"]);
    assert_eq!(code(&o), 0);
    assert_eq!(String::from_utf8_lossy(&o.stdout).lines().count(), 14);
}
