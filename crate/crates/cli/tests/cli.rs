use std::process::{Command, Output};

use serde_json::Value;

fn popi(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_popi")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let mut full = args.to_vec();
    full.push("--json");
    let out = popi(&full);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid json")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn card_reports_formula_and_count() {
    let v = json(&["card", "--n", "3", "--y", "1,2"]);
    assert_eq!(v["summary"]["formula"], "13");
    assert_eq!(v["summary"]["enumerated"], 13);
    assert_eq!(v["summary"]["match"], true);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(v["config"]["n"], 3);

    let text = String::from_utf8(popi(&["card", "--n", "3", "--r", "3"]).stdout).unwrap();
    assert!(text.contains("formula=31\n") && text.contains("match=true\n"), "{text}");
}

#[test]
fn rank_report() {
    let v = json(&["rank", "--n", "3", "--y", "1,2"]);
    assert_eq!(v["summary"]["claimed_rank"], 3);
    assert_eq!(v["summary"]["closure_ok"], true);
    assert_eq!(v["summary"]["deletion_test"], "all-fail");
    assert_eq!(v["records"].as_array().unwrap().len(), 3);
}

#[test]
fn iso_with_oracle() {
    let v = json(&["iso", "--n", "5", "--y", "1,2,3", "--z", "1,2,4", "--oracle"]);
    assert_eq!(v["summary"]["verdict"], false);
    assert_eq!(v["summary"]["oracle"], false);
    assert_eq!(v["summary"]["agree"], true);

    let v = json(&["iso", "--n", "4", "--y", "1,2,3", "--z", "4,1,2", "--oracle"]);
    assert_eq!(v["summary"]["verdict"], true);
    assert_eq!(v["summary"]["reason"], "dihedral");
    assert_eq!(v["summary"]["conjugation_verified"], true);
    assert_eq!(v["summary"]["agree"], true);
}

#[test]
fn enumerate_and_green() {
    let v = json(&["enumerate", "--n", "3", "--y", "2,1"]);
    assert_eq!(v["summary"]["count"], 13);
    assert_eq!(v["config"]["y"], serde_json::json!([1, 2]));

    let v = json(&["green", "--n", "3", "--y", "1,2", "--rel", "L", "--check"]);
    assert_eq!(v["summary"]["L_agree"], true);
    assert_eq!(v["summary"]["d_equals_j"], true);
    assert!(v["records"].as_array().unwrap().iter().all(|r| r["relation"] == "L"));
}

#[test]
fn decompose_multiplies_back() {
    let v = json(&["decompose", "--n", "4", "--y", "1,2,4", "--element", "[[2,2]]"]);
    assert_eq!(v["summary"]["product_ok"], true);
    let steps = v["records"].as_array().unwrap();
    assert!(!steps.is_empty());
    assert!(steps.iter().all(|s| s["identity_ok"] == true));

    let v = json(&["decompose", "--n", "3", "--y", "1,2", "--element", r#"{"n":3,"pairs":[[3,1]]}"#]);
    assert_eq!(v["summary"]["product_ok"], true);
}

#[test]
fn output_is_stable_and_csv_is_flat() {
    let a = popi(&["green", "--n", "4", "--y", "1,3", "--json"]).stdout;
    let b = popi(&["green", "--n", "4", "--y", "1,3", "--json"]).stdout;
    assert_eq!(a, b);

    let csv = String::from_utf8(popi(&["enumerate", "--n", "2", "--y", "1", "--csv"]).stdout).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "domain,image,index,map,rank");
    assert_eq!(lines.count(), 3);
}

#[test]
fn out_flag_writes_a_file() {
    let path = std::env::temp_dir().join(format!("popi-cli-test-{}.json", std::process::id()));
    let out = popi(&["card", "--n", "4", "--r", "2", "--json", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    std::fs::remove_file(&path).unwrap();
    assert_eq!(v["summary"]["formula"], "21");
}

#[test]
fn invalid_arguments_exit_with_two() {
    let cases: &[&[&str]] = &[
        &["card", "--n", "3", "--y", "1,1"],
        &["card", "--n", "3", "--y", "4"],
        &["card", "--n", "3"],
        &["enumerate", "--n", "3", "--y", "x"],
        &["rank", "--n", "0", "--y", "1"],
        &["iso", "--n", "4", "--y", "1", "--z", "5"],
        &["decompose", "--n", "3", "--y", "1,2,3", "--element", "[[1,1]]"],
        &["decompose", "--n", "3", "--y", "1,2", "--element", "[[1,3]]"],
        &["green", "--n", "3", "--y", "1", "--rel", "Q"],
        &["selftest", "--max-n", "0"],
    ];
    for args in cases {
        let out = popi(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        let err = stderr(&out);
        assert!(err.starts_with("error: kind="), "{err}");
        assert_eq!(err.trim_end().lines().count(), 1, "{err}");
    }
}

#[test]
fn selftest_passes() {
    let out = popi(&["selftest", "--max-n", "4"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let v = json(&["selftest", "--max-n", "3"]);
    assert_eq!(v["summary"]["passed"], true);
}
