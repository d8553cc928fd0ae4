use serde_json::Value;
use std::process::Command;

fn spincount(args: &[&str]) -> (i32, Option<Value>) {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let status = Command::new(env!("CARGO_BIN_EXE_spincount"))
        .args(args)
        .arg("--quiet")
        .arg("--out")
        .arg(&out)
        .status()
        .unwrap();
    let report = std::fs::read(&out).ok().map(|b| serde_json::from_slice(&b).unwrap());
    (status.code().unwrap(), report)
}

fn checks(report: &Value) -> &Vec<Value> {
    report["checks"].as_array().unwrap()
}

#[test]
fn series_suite_passes_with_schema() {
    let (code, report) = spincount(&["--suite", "series", "--trunc", "64"]);
    assert_eq!(code, 0);
    let report = report.unwrap();
    assert_eq!(report["version"], 1);
    assert_eq!(report["config"]["trunc"], 64);
    let ids: Vec<&str> = checks(&report).iter().map(|c| c["check_id"].as_str().unwrap()).collect();
    assert!(ids.contains(&"series.jacobi_theta"), "{ids:?}");
    for c in checks(&report) {
        assert_eq!(c["status"], "pass");
        for key in ["params", "expected", "actual", "runtime_ms", "statement"] {
            assert!(c.get(key).is_some(), "missing {key}");
        }
    }
}

#[test]
fn identity_suite_has_final_check() {
    let (code, report) = spincount(&["--suite", "identity", "--q", "3", "--n-max", "8", "--d-cap", "8"]);
    assert_eq!(code, 0);
    let report = report.unwrap();
    assert!(checks(&report).iter().any(|c| c["check_id"] == "identity.ahat_equals_alpha"));
}

#[test]
fn oracle_suite_reports_class_counts() {
    let (code, report) = spincount(&["--suite", "oracle", "--q", "3"]);
    assert_eq!(code, 0);
    let report = report.unwrap();
    let classes = |t: &str| {
        checks(&report)
            .iter()
            .find(|c| c["check_id"] == "oracle.order" && c["params"]["N"] == "4" && c["params"]["type"] == t)
            .map(|c| c["params"]["classes"].clone())
            .unwrap()
    };
    assert_eq!((classes("plus"), classes("minus")), ("49".into(), "13".into()));
}

#[test]
fn reports_ignore_parallelism() {
    let args = ["--suite", "delta,oracle", "--q", "3", "--n-max", "4", "--no-timing"];
    let (_, one) = spincount(&[&args[..], &["--jobs", "1"]].concat());
    let (_, four) = spincount(&[&args[..], &["--jobs", "4"]].concat());
    assert_eq!(one.unwrap(), four.unwrap());
}

#[test]
fn bad_configuration_exits_two() {
    assert_eq!(spincount(&["--q", "9"]).0, 2);
    assert_eq!(spincount(&["--n-max", "5"]).0, 2);
    assert_eq!(spincount(&["--suite", "nonsense"]).0, 2);
    assert_eq!(spincount(&["--d-cap", "3:0"]).0, 2);
}
