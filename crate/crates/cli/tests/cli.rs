use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use grcoarse_cli::report::{CheckRecord, ErrorRecord, Report, Verdict};
use grcoarse_cli::{has_internal_error, parse_scenario, run_scenario, RunOptions};
use serde_json::{json, Value};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn grcoarse(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_grcoarse")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json_report(args: &[&str]) -> (i32, Report) {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let out = grcoarse(&all);
    let report: Report = serde_json::from_str(&stdout(&out)).expect("report parses");
    (code(&out), report)
}

fn write_temp(dir: &tempfile::TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path
}

#[test]
fn group_algebra_fixture_passes() {
    let f = fixture("group_algebra_z2.json");
    let out = grcoarse(&["run", f.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    let text = stdout(&out);
    // header, one line per check, summary
    assert_eq!(text.lines().count(), 8);
    assert_eq!(text.lines().filter(|l| l.starts_with("PASS")).count(), 6);
}

#[test]
fn every_check_kind_runs() {
    let (exit, report) = json_report(&["run", fixture("tour.json").to_str().unwrap()]);
    assert_eq!(exit, 0);
    assert_eq!(report.counts.pass, report.checks.len());
    let kinds: std::collections::BTreeSet<_> = report.checks.iter().map(|c| c.kind.as_str()).collect();
    assert_eq!(kinds.len(), 14);
}

#[test]
fn expected_iso_with_infinite_kernel_and_non_small_module_fails() {
    let f = fixture("infinite_kernel_expect_iso.json");
    let (exit, report) = json_report(&["hpsi-check", f.to_str().unwrap()]);
    assert_eq!(exit, 1);
    let c = &report.checks[0];
    assert_eq!(c.verdict, Verdict::Fail);
    assert_eq!(c.mismatches, vec!["iso".to_string()]);
    assert_eq!(c.observed["branch"], "neither");

    let f = fixture("infinite_kernel_expect_not_iso.json");
    assert_eq!(code(&grcoarse(&["hpsi-check", f.to_str().unwrap()])), 0);
}

#[test]
fn empty_scenario_gives_empty_report() {
    let (exit, report) = json_report(&["run", fixture("empty.json").to_str().unwrap()]);
    assert_eq!(exit, 0);
    assert!(report.checks.is_empty());
    assert!(report.passed());
}

#[test]
fn json_report_round_trips() {
    let out = grcoarse(&["run", fixture("group_algebra_z2.json").to_str().unwrap(), "--format", "json"]);
    let text = stdout(&out);
    let report: Report = serde_json::from_str(&text).unwrap();
    assert_eq!(report.schema_version, 1);
    assert_eq!(report.to_json(), text.trim_end());
    let again: Report = serde_json::from_str(&report.to_json()).unwrap();
    assert_eq!(again, report);
}

#[test]
fn reports_do_not_depend_on_thread_count() {
    let f = fixture("tour.json");
    let (_, one) = json_report(&["run", f.to_str().unwrap(), "--jobs", "1"]);
    let (_, many) = json_report(&["run", f.to_str().unwrap(), "--jobs", "8"]);
    let (_, default) = json_report(&["run", f.to_str().unwrap()]);
    assert_eq!(one.without_durations().to_json(), many.without_durations().to_json());
    assert_eq!(one.without_durations().to_json(), default.without_durations().to_json());
}

#[test]
fn report_order_follows_scenario_order() {
    let scenario = parse_scenario(&std::fs::read_to_string(fixture("tour.json")).unwrap()).unwrap();
    let report = run_scenario(&scenario, &RunOptions { jobs: Some(4), ..Default::default() }).unwrap();
    let tags: Vec<&str> = scenario.checks.iter().map(|c| c.kind.tag()).collect();
    let kinds: Vec<&str> = report.checks.iter().map(|c| c.kind.as_str()).collect();
    assert_eq!(tags, kinds);
}

#[test]
fn verbs_select_their_check_kinds() {
    let f = fixture("group_algebra_z2.json");
    let (_, r) = json_report(&["hpsi-check", f.to_str().unwrap()]);
    assert!(r.checks.iter().all(|c| c.kind == "hpsi"));
    assert_eq!(r.checks.len(), 2);
    let (_, r) = json_report(&["adjunction-check", f.to_str().unwrap()]);
    assert_eq!(r.checks.len(), 3);
    let (_, r) = json_report(&["coarsen", f.to_str().unwrap()]);
    assert_eq!(r.checks.len(), 1);
    let (_, r) = json_report(&["injective-check", f.to_str().unwrap()]);
    assert!(r.checks.is_empty());
}

#[test]
fn validate_resolves_without_running() {
    let out = grcoarse(&["validate", fixture("tour.json").to_str().unwrap(), "--format", "json"]);
    assert_eq!(code(&out), 0);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v, json!({"valid": true, "checks": 21}));
}

#[test]
fn field_flag_overrides_scenario() {
    let f = fixture("group_algebra_z2.json");
    let (exit, r) = json_report(&["run", f.to_str().unwrap(), "--field", "F3"]);
    assert_eq!(exit, 0);
    assert_eq!(r.field, "F3");
    let out = grcoarse(&["run", f.to_str().unwrap(), "--field", "F4"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn failing_injective_check_carries_a_verifiable_baer_witness() {
    let f = fixture("dual_numbers_injective.json");
    let out = grcoarse(&["injective-check", f.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    let text = stdout(&out);
    assert!(text.contains("FAIL"));
    assert!(text.contains("evidence:") && text.contains("baer_witness"));

    let (_, report) = json_report(&["injective-check", f.to_str().unwrap()]);
    let failing = report.checks.iter().find(|c| c.verdict == Verdict::Fail).unwrap();
    assert_eq!(failing.observed["injective"], false);
    let dir = tempfile::tempdir().unwrap();
    let cert = write_temp(&dir, "baer.json", &failing.evidence.to_string());
    assert_eq!(code(&grcoarse(&["verify", cert.to_str().unwrap()])), 0);

    // the zero morphism always extends, so this is no longer a witness
    let mut tampered = failing.evidence.clone();
    tampered["images"] = json!([[0]]);
    let bad = write_temp(&dir, "tampered.json", &tampered.to_string());
    let out = grcoarse(&["verify", bad.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("INVALID"));
}

#[test]
fn laurent_certificates_verify() {
    let dir = tempfile::tempdir().unwrap();
    for field in ["F2", "F3", "Q"] {
        let path = dir.path().join(format!("laurent_{field}.json"));
        let out = grcoarse(&["counterexample", "laurent", "--field", field, "--out", path.to_str().unwrap()]);
        assert_eq!(code(&out), 0);
        let out = grcoarse(&["verify", path.to_str().unwrap(), "--format", "json"]);
        assert_eq!(code(&out), 0);
        let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
        assert_eq!(v, json!({"certificate": "laurent", "valid": true}));
    }
    let out = grcoarse(&["counterexample", "laurent"]);
    let mut cert: Value = serde_json::from_str(&stdout(&out)).unwrap();
    cert["ungraded_injective"] = json!(true);
    let bad = write_temp(&dir, "bad.json", &cert.to_string());
    assert_eq!(code(&grcoarse(&["verify", bad.to_str().unwrap()])), 1);
}

#[test]
fn unparseable_certificates_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_temp(&dir, "junk.json", r#"{"schema_version": 1, "certificate": "nonsense"}"#);
    assert_eq!(code(&grcoarse(&["verify", p.to_str().unwrap()])), 2);
    let p = write_temp(&dir, "version.json", &{
        let out = grcoarse(&["counterexample", "laurent"]);
        let mut v: Value = serde_json::from_str(&stdout(&out)).unwrap();
        v["schema_version"] = json!(99);
        v.to_string()
    });
    assert_eq!(code(&grcoarse(&["verify", p.to_str().unwrap()])), 2);
}

#[test]
fn bad_scenarios_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let base: Value = serde_json::from_str(&std::fs::read_to_string(fixture("group_algebra_z2.json")).unwrap()).unwrap();
    let cases: Vec<(&str, String)> = vec![
        ("syntax", "{ not json".into()),
        ("version", {
            let mut v = base.clone();
            v["version"] = json!(2);
            v.to_string()
        }),
        ("unknown key", {
            let mut v = base.clone();
            v["extra"] = json!(1);
            v.to_string()
        }),
        ("dangling module", {
            let mut v = base.clone();
            v["checks"][0]["module"] = json!("nope");
            v.to_string()
        }),
        ("dangling ring", {
            let mut v = base.clone();
            v["modules"]["R"]["ring"] = json!("nope");
            v.to_string()
        }),
        ("cycle", {
            let mut v = base.clone();
            v["modules"]["R"] = json!({"kind": "shift", "of": "R1", "by": [1]});
            v.to_string()
        }),
        ("not an epimorphism", {
            let mut v = base.clone();
            v["groups"]["T"] = json!({"rank": 1, "invariants": []});
            v["homs"]["collapse"]["matrix"] = json!([[0]]);
            v.to_string()
        }),
        ("invalid ring", {
            let mut v = base.clone();
            v["rings"]["B"] = json!({"kind": "explicit", "group": "Z2", "basis": [{"name": "x", "degree": [1]}], "one": [1]});
            v.to_string()
        }),
        ("unknown check", {
            let mut v = base.clone();
            v["checks"][0]["check"] = json!("teleport");
            v.to_string()
        }),
    ];
    for (what, text) in cases {
        let p = write_temp(&dir, "s.json", &text);
        let out = grcoarse(&["run", p.to_str().unwrap()]);
        assert_eq!(code(&out), 2, "{what}: {}", String::from_utf8_lossy(&out.stderr));
        assert!(out.stdout.is_empty(), "{what}: no report on input errors");
    }
    assert_eq!(code(&grcoarse(&["run", "/nonexistent/scenario.json"])), 2);
}

#[test]
fn expected_errors_pass_and_unexpected_ones_do_not() {
    let dir = tempfile::tempdir().unwrap();
    let mut v: Value = serde_json::from_str(&std::fs::read_to_string(fixture("tour.json")).unwrap()).unwrap();
    let checks = v["checks"].as_array_mut().unwrap();
    let i = checks.iter().position(|c| c["check"] == "transformations").unwrap();
    let only = checks[i].clone();
    *checks = vec![only.clone()];
    let p = write_temp(&dir, "expected.json", &v.to_string());
    assert_eq!(code(&grcoarse(&["run", p.to_str().unwrap()])), 0);

    v["checks"][0]["expect"] = json!({"delta_alpha_identity": true});
    let p = write_temp(&dir, "unexpected.json", &v.to_string());
    let (exit, r) = json_report(&["run", p.to_str().unwrap()]);
    assert_eq!(exit, 1);
    assert_eq!(r.checks[0].verdict, Verdict::Error);
    assert_eq!(r.checks[0].error.as_ref().unwrap().kind, "infinite_support");

    v["checks"][0].as_object_mut().unwrap().remove("expect");
    let p = write_temp(&dir, "bare.json", &v.to_string());
    assert_eq!(code(&grcoarse(&["run", p.to_str().unwrap()])), 1);
}

#[test]
fn checks_without_expectations_are_informational() {
    let dir = tempfile::tempdir().unwrap();
    let mut v: Value =
        serde_json::from_str(&std::fs::read_to_string(fixture("group_algebra_z2.json")).unwrap()).unwrap();
    for c in v["checks"].as_array_mut().unwrap() {
        c.as_object_mut().unwrap().remove("expect");
    }
    let p = write_temp(&dir, "info.json", &v.to_string());
    let (exit, r) = json_report(&["run", p.to_str().unwrap()]);
    assert_eq!(exit, 0);
    assert_eq!(r.counts.info, 6);
    assert!(r.checks.iter().all(|c| c.verdict == Verdict::Info));
}

fn record(error: Option<&str>) -> CheckRecord {
    CheckRecord {
        name: "c".into(),
        kind: "hpsi".into(),
        inputs: Value::Null,
        expect: None,
        verdict: if error.is_some() { Verdict::Error } else { Verdict::Pass },
        summary: String::new(),
        observed: Default::default(),
        evidence: Value::Null,
        error: error.map(|k| ErrorRecord { kind: k.into(), message: String::new() }),
        mismatches: Vec::new(),
        duration_ms: 0,
    }
}

#[test]
fn soundness_failures_and_panics_are_internal_errors() {
    let ok = Report::new(None, "F2".into(), vec![record(None), record(Some("infinite_kernel"))]);
    assert!(!has_internal_error(&ok));
    for kind in ["soundness", "panic"] {
        let bad = Report::new(None, "F2".into(), vec![record(None), record(Some(kind))]);
        assert!(has_internal_error(&bad));
        assert!(!bad.passed());
    }
}
