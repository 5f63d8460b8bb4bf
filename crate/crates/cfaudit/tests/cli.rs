//! Black-box tests of the `cfaudit` binary: streams, JSON determinism, and
//! the edit workflow on real files.

use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cfaudit"))
        .args(args)
        .output()
        .expect("binary runs")
}

#[test]
fn propagate_reports_chained_hypotheses() {
    let out = run(&["propagate", "tests/fixtures/holmes.cfr"]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("burglary"));
    assert!(stdout.contains("earthquake"));
}

#[test]
fn propagate_accepts_evidence_overrides() {
    let out = run(&[
        "propagate",
        "tests/fixtures/holmes.cfr",
        "--evidence",
        "phone_call=0.5",
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let body: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(body["evidence"]["phone_call"], 0.5);
}

#[test]
fn lint_findings_go_to_stdout_and_notes_to_stderr() {
    let out = run(&["lint", "tests/fixtures/holmes.cfr"]);
    assert_eq!(out.status.code(), Some(1));
    let stdout = String::from_utf8(out.stdout).unwrap();
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stdout.contains("divergent-link"));
    assert!(stderr.contains("convergent"));
}

#[test]
fn json_output_is_stable_across_runs() {
    for args in [
        vec!["lint", "tests/fixtures/holmes.cfr", "--format", "json"],
        vec![
            "audit",
            "urn:1W1B,2W0B,0W2B;draws=2;replace=true",
            "--hypothesis",
            "urn=1",
            "--format",
            "json",
        ],
    ] {
        let first = run(&args);
        let second = run(&args);
        assert_eq!(first.stdout, second.stdout);
        serde_json::from_slice::<serde_json::Value>(&first.stdout).expect("valid json");
    }
}

#[test]
fn audit_accepts_explicit_events_on_a_diagram() {
    let out = run(&[
        "audit",
        "tests/fixtures/three_urn.idg",
        "--hypothesis",
        "Identity=H1",
        "--evidence",
        "Color=White",
        "--evidence",
        "Color!=White",
    ]);
    // The two events partition the space: conditioning either on the other
    // leaves nothing, which surfaces as undefined-context findings.
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8(out.stdout)
        .unwrap()
        .contains("undefined-context"));

    // One event entailing another is rejected outright.
    let out = run(&[
        "audit",
        "tests/fixtures/three_urn.idg",
        "--hypothesis",
        "Identity=H1",
        "--evidence",
        "Color=White",
        "--evidence",
        "Color!=Black",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().starts_with("error:"));
}

#[test]
fn infer_prints_a_probability() {
    let out = run(&[
        "infer",
        "tests/fixtures/holmes.idg",
        "--query",
        "Burglary=true",
        "--given",
        "PhoneCall=true",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let p: f64 = String::from_utf8(out.stdout)
        .unwrap()
        .trim()
        .parse()
        .unwrap();
    assert!(p > 0.0 && p < 1.0);
}

#[test]
fn check_ci_explains_itself() {
    let out = run(&[
        "check-ci",
        "tests/fixtures/holmes.idg",
        "--a",
        "Burglary",
        "--b",
        "Earthquake",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim(), "true");
    assert!(String::from_utf8(out.stderr)
        .unwrap()
        .contains("product of marginals"));
}

#[test]
fn edit_writes_the_new_diagram_and_reports_stale_nodes() {
    let dir = std::env::temp_dir().join("cfaudit-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("holmes.idg");
    std::fs::copy("tests/fixtures/holmes.idg", &path).unwrap();
    let path = path.to_str().unwrap();

    let out = run(&[
        "edit",
        path,
        "add-node",
        "--name",
        "AprilFools",
        "--arc",
        "AprilFools:PhoneCall",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("stale: AprilFools, PhoneCall"));

    // The saved file remembers which nodes still await reassessment.
    let out = run(&["infer", path, "--query", "Burglary=true"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("stale"));

    // Reassess both tables and the diagram is usable again.
    let april = dir.join("april.json");
    std::fs::write(&april, r#"{ "parents": [], "rows": { "": [0.01, 0.99] } }"#).unwrap();
    let out = run(&[
        "edit",
        path,
        "set-cpt",
        "--node",
        "AprilFools",
        "--cpt",
        april.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));

    let phone = dir.join("phone.json");
    std::fs::write(
        &phone,
        r#"{ "parents": ["Alarm", "AprilFools"],
             "rows": { "true,true": [0.9, 0.1], "true,false": [0.8, 0.2],
                       "false,true": [0.5, 0.5], "false,false": [0.05, 0.95] } }"#,
    )
    .unwrap();
    let out = run(&[
        "edit",
        path,
        "set-cpt",
        "--node",
        "PhoneCall",
        "--cpt",
        phone.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));

    let out = run(&[
        "infer",
        path,
        "--query",
        "Burglary=true",
        "--given",
        "PhoneCall=true",
    ]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn malformed_inputs_exit_two() {
    for args in [
        vec!["propagate", "no-such-file.cfr"],
        vec!["audit", "urn:0W0B", "--hypothesis", "urn=1"],
        vec!["audit", "urn:1W2B,2W1B", "--hypothesis", "not an event"],
        vec!["infer", "tests/fixtures/holmes.idg", "--query", "Nope=true"],
    ] {
        let out = run(&args);
        assert_eq!(out.status.code(), Some(2), "args: {args:?}");
        assert!(out.stdout.is_empty());
        assert!(!out.stderr.is_empty());
    }
}
