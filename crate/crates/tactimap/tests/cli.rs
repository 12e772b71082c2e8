mod common;

use std::path::Path;
use std::process::{Command, Output};

use common::{fuzz_session, run_session};
use tactimap::core::fixture_city_map;
use tactimap::harness::CSV_HEADER;
use tactimap::serialize_map;

fn tactimap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tactimap"))
        .args(args)
        .output()
        .unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn validate_accepts_the_fixture_and_flags_crowding() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("city.svg");
    std::fs::write(&good, serialize_map(&fixture_city_map())).unwrap();
    let out = tactimap(&["validate", "--map", path(&good)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stdout).contains("19 elements, 0 issues"));

    let crowded = dir.path().join("crowded.svg");
    std::fs::write(
        &crowded,
        r#"<svg viewBox="0 0 100 100" data-scale-m-per-mm="1">
            <path data-kind="street" data-id="a" data-name="A" d="M 10 10 L 90 10"/>
            <path data-kind="street" data-id="b" data-name="B" d="M 10 11 L 90 11"/>
        </svg>"#,
    )
    .unwrap();
    let out = tactimap(&["validate", "--map", path(&crowded)]);
    assert!(out.status.success(), "warnings alone do not fail validation");
    assert!(String::from_utf8_lossy(&out.stdout).contains("warning\tline-separation"));

    let broken = dir.path().join("broken.svg");
    std::fs::write(
        &broken,
        "<svg data-scale-m-per-mm=\"1\"><circle data-kind=\"poi\"/></svg>",
    )
    .unwrap();
    assert!(!tactimap(&["validate", "--map", path(&broken)]).status.success());
}

#[test]
fn replay_and_study_work_on_a_recorded_log() {
    let dir = tempfile::tempdir().unwrap();
    let (session, live) = run_session(&fuzz_session(8));
    let log = dir.path().join("p01.jsonl");
    std::fs::write(&log, session.log().to_jsonl()).unwrap();

    let transcript = dir.path().join("out.jsonl");
    let out = tactimap(&["replay", "--log", path(&log), "--out", path(&transcript)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let live_text: String = live.iter().map(|m| m.to_json() + "\n").collect();
    assert_eq!(std::fs::read_to_string(&transcript).unwrap(), live_text);

    let answers = dir.path().join("p01.json");
    std::fs::write(
        &answers,
        r#"{"session":"p01","answers":[["L1","Town Hall"],["S3","museum"]]}"#,
    )
    .unwrap();
    let csv = dir.path().join("summary.csv");
    let out = tactimap(&[
        "study",
        "--logs",
        path(&log),
        "--answers",
        path(&answers),
        "--out",
        path(&csv),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], CSV_HEADER);
    assert!(lines[1].starts_with("p01,"));
    assert!(lines[2].starts_with("mean,"));
    assert!(lines[3].starts_with("sd,"));
}

#[test]
fn replay_reports_a_tampered_log() {
    let dir = tempfile::tempdir().unwrap();
    let (session, _) = run_session(&fuzz_session(9));
    let text = session
        .log()
        .to_jsonl()
        .replacen("\"elements\":19", "\"elements\":18", 1);
    let log = dir.path().join("tampered.jsonl");
    std::fs::write(&log, text).unwrap();
    let out = tactimap(&["replay", "--log", path(&log), "--out", path(&dir.path().join("x"))]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("diverged"));
}
