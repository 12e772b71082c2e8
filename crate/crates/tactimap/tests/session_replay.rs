mod common;

use std::sync::Arc;

use common::{fuzz_session, run_session};
use tactimap::session::LogError;
use tactimap::{
    replay_log, verify_replay, ClientMessage, EngineConfig, LogRecord, MapRegistry, ServerMessage, Session, SessionLog,
};

fn registry() -> Arc<MapRegistry> {
    Arc::new(MapRegistry::default())
}

#[test]
fn fuzzed_sessions_replay_identically() {
    for seed in 0..20 {
        let (session, out) = run_session(&fuzz_session(seed));
        let text = session.log().to_jsonl();
        let log = SessionLog::parse_jsonl(&text).unwrap();
        assert_eq!(&log, session.log());
        let replayed = verify_replay(&log, EngineConfig::default(), registry()).unwrap();
        let live: String = out.iter().map(|m| m.to_json() + "\n").collect();
        assert_eq!(replayed, live, "seed {seed}");
        assert_eq!(replay_log(&log, EngineConfig::default(), registry()).unwrap(), replayed);
    }
}

#[test]
fn tampered_log_is_reported_as_divergent() {
    let (session, _) = run_session(&fuzz_session(3));
    let mut records = session.log().records().to_vec();
    let at = records
        .iter()
        .position(|r| {
            matches!(
                r,
                LogRecord::Out {
                    msg: ServerMessage::Speak { .. },
                    ..
                }
            )
        })
        .expect("session speaks at least once");
    if let LogRecord::Out {
        msg: ServerMessage::Speak { text, .. },
        ..
    } = &mut records[at]
    {
        text.push('!');
    }
    let log = SessionLog::from_records(records).unwrap();
    let err = verify_replay(&log, EngineConfig::default(), registry()).unwrap_err();
    assert!(
        matches!(err.downcast_ref::<LogError>(), Some(LogError::Divergence { .. })),
        "{err}"
    );
}

#[test]
fn malformed_logs_are_rejected() {
    assert!(SessionLog::parse_jsonl("").is_err());
    assert!(SessionLog::parse_jsonl("{not json}\n").is_err());
    let touch_first = r#"{"dir":"in","t_ms":0,"msg":{"type":"end_session"}}"#;
    assert!(matches!(
        SessionLog::parse_jsonl(touch_first),
        Err(LogError::MalformedLog { .. })
    ));
    let backwards = concat!(
        r#"{"dir":"in","t_ms":5,"msg":{"type":"load_map","map_id":"fixture"}}"#,
        "\n",
        r#"{"dir":"out","t_ms":4,"msg":{"type":"map_loaded","elements":19},"cause_seq":0}"#,
    );
    assert!(SessionLog::parse_jsonl(backwards).is_err());
    let bad_cause = concat!(
        r#"{"dir":"in","t_ms":5,"msg":{"type":"load_map","map_id":"fixture"}}"#,
        "\n",
        r#"{"dir":"out","t_ms":5,"msg":{"type":"map_loaded","elements":19},"cause_seq":3}"#,
    );
    assert!(SessionLog::parse_jsonl(bad_cause).is_err());
}

#[test]
fn sessions_do_not_share_state() {
    let a = fuzz_session(10);
    let b = fuzz_session(11);
    let (_, alone_a) = run_session(&a);
    let (_, alone_b) = run_session(&b);
    let mut sa = Session::new(EngineConfig::default(), registry()).unwrap();
    let mut sb = Session::new(EngineConfig::default(), registry()).unwrap();
    let (mut out_a, mut out_b) = (Vec::new(), Vec::new());
    for i in 0..a.len().max(b.len()) {
        if let Some(m) = a.get(i) {
            out_a.extend(sa.handle_client_message(m.clone()));
        }
        if let Some(m) = b.get(i) {
            out_b.extend(sb.handle_client_message(m.clone()));
        }
    }
    assert_eq!(out_a, alone_a);
    assert_eq!(out_b, alone_b);
}

#[test]
fn messages_before_a_map_are_refused_and_not_logged() {
    let (session, out) = run_session(&[ClientMessage::SelectLevel { level: 2 }]);
    assert!(matches!(&out[..], [ServerMessage::Error { code, .. }] if code == "no-map"));
    assert!(session.log().is_empty());
}

#[test]
fn nothing_is_accepted_after_end_session() {
    let (_, out) = run_session(&[
        ClientMessage::load_map_id("fixture"),
        ClientMessage::EndSession,
        ClientMessage::SelectLevel { level: 1 },
    ]);
    assert!(matches!(out.last(), Some(ServerMessage::Error { code, .. }) if code == "session-ended"));
}

#[test]
fn unknown_and_broken_maps_are_errors() {
    let (_, out) = run_session(&[
        ClientMessage::load_map_id("atlantis"),
        ClientMessage::load_map_svg("<svg"),
    ]);
    let codes: Vec<&str> = out
        .iter()
        .filter_map(|m| match m {
            ServerMessage::Error { code, .. } => Some(code.as_str()),
            _ => None,
        })
        .collect();
    assert_eq!(codes, ["unknown-map", "parse"]);
}
