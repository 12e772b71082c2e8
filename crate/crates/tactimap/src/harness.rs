//! Study instruments over recorded sessions: learning time, gesture counts,
//! answer scoring and the CSV summary export.

use std::fmt::Write as _;

use tactimap_core::study::{Descriptive, Question, SessionMetrics, Summary};

use crate::protocol::{ClientMessage, ServerMessage};
use crate::session::{LogRecord, SessionLog};

pub const CSV_HEADER: &str = "session,learning_min,L,R,S,double_taps,lassos,holds";

/// Repo-authored bank of 6 landmark, 6 route and 6 survey questions over the
/// fixture map.
pub const DEFAULT_QUESTION_BANK_JSON: &str = include_str!("../data/question_bank.json");

pub fn default_question_bank() -> Vec<Question> {
    parse_question_bank(DEFAULT_QUESTION_BANK_JSON).expect("bundled bank is valid")
}

pub fn parse_question_bank(json: &str) -> anyhow::Result<Vec<Question>> {
    let bank: Vec<Question> = serde_json::from_str(json)?;
    let mut ids = std::collections::BTreeSet::new();
    for q in &bank {
        anyhow::ensure!(q.points >= 1, "question `{}` must be worth at least one point", q.id);
        anyhow::ensure!(ids.insert(q.id.as_str()), "duplicate question id `{}`", q.id);
    }
    Ok(bank)
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HarnessError {
    #[error("log has no touch before end_session")]
    IncompleteLog,
}

/// Minutes from the first touch to `end_session`.
pub fn learning_time_minutes(log: &SessionLog) -> Result<f64, HarnessError> {
    let mut first_touch = None;
    for r in log.records() {
        if let LogRecord::In { t_ms, msg } = r {
            match msg {
                ClientMessage::Touch { .. } if first_touch.is_none() => first_touch = Some(*t_ms),
                ClientMessage::EndSession => {
                    let start = first_touch.ok_or(HarnessError::IncompleteLog)?;
                    return Ok((t_ms - start) as f64 / 60_000.0);
                }
                _ => {}
            }
        }
    }
    Err(HarnessError::IncompleteLog)
}

pub fn session_metrics(session: &str, log: &SessionLog) -> Result<SessionMetrics, HarnessError> {
    let mut m = SessionMetrics {
        session: session.to_owned(),
        learning_time_min: learning_time_minutes(log)?,
        ..Default::default()
    };
    for r in log.records() {
        if let LogRecord::Out { msg, .. } = r {
            match msg {
                ServerMessage::Gesture { kind, .. } => match kind.as_str() {
                    "double_tap" => m.double_taps += 1,
                    "lasso" => m.lassos += 1,
                    "hold_activate" => m.holds += 1,
                    _ => {}
                },
                ServerMessage::Speak { .. } | ServerMessage::Earcon { .. } => m.announcements += 1,
                _ => {}
            }
        }
    }
    Ok(m)
}

fn stat_row(label: &str, summary: &Summary, pick: fn(&Descriptive) -> Option<f64>) -> String {
    let cell = |d: &Descriptive| pick(d).map(|v| v.to_string()).unwrap_or_default();
    format!(
        "{label},{},{},{},{},{},{},{}",
        cell(&summary.learning_min),
        cell(&summary.landmark),
        cell(&summary.route),
        cell(&summary.survey),
        cell(&summary.double_taps),
        cell(&summary.lassos),
        cell(&summary.holds),
    )
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_owned()
    }
}

/// One row per session, then `mean` and `sd` rows. An undefined SD (single
/// session) is an empty field.
pub fn render_csv(summary: &Summary) -> String {
    let mut out = String::new();
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in &summary.rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            csv_field(&r.session),
            r.learning_min,
            r.landmark,
            r.route,
            r.survey,
            r.double_taps,
            r.lassos,
            r.holds
        );
    }
    out.push_str(&stat_row("mean", summary, |d| Some(d.mean)));
    out.push('\n');
    out.push_str(&stat_row("sd", summary, |d| d.sd));
    out.push('\n');
    out
}
