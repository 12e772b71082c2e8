//! Landmark, route and survey scoring plus descriptive statistics.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KnowledgeKind {
    Landmark,
    Route,
    Survey,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AnswerKey {
    /// A single canonical answer.
    Text(String),
    /// Element ids; the given answer is a comma-separated list compared as a set.
    Elements(Vec<String>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Question {
    pub id: String,
    pub kind: KnowledgeKind,
    pub prompt: String,
    pub answer_key: AnswerKey,
    pub points: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnswerSheet {
    pub session: String,
    pub answers: Vec<(String, String)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct SpatialScores {
    pub landmark: f64,
    pub route: f64,
    pub survey: f64,
    pub max_landmark: f64,
    pub max_route: f64,
    pub max_survey: f64,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum StudyError {
    #[error("answer sheet references unknown question `{0}`")]
    UnknownQuestion(String),
    #[error("question `{0}` answered more than once")]
    DuplicateAnswer(String),
    #[error("question `{0}` must be worth at least one point")]
    ZeroPoints(String),
    #[error("nothing to summarize")]
    EmptyInput,
    #[error("{metrics} metric rows but {scores} score rows")]
    LengthMismatch { metrics: usize, scores: usize },
}

/// Lowercase, trim and collapse inner whitespace.
pub fn normalize_answer(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for word in s.split_whitespace() {
        if !out.is_empty() {
            out.push(' ');
        }
        out.extend(word.chars().flat_map(char::to_lowercase));
    }
    out
}

fn is_correct(key: &AnswerKey, given: &str) -> bool {
    match key {
        AnswerKey::Text(expected) => normalize_answer(expected) == normalize_answer(given),
        AnswerKey::Elements(ids) => {
            let expected: BTreeSet<String> = ids.iter().map(|s| normalize_answer(s)).collect();
            let got: BTreeSet<String> = given
                .split(',')
                .map(normalize_answer)
                .filter(|s| !s.is_empty())
                .collect();
            expected == got
        }
    }
}

pub fn score_answers(bank: &[Question], sheet: &AnswerSheet) -> Result<SpatialScores, StudyError> {
    let by_id: BTreeMap<&str, &Question> = bank.iter().map(|q| (q.id.as_str(), q)).collect();
    let mut scores = SpatialScores::default();
    for q in bank {
        if q.points == 0 {
            return Err(StudyError::ZeroPoints(q.id.clone()));
        }
        let points = f64::from(q.points);
        match q.kind {
            KnowledgeKind::Landmark => scores.max_landmark += points,
            KnowledgeKind::Route => scores.max_route += points,
            KnowledgeKind::Survey => scores.max_survey += points,
        }
    }
    let mut answered = BTreeSet::new();
    for (question_id, given) in &sheet.answers {
        let q = by_id
            .get(question_id.as_str())
            .ok_or_else(|| StudyError::UnknownQuestion(question_id.clone()))?;
        if !answered.insert(question_id.as_str()) {
            return Err(StudyError::DuplicateAnswer(question_id.clone()));
        }
        if is_correct(&q.answer_key, given) {
            let points = f64::from(q.points);
            match q.kind {
                KnowledgeKind::Landmark => scores.landmark += points,
                KnowledgeKind::Route => scores.route += points,
                KnowledgeKind::Survey => scores.survey += points,
            }
        }
    }
    Ok(scores)
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct SessionMetrics {
    pub session: String,
    pub learning_time_min: f64,
    pub double_taps: u64,
    pub lassos: u64,
    pub holds: u64,
    pub announcements: u64,
}

/// Mean and sample standard deviation; `sd` is absent for a single value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Descriptive {
    pub mean: f64,
    pub sd: Option<f64>,
}

pub fn describe(values: &[f64]) -> Option<Descriptive> {
    if values.is_empty() {
        return None;
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let sd = (values.len() > 1).then(|| {
        let ss: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
        libm::sqrt(ss / (n - 1.0))
    });
    Some(Descriptive { mean, sd })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub session: String,
    pub learning_min: f64,
    pub landmark: f64,
    pub route: f64,
    pub survey: f64,
    pub double_taps: u64,
    pub lassos: u64,
    pub holds: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub rows: Vec<SummaryRow>,
    pub learning_min: Descriptive,
    pub landmark: Descriptive,
    pub route: Descriptive,
    pub survey: Descriptive,
    pub double_taps: Descriptive,
    pub lassos: Descriptive,
    pub holds: Descriptive,
}

pub fn summarize_sessions(metrics: &[SessionMetrics], scores: &[SpatialScores]) -> Result<Summary, StudyError> {
    if metrics.is_empty() || scores.is_empty() {
        return Err(StudyError::EmptyInput);
    }
    if metrics.len() != scores.len() {
        return Err(StudyError::LengthMismatch {
            metrics: metrics.len(),
            scores: scores.len(),
        });
    }
    let rows: Vec<SummaryRow> = metrics
        .iter()
        .zip(scores)
        .map(|(m, s)| SummaryRow {
            session: m.session.clone(),
            learning_min: m.learning_time_min,
            landmark: s.landmark,
            route: s.route,
            survey: s.survey,
            double_taps: m.double_taps,
            lassos: m.lassos,
            holds: m.holds,
        })
        .collect();
    let column = |f: fn(&SummaryRow) -> f64| {
        let values: Vec<f64> = rows.iter().map(f).collect();
        describe(&values).expect("rows are non-empty")
    };
    Ok(Summary {
        learning_min: column(|r| r.learning_min),
        landmark: column(|r| r.landmark),
        route: column(|r| r.route),
        survey: column(|r| r.survey),
        double_taps: column(|r| r.double_taps as f64),
        lassos: column(|r| r.lassos as f64),
        holds: column(|r| r.holds as f64),
        rows,
    })
}
