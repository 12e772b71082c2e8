//! One client session: protocol handling, event-sourced logging and replay.
//!
//! Time is whatever the client says it is. Every `touch` carries `t_ms`; the
//! other messages are stamped with the latest touch time seen. Nothing reads
//! the wall clock, so feeding the same `in` records to a fresh session always
//! reproduces the same `out` records.

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use tactimap_core::controller::{Announcement, Controller};
use tactimap_core::gesture::{GestureError, Recognizer, TouchSample};
use tactimap_core::speech::{pump, SpeechBackend, SpeechQueue, Utterance};
use tactimap_core::SpatialIndex;

use crate::config::{EngineConfig, MapRegistry};
use crate::protocol::{ClientMessage, ErrorCode, MapSource, ServerMessage};
use crate::svg::parse_map;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "dir", rename_all = "lowercase")]
pub enum LogRecord {
    In {
        t_ms: u64,
        msg: ClientMessage,
    },
    Out {
        t_ms: u64,
        msg: ServerMessage,
        /// Index of the `in` record that caused this output.
        cause_seq: usize,
    },
}

impl LogRecord {
    pub fn t_ms(&self) -> u64 {
        match self {
            LogRecord::In { t_ms, .. } | LogRecord::Out { t_ms, .. } => *t_ms,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum LogError {
    #[error("malformed log at line {line}: {reason}")]
    MalformedLog { line: usize, reason: String },
    #[error("replay diverged at output {index}: recorded {recorded:?}, replayed {replayed:?}")]
    Divergence {
        index: usize,
        recorded: Option<String>,
        replayed: Option<String>,
    },
}

fn malformed(line: usize, reason: impl Into<String>) -> LogError {
    LogError::MalformedLog {
        line,
        reason: reason.into(),
    }
}

/// Append-only record of a session, serialized as JSON Lines.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SessionLog {
    records: Vec<LogRecord>,
}

impl SessionLog {
    pub fn records(&self) -> &[LogRecord] {
        &self.records
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    fn push(&mut self, record: LogRecord) -> usize {
        self.records.push(record);
        self.records.len() - 1
    }

    /// Builds a log from records, checking the log invariants.
    pub fn from_records(records: Vec<LogRecord>) -> Result<Self, LogError> {
        let log = SessionLog { records };
        log.check()?;
        Ok(log)
    }

    pub fn parse_jsonl(text: &str) -> Result<Self, LogError> {
        let records = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty())
            .map(|(i, l)| serde_json::from_str::<LogRecord>(l).map_err(|e| malformed(i + 1, e.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        SessionLog::from_records(records)
    }

    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            out.push_str(&serde_json::to_string(r).expect("log records always serialize"));
            out.push('\n');
        }
        out
    }

    /// First record is an incoming `load_map`, times never decrease, and every
    /// output points at the latest preceding input.
    pub fn check(&self) -> Result<(), LogError> {
        match self.records.first() {
            None => return Err(malformed(0, "log is empty")),
            Some(LogRecord::In { msg, .. }) if msg.is_load_map() => {}
            Some(_) => return Err(malformed(1, "first record must be an incoming load_map")),
        }
        let mut last_t = 0;
        let mut last_in = 0;
        for (i, r) in self.records.iter().enumerate() {
            if r.t_ms() < last_t {
                return Err(malformed(i + 1, format!("t_ms {} after {}", r.t_ms(), last_t)));
            }
            last_t = r.t_ms();
            match r {
                LogRecord::In { .. } => last_in = i,
                LogRecord::Out { cause_seq, .. } if *cause_seq != last_in => {
                    return Err(malformed(
                        i + 1,
                        format!("cause_seq {cause_seq} does not name the latest input {last_in}"),
                    ))
                }
                LogRecord::Out { .. } => {}
            }
        }
        Ok(())
    }

    /// Recorded outputs rendered one JSON message per line.
    pub fn recorded_transcript(&self) -> String {
        render(self.records.iter().filter_map(|r| match r {
            LogRecord::Out { msg, .. } => Some(msg),
            LogRecord::In { .. } => None,
        }))
    }
}

fn render<'a>(messages: impl Iterator<Item = &'a ServerMessage>) -> String {
    let mut out = String::new();
    for m in messages {
        out.push_str(&m.to_json());
        out.push('\n');
    }
    out
}

struct Outbox<'a>(&'a mut Vec<ServerMessage>);

impl SpeechBackend for Outbox<'_> {
    fn start(&mut self, utterance: &Utterance, _now_ms: u64) {
        self.0.push(ServerMessage::from(utterance.payload.clone()));
    }

    // Speech completes as soon as it starts, so nothing is ever cancelled.
    fn cancel(&mut self, _utterance: &Utterance, _now_ms: u64) {}
}

pub struct Session {
    config: EngineConfig,
    registry: Arc<MapRegistry>,
    recognizer: Recognizer,
    controller: Controller,
    queue: SpeechQueue,
    clock_ms: u64,
    ended: bool,
    log: SessionLog,
}

impl Session {
    pub fn new(config: EngineConfig, registry: Arc<MapRegistry>) -> anyhow::Result<Self> {
        Ok(Session {
            recognizer: Recognizer::new(config.gesture)?,
            controller: Controller::new(config.controller),
            queue: SpeechQueue::new(),
            clock_ms: 0,
            ended: false,
            log: SessionLog::default(),
            config,
            registry,
        })
    }

    pub fn log(&self) -> &SessionLog {
        &self.log
    }

    pub fn is_ended(&self) -> bool {
        self.ended
    }

    pub fn map_loaded(&self) -> bool {
        self.controller.index().is_some()
    }

    /// Handles one client message and returns the responses in emission order.
    ///
    /// Recording starts with the first `load_map`; messages rejected before
    /// that, or after `end_session`, are answered but not logged.
    pub fn handle_client_message(&mut self, msg: ClientMessage) -> Vec<ServerMessage> {
        if self.ended {
            return vec![ServerMessage::error(ErrorCode::SessionEnded, "session already ended")];
        }
        if self.log.is_empty() && !msg.is_load_map() {
            if matches!(msg, ClientMessage::EndSession) {
                self.ended = true;
                return Vec::new();
            }
            return vec![ServerMessage::error(ErrorCode::NoMap, "load a map first")];
        }
        if let ClientMessage::Touch { t_ms, .. } = msg {
            self.clock_ms = self.clock_ms.max(t_ms);
        }
        let cause = self.log.push(LogRecord::In {
            t_ms: self.clock_ms,
            msg: msg.clone(),
        });
        let out = self.dispatch(msg);
        for m in &out {
            self.log.push(LogRecord::Out {
                t_ms: self.clock_ms,
                msg: m.clone(),
                cause_seq: cause,
            });
        }
        out
    }

    fn dispatch(&mut self, msg: ClientMessage) -> Vec<ServerMessage> {
        match msg {
            ClientMessage::LoadMap(source) => self.load(source),
            ClientMessage::Touch {
                phase,
                touch_id,
                x,
                y,
                t_ms,
            } => self.touch(TouchSample {
                phase,
                touch_id,
                x,
                y,
                t_ms,
            }),
            ClientMessage::SelectLevel { level } => {
                if !self.map_loaded() {
                    return vec![ServerMessage::error(ErrorCode::NoMap, "load a map first")];
                }
                let a = self.controller.select_level(level);
                self.speak(vec![a])
            }
            ClientMessage::EndSession => {
                self.ended = true;
                Vec::new()
            }
        }
    }

    fn load(&mut self, source: MapSource) -> Vec<ServerMessage> {
        let index = match source {
            MapSource::Id { map_id } => match self.registry.get(&map_id) {
                Some(index) => Arc::clone(index),
                None => {
                    return vec![ServerMessage::error(
                        ErrorCode::UnknownMap,
                        format!("no map with id `{map_id}`"),
                    )]
                }
            },
            MapSource::Inline { svg } => match parse_map(&svg) {
                Ok(doc) => Arc::new(SpatialIndex::build(
                    Arc::new(doc),
                    tactimap_core::spatial::DEFAULT_CELL_MM,
                )),
                Err(e) => return vec![ServerMessage::error(ErrorCode::Parse, e.to_string())],
            },
        };
        let doc = index.document();
        self.recognizer = Recognizer::new(self.config.gesture)
            .expect("validated at session start")
            .with_canvas(doc.canvas_width_mm(), doc.canvas_height_mm());
        let elements = doc.len();
        self.controller.load(index);
        self.queue = SpeechQueue::new();
        vec![ServerMessage::MapLoaded { elements }]
    }

    fn touch(&mut self, sample: TouchSample) -> Vec<ServerMessage> {
        if !self.map_loaded() {
            return vec![ServerMessage::error(ErrorCode::NoMap, "load a map first")];
        }
        let mut events = match self.recognizer.feed_sample(&sample) {
            Ok(events) => events,
            Err(e) => {
                let code = match e {
                    GestureError::OutOfOrderTimestamp { .. } => ErrorCode::OutOfOrder,
                    GestureError::UnknownTouchId(_) => ErrorCode::UnknownTouch,
                    GestureError::DuplicateTouchId(_) => ErrorCode::DuplicateTouch,
                    GestureError::TooManyContacts | GestureError::InvalidConfig(_) => ErrorCode::TooManyContacts,
                };
                return vec![ServerMessage::error(code, e.to_string())];
            }
        };
        events.extend(self.recognizer.advance_time(sample.t_ms).expect("time already checked"));

        let mut out = Vec::new();
        for event in events {
            let reaction = self.controller.react(&event, event.t_ms).expect("map is loaded");
            out.push(ServerMessage::Gesture {
                kind: event.kind.name().to_owned(),
                element_id: reaction.target,
            });
            out.extend(self.speak(reaction.announcements));
        }
        out
    }

    fn speak(&mut self, announcements: Vec<Announcement>) -> Vec<ServerMessage> {
        for a in announcements {
            self.queue.enqueue(a, self.clock_ms);
        }
        let mut out = Vec::new();
        pump(&mut self.queue, &mut Outbox(&mut out), self.clock_ms);
        out
    }
}

/// Re-runs every `in` record of `log` through a fresh session and renders the
/// outputs one JSON message per line.
pub fn replay_log(log: &SessionLog, config: EngineConfig, registry: Arc<MapRegistry>) -> anyhow::Result<String> {
    log.check()?;
    let mut session = Session::new(config, registry)?;
    let mut produced = Vec::new();
    for r in log.records() {
        if let LogRecord::In { msg, .. } = r {
            produced.extend(session.handle_client_message(msg.clone()));
        }
    }
    Ok(render(produced.iter()))
}

/// Replays `log` and checks the result against its recorded outputs.
pub fn verify_replay(log: &SessionLog, config: EngineConfig, registry: Arc<MapRegistry>) -> anyhow::Result<String> {
    let replayed = replay_log(log, config, registry)?;
    let recorded = log.recorded_transcript();
    if replayed != recorded {
        let (mut a, mut b) = (recorded.lines(), replayed.lines());
        let mut index = 0;
        loop {
            let (ra, rb) = (a.next(), b.next());
            if ra != rb {
                return Err(LogError::Divergence {
                    index,
                    recorded: ra.map(str::to_owned),
                    replayed: rb.map(str::to_owned),
                }
                .into());
            }
            index += 1;
        }
    }
    Ok(replayed)
}
