//! Wire messages exchanged with clients, one JSON object per WebSocket text
//! frame. Field names and order are fixed; they are also the `msg` payload of
//! session log records.

use serde::{Deserialize, Serialize};
use tactimap_core::controller::{Announcement, EarconKind, Priority};
use tactimap_core::gesture::{TouchPhase, TouchSample};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MapSource {
    Id { map_id: String },
    Inline { svg: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ClientMessage {
    LoadMap(MapSource),
    Touch {
        phase: TouchPhase,
        touch_id: u32,
        x: f64,
        y: f64,
        t_ms: u64,
    },
    SelectLevel {
        level: u32,
    },
    EndSession,
}

impl ClientMessage {
    pub fn load_map_id(id: impl Into<String>) -> Self {
        ClientMessage::LoadMap(MapSource::Id { map_id: id.into() })
    }

    pub fn load_map_svg(svg: impl Into<String>) -> Self {
        ClientMessage::LoadMap(MapSource::Inline { svg: svg.into() })
    }

    pub fn touch(s: TouchSample) -> Self {
        ClientMessage::Touch {
            phase: s.phase,
            touch_id: s.touch_id,
            x: s.x,
            y: s.y,
            t_ms: s.t_ms,
        }
    }

    pub fn is_load_map(&self) -> bool {
        matches!(self, ClientMessage::LoadMap(_))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ServerMessage {
    MapLoaded {
        elements: usize,
    },
    Speak {
        text: String,
        priority: Priority,
        interrupt: bool,
    },
    Earcon {
        kind: EarconKind,
    },
    /// Instrumentation: a recognized gesture and the element it resolved to.
    Gesture {
        kind: String,
        element_id: Option<String>,
    },
    Error {
        code: String,
        message: String,
    },
}

impl ServerMessage {
    pub fn error(code: ErrorCode, message: impl Into<String>) -> Self {
        ServerMessage::Error {
            code: code.as_str().to_owned(),
            message: message.into(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("server messages always serialize")
    }
}

impl From<Announcement> for ServerMessage {
    fn from(a: Announcement) -> Self {
        match a {
            Announcement::Speak {
                text,
                priority,
                interrupt,
            } => ServerMessage::Speak {
                text,
                priority,
                interrupt,
            },
            Announcement::Earcon { kind } => ServerMessage::Earcon { kind },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorCode {
    /// Touch or level selection before any map was loaded.
    NoMap,
    /// Frame is not a JSON client message.
    BadFrame,
    /// Inline map failed to parse.
    Parse,
    UnknownMap,
    OutOfOrder,
    UnknownTouch,
    DuplicateTouch,
    TooManyContacts,
    /// Message received after `end_session`.
    SessionEnded,
}

impl ErrorCode {
    pub fn as_str(self) -> &'static str {
        match self {
            ErrorCode::NoMap => "no-map",
            ErrorCode::BadFrame => "bad-frame",
            ErrorCode::Parse => "parse",
            ErrorCode::UnknownMap => "unknown-map",
            ErrorCode::OutOfOrder => "out-of-order",
            ErrorCode::UnknownTouch => "unknown-touch",
            ErrorCode::DuplicateTouch => "duplicate-touch",
            ErrorCode::TooManyContacts => "too-many-contacts",
            ErrorCode::SessionEnded => "session-ended",
        }
    }
}
