//! Gesture to announcement mapping.
//!
//! Phrase templates and the distance rounding rule below are part of the
//! replay contract: changing them changes every recorded transcript.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::gesture::{GestureEvent, GestureKind};
use crate::spatial::{distance_between, SpatialIndex, DEFAULT_HIT_TOLERANCE_MM};

pub const DEFAULT_DISTANCE_PAIR_TIMEOUT_MS: u64 = 5000;
pub const DEFAULT_DETAIL_LEVEL: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Priority {
    Detail,
    Info,
    Alert,
}

impl Priority {
    pub fn as_str(self) -> &'static str {
        match self {
            Priority::Detail => "detail",
            Priority::Info => "info",
            Priority::Alert => "alert",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EarconKind {
    Activate,
    Confirm,
    Error,
}

impl EarconKind {
    pub fn as_str(self) -> &'static str {
        match self {
            EarconKind::Activate => "activate",
            EarconKind::Confirm => "confirm",
            EarconKind::Error => "error",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Announcement {
    Speak {
        text: String,
        priority: Priority,
        interrupt: bool,
    },
    Earcon {
        kind: EarconKind,
    },
}

impl Announcement {
    pub fn speak(text: impl Into<String>, priority: Priority) -> Self {
        Announcement::Speak {
            text: text.into(),
            priority,
            interrupt: true,
        }
    }

    pub fn earcon(kind: EarconKind) -> Self {
        Announcement::Earcon { kind }
    }
}

/// Meters as spoken: nearest 10 m, or nearest 1 m below 20 m.
pub fn round_spoken_meters(meters: f64) -> u64 {
    let rounded = if meters < 20.0 {
        libm::round(meters)
    } else {
        libm::round(meters / 10.0) * 10.0
    };
    rounded.max(0.0) as u64
}

pub fn distance_phrase(from: &str, to: &str, meters: f64) -> String {
    format!("distance from {from} to {to}: {} meters", round_spoken_meters(meters))
}

pub fn level_label(level: u32) -> &'static str {
    match level {
        0 => "names",
        1 => "details",
        _ => "more details",
    }
}

pub fn level_phrase(level: u32) -> String {
    format!("level {level}: {}", level_label(level))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "state", rename_all = "snake_case")]
pub enum DistanceMode {
    Idle,
    Armed { first: String, armed_at_ms: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ControllerConfig {
    pub hit_tolerance_mm: f64,
    pub distance_pair_timeout_ms: u64,
}

impl Default for ControllerConfig {
    fn default() -> Self {
        ControllerConfig {
            hit_tolerance_mm: DEFAULT_HIT_TOLERANCE_MM,
            distance_pair_timeout_ms: DEFAULT_DISTANCE_PAIR_TIMEOUT_MS,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ControllerError {
    #[error("no map loaded")]
    NoMapLoaded,
}

/// What a gesture resolved to, alongside the announcements it produced.
#[derive(Debug, Clone, PartialEq)]
pub struct Reaction {
    pub target: Option<String>,
    pub announcements: Vec<Announcement>,
}

#[derive(Debug, Clone)]
pub struct Controller {
    config: ControllerConfig,
    index: Option<Arc<SpatialIndex>>,
    current_level: u32,
    distance_mode: DistanceMode,
}

impl Controller {
    pub fn new(config: ControllerConfig) -> Self {
        Controller {
            config,
            index: None,
            current_level: DEFAULT_DETAIL_LEVEL,
            distance_mode: DistanceMode::Idle,
        }
    }

    /// Binds a map; level and distance mode return to their defaults.
    pub fn load(&mut self, index: Arc<SpatialIndex>) {
        self.index = Some(index);
        self.current_level = DEFAULT_DETAIL_LEVEL;
        self.distance_mode = DistanceMode::Idle;
    }

    pub fn index(&self) -> Option<&Arc<SpatialIndex>> {
        self.index.as_ref()
    }

    pub fn current_level(&self) -> u32 {
        self.current_level
    }

    pub fn distance_mode(&self) -> &DistanceMode {
        &self.distance_mode
    }

    pub fn select_level(&mut self, level: u32) -> Announcement {
        self.current_level = level;
        Announcement::speak(level_phrase(level), Priority::Info)
    }

    pub fn handle_gesture(&mut self, g: &GestureEvent, now_ms: u64) -> Result<Vec<Announcement>, ControllerError> {
        self.react(g, now_ms).map(|r| r.announcements)
    }

    pub fn react(&mut self, g: &GestureEvent, now_ms: u64) -> Result<Reaction, ControllerError> {
        let index = Arc::clone(self.index.as_ref().ok_or(ControllerError::NoMapLoaded)?);
        let doc = index.document();
        if let DistanceMode::Armed { armed_at_ms, .. } = self.distance_mode {
            if now_ms.saturating_sub(armed_at_ms) > self.config.distance_pair_timeout_ms {
                self.distance_mode = DistanceMode::Idle;
            }
        }
        let error = |target: Option<String>| Reaction {
            target,
            announcements: vec![Announcement::earcon(EarconKind::Error)],
        };
        let reaction = match &g.kind {
            GestureKind::DoubleTap { point } => match index.resolve_point(*point, self.config.hit_tolerance_mm) {
                Some(hit) => {
                    let name = doc.element_info(&hit.element_id, 0).expect("hit ids exist");
                    Reaction {
                        target: Some(hit.element_id),
                        announcements: vec![Announcement::speak(name, Priority::Info)],
                    }
                }
                None => error(None),
            },
            GestureKind::HoldActivate { point, .. } => {
                match index.resolve_point(*point, self.config.hit_tolerance_mm) {
                    None => error(None),
                    Some(hit) => {
                        let mode = core::mem::replace(&mut self.distance_mode, DistanceMode::Idle);
                        let mut announcements = vec![Announcement::earcon(EarconKind::Activate)];
                        match mode {
                            DistanceMode::Idle => {
                                self.distance_mode = DistanceMode::Armed {
                                    first: hit.element_id.clone(),
                                    armed_at_ms: now_ms,
                                };
                            }
                            DistanceMode::Armed { first, .. } => {
                                let meters = distance_between(doc, &first, &hit.element_id).expect("armed ids exist");
                                let from = &doc.element(&first).expect("armed ids exist").name;
                                let to = &doc.element(&hit.element_id).expect("hit ids exist").name;
                                announcements
                                    .push(Announcement::speak(distance_phrase(from, to, meters), Priority::Info));
                            }
                        }
                        Reaction {
                            target: Some(hit.element_id),
                            announcements,
                        }
                    }
                }
            }
            GestureKind::Lasso { path } => match index.enclosed_element(path) {
                Some(id) => {
                    let text = doc.element_info(id, self.current_level).expect("enclosed ids exist");
                    Reaction {
                        target: Some(String::from(id)),
                        announcements: vec![Announcement::speak(text, Priority::Detail)],
                    }
                }
                None => error(None),
            },
            GestureKind::HoldRelease { .. } => Reaction {
                target: None,
                announcements: Vec::new(),
            },
        };
        Ok(reaction)
    }
}
