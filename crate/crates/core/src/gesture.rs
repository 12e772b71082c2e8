//! Non-visual gesture recognition over raw multi-touch samples.
//!
//! The recognizer is a per-contact state machine plus one pairing rule for
//! double taps. Single taps and exploratory movement never produce events;
//! only double taps, held contacts and closed lasso paths do.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::geometry::{path_length, Point};
use crate::map::{DEFAULT_CANVAS_HEIGHT_MM, DEFAULT_CANVAS_WIDTH_MM};

pub const MAX_CONTACTS: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TouchPhase {
    Down,
    Move,
    Up,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TouchSample {
    pub phase: TouchPhase,
    pub touch_id: u32,
    pub x: f64,
    pub y: f64,
    pub t_ms: u64,
}

impl TouchSample {
    pub fn new(phase: TouchPhase, touch_id: u32, x: f64, y: f64, t_ms: u64) -> Self {
        TouchSample {
            phase,
            touch_id,
            x,
            y,
            t_ms,
        }
    }

    pub fn point(&self) -> Point {
        Point::new(self.x, self.y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GestureConfig {
    pub double_tap_max_interval_ms: u64,
    pub tap_max_duration_ms: u64,
    pub tap_max_drift_mm: f64,
    pub double_tap_max_gap_mm: f64,
    pub hold_min_duration_ms: u64,
    pub hold_max_drift_mm: f64,
    pub lasso_closure_eps_mm: f64,
    pub lasso_min_perimeter_mm: f64,
}

impl Default for GestureConfig {
    fn default() -> Self {
        GestureConfig {
            double_tap_max_interval_ms: 400,
            tap_max_duration_ms: 250,
            tap_max_drift_mm: 3.0,
            double_tap_max_gap_mm: 5.0,
            hold_min_duration_ms: 1000,
            hold_max_drift_mm: 4.0,
            lasso_closure_eps_mm: 10.0,
            lasso_min_perimeter_mm: 25.0,
        }
    }
}

impl GestureConfig {
    pub fn validate(&self) -> Result<(), GestureError> {
        let positive_mm = |v: f64| v.is_finite() && v > 0.0;
        let ok = self.double_tap_max_interval_ms > 0
            && self.tap_max_duration_ms > 0
            && self.hold_min_duration_ms > 0
            && positive_mm(self.tap_max_drift_mm)
            && positive_mm(self.double_tap_max_gap_mm)
            && positive_mm(self.hold_max_drift_mm)
            && positive_mm(self.lasso_closure_eps_mm)
            && positive_mm(self.lasso_min_perimeter_mm);
        if !ok {
            return Err(GestureError::InvalidConfig("all thresholds must be strictly positive"));
        }
        if self.tap_max_duration_ms >= self.hold_min_duration_ms {
            return Err(GestureError::InvalidConfig(
                "tap_max_duration_ms must be below hold_min_duration_ms",
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GestureKind {
    DoubleTap { point: Point },
    HoldActivate { point: Point, touch_id: u32 },
    HoldRelease { touch_id: u32 },
    Lasso { path: Vec<Point> },
}

impl GestureKind {
    pub fn name(&self) -> &'static str {
        match self {
            GestureKind::DoubleTap { .. } => "double_tap",
            GestureKind::HoldActivate { .. } => "hold_activate",
            GestureKind::HoldRelease { .. } => "hold_release",
            GestureKind::Lasso { .. } => "lasso",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GestureEvent {
    #[serde(flatten)]
    pub kind: GestureKind,
    pub t_ms: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GestureError {
    #[error("invalid gesture configuration: {0}")]
    InvalidConfig(&'static str),
    #[error("timestamp {got} precedes {last}")]
    OutOfOrderTimestamp { last: u64, got: u64 },
    #[error("touch id {0} has no active contact")]
    UnknownTouchId(u32),
    #[error("touch id {0} is already down")]
    DuplicateTouchId(u32),
    #[error("more than {MAX_CONTACTS} simultaneous contacts")]
    TooManyContacts,
}

#[derive(Debug, Clone)]
struct Contact {
    down_at: Point,
    down_ms: u64,
    path: Vec<Point>,
    drift_mm: f64,
    hold_emitted: bool,
}

#[derive(Debug, Clone, Copy)]
struct CompletedTap {
    down_at: Point,
    up_ms: u64,
}

#[derive(Debug, Clone)]
pub struct Recognizer {
    config: GestureConfig,
    canvas: (f64, f64),
    contacts: BTreeMap<u32, Contact>,
    pending_tap: Option<CompletedTap>,
    last_ms: Option<u64>,
}

impl Recognizer {
    pub fn new(config: GestureConfig) -> Result<Self, GestureError> {
        config.validate()?;
        Ok(Recognizer {
            config,
            canvas: (DEFAULT_CANVAS_WIDTH_MM, DEFAULT_CANVAS_HEIGHT_MM),
            contacts: BTreeMap::new(),
            pending_tap: None,
            last_ms: None,
        })
    }

    /// Sets the rectangle incoming coordinates are clamped to.
    pub fn with_canvas(mut self, width_mm: f64, height_mm: f64) -> Self {
        self.canvas = (width_mm, height_mm);
        self
    }

    pub fn config(&self) -> &GestureConfig {
        &self.config
    }

    pub fn live_contacts(&self) -> usize {
        self.contacts.len()
    }

    pub fn reset(&mut self) {
        self.contacts.clear();
        self.pending_tap = None;
        self.last_ms = None;
    }

    fn check_time(&self, t_ms: u64) -> Result<(), GestureError> {
        match self.last_ms {
            Some(last) if t_ms < last => Err(GestureError::OutOfOrderTimestamp { last, got: t_ms }),
            _ => Ok(()),
        }
    }

    fn clamp(&self, x: f64, y: f64) -> Point {
        let clamp = |v: f64, hi: f64| if v.is_nan() { 0.0 } else { v.clamp(0.0, hi) };
        Point::new(clamp(x, self.canvas.0), clamp(y, self.canvas.1))
    }

    /// Ingests one sample. On error the recognizer state is unchanged.
    pub fn feed_sample(&mut self, s: &TouchSample) -> Result<Vec<GestureEvent>, GestureError> {
        self.check_time(s.t_ms)?;
        let at = self.clamp(s.x, s.y);
        match s.phase {
            TouchPhase::Down => {
                if self.contacts.contains_key(&s.touch_id) {
                    return Err(GestureError::DuplicateTouchId(s.touch_id));
                }
                if self.contacts.len() >= MAX_CONTACTS {
                    return Err(GestureError::TooManyContacts);
                }
            }
            TouchPhase::Move | TouchPhase::Up => {
                if !self.contacts.contains_key(&s.touch_id) {
                    return Err(GestureError::UnknownTouchId(s.touch_id));
                }
            }
        }
        self.last_ms = Some(s.t_ms);

        let mut events = Vec::new();
        match s.phase {
            TouchPhase::Down => {
                self.contacts.insert(
                    s.touch_id,
                    Contact {
                        down_at: at,
                        down_ms: s.t_ms,
                        path: vec![at],
                        drift_mm: 0.0,
                        hold_emitted: false,
                    },
                );
                self.collect_holds(s.t_ms, &mut events);
            }
            TouchPhase::Move => {
                self.track(s.touch_id, at);
                self.collect_holds(s.t_ms, &mut events);
            }
            TouchPhase::Up => {
                self.track(s.touch_id, at);
                self.collect_holds(s.t_ms, &mut events);
                let contact = self.contacts.remove(&s.touch_id).expect("checked above");
                self.finish_contact(s.touch_id, contact, s.t_ms, &mut events);
            }
        }
        Ok(events)
    }

    /// Emits hold activations that have matured by `now_ms`.
    pub fn advance_time(&mut self, now_ms: u64) -> Result<Vec<GestureEvent>, GestureError> {
        self.check_time(now_ms)?;
        self.last_ms = Some(now_ms);
        let mut events = Vec::new();
        self.collect_holds(now_ms, &mut events);
        Ok(events)
    }

    fn track(&mut self, touch_id: u32, at: Point) {
        let contact = self.contacts.get_mut(&touch_id).expect("checked by caller");
        contact.drift_mm = contact.drift_mm.max(at.distance(contact.down_at));
        if contact.path.last() != Some(&at) {
            contact.path.push(at);
        }
    }

    fn collect_holds(&mut self, now_ms: u64, events: &mut Vec<GestureEvent>) {
        let cfg = self.config;
        for (&touch_id, contact) in self.contacts.iter_mut() {
            if !contact.hold_emitted
                && contact.drift_mm <= cfg.hold_max_drift_mm
                && now_ms >= contact.down_ms + cfg.hold_min_duration_ms
            {
                contact.hold_emitted = true;
                events.push(GestureEvent {
                    kind: GestureKind::HoldActivate {
                        point: contact.down_at,
                        touch_id,
                    },
                    t_ms: now_ms,
                });
            }
        }
    }

    fn finish_contact(&mut self, touch_id: u32, contact: Contact, up_ms: u64, events: &mut Vec<GestureEvent>) {
        let cfg = self.config;
        if contact.hold_emitted {
            events.push(GestureEvent {
                kind: GestureKind::HoldRelease { touch_id },
                t_ms: up_ms,
            });
            return;
        }
        let is_tap = up_ms - contact.down_ms <= cfg.tap_max_duration_ms && contact.drift_mm <= cfg.tap_max_drift_mm;
        if is_tap {
            let this = CompletedTap {
                down_at: contact.down_at,
                up_ms,
            };
            let paired = self.pending_tap.filter(|first| {
                contact.down_ms >= first.up_ms
                    && contact.down_ms - first.up_ms <= cfg.double_tap_max_interval_ms
                    && first.down_at.distance(contact.down_at) <= cfg.double_tap_max_gap_mm
            });
            match paired {
                Some(first) => {
                    self.pending_tap = None;
                    events.push(GestureEvent {
                        kind: GestureKind::DoubleTap {
                            point: first.down_at.midpoint(contact.down_at),
                        },
                        t_ms: up_ms,
                    });
                }
                None => self.pending_tap = Some(this),
            }
            return;
        }
        let start = contact.down_at;
        let end = *contact.path.last().expect("path starts with the down point");
        let closure = start.distance(end);
        let perimeter = path_length(&contact.path) + closure;
        if closure <= cfg.lasso_closure_eps_mm && perimeter >= cfg.lasso_min_perimeter_mm {
            events.push(GestureEvent {
                kind: GestureKind::Lasso { path: contact.path },
                t_ms: up_ms,
            });
        }
    }
}
