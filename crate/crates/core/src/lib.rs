//! Engine for audio-tactile map exploration.
//!
//! Raw multi-touch samples over a map are turned into gestures
//! ([`gesture`]), gestures into announcements ([`controller`]) and
//! announcements into an ordered speech/earcon stream ([`speech`]). Map
//! documents ([`map`]) are resolved against touch points by a uniform grid
//! ([`spatial`]). Everything here needs only `alloc`; file formats, the
//! session service and the CLI live in the `tactimap` crate.

#![no_std]

extern crate alloc;

pub mod controller;
pub mod fixture;
pub mod geometry;
pub mod gesture;
pub mod map;
pub mod spatial;
pub mod speech;
pub mod study;
pub mod validate;

pub use controller::{Announcement, Controller, ControllerConfig, EarconKind, Priority};
pub use fixture::fixture_city_map;
pub use geometry::{Geometry, Point};
pub use gesture::{GestureConfig, GestureEvent, GestureKind, Recognizer, TouchPhase, TouchSample};
pub use map::{ElementKind, InfoLayers, MapDocument, MapElement, MapError};
pub use spatial::{distance_between, ElementHit, SpatialIndex};
pub use speech::{SpeechQueue, Utterance};
pub use validate::{validate_map, ValidationIssue, ValidationRules};
