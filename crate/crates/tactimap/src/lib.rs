//! Standard-library side of tactimap: the SVG map profile, the JSON wire
//! protocol, sessions with record/replay, the WebSocket service and the study
//! harness. The engine itself lives in `tactimap-core`.

pub mod config;
pub mod harness;
pub mod protocol;
pub mod server;
pub mod session;
pub mod svg;

pub use tactimap_core as core;

pub use config::{EngineConfig, MapRegistry};
pub use protocol::{ClientMessage, MapSource, ServerMessage};
pub use session::{replay_log, verify_replay, LogRecord, Session, SessionLog};
pub use svg::{parse_map, serialize_map};
