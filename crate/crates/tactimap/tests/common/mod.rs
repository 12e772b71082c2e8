#![allow(dead_code)]

use std::sync::Arc;

use tactimap::core::gesture::{TouchPhase, TouchSample};
use tactimap::core::{fixture_city_map, Point};
use tactimap::{ClientMessage, EngineConfig, MapRegistry, ServerMessage, Session};
use tactimap_testkit::traces::{self, Trace};
use tactimap_testkit::{rng, RngExt, StdRng};

/// Reference points of every fixture element.
pub fn fixture_targets() -> Vec<(String, Point)> {
    fixture_city_map()
        .elements()
        .iter()
        .map(|e| (e.id.clone(), e.geometry.reference_point()))
        .collect()
}

fn pick(r: &mut StdRng, targets: &[(String, Point)]) -> Point {
    targets[r.random_range(0..targets.len())].1
}

fn touches(trace: &Trace) -> impl Iterator<Item = ClientMessage> + '_ {
    trace.samples.iter().map(|s| ClientMessage::touch(*s))
}

/// A plausible exploration session on the fixture map: gestures, scanning,
/// level changes, a few malformed touches, then `end_session`.
pub fn fuzz_session(seed: u64) -> Vec<ClientMessage> {
    let mut r = rng(seed);
    let targets = fixture_targets();
    let mut msgs = vec![ClientMessage::load_map_id("fixture")];
    let mut t = r.random_range(0..1000);
    let mut id = 1;
    for _ in 0..r.random_range(5..25) {
        let trace = match r.random_range(0..7) {
            0 | 1 => {
                let at = pick(&mut r, &targets);
                traces::double_tap(&mut r, at, t, id, id + 1)
            }
            2 => {
                let (a, b) = (pick(&mut r, &targets), pick(&mut r, &targets));
                traces::hold_pair(&mut r, a, b, t, id)
            }
            3 => {
                let at = pick(&mut r, &targets);
                traces::lasso(&mut r, at, t, id)
            }
            4 => traces::exploratory_scan(&mut r, t, id, 6),
            5 => {
                msgs.push(ClientMessage::SelectLevel {
                    level: r.random_range(0..4),
                });
                Trace::default()
            }
            _ => {
                // Move for a contact that is not down, and a stale timestamp.
                msgs.push(ClientMessage::touch(TouchSample::new(
                    TouchPhase::Move,
                    9999,
                    10.0,
                    10.0,
                    t,
                )));
                msgs.push(ClientMessage::touch(TouchSample::new(
                    TouchPhase::Down,
                    9998,
                    10.0,
                    10.0,
                    t.saturating_sub(1),
                )));
                Trace::default()
            }
        };
        msgs.extend(touches(&trace));
        t = trace.end_ms().max(t) + r.random_range(300..3000);
        id += 20;
    }
    msgs.push(ClientMessage::EndSession);
    msgs
}

pub fn run_session(msgs: &[ClientMessage]) -> (Session, Vec<ServerMessage>) {
    let mut session = Session::new(EngineConfig::default(), Arc::new(MapRegistry::default())).unwrap();
    let out = msgs
        .iter()
        .flat_map(|m| session.handle_client_message(m.clone()))
        .collect();
    (session, out)
}
