//! Scripted touch traces with the gestures they must produce.

use std::f64::consts::TAU;

use rand::RngExt;
use tactimap_core::gesture::{GestureEvent, GestureKind, Recognizer, TouchPhase, TouchSample};
use tactimap_core::Point;

use crate::StdRng;

#[derive(Debug, Clone, PartialEq)]
pub enum Expected {
    DoubleTap(Point),
    Hold(Point),
    Release,
    Lasso,
}

impl Expected {
    pub fn matches(&self, e: &GestureEvent) -> bool {
        match (self, &e.kind) {
            (Expected::DoubleTap(p), GestureKind::DoubleTap { point }) => p.approx_eq(*point, 1e-9),
            (Expected::Hold(p), GestureKind::HoldActivate { point, .. }) => p.approx_eq(*point, 1e-9),
            (Expected::Release, GestureKind::HoldRelease { .. }) => true,
            (Expected::Lasso, GestureKind::Lasso { .. }) => true,
            _ => false,
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct Trace {
    pub samples: Vec<TouchSample>,
    pub expected: Vec<Expected>,
}

impl Trace {
    pub fn end_ms(&self) -> u64 {
        self.samples.last().map_or(0, |s| s.t_ms)
    }

    /// Appends `other`, which must start no earlier than this trace ends.
    pub fn then(mut self, other: Trace) -> Trace {
        self.samples.extend(other.samples);
        self.expected.extend(other.expected);
        self
    }
}

fn jitter(rng: &mut StdRng, at: Point, radius: f64) -> Point {
    let a = rng.random_range(0.0..TAU);
    let r = rng.random_range(0.0..=radius);
    Point::new(at.x + r * a.cos(), at.y + r * a.sin())
}

fn sample(phase: TouchPhase, id: u32, p: Point, t: u64) -> TouchSample {
    TouchSample::new(phase, id, p.x, p.y, t)
}

/// Two quick taps within a millimetre of `at`, possibly with different ids.
pub fn double_tap(rng: &mut StdRng, at: Point, t0: u64, id1: u32, id2: u32) -> Trace {
    let mut samples = Vec::new();
    let mut downs = Vec::new();
    let mut t = t0;
    for (k, id) in [id1, id2].into_iter().enumerate() {
        if k == 1 {
            t += rng.random_range(20..=350);
        }
        let down = jitter(rng, at, 1.0);
        downs.push(down);
        samples.push(sample(TouchPhase::Down, id, down, t));
        let duration = rng.random_range(30..=200);
        let mut offsets: Vec<u64> = (0..rng.random_range(0..=3))
            .map(|_| rng.random_range(1..duration))
            .collect();
        offsets.sort_unstable();
        for dt in offsets {
            samples.push(sample(TouchPhase::Move, id, jitter(rng, down, 1.0), t + dt));
        }
        t += duration;
        samples.push(sample(TouchPhase::Up, id, jitter(rng, down, 1.0), t));
    }
    Trace {
        samples,
        expected: vec![Expected::DoubleTap(downs[0].midpoint(downs[1]))],
    }
}

/// A stationary press held past the activation threshold, then lifted.
pub fn hold(rng: &mut StdRng, at: Point, t0: u64, id: u32) -> Trace {
    let down = jitter(rng, at, 1.0);
    let duration = rng.random_range(1100..=2500);
    let mut samples = vec![sample(TouchPhase::Down, id, down, t0)];
    let mut t = t0;
    loop {
        t += rng.random_range(40..=160);
        if t >= t0 + duration {
            break;
        }
        samples.push(sample(TouchPhase::Move, id, jitter(rng, down, 1.5), t));
    }
    samples.push(sample(TouchPhase::Up, id, jitter(rng, down, 1.5), t0 + duration));
    Trace {
        samples,
        expected: vec![Expected::Hold(down), Expected::Release],
    }
}

/// A circle of radius 12 to 30 mm around `center`, closed within a few mm.
pub fn lasso(rng: &mut StdRng, center: Point, t0: u64, id: u32) -> Trace {
    let radius = rng.random_range(12.0..30.0);
    let n = rng.random_range(30..=60);
    let start = rng.random_range(0.0..TAU);
    let sweep = TAU * (1.0 + rng.random_range(-0.03..0.03));
    let duration: u64 = rng.random_range(400..=1500);
    let samples = (0..=n)
        .map(|i| {
            let f = i as f64 / n as f64;
            let a = start + sweep * f;
            let r = radius + rng.random_range(-1.0..1.0);
            let p = Point::new(center.x + r * a.cos(), center.y + r * a.sin());
            let phase = match i {
                0 => TouchPhase::Down,
                i if i == n => TouchPhase::Up,
                _ => TouchPhase::Move,
            };
            sample(phase, id, p, t0 + duration * i as u64 / n as u64)
        })
        .collect();
    Trace {
        samples,
        expected: vec![Expected::Lasso],
    }
}

/// Hold on `a`, lift, then hold on `b` soon enough to complete a distance pair.
pub fn hold_pair(rng: &mut StdRng, a: Point, b: Point, t0: u64, id: u32) -> Trace {
    let first = hold(rng, a, t0, id);
    let gap = rng.random_range(100..=2000);
    let second = hold(rng, b, first.end_ms() + gap, id + 1);
    first.then(second)
}

/// Exploratory scanning by 2 to `max_contacts` fingers: each contact slides
/// steadily away from where it landed, so none is a tap, a hold or a closed
/// loop. Produces no expected events.
pub fn exploratory_scan(rng: &mut StdRng, t0: u64, first_id: u32, max_contacts: usize) -> Trace {
    let contacts = rng.random_range(2..=max_contacts.max(2));
    let mut samples = Vec::new();
    for k in 0..contacts {
        let id = first_id + k as u32;
        let start = Point::new(rng.random_range(60.0..360.0), rng.random_range(50.0..250.0));
        let heading = rng.random_range(0.0..TAU);
        let speed = rng.random_range(40.0..90.0); // mm/s
        let wobble = rng.random_range(0.0..3.0);
        let wobble_hz = rng.random_range(0.5..3.0);
        let begin = t0 + rng.random_range(0..=600);
        let duration: u64 = rng.random_range(800..=3000);
        let (dx, dy) = (heading.cos(), heading.sin());
        let at = |ms: u64| {
            let s = ms as f64 / 1000.0;
            let along = speed * s;
            let across = wobble * (TAU * wobble_hz * s).sin();
            Point::new(start.x + along * dx - across * dy, start.y + along * dy + across * dx)
        };
        samples.push(sample(TouchPhase::Down, id, start, begin));
        let mut dt = 0;
        loop {
            dt += rng.random_range(16..=40);
            if dt >= duration {
                break;
            }
            samples.push(sample(TouchPhase::Move, id, at(dt), begin + dt));
        }
        samples.push(sample(TouchPhase::Up, id, at(duration), begin + duration));
    }
    samples.sort_by_key(|s| (s.t_ms, s.touch_id));
    Trace {
        samples,
        expected: Vec::new(),
    }
}

/// Merges traces by time. Stable for equal timestamps: earlier traces first.
pub fn interleave(traces: &[Trace]) -> Trace {
    let mut samples: Vec<TouchSample> = traces.iter().flat_map(|t| t.samples.iter().copied()).collect();
    samples.sort_by_key(|s| s.t_ms);
    Trace {
        samples,
        expected: traces.iter().flat_map(|t| t.expected.iter().cloned()).collect(),
    }
}

/// Feeds every sample followed by `advance_time` at that sample's time, the
/// way the session service drives the recognizer.
pub fn run(recognizer: &mut Recognizer, samples: &[TouchSample]) -> Vec<GestureEvent> {
    let mut out = Vec::new();
    for s in samples {
        out.extend(recognizer.feed_sample(s).expect("generated traces are well formed"));
        out.extend(recognizer.advance_time(s.t_ms).expect("time is monotone"));
    }
    out
}

/// True when `events` matches `expected` one to one, in order.
pub fn exact_match(expected: &[Expected], events: &[GestureEvent]) -> bool {
    expected.len() == events.len() && expected.iter().zip(events).all(|(x, e)| x.matches(e))
}
