//! Acceptance suite. Prints one PASS/FAIL line per criterion with its time
//! budget and exits non-zero if any criterion fails.

mod common;

use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use common::{fixture_targets, fuzz_session, run_session};
use tactimap::core::map::{ElementKind, InfoLayers, MapElement};
use tactimap::core::spatial::DEFAULT_CELL_MM;
use tactimap::core::study::{summarize_sessions, SessionMetrics, SpatialScores};
use tactimap::core::validate::{has_errors, validate_map, ValidationRules};
use tactimap::core::{fixture_city_map, Geometry, GestureConfig, MapDocument, Point, Recognizer, SpatialIndex};
use tactimap::harness::learning_time_minutes;
use tactimap::{
    parse_map, serialize_map, verify_replay, ClientMessage, EngineConfig, MapRegistry, ServerMessage, SessionLog,
};
use tactimap_testkit::docs::random_document;
use tactimap_testkit::oracle::{brute_force_resolve, mean_sd, reference_distance_m, spoken_meters};
use tactimap_testkit::traces::{self, run, Expected, Trace};
use tactimap_testkit::{rng, RngExt, StdRng};

type Outcome = Result<String, String>;
type Criterion = (&'static str, Duration, fn() -> Outcome);

fn check(ok: bool, detail: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(detail.into())
    }
}

fn fixture_fidelity() -> Outcome {
    let doc = fixture_city_map();
    let counts = [
        ElementKind::Street,
        ElementKind::Building,
        ElementKind::Poi,
        ElementKind::Water,
    ]
    .map(|k| doc.count_kind(k));
    check(
        counts == [6, 6, 6, 1],
        format!("street/building/poi/water counts {counts:?}"),
    )?;
    let hotels = doc
        .elements()
        .iter()
        .filter(|e| e.kind == ElementKind::Poi && e.name == "hotel")
        .count();
    check(hotels == 1, format!("{hotels} POIs named hotel"))?;
    let issues = validate_map(&doc, &ValidationRules::default());
    check(!has_errors(&issues), format!("validation errors: {issues:?}"))?;
    Ok(format!("19 elements, {} validation issues", issues.len()))
}

fn hit_test_oracle() -> Outcome {
    let doc = Arc::new(fixture_city_map());
    let index = SpatialIndex::build(doc.clone(), DEFAULT_CELL_MM);
    let mut r = rng(0xacce);
    let points: Vec<Point> = (0..10_000)
        .map(|_| Point::new(r.random_range(0.0..420.0), r.random_range(0.0..297.0)))
        .collect();
    let mut hits = 0;
    for tol in [0.0, 2.0, 5.0, 10.0] {
        for &p in &points {
            let got = index.resolve_point(p, tol);
            let want = brute_force_resolve(&doc, p, tol);
            let same = match (&got, &want) {
                (None, None) => true,
                (Some(h), Some((id, kind, d))) => {
                    &h.element_id == id && h.kind == *kind && (h.distance_mm - d).abs() < 1e-9
                }
                _ => false,
            };
            check(
                same,
                format!("tolerance {tol} at {p:?}: index {got:?}, oracle {want:?}"),
            )?;
            hits += usize::from(got.is_some());
        }
    }
    Ok(format!("40000/40000 queries agree ({hits} hits)"))
}

fn fresh_recognizer() -> Recognizer {
    Recognizer::new(GestureConfig::default()).unwrap()
}

fn poi_points() -> Vec<(String, Point)> {
    let doc = fixture_city_map();
    fixture_targets()
        .into_iter()
        .filter(|(id, _)| doc.element(id).unwrap().kind == ElementKind::Poi)
        .collect()
}

fn somewhere(r: &mut StdRng) -> Point {
    Point::new(r.random_range(40.0..380.0), r.random_range(40.0..257.0))
}

/// Counts expected events matched in order, for precision and recall.
fn matched(expected: &[Expected], events: &[tactimap::core::GestureEvent]) -> usize {
    expected.iter().zip(events).take_while(|(x, e)| x.matches(e)).count()
}

fn hold_pair_speaks_distance(r: &mut StdRng, pois: &[(String, Point)]) -> Result<Trace, String> {
    let a = r.random_range(0..pois.len());
    let b = (a + r.random_range(1..pois.len())) % pois.len();
    let trace = traces::hold_pair(r, pois[a].1, pois[b].1, 1000, 1);
    let mut msgs = vec![ClientMessage::load_map_id("fixture")];
    msgs.extend(trace.samples.iter().map(|s| ClientMessage::touch(*s)));
    let (_, out) = run_session(&msgs);
    let doc = fixture_city_map();
    let meters = spoken_meters(reference_distance_m(&doc, &pois[a].0, &pois[b].0));
    let (na, nb) = (
        &doc.element(&pois[a].0).unwrap().name,
        &doc.element(&pois[b].0).unwrap().name,
    );
    let want = format!("distance from {na} to {nb}: {meters} meters");
    let spoken: Vec<&str> = out
        .iter()
        .filter_map(|m| match m {
            ServerMessage::Speak { text, .. } => Some(text.as_str()),
            _ => None,
        })
        .collect();
    check(
        spoken == [want.as_str()],
        format!(
            "hold pair {} -> {}: spoke {spoken:?}, expected {want:?}",
            pois[a].0, pois[b].0
        ),
    )?;
    Ok(trace)
}

fn gesture_corpus() -> Outcome {
    let mut r = rng(0x6e57);
    let pois = poi_points();
    let (mut expected_total, mut event_total, mut true_pos) = (0, 0, 0);
    for i in 0..200 {
        let t0 = r.random_range(0..5000);
        let trace = match i / 50 {
            0 => {
                let (at, second_id) = (somewhere(&mut r), r.random_range(1..3));
                traces::double_tap(&mut r, at, t0, 1, second_id)
            }
            1 => {
                let at = somewhere(&mut r);
                traces::hold(&mut r, at, t0, 1)
            }
            2 => {
                let at = somewhere(&mut r);
                traces::lasso(&mut r, at, t0, 1)
            }
            _ => hold_pair_speaks_distance(&mut r, &pois)?,
        };
        let events = run(&mut fresh_recognizer(), &trace.samples);
        expected_total += trace.expected.len();
        event_total += events.len();
        true_pos += matched(&trace.expected, &events);
    }
    check(
        true_pos == expected_total && true_pos == event_total,
        format!("{true_pos} matched of {expected_total} expected and {event_total} emitted"),
    )?;
    let mut scan_events = 0;
    let mut max_contacts = 0;
    for k in 0..100 {
        let trace = traces::exploratory_scan(&mut r, k * 10, 1, 10);
        max_contacts = max_contacts.max(trace.samples.iter().map(|s| s.touch_id).max().unwrap_or(0));
        scan_events += run(&mut fresh_recognizer(), &trace.samples).len();
    }
    check(scan_events == 0, format!("{scan_events} events from exploratory scans"))?;
    Ok(format!(
        "precision {true_pos}/{event_total}, recall {true_pos}/{expected_total}; 100 scans (up to {max_contacts} contacts) gave 0 events"
    ))
}

fn poi(id: &str, x: f64, y: f64) -> MapElement {
    MapElement::new(
        id,
        ElementKind::Poi,
        Geometry::Point(Point::new(x, y)),
        id,
        InfoLayers::default(),
    )
}

fn hold_pair_session(svg: String, a: Point, b: Point) -> Vec<String> {
    let mut msgs = vec![ClientMessage::load_map_svg(svg)];
    let mut t = 0;
    for (id, p) in [(1, a), (2, b)] {
        msgs.push(ClientMessage::Touch {
            phase: tactimap::core::TouchPhase::Down,
            touch_id: id,
            x: p.x,
            y: p.y,
            t_ms: t,
        });
        msgs.push(ClientMessage::Touch {
            phase: tactimap::core::TouchPhase::Up,
            touch_id: id,
            x: p.x,
            y: p.y,
            t_ms: t + 1200,
        });
        t += 2000;
    }
    run_session(&msgs)
        .1
        .into_iter()
        .filter_map(|m| match m {
            ServerMessage::Speak { text, .. } => Some(text),
            _ => None,
        })
        .collect()
}

fn distance_correctness() -> Outcome {
    let doc = MapDocument::new(
        "345",
        420.0,
        297.0,
        2.0,
        vec![poi("a", 100.0, 100.0), poi("b", 130.0, 140.0)],
    )
    .unwrap();
    let spoken = hold_pair_session(serialize_map(&doc), Point::new(100.0, 100.0), Point::new(130.0, 140.0));
    check(
        spoken == ["distance from a to b: 100 meters"],
        format!("3-4-5 case spoke {spoken:?}"),
    )?;

    let mut r = rng(0xd157);
    for pair in 0..20 {
        // Two POIs well apart so the holds cannot resolve to the wrong one.
        let a = Point::new(r.random_range(10.0..410.0), r.random_range(10.0..287.0));
        let b = loop {
            let b = Point::new(r.random_range(10.0..410.0), r.random_range(10.0..287.0));
            if a.distance(b) > 20.0 {
                break b;
            }
        };
        let scale = r.random_range(0.5..10.0);
        let doc = MapDocument::new(
            "pair",
            420.0,
            297.0,
            scale,
            vec![poi("p", a.x, a.y), poi("q", b.x, b.y)],
        )
        .unwrap();
        let meters = spoken_meters(reference_distance_m(&doc, "p", "q"));
        let spoken = hold_pair_session(serialize_map(&doc), a, b);
        let want = format!("distance from p to q: {meters} meters");
        check(
            spoken == [want.clone()],
            format!("pair {pair}: spoke {spoken:?}, expected {want:?}"),
        )?;
    }
    Ok(String::from("3-4-5 case says 100 meters; 20/20 random pairs match"))
}

fn replay_determinism() -> Outcome {
    let registry = Arc::new(MapRegistry::default());
    let mut outputs = 0;
    for seed in 0..50 {
        let (session, live) = run_session(&fuzz_session(1000 + seed));
        let log = SessionLog::parse_jsonl(&session.log().to_jsonl()).map_err(|e| e.to_string())?;
        let first =
            verify_replay(&log, EngineConfig::default(), registry.clone()).map_err(|e| format!("seed {seed}: {e}"))?;
        let second =
            verify_replay(&log, EngineConfig::default(), registry.clone()).map_err(|e| format!("seed {seed}: {e}"))?;
        let recorded = log.recorded_transcript();
        let live: String = live.iter().map(|m| m.to_json() + "\n").collect();
        check(
            first == second && first == recorded && first == live,
            format!("seed {seed}: transcripts differ"),
        )?;
        outputs += live.lines().count();
    }
    Ok(format!(
        "50 sessions, {outputs} outputs, byte-identical on both replays"
    ))
}

fn timed_log(minutes_ms: u64) -> SessionLog {
    let touch = |phase, t_ms| ClientMessage::Touch {
        phase,
        touch_id: 1,
        x: 240.0,
        y: 135.0,
        t_ms,
    };
    let start = 4_000;
    let msgs = [
        ClientMessage::load_map_id("fixture"),
        touch(tactimap::core::TouchPhase::Down, start),
        touch(tactimap::core::TouchPhase::Up, start + minutes_ms),
        ClientMessage::EndSession,
    ];
    run_session(&msgs).0.log().clone()
}

fn harness_arithmetic() -> Outcome {
    let a = learning_time_minutes(&timed_log(522_600)).map_err(|e| e.to_string())?;
    let b = learning_time_minutes(&timed_log(692_400)).map_err(|e| e.to_string())?;
    check(a == 8.71 && b == 11.54, format!("learning times {a} and {b}"))?;

    let mut r = rng(0x5a);
    let n = 24;
    let metrics: Vec<SessionMetrics> = (0..n)
        .map(|i| SessionMetrics {
            session: format!("p{i:02}"),
            learning_time_min: r.random_range(3.0..20.0),
            double_taps: r.random_range(0..100),
            lassos: r.random_range(0..30),
            holds: r.random_range(0..40),
            announcements: 0,
        })
        .collect();
    let scores: Vec<SpatialScores> = (0..n)
        .map(|_| SpatialScores {
            landmark: r.random_range(0..=6) as f64,
            route: r.random_range(0..=6) as f64,
            survey: r.random_range(0..=6) as f64,
            ..SpatialScores::default()
        })
        .collect();
    let summary = summarize_sessions(&metrics, &scores).map_err(|e| e.to_string())?;
    let columns: [(&str, _, Vec<f64>); 7] = [
        (
            "learning",
            summary.learning_min,
            metrics.iter().map(|m| m.learning_time_min).collect(),
        ),
        (
            "landmark",
            summary.landmark,
            scores.iter().map(|s| s.landmark).collect(),
        ),
        ("route", summary.route, scores.iter().map(|s| s.route).collect()),
        ("survey", summary.survey, scores.iter().map(|s| s.survey).collect()),
        (
            "double_taps",
            summary.double_taps,
            metrics.iter().map(|m| m.double_taps as f64).collect(),
        ),
        (
            "lassos",
            summary.lassos,
            metrics.iter().map(|m| m.lassos as f64).collect(),
        ),
        ("holds", summary.holds, metrics.iter().map(|m| m.holds as f64).collect()),
    ];
    for (name, got, values) in columns {
        let (mean, sd) = mean_sd(&values);
        let sd = sd.unwrap();
        let got_sd = got.sd.unwrap_or(f64::NAN);
        check(
            (got.mean - mean).abs() <= 1e-9 && (got_sd - sd).abs() <= 1e-9,
            format!("{name}: mean {} vs {mean}, sd {got_sd} vs {sd}", got.mean),
        )?;
    }
    let pair = mean_sd(&[a, b]).0;
    check((pair - 10.125).abs() <= 1e-9, format!("two-session mean {pair}"))?;
    Ok(String::from("8.71 and 11.54 min exact; 7 columns within 1e-9"))
}

fn parser_round_trip() -> Outcome {
    let mut r = rng(0x59f);
    let mut elements = 0;
    for i in 0..100 {
        let doc = random_document(&mut r, 40);
        let text = serialize_map(&doc);
        let back = parse_map(&text).map_err(|e| format!("document {i}: {e}"))?;
        check(
            doc.approx_eq(&back, 1e-6),
            format!("document {i} changed across the round trip"),
        )?;
        check(
            serialize_map(&back) == text,
            format!("document {i} re-serializes differently"),
        )?;
        elements += doc.len();
    }
    Ok(format!("100 documents, {elements} elements"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 7] = [
        ("fixture-fidelity", Duration::from_secs(1), fixture_fidelity),
        ("hit-test-oracle", Duration::from_secs(5), hit_test_oracle),
        ("gesture-corpus", Duration::from_secs(10), gesture_corpus),
        ("distance-correctness", Duration::from_secs(1), distance_correctness),
        ("replay-determinism", Duration::from_secs(30), replay_determinism),
        ("harness-arithmetic", Duration::from_secs(1), harness_arithmetic),
        ("parser-round-trip", Duration::from_secs(5), parser_round_trip),
    ];
    let mut failed = 0;
    for (name, budget, criterion) in criteria {
        let started = Instant::now();
        let outcome = criterion();
        let elapsed = started.elapsed();
        let outcome = match outcome {
            Ok(detail) if elapsed > budget => Err(format!("{detail}; over budget")),
            other => other,
        };
        let (status, detail) = match &outcome {
            Ok(d) => ("PASS", d),
            Err(d) => ("FAIL", d),
        };
        println!(
            "{status} {name} [{:.3}s / {}s] {detail}",
            elapsed.as_secs_f64(),
            budget.as_secs()
        );
        failed += usize::from(outcome.is_err());
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
