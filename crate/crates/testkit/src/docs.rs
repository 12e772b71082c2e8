//! Random valid map documents.

use std::f64::consts::TAU;

use rand::RngExt;
use tactimap_core::map::InfoLayer;
use tactimap_core::{ElementKind, Geometry, InfoLayers, MapDocument, MapElement, Point};

use crate::StdRng;

const NAME_CHARS: &[char] = &[
    'a', 'b', 'k', 'r', 'z', 'A', 'Q', ' ', '-', '&', '<', '>', '"', '\'', 'é', 'ß', 'ü', '中', '\t', '\n', '0', '7',
];

pub fn random_text(rng: &mut StdRng) -> String {
    let mut s = String::from(['S', 'm', 'x'][rng.random_range(0..3)]);
    for _ in 0..rng.random_range(0..12) {
        s.push(NAME_CHARS[rng.random_range(0..NAME_CHARS.len())]);
    }
    s
}

fn random_levels(rng: &mut StdRng) -> InfoLayers {
    let mut level = 0;
    let layers = (0..rng.random_range(0..4))
        .map(|_| {
            level += rng.random_range(1..=3);
            InfoLayer {
                level,
                text: random_text(rng),
            }
        })
        .collect();
    InfoLayers::new(layers).expect("levels are increasing and non-blank")
}

/// Simple polygon: vertices at sorted angles around `center`.
pub fn star_polygon(rng: &mut StdRng, center: Point, max_radius: f64) -> Vec<Point> {
    let n = rng.random_range(3..=9);
    let slot = TAU / n as f64;
    (0..n)
        .map(|i| {
            let a = slot * (i as f64 + rng.random_range(0.1..0.9));
            let r = rng.random_range(0.3 * max_radius..max_radius);
            Point::new(center.x + r * a.cos(), center.y + r * a.sin())
        })
        .collect()
}

fn random_point(rng: &mut StdRng, w: f64, h: f64, margin: f64) -> Point {
    Point::new(
        rng.random_range(margin..w - margin),
        rng.random_range(margin..h - margin),
    )
}

fn random_polyline(rng: &mut StdRng, w: f64, h: f64) -> Vec<Point> {
    let mut p = random_point(rng, w, h, 0.0);
    let mut v = vec![p];
    for _ in 0..rng.random_range(1..6) {
        let a = rng.random_range(0.0..TAU);
        let len = rng.random_range(5.0..80.0);
        p = Point::new((p.x + len * a.cos()).clamp(0.0, w), (p.y + len * a.sin()).clamp(0.0, h));
        if p != *v.last().unwrap() {
            v.push(p);
        }
    }
    if v.len() < 2 {
        v.push(Point::new(if v[0].x > w / 2.0 { 0.0 } else { w }, v[0].y));
    }
    v
}

/// Random element of `kind` with id `id`, inside a `w` by `h` canvas.
pub fn random_element(rng: &mut StdRng, id: String, kind: ElementKind, w: f64, h: f64) -> MapElement {
    let geometry = match kind {
        ElementKind::Poi => Geometry::Point(random_point(rng, w, h, 0.0)),
        ElementKind::Street => Geometry::Polyline(random_polyline(rng, w, h)),
        ElementKind::Building | ElementKind::Water => {
            let max_radius = rng.random_range(3.0..40.0);
            let center = random_point(rng, w, h, max_radius);
            Geometry::Polygon(star_polygon(rng, center, max_radius))
        }
    };
    MapElement::new(id, kind, geometry, random_text(rng), random_levels(rng))
}

pub fn random_kind(rng: &mut StdRng) -> ElementKind {
    [
        ElementKind::Poi,
        ElementKind::Street,
        ElementKind::Building,
        ElementKind::Water,
    ][rng.random_range(0..4)]
}

/// Valid document with up to `max_elements` elements of mixed kinds.
pub fn random_document(rng: &mut StdRng, max_elements: usize) -> MapDocument {
    let w = rng.random_range(100.0..600.0);
    let h = rng.random_range(100.0..600.0);
    let scale = rng.random_range(0.1..20.0);
    let n = rng.random_range(0..=max_elements);
    let elements = (0..n)
        .map(|i| {
            let kind = random_kind(rng);
            random_element(rng, format!("{}-{i}", kind.as_str()), kind, w, h)
        })
        .collect();
    MapDocument::new(random_text(rng), w, h, scale, elements).expect("generated document is valid")
}

/// Document of only POIs, for lasso tests.
pub fn random_poi_document(rng: &mut StdRng, n: usize) -> MapDocument {
    let elements = (0..n)
        .map(|i| random_element(rng, format!("poi-{i}"), ElementKind::Poi, 420.0, 297.0))
        .collect();
    MapDocument::new("pois", 420.0, 297.0, 2.0, elements).expect("generated document is valid")
}
