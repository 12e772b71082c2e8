//! Planar geometry in map millimeters.

use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

/// Coordinate tolerance used for equality and degenerate-case checks.
pub const EPS_MM: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn distance(self, other: Point) -> f64 {
        libm::hypot(self.x - other.x, self.y - other.y)
    }

    pub fn midpoint(self, other: Point) -> Point {
        Point::new((self.x + other.x) / 2.0, (self.y + other.y) / 2.0)
    }

    pub fn approx_eq(self, other: Point, eps: f64) -> bool {
        (self.x - other.x).abs() <= eps && (self.y - other.y).abs() <= eps
    }
}

impl From<(f64, f64)> for Point {
    fn from((x, y): (f64, f64)) -> Self {
        Point::new(x, y)
    }
}

/// Axis-aligned bounding box.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect {
    pub min: Point,
    pub max: Point,
}

impl Rect {
    pub fn of_points(points: &[Point]) -> Option<Rect> {
        let first = *points.first()?;
        let mut r = Rect { min: first, max: first };
        for p in &points[1..] {
            r.min.x = r.min.x.min(p.x);
            r.min.y = r.min.y.min(p.y);
            r.max.x = r.max.x.max(p.x);
            r.max.y = r.max.y.max(p.y);
        }
        Some(r)
    }

    pub fn contains(&self, p: Point) -> bool {
        p.x >= self.min.x && p.x <= self.max.x && p.y >= self.min.y && p.y <= self.max.y
    }
}

/// Shape carried by a map element.
///
/// Polygons are stored without a repeated closing vertex; the edge from the
/// last vertex back to the first is implicit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", content = "coordinates", rename_all = "snake_case")]
pub enum Geometry {
    Point(Point),
    Polyline(Vec<Point>),
    Polygon(Vec<Point>),
}

impl Geometry {
    pub fn vertices(&self) -> &[Point] {
        match self {
            Geometry::Point(p) => core::slice::from_ref(p),
            Geometry::Polyline(v) | Geometry::Polygon(v) => v,
        }
    }

    pub fn bounds(&self) -> Option<Rect> {
        Rect::of_points(self.vertices())
    }

    /// Distance from `p` to the geometry; zero inside a polygon or on any line.
    pub fn distance_to(&self, p: Point) -> f64 {
        match self {
            Geometry::Point(q) => p.distance(*q),
            Geometry::Polyline(v) => polyline_distance(v, p),
            Geometry::Polygon(v) => {
                if contains_even_odd(v, p) {
                    0.0
                } else {
                    ring_distance(v, p)
                }
            }
        }
    }

    /// Area for polygons, length for polylines, zero for points.
    pub fn size(&self) -> f64 {
        match self {
            Geometry::Point(_) => 0.0,
            Geometry::Polyline(v) => path_length(v),
            Geometry::Polygon(v) => signed_area(v).abs(),
        }
    }

    /// Point used for element-to-element distances: the point itself, the
    /// area centroid of a polygon, or the arc-length midpoint of a polyline.
    pub fn reference_point(&self) -> Point {
        match self {
            Geometry::Point(p) => *p,
            Geometry::Polyline(v) => arc_length_midpoint(v),
            Geometry::Polygon(v) => centroid(v),
        }
    }
}

pub fn segment_distance(p: Point, a: Point, b: Point) -> f64 {
    let dx = b.x - a.x;
    let dy = b.y - a.y;
    let len2 = dx * dx + dy * dy;
    if len2 == 0.0 {
        return p.distance(a);
    }
    let t = (((p.x - a.x) * dx + (p.y - a.y) * dy) / len2).clamp(0.0, 1.0);
    p.distance(Point::new(a.x + t * dx, a.y + t * dy))
}

pub fn polyline_distance(vertices: &[Point], p: Point) -> f64 {
    match vertices {
        [] => f64::INFINITY,
        [only] => p.distance(*only),
        _ => vertices
            .windows(2)
            .map(|w| segment_distance(p, w[0], w[1]))
            .fold(f64::INFINITY, f64::min),
    }
}

/// Distance from `p` to the boundary of a closed ring.
pub fn ring_distance(ring: &[Point], p: Point) -> f64 {
    ring_edges(ring)
        .map(|(a, b)| segment_distance(p, a, b))
        .fold(f64::INFINITY, f64::min)
}

/// Edges of a closed ring, including the implicit closing edge.
pub fn ring_edges(ring: &[Point]) -> impl Iterator<Item = (Point, Point)> + '_ {
    let n = ring.len();
    (0..n).map(move |i| (ring[i], ring[(i + 1) % n]))
}

/// Even-odd rule containment. Points exactly on an edge may land on either
/// side; callers that care measure boundary distance separately.
pub fn contains_even_odd(ring: &[Point], p: Point) -> bool {
    let mut inside = false;
    for (a, b) in ring_edges(ring) {
        if (a.y > p.y) != (b.y > p.y) {
            let x_cross = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
            if p.x < x_cross {
                inside = !inside;
            }
        }
    }
    inside
}

/// Containment that excludes points within [`EPS_MM`] of the boundary.
pub fn strictly_inside(ring: &[Point], p: Point) -> bool {
    ring.len() >= 3 && contains_even_odd(ring, p) && ring_distance(ring, p) > EPS_MM
}

pub fn signed_area(ring: &[Point]) -> f64 {
    ring_edges(ring).map(|(a, b)| a.x * b.y - b.x * a.y).sum::<f64>() / 2.0
}

/// Area centroid of a simple ring. Falls back to the vertex mean when the
/// area is degenerate.
pub fn centroid(ring: &[Point]) -> Point {
    if ring.is_empty() {
        return Point::default();
    }
    // Shift to the first vertex to keep the cross products small.
    let origin = ring[0];
    let mut area2 = 0.0;
    let mut cx = 0.0;
    let mut cy = 0.0;
    for (a, b) in ring_edges(ring) {
        let (ax, ay) = (a.x - origin.x, a.y - origin.y);
        let (bx, by) = (b.x - origin.x, b.y - origin.y);
        let cross = ax * by - bx * ay;
        area2 += cross;
        cx += (ax + bx) * cross;
        cy += (ay + by) * cross;
    }
    if area2.abs() <= EPS_MM * EPS_MM {
        return vertex_mean(ring);
    }
    Point::new(origin.x + cx / (3.0 * area2), origin.y + cy / (3.0 * area2))
}

fn vertex_mean(points: &[Point]) -> Point {
    let n = points.len() as f64;
    let (sx, sy) = points.iter().fold((0.0, 0.0), |(sx, sy), p| (sx + p.x, sy + p.y));
    Point::new(sx / n, sy / n)
}

pub fn path_length(vertices: &[Point]) -> f64 {
    vertices.windows(2).map(|w| w[0].distance(w[1])).sum()
}

/// Point halfway along a polyline measured by arc length.
pub fn arc_length_midpoint(vertices: &[Point]) -> Point {
    match vertices {
        [] => Point::default(),
        [only] => *only,
        _ => {
            let half = path_length(vertices) / 2.0;
            let mut walked = 0.0;
            for w in vertices.windows(2) {
                let seg = w[0].distance(w[1]);
                if seg > 0.0 && walked + seg >= half {
                    let t = (half - walked) / seg;
                    return Point::new(w[0].x + t * (w[1].x - w[0].x), w[0].y + t * (w[1].y - w[0].y));
                }
                walked += seg;
            }
            vertices[vertices.len() - 1]
        }
    }
}

fn orientation(a: Point, b: Point, c: Point) -> f64 {
    (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x)
}

fn on_segment(a: Point, b: Point, p: Point) -> bool {
    p.x >= a.x.min(b.x) - EPS_MM
        && p.x <= a.x.max(b.x) + EPS_MM
        && p.y >= a.y.min(b.y) - EPS_MM
        && p.y <= a.y.max(b.y) + EPS_MM
}

/// Closed-segment intersection test, touching endpoints included.
pub fn segments_intersect(a: Point, b: Point, c: Point, d: Point) -> bool {
    let d1 = orientation(c, d, a);
    let d2 = orientation(c, d, b);
    let d3 = orientation(a, b, c);
    let d4 = orientation(a, b, d);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0)) && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0)) {
        return true;
    }
    (d1 == 0.0 && on_segment(c, d, a))
        || (d2 == 0.0 && on_segment(c, d, b))
        || (d3 == 0.0 && on_segment(a, b, c))
        || (d4 == 0.0 && on_segment(a, b, d))
}

/// Minimum distance between two closed segments.
pub fn segment_segment_distance(a: Point, b: Point, c: Point, d: Point) -> f64 {
    if segments_intersect(a, b, c, d) {
        return 0.0;
    }
    segment_distance(a, c, d)
        .min(segment_distance(b, c, d))
        .min(segment_distance(c, a, b))
        .min(segment_distance(d, a, b))
}

/// True when two non-adjacent edges of the ring intersect, or the ring has
/// repeated vertices.
pub fn ring_self_intersects(ring: &[Point]) -> bool {
    let n = ring.len();
    if n < 3 {
        return false;
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if ring[i].approx_eq(ring[j], EPS_MM) {
                return true;
            }
        }
    }
    let edges: Vec<(Point, Point)> = ring_edges(ring).collect();
    for i in 0..n {
        for j in (i + 1)..n {
            let adjacent = j == i + 1 || (i == 0 && j == n - 1);
            if adjacent {
                // Adjacent edges share a vertex; they only overlap if collinear and folding back.
                let (a, b) = edges[i];
                let (c, d) = edges[j];
                let shared_is_b = b.approx_eq(c, EPS_MM);
                let (far_i, shared, far_j) = if shared_is_b { (a, b, d) } else { (b, a, c) };
                if orientation(far_i, shared, far_j).abs() <= EPS_MM {
                    let dot = (far_i.x - shared.x) * (far_j.x - shared.x) + (far_i.y - shared.y) * (far_j.y - shared.y);
                    if dot > 0.0 {
                        return true;
                    }
                }
                continue;
            }
            let (a, b) = edges[i];
            let (c, d) = edges[j];
            if segments_intersect(a, b, c, d) {
                return true;
            }
        }
    }
    false
}
