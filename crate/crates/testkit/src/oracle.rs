use tactimap_core::map::{ElementKind, MapDocument, MapElement};
use tactimap_core::{Geometry, Point};

fn dist(ax: f64, ay: f64, bx: f64, by: f64) -> f64 {
    ((ax - bx).powi(2) + (ay - by).powi(2)).sqrt()
}

/// Point to closed segment distance by explicit projection.
pub fn seg_dist(p: Point, a: Point, b: Point) -> f64 {
    let (vx, vy) = (b.x - a.x, b.y - a.y);
    let len2 = vx * vx + vy * vy;
    if len2 == 0.0 {
        return dist(p.x, p.y, a.x, a.y);
    }
    let t = (((p.x - a.x) * vx + (p.y - a.y) * vy) / len2).clamp(0.0, 1.0);
    dist(p.x, p.y, a.x + t * vx, a.y + t * vy)
}

/// Classic crossing-number test.
pub fn ray_cast(ring: &[Point], p: Point) -> bool {
    let n = ring.len();
    let mut c = false;
    let mut j = n - 1;
    for i in 0..n {
        let (pi, pj) = (ring[i], ring[j]);
        if (pi.y > p.y) != (pj.y > p.y) && p.x < (pj.x - pi.x) * (p.y - pi.y) / (pj.y - pi.y) + pi.x {
            c = !c;
        }
        j = i;
    }
    c
}

pub fn element_distance(e: &MapElement, p: Point) -> f64 {
    match &e.geometry {
        Geometry::Point(q) => dist(p.x, p.y, q.x, q.y),
        Geometry::Polyline(v) => {
            let mut best = f64::INFINITY;
            for i in 1..v.len() {
                best = best.min(seg_dist(p, v[i - 1], v[i]));
            }
            best
        }
        Geometry::Polygon(v) => {
            if ray_cast(v, p) {
                return 0.0;
            }
            let mut best = f64::INFINITY;
            for i in 0..v.len() {
                best = best.min(seg_dist(p, v[i], v[(i + 1) % v.len()]));
            }
            best
        }
    }
}

/// Area by the trapezoid formula, length by summed segment lengths.
pub fn element_size(e: &MapElement) -> f64 {
    match &e.geometry {
        Geometry::Point(_) => 0.0,
        Geometry::Polyline(v) => (1..v.len()).map(|i| dist(v[i - 1].x, v[i - 1].y, v[i].x, v[i].y)).sum(),
        Geometry::Polygon(v) => {
            let n = v.len();
            let twice: f64 = (0..n)
                .map(|i| {
                    let (a, b) = (v[i], v[(i + 1) % n]);
                    (b.x - a.x) * (b.y + a.y)
                })
                .sum();
            (twice / 2.0).abs()
        }
    }
}

fn kind_rank(kind: ElementKind) -> u8 {
    match kind {
        ElementKind::Poi => 0,
        ElementKind::Street => 1,
        ElementKind::Building => 2,
        ElementKind::Water => 3,
    }
}

/// Linear scan over every element: `(id, kind, distance)` of the winner.
pub fn brute_force_resolve(doc: &MapDocument, p: Point, tolerance: f64) -> Option<(String, ElementKind, f64)> {
    let mut best: Option<(&MapElement, f64)> = None;
    for e in doc.elements() {
        let d = element_distance(e, p);
        if d > tolerance {
            continue;
        }
        let better = match best {
            None => true,
            Some((b, bd)) => {
                let key = (kind_rank(e.kind), d, element_size(e));
                let best_key = (kind_rank(b.kind), bd, element_size(b));
                key.partial_cmp(&best_key) == Some(std::cmp::Ordering::Less) || (key == best_key && e.id < b.id)
            }
        };
        if better {
            best = Some((e, d));
        }
    }
    best.map(|(e, d)| (e.id.clone(), e.kind, d))
}

/// Centroid of a simple polygon via triangle fan from the origin.
pub fn polygon_centroid(v: &[Point]) -> Point {
    let (mut a, mut cx, mut cy) = (0.0, 0.0, 0.0);
    for i in 0..v.len() {
        let (p, q) = (v[i], v[(i + 1) % v.len()]);
        let cross = p.x * q.y - q.x * p.y;
        a += cross / 2.0;
        cx += (p.x + q.x) * cross / 6.0;
        cy += (p.y + q.y) * cross / 6.0;
    }
    Point::new(cx / a, cy / a)
}

/// POI strictly inside the lasso nearest the lasso centroid, by ray casting
/// over every POI in the document.
pub fn brute_force_enclosed(doc: &MapDocument, lasso: &[Point]) -> Option<String> {
    let c = polygon_centroid(lasso);
    let mut inside: Vec<(f64, &str)> = doc
        .elements()
        .iter()
        .filter(|e| e.kind == ElementKind::Poi)
        .filter_map(|e| match e.geometry {
            Geometry::Point(p) => {
                let on_edge = (0..lasso.len()).any(|i| seg_dist(p, lasso[i], lasso[(i + 1) % lasso.len()]) <= 1e-6);
                (ray_cast(lasso, p) && !on_edge).then(|| (dist(p.x, p.y, c.x, c.y), e.id.as_str()))
            }
            _ => None,
        })
        .collect();
    inside.sort_by(|a, b| a.partial_cmp(b).unwrap());
    inside.first().map(|(_, id)| id.to_string())
}

/// Spoken meters: nearest 10, or nearest 1 below 20.
pub fn spoken_meters(m: f64) -> u64 {
    if m < 20.0 {
        m.round() as u64
    } else {
        ((m / 10.0).round() * 10.0) as u64
    }
}

/// Reference point distance in meters, from raw coordinates.
pub fn reference_distance_m(doc: &MapDocument, a: &str, b: &str) -> f64 {
    let reference = |id: &str| match &doc.element(id).unwrap().geometry {
        Geometry::Point(p) => *p,
        Geometry::Polygon(v) => polygon_centroid(v),
        Geometry::Polyline(v) => {
            let total: f64 = (1..v.len()).map(|i| dist(v[i - 1].x, v[i - 1].y, v[i].x, v[i].y)).sum();
            let mut remaining = total / 2.0;
            for i in 1..v.len() {
                let seg = dist(v[i - 1].x, v[i - 1].y, v[i].x, v[i].y);
                if seg >= remaining && seg > 0.0 {
                    let t = remaining / seg;
                    return Point::new(
                        v[i - 1].x + t * (v[i].x - v[i - 1].x),
                        v[i - 1].y + t * (v[i].y - v[i - 1].y),
                    );
                }
                remaining -= seg;
            }
            v[v.len() - 1]
        }
    };
    let (p, q) = (reference(a), reference(b));
    dist(p.x, p.y, q.x, q.y) * doc.scale_m_per_mm()
}

/// Mean and n-1 standard deviation by straight sums.
pub fn mean_sd(values: &[f64]) -> (f64, Option<f64>) {
    let n = values.len() as f64;
    let mut sum = 0.0;
    for v in values {
        sum += v;
    }
    let mean = sum / n;
    if values.len() < 2 {
        return (mean, None);
    }
    let mut ss = 0.0;
    for v in values {
        ss += (v - mean) * (v - mean);
    }
    (mean, Some((ss / (n - 1.0)).sqrt()))
}
