//! Touch-point resolution, reference-point distances and lasso enclosure.
//!
//! The grid is only an acceleration structure: a query gathers every element
//! whose bounding box overlaps a cell within `tolerance` of the point and then
//! ranks the candidates exactly as a linear scan would.

use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::geometry::{centroid, strictly_inside, Point, Rect};
use crate::map::{ElementKind, MapDocument, MapElement, UnknownElement};

/// Fingertip contact radius on an A3 surface.
pub const DEFAULT_HIT_TOLERANCE_MM: f64 = 5.0;
pub const DEFAULT_CELL_MM: f64 = 10.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ElementHit {
    pub element_id: String,
    pub kind: ElementKind,
    pub distance_mm: f64,
}

#[derive(Debug, Clone)]
pub struct SpatialIndex {
    doc: Arc<MapDocument>,
    cell_mm: f64,
    cols: usize,
    rows: usize,
    cells: Vec<Vec<usize>>,
}

impl SpatialIndex {
    /// Panics if `cell_mm` is not a positive finite number.
    pub fn build(doc: Arc<MapDocument>, cell_mm: f64) -> SpatialIndex {
        assert!(cell_mm.is_finite() && cell_mm > 0.0, "cell size must be positive");
        let cols = libm::ceil(doc.canvas_width_mm() / cell_mm).max(1.0) as usize;
        let rows = libm::ceil(doc.canvas_height_mm() / cell_mm).max(1.0) as usize;
        let mut cells = vec![Vec::new(); cols * rows];
        let mut index = SpatialIndex {
            doc: Arc::clone(&doc),
            cell_mm,
            cols,
            rows,
            cells: Vec::new(),
        };
        for (i, e) in doc.elements().iter().enumerate() {
            if let Some(bounds) = e.geometry.bounds() {
                let (c0, r0, c1, r1) = index.cell_range(bounds, 0.0);
                for r in r0..=r1 {
                    for c in c0..=c1 {
                        cells[r * cols + c].push(i);
                    }
                }
            }
        }
        index.cells = cells;
        index
    }

    pub fn document(&self) -> &Arc<MapDocument> {
        &self.doc
    }

    pub fn cell_mm(&self) -> f64 {
        self.cell_mm
    }

    fn cell_of(&self, v: f64, count: usize) -> usize {
        let c = libm::floor(v / self.cell_mm);
        if c.is_nan() || c < 0.0 {
            0
        } else {
            (c as usize).min(count - 1)
        }
    }

    fn cell_range(&self, r: Rect, pad: f64) -> (usize, usize, usize, usize) {
        (
            self.cell_of(r.min.x - pad, self.cols),
            self.cell_of(r.min.y - pad, self.rows),
            self.cell_of(r.max.x + pad, self.cols),
            self.cell_of(r.max.y + pad, self.rows),
        )
    }

    /// Element indices whose bounds may lie within `pad` of `r`, ascending.
    fn candidates(&self, r: Rect, pad: f64) -> Vec<usize> {
        let (c0, r0, c1, r1) = self.cell_range(r, pad);
        let mut out: Vec<usize> = Vec::new();
        for row in r0..=r1 {
            for col in c0..=c1 {
                out.extend_from_slice(&self.cells[row * self.cols + col]);
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Winner among elements within `tolerance_mm` of `p`: POI before street
    /// before building before water, then smaller distance, then smaller
    /// area or length, then lexicographic id.
    pub fn resolve_point(&self, p: Point, tolerance_mm: f64) -> Option<ElementHit> {
        let tolerance_mm = tolerance_mm.max(0.0);
        if !p.x.is_finite() || !p.y.is_finite() {
            return None;
        }
        let query = Rect { min: p, max: p };
        self.candidates(query, tolerance_mm)
            .into_iter()
            .map(|i| &self.doc.elements()[i])
            .filter_map(|e| {
                let d = e.geometry.distance_to(p);
                (d <= tolerance_mm).then_some((e, d))
            })
            .min_by(|a, b| hit_order(*a, *b))
            .map(|(e, d)| ElementHit {
                element_id: e.id.clone(),
                kind: e.kind,
                distance_mm: d,
            })
    }

    /// The POI strictly inside the lasso (even-odd rule) nearest to the lasso
    /// centroid; ties go to the lexicographically smaller id.
    pub fn enclosed_element(&self, lasso: &[Point]) -> Option<&str> {
        let bounds = Rect::of_points(lasso)?;
        if lasso.len() < 3 {
            return None;
        }
        let center = centroid(lasso);
        self.candidates(bounds, 0.0)
            .into_iter()
            .map(|i| &self.doc.elements()[i])
            .filter(|e| e.kind == ElementKind::Poi)
            .filter_map(|e| {
                let at = e.geometry.reference_point();
                strictly_inside(lasso, at).then(|| (e, at.distance(center)))
            })
            .min_by(|(a, da), (b, db)| da.total_cmp(db).then_with(|| a.id.cmp(&b.id)))
            .map(|(e, _)| e.id.as_str())
    }
}

pub(crate) fn hit_order(a: (&MapElement, f64), b: (&MapElement, f64)) -> Ordering {
    a.0.kind
        .hit_priority()
        .cmp(&b.0.kind.hit_priority())
        .then_with(|| a.1.total_cmp(&b.1))
        .then_with(|| a.0.geometry.size().total_cmp(&b.0.geometry.size()))
        .then_with(|| a.0.id.cmp(&b.0.id))
}

/// Distance in meters between the reference points of two elements.
pub fn distance_between(doc: &MapDocument, id_a: &str, id_b: &str) -> Result<f64, UnknownElement> {
    let a = doc.element(id_a).ok_or_else(|| UnknownElement(String::from(id_a)))?;
    let b = doc.element(id_b).ok_or_else(|| UnknownElement(String::from(id_b)))?;
    if id_a == id_b {
        return Ok(0.0);
    }
    let mm = a.geometry.reference_point().distance(b.geometry.reference_point());
    Ok(mm * doc.scale_m_per_mm())
}
