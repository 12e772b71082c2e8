//! Tactile legibility checks over a loaded map.
//!
//! Structural problems are reported as errors; legibility thresholds produce
//! warnings. The output order is fixed: structural issues in element order,
//! then line separation by element pair, then street segment length, then
//! symbol clearance by POI.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::geometry::{ring_edges, segment_distance, segment_segment_distance, Geometry, Point};
use crate::map::{ElementKind, MapDocument, MapElement};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ValidationRules {
    /// Minimum gap between line features that do not cross.
    pub min_line_separation_mm: f64,
    /// Minimum gap between a POI symbol and any line feature.
    pub min_symbol_clearance_mm: f64,
    /// Shortest street segment that still reads as a direction change.
    pub min_street_width_mm: f64,
}

impl Default for ValidationRules {
    fn default() -> Self {
        ValidationRules {
            min_line_separation_mm: 3.0,
            min_symbol_clearance_mm: 4.0,
            min_street_width_mm: 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationIssue {
    pub severity: Severity,
    pub code: String,
    pub element_id: Option<String>,
    pub message: String,
}

impl ValidationIssue {
    fn error(code: &str, element_id: &str, message: String) -> Self {
        ValidationIssue {
            severity: Severity::Error,
            code: String::from(code),
            element_id: Some(String::from(element_id)),
            message,
        }
    }

    fn warning(code: &str, element_id: &str, message: String) -> Self {
        ValidationIssue {
            severity: Severity::Warning,
            code: String::from(code),
            element_id: Some(String::from(element_id)),
            message,
        }
    }
}

pub fn has_errors(issues: &[ValidationIssue]) -> bool {
    issues.iter().any(|i| i.severity == Severity::Error)
}

pub fn validate_map(doc: &MapDocument, rules: &ValidationRules) -> Vec<ValidationIssue> {
    let mut issues = Vec::new();
    structural(doc, &mut issues);
    line_separation(doc, rules, &mut issues);
    street_segments(doc, rules, &mut issues);
    symbol_clearance(doc, rules, &mut issues);
    issues
}

// Documents built through `MapDocument::new` already satisfy these; they are
// re-checked so that validation alone is a sufficient gate.
fn structural(doc: &MapDocument, issues: &mut Vec<ValidationIssue>) {
    let mut seen = BTreeSet::new();
    for e in doc.elements() {
        if let Err(err) = e.check() {
            issues.push(ValidationIssue::error("invalid-element", &e.id, format!("{err}")));
        }
        if !seen.insert(e.id.as_str()) {
            issues.push(ValidationIssue::error(
                "duplicate-id",
                &e.id,
                format!("duplicate id `{}`", e.id),
            ));
        }
        let (w, h) = (doc.canvas_width_mm(), doc.canvas_height_mm());
        let outside = e
            .geometry
            .vertices()
            .iter()
            .any(|p| p.x < 0.0 || p.y < 0.0 || p.x > w || p.y > h);
        if outside {
            issues.push(ValidationIssue::error(
                "out-of-canvas",
                &e.id,
                format!("`{}` leaves the canvas", e.id),
            ));
        }
    }
}

fn line_segments(e: &MapElement) -> Vec<(Point, Point)> {
    match &e.geometry {
        Geometry::Point(_) => Vec::new(),
        Geometry::Polyline(v) => v.windows(2).map(|w| (w[0], w[1])).collect(),
        Geometry::Polygon(v) => ring_edges(v).collect(),
    }
}

fn line_separation(doc: &MapDocument, rules: &ValidationRules, issues: &mut Vec<ValidationIssue>) {
    let lines: Vec<(&MapElement, Vec<(Point, Point)>)> = doc
        .elements()
        .iter()
        .filter(|e| e.kind != ElementKind::Poi)
        .map(|e| (e, line_segments(e)))
        .collect();
    for (i, (a, segs_a)) in lines.iter().enumerate() {
        for (b, segs_b) in &lines[i + 1..] {
            // Segments that cross form a junction and are exempt.
            let closest = segs_a
                .iter()
                .flat_map(|&(p, q)| segs_b.iter().map(move |&(r, s)| segment_segment_distance(p, q, r, s)))
                .filter(|&d| d > 0.0)
                .fold(f64::INFINITY, f64::min);
            if closest < rules.min_line_separation_mm {
                issues.push(ValidationIssue::warning(
                    "line-separation",
                    &a.id,
                    format!(
                        "`{}` and `{}` run {:.2} mm apart (minimum {} mm)",
                        a.id, b.id, closest, rules.min_line_separation_mm
                    ),
                ));
            }
        }
    }
}

fn street_segments(doc: &MapDocument, rules: &ValidationRules, issues: &mut Vec<ValidationIssue>) {
    for e in doc.elements().iter().filter(|e| e.kind == ElementKind::Street) {
        let shortest = e
            .geometry
            .vertices()
            .windows(2)
            .map(|w| w[0].distance(w[1]))
            .fold(f64::INFINITY, f64::min);
        if shortest < rules.min_street_width_mm {
            issues.push(ValidationIssue::warning(
                "street-segment",
                &e.id,
                format!(
                    "`{}` has a {:.2} mm segment (minimum {} mm)",
                    e.id, shortest, rules.min_street_width_mm
                ),
            ));
        }
    }
}

fn symbol_clearance(doc: &MapDocument, rules: &ValidationRules, issues: &mut Vec<ValidationIssue>) {
    for poi in doc.elements().iter().filter(|e| e.kind == ElementKind::Poi) {
        let p = poi.geometry.reference_point();
        let nearest = doc
            .elements()
            .iter()
            .filter(|e| e.kind != ElementKind::Poi)
            .flat_map(line_segments)
            .map(|(a, b)| segment_distance(p, a, b))
            .fold(f64::INFINITY, f64::min);
        if nearest < rules.min_symbol_clearance_mm {
            issues.push(ValidationIssue::warning(
                "symbol-clearance",
                &poi.id,
                format!(
                    "`{}` sits {:.2} mm from a line (minimum {} mm)",
                    poi.id, nearest, rules.min_symbol_clearance_mm
                ),
            ));
        }
    }
}
