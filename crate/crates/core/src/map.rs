//! Typed map documents.
//!
//! A [`MapDocument`] is immutable once built and every constructor path goes
//! through [`MapDocument::new`], which enforces the document invariants.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};

use crate::geometry::{ring_self_intersects, Geometry, Point};

/// A3 landscape.
pub const DEFAULT_CANVAS_WIDTH_MM: f64 = 420.0;
pub const DEFAULT_CANVAS_HEIGHT_MM: f64 = 297.0;

/// Appended to an element name when a requested info level does not exist.
pub const NO_FURTHER_INFO: &str = "no further information";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ElementKind {
    Street,
    Building,
    Poi,
    Water,
}

impl ElementKind {
    pub const ALL: [ElementKind; 4] = [
        ElementKind::Street,
        ElementKind::Building,
        ElementKind::Poi,
        ElementKind::Water,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ElementKind::Street => "street",
            ElementKind::Building => "building",
            ElementKind::Poi => "poi",
            ElementKind::Water => "water",
        }
    }

    pub fn parse(s: &str) -> Option<ElementKind> {
        ElementKind::ALL.into_iter().find(|k| k.as_str() == s)
    }

    /// Hit-test rank; lower wins. Small targets beat the containers around them.
    pub fn hit_priority(self) -> u8 {
        match self {
            ElementKind::Poi => 0,
            ElementKind::Street => 1,
            ElementKind::Building => 2,
            ElementKind::Water => 3,
        }
    }
}

impl fmt::Display for ElementKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InfoLayer {
    pub level: u32,
    pub text: String,
}

/// Descriptions beyond the element name, ordered by strictly increasing level.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct InfoLayers(Vec<InfoLayer>);

impl InfoLayers {
    pub fn new(entries: Vec<InfoLayer>) -> Result<Self, MapError> {
        let layers = InfoLayers(entries);
        layers.check().map_err(|reason| MapError::InvalidLevels {
            id: String::new(),
            reason,
        })?;
        Ok(layers)
    }

    /// Builds consecutive levels 1..=n from the given texts.
    pub fn from_texts<I, S>(texts: I) -> Result<Self, MapError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        InfoLayers::new(
            texts
                .into_iter()
                .zip(1u32..)
                .map(|(text, level)| InfoLayer {
                    level,
                    text: text.into(),
                })
                .collect(),
        )
    }

    fn check(&self) -> Result<(), String> {
        let mut previous = 0u32;
        for layer in &self.0 {
            if layer.level <= previous {
                return Err(format!("level {} out of order", layer.level));
            }
            if layer.text.trim().is_empty() {
                return Err(format!("level {} has empty text", layer.level));
            }
            previous = layer.level;
        }
        Ok(())
    }

    pub fn get(&self, level: u32) -> Option<&str> {
        self.0.iter().find(|l| l.level == level).map(|l| l.text.as_str())
    }

    pub fn iter(&self) -> impl Iterator<Item = &InfoLayer> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MapElement {
    pub id: String,
    pub kind: ElementKind,
    pub geometry: Geometry,
    pub name: String,
    pub levels: InfoLayers,
}

impl MapElement {
    pub fn new(
        id: impl Into<String>,
        kind: ElementKind,
        geometry: Geometry,
        name: impl Into<String>,
        levels: InfoLayers,
    ) -> Self {
        MapElement {
            id: id.into(),
            kind,
            geometry,
            name: name.into(),
            levels,
        }
    }

    /// Checks the per-element invariants that do not depend on the canvas.
    pub fn check(&self) -> Result<(), MapError> {
        if self.id.is_empty() {
            return Err(MapError::InvalidGeometry {
                id: self.id.clone(),
                reason: String::from("empty id"),
            });
        }
        if self.name.trim().is_empty() {
            return Err(MapError::EmptyName(self.id.clone()));
        }
        self.levels.check().map_err(|reason| MapError::InvalidLevels {
            id: self.id.clone(),
            reason,
        })?;
        let bad = |reason: &str| MapError::InvalidGeometry {
            id: self.id.clone(),
            reason: String::from(reason),
        };
        if self
            .geometry
            .vertices()
            .iter()
            .any(|p| !p.x.is_finite() || !p.y.is_finite())
        {
            return Err(bad("non-finite coordinate"));
        }
        match (self.kind, &self.geometry) {
            (ElementKind::Street, Geometry::Polyline(v)) => {
                if v.len() < 2 {
                    return Err(bad("street needs at least 2 vertices"));
                }
            }
            (ElementKind::Building | ElementKind::Water, Geometry::Polygon(v)) => {
                if v.len() < 3 {
                    return Err(bad("polygon needs at least 3 vertices"));
                }
                if ring_self_intersects(v) {
                    return Err(MapError::SelfIntersecting(self.id.clone()));
                }
            }
            (ElementKind::Building | ElementKind::Water, Geometry::Polyline(_)) => {
                return Err(MapError::OpenPolygon(self.id.clone()));
            }
            (ElementKind::Poi, Geometry::Point(_)) => {}
            (kind, _) => {
                return Err(MapError::InvalidGeometry {
                    id: self.id.clone(),
                    reason: format!("geometry does not match kind {kind}"),
                })
            }
        }
        Ok(())
    }
}

/// Reasons a map cannot be loaded. Exactly one is reported per failed load.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MapError {
    #[error("malformed document: {0}")]
    MalformedDocument(String),
    #[error("unknown element kind `{kind}` on element `{id}`")]
    UnknownKind { id: String, kind: String },
    #[error("duplicate element id `{0}`")]
    DuplicateId(String),
    #[error("element `{0}` must be a closed path")]
    OpenPolygon(String),
    #[error("polygon `{0}` intersects itself")]
    SelfIntersecting(String),
    #[error("root element lacks a valid data-scale-m-per-mm")]
    MissingScale,
    #[error("element `{0}` lies outside the canvas")]
    OutOfCanvas(String),
    #[error("canvas dimensions must be positive")]
    InvalidCanvas,
    #[error("element `{0}` has an empty name")]
    EmptyName(String),
    #[error("element `{id}` has invalid info levels: {reason}")]
    InvalidLevels { id: String, reason: String },
    #[error("element `{id}` has invalid geometry: {reason}")]
    InvalidGeometry { id: String, reason: String },
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown element `{0}`")]
pub struct UnknownElement(pub String);

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MapDocument {
    title: String,
    canvas_width_mm: f64,
    canvas_height_mm: f64,
    scale_m_per_mm: f64,
    elements: Vec<MapElement>,
}

impl MapDocument {
    pub fn new(
        title: impl Into<String>,
        canvas_width_mm: f64,
        canvas_height_mm: f64,
        scale_m_per_mm: f64,
        elements: Vec<MapElement>,
    ) -> Result<Self, MapError> {
        let valid_dim = |v: f64| v.is_finite() && v > 0.0;
        if !valid_dim(canvas_width_mm) || !valid_dim(canvas_height_mm) {
            return Err(MapError::InvalidCanvas);
        }
        if !valid_dim(scale_m_per_mm) {
            return Err(MapError::MissingScale);
        }
        let mut seen = BTreeSet::new();
        for element in &elements {
            element.check()?;
            if !seen.insert(element.id.as_str()) {
                return Err(MapError::DuplicateId(element.id.clone()));
            }
            let inside = |p: &Point| p.x >= 0.0 && p.y >= 0.0 && p.x <= canvas_width_mm && p.y <= canvas_height_mm;
            if !element.geometry.vertices().iter().all(inside) {
                return Err(MapError::OutOfCanvas(element.id.clone()));
            }
        }
        Ok(MapDocument {
            title: title.into(),
            canvas_width_mm,
            canvas_height_mm,
            scale_m_per_mm,
            elements,
        })
    }

    /// Empty A3 document.
    pub fn empty(title: impl Into<String>, scale_m_per_mm: f64) -> Result<Self, MapError> {
        MapDocument::new(
            title,
            DEFAULT_CANVAS_WIDTH_MM,
            DEFAULT_CANVAS_HEIGHT_MM,
            scale_m_per_mm,
            Vec::new(),
        )
    }

    pub fn title(&self) -> &str {
        &self.title
    }

    pub fn canvas_width_mm(&self) -> f64 {
        self.canvas_width_mm
    }

    pub fn canvas_height_mm(&self) -> f64 {
        self.canvas_height_mm
    }

    pub fn scale_m_per_mm(&self) -> f64 {
        self.scale_m_per_mm
    }

    pub fn elements(&self) -> &[MapElement] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn element(&self, id: &str) -> Option<&MapElement> {
        self.elements.iter().find(|e| e.id == id)
    }

    pub fn count_kind(&self, kind: ElementKind) -> usize {
        self.elements.iter().filter(|e| e.kind == kind).count()
    }

    /// Text for `id` at `level`: the name at level 0, the matching info layer
    /// otherwise, or the name followed by [`NO_FURTHER_INFO`] when the element
    /// has no such level.
    pub fn element_info(&self, id: &str, level: u32) -> Result<String, UnknownElement> {
        let element = self.element(id).ok_or_else(|| UnknownElement(String::from(id)))?;
        if level == 0 {
            return Ok(element.name.clone());
        }
        Ok(match element.levels.get(level) {
            Some(text) => String::from(text),
            None => format!("{}, {}", element.name, NO_FURTHER_INFO),
        })
    }

    /// Approximate equality: identical structure, coordinates within `eps` mm.
    pub fn approx_eq(&self, other: &MapDocument, eps: f64) -> bool {
        let close = |a: f64, b: f64| (a - b).abs() <= eps;
        self.title == other.title
            && close(self.canvas_width_mm, other.canvas_width_mm)
            && close(self.canvas_height_mm, other.canvas_height_mm)
            && self.scale_m_per_mm == other.scale_m_per_mm
            && self.elements.len() == other.elements.len()
            && self.elements.iter().zip(&other.elements).all(|(a, b)| {
                a.id == b.id
                    && a.kind == b.kind
                    && a.name == b.name
                    && a.levels == b.levels
                    && geometry_approx_eq(&a.geometry, &b.geometry, eps)
            })
    }
}

fn geometry_approx_eq(a: &Geometry, b: &Geometry, eps: f64) -> bool {
    let same_variant = matches!(
        (a, b),
        (Geometry::Point(_), Geometry::Point(_))
            | (Geometry::Polyline(_), Geometry::Polyline(_))
            | (Geometry::Polygon(_), Geometry::Polygon(_))
    );
    same_variant
        && a.vertices().len() == b.vertices().len()
        && a.vertices().iter().zip(b.vertices()).all(|(p, q)| p.approx_eq(*q, eps))
}
