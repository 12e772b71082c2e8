//! Reader and writer for the SVG map profile.
//!
//! The profile is plain SVG with metadata in `data-*` attributes so maps stay
//! editable in ordinary vector editors:
//!
//! - root `<svg>`: `data-scale-m-per-mm` (required), `data-title`, and the
//!   canvas from `viewBox="0 0 W H"` (falling back to `width`/`height`, then A3);
//! - map elements: `<path>` for streets (open) and buildings/water (closed with
//!   `Z`), `<circle>` for POIs, each with `data-id`, `data-kind`, `data-name`
//!   and optional `data-level-1` … `data-level-N`.
//!
//! Elements without `data-kind` are decoration and skipped. User units are
//! millimeters. Transforms are not applied.

use std::fmt::Write as _;

use svgtypes::{SimplePathSegment, SimplifyingPathParser};
use tactimap_core::map::{
    ElementKind, InfoLayer, InfoLayers, MapDocument, MapElement, MapError, DEFAULT_CANVAS_HEIGHT_MM,
    DEFAULT_CANVAS_WIDTH_MM,
};
use tactimap_core::{Geometry, Point};

const SVG_NS: &str = "http://www.w3.org/2000/svg";
const LEVEL_PREFIX: &str = "data-level-";
/// Radius written for POI circles; the profile ignores it on read.
const POI_RADIUS_MM: f64 = 2.0;

pub fn parse_map(text: &str) -> Result<MapDocument, MapError> {
    let opts = roxmltree::ParsingOptions {
        allow_dtd: false,
        ..Default::default()
    };
    let xml =
        roxmltree::Document::parse_with_options(text, opts).map_err(|e| MapError::MalformedDocument(e.to_string()))?;
    let root = xml.root_element();
    if root.tag_name().name() != "svg" {
        return Err(MapError::MalformedDocument(format!(
            "root element is <{}>, expected <svg>",
            root.tag_name().name()
        )));
    }
    let scale = root
        .attribute("data-scale-m-per-mm")
        .and_then(|s| s.trim().parse::<f64>().ok())
        .filter(|s| s.is_finite() && *s > 0.0)
        .ok_or(MapError::MissingScale)?;
    let title = root.attribute("data-title").unwrap_or_default();
    let (width, height) = canvas_of(root)?;

    let mut elements = Vec::new();
    for node in root.descendants().skip(1).filter(|n| n.is_element()) {
        if let Some(kind) = node.attribute("data-kind") {
            elements.push(read_element(node, kind)?);
        }
    }
    MapDocument::new(title, width, height, scale, elements)
}

fn canvas_of(root: roxmltree::Node) -> Result<(f64, f64), MapError> {
    let bad = |what: &str| MapError::MalformedDocument(format!("invalid {what} on <svg>"));
    if let Some(vb) = root.attribute("viewBox") {
        let vb: svgtypes::ViewBox = vb.parse().map_err(|_| bad("viewBox"))?;
        if vb.x != 0.0 || vb.y != 0.0 {
            return Err(bad("viewBox origin"));
        }
        return Ok((vb.w, vb.h));
    }
    let length = |name: &str, default: f64| -> Result<f64, MapError> {
        match root.attribute(name) {
            None => Ok(default),
            Some(s) => {
                let len: svgtypes::Length = s.parse().map_err(|_| bad(name))?;
                match len.unit {
                    svgtypes::LengthUnit::None | svgtypes::LengthUnit::Mm => Ok(len.number),
                    _ => Err(bad(name)),
                }
            }
        }
    };
    Ok((
        length("width", DEFAULT_CANVAS_WIDTH_MM)?,
        length("height", DEFAULT_CANVAS_HEIGHT_MM)?,
    ))
}

fn read_element(node: roxmltree::Node, kind_attr: &str) -> Result<MapElement, MapError> {
    let id = node.attribute("data-id").filter(|s| !s.is_empty()).ok_or_else(|| {
        MapError::MalformedDocument(format!("<{}> with data-kind lacks data-id", node.tag_name().name()))
    })?;
    let kind = ElementKind::parse(kind_attr).ok_or_else(|| MapError::UnknownKind {
        id: id.to_owned(),
        kind: kind_attr.to_owned(),
    })?;
    let name = node.attribute("data-name").unwrap_or_default();
    let invalid = |reason: String| MapError::InvalidGeometry {
        id: id.to_owned(),
        reason,
    };

    let geometry = match (kind, node.tag_name().name()) {
        (ElementKind::Poi, "circle") => {
            let coord = |attr: &str| -> Result<f64, MapError> {
                node.attribute(attr)
                    .unwrap_or("0")
                    .trim()
                    .parse::<f64>()
                    .map_err(|_| invalid(format!("bad {attr}")))
            };
            Geometry::Point(Point::new(coord("cx")?, coord("cy")?))
        }
        (ElementKind::Street | ElementKind::Building | ElementKind::Water, "path") => {
            let d = node.attribute("d").unwrap_or_default();
            let (points, closed) = read_path(d).map_err(invalid)?;
            match (kind, closed) {
                (ElementKind::Street, false) => Geometry::Polyline(points),
                (ElementKind::Street, true) => return Err(invalid("street must be an open path".into())),
                (_, false) => return Err(MapError::OpenPolygon(id.to_owned())),
                (_, true) => Geometry::Polygon(points),
            }
        }
        (kind, tag) => return Err(invalid(format!("<{tag}> cannot carry kind {kind}"))),
    };

    let mut levels = Vec::new();
    for attr in node.attributes() {
        if let Some(n) = attr.name().strip_prefix(LEVEL_PREFIX) {
            let level = n
                .parse::<u32>()
                .ok()
                .filter(|l| *l >= 1 && !n.starts_with('0'))
                .ok_or_else(|| MapError::InvalidLevels {
                    id: id.to_owned(),
                    reason: format!("bad attribute {}", attr.name()),
                })?;
            levels.push(InfoLayer {
                level,
                text: attr.value().to_owned(),
            });
        }
    }
    levels.sort_by_key(|l| l.level);
    let levels = InfoLayers::new(levels).map_err(|e| match e {
        MapError::InvalidLevels { reason, .. } => MapError::InvalidLevels {
            id: id.to_owned(),
            reason,
        },
        other => other,
    })?;
    Ok(MapElement::new(id, kind, geometry, name, levels))
}

/// Vertices of a single-subpath, straight-line path, and whether it ends in `Z`.
fn read_path(d: &str) -> Result<(Vec<Point>, bool), String> {
    let mut points: Vec<Point> = Vec::new();
    let mut closed = false;
    for (i, segment) in SimplifyingPathParser::from(d).enumerate() {
        let segment = segment.map_err(|e| format!("path data: {e}"))?;
        if closed {
            return Err("only one subpath is allowed".into());
        }
        match segment {
            SimplePathSegment::MoveTo { x, y } if i == 0 => points.push(Point::new(x, y)),
            SimplePathSegment::MoveTo { .. } => return Err("only one subpath is allowed".into()),
            SimplePathSegment::LineTo { x, y } => points.push(Point::new(x, y)),
            SimplePathSegment::ClosePath => closed = true,
            SimplePathSegment::CurveTo { .. } | SimplePathSegment::Quadratic { .. } => {
                return Err("curves are not part of the profile".into())
            }
        }
    }
    if closed && points.len() > 1 && points[0] == points[points.len() - 1] {
        points.pop();
    }
    Ok((points, closed))
}

fn escape_attr(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            // Attribute-value normalization would turn these into spaces.
            '\n' => out.push_str("&#10;"),
            '\r' => out.push_str("&#13;"),
            '\t' => out.push_str("&#9;"),
            c => out.push(c),
        }
    }
    out
}

fn path_data(points: &[Point], close: bool) -> String {
    let mut d = String::new();
    for (i, p) in points.iter().enumerate() {
        let cmd = if i == 0 { 'M' } else { 'L' };
        if i > 0 {
            d.push(' ');
        }
        let _ = write!(d, "{cmd} {} {}", p.x, p.y);
    }
    if close {
        d.push_str(" Z");
    }
    d
}

/// Writes `doc` in the profile. Coordinates use the shortest decimal form
/// that reads back to the same `f64`.
pub fn serialize_map(doc: &MapDocument) -> String {
    let mut out = String::new();
    let (w, h) = (doc.canvas_width_mm(), doc.canvas_height_mm());
    let _ = writeln!(
        out,
        r#"<svg xmlns="{SVG_NS}" width="{w}mm" height="{h}mm" viewBox="0 0 {w} {h}" data-scale-m-per-mm="{}" data-title="{}">"#,
        doc.scale_m_per_mm(),
        escape_attr(doc.title()),
    );
    for e in doc.elements() {
        let mut attrs = format!(
            r#"data-id="{}" data-kind="{}" data-name="{}""#,
            escape_attr(&e.id),
            e.kind,
            escape_attr(&e.name)
        );
        for layer in e.levels.iter() {
            let _ = write!(
                attrs,
                r#" {LEVEL_PREFIX}{}="{}""#,
                layer.level,
                escape_attr(&layer.text)
            );
        }
        let _ = match &e.geometry {
            Geometry::Point(p) => writeln!(
                out,
                r#"  <circle {attrs} cx="{}" cy="{}" r="{POI_RADIUS_MM}"/>"#,
                p.x, p.y
            ),
            Geometry::Polyline(v) => {
                writeln!(
                    out,
                    r#"  <path {attrs} d="{}" fill="none" stroke="black"/>"#,
                    path_data(v, false)
                )
            }
            Geometry::Polygon(v) => writeln!(out, r#"  <path {attrs} d="{}" stroke="black"/>"#, path_data(v, true)),
        };
    }
    out.push_str("</svg>\n");
    out
}
