//! Built-in fictional city centre used by tests, the study harness and the
//! `fixture` map id of the session service.

use alloc::vec;
use alloc::vec::Vec;

use crate::geometry::{Geometry, Point};
use crate::map::{ElementKind, InfoLayers, MapDocument, MapElement};

pub const FIXTURE_MAP_ID: &str = "fixture";
pub const FIXTURE_SCALE_M_PER_MM: f64 = 2.0;

fn street(id: &str, name: &str, from: (f64, f64), to: (f64, f64), levels: &[&str]) -> MapElement {
    element(
        id,
        ElementKind::Street,
        Geometry::Polyline(vec![from.into(), to.into()]),
        name,
        levels,
    )
}

fn rect(id: &str, kind: ElementKind, name: &str, min: (f64, f64), max: (f64, f64), levels: &[&str]) -> MapElement {
    let ring = vec![
        Point::new(min.0, min.1),
        Point::new(max.0, min.1),
        Point::new(max.0, max.1),
        Point::new(min.0, max.1),
    ];
    element(id, kind, Geometry::Polygon(ring), name, levels)
}

fn poi(id: &str, name: &str, at: (f64, f64), levels: &[&str]) -> MapElement {
    element(id, ElementKind::Poi, Geometry::Point(at.into()), name, levels)
}

fn element(id: &str, kind: ElementKind, geometry: Geometry, name: &str, levels: &[&str]) -> MapElement {
    let levels = InfoLayers::from_texts(levels.iter().copied()).expect("fixture levels are ordered");
    MapElement::new(id, kind, geometry, name, levels)
}

/// Six streets on a 3x3 grid, six buildings inside the blocks, six POIs and a
/// river band crossing the vertical streets. The hotel sits near the centre.
pub fn fixture_city_map() -> MapDocument {
    let elements: Vec<MapElement> = vec![
        street(
            "republic-street",
            "Republic Street",
            (20.0, 60.0),
            (400.0, 60.0),
            &["one-way towards the east"],
        ),
        street(
            "garden-avenue",
            "Garden Avenue",
            (20.0, 150.0),
            (400.0, 150.0),
            &["tree-lined, wide pavements"],
        ),
        street(
            "quay-road",
            "Quay Road",
            (20.0, 240.0),
            (400.0, 240.0),
            &["runs along the south bank"],
        ),
        street(
            "mill-street",
            "Mill Street",
            (80.0, 20.0),
            (80.0, 280.0),
            &["crosses the river on the old bridge"],
        ),
        street(
            "central-street",
            "Central Street",
            (210.0, 20.0),
            (210.0, 280.0),
            &["pedestrian between Garden Avenue and the river"],
        ),
        street(
            "harbour-street",
            "Harbour Street",
            (340.0, 20.0),
            (340.0, 280.0),
            &["bus line 3"],
        ),
        rect(
            "town-hall",
            ElementKind::Building,
            "Town Hall",
            (95.0, 75.0),
            (145.0, 115.0),
            &["open Monday to Friday, 9 to 17"],
        ),
        rect(
            "cathedral",
            ElementKind::Building,
            "Cathedral",
            (225.0, 75.0),
            (275.0, 120.0),
            &["gothic, thirteenth century"],
        ),
        rect(
            "school",
            ElementKind::Building,
            "School",
            (100.0, 160.0),
            (190.0, 182.0),
            &["primary school"],
        ),
        rect(
            "library",
            ElementKind::Building,
            "Library",
            (290.0, 75.0),
            (330.0, 130.0),
            &["braille collection on the ground floor"],
        ),
        rect(
            "market-hall",
            ElementKind::Building,
            "Market Hall",
            (355.0, 160.0),
            (395.0, 182.0),
            &["market on Saturday mornings"],
        ),
        rect(
            "station",
            ElementKind::Building,
            "Railway Station",
            (230.0, 250.0),
            (320.0, 280.0),
            &["main entrance on Quay Road"],
        ),
        poi(
            "hotel",
            "hotel",
            (240.0, 135.0),
            &[
                "Hotel of the Arts, three stars",
                "rooms from 80 euros per night",
                "reception open day and night",
            ],
        ),
        poi(
            "museum",
            "museum",
            (120.0, 95.0),
            &[
                "museum of local history inside the Town Hall",
                "entry 5 euros, free on Sundays",
            ],
        ),
        poi(
            "restaurant",
            "restaurant",
            (170.0, 45.0),
            &["restaurant The Blue Door", "open 12 to 14 and 19 to 23"],
        ),
        poi(
            "metro",
            "metro station",
            (270.0, 230.0),
            &["metro line A", "lift at the north entrance"],
        ),
        poi(
            "pharmacy",
            "pharmacy",
            (40.0, 110.0),
            &["pharmacy of the mill", "open until 20"],
        ),
        poi(
            "bakery",
            "bakery",
            (375.0, 110.0),
            &["bakery Golden Crust", "closed on Mondays"],
        ),
        element(
            "river",
            ElementKind::Water,
            Geometry::Polygon(vec![
                Point::new(10.0, 190.0),
                Point::new(410.0, 195.0),
                Point::new(410.0, 210.0),
                Point::new(10.0, 205.0),
            ]),
            "river",
            &["navigable, flows from west to east"],
        ),
    ];
    MapDocument::new(
        "Fictional city centre",
        crate::map::DEFAULT_CANVAS_WIDTH_MM,
        crate::map::DEFAULT_CANVAS_HEIGHT_MM,
        FIXTURE_SCALE_M_PER_MM,
        elements,
    )
    .expect("fixture map satisfies the document invariants")
}
