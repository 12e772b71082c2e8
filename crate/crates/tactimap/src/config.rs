use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use anyhow::Context;
use serde::{Deserialize, Serialize};
use tactimap_core::controller::ControllerConfig;
use tactimap_core::fixture::FIXTURE_MAP_ID;
use tactimap_core::gesture::GestureConfig;
use tactimap_core::spatial::DEFAULT_CELL_MM;
use tactimap_core::{fixture_city_map, MapDocument, SpatialIndex, ValidationRules};

/// Engine settings, read from a flat JSON object. Gesture thresholds use the
/// `GestureConfig` field names; missing fields take their defaults.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct EngineConfig {
    #[serde(flatten)]
    pub gesture: GestureConfig,
    #[serde(flatten)]
    pub controller: ControllerConfig,
    #[serde(flatten)]
    pub validation: ValidationRules,
}

impl EngineConfig {
    pub fn from_json(text: &str) -> anyhow::Result<Self> {
        let config: EngineConfig = serde_json::from_str(text).context("config is not valid JSON")?;
        config.gesture.validate()?;
        let c = config.controller;
        anyhow::ensure!(
            c.hit_tolerance_mm.is_finite() && c.hit_tolerance_mm >= 0.0,
            "hit_tolerance_mm must be non-negative"
        );
        Ok(config)
    }

    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::from_json(&text)
    }
}

/// Maps addressable by `load_map{map_id}`. The built-in fixture is always
/// registered under `fixture`.
#[derive(Debug, Clone)]
pub struct MapRegistry {
    maps: BTreeMap<String, Arc<SpatialIndex>>,
}

impl Default for MapRegistry {
    fn default() -> Self {
        let mut registry = MapRegistry { maps: BTreeMap::new() };
        registry.insert(FIXTURE_MAP_ID, fixture_city_map());
        registry
    }
}

impl MapRegistry {
    pub fn insert(&mut self, id: impl Into<String>, doc: MapDocument) {
        self.maps
            .insert(id.into(), Arc::new(SpatialIndex::build(Arc::new(doc), DEFAULT_CELL_MM)));
    }

    pub fn get(&self, id: &str) -> Option<&Arc<SpatialIndex>> {
        self.maps.get(id)
    }

    pub fn ids(&self) -> impl Iterator<Item = &str> {
        self.maps.keys().map(String::as_str)
    }

    /// Registers a profile file under its file stem and returns that id.
    pub fn insert_file(&mut self, path: &Path) -> anyhow::Result<String> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let doc = crate::svg::parse_map(&text).with_context(|| format!("parsing {}", path.display()))?;
        let id = path
            .file_stem()
            .and_then(|s| s.to_str())
            .context("map path has no usable file name")?
            .to_owned();
        self.insert(id.clone(), doc);
        Ok(id)
    }
}
