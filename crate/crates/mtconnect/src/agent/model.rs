use std::collections::HashSet;

use panel_readers::ReadingKind;
use panel_station::StationConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Category {
    Sample,
    Event,
}

impl Category {
    pub fn as_str(&self) -> &'static str {
        match self {
            Category::Sample => "SAMPLE",
            Category::Event => "EVENT",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DataItemDef {
    pub id: String,
    pub category: Category,
    pub item_type: String,
    pub units: String,
}

impl DataItemDef {
    /// Numeric kinds are samples, every other kind an event. The type is the
    /// kind name in upper case.
    pub fn for_kind(id: &str, kind: ReadingKind, units: &str) -> Self {
        Self {
            id: id.to_string(),
            category: if kind.is_numeric() {
                Category::Sample
            } else {
                Category::Event
            },
            item_type: kind.as_str().to_uppercase(),
            units: units.to_string(),
        }
    }
}

/// The single device an agent describes: one station and its data items.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeviceModel {
    pub name: String,
    items: Vec<DataItemDef>,
}

impl DeviceModel {
    pub fn new(name: &str, items: Vec<DataItemDef>) -> Result<Self, String> {
        let mut seen = HashSet::new();
        for i in &items {
            if !seen.insert(i.id.as_str()) {
                return Err(format!("duplicate data item id '{}'", i.id));
            }
        }
        Ok(Self {
            name: name.to_string(),
            items,
        })
    }

    pub fn from_station(cfg: &StationConfig) -> Self {
        let items = cfg
            .data_items()
            .iter()
            .map(|d| DataItemDef::for_kind(&d.id, d.kind, &d.units))
            .collect();
        Self::new(&cfg.station_id, items).expect("validated configs have unique data item ids")
    }

    pub fn items(&self) -> &[DataItemDef] {
        &self.items
    }

    pub fn item(&self, id: &str) -> Option<&DataItemDef> {
        self.items.iter().find(|i| i.id == id)
    }
}
