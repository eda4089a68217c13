//! Versioned JSON documents for instances and solutions.
//!
//! Costs and bounds are decimal strings so values wider than 64 bits survive
//! readers that parse JSON numbers as doubles. A solution document carries a
//! digest of its instance; the digest covers only the scheduling content
//! (bound and canonically ordered items), never the optional metadata.

use std::str::FromStr;

use cds_core::{validate, BinDelivery, CostValue, Instance, InstanceError, Item, ItemId, Schedule};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

/// Document version this build reads and writes.
pub const SCHEMA_VERSION: u32 = 1;

/// Why a document could not be read or mapped onto core types.
#[derive(Error, Debug)]
pub enum FormatError {
    #[error("unsupported schema_version {found} (this build reads {SCHEMA_VERSION})")]
    UnsupportedSchema { found: u32 },
    #[error("not a decimal cost value: {text:?}")]
    BadCost { text: String },
    #[error("bin {index} lists no items")]
    EmptyBin { index: usize },
    #[error("solution was made for a different instance: hash {found}, expected {expected}")]
    HashMismatch { expected: String, found: String },
    #[error(transparent)]
    Instance(#[from] InstanceError),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

/// Parses a decimal cost string, mapping failures to a readable error.
pub fn parse_cost(text: &str) -> Result<CostValue, FormatError> {
    CostValue::from_str(text).map_err(|_| FormatError::BadCost {
        text: text.to_string(),
    })
}

/// One item: a stable id and the time its container is due.
#[derive(Serialize, Deserialize, Clone, Copy, PartialEq, Eq, Debug)]
#[serde(deny_unknown_fields)]
pub struct ItemEntry {
    pub id: u64,
    pub due: u64,
}

/// Provenance of a generated instance; never affects solving or hashing.
#[derive(Serialize, Deserialize, Clone, PartialEq, Debug)]
#[serde(deny_unknown_fields)]
pub struct Metadata {
    pub family: String,
    #[serde(default, skip_serializing_if = "serde_json::Map::is_empty")]
    pub params: serde_json::Map<String, serde_json::Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

/// On-disk instance document.
#[derive(Serialize, Deserialize, Clone, PartialEq, Debug)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub schema_version: u32,
    /// Per-bin cost budget, as a decimal string.
    pub bound: String,
    pub items: Vec<ItemEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metadata: Option<Metadata>,
}

impl InstanceFile {
    /// Writes an instance out in canonical (due, id) order.
    pub fn from_instance(instance: &Instance, metadata: Option<Metadata>) -> Self {
        InstanceFile {
            schema_version: SCHEMA_VERSION,
            bound: instance.bound().to_string(),
            items: instance
                .items()
                .iter()
                .map(|item| ItemEntry {
                    id: item.id.0,
                    due: item.due,
                })
                .collect(),
            metadata,
        }
    }

    /// Checks the version and rebuilds the core instance.
    pub fn to_instance(&self) -> Result<Instance, FormatError> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(FormatError::UnsupportedSchema {
                found: self.schema_version,
            });
        }
        let bound = parse_cost(&self.bound)?;
        let items = self
            .items
            .iter()
            .map(|entry| Item {
                id: ItemId(entry.id),
                due: entry.due,
            })
            .collect();
        Ok(Instance::new(items, bound)?)
    }

    /// Pretty JSON with a trailing newline, stable for identical documents.
    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("plain data serializes");
        text.push('\n');
        text
    }

    pub fn from_json(text: &str) -> Result<Self, FormatError> {
        Ok(serde_json::from_str(text)?)
    }
}

/// Digest naming an instance: sha256 over the compact JSON of its
/// metadata-free document, items in canonical order.
pub fn instance_hash(instance: &Instance) -> String {
    let canonical = InstanceFile::from_instance(instance, None);
    let bytes = serde_json::to_vec(&canonical).expect("plain data serializes");
    format!("sha256:{}", hex::encode(Sha256::digest(bytes)))
}

/// One delivery: its time, the item ids on board, and the recorded cost.
#[derive(Serialize, Deserialize, Clone, PartialEq, Eq, Debug)]
#[serde(deny_unknown_fields)]
pub struct BinEntry {
    pub time: u64,
    pub item_ids: Vec<u64>,
    /// Sum of |due − time| over the bin, as a decimal string.
    pub cost: String,
}

/// Recorded totals; the validate command recomputes both from scratch.
#[derive(Serialize, Deserialize, Clone, PartialEq, Eq, Debug)]
#[serde(deny_unknown_fields)]
pub struct Totals {
    pub bins: usize,
    pub total_cost: String,
}

/// On-disk solution document, tied to its instance by hash.
#[derive(Serialize, Deserialize, Clone, PartialEq, Eq, Debug)]
#[serde(deny_unknown_fields)]
pub struct SolutionFile {
    pub schema_version: u32,
    pub instance_hash: String,
    pub algorithm: String,
    pub bins: Vec<BinEntry>,
    pub totals: Totals,
    pub feasible: bool,
}

impl SolutionFile {
    /// Records a schedule produced for `instance`, honestly reporting
    /// whether it validates.
    pub fn from_schedule(instance: &Instance, schedule: &Schedule, algorithm: &str) -> Self {
        let bins = schedule
            .bins
            .iter()
            .map(|bin| BinEntry {
                time: bin.time(),
                item_ids: bin.item_ids().iter().map(|id| id.0).collect(),
                cost: bin
                    .cost(instance)
                    .expect("schedule bins reference instance items")
                    .to_string(),
            })
            .collect();
        let total_cost = schedule
            .total_cost(instance)
            .expect("schedule bins reference instance items");
        SolutionFile {
            schema_version: SCHEMA_VERSION,
            instance_hash: instance_hash(instance),
            algorithm: algorithm.to_string(),
            bins,
            totals: Totals {
                bins: schedule.len(),
                total_cost: total_cost.to_string(),
            },
            feasible: validate(instance, schedule).is_feasible(),
        }
    }

    /// Checks the version and hash, then rebuilds the schedule. Recorded
    /// costs and the feasible flag are not trusted; revalidate the result.
    pub fn to_schedule(&self, instance: &Instance) -> Result<Schedule, FormatError> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(FormatError::UnsupportedSchema {
                found: self.schema_version,
            });
        }
        let expected = instance_hash(instance);
        if self.instance_hash != expected {
            return Err(FormatError::HashMismatch {
                expected,
                found: self.instance_hash.clone(),
            });
        }
        let bins = self
            .bins
            .iter()
            .enumerate()
            .map(|(index, entry)| {
                let ids = entry.item_ids.iter().map(|&id| ItemId(id)).collect();
                BinDelivery::new(ids, entry.time).map_err(|_| FormatError::EmptyBin { index })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Schedule::new(bins))
    }

    /// Pretty JSON with a trailing newline, stable for identical documents.
    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("plain data serializes");
        text.push('\n');
        text
    }

    pub fn from_json(text: &str) -> Result<Self, FormatError> {
        Ok(serde_json::from_str(text)?)
    }
}
