//! Problem instances: due-dated items plus a per-bin cost bound.
//!
//! An instance is stored in canonical form — items sorted by (due, id) — and
//! every solver consumes that order. Item ids are opaque and unique; canonical
//! indices (positions in the sorted order) are what the algorithms work with.

use std::fmt;

use thiserror::Error;

use crate::cost::CostValue;

/// Opaque item identifier, unique within an instance.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct ItemId(pub u64);

impl fmt::Display for ItemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// One item: an id and the time it is due.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Item {
    pub id: ItemId,
    pub due: u64,
}

#[derive(Error, Debug, PartialEq, Eq)]
pub enum InstanceError {
    #[error("instance has no items")]
    Empty,
    #[error("duplicate item id {0}")]
    DuplicateId(ItemId),
}

/// A scheduling instance in canonical (due, id) order.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Instance {
    items: Vec<Item>,
    // id → canonical index, sorted by id for binary search.
    by_id: Vec<(ItemId, usize)>,
    bound: CostValue,
}

impl Instance {
    /// Builds an instance, sorting items into canonical order.
    pub fn new(mut items: Vec<Item>, bound: CostValue) -> Result<Self, InstanceError> {
        if items.is_empty() {
            return Err(InstanceError::Empty);
        }
        items.sort_by_key(|it| (it.due, it.id));
        let mut by_id: Vec<(ItemId, usize)> = items
            .iter()
            .enumerate()
            .map(|(idx, it)| (it.id, idx))
            .collect();
        by_id.sort_by_key(|&(id, _)| id);
        for pair in by_id.windows(2) {
            if pair[0].0 == pair[1].0 {
                return Err(InstanceError::DuplicateId(pair[0].0));
            }
        }
        Ok(Instance {
            items,
            by_id,
            bound,
        })
    }

    /// Convenience constructor: ids are assigned 0..n in due order.
    pub fn from_dues(
        dues: impl IntoIterator<Item = u64>,
        bound: CostValue,
    ) -> Result<Self, InstanceError> {
        let mut dues: Vec<u64> = dues.into_iter().collect();
        dues.sort_unstable();
        let items = dues
            .into_iter()
            .enumerate()
            .map(|(i, due)| Item {
                id: ItemId(i as u64),
                due,
            })
            .collect();
        Instance::new(items, bound)
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    /// Instances are never empty; kept for idiom's sake.
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn bound(&self) -> CostValue {
        self.bound
    }

    /// Items in canonical order.
    pub fn items(&self) -> &[Item] {
        &self.items
    }

    /// Due time at a canonical index.
    pub fn due(&self, index: usize) -> u64 {
        self.items[index].due
    }

    /// Id at a canonical index.
    pub fn id(&self, index: usize) -> ItemId {
        self.items[index].id
    }

    /// Canonical index for an id, if the id belongs to this instance.
    pub fn index_of(&self, id: ItemId) -> Option<usize> {
        self.by_id
            .binary_search_by_key(&id, |&(id, _)| id)
            .ok()
            .map(|pos| self.by_id[pos].1)
    }

    /// Due times in canonical (non-decreasing) order.
    pub fn dues(&self) -> impl Iterator<Item = u64> + '_ {
        self.items.iter().map(|it| it.due)
    }
}
