//! Bin deliveries, schedules, feasibility checking, and structure
//! classification.
//!
//! A bin delivery ships a non-empty set of items at one delivery time; its
//! cost is the sum of |due − time| over its items. A schedule is feasible for
//! an instance when its bins partition the instance's items and every bin's
//! cost is within the instance bound.

use thiserror::Error;

use crate::cost::{item_cost, CostValue};
use crate::instance::{Instance, ItemId};

#[derive(Error, Debug, PartialEq, Eq)]
pub enum SubsetError {
    #[error("bin has no items")]
    EmptySubset,
    #[error("item id {0} is not in the instance")]
    UnknownItem(ItemId),
}

/// One delivery: which items ship, and when.
///
/// Item ids are kept sorted. Duplicate ids are representable on purpose so
/// that [`validate`] can report them; solvers never produce any.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BinDelivery {
    item_ids: Vec<ItemId>,
    time: u64,
}

impl BinDelivery {
    pub fn new(mut item_ids: Vec<ItemId>, time: u64) -> Result<Self, SubsetError> {
        if item_ids.is_empty() {
            return Err(SubsetError::EmptySubset);
        }
        item_ids.sort_unstable();
        Ok(BinDelivery { item_ids, time })
    }

    pub fn item_ids(&self) -> &[ItemId] {
        &self.item_ids
    }

    pub fn time(&self) -> u64 {
        self.time
    }

    /// This bin's cost against `instance`.
    pub fn cost(&self, instance: &Instance) -> Result<CostValue, SubsetError> {
        bin_cost(instance, &self.item_ids, self.time)
    }
}

/// A full delivery plan: one bin per delivery.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Schedule {
    pub bins: Vec<BinDelivery>,
}

impl Schedule {
    pub fn new(bins: Vec<BinDelivery>) -> Self {
        Schedule { bins }
    }

    pub fn len(&self) -> usize {
        self.bins.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bins.is_empty()
    }

    /// Sum of all bin costs.
    pub fn total_cost(&self, instance: &Instance) -> Result<CostValue, SubsetError> {
        let mut total = CostValue::ZERO;
        for bin in &self.bins {
            total += bin.cost(instance)?;
        }
        Ok(total)
    }
}

/// Cost of delivering `item_ids` at `time`: Σ |due − time|.
pub fn bin_cost(
    instance: &Instance,
    item_ids: &[ItemId],
    time: u64,
) -> Result<CostValue, SubsetError> {
    if item_ids.is_empty() {
        return Err(SubsetError::EmptySubset);
    }
    let mut total = CostValue::ZERO;
    for &id in item_ids {
        let idx = instance.index_of(id).ok_or(SubsetError::UnknownItem(id))?;
        total += item_cost(instance.due(idx), time);
    }
    Ok(total)
}

/// Lower median of a non-empty sorted slice: e_⌈q/2⌉ in 1-based terms.
pub(crate) fn lower_median(sorted_dues: &[u64]) -> u64 {
    sorted_dues[(sorted_dues.len() - 1) / 2]
}

/// Σ |due − time| over a due-time slice.
pub(crate) fn dues_cost_at(dues: &[u64], time: u64) -> CostValue {
    dues.iter().map(|&d| item_cost(d, time)).sum()
}

/// A cost-minimizing delivery time for a set of items, and the cost there.
///
/// The minimizer is the lower median of the item dues, which makes the choice
/// deterministic when several times tie (e.g. dues {0,10} → time 0, cost 10).
/// The returned time is always one of the item dues and splits them evenly:
/// at least as many dues are ≤ the time as are > it.
pub fn optimal_bin_time(
    instance: &Instance,
    item_ids: &[ItemId],
) -> Result<(u64, CostValue), SubsetError> {
    if item_ids.is_empty() {
        return Err(SubsetError::EmptySubset);
    }
    let mut dues = Vec::with_capacity(item_ids.len());
    for &id in item_ids {
        let idx = instance.index_of(id).ok_or(SubsetError::UnknownItem(id))?;
        dues.push(instance.due(idx));
    }
    dues.sort_unstable();
    let time = lower_median(&dues);
    Ok((time, dues_cost_at(&dues, time)))
}

/// A bin that exceeds the instance bound, with its exact cost.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct OverloadedBin {
    pub bin_index: usize,
    pub cost: CostValue,
}

/// Everything wrong with a schedule; feasible iff all lists are empty.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct ValidationReport {
    /// Instance items not covered by any bin.
    pub missing: Vec<ItemId>,
    /// Items listed more than once across (or within) bins.
    pub duplicated: Vec<ItemId>,
    /// Bin entries that name no instance item.
    pub unknown: Vec<ItemId>,
    /// Bins whose cost exceeds the bound (cost over known ids, as listed).
    pub overloaded: Vec<OverloadedBin>,
}

impl ValidationReport {
    pub fn is_feasible(&self) -> bool {
        self.missing.is_empty()
            && self.duplicated.is_empty()
            && self.unknown.is_empty()
            && self.overloaded.is_empty()
    }
}

/// Checks partition coverage and every bin's cost against the bound.
pub fn validate(instance: &Instance, schedule: &Schedule) -> ValidationReport {
    let mut report = ValidationReport::default();
    let mut seen = vec![0u32; instance.len()];
    for (bin_index, bin) in schedule.bins.iter().enumerate() {
        let mut cost = CostValue::ZERO;
        for &id in bin.item_ids() {
            match instance.index_of(id) {
                Some(idx) => {
                    seen[idx] += 1;
                    cost += item_cost(instance.due(idx), bin.time());
                }
                None => report.unknown.push(id),
            }
        }
        if cost > instance.bound() {
            report.overloaded.push(OverloadedBin { bin_index, cost });
        }
    }
    for (idx, &count) in seen.iter().enumerate() {
        match count {
            0 => report.missing.push(instance.id(idx)),
            1 => {}
            _ => report.duplicated.push(instance.id(idx)),
        }
    }
    report.missing.sort_unstable();
    report.duplicated.sort_unstable();
    report.unknown.sort_unstable();
    report.unknown.dedup();
    report
}

/// How a schedule's bins relate on the due-time axis.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum StructureClass {
    /// Bins can be ordered so delivery times are non-decreasing and every due
    /// time of an earlier bin is ≤ every due time of a later bin.
    Sequential,
    /// Every pair of bin due-time ranges is disjoint or one contains the other.
    Nested,
    Other,
}

#[derive(Error, Debug, PartialEq, Eq)]
pub enum ClassifyError {
    #[error("schedule is not an exact partition of the instance items")]
    NotAPartition,
}

/// Classifies a partition-valid schedule as sequential, nested, or other.
///
/// Sequential wins when both apply. The result does not depend on bin order.
pub fn classify(instance: &Instance, schedule: &Schedule) -> Result<StructureClass, ClassifyError> {
    let report = validate(instance, schedule);
    if !(report.missing.is_empty() && report.duplicated.is_empty() && report.unknown.is_empty()) {
        return Err(ClassifyError::NotAPartition);
    }

    // (min due, max due, time) per bin; ids are all known after the check above.
    let mut spans: Vec<(u64, u64, u64)> = Vec::with_capacity(schedule.bins.len());
    for bin in &schedule.bins {
        let mut lo = u64::MAX;
        let mut hi = 0u64;
        for &id in bin.item_ids() {
            let due = instance.due(instance.index_of(id).expect("checked above"));
            lo = lo.min(due);
            hi = hi.max(due);
        }
        spans.push((lo, hi, bin.time()));
    }

    let mut seq = spans.clone();
    seq.sort_unstable();
    if seq.windows(2).all(|w| w[0].1 <= w[1].0 && w[0].2 <= w[1].2) {
        return Ok(StructureClass::Sequential);
    }

    // Nested check: sweep ranges sorted by (start asc, end desc); each range
    // must sit inside the innermost open range or start past its end.
    let mut ranges: Vec<(u64, u64)> = spans.iter().map(|&(lo, hi, _)| (lo, hi)).collect();
    ranges.sort_unstable_by(|a, b| a.0.cmp(&b.0).then(b.1.cmp(&a.1)));
    let mut stack: Vec<(u64, u64)> = Vec::new();
    for &(lo, hi) in &ranges {
        while let Some(&(_, open_hi)) = stack.last() {
            if open_hi < lo {
                stack.pop();
            } else {
                break;
            }
        }
        if let Some(&(_, open_hi)) = stack.last() {
            if hi > open_hi {
                return Ok(StructureClass::Other);
            }
        }
        stack.push((lo, hi));
    }
    Ok(StructureClass::Nested)
}
