//! Exhaustive reference solvers for verification and small exact runs.
//!
//! Everything here trades time for certainty: subsets are enumerated rather
//! than reasoned about, and delivery times are scanned rather than computed.
//! The solvers and verifiers in the rest of the crate are tested against
//! these implementations on small instances.

use thiserror::Error;

use crate::cost::CostValue;
use crate::instance::Instance;
use crate::schedule::{BinDelivery, Schedule};

/// Hard capacity guards; the exhaustive searches are exponential.
#[derive(Error, Debug, PartialEq, Eq)]
pub enum OracleError {
    #[error("exhaustive search supports at most {limit} items, got {n}")]
    TooManyItems { n: usize, limit: usize },
    #[error("due-time span {span} exceeds the scan limit {limit}")]
    SpanTooWide { span: u64, limit: u64 },
}

/// Items an exact partition search will handle (3^n subset-split steps).
pub const EXACT_ITEM_LIMIT: usize = 20;
const SEGMENTATION_ITEM_LIMIT: usize = 9;
const SCAN_ITEM_LIMIT: usize = 12;
const SCAN_SPAN_LIMIT: u64 = 100_000;

/// Per-subset feasibility table over canonical item bitmasks.
///
/// For every non-empty subset this stores the delivery time minimizing the
/// subset's total cost, and that cost; a subset is a usable bin exactly when
/// the cost is within the instance bound.
pub struct SubsetTable {
    bound: u128,
    // Indexed by bitmask over canonical items; cost u128::MAX never occurs
    // (n ≤ 20 dues ≤ u64::MAX keeps sums far below), mask 0 stays empty.
    cost: Vec<u128>,
    time: Vec<u64>,
}

impl SubsetTable {
    pub fn build(instance: &Instance) -> Result<Self, OracleError> {
        let n = instance.len();
        if n > EXACT_ITEM_LIMIT {
            return Err(OracleError::TooManyItems {
                n,
                limit: EXACT_ITEM_LIMIT,
            });
        }
        let dues: Vec<u64> = instance.dues().collect();
        let size = 1usize << n;
        let mut cost = vec![0u128; size];
        let mut time = vec![0u64; size];
        for mask in 1..size {
            let count = mask.count_ones() as usize;
            // Canonical order is sorted by due, so the subset's lower median
            // is its (count−1)/2-th set bit.
            let mut seen = 0usize;
            let mut median = 0u64;
            let mut bits = mask;
            while bits != 0 {
                let idx = bits.trailing_zeros() as usize;
                if seen == (count - 1) / 2 {
                    median = dues[idx];
                    break;
                }
                seen += 1;
                bits &= bits - 1;
            }
            let mut total = 0u128;
            let mut bits = mask;
            while bits != 0 {
                let idx = bits.trailing_zeros() as usize;
                total += dues[idx].abs_diff(median) as u128;
                bits &= bits - 1;
            }
            cost[mask] = total;
            time[mask] = median;
        }
        Ok(SubsetTable {
            bound: instance.bound().value(),
            cost,
            time,
        })
    }

    /// Best delivery time and cost for a non-empty subset mask.
    pub fn best(&self, mask: usize) -> Option<(u64, CostValue)> {
        (mask != 0).then(|| (self.time[mask], CostValue::new(self.cost[mask])))
    }

    /// Whether the subset can ship as a single bin within the bound.
    pub fn is_feasible(&self, mask: usize) -> bool {
        mask != 0 && self.cost[mask] <= self.bound
    }
}

/// Minimum-bin schedule by exhaustive partition search (n ≤ 20).
///
/// Every subset may form a bin — contiguity is not assumed — so the result
/// is a true optimum for the instance.
pub fn exact_min_bins(instance: &Instance) -> Result<Schedule, OracleError> {
    let table = SubsetTable::build(instance)?;
    let n = instance.len();
    let size = 1usize << n;
    let mut dp = vec![u32::MAX; size];
    let mut parent = vec![0u32; size];
    dp[0] = 0;
    for mask in 1..size {
        let low = mask & mask.wrapping_neg();
        let rest = mask ^ low;
        let mut sub = rest;
        let mut best = u32::MAX;
        let mut arg = 0u32;
        // Every block containing the lowest item, i.e. each partition is
        // counted once.
        loop {
            let block = sub | low;
            if table.is_feasible(block) {
                let prev = dp[mask ^ block];
                if prev != u32::MAX && prev + 1 < best {
                    best = prev + 1;
                    arg = block as u32;
                }
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & rest;
        }
        dp[mask] = best;
        parent[mask] = arg;
    }

    // Singleton bins are always feasible, so the full mask is reachable.
    let mut bins = Vec::with_capacity(dp[size - 1] as usize);
    let mut mask = size - 1;
    while mask != 0 {
        let block = parent[mask] as usize;
        let (time, _) = table.best(block).expect("parent blocks are non-empty");
        let mut ids = Vec::with_capacity(block.count_ones() as usize);
        let mut bits = block;
        while bits != 0 {
            let idx = bits.trailing_zeros() as usize;
            ids.push(instance.id(idx));
            bits &= bits - 1;
        }
        bins.push(BinDelivery::new(ids, time).expect("blocks are non-empty"));
        mask ^= block;
    }
    Ok(Schedule::new(bins))
}

// Minimum cost of shipping canonical items h..=i at one time with every item
// within `bound` of it, by scanning all integer times that can matter.
fn scan_segment(dues: &[u64], h: usize, i: usize, bound: u128) -> Option<u128> {
    let span = (dues[i] - dues[h]) as u128;
    if span > bound.saturating_mul(2) {
        return None;
    }
    // The optimum lies in [due(h), due(i)] ∩ [due(i)−B, due(h)+B]; both ends
    // fit u64 because they are bracketed by dues.
    let lo = if bound >= span {
        dues[h]
    } else {
        (dues[i] as u128 - bound) as u64
    };
    let hi = if bound >= span {
        dues[i]
    } else {
        (dues[h] as u128 + bound) as u64
    };
    (lo..=hi)
        .map(|t| dues[h..=i].iter().map(|&d| d.abs_diff(t) as u128).sum())
        .min()
}

/// Minimum total cost of covering the instance with at most k delivery
/// times, every item within the bound of its nearest chosen time, by
/// enumerating contiguous segmentations (n ≤ 9). `None` when impossible.
pub fn brute_et(instance: &Instance, k: usize) -> Result<Option<CostValue>, OracleError> {
    let n = instance.len();
    if n > SEGMENTATION_ITEM_LIMIT {
        return Err(OracleError::TooManyItems {
            n,
            limit: SEGMENTATION_ITEM_LIMIT,
        });
    }
    let dues: Vec<u64> = instance.dues().collect();
    let bound = instance.bound().value();
    let segs: Vec<Vec<Option<u128>>> = (0..n)
        .map(|h| {
            (0..n)
                .map(|i| {
                    if h <= i {
                        scan_segment(&dues, h, i, bound)
                    } else {
                        None
                    }
                })
                .collect()
        })
        .collect();

    fn go(segs: &[Vec<Option<u128>>], start: usize, budget: usize) -> Option<u128> {
        if start == segs.len() {
            return Some(0);
        }
        if budget == 0 {
            return None;
        }
        let mut best: Option<u128> = None;
        for end in start..segs.len() {
            let Some(seg) = segs[start][end] else {
                continue;
            };
            let Some(tail) = go(segs, end + 1, budget - 1) else {
                continue;
            };
            let total = seg + tail;
            if best.is_none_or(|b| total < b) {
                best = Some(total);
            }
        }
        best
    }

    Ok(go(&segs, 0, k).map(CostValue::new))
}

/// Best single delivery time for a subset of items by scanning every integer
/// time between the smallest and largest due (≤ 12 items, span ≤ 100 000).
pub fn brute_bin_time(
    instance: &Instance,
    item_ids: &[crate::instance::ItemId],
) -> Result<(u64, CostValue), OracleError> {
    if item_ids.len() > SCAN_ITEM_LIMIT {
        return Err(OracleError::TooManyItems {
            n: item_ids.len(),
            limit: SCAN_ITEM_LIMIT,
        });
    }
    let dues: Vec<u64> = item_ids
        .iter()
        .map(|&id| {
            let idx = instance.index_of(id).expect("caller passes known ids");
            instance.due(idx)
        })
        .collect();
    let lo = *dues.iter().min().expect("subset is non-empty");
    let hi = *dues.iter().max().expect("subset is non-empty");
    if hi - lo > SCAN_SPAN_LIMIT {
        return Err(OracleError::SpanTooWide {
            span: hi - lo,
            limit: SCAN_SPAN_LIMIT,
        });
    }
    let mut best = (lo, u128::MAX);
    for t in lo..=hi {
        let cost: u128 = dues.iter().map(|&d| d.abs_diff(t) as u128).sum();
        if cost < best.1 {
            best = (t, cost);
        }
    }
    Ok((best.0, CostValue::new(best.1)))
}
