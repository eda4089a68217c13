//! Decoupled solver: pick delivery times first, then pack bins per time.
//!
//! The time-selection subproblem asks, for a given k, for at most k delivery
//! times minimizing the total distance from each item to its nearest time,
//! subject to every item being within the bound of some chosen time. Optimal
//! time sets induce contiguous segments of the canonical order, so a dynamic
//! program over (items 0..=i, times used j) solves it exactly: each segment is
//! charged its best time, the segment's due-time median clamped into the
//! feasibility window the bound allows.
//!
//! [`solve_decoupling`] sweeps k, packs every time's item group with first-fit
//! decreasing, and keeps the fewest-bins result. [`solve_refined`] replaces
//! the packing step: an overloaded group is carved into runs delivered at due
//! times near the group's edges, which is what brings the approximation factor
//! down from 3 to 2 relative to an optimal schedule.

use thiserror::Error;

use crate::cost::CostValue;
use crate::instance::Instance;
use crate::schedule::{BinDelivery, Schedule};
use crate::sums::RangeCosts;

const INF: u128 = u128::MAX;

#[derive(Error, Debug, PartialEq, Eq)]
pub enum DecouplingError {
    #[error("segment [{h}, {i}] out of range for n={n} (need h <= i < n)")]
    SegmentOutOfRange { h: usize, i: usize, n: usize },
    #[error("k={k} out of range 1..={n}")]
    KOutOfRange { k: usize, n: usize },
    #[error("canonical item {index} is farther than the bound from its group time")]
    DistanceExceedsBound { index: usize },
}

/// Best delivery time for one contiguous segment, and the cost there.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct SegmentCost {
    pub time: u64,
    pub cost: CostValue,
}

/// Dense per-segment cost table: entry (h, i) covers canonical items h..=i.
///
/// An entry is `None` exactly when the segment cannot meet the bound at any
/// time, i.e. when due(i) − due(h) > 2B. Otherwise the entry's time is the
/// segment's lower-median due clamped into [due(i) − B, due(h) + B], which is
/// optimal among all integer times keeping every segment item within B.
pub struct SegmentCostTable {
    n: usize,
    // Row-major (h * n + i); INF marks h > i and infeasible spans.
    cost: Vec<u128>,
    time: Vec<u64>,
}

impl SegmentCostTable {
    pub fn build(instance: &Instance) -> Self {
        let dues: Vec<u64> = instance.dues().collect();
        let n = dues.len();
        let bound = instance.bound().value();
        let costs = RangeCosts::new(&dues);
        let mut cost = vec![INF; n * n];
        let mut time = vec![0u64; n * n];
        for h in 0..n {
            for i in h..n {
                let span = (dues[i] - dues[h]) as u128;
                if span > bound.saturating_mul(2) {
                    // Spans only grow with i; the rest of the row is infeasible.
                    break;
                }
                let lam = clamp_time(costs.median(h, i), dues[h], dues[i], bound);
                cost[h * n + i] = costs.cost_at(h, i, lam).value();
                time[h * n + i] = lam;
            }
        }
        SegmentCostTable { n, cost, time }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Entry for canonical segment h..=i; `None` when no time meets the bound.
    pub fn get(&self, h: usize, i: usize) -> Result<Option<SegmentCost>, DecouplingError> {
        if h > i || i >= self.n {
            return Err(DecouplingError::SegmentOutOfRange { h, i, n: self.n });
        }
        let c = self.cost[h * self.n + i];
        Ok((c != INF).then(|| SegmentCost {
            time: self.time[h * self.n + i],
            cost: CostValue::new(c),
        }))
    }

    fn raw_cost(&self, h: usize, i: usize) -> u128 {
        self.cost[h * self.n + i]
    }

    fn raw_time(&self, h: usize, i: usize) -> u64 {
        self.time[h * self.n + i]
    }
}

// Median clamped into the window [due_hi − B, due_lo + B]; callers guarantee
// the window is non-empty (due_hi − due_lo ≤ 2B). Bound arithmetic stays in
// u128 so enormous bounds simply leave the median unclamped.
fn clamp_time(median: u64, due_lo: u64, due_hi: u64, bound: u128) -> u64 {
    let m = median as u128;
    match m.checked_add(bound) {
        Some(reach) if reach < due_hi as u128 => (due_hi as u128 - bound) as u64,
        _ => {
            if m - due_lo as u128 >= bound {
                (due_lo as u128 + bound) as u64
            } else {
                median
            }
        }
    }
}

/// Best segment time and cost for canonical items h..=i (`None` = infeasible).
pub fn segment_cost(
    instance: &Instance,
    h: usize,
    i: usize,
) -> Result<Option<SegmentCost>, DecouplingError> {
    SegmentCostTable::build(instance).get(h, i)
}

/// One segment of a delivery-time plan: canonical items start..=end shipped
/// at `time` for `cost`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct EtSegment {
    pub start: usize,
    pub end: usize,
    pub time: u64,
    pub cost: CostValue,
}

/// A delivery-time plan: at most k strictly increasing times, one per segment,
/// every item within the bound of its segment's time.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct EtPlan {
    /// The k this plan was asked for; the plan may use fewer times.
    pub k: usize,
    /// Contiguous cover of the canonical order, in due order.
    pub segments: Vec<EtSegment>,
    pub total_cost: CostValue,
}

impl EtPlan {
    /// The delivery-time set, strictly increasing.
    pub fn times(&self) -> Vec<u64> {
        self.segments.iter().map(|s| s.time).collect()
    }
}

/// Precomputed tables answering the time-selection subproblem for every k.
pub struct EtSolver {
    n: usize,
    table: SegmentCostTable,
    // best[i * (n+1) + j]: minimal total cost covering the first i items with
    // at most j times; parent holds the argmin start (1-based) of the last
    // segment, smallest on ties so duplicate times collapse.
    best: Vec<u128>,
    parent: Vec<u32>,
}

impl EtSolver {
    pub fn new(instance: &Instance) -> Self {
        let table = SegmentCostTable::build(instance);
        let n = table.len();
        let w = n + 1;
        let mut best = vec![INF; w * w];
        let mut parent = vec![0u32; w * w];
        best[..w].fill(0); // zero items cost nothing for any time budget
        for j in 1..=n {
            for i in 1..=n {
                let mut cell = INF;
                let mut arg = 0u32;
                for h in 1..=i {
                    let tail = table.raw_cost(h - 1, i - 1);
                    if tail == INF {
                        continue;
                    }
                    let head = best[(h - 1) * w + (j - 1)];
                    if head == INF {
                        continue;
                    }
                    let total = head + tail;
                    if total < cell {
                        cell = total;
                        arg = h as u32;
                    }
                }
                best[i * w + j] = cell;
                parent[i * w + j] = arg;
            }
        }
        EtSolver {
            n,
            table,
            best,
            parent,
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn segment_costs(&self) -> &SegmentCostTable {
        &self.table
    }

    /// The plan for time budget k, or `None` when k times cannot cover the
    /// items within the bound.
    pub fn plan(&self, k: usize) -> Result<Option<EtPlan>, DecouplingError> {
        let n = self.n;
        if k == 0 || k > n {
            return Err(DecouplingError::KOutOfRange { k, n });
        }
        let w = n + 1;
        if self.best[n * w + k] == INF {
            return Ok(None);
        }
        let mut segments = Vec::new();
        let mut i = n;
        let mut j = k;
        while i > 0 {
            let h = self.parent[i * w + j] as usize;
            debug_assert!(h >= 1);
            segments.push(EtSegment {
                start: h - 1,
                end: i - 1,
                time: self.table.raw_time(h - 1, i - 1),
                cost: CostValue::new(self.table.raw_cost(h - 1, i - 1)),
            });
            i = h - 1;
            j -= 1;
        }
        segments.reverse();
        // Adjacent segments can share a clamped time; collapse them so the
        // time set is strictly increasing. Cost is unchanged: both parts were
        // already charged against the shared time.
        let mut merged: Vec<EtSegment> = Vec::with_capacity(segments.len());
        for seg in segments {
            match merged.last_mut() {
                Some(last) if last.time == seg.time => {
                    last.end = seg.end;
                    last.cost += seg.cost;
                }
                _ => merged.push(seg),
            }
        }
        let total_cost = CostValue::new(self.best[n * w + k]);
        Ok(Some(EtPlan {
            k,
            segments: merged,
            total_cost,
        }))
    }
}

/// One-shot [`EtSolver`] query; build the solver once when sweeping k.
pub fn et_dp(instance: &Instance, k: usize) -> Result<Option<EtPlan>, DecouplingError> {
    EtSolver::new(instance).plan(k)
}

/// Items grouped under one delivery time; members are canonical indices.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TimeGroup {
    pub time: u64,
    pub members: Vec<usize>,
}

/// Regroups items by their nearest plan time (ties to the earlier time).
/// Returns one group per plan time, time-ordered.
pub fn nearest_assign(instance: &Instance, plan: &EtPlan) -> Vec<TimeGroup> {
    let times = plan.times();
    let mut groups: Vec<TimeGroup> = times
        .iter()
        .map(|&time| TimeGroup {
            time,
            members: Vec::new(),
        })
        .collect();
    for (index, item) in instance.items().iter().enumerate() {
        let pos = times.partition_point(|&t| t < item.due);
        // Candidates are the nearest time on each side; on a distance tie the
        // earlier time wins.
        let chosen = match (pos.checked_sub(1), times.get(pos)) {
            (Some(left), Some(&right)) => {
                if item.due - times[left] <= right - item.due {
                    left
                } else {
                    pos
                }
            }
            (Some(left), None) => left,
            (None, Some(_)) => pos,
            (None, None) => unreachable!("plans have at least one segment"),
        };
        groups[chosen].members.push(index);
    }
    groups
}

fn group_distances(instance: &Instance, group: &TimeGroup) -> Vec<u128> {
    group
        .members
        .iter()
        .map(|&idx| instance.due(idx).abs_diff(group.time) as u128)
        .collect()
}

fn bin_from_members(instance: &Instance, members: &[usize], time: u64) -> BinDelivery {
    let ids = members.iter().map(|&idx| instance.id(idx)).collect();
    BinDelivery::new(ids, time).expect("carved runs are non-empty")
}

/// Packs one group into bins at the group time: items in non-increasing
/// distance order (canonical order on ties), each into the first bin whose
/// load stays within `bound`.
///
/// Any two emitted bins together exceed the bound, which caps the bin count
/// at 2·(total distance)/bound + 1.
pub fn first_fit_pack(
    instance: &Instance,
    group: &TimeGroup,
    bound: CostValue,
) -> Result<Vec<BinDelivery>, DecouplingError> {
    let dist = group_distances(instance, group);
    if let Some(pos) = dist.iter().position(|&d| d > bound.value()) {
        return Err(DecouplingError::DistanceExceedsBound {
            index: group.members[pos],
        });
    }
    let mut order: Vec<usize> = (0..group.members.len()).collect();
    order.sort_by(|&a, &b| {
        dist[b]
            .cmp(&dist[a])
            .then(group.members[a].cmp(&group.members[b]))
    });

    let mut loads: Vec<u128> = Vec::new();
    let mut contents: Vec<Vec<usize>> = Vec::new();
    for o in order {
        let d = dist[o];
        match loads.iter().position(|&load| load + d <= bound.value()) {
            Some(b) => {
                loads[b] += d;
                contents[b].push(group.members[o]);
            }
            None => {
                loads.push(d);
                contents.push(vec![group.members[o]]);
            }
        }
    }
    Ok(contents
        .iter()
        .map(|members| bin_from_members(instance, members, group.time))
        .collect())
}

/// Splits an overloaded group into feasible bins by carving from the edges.
///
/// Items below the group time are walked farthest-first; the shortest run
/// whose cost at the group time exceeds the bound is delivered at the run's
/// latest due time, which keeps the run itself within the bound. Items above
/// the group time are carved symmetrically (delivered at the run's earliest
/// due). The leftovers from both sides ship at the group time: together if
/// they fit the bound, otherwise as one bin per side.
///
/// Emits at most ⌊(group cost at its time)/bound⌋ + 1 bins.
pub fn refine_group(instance: &Instance, group: &TimeGroup, bound: CostValue) -> Vec<BinDelivery> {
    let bound = bound.value();
    let tau = group.time;
    // members are canonical indices in ascending due order; below keeps that
    // order (farthest due first is the smallest due), above reverses it.
    let below: Vec<usize> = group
        .members
        .iter()
        .copied()
        .filter(|&i| instance.due(i) <= tau)
        .collect();
    let above: Vec<usize> = group
        .members
        .iter()
        .copied()
        .rev()
        .filter(|&i| instance.due(i) > tau)
        .collect();

    let mut bins = Vec::new();
    let mut carve = |side: &[usize], deliver_at: fn(&Instance, &[usize]) -> u64| -> Vec<usize> {
        let delta: Vec<u128> = side
            .iter()
            .map(|&idx| instance.due(idx).abs_diff(tau) as u128)
            .collect();
        let mut remaining: u128 = delta.iter().sum();
        let mut start = 0usize;
        while remaining > bound {
            let mut run_cost = 0u128;
            let mut end = start;
            loop {
                run_cost += delta[end];
                if run_cost > bound {
                    break;
                }
                end += 1;
            }
            let run = &side[start..=end];
            bins.push(bin_from_members(instance, run, deliver_at(instance, run)));
            remaining -= run_cost;
            start = end + 1;
        }
        side[start..].to_vec()
    };

    // A run below the group time ships at its largest due; above, at its
    // smallest. Either way that is the run's due time nearest the group time,
    // so the other run items only get cheaper than they were at the group time.
    let rest_below = carve(&below, |inst, run| {
        inst.due(*run.last().expect("run non-empty"))
    });
    let rest_above = carve(&above, |inst, run| {
        inst.due(*run.last().expect("run non-empty"))
    });

    let residue_cost = |members: &[usize]| -> u128 {
        members
            .iter()
            .map(|&idx| instance.due(idx).abs_diff(tau) as u128)
            .sum()
    };
    let fits_together = residue_cost(&rest_below) + residue_cost(&rest_above) <= bound;
    if fits_together {
        let mut all = rest_below;
        all.extend_from_slice(&rest_above);
        if !all.is_empty() {
            bins.push(bin_from_members(instance, &all, tau));
        }
    } else {
        for rest in [rest_below, rest_above] {
            if !rest.is_empty() {
                bins.push(bin_from_members(instance, &rest, tau));
            }
        }
    }
    bins
}

fn sweep_plans(
    instance: &Instance,
    mut bins_for_plan: impl FnMut(&EtPlan) -> Vec<BinDelivery>,
) -> Schedule {
    let solver = EtSolver::new(instance);
    let n = instance.len();
    let mut best: Option<Vec<BinDelivery>> = None;
    for k in 1..=n {
        // A plan with k times yields at least k bins, so once k reaches the
        // best count no later iteration can improve on it.
        if let Some(ref b) = best {
            if k >= b.len() {
                break;
            }
        }
        let plan = match solver.plan(k).expect("k is in range") {
            Some(plan) => plan,
            None => continue,
        };
        let bins = bins_for_plan(&plan);
        if best.as_ref().is_none_or(|b| bins.len() < b.len()) {
            best = Some(bins);
        }
    }
    // k = n is always feasible (every item at its own due), so a plan exists.
    Schedule::new(best.expect("k = n plan always exists"))
}

/// Decoupled solver: sweep k, group items by nearest plan time, pack each
/// group with first-fit decreasing, keep the fewest bins (smallest k on ties).
pub fn solve_decoupling(instance: &Instance) -> Schedule {
    let bound = instance.bound();
    sweep_plans(instance, |plan| {
        nearest_assign(instance, plan)
            .iter()
            .flat_map(|group| {
                first_fit_pack(instance, group, bound)
                    .expect("plan keeps every item within the bound of its time")
            })
            .collect()
    })
}

/// Like [`solve_decoupling`], but an overloaded group is refined into
/// edge-carved bins instead of first-fit packed.
pub fn solve_refined(instance: &Instance) -> Schedule {
    let bound = instance.bound();
    sweep_plans(instance, |plan| {
        nearest_assign(instance, plan)
            .iter()
            .flat_map(|group| {
                let at_tau: u128 = group
                    .members
                    .iter()
                    .map(|&idx| instance.due(idx).abs_diff(group.time) as u128)
                    .sum();
                if at_tau <= bound.value() {
                    if group.members.is_empty() {
                        vec![]
                    } else {
                        vec![bin_from_members(instance, &group.members, group.time)]
                    }
                } else {
                    refine_group(instance, group, bound)
                }
            })
            .collect()
    })
}
