//! Sequential greedy solver.
//!
//! Items are taken in canonical due order and appended to the current bin as
//! long as the bin's cost under the active policy stays within the bound; the
//! first item that does not fit opens the next bin. A policy picks the bin's
//! delivery time from its contents (and, for [`SchedulingPolicy::EarlyLate`],
//! from the bin's 1-based index). Every bin ends up as a contiguous run of the
//! canonical order, so greedy schedules always classify as sequential.

use crate::cost::CostValue;
use crate::instance::Instance;
use crate::schedule::{dues_cost_at, lower_median, BinDelivery, Schedule, SubsetError};
use crate::sums::RangeCosts;

/// How a bin's delivery time is chosen from its contents.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SchedulingPolicy {
    /// Earliest due time in the bin.
    Early,
    /// Earliest due time in odd-indexed bins, latest in even-indexed bins.
    EarlyLate,
    /// Lower median of the bin's due times.
    Median,
}

/// A policy's verdict on a candidate bin: delivery time and resulting cost.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct PolicyEvaluation {
    pub time: u64,
    pub cost: CostValue,
}

/// Evaluates `policy` for bin number `bin_index` (1-based) holding the items
/// with the given due times (non-decreasing order expected).
pub fn evaluate_policy(
    policy: SchedulingPolicy,
    bin_index: usize,
    dues: &[u64],
) -> Result<PolicyEvaluation, SubsetError> {
    if dues.is_empty() {
        return Err(SubsetError::EmptySubset);
    }
    debug_assert!(dues.windows(2).all(|w| w[0] <= w[1]), "dues must be sorted");
    let time = match policy {
        SchedulingPolicy::Early => dues[0],
        SchedulingPolicy::EarlyLate => {
            if bin_index % 2 == 1 {
                dues[0]
            } else {
                dues[dues.len() - 1]
            }
        }
        SchedulingPolicy::Median => lower_median(dues),
    };
    Ok(PolicyEvaluation {
        time,
        cost: dues_cost_at(dues, time),
    })
}

// Policy time for a canonical range; same choice evaluate_policy makes on the
// equivalent due slice.
fn policy_time(
    costs: &RangeCosts,
    policy: SchedulingPolicy,
    bin_index: usize,
    lo: usize,
    hi: usize,
) -> u64 {
    let dues = costs.dues();
    match policy {
        SchedulingPolicy::Early => dues[lo],
        SchedulingPolicy::EarlyLate => {
            if bin_index % 2 == 1 {
                dues[lo]
            } else {
                dues[hi]
            }
        }
        SchedulingPolicy::Median => costs.median(lo, hi),
    }
}

/// First-fit greedy over the canonical order under `policy`.
///
/// Never fails: a bin holding one item costs nothing under any policy, so
/// every item can at worst open a bin of its own.
pub fn solve_sequential(instance: &Instance, policy: SchedulingPolicy) -> Schedule {
    let dues: Vec<u64> = instance.dues().collect();
    let costs = RangeCosts::new(&dues);
    let bound = instance.bound();

    let mut bins = Vec::new();
    let mut start = 0usize;
    let mut bin_index = 1usize;
    let close = |lo: usize,
                 hi: usize,
                 bin_index: usize,
                 bins: &mut Vec<BinDelivery>,
                 costs: &RangeCosts| {
        let time = policy_time(costs, policy, bin_index, lo, hi);
        let ids = (lo..=hi).map(|i| instance.id(i)).collect();
        bins.push(BinDelivery::new(ids, time).expect("range is non-empty"));
    };
    for i in 1..instance.len() {
        let time = policy_time(&costs, policy, bin_index, start, i);
        if costs.cost_at(start, i, time) > bound {
            close(start, i - 1, bin_index, &mut bins, &costs);
            start = i;
            bin_index += 1;
        }
    }
    close(start, instance.len() - 1, bin_index, &mut bins, &costs);
    Schedule::new(bins)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schedule::{classify, optimal_bin_time, validate, StructureClass};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn evaluate_policy_examples() {
        let dues = [3, 7, 9];
        assert_eq!(
            evaluate_policy(SchedulingPolicy::Early, 1, &dues).unwrap(),
            PolicyEvaluation {
                time: 3,
                cost: CostValue::from(10u64)
            }
        );
        assert_eq!(
            evaluate_policy(SchedulingPolicy::EarlyLate, 1, &dues).unwrap(),
            PolicyEvaluation {
                time: 3,
                cost: CostValue::from(10u64)
            }
        );
        assert_eq!(
            evaluate_policy(SchedulingPolicy::EarlyLate, 2, &dues).unwrap(),
            PolicyEvaluation {
                time: 9,
                cost: CostValue::from(8u64)
            }
        );
        assert_eq!(
            evaluate_policy(SchedulingPolicy::Median, 1, &dues).unwrap(),
            PolicyEvaluation {
                time: 7,
                cost: CostValue::from(6u64)
            }
        );
        assert_eq!(
            evaluate_policy(SchedulingPolicy::Median, 1, &[]),
            Err(SubsetError::EmptySubset)
        );
    }

    #[test]
    fn single_item_bins_cost_nothing_under_every_policy_and_parity() {
        for policy in [
            SchedulingPolicy::Early,
            SchedulingPolicy::EarlyLate,
            SchedulingPolicy::Median,
        ] {
            for bin_index in [1, 2] {
                let eval = evaluate_policy(policy, bin_index, &[42]).unwrap();
                assert_eq!(
                    eval,
                    PolicyEvaluation {
                        time: 42,
                        cost: CostValue::ZERO
                    }
                );
            }
        }
    }

    #[test]
    fn median_splits_when_the_far_item_arrives() {
        let inst = Instance::from_dues([0, 1, 2, 10, 11], CostValue::from(4u64)).unwrap();
        let schedule = solve_sequential(&inst, SchedulingPolicy::Median);
        assert_eq!(schedule.len(), 2);
        assert_eq!(schedule.bins[0].time(), 1);
        assert_eq!(schedule.bins[0].item_ids().len(), 3);
        assert_eq!(schedule.bins[1].time(), 10);
        assert_eq!(schedule.bins[1].item_ids().len(), 2);
        assert!(validate(&inst, &schedule).is_feasible());
    }

    #[test]
    fn early_late_alternates_bin_anchors() {
        let inst = Instance::from_dues([0, 1, 2, 10, 11], CostValue::from(4u64)).unwrap();
        let schedule = solve_sequential(&inst, SchedulingPolicy::EarlyLate);
        assert_eq!(schedule.len(), 2);
        assert_eq!(schedule.bins[0].time(), 0);
        assert_eq!(schedule.bins[0].cost(&inst).unwrap(), CostValue::from(3u64));
        assert_eq!(schedule.bins[1].time(), 11);
        assert_eq!(schedule.bins[1].cost(&inst).unwrap(), CostValue::from(1u64));
    }

    #[test]
    fn early_keeps_reaching_forward() {
        let inst = Instance::from_dues([0, 51, 51], CostValue::from(100u64)).unwrap();
        let schedule = solve_sequential(&inst, SchedulingPolicy::Early);
        assert_eq!(schedule.len(), 2);
        assert_eq!(schedule.bins[0].time(), 0);
        assert_eq!(schedule.bins[1].time(), 51);
        assert!(validate(&inst, &schedule).is_feasible());
    }

    #[test]
    fn zero_bound_still_packs_equal_dues_together() {
        let inst = Instance::from_dues([5, 5, 5, 9], CostValue::ZERO).unwrap();
        for policy in [
            SchedulingPolicy::Early,
            SchedulingPolicy::EarlyLate,
            SchedulingPolicy::Median,
        ] {
            let schedule = solve_sequential(&inst, policy);
            assert_eq!(schedule.len(), 2, "{policy:?}");
            assert!(validate(&inst, &schedule).is_feasible());
        }
    }

    #[test]
    fn range_evaluator_matches_evaluate_policy() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let n = rng.random_range(1..=12);
            let mut dues: Vec<u64> = (0..n).map(|_| rng.random_range(0..=50)).collect();
            dues.sort_unstable();
            let costs = RangeCosts::new(&dues);
            for policy in [
                SchedulingPolicy::Early,
                SchedulingPolicy::EarlyLate,
                SchedulingPolicy::Median,
            ] {
                for bin_index in 1..=2 {
                    for hi in 0..dues.len() {
                        let direct = evaluate_policy(policy, bin_index, &dues[..=hi]).unwrap();
                        let time = policy_time(&costs, policy, bin_index, 0, hi);
                        assert_eq!(time, direct.time);
                        assert_eq!(costs.cost_at(0, hi, time), direct.cost);
                    }
                }
            }
        }
    }

    #[test]
    fn greedy_output_is_sequential_feasible_and_contiguous() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..100 {
            let n = rng.random_range(1..=30);
            let dues: Vec<u64> = (0..n).map(|_| rng.random_range(0..=80)).collect();
            let bound = CostValue::from(rng.random_range(0..=25u64));
            let inst = Instance::from_dues(dues, bound).unwrap();
            for policy in [
                SchedulingPolicy::Early,
                SchedulingPolicy::EarlyLate,
                SchedulingPolicy::Median,
            ] {
                let schedule = solve_sequential(&inst, policy);
                assert!(validate(&inst, &schedule).is_feasible(), "{policy:?}");
                assert_eq!(
                    classify(&inst, &schedule).unwrap(),
                    StructureClass::Sequential
                );
                // Bins are consecutive runs of the canonical order.
                let mut next = 0usize;
                for bin in &schedule.bins {
                    for &id in bin.item_ids() {
                        assert_eq!(instance_index(&inst, id), next);
                        next += 1;
                    }
                }
                assert_eq!(next, inst.len());
                if policy == SchedulingPolicy::Median {
                    for bin in &schedule.bins {
                        let (time, _) = optimal_bin_time(&inst, bin.item_ids()).unwrap();
                        assert_eq!(bin.time(), time);
                    }
                }
            }
        }
    }

    fn instance_index(inst: &Instance, id: crate::instance::ItemId) -> usize {
        inst.index_of(id).unwrap()
    }
}
