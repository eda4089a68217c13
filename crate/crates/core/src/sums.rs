//! Exact range-cost queries over the canonical due order.

use crate::cost::CostValue;

/// Prefix sums over sorted dues; answers Σ |due − t| for any canonical range
/// in O(log n), with the same exact integers as a direct summation.
pub(crate) struct RangeCosts<'a> {
    dues: &'a [u64],
    // prefix[i] = Σ dues[0..i]
    prefix: Vec<u128>,
}

impl<'a> RangeCosts<'a> {
    pub(crate) fn new(dues: &'a [u64]) -> Self {
        debug_assert!(dues.windows(2).all(|w| w[0] <= w[1]), "dues must be sorted");
        let mut prefix = Vec::with_capacity(dues.len() + 1);
        prefix.push(0u128);
        for &d in dues {
            prefix.push(prefix.last().unwrap() + d as u128);
        }
        RangeCosts { dues, prefix }
    }

    pub(crate) fn dues(&self) -> &[u64] {
        self.dues
    }

    /// Σ |due − time| over canonical indices lo..=hi.
    pub(crate) fn cost_at(&self, lo: usize, hi: usize, time: u64) -> CostValue {
        let split = lo + self.dues[lo..=hi].partition_point(|&d| d <= time);
        let t = time as u128;
        let below = t * (split - lo) as u128 - (self.prefix[split] - self.prefix[lo]);
        let above = (self.prefix[hi + 1] - self.prefix[split]) - t * (hi + 1 - split) as u128;
        CostValue::new(below + above)
    }

    /// Lower median due of the range lo..=hi.
    pub(crate) fn median(&self, lo: usize, hi: usize) -> u64 {
        self.dues[lo + (hi - lo) / 2]
    }
}
