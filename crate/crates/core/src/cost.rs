//! Exact inventory-cost arithmetic.
//!
//! Costs are sums of |due − delivery| over items, so they are non-negative
//! integers. All arithmetic is checked: an overflow aborts instead of wrapping.
//! u128 gives plenty of headroom (the largest built-in instance family tops out
//! around 2^91 total cost), and [`CostValue::to_biguint`] is the escape hatch
//! for callers that need to keep aggregating past 128 bits.

use std::fmt;
use std::iter::Sum;
use std::num::ParseIntError;
use std::ops::{Add, AddAssign};

use num_bigint::BigUint;

/// A non-negative, exact inventory cost (or cost bound).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct CostValue(u128);

impl CostValue {
    pub const ZERO: CostValue = CostValue(0);
    pub const MAX: CostValue = CostValue(u128::MAX);

    pub fn new(value: u128) -> Self {
        CostValue(value)
    }

    pub fn value(self) -> u128 {
        self.0
    }

    /// Checked addition; `None` on overflow.
    pub fn checked_add(self, rhs: CostValue) -> Option<CostValue> {
        self.0.checked_add(rhs.0).map(CostValue)
    }

    /// Arbitrary-precision escape hatch for aggregation beyond 128 bits.
    pub fn to_biguint(self) -> BigUint {
        BigUint::from(self.0)
    }

    /// Inverse of [`to_biguint`](Self::to_biguint); `None` if the value needs
    /// more than 128 bits.
    pub fn try_from_biguint(value: &BigUint) -> Option<CostValue> {
        u128::try_from(value).ok().map(CostValue)
    }
}

impl From<u64> for CostValue {
    fn from(value: u64) -> Self {
        CostValue(value as u128)
    }
}

impl From<u128> for CostValue {
    fn from(value: u128) -> Self {
        CostValue(value)
    }
}

impl Add for CostValue {
    type Output = CostValue;

    fn add(self, rhs: CostValue) -> CostValue {
        self.checked_add(rhs).expect("cost overflowed u128")
    }
}

impl AddAssign for CostValue {
    fn add_assign(&mut self, rhs: CostValue) {
        *self = *self + rhs;
    }
}

impl Sum for CostValue {
    fn sum<I: Iterator<Item = CostValue>>(iter: I) -> CostValue {
        iter.fold(CostValue::ZERO, Add::add)
    }
}

impl fmt::Display for CostValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl fmt::Debug for CostValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CostValue({})", self.0)
    }
}

impl std::str::FromStr for CostValue {
    type Err = ParseIntError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.parse::<u128>().map(CostValue)
    }
}

/// |due − time| for a single item delivered at `time`.
pub fn item_cost(due: u64, time: u64) -> CostValue {
    CostValue(due.abs_diff(time) as u128)
}
