//! Container delivery scheduling: pack items with agreed due times into the
//! fewest bin deliveries, where a bin delivered at time τ incurs inventory
//! cost |due − τ| per item and no bin may exceed the instance bound.
//!
//! Solvers, fastest to strongest:
//!
//! - [`solve_sequential`]: one pass in due order, first-fit into open bins,
//!   delivery times set by a [`SchedulingPolicy`] (earliest due, alternating
//!   earliest/latest, or median).
//! - [`solve_decoupling`]: picks delivery times by dynamic programming over
//!   contiguous due-time segments, then packs each time's items first-fit.
//! - [`solve_refined`]: same time selection, but overloaded time groups are
//!   carved into bins at due times near the group's edges.
//! - [`exact_min_bins`]: exhaustive optimum for at most
//!   [`EXACT_ITEM_LIMIT`](oracle::EXACT_ITEM_LIMIT) items.
//!
//! [`generators`] builds adversarial instance families with certificate
//! schedules plus seeded random instances; [`validate`] checks any schedule
//! against its instance and is the ground truth the solvers are tested
//! against.
//!
//! Costs use checked 128-bit arithmetic ([`CostValue`]) with a big-integer
//! escape hatch for serialization-level consumers.

pub mod cost;
pub mod decoupling;
pub mod generators;
pub mod greedy;
pub mod instance;
pub mod oracle;
pub mod schedule;
mod sums;

pub use cost::{item_cost, CostValue};
pub use decoupling::{solve_decoupling, solve_refined};
pub use generators::{Generated, GeneratorError, GeneratorSpec};
pub use greedy::{solve_sequential, SchedulingPolicy};
pub use instance::{Instance, InstanceError, Item, ItemId};
pub use oracle::{exact_min_bins, OracleError, EXACT_ITEM_LIMIT};
pub use schedule::{
    classify, optimal_bin_time, validate, BinDelivery, Schedule, StructureClass, ValidationReport,
};
