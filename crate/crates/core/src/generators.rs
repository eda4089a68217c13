//! Instance builders: three adversarial families with known structure, plus
//! seeded uniform-random instances.
//!
//! The structured families each come with a certificate schedule describing
//! the intended packing. The `theorem3` family makes early-policy greedy
//! arbitrarily wasteful (one bin suffices; greedy opens one per due-time
//! group). The `median_lower_bound` family drives median-policy greedy to
//! twice its certificate's bin count. The `three_partition` family encodes an
//! equal-sum triple partition of 3m integers: a valid triple partition maps
//! onto an m-bin schedule. Certificates are emitted as constructed — callers
//! decide whether they validate.

use num_integer::lcm;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::cost::CostValue;
use crate::instance::{Instance, Item, ItemId};
use crate::schedule::{BinDelivery, Schedule};

/// Generators refuse to materialize more items than this.
pub const MAX_GENERATED_ITEMS: u128 = 1_000_000_000;

#[derive(Error, Debug, PartialEq, Eq)]
pub enum GeneratorError {
    #[error("group count {ell} outside the supported range 2..=6")]
    GroupCountOutOfRange { ell: u32 },
    #[error("bound {bound} is below the family minimum {min}")]
    BoundTooSmall { bound: CostValue, min: CostValue },
    #[error("bound {bound} is not divisible by group size {group}")]
    BoundNotDivisible { bound: CostValue, group: u64 },
    #[error("lambda must be at least 2 with lambda - 1 a perfect square, got {lambda}")]
    LambdaNotSupported { lambda: u64 },
    #[error("need 3m values for some m >= 1, got {len}")]
    ValueCountNotTriple { len: usize },
    #[error("value {value} at index {index} violates beta/4 <= value <= beta/2 for beta {beta}")]
    ValueOutOfRange { index: usize, value: u64, beta: u64 },
    #[error("values sum to {sum}, expected m*beta = {expected}")]
    ValueSumMismatch { sum: u128, expected: u128 },
    #[error("partition must be disjoint index triples covering all values, each summing to beta")]
    InvalidPartition,
    #[error("generated due times overflow 64 bits")]
    TimeOverflow,
    #[error("family parameters require {items} items (limit {MAX_GENERATED_ITEMS})")]
    InstanceTooLarge { items: u128 },
    #[error("need at least one item")]
    EmptyInstance,
}

/// A generated instance plus the generator's claimed schedule, if any.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Generated {
    pub instance: Instance,
    /// Claimed packing, exactly as the family construction describes it.
    /// Validate before trusting: one family's claim is deliberately kept
    /// as constructed even though it does not pass validation.
    pub certificate: Option<Schedule>,
}

/// Declarative description of one generator invocation.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum GeneratorSpec {
    Theorem3 {
        ell: u32,
        bound: Option<CostValue>,
    },
    MedianLowerBound {
        lambda: u64,
    },
    ThreePartition {
        values: Vec<u64>,
        beta: u64,
        partition: Option<Vec<Vec<usize>>>,
    },
    Random {
        n: usize,
        max_due: u64,
        bound: CostValue,
        seed: u64,
    },
}

impl GeneratorSpec {
    /// Stable family name, as used in instance metadata and CLI flags.
    pub fn family(&self) -> &'static str {
        match self {
            GeneratorSpec::Theorem3 { .. } => "theorem3",
            GeneratorSpec::MedianLowerBound { .. } => "median_lower_bound",
            GeneratorSpec::ThreePartition { .. } => "three_partition",
            GeneratorSpec::Random { .. } => "random",
        }
    }

    pub fn generate(&self) -> Result<Generated, GeneratorError> {
        match self {
            GeneratorSpec::Theorem3 { ell, bound } => theorem3(*ell, *bound),
            GeneratorSpec::MedianLowerBound { lambda } => median_lower_bound(*lambda),
            GeneratorSpec::ThreePartition {
                values,
                beta,
                partition,
            } => three_partition(values, *beta, partition.as_deref()),
            GeneratorSpec::Random {
                n,
                max_due,
                bound,
                seed,
            } => random(*n, *max_due, *bound, *seed),
        }
    }
}

/// Due-time groups of sizes 1, 2, then 4^(t−1)·(sum of earlier sizes), spaced
/// so early-policy greedy opens one bin per group while a single bin at the
/// last group's time covers everything.
///
/// The default bound is the smallest multiple of lcm(sizes) at least
/// (total items)²·ell; an explicit `bound` must meet the same floor and
/// divisibility so the spacing stays integral.
pub fn theorem3(ell: u32, bound: Option<CostValue>) -> Result<Generated, GeneratorError> {
    if !(2..=6).contains(&ell) {
        return Err(GeneratorError::GroupCountOutOfRange { ell });
    }
    let mut sizes: Vec<u128> = vec![1, 2];
    for t in 3..=ell {
        let sum: u128 = sizes.iter().sum();
        sizes.push(4u128.pow(t - 1) * sum);
    }
    sizes.truncate(ell as usize);
    let n: u128 = sizes.iter().sum();
    if n > MAX_GENERATED_ITEMS {
        return Err(GeneratorError::InstanceTooLarge { items: n });
    }
    let min_bound = n * n * ell as u128;
    let common: u128 = sizes.iter().fold(1, |acc, &s| lcm(acc, s));
    let bound = match bound {
        None => CostValue::new(min_bound.div_ceil(common) * common),
        Some(b) => {
            if b.value() < min_bound {
                return Err(GeneratorError::BoundTooSmall {
                    bound: b,
                    min: CostValue::new(min_bound),
                });
            }
            if let Some(&g) = sizes.iter().find(|&&s| b.value() % s != 0) {
                return Err(GeneratorError::BoundNotDivisible {
                    bound: b,
                    group: g as u64,
                });
            }
            b
        }
    };

    let mut dues: Vec<u64> = Vec::with_capacity(n as usize);
    let mut time: u128 = 0;
    for (t, &size) in sizes.iter().enumerate() {
        if t > 0 {
            time += bound.value() / size + 1;
        }
        let due: u64 = time.try_into().map_err(|_| GeneratorError::TimeOverflow)?;
        dues.extend(std::iter::repeat_n(due, size as usize));
    }
    let last = *dues.last().expect("at least two groups");
    let instance = Instance::from_dues(dues, bound).expect("group sizes are positive");
    let all: Vec<ItemId> = instance.items().iter().map(|it| it.id).collect();
    let certificate = Schedule::new(vec![
        BinDelivery::new(all, last).expect("instance is non-empty")
    ]);
    Ok(Generated {
        instance,
        certificate: Some(certificate),
    })
}

/// Adversarial family for median-policy greedy, parameterized by a lambda
/// with lambda − 1 a perfect square k².
///
/// Builds k runs of 2·lambda consecutive dues plus k heavy groups of
/// 2·lambda² + 1 items just past them, bound lambda². Median greedy uses 2k
/// bins. The emitted k-bin certificate takes, for bin i, the i-th item of
/// each run plus heavy group i at group i's due; as constructed it overloads
/// its bins and leaves most run items unplaced, and is emitted anyway for
/// callers to inspect.
pub fn median_lower_bound(lambda: u64) -> Result<Generated, GeneratorError> {
    if lambda < 2 {
        return Err(GeneratorError::LambdaNotSupported { lambda });
    }
    let k = (lambda - 1).isqrt();
    if k * k != lambda - 1 {
        return Err(GeneratorError::LambdaNotSupported { lambda });
    }
    let ell = 2 * lambda as u128;
    let bound = (lambda as u128) * (lambda as u128);
    let heavy = 2 * bound + 1;
    let k = k as u128;
    let total = k * ell + k * heavy;
    if total > MAX_GENERATED_ITEMS {
        return Err(GeneratorError::InstanceTooLarge { items: total });
    }

    let run_len = ell as u64;
    let runs_end = k as u64 * run_len;
    let mut dues: Vec<u64> = (0..runs_end).collect();
    for j in 1..=k as u64 {
        dues.extend(std::iter::repeat_n(runs_end + j, heavy as usize));
    }
    let instance =
        Instance::from_dues(dues, CostValue::new(bound)).expect("k >= 1 and ell >= 4 give items");

    // from_dues numbers ids in due order: run item with due x has id x, heavy
    // group j occupies the next `heavy` ids.
    let mut bins = Vec::with_capacity(k as usize);
    for i in 1..=k as u64 {
        let mut ids: Vec<ItemId> = (0..k as u64).map(|j| ItemId(j * run_len + i - 1)).collect();
        let group_start = runs_end + (i - 1) * heavy as u64;
        ids.extend((group_start..group_start + heavy as u64).map(ItemId));
        bins.push(BinDelivery::new(ids, runs_end + i).expect("bins are non-empty"));
    }
    Ok(Generated {
        instance,
        certificate: Some(Schedule::new(bins)),
    })
}

/// Encodes an equal-sum triple partition instance: 3m values with
/// beta/4 ≤ value ≤ beta/2 summing to m·beta.
///
/// Times are pre-scaled by 3·m·beta to stay integral: value items sit at
/// 3mβ²·(max − value), m heavy groups of (mβ²)² items sit just past them, and
/// the bound is 3mβ·(β² + β + 3). With a valid triple partition supplied, the
/// certificate ships triple j plus heavy group j at group j's due in m bins.
pub fn three_partition(
    values: &[u64],
    beta: u64,
    partition: Option<&[Vec<usize>]>,
) -> Result<Generated, GeneratorError> {
    if values.is_empty() || !values.len().is_multiple_of(3) {
        return Err(GeneratorError::ValueCountNotTriple { len: values.len() });
    }
    let m = values.len() / 3;
    let m128 = m as u128;
    let b128 = beta as u128;
    for (index, &value) in values.iter().enumerate() {
        if 4 * (value as u128) < b128 || 2 * (value as u128) > b128 {
            return Err(GeneratorError::ValueOutOfRange { index, value, beta });
        }
    }
    // Values are at most beta/2 ≤ u64::MAX/2 each, so the sum fits u128.
    let sum: u128 = values.iter().map(|&v| v as u128).sum();
    if sum != m128 * b128 {
        return Err(GeneratorError::ValueSumMismatch {
            sum,
            expected: m128 * b128,
        });
    }
    let group_size = b128
        .checked_pow(4)
        .and_then(|p| p.checked_mul(m128 * m128))
        .ok_or(GeneratorError::InstanceTooLarge { items: u128::MAX })?;
    let total = group_size
        .checked_mul(m128)
        .and_then(|t| t.checked_add(3 * m128))
        .ok_or(GeneratorError::InstanceTooLarge { items: u128::MAX })?;
    if total > MAX_GENERATED_ITEMS {
        return Err(GeneratorError::InstanceTooLarge { items: total });
    }
    let sigma = 3 * m128 * b128;
    let max = *values.iter().max().expect("values is non-empty") as u128;
    let value_due = |value: u64| -> Result<u64, GeneratorError> {
        (sigma * b128 * (max - value as u128))
            .try_into()
            .map_err(|_| GeneratorError::TimeOverflow)
    };
    let group_due = |j: usize| -> Result<u64, GeneratorError> {
        (sigma * b128 * max + m128 * b128 * b128 + 3 * (j as u128 + 1))
            .try_into()
            .map_err(|_| GeneratorError::TimeOverflow)
    };

    // Value item i keeps id i so partitions index items directly; heavy
    // groups take the following ids.
    let mut items = Vec::with_capacity(total as usize);
    for (i, &value) in values.iter().enumerate() {
        items.push(Item {
            id: ItemId(i as u64),
            due: value_due(value)?,
        });
    }
    let mut next_id = values.len() as u64;
    let mut group_ids = Vec::with_capacity(m);
    for j in 0..m {
        let due = group_due(j)?;
        let start = next_id;
        for _ in 0..group_size {
            items.push(Item {
                id: ItemId(next_id),
                due,
            });
            next_id += 1;
        }
        group_ids.push((start, next_id));
    }
    let bound = CostValue::new(sigma * (b128 * b128 + b128 + 3));
    let instance = Instance::new(items, bound).expect("ids are sequential and unique");

    let certificate = match partition {
        None => None,
        Some(blocks) => {
            let mut seen = vec![false; values.len()];
            if blocks.len() != m {
                return Err(GeneratorError::InvalidPartition);
            }
            for block in blocks {
                if block.len() != 3 {
                    return Err(GeneratorError::InvalidPartition);
                }
                let mut block_sum = 0u64;
                for &idx in block {
                    if idx >= values.len() || seen[idx] {
                        return Err(GeneratorError::InvalidPartition);
                    }
                    seen[idx] = true;
                    block_sum += values[idx];
                }
                if block_sum != beta {
                    return Err(GeneratorError::InvalidPartition);
                }
            }
            let bins = blocks
                .iter()
                .enumerate()
                .map(|(j, block)| {
                    let mut ids: Vec<ItemId> =
                        block.iter().map(|&idx| ItemId(idx as u64)).collect();
                    let (start, end) = group_ids[j];
                    ids.extend((start..end).map(ItemId));
                    BinDelivery::new(ids, group_due(j).expect("checked above"))
                        .expect("blocks have three items")
                })
                .collect();
            Some(Schedule::new(bins))
        }
    };
    Ok(Generated {
        instance,
        certificate,
    })
}

/// n dues drawn uniformly from [0, max_due], reproducible from the seed.
pub fn random(
    n: usize,
    max_due: u64,
    bound: CostValue,
    seed: u64,
) -> Result<Generated, GeneratorError> {
    if n == 0 {
        return Err(GeneratorError::EmptyInstance);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dues: Vec<u64> = (0..n).map(|_| rng.random_range(0..=max_due)).collect();
    let instance = Instance::from_dues(dues, bound).expect("n >= 1");
    Ok(Generated {
        instance,
        certificate: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::greedy::{solve_sequential, SchedulingPolicy};
    use crate::schedule::validate;

    #[test]
    fn theorem3_reproduces_the_worked_shapes() {
        let g = theorem3(3, None).unwrap();
        let inst = &g.instance;
        assert_eq!(inst.len(), 51);
        assert_eq!(inst.bound(), CostValue::from(7824u64));
        assert_eq!(inst.due(0), 0);
        assert_eq!(inst.due(1), 3913);
        assert_eq!(inst.due(2), 3913);
        assert_eq!(inst.due(3), 4077);
        assert_eq!(inst.due(50), 4077);
        let cert = g.certificate.unwrap();
        assert_eq!(cert.len(), 1);
        assert_eq!(cert.bins[0].time(), 4077);
        assert!(validate(inst, &cert).is_feasible());

        let small = theorem3(2, Some(CostValue::from(100u64))).unwrap();
        let dues: Vec<u64> = small.instance.dues().collect();
        assert_eq!(dues, vec![0, 51, 51]);
        assert!(validate(&small.instance, &small.certificate.unwrap()).is_feasible());
    }

    #[test]
    fn theorem3_certificates_stay_feasible_as_groups_grow() {
        for ell in 2..=4 {
            let g = theorem3(ell, None).unwrap();
            let cert = g.certificate.unwrap();
            assert_eq!(cert.len(), 1);
            assert!(validate(&g.instance, &cert).is_feasible(), "ell {ell}");
        }
    }

    #[test]
    fn theorem3_early_greedy_opens_one_bin_per_group() {
        for ell in 2..=3 {
            let g = theorem3(ell, None).unwrap();
            let schedule = solve_sequential(&g.instance, SchedulingPolicy::Early);
            assert_eq!(schedule.len() as u32, ell);
            assert!(validate(&g.instance, &schedule).is_feasible());
        }
    }

    #[test]
    fn theorem3_rejects_bad_parameters() {
        assert_eq!(
            theorem3(1, None).unwrap_err(),
            GeneratorError::GroupCountOutOfRange { ell: 1 }
        );
        assert_eq!(
            theorem3(7, None).unwrap_err(),
            GeneratorError::GroupCountOutOfRange { ell: 7 }
        );
        // ell=2 floor is 3²·2 = 18.
        assert_eq!(
            theorem3(2, Some(CostValue::from(17u64))).unwrap_err(),
            GeneratorError::BoundTooSmall {
                bound: CostValue::from(17u64),
                min: CostValue::from(18u64)
            }
        );
        assert_eq!(
            theorem3(2, Some(CostValue::from(19u64))).unwrap_err(),
            GeneratorError::BoundNotDivisible {
                bound: CostValue::from(19u64),
                group: 2
            }
        );
    }

    #[test]
    fn median_lower_bound_shape_and_flawed_certificate() {
        let g = median_lower_bound(5).unwrap();
        let inst = &g.instance;
        assert_eq!(inst.len(), 122);
        assert_eq!(inst.bound(), CostValue::from(25u64));
        let dues: Vec<u64> = inst.dues().collect();
        assert_eq!(&dues[..20], &(0..20).collect::<Vec<u64>>()[..]);
        assert!(dues[20..71].iter().all(|&d| d == 21));
        assert!(dues[71..].iter().all(|&d| d == 22));

        // The claimed 2-bin packing overloads both bins (32 > 25) and leaves
        // the 16 run items it never mentions unplaced.
        let cert = g.certificate.unwrap();
        assert_eq!(cert.len(), 2);
        let report = validate(inst, &cert);
        assert!(!report.is_feasible());
        assert_eq!(report.missing.len(), 16);
        assert_eq!(report.duplicated, vec![]);
        assert_eq!(report.unknown, vec![]);
        assert_eq!(report.overloaded.len(), 2);
        assert!(report
            .overloaded
            .iter()
            .all(|o| o.cost == CostValue::from(32u64)));
    }

    #[test]
    fn median_greedy_doubles_the_claimed_bin_count() {
        // k = 1: run {0..3} packs into one bin at its median, the heavy group
        // into a second.
        let g = median_lower_bound(2).unwrap();
        assert_eq!(g.instance.len(), 13);
        let schedule = solve_sequential(&g.instance, SchedulingPolicy::Median);
        assert_eq!(schedule.len(), 2);

        // k = 2: four bins against the claimed two.
        let g = median_lower_bound(5).unwrap();
        let schedule = solve_sequential(&g.instance, SchedulingPolicy::Median);
        assert_eq!(schedule.len(), 4);
        assert!(validate(&g.instance, &schedule).is_feasible());
    }

    #[test]
    fn median_lower_bound_rejects_non_square_offsets() {
        for lambda in [0, 1, 3, 4, 6, 9] {
            assert_eq!(
                median_lower_bound(lambda).unwrap_err(),
                GeneratorError::LambdaNotSupported { lambda }
            );
        }
        assert!(median_lower_bound(2).is_ok());
        assert!(median_lower_bound(10).is_ok());
        assert!(median_lower_bound(17).is_ok());
    }

    #[test]
    fn three_partition_reproduces_the_worked_example() {
        let values = [2, 2, 4, 2, 3, 3];
        let partition = vec![vec![0, 1, 2], vec![3, 4, 5]];
        let g = three_partition(&values, 8, Some(&partition)).unwrap();
        let inst = &g.instance;
        assert_eq!(inst.len(), 32_774);
        assert_eq!(inst.bound(), CostValue::from(3600u64));
        // Scaled value dues: 384·(4 − value).
        for (i, &v) in values.iter().enumerate() {
            let idx = inst.index_of(ItemId(i as u64)).unwrap();
            assert_eq!(inst.due(idx), 384 * (4 - v));
        }
        let cert = g.certificate.unwrap();
        assert_eq!(cert.len(), 2);
        assert_eq!(cert.bins[0].time(), 1667);
        assert_eq!(cert.bins[1].time(), 1670);
        assert_eq!(cert.bins[0].cost(inst).unwrap(), CostValue::from(3465u64));
        assert_eq!(cert.bins[1].cost(inst).unwrap(), CostValue::from(3474u64));
        assert!(validate(inst, &cert).is_feasible());
    }

    #[test]
    fn three_partition_rejects_malformed_inputs() {
        assert_eq!(
            three_partition(&[2, 2, 4, 2, 3], 8, None).unwrap_err(),
            GeneratorError::ValueCountNotTriple { len: 5 }
        );
        assert_eq!(
            three_partition(&[1, 3, 4], 8, None).unwrap_err(),
            GeneratorError::ValueOutOfRange {
                index: 0,
                value: 1,
                beta: 8
            }
        );
        assert_eq!(
            three_partition(&[2, 2, 3], 8, None).unwrap_err(),
            GeneratorError::ValueSumMismatch {
                sum: 7,
                expected: 8
            }
        );
        // Sum checks run in wide arithmetic: near-u64 values error instead
        // of wrapping.
        let huge = u64::MAX / 2;
        assert!(matches!(
            three_partition(&[huge, huge, huge], u64::MAX, None).unwrap_err(),
            GeneratorError::ValueSumMismatch { .. }
        ));
        // Valid values, wrong partitions.
        let values = [2, 2, 4, 2, 3, 3];
        for bad in [
            vec![vec![0, 1, 2]],                // too few blocks
            vec![vec![0, 1], vec![2, 3, 4]],    // block size
            vec![vec![0, 1, 2], vec![3, 4, 4]], // duplicate index
            vec![vec![0, 1, 3], vec![2, 4, 5]], // sums 6 and 10
        ] {
            assert_eq!(
                three_partition(&values, 8, Some(&bad)).unwrap_err(),
                GeneratorError::InvalidPartition
            );
        }
    }

    #[test]
    fn random_is_seed_deterministic() {
        let a = random(5, 100, CostValue::from(20u64), 1).unwrap();
        let b = random(5, 100, CostValue::from(20u64), 1).unwrap();
        assert_eq!(a.instance, b.instance);
        assert!(a.certificate.is_none());
        assert!(a.instance.dues().all(|d| d <= 100));

        let c = random(5, 100, CostValue::from(20u64), 2).unwrap();
        assert_ne!(a.instance, c.instance);

        assert_eq!(
            random(0, 10, CostValue::ZERO, 1).unwrap_err(),
            GeneratorError::EmptyInstance
        );
        assert_eq!(random(1, 0, CostValue::ZERO, 9).unwrap().instance.len(), 1);
    }

    #[test]
    fn spec_dispatch_matches_direct_calls() {
        let spec = GeneratorSpec::Theorem3 {
            ell: 2,
            bound: Some(CostValue::from(100u64)),
        };
        assert_eq!(spec.family(), "theorem3");
        assert_eq!(
            spec.generate().unwrap(),
            theorem3(2, Some(CostValue::from(100u64))).unwrap()
        );

        let spec = GeneratorSpec::Random {
            n: 4,
            max_due: 9,
            bound: CostValue::ZERO,
            seed: 3,
        };
        assert_eq!(spec.family(), "random");
        assert_eq!(
            spec.generate().unwrap().instance,
            random(4, 9, CostValue::ZERO, 3).unwrap().instance
        );

        assert_eq!(
            GeneratorSpec::MedianLowerBound { lambda: 5 }.family(),
            "median_lower_bound"
        );
        assert_eq!(
            GeneratorSpec::ThreePartition {
                values: vec![],
                beta: 1,
                partition: None
            }
            .family(),
            "three_partition"
        );
    }
}
