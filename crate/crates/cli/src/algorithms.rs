//! Named solver entry points shared by the solve and bench commands.

use cds_core::{
    exact_min_bins, solve_decoupling, solve_refined, solve_sequential, Instance, OracleError,
    Schedule, SchedulingPolicy,
};

/// Solver selectable on the command line.
#[derive(Clone, Copy, PartialEq, Eq, Debug, clap::ValueEnum)]
pub enum Algorithm {
    /// Greedy over due order, delivering each bin at its earliest due.
    Early,
    /// Greedy over due order, alternating earliest and latest delivery.
    EarlyLate,
    /// Greedy over due order, delivering each bin at its running median.
    Median,
    /// Segment the due line per delivery count, then first-fit each group.
    Decoupling,
    /// Segment the due line, then split overloaded groups outward.
    Refined,
    /// Exhaustive optimum; refuses instances above the oracle capacity.
    Exact,
}

impl Algorithm {
    /// Approximation solvers in reporting order (everything but `Exact`).
    pub const APPROXIMATIONS: [Algorithm; 5] = [
        Algorithm::Early,
        Algorithm::EarlyLate,
        Algorithm::Median,
        Algorithm::Decoupling,
        Algorithm::Refined,
    ];

    /// Stable name used in solution files and CSV reports.
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Early => "early",
            Algorithm::EarlyLate => "early-late",
            Algorithm::Median => "median",
            Algorithm::Decoupling => "decoupling",
            Algorithm::Refined => "refined",
            Algorithm::Exact => "exact",
        }
    }

    /// Runs the selected solver; only `Exact` can refuse an instance.
    pub fn solve(self, instance: &Instance) -> Result<Schedule, OracleError> {
        match self {
            Algorithm::Early => Ok(solve_sequential(instance, SchedulingPolicy::Early)),
            Algorithm::EarlyLate => Ok(solve_sequential(instance, SchedulingPolicy::EarlyLate)),
            Algorithm::Median => Ok(solve_sequential(instance, SchedulingPolicy::Median)),
            Algorithm::Decoupling => Ok(solve_decoupling(instance)),
            Algorithm::Refined => Ok(solve_refined(instance)),
            Algorithm::Exact => exact_min_bins(instance),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use cds_core::{validate, CostValue};

    #[test]
    fn names_match_clap_value_names() {
        use clap::ValueEnum;
        for algorithm in Algorithm::value_variants() {
            let value = algorithm.to_possible_value().expect("no skipped variants");
            assert_eq!(value.get_name(), algorithm.name());
        }
    }

    #[test]
    fn every_solver_covers_the_instance() {
        let instance =
            Instance::from_dues([0, 1, 2, 10, 11], CostValue::new(4)).expect("valid dues");
        for algorithm in [Algorithm::Exact]
            .into_iter()
            .chain(Algorithm::APPROXIMATIONS)
        {
            let schedule = algorithm.solve(&instance).expect("within capacity");
            assert!(
                validate(&instance, &schedule).is_feasible(),
                "{} produced an infeasible schedule",
                algorithm.name()
            );
        }
    }

    #[test]
    fn exact_refuses_oversized_instances() {
        let instance = Instance::from_dues(0..=20, CostValue::new(5)).expect("valid dues");
        assert!(matches!(
            Algorithm::Exact.solve(&instance),
            Err(OracleError::TooManyItems { .. })
        ));
    }
}
