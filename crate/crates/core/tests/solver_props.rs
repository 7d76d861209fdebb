mod common;

use common::{random_instance, Shape};
use costima::solvers::{baseline, cost_greedy, enum_greedy, greedy_ima, Baseline, SolverConfig};
use costima::{brute_force_opt, TraceStatus};
use proptest::prelude::*;

const UNIT: Shape = Shape { max_nodes: 7, max_edges: 9, max_candidates: 7, unit_cost: true };
const PRICED: Shape = Shape { max_nodes: 7, max_edges: 9, max_candidates: 7, unit_cost: false };
const E: f64 = std::f64::consts::E;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn greedy_is_feasible_and_near_optimal(seed in any::<u64>()) {
        let inst = random_instance(seed, &UNIT);
        let cfg = SolverConfig::exact();
        let opt = brute_force_opt(&inst).unwrap();
        let g = greedy_ima(&inst, &cfg).unwrap();
        prop_assert!(g.chosen.len() as f64 <= inst.budget());
        prop_assert!(g.sigma >= (1.0 - 1.0 / E) * opt.sigma - 1e-9);
        prop_assert!(g.sigma <= opt.sigma + 1e-9);
        let sigmas: Vec<f64> = g.trace.iter().map(|t| t.sigma).collect();
        prop_assert!(sigmas.windows(2).all(|w| w[0] <= w[1] + 1e-12));
    }

    #[test]
    fn budgeted_solvers_meet_their_bounds(seed in any::<u64>()) {
        let inst = random_instance(seed, &PRICED);
        let cfg = SolverConfig::exact();
        let opt = brute_force_opt(&inst).unwrap();
        prop_assert!(opt.total_cost <= inst.budget());

        let cg = cost_greedy(&inst, &cfg).unwrap();
        prop_assert!(cg.total_cost <= inst.budget());
        prop_assert!(cg.sigma >= 0.5 * (1.0 - 1.0 / E) * opt.sigma - 1e-9);
        let accepted: Vec<f64> =
            cg.trace.iter().filter(|t| t.status == TraceStatus::Accepted).map(|t| t.sigma).collect();
        prop_assert!(accepted.windows(2).all(|w| w[0] <= w[1] + 1e-12));

        let eg = enum_greedy(&inst, &cfg).unwrap();
        prop_assert!(eg.total_cost <= inst.budget());
        prop_assert!(eg.sigma >= (1.0 - 1.0 / E) * opt.sigma - 1e-9);
        prop_assert!(eg.sigma <= opt.sigma + 1e-9);
    }

    #[test]
    fn enumeration_never_loses_to_a_small_optimum(seed in any::<u64>()) {
        // With M at least the candidate count, enumeration covers every feasible set.
        let inst = random_instance(seed, &PRICED);
        let m = inst.candidates().len().max(1);
        let eg = enum_greedy(&inst, &SolverConfig::exact().with_enum_size(m)).unwrap();
        let opt = brute_force_opt(&inst).unwrap();
        prop_assert!((eg.sigma - opt.sigma).abs() <= 1e-9);
    }

    #[test]
    fn baselines_are_feasible(seed in any::<u64>(), rng_seed in any::<u64>()) {
        let inst = random_instance(seed, &PRICED);
        for b in [Baseline::Random, Baseline::MaxProb, Baseline::HighOutdegreeTarget] {
            let s = baseline(&inst, b, rng_seed, &SolverConfig::exact()).unwrap();
            prop_assert!(s.total_cost <= inst.budget());
            prop_assert!(s.sigma <= brute_force_opt(&inst).unwrap().sigma + 1e-9);
        }
    }
}
