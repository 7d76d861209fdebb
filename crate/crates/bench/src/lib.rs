//! Fixture instances shared by the benchmarks.

use costima::generate::{gen_random_instance, CandidatePolicy, Dist, GenSpec};
use costima::ProblemInstance;

/// Sparse random graph with about `avg_degree · n` edges, edge probabilities
/// uniform in `[0, 0.1]`, ten seeds and `candidates` unit-cost candidates.
pub fn sparse_instance(n: usize, avg_degree: f64, candidates: usize, budget: f64) -> ProblemInstance {
    gen_random_instance(&GenSpec {
        n,
        density: avg_degree / (n as f64 - 1.0),
        prob: Dist::Uniform(0.0, 0.1),
        seeds: 10.min(n),
        candidates: CandidatePolicy::Sample(candidates),
        candidate_prob: Dist::Uniform(0.0, 1.0),
        cost: Dist::Constant(1.0),
        budget,
        rng_seed: 17,
    })
    .expect("fixture parameters are valid")
}

/// Small dense instance with costs in `[0, 1]`, for the exact oracle and the
/// budgeted solvers.
pub fn small_instance(candidates: usize) -> ProblemInstance {
    gen_random_instance(&GenSpec {
        n: 10,
        density: 0.08,
        prob: Dist::Uniform(0.1, 0.9),
        seeds: 2,
        candidates: CandidatePolicy::Sample(candidates),
        candidate_prob: Dist::Uniform(0.1, 0.9),
        cost: Dist::Uniform(0.0, 1.0),
        budget: 1.5,
        rng_seed: 5,
    })
    .expect("fixture parameters are valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_have_requested_shape() {
        let inst = sparse_instance(1000, 5.0, 50, 5.0);
        assert_eq!(inst.candidates().len(), 50);
        assert!(inst.unit_cost());
        assert_eq!(small_instance(8).candidates().len(), 8);
    }
}
