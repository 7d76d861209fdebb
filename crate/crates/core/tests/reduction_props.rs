use costima::reduction::{ima_to_msc_solution, msc_to_ima, random_msc, MscInstance};
use costima::solvers::SolverConfig;
use costima::{brute_force_opt, exact_sigma, greedy_ima};
use proptest::prelude::*;

fn best_coverage(msc: &MscInstance) -> usize {
    let f = msc.sets().len();
    (0u32..1 << f)
        .filter(|m| m.count_ones() as usize == msc.k())
        .map(|m| msc.coverage(&(0..f).filter(|&j| m >> j & 1 == 1).collect::<Vec<_>>()))
        .max()
        .unwrap()
}

/// Picks `k` sets, each covering the most new elements, lowest index on ties.
fn textbook_greedy(msc: &MscInstance) -> Vec<usize> {
    let mut covered = vec![false; msc.universe_size()];
    let mut picked = Vec::new();
    for _ in 0..msc.k() {
        let mut best: Option<(usize, usize)> = None;
        for (j, set) in msc.sets().iter().enumerate() {
            if picked.contains(&j) {
                continue;
            }
            let fresh = set.iter().filter(|&&x| !covered[x as usize]).count();
            if best.is_none_or(|(_, b)| fresh > b) {
                best = Some((j, fresh));
            }
        }
        let (j, _) = best.unwrap();
        for &x in &msc.sets()[j] {
            covered[x as usize] = true;
        }
        picked.push(j);
    }
    picked
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn optimum_is_k_plus_best_coverage(
        universe in 1usize..=12, sets in 1usize..=7, seed in any::<u64>(), extra in 0usize..=2
    ) {
        let msc = random_msc(universe, sets, None, seed).unwrap();
        let inst = msc_to_ima(&msc, extra).unwrap();
        let opt = brute_force_opt(&inst).unwrap();
        prop_assert_eq!(opt.sigma, (1 + extra + msc.k() + best_coverage(&msc)) as f64);
    }

    #[test]
    fn greedy_tracks_textbook_greedy(universe in 1usize..=20, sets in 1usize..=10, seed in any::<u64>()) {
        let msc = random_msc(universe, sets, None, seed).unwrap();
        let inst = msc_to_ima(&msc, 0).unwrap();
        let sol = greedy_ima(&inst, &SolverConfig::exact()).unwrap();
        let family = ima_to_msc_solution(&sol, &msc).unwrap();
        prop_assert_eq!(&family, &textbook_greedy(&msc));
        prop_assert_eq!(sol.sigma, (1 + family.len() + msc.coverage(&family)) as f64);
    }

    #[test]
    fn spread_counts_sets_and_covered_elements(universe in 1usize..=15, sets in 1usize..=8, seed in any::<u64>(), mask in any::<u8>()) {
        let msc = random_msc(universe, sets, None, seed).unwrap();
        let inst = msc_to_ima(&msc, 0).unwrap();
        let family: Vec<usize> = (0..sets).filter(|&j| mask >> j & 1 == 1).collect();
        let added: Vec<_> = family.iter().map(|&j| inst.candidates()[j]).collect();
        prop_assert_eq!(exact_sigma(&inst, &added).unwrap(), (1 + family.len() + msc.coverage(&family)) as f64);
    }
}
