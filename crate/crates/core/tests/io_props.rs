mod common;

use std::collections::BTreeSet;

use common::{random_instance, Shape};
use costima::graph::{instance_to_json, load_instance, write_instance};
use costima::{default_candidates, Edge, InstanceFormat, NodeId};
use proptest::prelude::*;

const SHAPE: Shape = Shape { max_nodes: 8, max_edges: 12, max_candidates: 6, unit_cost: false };

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn default_pool_is_seed_pairs_minus_edges(
        n in 1usize..9,
        raw_edges in proptest::collection::vec((0u32..9, 0u32..9), 0..20),
        raw_seeds in proptest::collection::vec(0u32..9, 1..4),
    ) {
        let edges: Vec<Edge> = raw_edges
            .into_iter()
            .filter(|&(u, v)| u != v && (u as usize) < n && (v as usize) < n)
            .collect::<BTreeSet<_>>()
            .into_iter()
            .map(|(u, v)| Edge::new(u, v, 0.5))
            .collect();
        let seeds: Vec<NodeId> = raw_seeds.into_iter().map(|s| NodeId(s % n as u32)).collect();
        let pool = default_candidates(n, &edges, &seeds, |_, _| (1.0, 1.0));

        let seed_set: BTreeSet<u32> = seeds.iter().map(|s| s.0).collect();
        let existing: BTreeSet<(u32, u32)> = edges.iter().map(|e| (e.src.0, e.dst.0)).collect();
        let mut want = Vec::new();
        for &a in &seed_set {
            for v in 0..n as u32 {
                if v != a && !existing.contains(&(a, v)) {
                    want.push((a, v));
                }
            }
        }
        let got: Vec<(u32, u32)> = pool.iter().map(|c| (c.src.0, c.dst.0)).collect();
        prop_assert_eq!(got, want);
    }

    #[test]
    fn json_instance_reloads_identically(seed in any::<u64>()) {
        let inst = random_instance(seed, &SHAPE);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("inst.json");
        write_instance(&inst, &path).unwrap();
        let back = load_instance(&path, InstanceFormat::Json).unwrap();
        prop_assert_eq!(&back, &inst);
        prop_assert_eq!(instance_to_json(&back), instance_to_json(&inst));
    }
}
