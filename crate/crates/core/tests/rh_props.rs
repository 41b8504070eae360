mod common;

use common::{all_connected, arb_graph, arb_labeled, config};
use porttour_core::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn two_way(g: &Graph) -> UsageMap {
    UsageMap::from_roles(vec![Usage::TwoWay; g.m()])
}

/// Brute force over cyclic orders at `v`: some order makes "arrive over a
/// used dart" equivalent to "leave over a used dart" for every port, and at
/// least one dart is used.
fn admits_rh_order(g: &Graph, u: &UsageMap, v: usize) -> bool {
    let out: Vec<bool> = g.darts_from(v).map(|d| u.dart_used(g, d)).collect();
    let inc: Vec<bool> = g.darts_from(v).map(|d| u.dart_used(g, g.twin(d))).collect();
    if !out.iter().chain(&inc).any(|&b| b) {
        return false;
    }
    let d = out.len();
    let mut perm: Vec<usize> = (0..d).collect();
    loop {
        if (0..d).all(|i| inc[perm[i]] == out[perm[(i + 1) % d]]) {
            return true;
        }
        // next permutation of perm[1..]
        let tail = &mut perm[1..];
        let Some(i) = (0..tail.len().saturating_sub(1)).rev().find(|&i| tail[i] < tail[i + 1]) else {
            return false;
        };
        let j = (i + 1..tail.len()).rev().find(|&j| tail[j] > tail[i]).unwrap();
        tail.swap(i, j);
        tail[i + 1..].reverse();
    }
}

fn random_usage(g: &Graph, seed: u64) -> UsageMap {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    UsageMap::from_roles(
        (0..g.m())
            .map(|_| match rng.gen_range(0..4) {
                0 => Usage::Unused,
                1 => Usage::TwoWay,
                2 => Usage::SingleForward,
                _ => Usage::SingleBackward,
            })
            .collect(),
    )
}

fn check_partition(g: &Graph, pm: &PortMap, u: &UsageMap, cs: &CycleSet) -> std::result::Result<(), TestCaseError> {
    let mut hits = vec![0usize; g.num_darts()];
    for c in cs.cycles() {
        for (i, &d) in c.iter().enumerate() {
            hits[d] += 1;
            prop_assert_eq!(c[(i + 1) % c.len()], pm.rh_next(g, d));
        }
    }
    for (d, &h) in hits.iter().enumerate() {
        prop_assert_eq!(h, usize::from(u.dart_used(g, d)), "dart {}", d);
    }
    for w in cs.cycles().windows(2) {
        prop_assert!(w[0].len() >= w[1].len());
    }
    Ok(())
}

/// A node whose arrivals lie on at least three different cycles.
fn merge_site(g: &Graph, pm: &PortMap, cs: &CycleSet) -> Option<usize> {
    (0..g.n()).find(|&v| {
        let mut labels: Vec<usize> = (1..=g.degree(v))
            .filter_map(|p| cs.label(g.twin(pm.exit_dart(v, p))))
            .collect();
        labels.sort_unstable();
        labels.dedup();
        labels.len() >= 3
    })
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn cycles_partition_the_used_darts((g, pm) in arb_labeled(2, 30)) {
        let u = two_way(&g);
        let cs = decompose_cycles(&g, &pm, &u).unwrap();
        check_partition(&g, &pm, &u, &cs)?;
        prop_assert_eq!(cs.total_len(), 2 * g.m());
    }

    #[test]
    fn witness_ordering_is_consistent(g in arb_graph(3, 30)) {
        let run = find_witness_cycle_run(&g, &Hooks::default()).unwrap();
        let pm = witness_port_map(&g, &run.usage).unwrap();
        let cs = decompose_cycles(&g, &pm, &run.usage).unwrap();
        check_partition(&g, &pm, &run.usage, &cs)?;
    }

    #[test]
    fn merge3_matches_a_fresh_decomposition((g, pm) in arb_labeled(4, 30)) {
        let u = two_way(&g);
        let cs = decompose_cycles(&g, &pm, &u).unwrap();
        let Some(v) = merge_site(&g, &pm, &cs) else { return Ok(()) };
        let (ncs, npm) = merge3(&g, &cs, &pm, v).unwrap();
        prop_assert_eq!(ncs.len() + 2, cs.len());
        prop_assert_eq!(ncs.total_len(), cs.total_len());
        prop_assert_eq!(&ncs, &decompose_cycles(&g, &npm, &u).unwrap());
        for w in 0..g.n() {
            if w != v {
                prop_assert_eq!(npm.order(w), pm.order(w));
            }
        }
    }

    #[test]
    fn eat_small_matches_a_fresh_decomposition((g, pm) in arb_labeled(3, 30)) {
        let u = two_way(&g);
        let cs = decompose_cycles(&g, &pm, &u).unwrap();
        match eat_small(&g, &cs, &pm) {
            Ok((ncs, npm)) => {
                prop_assert_eq!(ncs.total_len(), cs.total_len());
                prop_assert!(ncs.len() <= cs.len());
                prop_assert_eq!(&ncs, &decompose_cycles(&g, &npm, &u).unwrap());
            }
            Err(Error::NotApplicable(_)) => {}
            Err(e) => prop_assert!(false, "{}", e),
        }
    }

    #[test]
    fn reduction_spans_and_repeats((g, pm) in arb_labeled(2, 30)) {
        let u = two_way(&g);
        let (w, npm, st) = reduce_to_witness_stats(&g, &pm, &u).unwrap();
        prop_assert!(verify_witness(&g, &npm, &w).is_empty());
        prop_assert!(w.len() <= 2 * g.m());
        if st.leftover_cycles == 0 {
            prop_assert_eq!(w.len(), 2 * g.m());
        }
        let l = w.len();
        for &(v, exit) in w.steps.iter().step_by(1 + l / 8) {
            let d = g.degree(v);
            let entry = if exit == 1 { d } else { exit - 1 };
            let t = simulate_rh(&g, &npm, v, entry).unwrap();
            prop_assert_eq!(t.period, l);
            prop_assert!(t.covers_all());
        }
    }

    #[test]
    fn traversability_matches_brute_force(g in arb_graph(2, 8), seed in any::<u64>()) {
        let u = random_usage(&g, seed);
        for v in 0..g.n() {
            prop_assert_eq!(check_rh_traversable(&g, &u, v).unwrap(), admits_rh_order(&g, &u, v), "node {}", v);
        }
    }
}

#[test]
fn traversability_matches_brute_force_on_small_graphs() {
    for n in 2..=4 {
        for g in all_connected(n) {
            let m = g.m();
            for code in 0..4usize.pow(m as u32) {
                let roles = (0..m)
                    .map(|e| match code / 4usize.pow(e as u32) % 4 {
                        0 => Usage::Unused,
                        1 => Usage::TwoWay,
                        2 => Usage::SingleForward,
                        _ => Usage::SingleBackward,
                    })
                    .collect();
                let u = UsageMap::from_roles(roles);
                for v in 0..n {
                    assert_eq!(check_rh_traversable(&g, &u, v).unwrap(), admits_rh_order(&g, &u, v));
                }
            }
        }
    }
    for (i, g) in all_connected(5).iter().enumerate() {
        for s in 0..16 {
            let u = random_usage(g, (i * 16 + s) as u64);
            for v in 0..5 {
                assert_eq!(check_rh_traversable(g, &u, v).unwrap(), admits_rh_order(g, &u, v));
            }
        }
    }
}

#[test]
fn witness_order_makes_every_node_traversable() {
    let g = Graph::from_edges(5, &[(0, 1), (1, 2), (2, 0), (0, 3), (3, 4), (4, 0)]).unwrap();
    let mut u = UsageMap::new(&g);
    for (a, b) in [(0, 1), (1, 2), (2, 0), (0, 3), (3, 4), (4, 0)] {
        u.set_single(&g, a, b);
    }
    let pm = witness_port_map(&g, &u).unwrap();
    for (v, k) in [(0, 2), (1, 1), (3, 1)] {
        let c = u.node(&g, v);
        assert_eq!((c.incoming, c.outgoing), (k, k));
    }
    let cs = decompose_cycles(&g, &pm, &u).unwrap();
    assert_eq!(cs.total_len(), 6);
}

#[test]
fn tree_reduces_to_its_euler_tour() {
    let g = gen_star(6).unwrap();
    let (w, _, st) = reduce_to_witness_stats(&g, &PortMap::ascending(&g), &two_way(&g)).unwrap();
    assert_eq!(w.len(), 2 * (g.n() - 1));
    assert_eq!(st.merges + st.eats, 0);
}

#[test]
fn disconnected_two_way_part_is_rejected() {
    let g = gen_complete(4).unwrap();
    let mut u = UsageMap::new(&g);
    u.set(g.edge_id(0, 1).unwrap(), Usage::TwoWay);
    u.set(g.edge_id(2, 3).unwrap(), Usage::TwoWay);
    for (a, b) in [(1, 2), (2, 0), (0, 3), (3, 1)] {
        u.set_single(&g, a, b);
    }
    let pm = witness_port_map(&g, &u).unwrap();
    assert_eq!(reduce_to_witness(&g, &pm, &u), Err(Error::NotTwoWayConnected));
}

#[test]
fn merge3_needs_three_cycles() {
    let g = gen_path(3).unwrap();
    let pm = PortMap::ascending(&g);
    let cs = decompose_cycles(&g, &pm, &two_way(&g)).unwrap();
    assert!(matches!(merge3(&g, &cs, &pm, 1), Err(Error::NotApplicable(_))));
    assert!(matches!(eat_small(&g, &cs, &pm), Err(Error::NotApplicable(_))));
}
