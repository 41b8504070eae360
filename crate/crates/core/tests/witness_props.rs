mod common;

use common::{arb_graph, config};
use porttour_core::*;
use proptest::prelude::*;

// operations per (|E| + |V|) of a full build; the corpus maximum is about 17
const OPS_FACTOR: u64 = 24;

fn general_bound(n: usize) -> usize {
    (13 * n / 3).saturating_sub(4)
}

fn arb_two_connected(max_n: usize) -> impl Strategy<Value = Graph> {
    (4..=max_n, any::<usize>(), any::<u64>()).prop_map(|(n, raw, seed)| {
        let max = (2 * n).min(n * (n - 1) / 2);
        gen_random_two_connected(n, n + raw % (max - n + 1), seed).unwrap()
    })
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn general_witness_verifies_within_bound(g in arb_graph(2, 60)) {
        let run = find_witness_cycle_run(&g, &Hooks::default()).unwrap();
        let v = verify_witness(&g, &run.ports, &run.witness);
        prop_assert!(v.is_empty(), "{:?}", v);
        prop_assert!(run.witness.len() <= general_bound(g.n()));
        prop_assert!(run.witness.len() <= run.stats.used_darts());
        prop_assert_eq!(run.stats.used_darts(), run.usage.used_darts());
    }

    #[test]
    fn every_node_is_traversable_in_the_edge_set(g in arb_graph(2, 60)) {
        let run = find_witness_cycle_run(&g, &Hooks::default()).unwrap();
        for v in 0..g.n() {
            prop_assert!(check_rh_traversable(&g, &run.usage, v).unwrap(), "node {}", v);
        }
        prop_assert!(run.usage.two_way_connected(&g));
    }

    #[test]
    fn tree_edges_stay_two_way(g in arb_graph(2, 60)) {
        let run = find_witness_cycle_run(&g, &Hooks::default()).unwrap();
        let t = SpanningTree::bfs(&g, 0);
        for &(a, b) in &t.edges {
            prop_assert_eq!(run.usage.get(g.edge_id(a, b).unwrap()), Usage::TwoWay);
        }
    }

    #[test]
    fn component_budgets_hold(g in arb_graph(3, 60)) {
        let run = find_witness_cycle_run(&g, &Hooks::default()).unwrap();
        for c in &run.stats.components {
            let base = 2 * (c.nodes - 1);
            if c.star_edges == 0 {
                prop_assert_eq!(c.used_darts() + c.reduced, base, "{:?}", c);
            }
            prop_assert!(3 * c.used_darts() <= 3 * base + c.nodes, "{:?}", c);
        }
    }

    #[test]
    fn build_work_is_linear(g in arb_graph(2, 80)) {
        let run = find_witness_cycle_run(&g, &Hooks::default()).unwrap();
        prop_assert!(run.stats.total_ops() <= OPS_FACTOR * (g.m() + g.n()) as u64);
    }

    #[test]
    fn terse_witness_is_at_most_twice_n(g in arb_two_connected(24)) {
        let Ok(t) = find_nonsaturating_tree(&g, 200_000) else { return Ok(()) };
        prop_assert!(t.spans(g.n()));
        prop_assert_eq!(t.saturated_node(&g), None);
        let run = terse_cycles_run(&g, &t).unwrap();
        prop_assert!(verify_witness(&g, &run.ports, &run.witness).is_empty());
        prop_assert!(run.witness.len() <= 2 * g.n());
    }

    #[test]
    fn hooks_round_trip(
        tree in prop::collection::vec((0usize..50, 0usize..50), 0..10),
        start in prop::option::of(0usize..50),
        sat in prop::collection::vec(0usize..50, 0..5),
    ) {
        let h = Hooks { tree_edges: tree, start, saturate: sat };
        prop_assert_eq!(Hooks::parse(&h.write()).unwrap(), h);
    }
}

#[test]
fn cycle_has_no_nonsaturating_tree() {
    assert_eq!(find_nonsaturating_tree(&gen_cycle(4).unwrap(), 10_000), Err(Error::NotFound));
}

#[test]
fn complete_graph_has_a_nonsaturating_tree() {
    let g = gen_complete(4).unwrap();
    let t = find_nonsaturating_tree(&g, 10_000).unwrap();
    assert_eq!(t.saturated_node(&g), None);
    let (pm, w) = terse_cycles(&g, &t).unwrap();
    assert!(verify_witness(&g, &pm, &w).is_empty());
    assert!(w.len() <= 8);
}

#[test]
fn saturating_tree_is_rejected() {
    let g = gen_complete(4).unwrap();
    let t = SpanningTree::bfs(&g, 0);
    assert_eq!(terse_cycles(&g, &t).map(|_| ()), Err(Error::SaturatedTree(0)));
}

#[test]
fn tree_graph_gives_euler_tour() {
    let g = gen_path(7).unwrap();
    let (pm, w) = find_witness_cycle(&g, &Hooks::default()).unwrap();
    assert_eq!(w.len(), 12);
    assert!(verify_witness(&g, &pm, &w).is_empty());
}

#[test]
fn parachute_edge_set_size() {
    for k in [1, 2, 3, 5] {
        let g = gen_parachute(k).unwrap();
        let run = find_witness_cycle_run(&g, &parachute_hooks(k)).unwrap();
        assert_eq!(run.usage.used_darts(), 13 * k + 6, "k={k}");
        assert!(verify_witness(&g, &run.ports, &run.witness).is_empty());
    }
}

#[test]
#[ignore = "no right-hand cycle uses the whole parachute edge set; see README"]
fn parachute_witness_is_exact() {
    for k in [1, 2, 3, 5] {
        let g = gen_parachute(k).unwrap();
        let (_, w) = find_witness_cycle(&g, &parachute_hooks(k)).unwrap();
        assert_eq!(w.len(), 13 * k + 6, "k={k}");
    }
}
