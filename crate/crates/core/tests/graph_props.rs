mod common;

use common::{arb_graph, arb_labeled, config};
use porttour_core::io::{
    export_dot, parse_graph, parse_graph_with_usage, parse_labeled, parse_witness, write_graph,
    write_graph_with_usage, write_labeled, write_witness,
};
use porttour_core::*;
use proptest::prelude::*;
use proptest::sample::Index;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn successor(pm: &PortMap, v: usize, w: usize) -> usize {
    let row = pm.order(v);
    let i = row.iter().position(|&x| x == w).unwrap();
    row[(i + 1) % row.len()]
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn ports_are_a_bijection((g, pm) in arb_labeled(2, 30)) {
        for v in 0..g.n() {
            let d = g.degree(v);
            prop_assert_eq!(pm.degree(v), d);
            let mut row = pm.order(v).to_vec();
            row.sort_unstable();
            prop_assert_eq!(&row[..], g.neighbors(v));
            for p in 1..=d {
                let w = pm.neighbor(v, p);
                prop_assert_eq!(pm.port(&g, v, w), Some(p));
                let dart = pm.exit_dart(v, p);
                prop_assert_eq!(g.tail(dart), v);
                prop_assert_eq!(g.head(dart), w);
                prop_assert_eq!(pm.port_of(dart), p);
            }
        }
    }

    #[test]
    fn darts_pair_up((g, _) in arb_labeled(2, 30)) {
        prop_assert_eq!(g.num_darts(), 2 * g.m());
        for d in 0..g.num_darts() {
            let t = g.twin(d);
            prop_assert_eq!(g.twin(t), d);
            prop_assert_eq!(g.head(d), g.tail(t));
            prop_assert_eq!(g.edge_of(d), g.edge_of(t));
        }
    }

    #[test]
    fn rotation_touches_only_three_successors(
        (g, pm) in arb_labeled(4, 25),
        pick in any::<Index>(),
        seed in any::<u64>(),
    ) {
        let rich: Vec<usize> = (0..g.n()).filter(|&v| g.degree(v) >= 3).collect();
        prop_assume!(!rich.is_empty());
        let v = *pick.get(&rich);
        let nb = g.neighbors(v);
        let mut shuffled = nb.to_vec();
        shuffled.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        let xs = [shuffled[0], shuffled[1], shuffled[2]];

        let r = rotate_successor(&g, &pm, v, xs).unwrap();
        for u in 0..g.n() {
            if u != v {
                prop_assert_eq!(r.order(u), pm.order(u));
            }
        }
        let mut row = r.order(v).to_vec();
        row.sort_unstable();
        prop_assert_eq!(&row[..], nb);
        for &w in nb {
            if !xs.contains(&w) {
                prop_assert_eq!(successor(&r, v, w), successor(&pm, v, w));
            }
        }
        let mut before: Vec<usize> = xs.iter().map(|&x| successor(&pm, v, x)).collect();
        let mut after: Vec<usize> = xs.iter().map(|&x| successor(&r, v, x)).collect();
        prop_assert!(xs.iter().all(|&x| successor(&r, v, x) != successor(&pm, v, x)));
        before.sort_unstable();
        after.sort_unstable();
        prop_assert_eq!(before, after);
        prop_assert_eq!(rotate_successor(&g, &r, v, xs).unwrap(), pm);
    }

    #[test]
    fn graph_file_round_trips(g in arb_graph(1, 40)) {
        prop_assert_eq!(parse_graph(&write_graph(&g)).unwrap(), g);
    }

    #[test]
    fn labeled_file_round_trips((g, pm) in arb_labeled(1, 40)) {
        let (g2, pm2) = parse_labeled(&write_labeled(&g, &pm)).unwrap();
        prop_assert_eq!(g2, g);
        prop_assert_eq!(pm2, pm);
    }

    #[test]
    fn usage_file_round_trips(g in arb_graph(2, 30), roles in prop::collection::vec(0u8..4, 100)) {
        let roles: Vec<Usage> = (0..g.m())
            .map(|e| match roles[e % roles.len()] {
                0 => Usage::Unused,
                1 => Usage::TwoWay,
                2 => Usage::SingleForward,
                _ => Usage::SingleBackward,
            })
            .collect();
        let u = UsageMap::from_roles(roles);
        let (g2, u2) = parse_graph_with_usage(&write_graph_with_usage(&g, &u)).unwrap();
        prop_assert_eq!(g2, g);
        prop_assert_eq!(u2, Some(u));
    }

    #[test]
    fn witness_file_round_trips(steps in prop::collection::vec((0usize..1000, 1usize..20), 0..50)) {
        prop_assert_eq!(parse_witness(&write_witness(&steps)).unwrap(), steps);
    }

    #[test]
    fn dot_has_one_statement_per_edge((g, pm) in arb_labeled(2, 30)) {
        let dot = export_dot(&g, &pm, None);
        prop_assert_eq!(dot.matches(" -- ").count() + dot.matches(" -> ").count(), g.m());
    }
}

#[test]
fn disconnected_input_is_rejected() {
    assert!(matches!(parse_graph("4 3\n0 1\n0 2\n1 2\n"), Err(Error::Validation(_))));
}

#[test]
fn path_labeled_layout() {
    let g = Graph::from_edges(2, &[(0, 1)]).unwrap();
    assert_eq!(write_labeled(&g, &PortMap::ascending(&g)), "2 1\n0: 1\n1: 0\n");
}

#[test]
fn rotation_rejects_repeats() {
    let g = gen_complete(4).unwrap();
    let pm = PortMap::ascending(&g);
    assert!(matches!(rotate_successor(&g, &pm, 0, [1, 1, 2]), Err(Error::InvalidRotation { .. })));
    assert!(matches!(rotate_successor(&g, &pm, 0, [1, 2, 0]), Err(Error::InvalidRotation { .. })));
}
