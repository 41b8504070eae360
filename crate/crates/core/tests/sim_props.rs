mod common;

use common::{arb_graph, arb_labeled, config};
use porttour_core::*;
use proptest::prelude::*;
use proptest::sample::Index;

proptest! {
    #![proptest_config(config())]

    #[test]
    fn simulation_is_deterministic((g, pm) in arb_labeled(2, 40), v in any::<Index>()) {
        let v = v.index(g.n());
        let a = simulate_rh(&g, &pm, v, 0).unwrap();
        let b = simulate_rh(&g, &pm, v, 0).unwrap();
        prop_assert_eq!(a.write(), b.write());
        let lab = constmem_label_run(&g).unwrap();
        let x = simulate_fsa(&g, &lab.ports, &automaton_a_plus(), v).unwrap();
        let y = simulate_fsa(&g, &lab.ports, &automaton_a_plus(), v).unwrap();
        prop_assert_eq!(x.write(), y.write());
    }

    #[test]
    fn rh_period_is_the_cycle_length((g, pm) in arb_labeled(2, 40), v in any::<Index>(), p in any::<Index>()) {
        let v = v.index(g.n());
        let entry = 1 + p.index(g.degree(v));
        let cs = decompose_cycles(&g, &pm, &UsageMap::from_roles(vec![Usage::TwoWay; g.m()])).unwrap();
        let arrival = g.twin(pm.exit_dart(v, entry));
        let c = cs.label(arrival).unwrap();
        let t = simulate_rh(&g, &pm, v, entry).unwrap();
        prop_assert_eq!(t.period, cs.cycle(c).len());
        prop_assert_eq!(t.transient, 0);
    }

    #[test]
    fn oblivious_automaton_agrees_with_rh((g, pm) in arb_labeled(2, 40), v in any::<Index>()) {
        let v = v.index(g.n());
        let a = simulate_rh(&g, &pm, v, 0).unwrap();
        let b = simulate_fsa(&g, &pm, &automaton_rh(), v).unwrap();
        prop_assert_eq!(a.period, b.period);
        prop_assert_eq!(a.unvisited, b.unvisited);
    }

    #[test]
    fn runs_stay_under_the_configuration_cap(g in arb_graph(2, 40), v in any::<Index>()) {
        let v = v.index(g.n());
        let lab = constmem_label_run(&g).unwrap();
        let a = automaton_a_plus();
        let t = simulate_fsa(&g, &lab.ports, &a, v).unwrap();
        prop_assert!(t.steps.len() <= a.states.len() * 2 * g.m());
    }

    #[test]
    fn steps_are_edge_consistent(g in arb_graph(2, 40)) {
        let lab = constmem_label_run(&g).unwrap();
        let t = simulate_fsa(&g, &lab.ports, &automaton_a_plus(), 0).unwrap();
        for w in t.steps.windows(2) {
            let d = lab.ports.exit_dart(w[0].node, w[0].exit);
            prop_assert_eq!(g.head(d), w[1].node);
            prop_assert_eq!(lab.ports.port_of(g.twin(d)), w[1].entry);
        }
    }

    #[test]
    fn trace_file_round_trips((g, pm) in arb_labeled(2, 30), v in any::<Index>()) {
        let v = v.index(g.n());
        let t = simulate_rh(&g, &pm, v, 0).unwrap();
        prop_assert_eq!(AgentTrace::parse(&t.write(), g.n()).unwrap(), t);
        let lab = constmem_label_run(&g).unwrap();
        let t = simulate_fsa(&g, &lab.ports, &automaton_a_plus(), v).unwrap();
        prop_assert_eq!(AgentTrace::parse(&t.write(), g.n()).unwrap(), t);
    }

    #[test]
    fn perturbed_exit_is_flagged(g in arb_graph(3, 30), i in any::<Index>()) {
        let (pm, w) = find_witness_cycle(&g, &Hooks::default()).unwrap();
        let branching: Vec<usize> = (0..w.len()).filter(|&k| g.degree(w.steps[k].0) >= 2).collect();
        prop_assume!(!branching.is_empty());
        let k = *i.get(&branching);
        let mut bad = w.clone();
        let (v, p) = bad.steps[k];
        bad.steps[k].1 = p % g.degree(v) + 1;
        let found = verify_witness(&g, &pm, &bad);
        prop_assert!(
            found.iter().any(|x| matches!(x, Violation::RightHand { index, .. } if *index == k)),
            "{:?}", found
        );
    }
}

#[test]
fn missing_node_is_named() {
    let g = gen_path(3).unwrap();
    let pm = PortMap::ascending(&g);
    let w = WitnessCycle {
        steps: vec![(0, 1), (1, 1)],
    };
    let found = verify_witness(&g, &pm, &w);
    assert!(found.contains(&Violation::Uncovered { node: 2 }), "{found:?}");
}

#[test]
fn empty_cycle_is_flagged() {
    let g = gen_path(2).unwrap();
    let w = WitnessCycle { steps: Vec::new() };
    assert_eq!(verify_witness(&g, &PortMap::ascending(&g), &w), vec![Violation::Empty]);
}

#[test]
fn fresh_agent_leaves_by_port_one() {
    let g = gen_star(4).unwrap();
    let t = simulate_rh(&g, &PortMap::ascending(&g), 0, 0).unwrap();
    assert_eq!(t.steps[0].exit, 1);
    assert!(t.write().starts_with("period=6 transient=0\n"));
}

#[test]
fn bad_start_is_rejected() {
    let g = gen_path(2).unwrap();
    assert!(matches!(simulate_rh(&g, &PortMap::ascending(&g), 5, 0), Err(Error::BadParams(_))));
    assert!(matches!(simulate_rh(&g, &PortMap::ascending(&g), 0, 3), Err(Error::BadParams(_))));
}
