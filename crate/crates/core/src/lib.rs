//! Port numberings that let memoryless and constant-memory agents explore
//! anonymous graphs periodically, together with agent simulators, graph
//! generators and a brute-force oracle for small instances.

pub mod constmem;
pub mod error;
pub mod generators;
pub mod graph;
pub mod io;
pub mod oracle;
pub mod rh;
pub mod sim;
pub mod three_layer;
pub mod util;
pub mod witness;

pub use error::{Error, Result};
pub use graph::{rotate_successor, DartId, DirectedEdge, EdgeId, Graph, NodeUsage, PortMap, Usage, UsageMap};
pub use three_layer::{three_layer_partition, three_layer_partition_with, verify_partition, PartitionOptions, ThreeLayerPartition};
pub use rh::{
    check_rh_traversable, decompose_cycles, eat_small, merge3, orient_singles, reduce_to_witness,
    reduce_to_witness_stats, witness_order_node, witness_port_map, CycleSet, ReductionStats, WitnessCycle,
};
pub use generators::{
    gen_complete, gen_cycle, gen_diamond, gen_diamond_chain, gen_grid, gen_parachute, gen_path, gen_petersen,
    gen_random_connected, gen_random_two_connected, gen_star, parachute_hooks, FamilySpec,
};
pub use oracle::{all_min_witnesses, brute_force_min_witness, oracle_workload, OracleResult};
pub use witness::{
    find_nonsaturating_tree, find_witness_cycle, find_witness_cycle_run, restore_parity, terse_cycles,
    terse_cycles_run, ComponentReport, Hooks, SpanningTree, StarForest, WitnessRun, WitnessStats,
};
pub use constmem::{
    amortisation_audit, apply_port_swaps, assign_initial_ports, automaton_a_plus, automaton_rh, build_classified_tree,
    constmem_label, constmem_label_run, predict_tour, AgentState, AuditCase, AuditReport, Automaton, ClassifiedTree,
    ConstmemLabeling, NodeClass, Prediction,
};
pub use sim::{simulate_fsa, simulate_fsa_from, simulate_rh, verify_witness, AgentTrace, TraceStep, Violation};
