//! Step-exact agent simulation and witness checking.

use std::collections::HashMap;
use std::fmt;
use std::fmt::Write as _;

use crate::constmem::{AgentState, Automaton};
use crate::error::{Error, Result};
use crate::graph::{Graph, PortMap};
use crate::rh::WitnessCycle;

/// One move: the agent is at `node` having entered through `entry` (0 when
/// just placed) in `state`, and leaves through `exit`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TraceStep {
    pub node: usize,
    pub entry: usize,
    pub state: AgentState,
    pub exit: usize,
}

/// A run up to the first repeated configuration. `steps[transient..]` is one
/// full period.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AgentTrace {
    pub steps: Vec<TraceStep>,
    pub transient: usize,
    pub period: usize,
    /// Nodes never reached during the period, ascending.
    pub unvisited: Vec<usize>,
}

impl AgentTrace {
    pub fn periodic_part(&self) -> &[TraceStep] {
        &self.steps[self.transient..]
    }

    pub fn covers_all(&self) -> bool {
        self.unvisited.is_empty()
    }

    /// Header `period=<L> transient=<t>` then `node entry state exit` lines.
    pub fn write(&self) -> String {
        let mut out = format!("period={} transient={}\n", self.period, self.transient);
        for s in &self.steps {
            let _ = writeln!(out, "{} {} {} {}", s.node, s.entry, s.state, s.exit);
        }
        out
    }

    /// Reads the format of [`AgentTrace::write`]. Coverage is not stored, so
    /// `unvisited` is recomputed against `n` nodes.
    pub fn parse(text: &str, n: usize) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'));
        let (hl, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            msg: "empty trace".into(),
        })?;
        let mut period = None;
        let mut transient = None;
        for tok in header.split_whitespace() {
            let (k, v) = tok.split_once('=').ok_or_else(|| Error::Parse {
                line: hl + 1,
                msg: format!("expected key=value, got {tok:?}"),
            })?;
            let v: usize = v.parse().map_err(|_| Error::Parse {
                line: hl + 1,
                msg: format!("bad number {v:?}"),
            })?;
            match k {
                "period" => period = Some(v),
                "transient" => transient = Some(v),
                _ => {
                    return Err(Error::Parse {
                        line: hl + 1,
                        msg: format!("unknown key {k:?}"),
                    })
                }
            }
        }
        let (period, transient) = period.zip(transient).ok_or(Error::Parse {
            line: hl + 1,
            msg: "header needs period and transient".into(),
        })?;
        let mut steps = Vec::new();
        for (i, l) in lines {
            let f: Vec<&str> = l.split_whitespace().collect();
            let bad = |msg: String| Error::Parse { line: i + 1, msg };
            if f.len() != 4 {
                return Err(bad(format!("expected 4 fields, got {}", f.len())));
            }
            let num = |s: &str| s.parse::<usize>().map_err(|_| bad(format!("bad number {s:?}")));
            steps.push(TraceStep {
                node: num(f[0])?,
                entry: num(f[1])?,
                state: f[2].parse().map_err(|_| bad(format!("unknown state {:?}", f[2])))?,
                exit: num(f[3])?,
            });
        }
        if transient + period != steps.len() {
            return Err(Error::Parse {
                line: hl + 1,
                msg: format!("header promises {} steps, found {}", transient + period, steps.len()),
            });
        }
        let unvisited = unvisited(n, &steps[transient..]);
        Ok(AgentTrace {
            steps,
            transient,
            period,
            unvisited,
        })
    }
}

fn unvisited(n: usize, period: &[TraceStep]) -> Vec<usize> {
    let mut seen = vec![false; n];
    for s in period {
        if s.node < n {
            seen[s.node] = true;
        }
    }
    (0..n).filter(|&v| !seen[v]).collect()
}

/// Memoryless right-hand walk from `start`, entered through `entry`. Entry 0
/// stands for a freshly placed agent and behaves like entry `deg(start)`: it
/// leaves through port 1. The walk is periodic from the first step.
pub fn simulate_rh(g: &Graph, pm: &PortMap, start: usize, entry: usize) -> Result<AgentTrace> {
    if start >= g.n() {
        return Err(Error::BadParams(format!("start node {start} out of range")));
    }
    let d0 = g.degree(start);
    if entry > d0 || d0 == 0 {
        return Err(Error::BadParams(format!("entry port {entry} invalid at node {start}")));
    }
    let entry = if entry == 0 { d0 } else { entry };
    let mut steps = Vec::new();
    let (mut v, mut p) = (start, entry);
    loop {
        let d = g.degree(v);
        let exit = p % d + 1;
        steps.push(TraceStep {
            node: v,
            entry: p,
            state: AgentState::Rh,
            exit,
        });
        let dart = pm.exit_dart(v, exit);
        (v, p) = (g.head(dart), pm.port_of(g.twin(dart)));
        if (v, p) == (start, entry) {
            break;
        }
    }
    let unvisited = unvisited(g.n(), &steps);
    Ok(AgentTrace {
        period: steps.len(),
        transient: 0,
        steps,
        unvisited,
    })
}

/// Runs automaton `a` from `start` until a `(state, node, entry)`
/// configuration repeats. Fails if a transition is undefined or if the run
/// exceeds `|states| * 2|E|` steps.
pub fn simulate_fsa(g: &Graph, pm: &PortMap, a: &Automaton, start: usize) -> Result<AgentTrace> {
    simulate_fsa_from(g, pm, a, start, a.initial, 0)
}

/// [`simulate_fsa`] from an explicit configuration.
pub fn simulate_fsa_from(
    g: &Graph,
    pm: &PortMap,
    a: &Automaton,
    start: usize,
    state: AgentState,
    entry: usize,
) -> Result<AgentTrace> {
    if start >= g.n() {
        return Err(Error::BadParams(format!("start node {start} out of range")));
    }
    let cap = a.states.len() * 2 * g.m() + 1;
    let mut seen: HashMap<(AgentState, usize, usize), usize> = HashMap::new();
    let mut steps = Vec::new();
    let (mut s, mut v, mut p) = (state, start, entry);
    loop {
        if let Some(&first) = seen.get(&(s, v, p)) {
            let unvisited = unvisited(g.n(), &steps[first..]);
            return Ok(AgentTrace {
                period: steps.len() - first,
                transient: first,
                steps,
                unvisited,
            });
        }
        if steps.len() > cap {
            return Err(Error::Internal(format!("no repeat within {cap} steps")));
        }
        seen.insert((s, v, p), steps.len());
        let (s2, exit) = a.step(s, p, g.degree(v))?;
        steps.push(TraceStep {
            node: v,
            entry: p,
            state: s,
            exit,
        });
        let dart = pm.exit_dart(v, exit);
        (s, v, p) = (s2, g.head(dart), pm.port_of(g.twin(dart)));
    }
}

/// A reason a witness cycle fails to check out.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    Empty,
    /// Step `index` names a node or port that does not exist.
    BadStep { index: usize },
    /// The exit at step `index` is not the right-hand successor of the entry
    /// from the previous step.
    RightHand { index: usize, expected: usize, found: usize },
    /// Step `index` is not at the node the previous step leads to.
    Broken { index: usize, expected: usize, found: usize },
    Uncovered { node: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Empty => write!(f, "empty cycle"),
            Violation::BadStep { index } => write!(f, "step {index}: no such node or port"),
            Violation::RightHand { index, expected, found } => {
                write!(f, "step {index}: exit port {found}, right-hand rule gives {expected}")
            }
            Violation::Broken { index, expected, found } => {
                write!(f, "step {index}: at node {found}, previous step leads to {expected}")
            }
            Violation::Uncovered { node } => write!(f, "node {node} not visited"),
        }
    }
}

/// Replays `w` against `pm`: every step must follow the right-hand rule from
/// the previous one (cyclically), and every node must be visited. Returns
/// all violations; empty means the cycle is a witness.
pub fn verify_witness(g: &Graph, pm: &PortMap, w: &WitnessCycle) -> Vec<Violation> {
    let steps = &w.steps;
    if steps.is_empty() {
        return if g.n() <= 1 { Vec::new() } else { vec![Violation::Empty] };
    }
    let mut out = Vec::new();
    let ok: Vec<bool> = steps
        .iter()
        .map(|&(v, p)| v < g.n() && (1..=g.degree(v)).contains(&p))
        .collect();
    for (i, &good) in ok.iter().enumerate() {
        if !good {
            out.push(Violation::BadStep { index: i });
        }
    }
    let len = steps.len();
    for i in 0..len {
        let j = (i + 1) % len;
        if !ok[i] || !ok[j] {
            continue;
        }
        let (v, p) = steps[i];
        let dart = pm.exit_dart(v, p);
        let (u, entry) = (g.head(dart), pm.port_of(g.twin(dart)));
        let (nu, np) = steps[j];
        if nu != u {
            out.push(Violation::Broken {
                index: j,
                expected: u,
                found: nu,
            });
            continue;
        }
        let expected = entry % g.degree(u) + 1;
        if np != expected {
            out.push(Violation::RightHand {
                index: j,
                expected,
                found: np,
            });
        }
    }
    let mut seen = vec![false; g.n()];
    for (i, &(v, _)) in steps.iter().enumerate() {
        if ok[i] {
            seen[v] = true;
        }
    }
    out.extend((0..g.n()).filter(|&v| !seen[v]).map(|node| Violation::Uncovered { node }));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constmem::automaton_rh;

    #[test]
    fn p2_alternates() {
        let g = Graph::from_edges(2, &[(0, 1)]).unwrap();
        let pm = PortMap::ascending(&g);
        let t = simulate_rh(&g, &pm, 0, 1).unwrap();
        assert_eq!(t.period, 2);
        assert_eq!(t.steps[1].node, 1);
        assert!(t.covers_all());
    }

    #[test]
    fn fsa_rh_matches_simulate_rh() {
        let g = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (0, 2)]).unwrap();
        let pm = PortMap::ascending(&g);
        let a = simulate_rh(&g, &pm, 0, 0).unwrap();
        let b = simulate_fsa(&g, &pm, &automaton_rh(), 0).unwrap();
        assert_eq!(b.period, a.period);
    }

    #[test]
    fn trace_round_trip() {
        let g = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let t = simulate_rh(&g, &PortMap::ascending(&g), 1, 0).unwrap();
        assert_eq!(AgentTrace::parse(&t.write(), 3).unwrap(), t);
    }
}
