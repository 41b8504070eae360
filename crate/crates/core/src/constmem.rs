//! Port labeling for an agent with constant memory.
//!
//! The agent walks an Euler tour of a spanning tree built from the
//! three-layer partition: port 1 leads to the parent, ports `2..=i+1` to the
//! `i` children in decreasing subtree size, and everything else is outside
//! the tree. Probing the first outside port costs a round trip (a penalty);
//! leaf and extended-leaf recognition states skip most of those probes, and
//! selected leaves get their parent edge on port 2 so that it passes for a
//! penalty edge.

use std::cmp::Reverse;
use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::graph::{Graph, PortMap};
use crate::three_layer::{three_layer_partition, ThreeLayerPartition};
use crate::witness::SpanningTree;

/// Role of a node in the constant-memory tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NodeClass {
    /// In `X`: every incident edge is a tree edge.
    Saturated,
    /// In `Y`, on a tree path between two saturated nodes.
    Bonding,
    /// Any other node of `Y`.
    Local,
    /// In `Z`, hung below a `Y` neighbor.
    ZLeaf,
}

/// Spanning tree with node classes and the leaves that get swapped ports.
#[derive(Debug, Clone)]
pub struct ClassifiedTree {
    /// Children are kept in port order: larger subtrees first, ties by id.
    pub tree: SpanningTree,
    pub class: Vec<NodeClass>,
    /// Number of nodes in each subtree.
    pub size: Vec<usize>,
    /// Leaves whose parent edge moves to port 2, ascending.
    pub sham: Vec<usize>,
    pub partition: ThreeLayerPartition,
}

impl ClassifiedTree {
    pub fn n(&self) -> usize {
        self.class.len()
    }

    pub fn is_leaf(&self, v: usize) -> bool {
        self.tree.children[v].is_empty()
    }

    pub fn bonding_count(&self) -> usize {
        self.class.iter().filter(|&&c| c == NodeClass::Bonding).count()
    }

    pub fn saturated_count(&self) -> usize {
        self.class.iter().filter(|&&c| c == NodeClass::Saturated).count()
    }

    fn is_y(&self, v: usize) -> bool {
        matches!(self.class[v], NodeClass::Bonding | NodeClass::Local)
    }

    /// Tree neighbor reached through port 1: the parent, or the only tree
    /// neighbor of the root.
    pub fn up(&self, v: usize) -> Option<usize> {
        match self.tree.parent[v] {
            Some(p) => Some(p),
            None => self.tree.children[v].first().copied(),
        }
    }

    /// Children reached through ports `2..`, empty at the root.
    pub fn down(&self, v: usize) -> &[usize] {
        if v == self.tree.root {
            &[]
        } else {
            &self.tree.children[v]
        }
    }
}

/// Three-layer partition of `g`, its backbone plus one edge from every `Z`
/// node to its lowest `Y` neighbor, rooted at the lowest-id leaf.
pub fn build_classified_tree(g: &Graph) -> Result<ClassifiedTree> {
    let n = g.n();
    let partition = three_layer_partition(g)?;
    let mut class = vec![NodeClass::Local; n];
    for &v in &partition.x {
        class[v] = NodeClass::Saturated;
    }
    for &v in &partition.z {
        class[v] = NodeClass::ZLeaf;
    }
    let mut edges = partition.backbone.clone();
    for &z in &partition.z {
        let y = g
            .neighbors(z)
            .iter()
            .copied()
            .find(|&w| matches!(class[w], NodeClass::Local))
            .ok_or_else(|| Error::Internal(format!("Z node {z} has no Y neighbor")))?;
        edges.push((z.min(y), z.max(y)));
    }
    let mut tdeg = vec![0usize; n];
    for &(a, b) in &edges {
        tdeg[a] += 1;
        tdeg[b] += 1;
    }
    let root = (0..n).find(|&v| tdeg[v] == 1).unwrap_or(0);
    let mut tree = SpanningTree::from_edges(n, &edges, root)?;

    let mut size = vec![1usize; n];
    let mut xs = vec![0usize; n];
    for &v in tree.nodes.iter().rev() {
        if class[v] == NodeClass::Saturated {
            xs[v] += 1;
        }
        if let Some(p) = tree.parent[v] {
            size[p] += size[v];
            xs[p] += xs[v];
        }
    }
    for c in tree.children.iter_mut() {
        c.sort_by_key(|&w| (Reverse(size[w]), w));
    }
    let total_x = partition.x.len();
    for v in 0..n {
        if class[v] != NodeClass::Local {
            continue;
        }
        let below = tree.children[v].iter().filter(|&&c| xs[c] > 0).count();
        let above = usize::from(total_x > xs[v]);
        if below + above >= 2 {
            class[v] = NodeClass::Bonding;
        }
    }

    let mut ct = ClassifiedTree {
        tree,
        class,
        size,
        sham: Vec::new(),
        partition,
    };
    ct.sham = (0..n).filter(|&w| swap_eligible(&ct, w)).collect();
    Ok(ct)
}

fn swap_eligible(ct: &ClassifiedTree, w: usize) -> bool {
    if ct.class[w] != NodeClass::ZLeaf || w == ct.tree.root || !ct.is_leaf(w) {
        return false;
    }
    let Some(u) = ct.tree.parent[w] else {
        return false;
    };
    let kids = ct.down(u);
    let at = kids.iter().position(|&c| c == w).expect("child");
    match ct.class[u] {
        // the only leaf child of a bonding node; it comes after the larger
        // subtrees so its port is at least 3
        NodeClass::Bonding => at > 0 && kids.iter().filter(|&&c| ct.is_leaf(c)).count() == 1,
        // the only child of a local node hanging from a saturated node, with
        // nothing but leaves after it
        NodeClass::Local => {
            if kids.len() != 1 {
                return false;
            }
            let Some(s) = ct.tree.parent[u] else {
                return false;
            };
            if ct.class[s] != NodeClass::Saturated {
                return false;
            }
            let sibs = ct.down(s);
            let j = sibs.iter().position(|&c| c == u).expect("child");
            if !sibs[j + 1..].iter().all(|&c| ct.is_leaf(c)) {
                return false;
            }
            if sibs.len() >= 2 {
                return true;
            }
            // `s` then reports itself as an extended leaf, which its parent
            // may only believe if everything after `s` is that small
            match ct.tree.parent[s] {
                None => true,
                Some(t) if t == ct.tree.root => true,
                Some(t) => {
                    let up = ct.down(t);
                    let k = up.iter().position(|&c| c == s).expect("child");
                    up[k + 1..].iter().all(|&c| ct.size[c] <= 2)
                }
            }
        }
        _ => false,
    }
}

/// Port 1 to the parent (to the only neighbor at the root), then the
/// children in order, then the remaining edges by ascending neighbor id.
pub fn assign_initial_ports(g: &Graph, ct: &ClassifiedTree) -> Result<PortMap> {
    let order = (0..g.n()).map(|v| initial_row(g, ct, v)).collect();
    PortMap::new(g, order)
}

fn initial_row(g: &Graph, ct: &ClassifiedTree, v: usize) -> Vec<usize> {
    let mut row: Vec<usize> = ct.up(v).into_iter().collect();
    row.extend_from_slice(ct.down(v));
    let mut placed = row.clone();
    placed.sort_unstable();
    row.extend(g.neighbors(v).iter().filter(|w| placed.binary_search(w).is_err()));
    row
}

/// Outside edge used by a swapped leaf: its lowest `Y` neighbor other than
/// the parent.
fn outside_target(g: &Graph, ct: &ClassifiedTree, w: usize) -> Result<usize> {
    let p = ct.tree.parent[w];
    g.neighbors(w)
        .iter()
        .copied()
        .find(|&u| Some(u) != p && ct.is_y(u))
        .ok_or(Error::MissingOutsideEdge(w))
}

/// Moves the parent edge of every leaf in `ct.sham` to port 2 and its
/// outside edge `e` to port 1. At the far end `v` of `e`, a horizontal edge
/// outside the tree takes the first port after the children so that `e` is
/// never probed. Returns the new numbering and the sham edges as
/// `(leaf, parent)`.
pub fn apply_port_swaps(g: &Graph, ct: &ClassifiedTree, pm: &PortMap) -> Result<(PortMap, Vec<(usize, usize)>)> {
    let mut order: Vec<Vec<usize>> = pm.orders().to_vec();
    let mut sham = Vec::with_capacity(ct.sham.len());
    for &w in &ct.sham {
        let parent = ct.tree.parent[w].ok_or_else(|| Error::Internal(format!("swapped leaf {w} is the root")))?;
        let v = outside_target(g, ct, w)?;
        let mut row = vec![v, parent];
        row.extend(g.neighbors(w).iter().filter(|&&u| u != v && u != parent));
        order[w] = row;
        sham.push((w, parent));

        let fixed = 1 + ct.down(v).len();
        let guard = g
            .neighbors(v)
            .iter()
            .copied()
            .find(|&u| ct.is_y(u) && !ct.tree.contains_edge(u, v))
            .ok_or_else(|| Error::Internal(format!("Y node {v} has no horizontal edge outside the tree")))?;
        let row = &mut order[v];
        let at = row.iter().position(|&u| u == guard).expect("neighbor");
        if at < fixed {
            return Err(Error::Internal(format!("guard edge of {v} is a tree edge")));
        }
        let guard = row.remove(at);
        row.insert(fixed, guard);
    }
    Ok((PortMap::new(g, order)?, sham))
}

/// States of the constant-memory agent. `Rh` is the single state of the
/// memoryless right-hand agent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AgentState {
    Rh,
    WakeUp,
    /// Entering what should be a child.
    Down,
    /// Back from a child, or arriving from the root's side.
    Up,
    /// Returning over a penalty edge.
    Bounce,
    /// Back from a node recognised as a leaf.
    LeafUp,
    /// Entering a child known to be a leaf.
    LeafDown,
    /// Checking whether the parent of a leaf has a second child.
    ExtProbe,
    /// Returning from that check over a penalty edge.
    LBounce,
    /// Back from an extended leaf (a node whose only child is a leaf).
    ExtUp,
    /// Entering a child known to have at most one child, itself a leaf.
    ExtDown,
    /// Entering the child of such a node.
    ExtChild,
    /// Returning from it.
    ExtReturn,
}

const STATE_NAMES: [(AgentState, &str); 13] = [
    (AgentState::Rh, "rh"),
    (AgentState::WakeUp, "wake"),
    (AgentState::Down, "down"),
    (AgentState::Up, "up"),
    (AgentState::Bounce, "bounce"),
    (AgentState::LeafUp, "leaf-up"),
    (AgentState::LeafDown, "leaf-down"),
    (AgentState::ExtProbe, "ext-probe"),
    (AgentState::LBounce, "leaf-bounce"),
    (AgentState::ExtUp, "ext-up"),
    (AgentState::ExtDown, "ext-down"),
    (AgentState::ExtChild, "ext-child"),
    (AgentState::ExtReturn, "ext-return"),
];

impl AgentState {
    pub fn name(self) -> &'static str {
        STATE_NAMES.iter().find(|(s, _)| *s == self).expect("named").1
    }

    /// True for states in which the agent steps onto what it takes to be a
    /// child; over an outside edge such a step is a penalty probe.
    pub fn is_probe(self) -> bool {
        matches!(
            self,
            AgentState::Down | AgentState::LeafDown | AgentState::ExtProbe | AgentState::ExtDown | AgentState::ExtChild
        )
    }
}

impl fmt::Display for AgentState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AgentState {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        STATE_NAMES
            .iter()
            .find(|(_, n)| *n == s)
            .map(|(st, _)| *st)
            .ok_or_else(|| Error::BadParams(format!("unknown agent state {s:?}")))
    }
}

/// Transition function: `(state, entry port, degree) -> (state, exit port)`,
/// `None` where undefined. Entry port 0 means the agent has just been placed.
pub type Transition = fn(AgentState, usize, usize) -> Option<(AgentState, usize)>;

/// A finite-state agent.
#[derive(Clone, Copy)]
pub struct Automaton {
    pub name: &'static str,
    pub states: &'static [AgentState],
    pub initial: AgentState,
    /// State whose exits follow the right-hand rule.
    pub cruise: AgentState,
    pub transition: Transition,
}

impl fmt::Debug for Automaton {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Automaton")
            .field("name", &self.name)
            .field("states", &self.states.len())
            .finish()
    }
}

impl Automaton {
    pub fn step(&self, s: AgentState, entry: usize, degree: usize) -> Result<(AgentState, usize)> {
        (self.transition)(s, entry, degree)
            .filter(|&(_, p)| (1..=degree).contains(&p))
            .ok_or_else(|| Error::UndefinedTransition {
                state: s.to_string(),
                port: entry,
                degree,
            })
    }
}

fn rh_transition(s: AgentState, p: usize, d: usize) -> Option<(AgentState, usize)> {
    (s == AgentState::Rh && p <= d && d > 0).then(|| (AgentState::Rh, if p == 0 { 1 } else { p % d + 1 }))
}

/// The memoryless right-hand agent as a one-state automaton.
pub fn automaton_rh() -> Automaton {
    Automaton {
        name: "rh",
        states: &[AgentState::Rh],
        initial: AgentState::Rh,
        cruise: AgentState::Rh,
        transition: rh_transition,
    }
}

fn next_child(p: usize, d: usize, down: AgentState) -> (AgentState, usize) {
    if p + 1 > d {
        (AgentState::Up, 1)
    } else {
        (down, p + 1)
    }
}

fn a_plus_transition(s: AgentState, p: usize, d: usize) -> Option<(AgentState, usize)> {
    use AgentState::*;
    if d == 0 || p > d || (p == 0 && s != WakeUp) {
        return None;
    }
    Some(match (s, p) {
        (WakeUp, _) => (Up, 1),
        (Up | LeafUp | ExtUp, 1) => next_child(1, d, Down),
        (Up, _) => next_child(p, d, Down),
        (Down, 1) if d == 1 => (LeafUp, 1),
        (Down, 1) => (Down, 2),
        (LeafDown | ExtProbe, 1) => (LeafUp, 1),
        (ExtDown, 1) if d == 1 => (LeafUp, 1),
        (ExtDown, 1) => (ExtChild, 2),
        (ExtChild, 1) => (ExtReturn, 1),
        (Down | LeafDown | ExtDown | ExtChild, _) => (Bounce, p),
        (ExtProbe, _) => (LBounce, p),
        (Bounce, 2) => (LeafUp, 1),
        (Bounce, _) => (Up, 1),
        (LeafUp, 2) if d < 3 => (ExtUp, 1),
        (LeafUp, 2) => (ExtProbe, 3),
        (LeafUp, _) => next_child(p, d, LeafDown),
        (LBounce | ExtReturn, _) => (ExtUp, 1),
        (ExtUp, _) => next_child(p, d, ExtDown),
        (Rh, _) => return None,
    })
}

/// The tree-walking agent with leaf and extended-leaf recognition and a
/// wake-up state that first leaves through port 1.
pub fn automaton_a_plus() -> Automaton {
    use AgentState::*;
    Automaton {
        name: "a-plus",
        states: &[
            WakeUp, Down, Up, Bounce, LeafUp, LeafDown, ExtProbe, LBounce, ExtUp, ExtDown, ExtChild, ExtReturn,
        ],
        initial: WakeUp,
        cruise: Up,
        transition: a_plus_transition,
    }
}

/// Output of [`constmem_label_run`].
#[derive(Debug, Clone)]
pub struct ConstmemLabeling {
    pub ports: PortMap,
    pub tree: ClassifiedTree,
    /// `(leaf, parent)` for every swapped leaf.
    pub sham: Vec<(usize, usize)>,
    pub predicted: Prediction,
}

/// Tour predicted from the tree alone.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Prediction {
    /// `2 (n - 1) + 2 * penalty probes`.
    pub length: usize,
    /// Nodes that probe an outside edge once per tour.
    pub penalized: Vec<bool>,
    /// Nodes the tour never reaches.
    pub missed: Vec<usize>,
}

impl Prediction {
    pub fn probes(&self) -> usize {
        self.penalized.iter().filter(|&&p| p).count()
    }

    /// Fraction of nodes that never probe.
    pub fn penalty_free_fraction(&self) -> f64 {
        let n = self.penalized.len();
        (n - self.probes()) as f64 / n as f64
    }
}

/// Labeling and predicted tour length for the constant-memory agent.
pub fn constmem_label(g: &Graph) -> Result<(PortMap, usize)> {
    constmem_label_run(g).map(|r| (r.ports, r.predicted.length))
}

/// [`constmem_label`] with the tree, the sham edges and the per-node
/// prediction.
pub fn constmem_label_run(g: &Graph) -> Result<ConstmemLabeling> {
    if g.n() < 2 {
        return Err(Error::BadParams("need at least two nodes".into()));
    }
    let ct = build_classified_tree(g)?;
    let pm = assign_initial_ports(g, &ct)?;
    let (ports, sham) = apply_port_swaps(g, &ct, &pm)?;
    let predicted = predict_tour(g, &ct)?;
    Ok(ConstmemLabeling {
        ports,
        tree: ct,
        sham,
        predicted,
    })
}

/// Runs the agent on the tree itself: port `1` goes up, ports `2..=i+1` go
/// to the children, a swapped leaf is entered through port 2, and every
/// other port is an outside edge that sends the agent straight back. Only
/// tree structure and degrees are consulted.
pub fn predict_tour(g: &Graph, ct: &ClassifiedTree) -> Result<Prediction> {
    let n = ct.n();
    let a = automaton_a_plus();
    let swapped = {
        let mut s = vec![false; n];
        for &w in &ct.sham {
            s[w] = true;
        }
        s
    };
    // port at `v` of the tree edge to `w`, and the target of port `p`
    let port_to = |v: usize, w: usize| -> usize {
        if swapped[v] {
            return 2;
        }
        if ct.up(v) == Some(w) {
            return 1;
        }
        2 + ct.down(v).iter().position(|&c| c == w).expect("tree neighbor")
    };
    let target = |v: usize, p: usize| -> Option<usize> {
        if swapped[v] {
            return (p == 2).then(|| ct.up(v).expect("parent"));
        }
        match p {
            1 => ct.up(v),
            _ => ct.down(v).get(p - 2).copied(),
        }
    };

    let r = ct.tree.root;
    let mut seen: HashMap<(AgentState, usize, usize), usize> = HashMap::new();
    let mut log: Vec<(usize, AgentState, bool)> = Vec::new();
    let (mut s, mut v, mut entry) = (a.initial, r, 0usize);
    let cap = a.states.len() * 2 * g.m() + 2;
    loop {
        if let Some(&start) = seen.get(&(s, v, entry)) {
            let period = &log[start..];
            let mut penalized = vec![false; n];
            let mut visited = vec![false; n];
            let mut length = 0;
            for &(u, _, probe) in period {
                visited[u] = true;
                if probe {
                    penalized[u] = true;
                    length += 2;
                } else {
                    length += 1;
                }
            }
            let missed = (0..n).filter(|&u| !visited[u]).collect();
            return Ok(Prediction {
                length,
                penalized,
                missed,
            });
        }
        if log.len() > cap {
            return Err(Error::Internal("tree model did not become periodic".into()));
        }
        seen.insert((s, v, entry), log.len());
        let (s2, p) = a.step(s, entry, g.degree(v))?;
        match target(v, p) {
            Some(w) => {
                log.push((v, s, false));
                (s, v, entry) = (s2, w, port_to(w, v));
            }
            None => {
                // outside edge: the far end sees a port other than 1 and
                // turns back at once
                if !s2.is_probe() {
                    return Err(Error::Internal(format!("node {v} leaves over an outside edge in state {s2}")));
                }
                let (back, q) = a.step(s2, 2, 2)?;
                debug_assert_eq!(q, 2);
                log.push((v, s, true));
                (s, entry) = (back, p);
            }
        }
    }
}

/// One amortisation case and the penalty-free share found in it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuditCase {
    pub case: char,
    /// Node the case is anchored at.
    pub anchor: usize,
    pub nodes: usize,
    pub free: usize,
    /// Required share as `(num, den)`; `None` when the case states none.
    pub required: Option<(usize, usize)>,
}

impl AuditCase {
    pub fn holds(&self) -> bool {
        self.required.is_none_or(|(a, b)| self.free * b >= a * self.nodes)
    }
}

/// Amortisation bookkeeping for a labeled tree and the nodes that probe.
#[derive(Debug, Clone, Default)]
pub struct AuditReport {
    pub cases: Vec<AuditCase>,
    pub saturated: usize,
    pub bonding: usize,
    /// Saturated nodes whose only child is a leaf.
    pub lone_leaves: usize,
    pub free_nodes: usize,
    pub n: usize,
}

impl AuditReport {
    pub fn violations(&self) -> Vec<&AuditCase> {
        self.cases.iter().filter(|c| !c.holds()).collect()
    }

    /// `bonding + lone leaves <= 3 * saturated - 2` whenever anything is
    /// saturated.
    pub fn global_holds(&self) -> bool {
        self.saturated == 0 || self.bonding + self.lone_leaves + 2 <= 3 * self.saturated
    }
}

/// Splits the tree into the local cases (a)-(f) and counts the nodes in each
/// that never probe:
///
/// * (a) a local node with at least two children, with its children: 1/3;
/// * (b) all extended leaves of a saturated node that has at least two: 1/2;
/// * (c) the single extended leaf of a saturated node and the leaves after
///   it: 1/4;
/// * (d) the leaf children of a saturated node without extended leaves, when
///   there are at least two: no bound;
/// * (e) the leaf children of a bonding node with at least two: 1/2;
/// * (f) the only leaf child of a bonding node: 1.
pub fn amortisation_audit(ct: &ClassifiedTree, penalized: &[bool]) -> AuditReport {
    let n = ct.n();
    let free = |v: usize| usize::from(!penalized[v]);
    let is_ext = |v: usize| ct.class[v] == NodeClass::Local && ct.down(v).len() == 1 && ct.is_leaf(ct.down(v)[0]);
    let mut rep = AuditReport {
        saturated: ct.saturated_count(),
        bonding: ct.bonding_count(),
        free_nodes: (0..n).filter(|&v| !penalized[v]).count(),
        n,
        ..Default::default()
    };
    let mut push = |case, anchor, nodes: &[usize], required| {
        rep.cases.push(AuditCase {
            case,
            anchor,
            nodes: nodes.len(),
            free: nodes.iter().map(|&v| free(v)).sum(),
            required,
        })
    };
    for v in 0..n {
        let kids = ct.down(v);
        match ct.class[v] {
            NodeClass::Local if kids.len() >= 2 => {
                let mut nodes = vec![v];
                nodes.extend_from_slice(kids);
                push('a', v, &nodes, Some((1, 3)));
            }
            NodeClass::Saturated => {
                let ext: Vec<usize> = kids.iter().copied().filter(|&c| is_ext(c)).collect();
                let leaves: Vec<usize> = kids.iter().copied().filter(|&c| ct.is_leaf(c)).collect();
                if ext.len() >= 2 {
                    let nodes: Vec<usize> = ext.iter().flat_map(|&u| [u, ct.down(u)[0]]).collect();
                    push('b', v, &nodes, Some((1, 2)));
                } else if ext.len() == 1 {
                    let mut nodes = vec![ext[0], ct.down(ext[0])[0]];
                    nodes.extend_from_slice(&leaves);
                    push('c', v, &nodes, Some((1, 4)));
                } else if leaves.len() >= 2 {
                    push('d', v, &leaves, None);
                }
            }
            NodeClass::Bonding => {
                let leaves: Vec<usize> = kids.iter().copied().filter(|&c| ct.is_leaf(c)).collect();
                match leaves.len() {
                    0 => {}
                    1 => push('f', v, &leaves, Some((1, 1))),
                    _ => push('e', v, &leaves, Some((1, 2))),
                }
            }
            _ => {}
        }
    }
    rep.lone_leaves = (0..n)
        .filter(|&v| ct.class[v] == NodeClass::Saturated && ct.down(v).len() == 1 && ct.is_leaf(ct.down(v)[0]))
        .count();
    rep
}
