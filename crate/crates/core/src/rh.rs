//! Right-hand-rule traversal: local traversability, witness port orders,
//! decomposition into RH-cycles and the two rewiring rules that merge cycles
//! into one spanning cycle.
//!
//! An agent that enters `v` by port `i` leaves by port `(i mod d_v) + 1`, so
//! at every node the cyclic port order decides which outgoing dart follows
//! each incoming dart.

use crate::error::{Error, Result};
use crate::graph::{rotate_row, DartId, Graph, PortMap, Usage, UsageMap};

const NONE: usize = usize::MAX;

/// Whether `v` can be passed by the right-hand rule using exactly the darts
/// marked used: either every incident edge is two-way, or `v` has as many
/// incoming as outgoing single edges and at least one of each.
pub fn check_rh_traversable(g: &Graph, usage: &UsageMap, v: usize) -> Result<bool> {
    let c = usage.node(g, v);
    if c.pending > 0 {
        return Err(Error::UnresolvedDirection(v));
    }
    Ok(c.two_way == g.degree(v) || (c.incoming == c.outgoing && c.incoming > 0))
}

/// Cyclic neighbor order at `v` under which every incoming dart is followed
/// by an outgoing one.
///
/// Layout: two-way edges, one outgoing single, unused edges, then the
/// remaining singles alternating `in, out, ..., in`. Within each block
/// neighbors are ascending. When every edge is two-way the ascending order is
/// returned.
pub fn witness_order_node(g: &Graph, usage: &UsageMap, v: usize) -> Result<Vec<usize>> {
    if !check_rh_traversable(g, usage, v)? {
        return Err(Error::NotTraversable(v));
    }
    if usage.node(g, v).two_way == g.degree(v) {
        return Ok(g.neighbors(v).to_vec());
    }
    let mut two_way = Vec::new();
    let mut unused = Vec::new();
    let mut incoming = Vec::new();
    let mut outgoing = Vec::new();
    for d in g.darts_from(v) {
        let w = g.head(d);
        match usage.get(g.edge_of(d)) {
            Usage::TwoWay => two_way.push(w),
            Usage::Unused => unused.push(w),
            _ if usage.dart_used(g, d) => outgoing.push(w),
            _ => incoming.push(w),
        }
    }
    let mut order = two_way;
    order.push(outgoing[0]);
    order.extend(unused);
    for (k, &w) in incoming.iter().enumerate() {
        order.push(w);
        if let Some(&o) = outgoing.get(k + 1) {
            order.push(o);
        }
    }
    Ok(order)
}

/// Witness order at every node, as a port map.
pub fn witness_port_map(g: &Graph, usage: &UsageMap) -> Result<PortMap> {
    let order = (0..g.n())
        .map(|v| witness_order_node(g, usage, v))
        .collect::<Result<Vec<_>>>()?;
    PortMap::new(g, order)
}

/// Gives every pending single edge a direction so that each node has as many
/// incoming as outgoing single edges.
///
/// Pending edges are consumed by closed walks, each starting at the lowest
/// node that still has one and always continuing to the lowest available
/// neighbor.
pub fn orient_singles(g: &Graph, usage: &UsageMap) -> Result<UsageMap> {
    let mut out = usage.clone();
    for v in 0..g.n() {
        if usage.node(g, v).pending % 2 == 1 {
            return Err(Error::OddParity(v));
        }
    }
    let mut cursor: Vec<usize> = (0..g.n()).map(|v| g.darts_from(v).start).collect();
    let mut next_pending = |out: &UsageMap, v: usize| -> Option<DartId> {
        let end = g.darts_from(v).end;
        while cursor[v] < end {
            let d = cursor[v];
            if out.get(g.edge_of(d)) == Usage::SinglePending {
                return Some(d);
            }
            cursor[v] += 1;
        }
        None
    };
    for v in 0..g.n() {
        while let Some(first) = next_pending(&out, v) {
            let mut d = first;
            loop {
                out.set_single(g, g.tail(d), g.head(d));
                let w = g.head(d);
                match next_pending(&out, w) {
                    Some(nd) => d = nd,
                    None => break,
                }
            }
        }
    }
    for v in 0..g.n() {
        let c = out.node(g, v);
        if c.incoming != c.outgoing {
            return Err(Error::Validation(format!(
                "oriented single edges unbalanced at node {v}"
            )));
        }
    }
    Ok(out)
}

/// Partition of the used darts into RH-cycles, ordered so that index 0 is the
/// largest cycle.
///
/// Cycles are ranked by length (longer first), then by their smallest
/// `(node, port)` step. Each cycle is stored starting at that smallest step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleSet {
    cycles: Vec<Vec<DartId>>,
    label: Vec<usize>,
}

impl CycleSet {
    fn from_cycles(g: &Graph, pm: &PortMap, mut cycles: Vec<Vec<DartId>>) -> Self {
        let key = |d: DartId| (g.tail(d), pm.port_of(d));
        for c in cycles.iter_mut() {
            let at = (0..c.len()).min_by_key(|&i| key(c[i])).unwrap_or(0);
            c.rotate_left(at);
        }
        cycles.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| key(a[0]).cmp(&key(b[0]))));
        let mut label = vec![NONE; g.num_darts()];
        for (i, c) in cycles.iter().enumerate() {
            for &d in c {
                label[d] = i;
            }
        }
        CycleSet { cycles, label }
    }

    pub fn len(&self) -> usize {
        self.cycles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cycles.is_empty()
    }

    pub fn cycles(&self) -> &[Vec<DartId>] {
        &self.cycles
    }

    pub fn cycle(&self, i: usize) -> &[DartId] {
        &self.cycles[i]
    }

    /// Index of the cycle containing dart `d`, if it is used.
    pub fn label(&self, d: DartId) -> Option<usize> {
        let l = self.label[d];
        (l != NONE).then_some(l)
    }

    /// Rank in the cycle order; larger is better, the largest cycle has the
    /// highest rank.
    pub fn rank(&self, i: usize) -> usize {
        self.cycles.len() - 1 - i
    }

    /// Total number of darts over all cycles.
    pub fn total_len(&self) -> usize {
        self.cycles.iter().map(Vec::len).sum()
    }

    /// Distinct nodes visited by cycle `i`, ascending.
    pub fn nodes_of(&self, g: &Graph, i: usize) -> Vec<usize> {
        let mut v: Vec<usize> = self.cycles[i].iter().map(|&d| g.tail(d)).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// Cycle `i` as `(node, exit port)` steps.
    pub fn steps(&self, g: &Graph, pm: &PortMap, i: usize) -> Vec<(usize, usize)> {
        self.cycles[i]
            .iter()
            .map(|&d| (g.tail(d), pm.port_of(d)))
            .collect()
    }
}

/// Follows the right-hand rule from every used dart not yet seen.
pub fn decompose_cycles(g: &Graph, pm: &PortMap, usage: &UsageMap) -> Result<CycleSet> {
    let mut seen = vec![false; g.num_darts()];
    let mut cycles = Vec::new();
    for start in 0..g.num_darts() {
        if seen[start] || !usage.dart_used(g, start) {
            continue;
        }
        let mut cyc = Vec::new();
        let mut d = start;
        loop {
            seen[d] = true;
            cyc.push(d);
            let nd = pm.rh_next(g, d);
            if !usage.dart_used(g, nd) {
                return Err(Error::InconsistentPortMap {
                    node: g.head(d),
                    msg: format!("arrival from {} leaves along unused edge to {}", g.tail(d), g.head(nd)),
                });
            }
            if nd == start {
                break;
            }
            if seen[nd] {
                return Err(Error::InconsistentPortMap {
                    node: g.head(d),
                    msg: "two arrivals share one departure".into(),
                });
            }
            d = nd;
        }
        cycles.push(cyc);
    }
    Ok(CycleSet::from_cycles(g, pm, cycles))
}

/// Rebuilds the cycles that contain any dart of `affected` under the new
/// port map; other cycles are copied unchanged.
fn rewire(g: &Graph, cs: &CycleSet, pm: &PortMap, affected: &[usize]) -> Result<CycleSet> {
    let mut cycles: Vec<Vec<DartId>> = Vec::new();
    let mut seen = vec![false; g.num_darts()];
    for (i, c) in cs.cycles.iter().enumerate() {
        if !affected.contains(&i) {
            cycles.push(c.clone());
        }
    }
    for &i in affected {
        for &start in &cs.cycles[i] {
            if seen[start] {
                continue;
            }
            let mut cyc = Vec::new();
            let mut d = start;
            loop {
                seen[d] = true;
                cyc.push(d);
                d = pm.rh_next(g, d);
                if d == start {
                    break;
                }
                if seen[d] || cs.label[d] == NONE {
                    return Err(Error::Internal("rewiring broke the cycle structure".into()));
                }
            }
            cycles.push(cyc);
        }
    }
    Ok(CycleSet::from_cycles(g, pm, cycles))
}

/// Darts arriving at `v` that belong to some cycle, in port order.
fn arrivals(g: &Graph, cs: &CycleSet, pm: &PortMap, v: usize) -> Vec<DartId> {
    (1..=pm.degree(v))
        .map(|p| g.twin(pm.exit_dart(v, p)))
        .filter(|&d| cs.label[d] != NONE)
        .collect()
}

/// Joins three different cycles through `v` into one by rotating the
/// successors of one arrival dart from each.
pub fn merge3(g: &Graph, cs: &CycleSet, pm: &PortMap, v: usize) -> Result<(CycleSet, PortMap)> {
    let mut picked: Vec<DartId> = Vec::new();
    let mut labels: Vec<usize> = Vec::new();
    let mut ins = arrivals(g, cs, pm, v);
    ins.sort_by_key(|&d| cs.label[d]);
    for d in ins {
        if !labels.contains(&cs.label[d]) {
            labels.push(cs.label[d]);
            picked.push(d);
        }
        if picked.len() == 3 {
            break;
        }
    }
    if picked.len() < 3 {
        return Err(Error::NotApplicable(format!(
            "node {v} lies on fewer than three cycles"
        )));
    }
    let xs = [g.tail(picked[0]), g.tail(picked[1]), g.tail(picked[2])];
    let npm = crate::graph::rotate_successor(g, pm, v, xs)?;
    let ncs = rewire(g, cs, &npm, &labels)?;
    Ok((ncs, npm))
}

/// Arrival darts of cycle `c` at `v` in the order the cycle passes them,
/// starting from the cycle's stored first dart.
fn passes(g: &Graph, cs: &CycleSet, c: usize, v: usize) -> Vec<usize> {
    cs.cycles[c]
        .iter()
        .enumerate()
        .filter(|&(_, &d)| g.head(d) == v)
        .map(|(i, _)| i)
        .collect()
}

/// Moves a loop of a smaller cycle that passes some node twice into a larger
/// cycle through the same node.
///
/// The smallest eligible cycle is chosen; at its first node (in cycle order)
/// that it passes twice and that lies on a larger cycle, the largest such
/// cycle receives the loop.
pub fn eat_small(g: &Graph, cs: &CycleSet, pm: &PortMap) -> Result<(CycleSet, PortMap)> {
    for c1 in (0..cs.len()).rev() {
        let mut tried = Vec::new();
        for &d in &cs.cycles[c1] {
            let v = g.head(d);
            if tried.contains(&v) {
                continue;
            }
            tried.push(v);
            let idx = passes(g, cs, c1, v);
            if idx.len() < 2 {
                continue;
            }
            let c2 = match arrivals(g, cs, pm, v)
                .into_iter()
                .map(|a| cs.label[a])
                .filter(|&l| l < c1)
                .min()
            {
                Some(l) => l,
                None => continue,
            };
            let ys: Vec<DartId> = arrivals(g, cs, pm, v)
                .into_iter()
                .filter(|&a| cs.label[a] == c2)
                .collect();
            let k = idx.len();
            let deg = pm.degree(v);
            let pos = |a: DartId| pm.port_of(g.twin(a)) - 1;
            for j in 0..k {
                let x = cs.cycles[c1][idx[j]];
                let z = cs.cycles[c1][idx[(j + 1) % k]];
                let rel = |a: DartId| (pos(a) + deg - pos(x)) % deg;
                if let Some(&y) = ys.iter().find(|&&y| rel(z) < rel(y)) {
                    let xs = [g.tail(y), g.tail(x), g.tail(z)];
                    let npm = crate::graph::rotate_successor(g, pm, v, xs)?;
                    let ncs = rewire(g, cs, &npm, &[c1, c2])?;
                    return Ok((ncs, npm));
                }
            }
            return Err(Error::Internal(format!(
                "no admissible arrival triple at node {v}"
            )));
        }
    }
    Err(Error::NotApplicable("no cycle passes a shared node twice".into()))
}

/// A closed right-hand walk given as `(node, exit port)` steps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessCycle {
    pub steps: Vec<(usize, usize)>,
}

impl WitnessCycle {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Distinct nodes on the walk, ascending.
    pub fn nodes(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.steps.iter().map(|s| s.0).collect();
        v.sort_unstable();
        v.dedup();
        v
    }
}

/// Work done by [`reduce_to_witness`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ReductionStats {
    pub merges: usize,
    pub eats: usize,
    /// Darts whose cycle label changed.
    pub relabeled: u64,
    /// Darts stepped over while walking the main cycle and searching loops.
    pub walked: u64,
    /// Arrival-list entries examined.
    pub scanned: u64,
    /// Cycles left outside the final walk.
    pub leftover_cycles: usize,
}

struct Engine<'a> {
    g: &'a Graph,
    // out-darts of each node in port order
    rows: Vec<Vec<DartId>>,
    // 0-based port of each dart at its tail
    pos: Vec<usize>,
    label: Vec<usize>,
    members: Vec<Vec<DartId>>,
    size: Vec<usize>,
    stats: ReductionStats,
}

impl Engine<'_> {
    fn next(&self, d: DartId) -> DartId {
        let v = self.g.head(d);
        let row = &self.rows[v];
        row[(self.pos[self.g.twin(d)] + 1) % row.len()]
    }

    fn rotate(&mut self, v: usize, ins: [DartId; 3]) {
        let p = ins.map(|a| self.pos[self.g.twin(a)]);
        let row = rotate_row(&self.rows[v], p);
        for (k, &d) in row.iter().enumerate() {
            self.pos[d] = k;
        }
        self.rows[v] = row;
    }

    fn absorb(&mut self, from: usize, into: usize) {
        let list = std::mem::take(&mut self.members[from]);
        for &d in &list {
            if self.label[d] == from {
                self.label[d] = into;
                self.members[into].push(d);
                self.stats.relabeled += 1;
            }
        }
        self.size[into] += self.size[from];
        self.size[from] = 0;
    }

    // Applies both rules at `v` until neither fits. `arr` reaches `v` on the
    // main cycle `main`.
    fn process(&mut self, v: usize, arr: DartId, main: usize) -> Result<()> {
        loop {
            let row = self.rows[v].clone();
            self.stats.scanned += row.len() as u64;
            let mut groups: Vec<(usize, Vec<DartId>)> = Vec::new();
            for &o in &row {
                let a = self.g.twin(o);
                let l = self.label[a];
                if l == NONE || l == main {
                    continue;
                }
                match groups.iter_mut().find(|(c, _)| *c == l) {
                    Some((_, v)) => v.push(a),
                    None => groups.push((l, vec![a])),
                }
            }
            if groups.len() >= 2 {
                let (c2, c3) = (groups[0].0, groups[1].0);
                self.rotate(v, [arr, groups[0].1[0], groups[1].1[0]]);
                self.absorb(c2, main);
                self.absorb(c3, main);
                self.stats.merges += 1;
                continue;
            }
            let Some((c1, ins)) = groups.pop() else {
                return Ok(());
            };
            if ins.len() < 2 {
                return Ok(());
            }
            self.eat(v, arr, main, c1, ins[0], ins.len())?;
        }
    }

    fn eat(&mut self, v: usize, y: DartId, main: usize, c1: usize, first: DartId, visits: usize) -> Result<()> {
        let deg = self.rows[v].len();
        let pos_y = self.pos[self.g.twin(y)];
        let mut x = first;
        for _ in 0..visits {
            let mut seg = Vec::new();
            let mut d = self.next(x);
            loop {
                seg.push(d);
                self.stats.walked += 1;
                if self.g.head(d) == v && self.label[d] == c1 {
                    break;
                }
                d = self.next(d);
            }
            let z = d;
            let px = self.pos[self.g.twin(x)];
            let rel = |p: usize| (p + deg - px) % deg;
            if rel(self.pos[self.g.twin(z)]) < rel(pos_y) {
                self.rotate(v, [y, x, z]);
                for &s in &seg {
                    self.label[s] = main;
                    self.members[main].push(s);
                }
                self.stats.relabeled += seg.len() as u64;
                self.size[main] += seg.len();
                self.size[c1] -= seg.len();
                self.stats.eats += 1;
                return Ok(());
            }
            x = z;
        }
        Err(Error::Internal(format!("no admissible arrival triple at node {v}")))
    }
}

/// Merges the RH-cycles of a witness port numbering into one cycle through
/// every node.
///
/// Starting from the largest cycle, the walk visits each of its nodes once;
/// at each new node it merges three cycles while possible, otherwise moves a
/// loop of the other cycle into the main one. Cycles that only touch the main
/// cycle once per node are left alone, so the result may be shorter than the
/// total number of used darts.
pub fn reduce_to_witness(g: &Graph, pm: &PortMap, usage: &UsageMap) -> Result<(WitnessCycle, PortMap)> {
    reduce_to_witness_stats(g, pm, usage).map(|(w, p, _)| (w, p))
}

/// [`reduce_to_witness`] together with its work counters.
pub fn reduce_to_witness_stats(
    g: &Graph,
    pm: &PortMap,
    usage: &UsageMap,
) -> Result<(WitnessCycle, PortMap, ReductionStats)> {
    if g.n() == 1 {
        return Ok((WitnessCycle { steps: Vec::new() }, pm.clone(), ReductionStats::default()));
    }
    if !usage.two_way_connected(g) {
        return Err(Error::NotTwoWayConnected);
    }
    for v in 0..g.n() {
        if !check_rh_traversable(g, usage, v)? {
            return Err(Error::NotTraversable(v));
        }
    }
    let cs = decompose_cycles(g, pm, usage)?;
    let mut pos = vec![0usize; g.num_darts()];
    let rows: Vec<Vec<DartId>> = (0..g.n())
        .map(|v| {
            (1..=pm.degree(v))
                .map(|p| {
                    let d = pm.exit_dart(v, p);
                    pos[d] = p - 1;
                    d
                })
                .collect()
        })
        .collect();
    let mut eng = Engine {
        g,
        rows,
        pos,
        label: cs.label.clone(),
        size: cs.cycles.iter().map(Vec::len).collect(),
        members: cs.cycles.clone(),
        stats: ReductionStats::default(),
    };
    let main = 0;
    let start = cs.cycles[0][0];
    let mut done = vec![false; g.n()];
    let mut d = start;
    loop {
        let v = g.head(d);
        if !done[v] {
            done[v] = true;
            eng.process(v, d, main)?;
        }
        eng.stats.walked += 1;
        d = eng.next(d);
        if d == start {
            break;
        }
    }
    let order: Vec<Vec<usize>> = eng
        .rows
        .iter()
        .map(|r| r.iter().map(|&d| g.head(d)).collect())
        .collect();
    let out = PortMap::new(g, order)?;
    let mut steps = Vec::with_capacity(eng.size[main]);
    let mut d = start;
    loop {
        steps.push((g.tail(d), out.port_of(d)));
        d = out.rh_next(g, d);
        if d == start {
            break;
        }
    }
    if steps.len() != eng.size[main] {
        return Err(Error::Internal("main cycle length drifted".into()));
    }
    let mut stats = eng.stats;
    stats.leftover_cycles = eng.size.iter().enumerate().filter(|&(i, &s)| i != main && s > 0).count();
    let w = WitnessCycle { steps };
    if w.nodes().len() != g.n() {
        return Err(Error::Internal("reduced cycle misses a node".into()));
    }
    Ok((w, out, stats))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_two_way(g: &Graph) -> UsageMap {
        UsageMap::from_roles(vec![Usage::TwoWay; g.m()])
    }

    #[test]
    fn traversability_cases() {
        let star = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        assert!(check_rh_traversable(&star, &all_two_way(&star), 0).unwrap());

        let g = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (2, 3)]).unwrap();
        let mut u = UsageMap::new(&g);
        u.set_single(&g, 1, 0);
        u.set_single(&g, 0, 2);
        assert!(check_rh_traversable(&g, &u, 0).unwrap());
        let mut u2 = UsageMap::new(&g);
        u2.set_single(&g, 1, 0);
        u2.set_single(&g, 2, 0);
        assert!(!check_rh_traversable(&g, &u2, 0).unwrap());
        u2.set(g.edge_id(0, 3).unwrap(), Usage::SinglePending);
        assert_eq!(check_rh_traversable(&g, &u2, 0), Err(Error::UnresolvedDirection(0)));
    }

    #[test]
    fn block_layout_two_way_in_out() {
        // hub 0 with two-way edges to 1, 2; singles 3->0, 0->4, 5->0, 0->6
        let g = Graph::from_edges(
            7,
            &[(0, 1), (0, 2), (0, 3), (0, 4), (0, 5), (0, 6), (3, 4), (5, 6), (1, 2)],
        )
        .unwrap();
        let mut u = UsageMap::new(&g);
        u.set(g.edge_id(0, 1).unwrap(), Usage::TwoWay);
        u.set(g.edge_id(0, 2).unwrap(), Usage::TwoWay);
        u.set_single(&g, 3, 0);
        u.set_single(&g, 0, 4);
        u.set_single(&g, 5, 0);
        u.set_single(&g, 0, 6);
        assert_eq!(witness_order_node(&g, &u, 0).unwrap(), vec![1, 2, 4, 3, 6, 5]);
    }

    #[test]
    fn unused_follow_lone_out() {
        let g = Graph::from_edges(5, &[(0, 1), (0, 2), (0, 3), (0, 4), (1, 2)]).unwrap();
        let mut u = UsageMap::new(&g);
        u.set_single(&g, 1, 0);
        u.set_single(&g, 0, 2);
        assert_eq!(witness_order_node(&g, &u, 0).unwrap(), vec![2, 3, 4, 1]);
        u.set_single(&g, 0, 1);
        assert_eq!(witness_order_node(&g, &u, 0), Err(Error::NotTraversable(0)));
    }

    #[test]
    fn orient_triangle() {
        let g = Graph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let u = UsageMap::from_roles(vec![Usage::SinglePending; 3]);
        let o = orient_singles(&g, &u).unwrap();
        for v in 0..3 {
            let c = o.node(&g, v);
            assert_eq!((c.incoming, c.outgoing, c.pending), (1, 1, 0));
        }
        let odd = UsageMap::from_roles(vec![Usage::SinglePending, Usage::Unused, Usage::Unused]);
        assert!(matches!(orient_singles(&g, &odd), Err(Error::OddParity(_))));
    }

    #[test]
    fn tree_reduces_to_euler_tour() {
        let g = Graph::from_edges(5, &[(0, 1), (1, 2), (1, 3), (3, 4)]).unwrap();
        let u = all_two_way(&g);
        let pm = witness_port_map(&g, &u).unwrap();
        let cs = decompose_cycles(&g, &pm, &u).unwrap();
        assert_eq!(cs.len(), 1);
        let (w, _, st) = reduce_to_witness_stats(&g, &pm, &u).unwrap();
        assert_eq!(w.len(), 8);
        assert_eq!(st.merges + st.eats, 0);
    }

    #[test]
    fn inconsistent_port_map_detected() {
        let g = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2)]).unwrap();
        let mut u = UsageMap::new(&g);
        u.set(g.edge_id(0, 3).unwrap(), Usage::TwoWay);
        u.set_single(&g, 1, 0);
        u.set_single(&g, 0, 2);
        u.set_single(&g, 2, 1);
        // arrival from 3 at node 0 wraps to port 1, the unused direction 0 -> 1
        let pm = PortMap::ascending(&g);
        assert!(matches!(
            decompose_cycles(&g, &pm, &u),
            Err(Error::InconsistentPortMap { .. })
        ));
    }

    #[test]
    fn merge3_needs_three_cycles() {
        let g = Graph::from_edges(2, &[(0, 1)]).unwrap();
        let u = all_two_way(&g);
        let pm = PortMap::ascending(&g);
        let cs = decompose_cycles(&g, &pm, &u).unwrap();
        assert!(matches!(merge3(&g, &cs, &pm, 0), Err(Error::NotApplicable(_))));
        assert!(matches!(eat_small(&g, &cs, &pm), Err(Error::NotApplicable(_))));
    }
}
