//! Graphs, port numberings and edge-usage annotations.
//!
//! A [`Graph`] stores its adjacency in compressed form. Every undirected edge
//! `{u, v}` contributes two *darts* (directed edges), `u -> v` and `v -> u`.
//! Darts leaving `v` occupy the contiguous range `offsets[v]..offsets[v + 1]`
//! and are sorted by head, so most lookups are a slice or a binary search.

use std::collections::VecDeque;

use crate::error::{Error, Result};

/// Index of a directed edge inside a [`Graph`].
pub type DartId = usize;
/// Index of an undirected edge inside a [`Graph`].
pub type EdgeId = usize;

/// A directed edge `from -> to` whose underlying edge belongs to the graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DirectedEdge {
    pub from: usize,
    pub to: usize,
}

/// Simple connected undirected graph on nodes `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    offsets: Vec<usize>,
    heads: Vec<usize>,
    tails: Vec<usize>,
    twins: Vec<DartId>,
    edge_of: Vec<EdgeId>,
}

impl Graph {
    /// Builds a graph, rejecting self-loops, duplicate edges, out-of-range ids
    /// and disconnected inputs.
    pub fn from_edges(n: usize, edge_list: &[(usize, usize)]) -> Result<Self> {
        let g = Self::build(n, edge_list)?;
        if !g.is_connected() {
            return Err(Error::Validation("graph is disconnected".into()));
        }
        Ok(g)
    }

    /// Like [`Graph::from_edges`] but accepts disconnected graphs.
    pub fn from_edges_unchecked_connectivity(n: usize, edge_list: &[(usize, usize)]) -> Result<Self> {
        Self::build(n, edge_list)
    }

    fn build(n: usize, edge_list: &[(usize, usize)]) -> Result<Self> {
        if n == 0 {
            return Err(Error::Validation("graph has no nodes".into()));
        }
        let mut edges = Vec::with_capacity(edge_list.len());
        for &(a, b) in edge_list {
            if a >= n || b >= n {
                return Err(Error::Validation(format!("edge ({a}, {b}) out of range")));
            }
            if a == b {
                return Err(Error::Validation(format!("self-loop at {a}")));
            }
            edges.push((a.min(b), a.max(b)));
        }
        edges.sort_unstable();
        for w in edges.windows(2) {
            if w[0] == w[1] {
                return Err(Error::Validation(format!(
                    "duplicate edge ({}, {})",
                    w[0].0, w[0].1
                )));
            }
        }

        let mut deg = vec![0usize; n];
        for &(u, v) in &edges {
            deg[u] += 1;
            deg[v] += 1;
        }
        let mut offsets = vec![0usize; n + 1];
        for v in 0..n {
            offsets[v + 1] = offsets[v] + deg[v];
        }
        let mut adj: Vec<Vec<(usize, EdgeId)>> = deg.iter().map(|&d| Vec::with_capacity(d)).collect();
        for (e, &(u, v)) in edges.iter().enumerate() {
            adj[u].push((v, e));
            adj[v].push((u, e));
        }
        let total = offsets[n];
        let mut heads = vec![0; total];
        let mut tails = vec![0; total];
        let mut edge_of = vec![0; total];
        for v in 0..n {
            adj[v].sort_unstable();
            for (k, &(w, e)) in adj[v].iter().enumerate() {
                let d = offsets[v] + k;
                heads[d] = w;
                tails[d] = v;
                edge_of[d] = e;
            }
        }
        let mut g = Graph {
            n,
            edges,
            offsets,
            heads,
            tails,
            twins: vec![0; total],
            edge_of,
        };
        for d in 0..total {
            let (u, w) = (g.tails[d], g.heads[d]);
            g.twins[d] = g.find_dart(w, u).expect("reverse dart exists");
        }
        Ok(g)
    }

    fn find_dart(&self, from: usize, to: usize) -> Option<DartId> {
        let range = self.offsets[from]..self.offsets[from + 1];
        self.heads[range.clone()]
            .binary_search(&to)
            .ok()
            .map(|k| range.start + k)
    }

    fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.n];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = queue.pop_front() {
            for &w in self.neighbors(v) {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    queue.push_back(w);
                }
            }
        }
        count == self.n
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    /// Undirected edges as `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    /// Neighbors of `v` in ascending order.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.heads[self.offsets[v]..self.offsets[v + 1]]
    }

    /// Darts leaving `v`, aligned with [`Graph::neighbors`].
    pub fn darts_from(&self, v: usize) -> std::ops::Range<DartId> {
        self.offsets[v]..self.offsets[v + 1]
    }

    pub fn num_darts(&self) -> usize {
        self.heads.len()
    }

    pub fn dart(&self, from: usize, to: usize) -> Option<DartId> {
        if from >= self.n || to >= self.n {
            return None;
        }
        self.find_dart(from, to)
    }

    pub fn edge_id(&self, u: usize, v: usize) -> Option<EdgeId> {
        self.dart(u, v).map(|d| self.edge_of[d])
    }

    pub fn head(&self, d: DartId) -> usize {
        self.heads[d]
    }

    pub fn tail(&self, d: DartId) -> usize {
        self.tails[d]
    }

    pub fn twin(&self, d: DartId) -> DartId {
        self.twins[d]
    }

    pub fn edge_of(&self, d: DartId) -> EdgeId {
        self.edge_of[d]
    }

    pub fn directed(&self, d: DartId) -> DirectedEdge {
        DirectedEdge {
            from: self.tails[d],
            to: self.heads[d],
        }
    }

    /// Dart of edge `e` oriented from its lower to its higher endpoint.
    pub fn forward_dart(&self, e: EdgeId) -> DartId {
        let (u, v) = self.edges[e];
        self.find_dart(u, v).expect("edge endpoints are adjacent")
    }

    /// Offset of dart `d` among the darts leaving its tail.
    pub fn local_index(&self, d: DartId) -> usize {
        d - self.offsets[self.tails[d]]
    }
}

/// Per-node bijection between ports `1..=d_v` and incident edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PortMap {
    order: Vec<Vec<usize>>,
    port: Vec<usize>,
    by_port: Vec<DartId>,
    offsets: Vec<usize>,
}

impl PortMap {
    /// `order[v][p - 1]` is the neighbor reached from `v` through port `p`.
    pub fn new(g: &Graph, order: Vec<Vec<usize>>) -> Result<Self> {
        if order.len() != g.n() {
            return Err(Error::InvalidPortMap(format!(
                "expected {} nodes, got {}",
                g.n(),
                order.len()
            )));
        }
        let mut port = vec![0usize; g.num_darts()];
        let mut by_port = vec![0usize; g.num_darts()];
        for (v, row) in order.iter().enumerate() {
            if row.len() != g.degree(v) {
                return Err(Error::InvalidPortMap(format!(
                    "node {v} has degree {} but {} ports",
                    g.degree(v),
                    row.len()
                )));
            }
            for (k, &w) in row.iter().enumerate() {
                let d = g
                    .dart(v, w)
                    .ok_or_else(|| Error::InvalidPortMap(format!("{w} is not a neighbor of {v}")))?;
                if port[d] != 0 {
                    return Err(Error::InvalidPortMap(format!("neighbor {w} repeated at {v}")));
                }
                port[d] = k + 1;
                by_port[g.offsets[v] + k] = d;
            }
        }
        Ok(PortMap {
            order,
            port,
            by_port,
            offsets: g.offsets.clone(),
        })
    }

    /// Ports assigned in ascending neighbor order.
    pub fn ascending(g: &Graph) -> Self {
        let order = (0..g.n()).map(|v| g.neighbors(v).to_vec()).collect();
        PortMap::new(g, order).expect("ascending layout is valid")
    }

    pub fn n(&self) -> usize {
        self.order.len()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.order[v].len()
    }

    /// Neighbors of `v` in port order.
    pub fn order(&self, v: usize) -> &[usize] {
        &self.order[v]
    }

    pub fn orders(&self) -> &[Vec<usize>] {
        &self.order
    }

    /// Neighbor behind port `p` (1-based) at `v`.
    pub fn neighbor(&self, v: usize, p: usize) -> usize {
        self.order[v][p - 1]
    }

    /// Port of dart `d` at its tail.
    pub fn port_of(&self, d: DartId) -> usize {
        self.port[d]
    }

    /// Port at `v` of the edge towards `w`.
    pub fn port(&self, g: &Graph, v: usize, w: usize) -> Option<usize> {
        g.dart(v, w).map(|d| self.port[d])
    }

    /// Dart leaving `v` through port `p`.
    pub fn exit_dart(&self, v: usize, p: usize) -> DartId {
        self.by_port[self.offsets[v] + p - 1]
    }

    /// Dart taken by the right-hand rule after arriving along `d`.
    pub fn rh_next(&self, g: &Graph, d: DartId) -> DartId {
        let v = g.head(d);
        let entry = self.port[g.twin(d)];
        self.exit_dart(v, entry % self.degree(v) + 1)
    }
}

/// Cyclic-successor rewiring at `v`: the successors of `x1`, `x2`, `x3`
/// (given as neighbor ids) are permuted cyclically so that the three segments
/// they close are concatenated in reverse cyclic order. The triple is
/// re-oriented internally so that `x2` lies between `x1` and `x3`; applying the
/// same triple twice restores the original order. The edge at port 1 keeps
/// port 1.
pub fn rotate_successor(g: &Graph, pm: &PortMap, v: usize, xs: [usize; 3]) -> Result<PortMap> {
    let bad = |msg: &str| Error::InvalidRotation {
        node: v,
        msg: msg.to_string(),
    };
    if v >= g.n() {
        return Err(bad("node out of range"));
    }
    if xs[0] == xs[1] || xs[1] == xs[2] || xs[0] == xs[2] {
        return Err(bad("edges must be pairwise distinct"));
    }
    let row = pm.order(v);
    let mut pos = [0usize; 3];
    for (k, &x) in xs.iter().enumerate() {
        pos[k] = row
            .iter()
            .position(|&w| w == x)
            .ok_or_else(|| bad(&format!("{x} is not a neighbor")))?;
    }
    let mut order = pm.orders().to_vec();
    order[v] = rotate_row(row, pos);
    PortMap::new(g, order)
}

/// Rewires a cyclic sequence at positions `pos` (of x1, x2, x3): the
/// successor of x1 becomes the old successor of x2, x2 gets x3's and x3 gets
/// x1's. Orientation is normalized first.
pub(crate) fn rotate_row(row: &[usize], mut pos: [usize; 3]) -> Vec<usize> {
    let d = row.len();
    let rel = |p: usize| (p + d - pos[0]) % d;
    if rel(pos[1]) > rel(pos[2]) {
        pos.swap(1, 2);
    }
    // segments start after each x and end at the next x in cyclic order
    let seg = |from: usize, to: usize| -> Vec<usize> {
        let mut out = Vec::new();
        let mut k = (from + 1) % d;
        loop {
            out.push(row[k]);
            if k == to {
                break;
            }
            k = (k + 1) % d;
        }
        out
    };
    let s1 = seg(pos[0], pos[1]);
    let s2 = seg(pos[1], pos[2]);
    let s3 = seg(pos[2], pos[0]);
    let mut cyc = Vec::with_capacity(d);
    cyc.extend(s1);
    cyc.extend(s3);
    cyc.extend(s2);
    let first = row[0];
    let at = cyc.iter().position(|&w| w == first).expect("first element kept");
    cyc.rotate_left(at);
    cyc
}

/// Role of an undirected edge in a traversal under construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Usage {
    Unused,
    TwoWay,
    /// Traversed once from the lower to the higher endpoint.
    SingleForward,
    /// Traversed once from the higher to the lower endpoint.
    SingleBackward,
    /// Traversed once, direction not yet decided.
    SinglePending,
}

impl Usage {
    pub fn is_single(self) -> bool {
        matches!(
            self,
            Usage::SingleForward | Usage::SingleBackward | Usage::SinglePending
        )
    }
}

/// Counters of edge roles around one node.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct NodeUsage {
    pub two_way: usize,
    pub incoming: usize,
    pub outgoing: usize,
    pub pending: usize,
    pub unused: usize,
}

impl NodeUsage {
    pub fn singles(&self) -> usize {
        self.incoming + self.outgoing + self.pending
    }
}

/// Per-edge [`Usage`], indexed by [`EdgeId`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UsageMap {
    roles: Vec<Usage>,
}

impl UsageMap {
    pub fn new(g: &Graph) -> Self {
        UsageMap {
            roles: vec![Usage::Unused; g.m()],
        }
    }

    pub fn from_roles(roles: Vec<Usage>) -> Self {
        UsageMap { roles }
    }

    pub fn roles(&self) -> &[Usage] {
        &self.roles
    }

    pub fn get(&self, e: EdgeId) -> Usage {
        self.roles[e]
    }

    pub fn set(&mut self, e: EdgeId, u: Usage) {
        self.roles[e] = u;
    }

    /// Marks `{from, to}` as a single edge traversed `from -> to`.
    pub fn set_single(&mut self, g: &Graph, from: usize, to: usize) {
        let e = g.edge_id(from, to).expect("edge exists");
        self.roles[e] = if from < to {
            Usage::SingleForward
        } else {
            Usage::SingleBackward
        };
    }

    pub fn node(&self, g: &Graph, v: usize) -> NodeUsage {
        let mut c = NodeUsage::default();
        for d in g.darts_from(v) {
            match self.roles[g.edge_of(d)] {
                Usage::Unused => c.unused += 1,
                Usage::TwoWay => c.two_way += 1,
                Usage::SinglePending => c.pending += 1,
                _ => {
                    if self.dart_used(g, d) {
                        c.outgoing += 1;
                    } else {
                        c.incoming += 1;
                    }
                }
            }
        }
        c
    }

    /// Whether the directed edge `d` is traversed. Pending singles count as
    /// unused in both directions.
    pub fn dart_used(&self, g: &Graph, d: DartId) -> bool {
        let forward = g.tail(d) < g.head(d);
        match self.roles[g.edge_of(d)] {
            Usage::TwoWay => true,
            Usage::SingleForward => forward,
            Usage::SingleBackward => !forward,
            _ => false,
        }
    }

    pub fn count(&self, u: Usage) -> usize {
        self.roles.iter().filter(|&&r| r == u).count()
    }

    pub fn singles(&self) -> usize {
        self.roles.iter().filter(|r| r.is_single()).count()
    }

    /// Number of traversed directed edges: two per two-way edge, one per single.
    pub fn used_darts(&self) -> usize {
        2 * self.count(Usage::TwoWay) + self.singles()
    }

    /// True when the two-way edges connect every node.
    pub fn two_way_connected(&self, g: &Graph) -> bool {
        let mut seen = vec![false; g.n()];
        seen[0] = true;
        let mut stack = vec![0usize];
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for d in g.darts_from(v) {
                if self.roles[g.edge_of(d)] == Usage::TwoWay && !seen[g.head(d)] {
                    seen[g.head(d)] = true;
                    count += 1;
                    stack.push(g.head(d));
                }
            }
        }
        count == g.n()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> Graph {
        Graph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]).unwrap()
    }

    #[test]
    fn rejects_bad_graphs() {
        assert!(Graph::from_edges(2, &[(0, 0)]).is_err());
        assert!(Graph::from_edges(2, &[(0, 1), (1, 0)]).is_err());
        assert!(Graph::from_edges(3, &[(0, 1)]).is_err());
        assert!(Graph::from_edges(2, &[(0, 2)]).is_err());
    }

    #[test]
    fn darts_and_twins() {
        let g = triangle();
        assert_eq!(g.num_darts(), 6);
        for d in 0..g.num_darts() {
            assert_eq!(g.twin(g.twin(d)), d);
            assert_eq!(g.head(d), g.tail(g.twin(d)));
            assert_eq!(g.edge_of(d), g.edge_of(g.twin(d)));
        }
        let degree_sum: usize = (0..3).map(|v| g.degree(v)).sum();
        assert_eq!(degree_sum, 2 * g.m());
    }

    #[test]
    fn portmap_rejects_non_bijection() {
        let g = triangle();
        assert!(PortMap::new(&g, vec![vec![1, 1], vec![0, 2], vec![0, 1]]).is_err());
        assert!(PortMap::new(&g, vec![vec![1], vec![0, 2], vec![0, 1]]).is_err());
    }

    #[test]
    fn rotation_changes_three_successors_and_is_an_involution() {
        let g = Graph::from_edges(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]).unwrap();
        let pm = PortMap::ascending(&g);
        let rot = rotate_successor(&g, &pm, 0, [1, 2, 3]).unwrap();
        let succ = |pm: &PortMap, x: usize| {
            let row = pm.order(0);
            let k = row.iter().position(|&w| w == x).unwrap();
            row[(k + 1) % row.len()]
        };
        let changed = [1, 2, 3, 4]
            .iter()
            .filter(|&&x| succ(&pm, x) != succ(&rot, x))
            .count();
        assert_eq!(changed, 3);
        assert_eq!(succ(&rot, 1), succ(&pm, 2));
        assert_eq!(succ(&rot, 2), succ(&pm, 3));
        assert_eq!(succ(&rot, 3), succ(&pm, 1));
        let back = rotate_successor(&g, &rot, 0, [1, 2, 3]).unwrap();
        assert_eq!(back, pm);
    }

    #[test]
    fn rotation_rejects_degenerate_triples() {
        let g = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        let pm = PortMap::ascending(&g);
        assert!(matches!(
            rotate_successor(&g, &pm, 0, [1, 1, 1]),
            Err(Error::InvalidRotation { .. })
        ));
        assert!(rotate_successor(&g, &pm, 1, [0, 2, 3]).is_err());
    }

    #[test]
    fn usage_counters() {
        let g = triangle();
        let mut u = UsageMap::new(&g);
        u.set(g.edge_id(0, 1).unwrap(), Usage::TwoWay);
        u.set_single(&g, 2, 0);
        u.set_single(&g, 1, 2);
        let c0 = u.node(&g, 0);
        assert_eq!((c0.two_way, c0.incoming, c0.outgoing), (1, 1, 0));
        let c2 = u.node(&g, 2);
        assert_eq!((c2.incoming, c2.outgoing), (1, 1));
        assert_eq!(u.used_darts(), 4);
    }
}
