//! Construction of short witness cycles for the oblivious agent.
//!
//! Both builders assemble a set `K` of used edges (a spanning tree of two-way
//! edges plus single edges) in which every node is RH-traversable, then merge
//! the RH-cycles of a witness port numbering into one spanning cycle.

use std::collections::VecDeque;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{Graph, PortMap, Usage, UsageMap};
use crate::rh::{orient_singles, reduce_to_witness_stats, witness_port_map, ReductionStats, WitnessCycle};
use crate::three_layer::{three_layer_partition_with, PartitionOptions};
use crate::util::UnionFind;

const NONE: usize = usize::MAX;

/// A tree over some of the nodes of a graph, rooted and with ordered
/// children.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpanningTree {
    pub root: usize,
    /// `parent[v]` is `None` for the root and for nodes outside the tree.
    pub parent: Vec<Option<usize>>,
    /// Children in ascending id order.
    pub children: Vec<Vec<usize>>,
    /// Edges as `(u, v)` with `u < v`, sorted.
    pub edges: Vec<(usize, usize)>,
    /// Tree nodes in breadth-first order from the root.
    pub nodes: Vec<usize>,
}

impl SpanningTree {
    /// Roots the tree formed by `edges` at `root`. Fails if the edges contain
    /// a cycle or do not all hang together with `root`.
    pub fn from_edges(n: usize, edges: &[(usize, usize)], root: usize) -> Result<Self> {
        if root >= n {
            return Err(Error::BadParams(format!("root {root} out of range")));
        }
        let mut adj = vec![Vec::new(); n];
        let mut norm = Vec::with_capacity(edges.len());
        for &(a, b) in edges {
            if a >= n || b >= n || a == b {
                return Err(Error::BadParams(format!("bad tree edge ({a}, {b})")));
            }
            adj[a].push(b);
            adj[b].push(a);
            norm.push((a.min(b), a.max(b)));
        }
        norm.sort_unstable();
        norm.dedup();
        if norm.len() != edges.len() {
            return Err(Error::BadParams("repeated tree edge".into()));
        }
        for l in adj.iter_mut() {
            l.sort_unstable();
        }
        let mut parent = vec![None; n];
        let mut children = vec![Vec::new(); n];
        let mut seen = vec![false; n];
        let mut nodes = vec![root];
        seen[root] = true;
        let mut head = 0;
        while head < nodes.len() {
            let v = nodes[head];
            head += 1;
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = Some(v);
                    children[v].push(w);
                    nodes.push(w);
                }
            }
        }
        if nodes.len() != norm.len() + 1 {
            return Err(Error::BadParams(
                "tree edges are disconnected from the root or contain a cycle".into(),
            ));
        }
        Ok(SpanningTree {
            root,
            parent,
            children,
            edges: norm,
            nodes,
        })
    }

    /// Breadth-first tree of `g` from `root`, neighbors taken in ascending
    /// order.
    pub fn bfs(g: &Graph, root: usize) -> Self {
        let mut seen = vec![false; g.n()];
        let mut q = VecDeque::from([root]);
        seen[root] = true;
        let mut edges = Vec::with_capacity(g.n().saturating_sub(1));
        while let Some(v) = q.pop_front() {
            for &w in g.neighbors(v) {
                if !seen[w] {
                    seen[w] = true;
                    edges.push((v, w));
                    q.push_back(w);
                }
            }
        }
        SpanningTree::from_edges(g.n(), &edges, root).expect("bfs edges form a tree")
    }

    pub fn contains_edge(&self, u: usize, v: usize) -> bool {
        self.edges.binary_search(&(u.min(v), u.max(v))).is_ok()
    }

    pub fn spans(&self, n: usize) -> bool {
        self.nodes.len() == n
    }

    /// Tree degree of every node.
    pub fn degrees(&self, n: usize) -> Vec<usize> {
        let mut deg = vec![0; n];
        for &(a, b) in &self.edges {
            deg[a] += 1;
            deg[b] += 1;
        }
        deg
    }

    /// First node whose every graph edge lies in the tree.
    pub fn saturated_node(&self, g: &Graph) -> Option<usize> {
        let deg = self.degrees(g.n());
        (0..g.n()).find(|&v| deg[v] == g.degree(v))
    }
}

/// Single edges arranged as vertex-disjoint stars.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct StarForest {
    /// Edges as `(u, v)` with `u < v`, sorted.
    pub edges: Vec<(usize, usize)>,
}

impl StarForest {
    /// Each star as `(center, leaves)`. A star with one edge reports its lower
    /// endpoint as center.
    pub fn stars(&self, n: usize) -> Vec<(usize, Vec<usize>)> {
        let mut deg = vec![0usize; n];
        for &(a, b) in &self.edges {
            deg[a] += 1;
            deg[b] += 1;
        }
        let mut out: Vec<(usize, Vec<usize>)> = Vec::new();
        let mut at = vec![NONE; n];
        for &(a, b) in &self.edges {
            let (c, l) = if deg[b] > 1 || (deg[a] == 1 && deg[b] == 1 && b < a) {
                (b, a)
            } else {
                (a, b)
            };
            if at[c] == NONE {
                at[c] = out.len();
                out.push((c, Vec::new()));
            }
            out[at[c]].1.push(l);
        }
        out
    }

    /// Whether some path in the forest has three or more edges.
    pub fn has_long_path(&self, n: usize) -> bool {
        let mut deg = vec![0usize; n];
        for &(a, b) in &self.edges {
            deg[a] += 1;
            deg[b] += 1;
        }
        self.edges.iter().any(|&(a, b)| deg[a] >= 2 && deg[b] >= 2)
    }

    /// Nodes touched by the forest, ascending.
    pub fn nodes(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.edges.iter().flat_map(|&(a, b)| [a, b]).collect();
        v.sort_unstable();
        v.dedup();
        v
    }
}

/// Drops edges whose endpoints both have other forest edges until every
/// edge has a leaf endpoint. Coverage is unchanged.
fn prune_to_stars(n: usize, edges: &mut Vec<(usize, usize)>) {
    let mut deg = vec![0usize; n];
    for &(a, b) in edges.iter() {
        deg[a] += 1;
        deg[b] += 1;
    }
    edges.retain(|&(a, b)| {
        if deg[a] >= 2 && deg[b] >= 2 {
            deg[a] -= 1;
            deg[b] -= 1;
            false
        } else {
            true
        }
    });
}

/// Overrides for the choices the builders leave open.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Hooks {
    /// Edges of the spanning tree; empty means breadth-first from node 0.
    pub tree_edges: Vec<(usize, usize)>,
    /// First node saturated in the partition of the component containing it.
    pub start: Option<usize>,
    /// Nodes saturated next, in order, within their component.
    pub saturate: Vec<usize>,
}

impl Hooks {
    /// Parses `tree-edge u v`, `start v` and `saturate v` lines.
    pub fn parse(text: &str) -> Result<Self> {
        let mut h = Hooks::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |msg: &str| Error::Parse {
                line: i + 1,
                msg: msg.to_string(),
            };
            let mut parts = line.split_whitespace();
            let key = parts.next().unwrap_or_default();
            let nums = parts
                .map(|t| t.parse::<usize>().map_err(|_| err(&format!("not a number: {t:?}"))))
                .collect::<Result<Vec<_>>>()?;
            match (key, nums.as_slice()) {
                ("tree-edge", &[u, v]) => h.tree_edges.push((u, v)),
                ("start", &[v]) => h.start = Some(v),
                ("saturate", &[v]) => h.saturate.push(v),
                _ => return Err(err(&format!("unrecognised hook line {line:?}"))),
            }
        }
        Ok(h)
    }

    pub fn write(&self) -> String {
        let mut s = String::new();
        for &(u, v) in &self.tree_edges {
            s.push_str(&format!("tree-edge {u} {v}\n"));
        }
        if let Some(v) = self.start {
            s.push_str(&format!("start {v}\n"));
        }
        for &v in &self.saturate {
            s.push_str(&format!("saturate {v}\n"));
        }
        s
    }
}

/// Searches for a spanning tree in which every node keeps at least one edge
/// outside the tree.
///
/// Up to 12 nodes the search is exhaustive unless `budget` search steps run
/// out; above that, randomized greedy attempts are made, each costing `m`
/// steps. Nodes of degree one make the search fail at once.
pub fn find_nonsaturating_tree(g: &Graph, budget: u64) -> Result<SpanningTree> {
    let n = g.n();
    if n < 2 || (0..n).any(|v| g.degree(v) < 2) {
        return Err(Error::NotFound);
    }
    let cap: Vec<usize> = (0..n).map(|v| g.degree(v) - 1).collect();
    let found = if n <= 12 {
        exact_tree(g, &cap, budget)
    } else {
        greedy_tree(g, &cap, budget)
    };
    let edges = found.ok_or(Error::NotFound)?;
    SpanningTree::from_edges(n, &edges, 0)
}

fn exact_tree(g: &Graph, cap: &[usize], budget: u64) -> Option<Vec<(usize, usize)>> {
    struct Search<'a> {
        edges: &'a [(usize, usize)],
        cap: &'a [usize],
        deg: Vec<usize>,
        comp: Vec<usize>,
        chosen: Vec<(usize, usize)>,
        steps: u64,
        budget: u64,
        need: usize,
    }
    impl Search<'_> {
        fn find(&self, mut x: usize) -> usize {
            while self.comp[x] != x {
                x = self.comp[x];
            }
            x
        }
        fn go(&mut self, i: usize) -> bool {
            self.steps += 1;
            if self.steps > self.budget {
                return false;
            }
            if self.chosen.len() == self.need {
                return true;
            }
            if self.edges.len() - i < self.need - self.chosen.len() {
                return false;
            }
            let (a, b) = self.edges[i];
            let (ra, rb) = (self.find(a), self.find(b));
            if ra != rb && self.deg[a] < self.cap[a] && self.deg[b] < self.cap[b] {
                self.comp[rb] = ra;
                self.deg[a] += 1;
                self.deg[b] += 1;
                self.chosen.push((a, b));
                if self.go(i + 1) {
                    return true;
                }
                self.chosen.pop();
                self.deg[a] -= 1;
                self.deg[b] -= 1;
                self.comp[rb] = rb;
            }
            self.go(i + 1)
        }
    }
    let mut s = Search {
        edges: g.edges(),
        cap,
        deg: vec![0; g.n()],
        comp: (0..g.n()).collect(),
        chosen: Vec::new(),
        steps: 0,
        budget,
        need: g.n() - 1,
    };
    s.go(0).then_some(s.chosen)
}

fn greedy_tree(g: &Graph, cap: &[usize], budget: u64) -> Option<Vec<(usize, usize)>> {
    let mut spent = 0u64;
    let mut attempt = 0u64;
    let mut order: Vec<(usize, usize)> = g.edges().to_vec();
    while spent < budget {
        let mut rng = ChaCha8Rng::seed_from_u64(attempt);
        order.shuffle(&mut rng);
        // edges between roomy nodes first
        order.sort_by_key(|&(a, b)| std::cmp::Reverse(cap[a].min(cap[b])));
        let mut uf = UnionFind::new(g.n());
        let mut deg = vec![0usize; g.n()];
        let mut chosen = Vec::with_capacity(g.n() - 1);
        for &(a, b) in &order {
            spent += 1;
            if deg[a] < cap[a] && deg[b] < cap[b] && uf.union(a, b) {
                deg[a] += 1;
                deg[b] += 1;
                chosen.push((a, b));
            }
        }
        if chosen.len() == g.n() - 1 {
            return Some(chosen);
        }
        attempt += 1;
    }
    None
}

/// Makes the number of single edges at every tree node even by turning tree
/// edges into pending singles, bottom-up: a node whose own non-tree singles
/// plus odd children add up to an odd count hands the excess to its parent
/// edge. Returns the root's parity, which is 0 whenever the singles have an
/// even number of endpoints inside the tree.
pub fn restore_parity(g: &Graph, usage: &UsageMap, t: &SpanningTree) -> Result<(UsageMap, bool)> {
    let mut out = usage.clone();
    let mut parity = vec![false; g.n()];
    for &v in t.nodes.iter().rev() {
        let mut p = false;
        for d in g.darts_from(v) {
            let w = g.head(d);
            if usage.get(g.edge_of(d)).is_single() && !t.contains_edge(v, w) {
                p = !p;
            }
        }
        for &c in &t.children[v] {
            p ^= parity[c];
        }
        parity[v] = p;
        if p {
            if let Some(u) = t.parent[v] {
                let e = g.edge_id(u, v).ok_or_else(|| Error::BadParams(format!("tree edge ({u}, {v}) not in graph")))?;
                out.set(e, Usage::SinglePending);
            }
        }
    }
    Ok((out, parity[t.root]))
}

/// Orients the singles of `k`, lays out witness orders and merges the cycles.
fn finish(g: &Graph, k: &UsageMap) -> Result<(PortMap, WitnessCycle, UsageMap, ReductionStats)> {
    let k = orient_singles(g, k)?;
    let pm = witness_port_map(g, &k)?;
    let (w, pm, st) = reduce_to_witness_stats(g, &pm, &k)?;
    Ok((pm, w, k, st))
}

/// Output of a builder together with the edge set it used.
#[derive(Debug, Clone)]
pub struct WitnessRun {
    pub ports: PortMap,
    pub witness: WitnessCycle,
    pub usage: UsageMap,
    pub stats: WitnessStats,
}

/// Sizes of the pieces added for one component of `G \ T`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ComponentReport {
    pub nodes: usize,
    pub x: usize,
    pub y: usize,
    pub z: usize,
    pub backbone: usize,
    pub pair_edges: usize,
    pub star_edges: usize,
    /// Backbone edges turned into singles by parity restoration.
    pub reduced: usize,
    /// Star nodes whose only horizontal edges lead to nodes with pair edges.
    pub stranded: usize,
}

impl ComponentReport {
    /// Directed edges this component contributes to `K`.
    pub fn used_darts(&self) -> usize {
        2 * self.backbone - self.reduced + self.pair_edges + self.star_edges
    }
}

/// Work and size counters of a builder run.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct WitnessStats {
    pub components: Vec<ComponentReport>,
    /// Adjacency entries scanned by the partition calls.
    pub partition_scans: u64,
    /// Elementary steps of everything else before the reduction.
    pub build_ops: u64,
    pub reduction: ReductionStats,
    pub two_way: usize,
    pub singles: usize,
}

impl WitnessStats {
    pub fn total_ops(&self) -> u64 {
        self.partition_scans
            + self.build_ops
            + self.reduction.walked
            + self.reduction.relabeled
            + self.reduction.scanned
    }

    pub fn used_darts(&self) -> usize {
        2 * self.two_way + self.singles
    }
}

/// Tree of two-way edges plus one single edge per node from outside the
/// tree, with parities restored. Requires a tree without saturated nodes.
pub fn terse_cycles(g: &Graph, t: &SpanningTree) -> Result<(PortMap, WitnessCycle)> {
    terse_cycles_run(g, t).map(|r| (r.ports, r.witness))
}

/// [`terse_cycles`] with the used edge set and counters.
pub fn terse_cycles_run(g: &Graph, t: &SpanningTree) -> Result<WitnessRun> {
    if !t.spans(g.n()) {
        return Err(Error::BadParams("tree does not span the graph".into()));
    }
    if let Some(v) = t.saturated_node(g) {
        return Err(Error::SaturatedTree(v));
    }
    let n = g.n();
    let mut k = UsageMap::new(g);
    for &(a, b) in &t.edges {
        k.set(g.edge_id(a, b).ok_or_else(|| Error::BadParams(format!("tree edge ({a}, {b}) not in graph")))?, Usage::TwoWay);
    }
    let outside = |v: usize| g.neighbors(v).iter().copied().filter(move |&w| !t.contains_edge(v, w));
    let mut mate = vec![NONE; n];
    let mut stars = Vec::new();
    #[allow(clippy::needless_range_loop)]
    for v in 0..n {
        if mate[v] == NONE {
            if let Some(w) = outside(v).find(|&w| mate[w] == NONE) {
                mate[v] = w;
                mate[w] = v;
                stars.push((v.min(w), v.max(w)));
            }
        }
    }
    #[allow(clippy::needless_range_loop)]
    for v in 0..n {
        if mate[v] == NONE {
            let w = outside(v).next().expect("no saturated node");
            mate[v] = w;
            stars.push((v.min(w), v.max(w)));
        }
    }
    prune_to_stars(n, &mut stars);
    for &(a, b) in &stars {
        k.set(g.edge_id(a, b).expect("edge"), Usage::SinglePending);
    }
    let (k, odd) = restore_parity(g, &k, t)?;
    if odd {
        return Err(Error::Internal("root parity odd".into()));
    }
    let (pm, w, k) = splice_circuits(g, &k)?;
    let stats = WitnessStats {
        two_way: k.count(Usage::TwoWay),
        singles: k.singles(),
        build_ops: (4 * g.m() + n) as u64,
        ..Default::default()
    };
    Ok(WitnessRun {
        ports: pm,
        witness: w,
        usage: k,
        stats,
    })
}

/// Orients the pending singles of `k` along one Euler circuit per component
/// of the single edges, then joins circuits through two-way edges whose ends
/// lie on different circuits. Two-way edges closing a loop of circuits are
/// dropped. Every node must carry at least two singles.
fn splice_circuits(g: &Graph, k: &UsageMap) -> Result<(PortMap, WitnessCycle, UsageMap)> {
    let n = g.n();
    let mut out = k.clone();
    let single = |d: usize| k.get(g.edge_of(d)) == Usage::SinglePending;
    // chains[v]: neighbor runs `in, excursions.., out`
    let mut chains: Vec<Vec<Vec<usize>>> = vec![Vec::new(); n];
    let mut circuit = vec![NONE; n];
    let mut taken = vec![false; g.m()];
    let mut cursor: Vec<usize> = (0..n).map(|v| g.darts_from(v).start).collect();
    let mut count = 0;
    for s in 0..n {
        if circuit[s] != NONE {
            continue;
        }
        // Hierholzer: darts come off the stack in reverse circuit order
        let mut stack: Vec<(usize, Option<usize>)> = vec![(s, None)];
        let mut tour: Vec<usize> = Vec::new();
        while let Some(&(v, via)) = stack.last() {
            let end = g.darts_from(v).end;
            while cursor[v] < end && (!single(cursor[v]) || taken[g.edge_of(cursor[v])]) {
                cursor[v] += 1;
            }
            if cursor[v] < end {
                let d = cursor[v];
                taken[g.edge_of(d)] = true;
                stack.push((g.head(d), Some(d)));
            } else {
                stack.pop();
                if let Some(d) = via {
                    tour.push(d);
                }
            }
        }
        if tour.is_empty() {
            return Err(Error::NotTraversable(s));
        }
        tour.reverse();
        for i in 0..tour.len() {
            let (a, b) = (tour[i], tour[(i + 1) % tour.len()]);
            out.set_single(g, g.tail(a), g.head(a));
            let v = g.head(a);
            circuit[v] = count;
            chains[v].push(vec![g.tail(a), g.head(b)]);
        }
        count += 1;
    }
    let mut uf = UnionFind::new(count);
    for (e, &(a, b)) in g.edges().iter().enumerate() {
        if k.get(e) != Usage::TwoWay {
            continue;
        }
        if uf.union(circuit[a], circuit[b]) {
            for (v, w) in [(a, b), (b, a)] {
                let c = &mut chains[v][0];
                let at = c.len() - 1;
                c.insert(at, w);
            }
        } else {
            out.set(e, Usage::Unused);
        }
    }
    let order: Vec<Vec<usize>> = (0..n)
        .map(|v| {
            let mut row: Vec<usize> = chains[v].concat();
            let mut placed = vec![false; g.degree(v)];
            for &w in &row {
                placed[g.local_index(g.dart(v, w).expect("neighbor"))] = true;
            }
            row.extend(g.neighbors(v).iter().zip(&placed).filter(|(_, &p)| !p).map(|(&w, _)| w));
            row
        })
        .collect();
    let pm = PortMap::new(g, order)?;
    let start = g.dart(0, chains[0][0][1]).expect("neighbor");
    let mut steps = Vec::new();
    let mut d = start;
    loop {
        steps.push((g.tail(d), pm.port_of(d)));
        d = pm.rh_next(g, d);
        if d == start {
            break;
        }
    }
    let w = WitnessCycle { steps };
    if w.len() != out.used_darts() || w.nodes().len() != n {
        return Err(Error::Internal("spliced circuits do not form one cycle".into()));
    }
    Ok((pm, w, out))
}

/// General construction: spanning tree `T` of two-way edges, and for every
/// component of `G \ T` with edges a three-layer partition whose backbone is
/// two-way, two singles from each `Z` node into `Y`, a star forest over the
/// remaining `Y` nodes, and parity restoration on the backbone.
pub fn find_witness_cycle(g: &Graph, hooks: &Hooks) -> Result<(PortMap, WitnessCycle)> {
    find_witness_cycle_run(g, hooks).map(|r| (r.ports, r.witness))
}

/// [`find_witness_cycle`] with the used edge set and counters.
pub fn find_witness_cycle_run(g: &Graph, hooks: &Hooks) -> Result<WitnessRun> {
    let n = g.n();
    if n == 1 {
        // nothing to traverse: the empty walk already visits the only node
        return Ok(WitnessRun {
            ports: PortMap::ascending(g),
            witness: WitnessCycle { steps: Vec::new() },
            usage: UsageMap::new(g),
            stats: WitnessStats::default(),
        });
    }
    let t = if hooks.tree_edges.is_empty() {
        SpanningTree::bfs(g, 0)
    } else {
        let t = SpanningTree::from_edges(n, &hooks.tree_edges, 0)?;
        if !t.spans(n) || t.edges.iter().any(|&(a, b)| g.edge_id(a, b).is_none()) {
            return Err(Error::BadParams("hook tree is not a spanning tree of the graph".into()));
        }
        t
    };
    let mut stats = WitnessStats::default();
    let mut k = UsageMap::new(g);
    let mut in_t = vec![false; g.m()];
    for &(a, b) in &t.edges {
        let e = g.edge_id(a, b).expect("tree edge");
        in_t[e] = true;
        k.set(e, Usage::TwoWay);
    }
    stats.build_ops += 2 * g.m() as u64;

    // components of G \ T that carry edges
    let mut comp = vec![NONE; n];
    let mut comps: Vec<Vec<usize>> = Vec::new();
    for s in 0..n {
        if comp[s] != NONE || g.darts_from(s).all(|d| in_t[g.edge_of(d)]) {
            continue;
        }
        let id = comps.len();
        comp[s] = id;
        let mut nodes = vec![s];
        let mut head = 0;
        while head < nodes.len() {
            let v = nodes[head];
            head += 1;
            for d in g.darts_from(v) {
                stats.build_ops += 1;
                let w = g.head(d);
                if !in_t[g.edge_of(d)] && comp[w] == NONE {
                    comp[w] = id;
                    nodes.push(w);
                }
            }
        }
        nodes.sort_unstable();
        comps.push(nodes);
    }

    let mut local = vec![NONE; n];
    for nodes in &comps {
        for (i, &v) in nodes.iter().enumerate() {
            local[v] = i;
        }
        let mut edges = Vec::new();
        for &v in nodes {
            for d in g.darts_from(v) {
                let w = g.head(d);
                if v < w && !in_t[g.edge_of(d)] {
                    edges.push((local[v], local[w]));
                }
            }
        }
        stats.build_ops += edges.len() as u64 * 2 + nodes.len() as u64;
        let gi = Graph::from_edges(nodes.len(), &edges)?;
        let opts = PartitionOptions {
            start: hooks.start.filter(|&v| comp[v] == comp[nodes[0]]).map(|v| local[v]),
            forced: hooks
                .saturate
                .iter()
                .filter(|&&v| comp[v] == comp[nodes[0]])
                .map(|&v| local[v])
                .collect(),
        };
        let part = three_layer_partition_with(&gi, &opts)?;
        stats.partition_scans += part.scans;
        let (ki, rep) = component_usage(&gi, &part)?;
        stats.build_ops += 4 * gi.m() as u64 + gi.n() as u64;
        for (e, &(a, b)) in gi.edges().iter().enumerate() {
            let u = ki.get(e);
            if u != Usage::Unused {
                k.set(g.edge_id(nodes[a], nodes[b]).expect("edge"), u);
            }
        }
        stats.components.push(rep);
    }

    let (pm, w, k, reduction) = finish(g, &k)?;
    stats.build_ops += 3 * g.num_darts() as u64;
    stats.reduction = reduction;
    stats.two_way = k.count(Usage::TwoWay);
    stats.singles = k.singles();
    Ok(WitnessRun {
        ports: pm,
        witness: w,
        usage: k,
        stats,
    })
}

/// Edge roles inside one component: two-way backbone, pair edges from `Z`,
/// stars over the remaining `Y` nodes, then parity restoration rooted at
/// the first saturated node.
fn component_usage(
    gi: &Graph,
    part: &crate::three_layer::ThreeLayerPartition,
) -> Result<(UsageMap, ComponentReport)> {
    let n = gi.n();
    let mut k = UsageMap::new(gi);
    let tree = SpanningTree::from_edges(n, &part.backbone, part.saturation_order[0])?;
    for &(a, b) in &part.backbone {
        k.set(gi.edge_id(a, b).expect("edge"), Usage::TwoWay);
    }
    let mut is_y = vec![false; n];
    for &y in &part.y {
        is_y[y] = true;
    }
    let mut paired = vec![false; n];
    let mut pair_edges = 0;
    for &z in &part.z {
        for &y in gi.neighbors(z).iter().filter(|&&w| is_y[w]).take(2) {
            k.set(gi.edge_id(z, y).expect("edge"), Usage::SinglePending);
            paired[y] = true;
            pair_edges += 1;
        }
    }
    let (stars, stranded) = star_forest(gi, &part.y, &is_y, &paired, &tree);
    for &(a, b) in &stars.edges {
        k.set(gi.edge_id(a, b).expect("edge"), Usage::SinglePending);
    }
    let (k, odd) = restore_parity(gi, &k, &tree)?;
    if odd {
        return Err(Error::Internal("root parity odd".into()));
    }
    let reduced = part
        .backbone
        .iter()
        .filter(|&&(a, b)| k.get(gi.edge_id(a, b).expect("edge")) != Usage::TwoWay)
        .count();
    let rep = ComponentReport {
        nodes: n,
        x: part.x.len(),
        y: part.y.len(),
        z: part.z.len(),
        backbone: part.backbone.len(),
        pair_edges,
        star_edges: stars.edges.len(),
        reduced,
        stranded,
    };
    Ok((k, rep))
}

/// Stars of horizontal non-backbone edges covering every `Y` node without a
/// pair edge. Only star centers may carry pair edges.
fn star_forest(
    gi: &Graph,
    ys: &[usize],
    is_y: &[bool],
    paired: &[bool],
    tree: &SpanningTree,
) -> (StarForest, usize) {
    let n = gi.n();
    let mut covered = vec![false; n];
    let mut edges = Vec::new();
    let mut stranded = 0;
    for &y in ys {
        if paired[y] || covered[y] {
            continue;
        }
        let horiz: Vec<usize> = gi
            .neighbors(y)
            .iter()
            .copied()
            .filter(|&w| is_y[w] && !tree.contains_edge(y, w))
            .collect();
        let pick = horiz
            .iter()
            .find(|&&w| !paired[w] && !covered[w])
            .or_else(|| horiz.iter().find(|&&w| !paired[w]))
            .or_else(|| {
                stranded += 1;
                horiz.first()
            });
        if let Some(&w) = pick {
            covered[y] = true;
            covered[w] = true;
            edges.push((y.min(w), y.max(w)));
        }
    }
    edges.sort_unstable();
    edges.dedup();
    prune_to_stars(n, &mut edges);
    // a paired endpoint may only be a center: drop it where it is a leaf of
    // a larger star, the center stays covered by its other leaves
    let mut deg = vec![0usize; n];
    for &(a, b) in &edges {
        deg[a] += 1;
        deg[b] += 1;
    }
    edges.retain(|&(a, b)| {
        let drop = (paired[a] && deg[a] == 1 && deg[b] >= 2) || (paired[b] && deg[b] == 1 && deg[a] >= 2) || (paired[a] && paired[b]);
        if drop {
            deg[a] -= 1;
            deg[b] -= 1;
        }
        !drop
    });
    (StarForest { edges }, stranded)
}
