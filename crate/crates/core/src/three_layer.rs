//! Three-layer partition `(X, Y, Z, T_B)` of a connected graph.
//!
//! Nodes are promoted one at a time into the saturated layer `X`; every other
//! node sits in `Y = N(X)`, `Z = N(Y) \ X`, `P = N(Z) \ Y` or the rest `R`.
//! A layer change only ever moves a node closer to `X`, so each node changes
//! layer at most four times and each change scans its adjacency once.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Layer {
    X,
    Y,
    Z,
    P,
    R,
}

/// Result of the partition: layers plus the backbone tree over `X ∪ Y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThreeLayerPartition {
    pub x: Vec<usize>,
    pub y: Vec<usize>,
    pub z: Vec<usize>,
    /// Backbone edges as `(u, v)` with `u < v`, sorted.
    pub backbone: Vec<(usize, usize)>,
    /// Nodes in the order they were saturated.
    pub saturation_order: Vec<usize>,
    /// Neighbor-list entries scanned while building.
    pub scans: u64,
}

/// Overrides for the choices the procedure leaves open.
#[derive(Debug, Clone, Default)]
pub struct PartitionOptions {
    /// First node to saturate (defaults to the lowest id).
    pub start: Option<usize>,
    /// Nodes to saturate next, in order, before the priority rule resumes.
    /// Each must be legal when its turn comes.
    pub forced: Vec<usize>,
}

struct Builder<'a> {
    g: &'a Graph,
    layer: Vec<Layer>,
    in_tree: Vec<bool>,
    // Y nodes: incident horizontal edges outside the backbone.
    free_horizontal: Vec<usize>,
    // Z nodes: neighbors in Y.
    y_neighbors: Vec<usize>,
    cand_y: BTreeSet<usize>,
    cand_z: BTreeSet<usize>,
    p_set: BTreeSet<usize>,
    order: Vec<usize>,
    scans: u64,
}

impl<'a> Builder<'a> {
    fn new(g: &'a Graph) -> Self {
        Builder {
            g,
            layer: vec![Layer::R; g.n()],
            in_tree: vec![false; g.m()],
            free_horizontal: vec![0; g.n()],
            y_neighbors: vec![0; g.n()],
            cand_y: BTreeSet::new(),
            cand_z: BTreeSet::new(),
            p_set: BTreeSet::new(),
            order: Vec::new(),
            scans: 0,
        }
    }

    fn refresh_candidate(&mut self, v: usize) {
        self.cand_y.remove(&v);
        self.cand_z.remove(&v);
        match self.layer[v] {
            Layer::Y if self.free_horizontal[v] == 0 => {
                self.cand_y.insert(v);
            }
            Layer::Z if self.y_neighbors[v] == 1 => {
                self.cand_z.insert(v);
            }
            _ => {}
        }
    }

    fn saturable(&self, v: usize) -> bool {
        match self.layer[v] {
            Layer::X => false,
            Layer::Y => self.free_horizontal[v] == 0,
            Layer::Z => self.y_neighbors[v] == 1,
            Layer::P | Layer::R => true,
        }
    }

    /// Moves `v` up to `to`, keeping the counters of its neighbors current.
    fn promote(&mut self, v: usize, to: Layer) {
        let from = self.layer[v];
        debug_assert!(to < from);
        if from == Layer::P {
            self.p_set.remove(&v);
        }
        self.layer[v] = to;
        match to {
            Layer::P => {
                self.p_set.insert(v);
            }
            Layer::Z => {
                let mut count = 0;
                for d in self.g.darts_from(v) {
                    self.scans += 1;
                    let w = self.g.head(d);
                    match self.layer[w] {
                        Layer::Y => count += 1,
                        Layer::R => self.promote(w, Layer::P),
                        _ => {}
                    }
                }
                self.y_neighbors[v] = count;
            }
            Layer::Y => {
                let mut horizontal = 0;
                for d in self.g.darts_from(v) {
                    self.scans += 1;
                    let w = self.g.head(d);
                    match self.layer[w] {
                        Layer::Y => {
                            if !self.in_tree[self.g.edge_of(d)] {
                                horizontal += 1;
                                self.free_horizontal[w] += 1;
                                self.refresh_candidate(w);
                            }
                        }
                        Layer::Z => {
                            self.y_neighbors[w] += 1;
                            self.refresh_candidate(w);
                        }
                        Layer::P | Layer::R => self.promote(w, Layer::Z),
                        Layer::X => {}
                    }
                }
                self.free_horizontal[v] = horizontal;
            }
            Layer::X => {
                if from == Layer::Y {
                    for d in self.g.darts_from(v) {
                        self.scans += 1;
                        let w = self.g.head(d);
                        if self.layer[w] == Layer::Y && !self.in_tree[self.g.edge_of(d)] {
                            self.free_horizontal[w] -= 1;
                            self.refresh_candidate(w);
                        }
                    }
                }
                for d in self.g.darts_from(v) {
                    self.scans += 1;
                    let w = self.g.head(d);
                    if self.layer[w] > Layer::Y {
                        self.promote(w, Layer::Y);
                    }
                }
            }
            Layer::R => unreachable!(),
        }
        self.refresh_candidate(v);
    }

    fn add_tree_edge(&mut self, e: usize) -> Result<()> {
        if self.in_tree[e] {
            return Err(Error::Internal(format!("backbone edge {e} inserted twice")));
        }
        self.in_tree[e] = true;
        let (a, b) = self.g.edges()[e];
        if self.layer[a] == Layer::Y && self.layer[b] == Layer::Y {
            self.free_horizontal[a] -= 1;
            self.free_horizontal[b] -= 1;
            self.refresh_candidate(a);
            self.refresh_candidate(b);
        }
        Ok(())
    }

    fn saturate(&mut self, v: usize) -> Result<()> {
        let from = self.layer[v];
        if !self.saturable(v) {
            return Err(Error::Internal(format!("node {v} cannot be saturated")));
        }
        // Z neighbors of a P node are the only ones adjacent to the old Y
        // layer, so one of them carries the edge joining the new star.
        let former_z: Vec<usize> = if from == Layer::P {
            self.g
                .neighbors(v)
                .iter()
                .copied()
                .filter(|&w| self.layer[w] == Layer::Z)
                .collect()
        } else {
            Vec::new()
        };
        let new_edges: Vec<usize> = self
            .g
            .darts_from(v)
            .map(|d| self.g.edge_of(d))
            .filter(|&e| !self.in_tree[e])
            .collect();
        self.scans += self.g.degree(v) as u64;
        self.promote(v, Layer::X);
        self.order.push(v);
        for e in new_edges {
            self.in_tree[e] = true;
        }
        if from == Layer::P {
            // lowest (min, max) horizontal pair joining the new star
            let mut best: Option<(usize, usize)> = None;
            for &w in &former_z {
                for d in self.g.darts_from(w) {
                    self.scans += 1;
                    let u = self.g.head(d);
                    if u != v
                        && self.layer[u] == Layer::Y
                        && !self.in_tree[self.g.edge_of(d)]
                        && self.g.neighbors(v).binary_search(&u).is_err()
                    {
                        let pair = (w.min(u), w.max(u));
                        if best.is_none_or(|b| pair < b) {
                            best = Some(pair);
                        }
                    }
                }
            }
            let (a, b) = best.ok_or_else(|| {
                Error::Internal(format!("no horizontal edge joins the star of {v}"))
            })?;
            self.add_tree_edge(self.g.edge_id(a, b).unwrap())?;
        }
        Ok(())
    }

    fn next(&mut self) -> Option<usize> {
        self.cand_y
            .first()
            .or_else(|| self.cand_z.first())
            .or_else(|| self.p_set.first())
            .copied()
    }
}

/// Runs the partition with default choices.
pub fn three_layer_partition(g: &Graph) -> Result<ThreeLayerPartition> {
    three_layer_partition_with(g, &PartitionOptions::default())
}

pub fn three_layer_partition_with(g: &Graph, opts: &PartitionOptions) -> Result<ThreeLayerPartition> {
    let mut b = Builder::new(g);
    let start = opts.start.unwrap_or(0);
    if start >= g.n() {
        return Err(Error::BadParams(format!("start node {start} out of range")));
    }
    b.saturate(start)?;
    for &v in &opts.forced {
        if v >= g.n() || !b.saturable(v) {
            return Err(Error::BadParams(format!("forced saturation of {v} is not legal")));
        }
        b.saturate(v)?;
    }
    while let Some(v) = b.next() {
        b.saturate(v)?;
    }

    let mut part = ThreeLayerPartition {
        x: Vec::new(),
        y: Vec::new(),
        z: Vec::new(),
        backbone: Vec::new(),
        saturation_order: b.order,
        scans: b.scans,
    };
    for v in 0..g.n() {
        match b.layer[v] {
            Layer::X => part.x.push(v),
            Layer::Y => part.y.push(v),
            Layer::Z => part.z.push(v),
            _ => return Err(Error::Internal(format!("node {v} left outside X, Y, Z"))),
        }
    }
    part.backbone = g
        .edges()
        .iter()
        .enumerate()
        .filter(|(e, _)| b.in_tree[*e])
        .map(|(_, &uv)| uv)
        .collect();
    let violations = verify_partition(g, &part);
    if !violations.is_empty() {
        return Err(Error::Internal(format!(
            "partition invariants violated: {}",
            violations.join("; ")
        )));
    }
    Ok(part)
}

/// Checks every partition invariant and returns all violations found.
pub fn verify_partition(g: &Graph, p: &ThreeLayerPartition) -> Vec<String> {
    let mut out = Vec::new();
    let n = g.n();
    let mut layer = vec![None; n];
    for (set, l) in [(&p.x, Layer::X), (&p.y, Layer::Y), (&p.z, Layer::Z)] {
        for &v in set {
            if v >= n {
                out.push(format!("partition: node {v} out of range"));
                continue;
            }
            if layer[v].is_some() {
                out.push(format!("partition: node {v} in two layers"));
            }
            layer[v] = Some(l);
        }
    }
    for (v, l) in layer.iter().enumerate() {
        if l.is_none() {
            out.push(format!("partition: node {v} in no layer"));
        }
    }
    if !out.is_empty() {
        return out;
    }
    let layer: Vec<Layer> = layer.into_iter().map(Option::unwrap).collect();

    // layering: Y = N(X), Z = N(Y) \ X
    for v in 0..n {
        let near_x = g.neighbors(v).iter().any(|&w| layer[w] == Layer::X);
        let near_y = g.neighbors(v).iter().any(|&w| layer[w] == Layer::Y);
        match layer[v] {
            Layer::Y if !near_x => out.push(format!("layering: Y node {v} has no X neighbor")),
            Layer::Z if near_x => out.push(format!("layering: Z node {v} adjacent to X")),
            Layer::Z if !near_y => out.push(format!("layering: Z node {v} has no Y neighbor")),
            Layer::X => {
                for &w in g.neighbors(v) {
                    if layer[w] == Layer::Z {
                        out.push(format!("layering: X node {v} adjacent to Z node {w}"));
                    }
                }
            }
            _ => {}
        }
    }

    // backbone: a tree on X ∪ Y
    let mut in_tree = vec![false; g.m()];
    for &(a, b) in &p.backbone {
        match g.edge_id(a, b) {
            Some(e) => in_tree[e] = true,
            None => out.push(format!("backbone: ({a}, {b}) is not an edge")),
        }
    }
    let top: Vec<usize> = (0..n).filter(|&v| layer[v] != Layer::Z).collect();
    for &(a, b) in &p.backbone {
        if layer.get(a) == Some(&Layer::Z) || layer.get(b) == Some(&Layer::Z) {
            out.push(format!("backbone: edge ({a}, {b}) touches Z"));
        }
    }
    if p.backbone.len() + 1 != top.len() {
        out.push(format!(
            "backbone: {} edges for {} nodes",
            p.backbone.len(),
            top.len()
        ));
    }
    let mut uf = crate::util::UnionFind::new(n);
    for &(a, b) in &p.backbone {
        if a < n && b < n && !uf.union(a, b) {
            out.push(format!("backbone: edge ({a}, {b}) closes a cycle"));
        }
    }
    if let Some(&r) = top.first() {
        for &v in &top {
            if uf.find(v) != uf.find(r) {
                out.push(format!("backbone: node {v} not connected"));
            }
        }
    }
    for &v in &p.x {
        for d in g.darts_from(v) {
            if !in_tree[g.edge_of(d)] {
                out.push(format!("saturation: X node {v} edge to {} outside backbone", g.head(d)));
            }
        }
    }

    for &v in &p.y {
        let has = g
            .darts_from(v)
            .any(|d| layer[g.head(d)] == Layer::Y && !in_tree[g.edge_of(d)]);
        if !has {
            out.push(format!("property (1): Y node {v} has no horizontal edge outside the backbone"));
        }
    }
    for &v in &p.z {
        let k = g.neighbors(v).iter().filter(|&&w| layer[w] == Layer::Y).count();
        if k < 2 {
            out.push(format!("property (2): Z node {v} has {k} neighbor(s) in Y"));
        }
    }
    out
}

/// Partition dump: `X:`, `Y:`, `Z:` lines then `TB:` followed by edge lines.
pub fn write_partition(p: &ThreeLayerPartition) -> String {
    let mut out = String::new();
    for (name, set) in [("X", &p.x), ("Y", &p.y), ("Z", &p.z)] {
        out.push_str(name);
        out.push(':');
        for v in set {
            let _ = write!(out, " {v}");
        }
        out.push('\n');
    }
    out.push_str("TB:\n");
    for &(a, b) in &p.backbone {
        let _ = writeln!(out, "{a} {b}");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_saturates_in_order() {
        let g = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let p = three_layer_partition(&g).unwrap();
        assert_eq!(p.x, vec![0, 1, 2, 3]);
        assert!(p.y.is_empty() && p.z.is_empty());
        assert_eq!(p.saturation_order, vec![0, 1, 2, 3]);
        assert_eq!(p.backbone, vec![(0, 1), (1, 2), (2, 3)]);
    }

    #[test]
    fn star_backbone_is_every_edge() {
        let g = Graph::from_edges(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]).unwrap();
        let p = three_layer_partition(&g).unwrap();
        assert_eq!(p.backbone.len(), 4);
        assert!(p.z.is_empty());
        // leaves have no horizontal edge, so they are saturated too
        assert_eq!(p.x.len(), 5);
    }

    #[test]
    fn cycle_has_two_y_and_one_z() {
        let g = Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)]).unwrap();
        let p = three_layer_partition(&g).unwrap();
        assert!(verify_partition(&g, &p).is_empty());
    }

    #[test]
    fn p_saturation_adds_one_horizontal_edge() {
        // 0's star {1,2}; 3 adjacent to 1 and 2 sits in Z with two Y
        // neighbors; 4 is in P and joins through the horizontal 1-5 or 3-...
        let g = Graph::from_edges(
            7,
            &[(0, 1), (0, 2), (1, 2), (1, 3), (2, 3), (3, 4), (4, 5), (5, 1), (4, 6), (6, 5)],
        )
        .unwrap();
        let p = three_layer_partition(&g).unwrap();
        assert!(verify_partition(&g, &p).is_empty(), "{:?}", verify_partition(&g, &p));
    }

    #[test]
    fn detects_property_violations() {
        let g = Graph::from_edges(4, &[(0, 1), (0, 2), (1, 2), (2, 3)]).unwrap();
        // Y node 1 with its only horizontal edge inside the backbone
        let p = ThreeLayerPartition {
            x: vec![0],
            y: vec![1, 2],
            z: vec![3],
            backbone: vec![(0, 1), (0, 2), (1, 2)],
            saturation_order: vec![0],
            scans: 0,
        };
        let v = verify_partition(&g, &p);
        assert!(v.iter().any(|s| s.starts_with("property (1)")));
        assert!(v.iter().any(|s| s.starts_with("property (2)")));
        assert!(v.iter().any(|s| s.contains("closes a cycle")));
    }

    #[test]
    fn forced_order_is_checked() {
        let g = Graph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let opts = PartitionOptions {
            start: Some(0),
            forced: vec![1],
        };
        // 1 is in Y with a free horizontal edge to 2
        assert!(three_layer_partition_with(&g, &opts).is_err());
    }

    #[test]
    fn dump_format() {
        let g = Graph::from_edges(2, &[(0, 1)]).unwrap();
        let p = three_layer_partition(&g).unwrap();
        assert_eq!(write_partition(&p), "X: 0 1\nY:\nZ:\nTB:\n0 1\n");
    }
}
