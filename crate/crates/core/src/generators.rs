//! Deterministic graph families.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::witness::Hooks;

/// A named family with its parameters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FamilySpec {
    DiamondChain { k: usize, l: usize },
    Parachute { k: usize },
    RandomConnected { n: usize, m: usize, seed: u64 },
    RandomTwoConnected { n: usize, m: usize, seed: u64 },
    Cycle { n: usize },
    Path { n: usize },
    Star { n: usize },
    Complete { n: usize },
    Grid { r: usize, c: usize },
}

impl FamilySpec {
    pub fn generate(&self) -> Result<Graph> {
        match *self {
            FamilySpec::DiamondChain { k, l } => gen_diamond_chain(k, l),
            FamilySpec::Parachute { k } => gen_parachute(k),
            FamilySpec::RandomConnected { n, m, seed } => gen_random_connected(n, m, seed),
            FamilySpec::RandomTwoConnected { n, m, seed } => gen_random_two_connected(n, m, seed),
            FamilySpec::Cycle { n } => gen_cycle(n),
            FamilySpec::Path { n } => gen_path(n),
            FamilySpec::Star { n } => gen_star(n),
            FamilySpec::Complete { n } => gen_complete(n),
            FamilySpec::Grid { r, c } => gen_grid(r, c),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            FamilySpec::DiamondChain { .. } => "diamond_chain",
            FamilySpec::Parachute { .. } => "parachute",
            FamilySpec::RandomConnected { .. } => "random_connected",
            FamilySpec::RandomTwoConnected { .. } => "random_two_connected",
            FamilySpec::Cycle { .. } => "cycle",
            FamilySpec::Path { .. } => "path",
            FamilySpec::Star { .. } => "star",
            FamilySpec::Complete { .. } => "complete",
            FamilySpec::Grid { .. } => "grid",
        }
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            FamilySpec::DiamondChain { k, l } => write!(f, "diamond_chain(k={k},l={l})"),
            FamilySpec::Parachute { k } => write!(f, "parachute(k={k})"),
            FamilySpec::RandomConnected { n, m, seed } => write!(f, "random_connected(n={n},m={m},seed={seed})"),
            FamilySpec::RandomTwoConnected { n, m, seed } => {
                write!(f, "random_two_connected(n={n},m={m},seed={seed})")
            }
            FamilySpec::Cycle { n } => write!(f, "cycle(n={n})"),
            FamilySpec::Path { n } => write!(f, "path(n={n})"),
            FamilySpec::Star { n } => write!(f, "star(n={n})"),
            FamilySpec::Complete { n } => write!(f, "complete(n={n})"),
            FamilySpec::Grid { r, c } => write!(f, "grid(r={r},c={c})"),
        }
    }
}

/// Parses `name(key=value,...)`, e.g. `grid(r=3,c=4)`.
impl FromStr for FamilySpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::BadParams(format!("cannot parse family {s:?}"));
        let s = s.trim();
        let (name, rest) = s.split_once('(').ok_or_else(bad)?;
        let body = rest.strip_suffix(')').ok_or_else(bad)?;
        let mut kv = std::collections::HashMap::new();
        for part in body.split(',').filter(|p| !p.trim().is_empty()) {
            let (k, v) = part.split_once('=').ok_or_else(bad)?;
            let v: u64 = v.trim().parse().map_err(|_| bad())?;
            kv.insert(k.trim().to_string(), v);
        }
        let get = |k: &str| kv.get(k).copied().ok_or_else(bad);
        let us = |k: &str| get(k).map(|v| v as usize);
        Ok(match name.trim() {
            "diamond_chain" => FamilySpec::DiamondChain { k: us("k")?, l: us("l").unwrap_or(0) },
            "parachute" => FamilySpec::Parachute { k: us("k")? },
            "random_connected" => FamilySpec::RandomConnected { n: us("n")?, m: us("m")?, seed: get("seed")? },
            "random_two_connected" => FamilySpec::RandomTwoConnected { n: us("n")?, m: us("m")?, seed: get("seed")? },
            "cycle" => FamilySpec::Cycle { n: us("n")? },
            "path" => FamilySpec::Path { n: us("n")? },
            "star" => FamilySpec::Star { n: us("n")? },
            "complete" => FamilySpec::Complete { n: us("n")? },
            "grid" => FamilySpec::Grid { r: us("r")?, c: us("c")? },
            _ => return Err(bad()),
        })
    }
}

/// Node ids of a diamond: hubs `v`, `u` and the three middle nodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Diamond {
    pub v: usize,
    pub u: usize,
    pub x: usize,
    pub y: usize,
    pub z: usize,
}

impl Diamond {
    fn at(base: usize) -> Self {
        Diamond {
            v: base,
            u: base + 1,
            x: base + 2,
            y: base + 3,
            z: base + 4,
        }
    }

    fn edges(&self) -> [(usize, usize); 6] {
        [
            (self.v, self.x),
            (self.x, self.u),
            (self.u, self.y),
            (self.y, self.v),
            (self.v, self.z),
            (self.z, self.u),
        ]
    }
}

/// The `i`-th diamond (1-based) of [`gen_diamond_chain`].
pub fn diamond_nodes(i: usize) -> Diamond {
    Diamond::at(1 + 5 * (i - 1))
}

/// A lone diamond, `K_{2,3}` with hubs 0 and 1.
pub fn gen_diamond() -> Graph {
    let d = Diamond::at(0);
    Graph::from_edges(5, &d.edges()).expect("diamond is valid")
}

/// Node 0 joined to the first of `k` diamonds chained hub to hub, with a path
/// of `l` extra nodes hanging from the last hub.
pub fn gen_diamond_chain(k: usize, l: usize) -> Result<Graph> {
    if k == 0 || l > 4 {
        return Err(Error::BadParams("diamond chain needs k >= 1 and l <= 4".into()));
    }
    let n = 1 + 5 * k + l;
    let mut edges = vec![(0, 1)];
    for i in 1..=k {
        let d = diamond_nodes(i);
        edges.extend(d.edges());
        if i < k {
            edges.push((d.u, diamond_nodes(i + 1).v));
        }
    }
    let mut prev = diamond_nodes(k).u;
    for j in 0..l {
        let w = 1 + 5 * k + j;
        edges.push((prev, w));
        prev = w;
    }
    Graph::from_edges(n, &edges)
}

/// Ids of the parachute nodes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParachuteNodes {
    /// `xs[i]` is the `(i+1)`-th hub of the chain.
    pub xs: Vec<usize>,
    /// Chain nodes between hubs, two per copy, in chain order.
    pub chain: Vec<usize>,
    /// Node adjacent to every chain node between hubs.
    pub apex: usize,
    /// Node adjacent to everything.
    pub top: usize,
}

pub fn parachute_nodes(k: usize) -> ParachuteNodes {
    ParachuteNodes {
        xs: (0..=k).collect(),
        chain: (k + 1..=3 * k).collect(),
        apex: 3 * k + 1,
        top: 3 * k + 2,
    }
}

/// `k` copies of a four-node path glued end to end, an apex joined to the
/// first hub and to every inner chain node, and a top node joined to all.
pub fn gen_parachute(k: usize) -> Result<Graph> {
    if k == 0 {
        return Err(Error::BadParams("parachute needs k >= 1".into()));
    }
    let p = parachute_nodes(k);
    let mut edges = Vec::new();
    for i in 0..k {
        let (a, b) = (p.chain[2 * i], p.chain[2 * i + 1]);
        edges.push((p.xs[i], a));
        edges.push((a, b));
        edges.push((b, p.xs[i + 1]));
    }
    edges.push((p.xs[0], p.apex));
    for &c in &p.chain {
        edges.push((c, p.apex));
    }
    for v in 0..p.top {
        edges.push((v, p.top));
    }
    Graph::from_edges(3 * k + 3, &edges)
}

/// Choices that steer the general builder into its worst case on the
/// parachute: the star at the top node as tree, then the hubs saturated in
/// chain order.
pub fn parachute_hooks(k: usize) -> Hooks {
    let p = parachute_nodes(k);
    Hooks {
        tree_edges: (0..p.top).map(|v| (v, p.top)).collect(),
        start: Some(p.xs[0]),
        saturate: p.xs[1..].to_vec(),
    }
}

/// Random spanning tree plus `m - (n - 1)` distinct random extra edges.
pub fn gen_random_connected(n: usize, m: usize, seed: u64) -> Result<Graph> {
    if n == 0 || m + 1 < n || m > n * (n - 1) / 2 {
        return Err(Error::BadParams(format!("no connected graph with n={n}, m={m}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(&mut rng);
    let mut edges: Vec<(usize, usize)> = (1..n)
        .map(|i| {
            let j = rng.gen_range(0..i);
            (perm[i].min(perm[j]), perm[i].max(perm[j]))
        })
        .collect();
    add_random_edges(n, m, &mut edges, &mut rng);
    Graph::from_edges(n, &edges)
}

/// Random Hamiltonian cycle plus random extra edges; always 2-connected.
pub fn gen_random_two_connected(n: usize, m: usize, seed: u64) -> Result<Graph> {
    if n < 3 || m < n || m > n * (n - 1) / 2 {
        return Err(Error::BadParams(format!("no 2-connected graph with n={n}, m={m}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(&mut rng);
    let mut edges: Vec<(usize, usize)> = (0..n)
        .map(|i| {
            let (a, b) = (perm[i], perm[(i + 1) % n]);
            (a.min(b), a.max(b))
        })
        .collect();
    add_random_edges(n, m, &mut edges, &mut rng);
    Graph::from_edges(n, &edges)
}

fn add_random_edges(n: usize, m: usize, edges: &mut Vec<(usize, usize)>, rng: &mut ChaCha8Rng) {
    let mut have: HashSet<(usize, usize)> = edges.iter().copied().collect();
    let max = n * (n - 1) / 2;
    if 2 * m > max {
        let mut rest: Vec<(usize, usize)> = (0..n)
            .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
            .filter(|e| !have.contains(e))
            .collect();
        rest.shuffle(rng);
        edges.extend(rest.into_iter().take(m - edges.len()));
        return;
    }
    while edges.len() < m {
        let a = rng.gen_range(0..n);
        let b = rng.gen_range(0..n);
        if a != b && have.insert((a.min(b), a.max(b))) {
            edges.push((a.min(b), a.max(b)));
        }
    }
}

pub fn gen_cycle(n: usize) -> Result<Graph> {
    if n < 3 {
        return Err(Error::BadParams("cycle needs n >= 3".into()));
    }
    let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    Graph::from_edges(n, &edges)
}

pub fn gen_path(n: usize) -> Result<Graph> {
    let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
    Graph::from_edges(n, &edges)
}

/// Center 0 and `n - 1` leaves.
pub fn gen_star(n: usize) -> Result<Graph> {
    let edges: Vec<_> = (1..n).map(|i| (0, i)).collect();
    Graph::from_edges(n, &edges)
}

pub fn gen_complete(n: usize) -> Result<Graph> {
    let edges: Vec<_> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    Graph::from_edges(n, &edges)
}

/// `r` by `c` grid, node `i * c + j` at row `i`, column `j`.
pub fn gen_grid(r: usize, c: usize) -> Result<Graph> {
    let mut edges = Vec::new();
    for i in 0..r {
        for j in 0..c {
            let v = i * c + j;
            if j + 1 < c {
                edges.push((v, v + 1));
            }
            if i + 1 < r {
                edges.push((v, v + c));
            }
        }
    }
    Graph::from_edges(r * c, &edges)
}

pub fn gen_petersen() -> Graph {
    let mut edges = Vec::new();
    for i in 0..5 {
        edges.push((i, (i + 1) % 5));
        edges.push((i, i + 5));
        edges.push((5 + i, 5 + (i + 2) % 5));
    }
    Graph::from_edges(10, &edges).expect("petersen is valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_sizes() {
        let g = gen_diamond_chain(1, 0).unwrap();
        assert_eq!((g.n(), g.m()), (6, 7));
        let g = gen_diamond_chain(2, 0).unwrap();
        assert_eq!((g.n(), g.m()), (11, 14));
        let g = gen_diamond_chain(1, 2).unwrap();
        assert_eq!((g.n(), g.m()), (8, 9));
        assert_eq!(g.neighbors(7), &[6]);
        let p = gen_parachute(1).unwrap();
        assert_eq!(p.n(), 6);
        assert_eq!(p.degree(5), 5);
        let p = gen_parachute(2).unwrap();
        assert_eq!(p.n(), 9);
        assert_eq!(p.degree(parachute_nodes(2).apex), 6);
        assert_eq!(p.m(), 8 * 2 + 3);
        assert_eq!(gen_petersen().m(), 15);
        assert_eq!(gen_grid(3, 4).unwrap().m(), 17);
    }

    #[test]
    fn random_graphs() {
        let t = gen_random_connected(30, 29, 7).unwrap();
        assert_eq!(t.m(), 29);
        let k5 = gen_random_connected(5, 10, 1).unwrap();
        assert_eq!(k5, gen_complete(5).unwrap());
        assert_eq!(gen_random_connected(40, 90, 3).unwrap(), gen_random_connected(40, 90, 3).unwrap());
        assert!(gen_random_connected(5, 11, 0).is_err());
        assert!(gen_random_connected(5, 3, 0).is_err());
        let h = gen_random_two_connected(20, 30, 9).unwrap();
        assert_eq!(h.m(), 30);
    }

    #[test]
    fn family_spec_parse() {
        let f: FamilySpec = "grid(r=3,c=4)".parse().unwrap();
        assert_eq!(f, FamilySpec::Grid { r: 3, c: 4 });
        assert_eq!(f.to_string().parse::<FamilySpec>().unwrap(), f);
        let f: FamilySpec = "random_connected(n=10,m=12,seed=5)".parse().unwrap();
        assert_eq!(f.to_string().parse::<FamilySpec>().unwrap(), f);
        assert!("blob(n=3)".parse::<FamilySpec>().is_err());
    }
}
