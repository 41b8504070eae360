//! Exhaustive search for the shortest witness cycle on tiny graphs.
//!
//! The right-hand successor structure depends only on the cyclic order of
//! ports at each node, so it is enough to enumerate `(d_v - 1)!` orders per
//! node with the lowest neighbor fixed in front.

use crate::error::{Error, Result};
use crate::graph::{DartId, Graph, PortMap};

/// Shortest spanning RH-cycle over all port numberings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleResult {
    pub min_len: usize,
    /// First numbering found that achieves the minimum.
    pub ports: PortMap,
    /// Numberings enumerated.
    pub enumerated: u128,
}

fn factorial(k: usize) -> u128 {
    (1..=k as u128).product()
}

/// Cyclic orders of `items` with `items[0]` kept first.
fn cyclic_orders(items: &[usize]) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, rest: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest.is_empty() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..rest.len() {
            let x = rest.remove(i);
            prefix.push(x);
            rec(prefix, rest, out);
            prefix.pop();
            rest.insert(i, x);
        }
    }
    if items.is_empty() {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    rec(&mut vec![items[0]], &mut items[1..].to_vec(), &mut out);
    out
}

/// Number of numberings the oracle would enumerate.
pub fn oracle_workload(g: &Graph) -> u128 {
    (0..g.n()).fold(1u128, |acc, v| {
        acc.saturating_mul(factorial(g.degree(v).saturating_sub(1)))
    })
}

struct Walker<'a> {
    g: &'a Graph,
    choices: Vec<Vec<Vec<usize>>>,
    // per dart: successor dart for the current numbering
    next: Vec<DartId>,
    seen: Vec<u32>,
    mark: Vec<u32>,
    stamp: u32,
}

impl Walker<'_> {
    fn set_node(&mut self, v: usize, order: &[usize]) {
        let d = order.len();
        for (i, &w) in order.iter().enumerate() {
            let arrive = self.g.dart(w, v).expect("neighbor");
            self.next[arrive] = self.g.dart(v, order[(i + 1) % d]).expect("neighbor");
        }
    }

    // Calls `f(len, first dart)` for every RH-cycle that covers all nodes.
    fn spanning_cycles(&mut self, mut f: impl FnMut(usize, DartId)) {
        let n = self.g.n();
        self.stamp += 1;
        let round = self.stamp;
        for s in 0..self.next.len() {
            if self.seen[s] == round {
                continue;
            }
            self.stamp += 1;
            let cyc = self.stamp;
            let mut len = 0;
            let mut covered = 0;
            let mut d = s;
            loop {
                self.seen[d] = round;
                len += 1;
                let t = self.g.tail(d);
                if self.mark[t] != cyc {
                    self.mark[t] = cyc;
                    covered += 1;
                }
                d = self.next[d];
                if d == s {
                    break;
                }
            }
            if covered == n {
                f(len, s);
            }
        }
        // the per-cycle stamps must never collide with the next round
        self.stamp += 1;
    }
}

fn enumerate(g: &Graph, cap: u128, mut visit: impl FnMut(&mut Walker<'_>, &[usize])) -> Result<u128> {
    let needed = oracle_workload(g);
    if needed > cap {
        return Err(Error::CapExceeded { needed, cap });
    }
    let choices: Vec<Vec<Vec<usize>>> = (0..g.n()).map(|v| cyclic_orders(g.neighbors(v))).collect();
    let mut w = Walker {
        g,
        choices,
        next: vec![0; g.num_darts()],
        seen: vec![0; g.num_darts()],
        mark: vec![0; g.n()],
        stamp: 0,
    };
    let mut idx = vec![0usize; g.n()];
    for v in 0..g.n() {
        let o = w.choices[v][0].clone();
        w.set_node(v, &o);
    }
    let mut count = 0u128;
    loop {
        count += 1;
        visit(&mut w, &idx);
        // mixed-radix increment
        let mut v = 0;
        loop {
            if v == g.n() {
                return Ok(count);
            }
            idx[v] += 1;
            if idx[v] == w.choices[v].len() {
                idx[v] = 0;
            }
            let o = w.choices[v][idx[v]].clone();
            w.set_node(v, &o);
            if idx[v] != 0 {
                break;
            }
            v += 1;
        }
    }
}

fn port_map(g: &Graph, choices: &[Vec<Vec<usize>>], idx: &[usize]) -> PortMap {
    let order = (0..g.n()).map(|v| choices[v][idx[v]].clone()).collect();
    PortMap::new(g, order).expect("enumerated orders are valid")
}

/// Minimum length of an RH-cycle through every node, over all numberings.
/// Fails with `CapExceeded` when more than `cap` numberings would be needed.
pub fn brute_force_min_witness(g: &Graph, cap: u128) -> Result<OracleResult> {
    if g.n() == 1 {
        return Ok(OracleResult {
            min_len: 0,
            ports: PortMap::ascending(g),
            enumerated: 1,
        });
    }
    let mut best: Option<(usize, Vec<usize>)> = None;
    let mut choices = Vec::new();
    let enumerated = enumerate(g, cap, |w, idx| {
        let mut shortest = usize::MAX;
        w.spanning_cycles(|len, _| shortest = shortest.min(len));
        if shortest < best.as_ref().map_or(usize::MAX, |b| b.0) {
            best = Some((shortest, idx.to_vec()));
        }
        if choices.is_empty() {
            choices = w.choices.clone();
        }
    })?;
    let (min_len, idx) = best.ok_or(Error::Infeasible)?;
    Ok(OracleResult {
        min_len,
        ports: port_map(g, &choices, &idx),
        enumerated,
    })
}

/// A numbering together with the darts of its spanning cycle.
pub type NumberedCycle = (PortMap, Vec<DartId>);

/// Every shortest spanning RH-cycle, as the numbering and the cycle's darts.
pub fn all_min_witnesses(g: &Graph, cap: u128) -> Result<(usize, Vec<NumberedCycle>)> {
    let mut best = usize::MAX;
    let mut found: Vec<(Vec<usize>, DartId)> = Vec::new();
    let mut choices = Vec::new();
    let mut nexts: Vec<Vec<DartId>> = Vec::new();
    enumerate(g, cap, |w, idx| {
        let mut hits = Vec::new();
        w.spanning_cycles(|len, s| hits.push((len, s)));
        for (len, s) in hits {
            if len < best {
                best = len;
                found.clear();
                nexts.clear();
            }
            if len == best {
                found.push((idx.to_vec(), s));
                nexts.push(w.next.clone());
            }
        }
        if choices.is_empty() {
            choices = w.choices.clone();
        }
    })?;
    if found.is_empty() {
        return Err(Error::Infeasible);
    }
    let out = found
        .into_iter()
        .zip(nexts)
        .map(|((idx, s), next)| {
            let mut cyc = vec![s];
            let mut d = next[s];
            while d != s {
                cyc.push(d);
                d = next[d];
            }
            (port_map(g, &choices, &idx), cyc)
        })
        .collect();
    Ok((best, out))
}
