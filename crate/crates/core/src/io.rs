//! Plain-text file formats.
//!
//! * graph file: `n m`, then `m` lines `u v` with `u < v`; an optional third
//!   column `T|F|B|U|P` annotates edge usage.
//! * labeled file: `n m`, then one line `i: a b c` per node listing the
//!   neighbors of `i` in port order.
//! * witness trace: `L=<length>` then one `node exit_port` line per step.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::{Graph, PortMap, Usage, UsageMap};

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

fn numbers(line_no: usize, line: &str) -> Result<Vec<usize>> {
    line.split_whitespace()
        .map(|t| {
            t.parse::<usize>()
                .map_err(|_| parse_err(line_no, format!("not a number: {t:?}")))
        })
        .collect()
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn usage_letter(u: Usage) -> char {
    match u {
        Usage::TwoWay => 'T',
        Usage::SingleForward => 'F',
        Usage::SingleBackward => 'B',
        Usage::Unused => 'U',
        Usage::SinglePending => 'P',
    }
}

/// Parses a graph file, ignoring any usage column.
pub fn parse_graph(text: &str) -> Result<Graph> {
    parse_graph_with_usage(text).map(|(g, _)| g)
}

/// Parses a graph file and, when every edge line carries a third column, the
/// usage annotation.
pub fn parse_graph_with_usage(text: &str) -> Result<(Graph, Option<UsageMap>)> {
    let lines: Vec<(usize, String)> = content_lines(text).map(|(i, l)| (i, l.to_string())).collect();
    let mut it = lines.iter().map(|(i, l)| (*i, l.as_str()));
    let (first_no, first) = it.next().ok_or_else(|| parse_err(1, "missing header"))?;
    let (n, m) = match numbers(first_no, first)?.as_slice() {
        [n, m] => (*n, *m),
        _ => return Err(parse_err(first_no, "header must be `n m`")),
    };
    let mut edges = Vec::with_capacity(m);
    let mut letters = Vec::with_capacity(m);
    for (no, line) in it {
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != 2 && toks.len() != 3 {
            return Err(parse_err(no, "edge line must be `u v [usage]`"));
        }
        let u: usize = toks[0]
            .parse()
            .map_err(|_| parse_err(no, format!("not a number: {:?}", toks[0])))?;
        let v: usize = toks[1]
            .parse()
            .map_err(|_| parse_err(no, format!("not a number: {:?}", toks[1])))?;
        if u >= v {
            return Err(parse_err(no, "edge endpoints must satisfy u < v"));
        }
        if v >= n {
            return Err(parse_err(no, format!("node {v} out of range")));
        }
        edges.push((u, v));
        letters.push(toks.get(2).copied());
    }
    if edges.len() != m {
        return Err(parse_err(
            first_no,
            format!("header announces {m} edges, found {}", edges.len()),
        ));
    }
    let g = Graph::from_edges(n, &edges)?;
    let usage = if letters.iter().all(|l| l.is_some()) && !letters.is_empty() {
        let mut um = UsageMap::new(&g);
        for (&(u, v), l) in edges.iter().zip(&letters) {
            let role = match l.unwrap() {
                "T" => Usage::TwoWay,
                "F" => Usage::SingleForward,
                "B" => Usage::SingleBackward,
                "U" => Usage::Unused,
                "P" => Usage::SinglePending,
                other => return Err(parse_err(0, format!("unknown usage letter {other:?}"))),
            };
            um.set(g.edge_id(u, v).unwrap(), role);
        }
        Some(um)
    } else if letters.iter().any(|l| l.is_some()) {
        return Err(parse_err(first_no, "usage column must be given for every edge or none"));
    } else {
        None
    };
    Ok((g, usage))
}

pub fn write_graph(g: &Graph) -> String {
    let mut out = format!("{} {}\n", g.n(), g.m());
    for &(u, v) in g.edges() {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}

pub fn write_graph_with_usage(g: &Graph, usage: &UsageMap) -> String {
    let mut out = format!("{} {}\n", g.n(), g.m());
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        let _ = writeln!(out, "{u} {v} {}", usage_letter(usage.get(e)));
    }
    out
}

pub fn write_labeled(g: &Graph, pm: &PortMap) -> String {
    let mut out = format!("{} {}\n", g.n(), g.m());
    for v in 0..g.n() {
        let _ = write!(out, "{v}:");
        for &w in pm.order(v) {
            let _ = write!(out, " {w}");
        }
        out.push('\n');
    }
    out
}

pub fn parse_labeled(text: &str) -> Result<(Graph, PortMap)> {
    let lines: Vec<(usize, String)> = content_lines(text).map(|(i, l)| (i, l.to_string())).collect();
    let mut it = lines.iter().map(|(i, l)| (*i, l.as_str()));
    let (n, m) = header_of(&mut it)?;
    let mut order: Vec<Vec<usize>> = Vec::with_capacity(n);
    for (no, line) in it {
        let (id, rest) = line
            .split_once(':')
            .ok_or_else(|| parse_err(no, "node line must be `i: a b ...`"))?;
        let id: usize = id
            .trim()
            .parse()
            .map_err(|_| parse_err(no, "bad node id"))?;
        if id != order.len() {
            return Err(parse_err(no, format!("expected node {}, found {id}", order.len())));
        }
        order.push(numbers(no, rest)?);
    }
    if order.len() != n {
        return Err(parse_err(0, format!("expected {n} node lines, found {}", order.len())));
    }
    let mut edges = Vec::new();
    for (v, row) in order.iter().enumerate() {
        for &w in row {
            if w >= n {
                return Err(Error::Validation(format!("neighbor {w} of {v} out of range")));
            }
            if v < w {
                edges.push((v, w));
            } else if !order[w].contains(&v) {
                return Err(Error::Validation(format!("adjacency of {v} and {w} is not symmetric")));
            }
        }
    }
    if edges.len() != m {
        return Err(Error::Validation(format!(
            "header announces {m} edges, adjacency has {}",
            edges.len()
        )));
    }
    let g = Graph::from_edges(n, &edges)?;
    let pm = PortMap::new(&g, order)?;
    Ok((g, pm))
}

fn header_of<'a>(it: &mut impl Iterator<Item = (usize, &'a str)>) -> Result<(usize, usize)> {
    let (no, line) = it.next().ok_or_else(|| parse_err(1, "missing header"))?;
    match numbers(no, line)?.as_slice() {
        [n, m] => Ok((*n, *m)),
        _ => Err(parse_err(no, "header must be `n m`")),
    }
}

/// Graphviz document. Two-way edges are solid, singles dashed with an arrow
/// in the direction of travel, unused edges dotted; ports label edge ends.
pub fn export_dot(g: &Graph, pm: &PortMap, usage: Option<&UsageMap>) -> String {
    let mut out = String::from("graph G {\n");
    for v in 0..g.n() {
        let _ = writeln!(out, "  {v};");
    }
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        let pu = pm.port(g, u, v).unwrap();
        let pv = pm.port(g, v, u).unwrap();
        let role = usage.map_or(Usage::TwoWay, |um| um.get(e));
        let (a, b, pa, pb, style) = match role {
            Usage::TwoWay => (u, v, pu, pv, "style=solid"),
            Usage::SingleForward => (u, v, pu, pv, "style=dashed, dir=forward"),
            Usage::SingleBackward => (v, u, pv, pu, "style=dashed, dir=forward"),
            Usage::SinglePending => (u, v, pu, pv, "style=dashed"),
            Usage::Unused => (u, v, pu, pv, "style=dotted"),
        };
        let _ = writeln!(
            out,
            "  {a} -- {b} [{style}, taillabel=\"{pa}\", headlabel=\"{pb}\"];"
        );
    }
    out.push_str("}\n");
    out
}

/// Witness trace: header `L=<len>`, then `node exit_port` per step.
pub fn write_witness(steps: &[(usize, usize)]) -> String {
    let mut out = format!("L={}\n", steps.len());
    for &(v, p) in steps {
        let _ = writeln!(out, "{v} {p}");
    }
    out
}

pub fn parse_witness(text: &str) -> Result<Vec<(usize, usize)>> {
    let mut lines = content_lines(text);
    let (no, head) = lines.next().ok_or_else(|| parse_err(1, "missing header"))?;
    let len: usize = head
        .strip_prefix("L=")
        .and_then(|s| s.trim().parse().ok())
        .ok_or_else(|| parse_err(no, "header must be `L=<length>`"))?;
    let mut steps = Vec::with_capacity(len);
    for (no, line) in lines {
        match numbers(no, line)?.as_slice() {
            [v, p] => steps.push((*v, *p)),
            _ => return Err(parse_err(no, "step line must be `node exit_port`")),
        }
    }
    if steps.len() != len {
        return Err(parse_err(no, format!("header says {len} steps, found {}", steps.len())));
    }
    Ok(steps)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_small_graphs() {
        let p2 = parse_graph("2 1\n0 1\n").unwrap();
        assert_eq!((p2.n(), p2.m()), (2, 1));
        let tri = parse_graph("3 3\n0 1\n1 2\n0 2\n").unwrap();
        assert_eq!(tri.m(), 3);
    }

    #[test]
    fn rejects_disconnected_and_malformed() {
        assert!(matches!(
            parse_graph("4 3\n0 1\n0 2\n1 2\n"),
            Err(Error::Validation(_))
        ));
        assert!(matches!(parse_graph("2 1\n0 x\n"), Err(Error::Parse { .. })));
        assert!(matches!(parse_graph("2 1\n1 0\n"), Err(Error::Parse { .. })));
        assert!(matches!(parse_graph("3 2\n0 1\n"), Err(Error::Parse { .. })));
    }

    #[test]
    fn writes_path_labeling_exactly() {
        let g = parse_graph("2 1\n0 1\n").unwrap();
        let pm = PortMap::ascending(&g);
        assert_eq!(write_labeled(&g, &pm), "2 1\n0: 1\n1: 0\n");
    }

    #[test]
    fn triangle_labeling_lists_port_order() {
        let g = parse_graph("3 3\n0 1\n1 2\n0 2\n").unwrap();
        let pm = PortMap::new(&g, vec![vec![1, 2], vec![2, 0], vec![0, 1]]).unwrap();
        let text = write_labeled(&g, &pm);
        assert_eq!(text, "3 3\n0: 1 2\n1: 2 0\n2: 0 1\n");
        assert_eq!(parse_labeled(&text).unwrap(), (g, pm));
    }

    #[test]
    fn usage_column_round_trip() {
        let text = "3 3\n0 1 T\n0 2 F\n1 2 B\n";
        let (g, u) = parse_graph_with_usage(text).unwrap();
        let u = u.unwrap();
        assert_eq!(u.get(g.edge_id(0, 2).unwrap()), Usage::SingleForward);
        assert_eq!(write_graph_with_usage(&g, &u), text);
        assert!(parse_graph_with_usage("3 3\n0 1 T\n0 2\n1 2 B\n").is_err());
    }

    #[test]
    fn dot_styles() {
        let g = parse_graph("2 1\n0 1\n").unwrap();
        let dot = export_dot(&g, &PortMap::ascending(&g), None);
        assert_eq!(dot.matches(" -- ").count(), 1);

        let tri = parse_graph("3 3\n0 1\n1 2\n0 2\n").unwrap();
        let mut u = UsageMap::new(&tri);
        u.set(tri.edge_id(0, 1).unwrap(), Usage::TwoWay);
        u.set_single(&tri, 1, 2);
        u.set_single(&tri, 2, 0);
        let dot = export_dot(&tri, &PortMap::ascending(&tri), Some(&u));
        assert_eq!(dot.matches("style=solid").count(), 1);
        assert_eq!(dot.matches("style=dashed").count(), 2);
        assert!(dot.contains("2 -- 0 [style=dashed, dir=forward"));
    }

    #[test]
    fn witness_trace_round_trip() {
        let steps = vec![(0, 1), (1, 1)];
        let text = write_witness(&steps);
        assert_eq!(text, "L=2\n0 1\n1 1\n");
        assert_eq!(parse_witness(&text).unwrap(), steps);
        assert!(parse_witness("L=3\n0 1\n").is_err());
    }
}
