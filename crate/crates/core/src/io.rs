//! Line-oriented text formats for graphs and trees.
//!
//! Graph file:
//!
//! ```text
//! c comment
//! p ghct <n> <m>
//! e <u> <v> [cap]      undirected edge, cap defaults to 1
//! d <u> <v> [cap]      directed edge
//! n <v> <cap>          node capacity
//! ```
//!
//! Tree file: `t <n>` followed by `n - 1` lines `e <u> <v> <w>`.
//! All ids are 0-based.

use std::fmt::Write as _;
use std::str::FromStr;

use crate::cuttree::CutTree;
use crate::error::{parse_err, Error, Result};
use crate::graph::Graph;
use crate::scalar::Capacity;

fn field<T: FromStr>(tok: Option<&str>, line: usize, what: &str) -> Result<T> {
    let tok = tok.ok_or_else(|| parse_err(line, format!("missing {what}")))?;
    tok.parse().map_err(|_| parse_err(line, format!("bad {what} '{tok}'")))
}

fn node_id(tok: Option<&str>, line: usize, n: usize) -> Result<usize> {
    let id: usize = field(tok, line, "node id")?;
    if id >= n {
        return Err(parse_err(line, format!("node id out of range: {id} (n = {n})")));
    }
    Ok(id)
}

fn positive<C: Capacity>(tok: Option<&str>, line: usize, default: Option<C>) -> Result<C> {
    let cap = match (tok, default) {
        (None, Some(d)) => d,
        (tok, _) => field(tok, line, "capacity")?,
    };
    if cap <= C::zero() {
        return Err(parse_err(line, format!("capacity must be positive, got {cap}")));
    }
    Ok(cap)
}

fn no_trailing(mut it: std::str::SplitWhitespace<'_>, line: usize) -> Result<()> {
    match it.next() {
        Some(tok) => Err(parse_err(line, format!("unexpected token '{tok}'"))),
        None => Ok(()),
    }
}

pub fn parse_graph<C: Capacity>(text: &str) -> Result<Graph<C>> {
    let mut graph: Option<(Graph<C>, usize)> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let mut it = raw.split_whitespace();
        let Some(tag) = it.next() else { continue };
        match tag {
            "c" => continue,
            "p" => {
                if graph.is_some() {
                    return Err(parse_err(line, "duplicate problem line"));
                }
                let kind: String = field(it.next(), line, "format tag")?;
                if kind != "ghct" {
                    return Err(parse_err(line, format!("unknown format '{kind}'")));
                }
                let n = field(it.next(), line, "node count")?;
                let m = field(it.next(), line, "edge count")?;
                no_trailing(it, line)?;
                graph = Some((Graph::new(n), m));
            }
            "e" | "d" | "n" => {
                let (g, _) = graph.as_mut().ok_or_else(|| parse_err(line, "record before problem line"))?;
                let n = g.n();
                if tag == "n" {
                    let v = node_id(it.next(), line, n)?;
                    let cap = positive(it.next(), line, None)?;
                    no_trailing(it, line)?;
                    g.set_node_cap(v, cap).map_err(|e| parse_err(line, e.to_string()))?;
                    continue;
                }
                let u = node_id(it.next(), line, n)?;
                let v = node_id(it.next(), line, n)?;
                let cap = positive(it.next(), line, Some(C::one()))?;
                no_trailing(it, line)?;
                let added = if tag == "e" { g.add_edge(u, v, cap) } else { g.add_arc(u, v, cap) };
                added.map_err(|e| parse_err(line, e.to_string()))?;
            }
            other => return Err(parse_err(line, format!("unknown record '{other}'"))),
        }
    }
    let (g, m) = graph.ok_or_else(|| parse_err(0, "missing problem line"))?;
    if g.m() != m {
        return Err(parse_err(0, format!("header declares {m} edges, found {}", g.m())));
    }
    Ok(g)
}

pub fn write_graph<C: Capacity>(g: &Graph<C>) -> String {
    let mut out = String::new();
    writeln!(out, "p ghct {} {}", g.n(), g.m()).unwrap();
    for e in g.edges() {
        match (e.directed, e.cap == C::one()) {
            (true, _) => writeln!(out, "d {} {} {}", e.u, e.v, e.cap),
            (false, true) => writeln!(out, "e {} {}", e.u, e.v),
            (false, false) => writeln!(out, "e {} {} {}", e.u, e.v, e.cap),
        }
        .unwrap();
    }
    if let Some(caps) = g.node_caps() {
        for (v, c) in caps {
            writeln!(out, "n {v} {c}").unwrap();
        }
    }
    out
}

pub fn parse_tree<C: Capacity>(text: &str) -> Result<CutTree<C>> {
    let mut n: Option<usize> = None;
    let mut edges = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let mut it = raw.split_whitespace();
        let Some(tag) = it.next() else { continue };
        match tag {
            "c" => continue,
            "t" => {
                if n.is_some() {
                    return Err(parse_err(line, "duplicate tree header"));
                }
                n = Some(field(it.next(), line, "node count")?);
                no_trailing(it, line)?;
            }
            "e" => {
                let nn = n.ok_or_else(|| parse_err(line, "edge before tree header"))?;
                let u = node_id(it.next(), line, nn)?;
                let v = node_id(it.next(), line, nn)?;
                let w: C = field(it.next(), line, "weight")?;
                if w < C::zero() {
                    return Err(parse_err(line, "negative tree weight"));
                }
                no_trailing(it, line)?;
                edges.push((u, v, w));
            }
            other => return Err(parse_err(line, format!("unknown record '{other}'"))),
        }
    }
    let n = n.ok_or_else(|| parse_err(0, "missing tree header"))?;
    CutTree::from_edges(n, &edges).map_err(|e| match e {
        Error::InvalidTree(msg) => parse_err(0, msg),
        other => other,
    })
}

/// Writes `e v parent(v) w` for every non-root node in ascending order.
pub fn write_tree<C: Capacity>(t: &CutTree<C>) -> String {
    let mut out = String::new();
    writeln!(out, "t {}", t.n()).unwrap();
    for (u, v, w) in t.edges() {
        writeln!(out, "e {u} {v} {w}").unwrap();
    }
    out
}
