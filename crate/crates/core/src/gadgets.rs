//! Node-capacitated hardness gadgets and their brute-force checks.
//!
//! * 3OV gadget: three vector layers joined through coordinate layers so that
//!   `flow(alpha, gamma)` drops below `2 n^2 d` exactly when some `beta` is
//!   orthogonal to `alpha` and `gamma`.
//! * BMM gadget: a tripartite graph whose middle layer has capacity `2n`, so
//!   `flow(a, c) >= 2n` iff the boolean product has a one at `(a, c)`.
//!
//! Flows are node-capacitated with unbounded edges and unconstrained
//! terminals, computed through [`Graph::split_node_capacities`].

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{parse_err, Error, Result};
use crate::graph::Graph;
use crate::maxflow::max_flow;
use crate::scalar::Capacity;

type BitMatrix = Vec<Vec<bool>>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OvInstance {
    pub n: usize,
    pub d: usize,
    pub u1: BitMatrix,
    pub u2: BitMatrix,
    pub u3: BitMatrix,
}

fn bits(s: &str) -> Option<Vec<bool>> {
    s.chars()
        .map(|c| match c {
            '0' => Some(false),
            '1' => Some(true),
            _ => None,
        })
        .collect()
}

fn bitstring(v: &[bool]) -> String {
    v.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

impl OvInstance {
    pub fn new(u1: BitMatrix, u2: BitMatrix, u3: BitMatrix) -> Result<Self> {
        let n = u1.len();
        if n == 0 || u2.len() != n || u3.len() != n {
            return Err(Error::InvalidInstance("vector sets must be nonempty and of equal size".into()));
        }
        let d = u1[0].len();
        if d == 0 {
            return Err(Error::InvalidInstance("dimension must be positive".into()));
        }
        if [&u1, &u2, &u3].iter().any(|set| set.iter().any(|v| v.len() != d)) {
            return Err(Error::InvalidInstance("vectors must share one dimension".into()));
        }
        Ok(OvInstance { n, d, u1, u2, u3 })
    }

    /// Builds an instance from bitstrings such as `"101"`.
    pub fn from_strs(u1: &[&str], u2: &[&str], u3: &[&str]) -> Result<Self> {
        let conv = |set: &[&str]| -> Result<BitMatrix> {
            set.iter()
                .map(|s| bits(s).ok_or_else(|| Error::InvalidInstance(format!("bad bitstring '{s}'"))))
                .collect()
        };
        Self::new(conv(u1)?, conv(u2)?, conv(u3)?)
    }

    /// Uniform random instance; every entry is one with probability `density`.
    pub fn random(n: usize, d: usize, density: f64, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut set = || -> BitMatrix { (0..n).map(|_| (0..d).map(|_| rng.gen_bool(density)).collect()).collect() };
        let (u1, u2, u3) = (set(), set(), set());
        Self::new(u1, u2, u3)
    }

    /// True when `alpha`, `beta`, `gamma` have no coordinate where all three are one.
    pub fn orthogonal(&self, a: usize, b: usize, c: usize) -> bool {
        (0..self.d).all(|i| !(self.u1[a][i] && self.u2[b][i] && self.u3[c][i]))
    }

    /// `ov <n> <d>` then `3n` bitstrings (U1, U2, U3 blocks).
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('c'));
        let (hl, header) = lines.next().ok_or_else(|| parse_err(0, "missing ov header"))?;
        let tok: Vec<&str> = header.split_whitespace().collect();
        if tok.len() != 3 || tok[0] != "ov" {
            return Err(parse_err(hl, "expected 'ov <n> <d>'"));
        }
        let n: usize = tok[1].parse().map_err(|_| parse_err(hl, "bad n"))?;
        let d: usize = tok[2].parse().map_err(|_| parse_err(hl, "bad d"))?;
        let mut rows = Vec::with_capacity(3 * n);
        for _ in 0..3 * n {
            let (ln, row) = lines.next().ok_or_else(|| parse_err(0, "too few vectors"))?;
            let v = bits(row).filter(|v| v.len() == d).ok_or_else(|| parse_err(ln, format!("expected {d} bits")))?;
            rows.push(v);
        }
        if let Some((ln, _)) = lines.next() {
            return Err(parse_err(ln, "trailing data"));
        }
        let u3 = rows.split_off(2 * n);
        let u2 = rows.split_off(n);
        Self::new(rows, u2, u3)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("ov {} {}\n", self.n, self.d);
        for v in self.u1.iter().chain(&self.u2).chain(&self.u3) {
            writeln!(out, "{}", bitstring(v)).unwrap();
        }
        out
    }
}

/// Returns some orthogonal triple `(alpha, beta, gamma)` by exhaustive scan.
pub fn solve_3ov_bruteforce(ov: &OvInstance) -> Option<(usize, usize, usize)> {
    for a in 0..ov.n {
        for b in 0..ov.n {
            for c in 0..ov.n {
                if ov.orthogonal(a, b, c) {
                    return Some((a, b, c));
                }
            }
        }
    }
    None
}

/// Node layout of a 3OV gadget.
#[derive(Debug, Clone)]
pub struct OvGadget<C> {
    pub graph: Graph<C>,
    /// V1, one node per vector of U1.
    pub alphas: Vec<usize>,
    /// `beta_coords[b][i]`: coordinate node of vector `b` of U2.
    pub beta_coords: Vec<Vec<usize>>,
    /// The aggregate node of every vector of U2.
    pub beta_primes: Vec<usize>,
    /// V3, one node per vector of U3.
    pub gammas: Vec<usize>,
    /// `zero_side[i]`, `one_side[i]`: the coordinate pair of layer A.
    pub zero_side: Vec<usize>,
    pub one_side: Vec<usize>,
    /// Layer B, one node per coordinate.
    pub coords: Vec<usize>,
    pub hub: usize,
    /// Capacity-one nodes standing in for capacitated edges.
    pub subdivisions: Vec<usize>,
    /// Node count without subdivision nodes: `n + 2d + n d + n + 1 + d + n`.
    pub base_nodes: usize,
    /// Factor applied to every capacity outside V1 and V3 (1 or `2n`).
    pub scale: C,
}

impl<C: Capacity> OvGadget<C> {
    /// `2 n^2 d`, the yes/no flow threshold of the undirected gadget.
    pub fn threshold(&self) -> C {
        let n = C::from_usize(self.alphas.len());
        let d = C::from_usize(self.zero_side.len());
        C::from_usize(2) * n * n * d
    }

    pub fn directed_edges(&self) -> usize {
        self.graph.edges().iter().filter(|e| e.directed).count()
    }
}

fn build_ov<C: Capacity>(ov: &OvInstance, directed: bool) -> Result<OvGadget<C>> {
    let (n, d) = (ov.n, ov.d);
    if d < 2 {
        return Err(Error::InvalidInstance("dimension below 2 gives zero-capacity nodes".into()));
    }
    let scale = if directed { C::one() } else { C::from_usize(2 * n) };
    let base_nodes = n + 2 * d + n * d + n + 1 + d + n;
    let mut graph = Graph::new(base_nodes + 2 * n * d);
    let mut next = 0;
    let mut take = |k: usize| {
        let ids: Vec<usize> = (next..next + k).collect();
        next += k;
        ids
    };
    let alphas = take(n);
    let mut beta_coords = Vec::with_capacity(n);
    let mut beta_primes = Vec::with_capacity(n);
    for _ in 0..n {
        beta_coords.push(take(d));
        beta_primes.push(take(1)[0]);
    }
    let gammas = take(n);
    let pair = take(2 * d);
    let zero_side: Vec<usize> = pair.iter().step_by(2).copied().collect();
    let one_side: Vec<usize> = pair.iter().skip(1).step_by(2).copied().collect();
    let coords = take(d);
    let hub = take(1)[0];
    let subdivisions = take(2 * n * d);
    debug_assert_eq!(subdivisions.first().copied().unwrap_or(base_nodes), base_nodes);

    let one = C::one();
    let nn = C::from_usize(n);
    let dd = C::from_usize(d);
    for &v in alphas.iter().chain(&gammas) {
        graph.set_node_cap(v, one)?;
    }
    for b in 0..n {
        for &v in &beta_coords[b] {
            graph.set_node_cap(v, scale)?;
        }
        graph.set_node_cap(beta_primes[b], (dd - one) * scale)?;
    }
    for &v in zero_side.iter().chain(&one_side).chain(&coords) {
        graph.set_node_cap(v, nn * scale)?;
    }
    graph.set_node_cap(hub, nn * (dd - one) * scale)?;
    for &v in &subdivisions {
        graph.set_node_cap(v, scale)?;
    }

    for (a, &alpha) in alphas.iter().enumerate() {
        for i in 0..d {
            let target = if ov.u1[a][i] { one_side[i] } else { zero_side[i] };
            if directed {
                graph.add_arc(alpha, target, one)?;
            } else {
                graph.add_edge(alpha, target, one)?;
            }
        }
    }
    let mut sub = subdivisions.iter().copied();
    for b in 0..n {
        for i in 0..d {
            if ov.u2[b][i] {
                graph.add_edge(beta_coords[b][i], coords[i], one)?;
            }
            let s0 = sub.next().expect("subdivision node");
            graph.add_edge(zero_side[i], s0, one)?;
            graph.add_edge(s0, beta_primes[b], one)?;
            let s1 = sub.next().expect("subdivision node");
            graph.add_edge(one_side[i], s1, one)?;
            graph.add_edge(s1, beta_coords[b][i], one)?;
            graph.add_edge(beta_coords[b][i], beta_primes[b], one)?;
        }
        graph.add_edge(beta_primes[b], hub, one)?;
    }
    for (c, &gamma) in gammas.iter().enumerate() {
        for i in 0..d {
            if ov.u3[c][i] {
                graph.add_edge(coords[i], gamma, one)?;
            }
        }
        graph.add_edge(hub, gamma, one)?;
    }
    Ok(OvGadget {
        graph,
        alphas,
        beta_coords,
        beta_primes,
        gammas,
        zero_side,
        one_side,
        coords,
        hub,
        subdivisions,
        base_nodes,
        scale,
    })
}

/// Gadget with directed `alpha -> A` edges and unscaled capacities.
pub fn build_3ov_intermediate<C: Capacity>(ov: &OvInstance) -> Result<OvGadget<C>> {
    build_ov(ov, true)
}

/// Fully undirected gadget; capacities outside V1 and V3 scaled by `2n`.
pub fn build_3ov_final<C: Capacity>(ov: &OvInstance) -> Result<OvGadget<C>> {
    build_ov(ov, false)
}

/// Node-capacitated max-flow between `s` and `t`.
pub fn node_capacitated_flow<C: Capacity>(g: &Graph<C>, s: usize, t: usize) -> Result<C> {
    let split = g.split_node_capacities(s, t)?;
    Ok(max_flow(&split.graph, split.source, split.sink, None)?.value)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(bound = "C: Capacity")]
pub struct PairFlow<C> {
    pub alpha: usize,
    pub gamma: usize,
    pub flow: C,
    /// Some `beta` is orthogonal to this pair.
    pub orthogonal: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(bound = "C: Capacity")]
pub struct GadgetReport<C> {
    pub n: usize,
    pub d: usize,
    pub threshold: C,
    pub pairs: Vec<PairFlow<C>>,
    pub min_flow: C,
    pub triple: Option<(usize, usize, usize)>,
    /// Every pair sits on the side of the threshold its orthogonality predicts.
    pub per_pair_consistent: bool,
    /// `min_flow >= threshold` iff no orthogonal triple exists.
    pub instance_consistent: bool,
    /// `threshold - max flow` over orthogonal pairs, when there are any.
    pub gap: Option<C>,
}

pub fn check_gadget<C: Capacity>(ov: &OvInstance) -> Result<GadgetReport<C>> {
    let gadget = build_3ov_final::<C>(ov)?;
    let threshold = gadget.threshold();
    let mut pairs = Vec::with_capacity(ov.n * ov.n);
    for a in 0..ov.n {
        for c in 0..ov.n {
            let flow = node_capacitated_flow(&gadget.graph, gadget.alphas[a], gadget.gammas[c])?;
            let orthogonal = (0..ov.n).any(|b| ov.orthogonal(a, b, c));
            pairs.push(PairFlow { alpha: a, gamma: c, flow, orthogonal });
        }
    }
    let min_flow = pairs.iter().map(|p| p.flow).min().unwrap_or_else(C::zero);
    let triple = solve_3ov_bruteforce(ov);
    let per_pair_consistent =
        pairs.iter().all(|p| if p.orthogonal { p.flow < threshold } else { p.flow >= threshold });
    let instance_consistent = (min_flow >= threshold) == triple.is_none();
    let gap = pairs.iter().filter(|p| p.orthogonal).map(|p| threshold - p.flow).min();
    Ok(GadgetReport { n: ov.n, d: ov.d, threshold, pairs, min_flow, triple, per_pair_consistent, instance_consistent, gap })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BmmInstance {
    pub n: usize,
    pub p: BitMatrix,
    pub q: BitMatrix,
}

impl BmmInstance {
    pub fn new(p: BitMatrix, q: BitMatrix) -> Result<Self> {
        let n = p.len();
        if n == 0 || q.len() != n || p.iter().chain(&q).any(|row| row.len() != n) {
            return Err(Error::InvalidInstance("matrices must be square and of equal size".into()));
        }
        Ok(BmmInstance { n, p, q })
    }

    pub fn random(n: usize, density: f64, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut mat = || -> BitMatrix { (0..n).map(|_| (0..n).map(|_| rng.gen_bool(density)).collect()).collect() };
        let (p, q) = (mat(), mat());
        Self::new(p, q)
    }

    /// `bmm <n>` then `2n` rows of bits (P then Q).
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('c'));
        let (hl, header) = lines.next().ok_or_else(|| parse_err(0, "missing bmm header"))?;
        let tok: Vec<&str> = header.split_whitespace().collect();
        if tok.len() != 2 || tok[0] != "bmm" {
            return Err(parse_err(hl, "expected 'bmm <n>'"));
        }
        let n: usize = tok[1].parse().map_err(|_| parse_err(hl, "bad n"))?;
        let mut rows = Vec::with_capacity(2 * n);
        for _ in 0..2 * n {
            let (ln, row) = lines.next().ok_or_else(|| parse_err(0, "too few rows"))?;
            rows.push(bits(row).filter(|r| r.len() == n).ok_or_else(|| parse_err(ln, format!("expected {n} bits")))?);
        }
        if let Some((ln, _)) = lines.next() {
            return Err(parse_err(ln, "trailing data"));
        }
        let q = rows.split_off(n);
        Self::new(rows, q)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("bmm {}\n", self.n);
        for row in self.p.iter().chain(&self.q) {
            writeln!(out, "{}", bitstring(row)).unwrap();
        }
        out
    }

    pub fn product(&self) -> BitMatrix {
        (0..self.n)
            .map(|a| (0..self.n).map(|c| (0..self.n).any(|b| self.p[a][b] && self.q[b][c])).collect())
            .collect()
    }
}

#[derive(Debug, Clone)]
pub struct BmmGadget<C> {
    pub graph: Graph<C>,
    pub a: Vec<usize>,
    pub b: Vec<usize>,
    pub c: Vec<usize>,
}

/// Layers A, B, C with `a_i - b_j` iff `P[i][j]` and `b_j - c_k` iff
/// `Q[j][k]`; capacity `2n` on B and 1 on A and C.
pub fn build_bmm_gadget<C: Capacity>(inst: &BmmInstance) -> Result<BmmGadget<C>> {
    let n = inst.n;
    let mut graph = Graph::new(3 * n);
    let a: Vec<usize> = (0..n).collect();
    let b: Vec<usize> = (n..2 * n).collect();
    let c: Vec<usize> = (2 * n..3 * n).collect();
    for &v in a.iter().chain(&c) {
        graph.set_node_cap(v, C::one())?;
    }
    for &v in &b {
        graph.set_node_cap(v, C::from_usize(2 * n))?;
    }
    for i in 0..n {
        for j in 0..n {
            if inst.p[i][j] {
                graph.add_edge(a[i], b[j], C::one())?;
            }
            if inst.q[i][j] {
                graph.add_edge(b[i], c[j], C::one())?;
            }
        }
    }
    Ok(BmmGadget { graph, a, b, c })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(bound = "C: Capacity")]
pub struct BmmReport<C> {
    pub n: usize,
    pub flows: Vec<Vec<C>>,
    pub product: BitMatrix,
    /// `flows[a][c] >= 2n` matches `product[a][c]` everywhere.
    pub matches_product: bool,
    /// No flow equals `2n - 1`.
    pub dichotomy: bool,
}

pub fn check_bmm<C: Capacity>(inst: &BmmInstance) -> Result<BmmReport<C>> {
    let gadget = build_bmm_gadget::<C>(inst)?;
    let n = inst.n;
    let two_n = C::from_usize(2 * n);
    let mut flows = vec![vec![C::zero(); n]; n];
    for (i, row) in flows.iter_mut().enumerate() {
        for (k, slot) in row.iter_mut().enumerate() {
            *slot = node_capacitated_flow(&gadget.graph, gadget.a[i], gadget.c[k])?;
        }
    }
    let product = inst.product();
    let matches_product = (0..n).all(|i| (0..n).all(|k| (flows[i][k] >= two_n) == product[i][k]));
    let dichotomy = flows.iter().flatten().all(|&f| f >= two_n || f <= two_n - C::from_usize(2));
    Ok(BmmReport { n, flows, product, matches_product, dichotomy })
}
