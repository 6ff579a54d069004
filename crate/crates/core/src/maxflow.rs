//! Exact integral s-t max-flow (blocking flows on level graphs) with an
//! optional value cap, source-side min cut extraction and path decomposition.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::scalar::Capacity;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlowResult<C> {
    pub value: C,
    /// The cap was reached; `value` is then only a lower bound on max-flow.
    pub capped: bool,
    /// Nodes reachable from `s` in the final residual network. Present iff
    /// `capped` is false.
    pub cut_side: Option<Vec<bool>>,
    /// Signed flow per graph edge, positive in the `u -> v` direction.
    pub edge_flows: Vec<C>,
}

impl<C: Capacity> FlowResult<C> {
    /// Sorted node ids of the source side, when present.
    pub fn cut_nodes(&self) -> Option<Vec<usize>> {
        self.cut_side
            .as_ref()
            .map(|side| side.iter().enumerate().filter(|(_, &b)| b).map(|(v, _)| v).collect())
    }
}

struct Residual<C> {
    head: Vec<usize>,
    res: Vec<C>,
    adj: Vec<Vec<usize>>,
}

impl<C: Capacity> Residual<C> {
    // Arc 2i carries edge i forward, arc 2i+1 backward. Undirected edges get
    // capacity in both arcs so that one pair models both orientations.
    fn new(g: &Graph<C>) -> Self {
        let m = g.m();
        let mut head = Vec::with_capacity(2 * m);
        let mut res = Vec::with_capacity(2 * m);
        let mut adj = vec![Vec::new(); g.n()];
        for (i, e) in g.edges().iter().enumerate() {
            head.push(e.v);
            res.push(e.cap);
            head.push(e.u);
            res.push(if e.directed { C::zero() } else { e.cap });
            adj[e.u].push(2 * i);
            adj[e.v].push(2 * i + 1);
        }
        Residual { head, res, adj }
    }

    fn levels(&self, s: usize, t: usize, level: &mut [usize]) -> bool {
        level.fill(usize::MAX);
        level[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(x) = queue.pop_front() {
            for &a in &self.adj[x] {
                let y = self.head[a];
                if self.res[a] > C::zero() && level[y] == usize::MAX {
                    level[y] = level[x] + 1;
                    if y != t {
                        queue.push_back(y);
                    }
                }
            }
        }
        level[t] != usize::MAX
    }

    fn augment(&mut self, x: usize, t: usize, limit: C, level: &[usize], next: &mut [usize]) -> C {
        if x == t {
            return limit;
        }
        let mut pushed = C::zero();
        while next[x] < self.adj[x].len() {
            let a = self.adj[x][next[x]];
            let y = self.head[a];
            if self.res[a] > C::zero() && level[y] == level[x] + 1 {
                let got = self.augment(y, t, (limit - pushed).min(self.res[a]), level, next);
                if got > C::zero() {
                    self.res[a] = self.res[a] - got;
                    self.res[a ^ 1] = self.res[a ^ 1] + got;
                    pushed = pushed + got;
                    if pushed == limit {
                        return pushed;
                    }
                }
            }
            next[x] += 1;
        }
        pushed
    }

    fn reachable(&self, s: usize) -> Vec<bool> {
        let mut seen = vec![false; self.adj.len()];
        seen[s] = true;
        let mut stack = vec![s];
        while let Some(x) = stack.pop() {
            for &a in &self.adj[x] {
                let y = self.head[a];
                if self.res[a] > C::zero() && !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        seen
    }
}

/// Max-flow from `s` to `t`. With `cap = Some(k)` the search stops as soon as
/// `k` units are routed and the result is marked `capped`.
pub fn max_flow<C: Capacity>(g: &Graph<C>, s: usize, t: usize, cap: Option<C>) -> Result<FlowResult<C>> {
    for id in [s, t] {
        if id >= g.n() {
            return Err(Error::NodeOutOfRange { id, n: g.n() });
        }
    }
    if s == t {
        return Err(Error::SameTerminals(s));
    }
    if let Some(k) = cap {
        if k <= C::zero() {
            return Err(Error::ContractMisuse(format!("flow cap must be positive, got {k}")));
        }
    }
    let mut net = Residual::new(g);
    let mut level = vec![0; g.n()];
    let mut next = vec![0; g.n()];
    let mut value = C::zero();
    let mut capped = false;
    'outer: while net.levels(s, t, &mut level) {
        next.fill(0);
        loop {
            let limit = match cap {
                Some(k) => k - value,
                None => C::max_value(),
            };
            let got = net.augment(s, t, limit, &level, &mut next);
            if got == C::zero() {
                break;
            }
            value = value + got;
            if cap == Some(value) {
                capped = true;
                break 'outer;
            }
        }
    }
    let edge_flows = g.edges().iter().enumerate().map(|(i, e)| e.cap - net.res[2 * i]).collect();
    let cut_side = (!capped).then(|| net.reachable(s));
    Ok(FlowResult { value, capped, cut_side, edge_flows })
}

/// Splits a feasible flow into simple `s -> t` paths (node sequences) with
/// their multiplicities. Extraction stops once the flow value is routed; the
/// remainder is a circulation and is discarded.
pub fn flow_decompose<C: Capacity>(
    g: &Graph<C>,
    fr: &FlowResult<C>,
    s: usize,
    t: usize,
) -> Result<Vec<(Vec<usize>, C)>> {
    if fr.edge_flows.len() != g.m() {
        return Err(Error::Integrity(format!("{} edge flows for {} edges", fr.edge_flows.len(), g.m())));
    }
    if s == t {
        return Err(Error::SameTerminals(s));
    }
    let n = g.n();
    let mut balance = vec![C::zero(); n];
    let mut out: Vec<Vec<(usize, C)>> = vec![Vec::new(); n];
    for (e, &f) in g.edges().iter().zip(&fr.edge_flows) {
        if f.abs() > e.cap || (e.directed && f < C::zero()) {
            return Err(Error::Integrity(format!("flow {f} infeasible on edge {}-{}", e.u, e.v)));
        }
        let (a, b, f) = if f >= C::zero() { (e.u, e.v, f) } else { (e.v, e.u, -f) };
        if f > C::zero() {
            out[a].push((b, f));
            balance[a] = balance[a] + f;
            balance[b] = balance[b] - f;
        }
    }
    for (v, &bal) in balance.iter().enumerate() {
        if v != s && v != t && bal != C::zero() {
            return Err(Error::Integrity(format!("conservation violated at node {v} (excess {bal})")));
        }
    }
    if balance[s] != fr.value {
        return Err(Error::Integrity(format!("net outflow {} at source, claimed {}", balance[s], fr.value)));
    }

    let mut paths = Vec::new();
    let mut ptr = vec![0usize; n];
    let mut pos = vec![usize::MAX; n];
    // (node, index into out[node] of the arc taken next)
    let mut stack: Vec<(usize, usize)> = Vec::new();
    let mut routed = C::zero();
    while routed < fr.value {
        let x = match stack.last() {
            Some(&(x, _)) => x,
            None => {
                pos[s] = 0;
                stack.push((s, usize::MAX));
                s
            }
        };
        if x == t {
            let bottleneck = stack[..stack.len() - 1]
                .iter()
                .map(|&(y, k)| out[y][k].1)
                .min()
                .expect("path has an arc");
            let bottleneck = bottleneck.min(fr.value - routed);
            for &(y, k) in &stack[..stack.len() - 1] {
                out[y][k].1 = out[y][k].1 - bottleneck;
            }
            routed = routed + bottleneck;
            paths.push((stack.iter().map(|&(y, _)| y).collect(), bottleneck));
            for &(y, _) in &stack {
                pos[y] = usize::MAX;
            }
            stack.clear();
            continue;
        }
        while ptr[x] < out[x].len() && out[x][ptr[x]].1 == C::zero() {
            ptr[x] += 1;
        }
        if ptr[x] == out[x].len() {
            return Err(Error::Integrity(format!("flow stuck at node {x}")));
        }
        let k = ptr[x];
        stack.last_mut().unwrap().1 = k;
        let y = out[x][k].0;
        if pos[y] != usize::MAX {
            // cancel the cycle y -> ... -> x -> y
            let start = pos[y];
            let amount = stack[start..].iter().map(|&(z, j)| out[z][j].1).min().unwrap();
            for &(z, j) in &stack[start..] {
                out[z][j].1 = out[z][j].1 - amount;
            }
            for &(z, _) in &stack[start + 1..] {
                pos[z] = usize::MAX;
            }
            stack.truncate(start + 1);
        } else {
            pos[y] = stack.len();
            stack.push((y, usize::MAX));
        }
    }
    Ok(paths)
}
