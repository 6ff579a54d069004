//! Undirected capacitated multigraphs, node partitions, contraction and
//! node splitting.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::scalar::Capacity;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Edge<C> {
    pub u: usize,
    pub v: usize,
    pub cap: C,
    /// Only gadget intermediate graphs and split digraphs use directed arcs.
    pub directed: bool,
}

/// Multigraph on nodes `0..n` with positive integer edge capacities and
/// optional node capacities.
///
/// Parallel edges are allowed; an edge of capacity `c` is interchangeable with
/// `c` parallel unit edges. Nodes absent from the node-capacity map are
/// uncapacitated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph<C> {
    n: usize,
    edges: Vec<Edge<C>>,
    node_caps: Option<BTreeMap<usize, C>>,
}

impl<C: Capacity> Graph<C> {
    pub fn new(n: usize) -> Self {
        Graph { n, edges: Vec::new(), node_caps: None }
    }

    /// Builds an undirected graph from `(u, v, cap)` triples.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize, C)>) -> Result<Self> {
        let mut g = Graph::new(n);
        for (u, v, c) in edges {
            g.add_edge(u, v, c)?;
        }
        Ok(g)
    }

    /// Unit-capacity graph from an edge list.
    pub fn unit(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        Self::from_edges(n, edges.iter().map(|&(u, v)| (u, v, C::one())))
    }

    fn push(&mut self, u: usize, v: usize, cap: C, directed: bool) -> Result<usize> {
        for id in [u, v] {
            if id >= self.n {
                return Err(Error::NodeOutOfRange { id, n: self.n });
            }
        }
        if u == v {
            return Err(Error::ContractMisuse(format!("self-loop at node {u}")));
        }
        if cap <= C::zero() {
            return Err(Error::ContractMisuse(format!("non-positive capacity {cap} on edge {u}-{v}")));
        }
        self.edges.push(Edge { u, v, cap, directed });
        Ok(self.edges.len() - 1)
    }

    pub fn add_edge(&mut self, u: usize, v: usize, cap: C) -> Result<usize> {
        self.push(u, v, cap, false)
    }

    /// Adds a directed arc `u -> v`.
    pub fn add_arc(&mut self, u: usize, v: usize, cap: C) -> Result<usize> {
        self.push(u, v, cap, true)
    }

    pub fn set_node_cap(&mut self, v: usize, cap: C) -> Result<()> {
        if v >= self.n {
            return Err(Error::NodeOutOfRange { id: v, n: self.n });
        }
        if cap <= C::zero() {
            return Err(Error::ContractMisuse(format!("non-positive capacity {cap} on node {v}")));
        }
        self.node_caps.get_or_insert_with(BTreeMap::new).insert(v, cap);
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge<C>] {
        &self.edges
    }

    pub fn node_caps(&self) -> Option<&BTreeMap<usize, C>> {
        self.node_caps.as_ref()
    }

    pub fn node_cap(&self, v: usize) -> Option<C> {
        self.node_caps.as_ref().and_then(|m| m.get(&v).copied())
    }

    pub fn is_node_capacitated(&self) -> bool {
        self.node_caps.is_some()
    }

    pub fn has_directed_edges(&self) -> bool {
        self.edges.iter().any(|e| e.directed)
    }

    /// True when every edge has capacity one.
    pub fn is_unit(&self) -> bool {
        self.edges.iter().all(|e| e.cap == C::one())
    }

    pub fn total_capacity(&self) -> C {
        self.edges.iter().map(|e| e.cap).sum()
    }

    /// Capacity-weighted degree of every node (multigraph degree for unit caps).
    pub fn degrees(&self) -> Vec<C> {
        let mut deg = vec![C::zero(); self.n];
        for e in &self.edges {
            deg[e.u] = deg[e.u] + e.cap;
            deg[e.v] = deg[e.v] + e.cap;
        }
        deg
    }

    pub fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.n];
        for (i, e) in self.edges.iter().enumerate() {
            adj[e.u].push((e.v, i));
            if !e.directed {
                adj[e.v].push((e.u, i));
            }
        }
        adj
    }

    /// Capacity of the cut leaving `side`: undirected edges crossing in
    /// either direction plus arcs leaving `side`.
    pub fn cut_capacity(&self, side: &[bool]) -> C {
        self.edges
            .iter()
            .filter(|e| {
                if e.directed {
                    side[e.u] && !side[e.v]
                } else {
                    side[e.u] != side[e.v]
                }
            })
            .map(|e| e.cap)
            .sum()
    }

    /// Builds the auxiliary graph in which every block of `p` except `keep`
    /// collapses to a single node.
    ///
    /// New ids follow block order: the kept block contributes its nodes one
    /// by one in ascending order, every other block contributes one merged
    /// node. Parallel edges between the same new pair are summed and edges
    /// inside a merged block are dropped.
    pub fn contract(&self, p: &Partition, keep: &[usize]) -> Result<Contraction<C>> {
        if p.n() != self.n {
            return Err(Error::ContractMisuse(format!(
                "partition covers {} nodes, graph has {}",
                p.n(),
                self.n
            )));
        }
        let mut wanted = keep.to_vec();
        wanted.sort_unstable();
        let keep_block = p
            .blocks()
            .iter()
            .position(|b| {
                let mut b = b.clone();
                b.sort_unstable();
                b == wanted
            })
            .ok_or_else(|| Error::ContractMisuse("kept node set is not a block of the partition".into()))?;
        self.contract_block(p, keep_block)
    }

    /// [`Graph::contract`] with the kept block given by index.
    pub fn contract_block(&self, p: &Partition, keep_block: usize) -> Result<Contraction<C>> {
        if keep_block >= p.len() {
            return Err(Error::ContractMisuse(format!("no block {keep_block}")));
        }
        let mut mapping = vec![usize::MAX; self.n];
        let mut next = 0;
        for (bi, block) in p.blocks().iter().enumerate() {
            if bi == keep_block {
                let mut nodes = block.clone();
                nodes.sort_unstable();
                for v in nodes {
                    mapping[v] = next;
                    next += 1;
                }
            } else {
                for &v in block {
                    mapping[v] = next;
                }
                next += 1;
            }
        }
        let mut summed: BTreeMap<(usize, usize, bool), C> = BTreeMap::new();
        let mut surviving = 0;
        for e in &self.edges {
            let (a, b) = (mapping[e.u], mapping[e.v]);
            if a == b {
                continue;
            }
            surviving += 1;
            let key = if e.directed { (a, b, true) } else { (a.min(b), a.max(b), false) };
            let slot = summed.entry(key).or_insert_with(C::zero);
            *slot = *slot + e.cap;
        }
        let mut graph = Graph::new(next);
        for ((a, b, directed), cap) in summed {
            graph.edges.push(Edge { u: a, v: b, cap, directed });
        }
        Ok(Contraction { graph, mapping, surviving_edges: surviving })
    }

    /// Reduces node-capacitated flow between `s` and `t` to edge-capacitated
    /// flow on a digraph with `2n` nodes.
    ///
    /// Node `v` becomes `v_in = 2v` and `v_out = 2v + 1` joined by an arc of
    /// capacity `c(v)`. Uncapacitated nodes and the two terminals get `INF`,
    /// the sum of all node capacities plus one. Every undirected edge becomes
    /// the arcs `u_out -> v_in` and `v_out -> u_in` of capacity `INF`; a
    /// directed edge keeps its single orientation. Edge capacities of the
    /// input are ignored: in node-capacitated graphs edges are unbounded.
    pub fn split_node_capacities(&self, s: usize, t: usize) -> Result<SplitGraph<C>> {
        let caps = self.node_caps.as_ref().ok_or(Error::MissingNodeCaps)?;
        for id in [s, t] {
            if id >= self.n {
                return Err(Error::NodeOutOfRange { id, n: self.n });
            }
        }
        if s == t {
            return Err(Error::SameTerminals(s));
        }
        let inf = caps.values().copied().sum::<C>() + C::one();
        let mut graph = Graph::new(2 * self.n);
        for v in 0..self.n {
            let c = if v == s || v == t { inf } else { caps.get(&v).copied().unwrap_or(inf) };
            graph.add_arc(2 * v, 2 * v + 1, c)?;
        }
        for e in &self.edges {
            graph.add_arc(2 * e.u + 1, 2 * e.v, inf)?;
            if !e.directed {
                graph.add_arc(2 * e.v + 1, 2 * e.u, inf)?;
            }
        }
        Ok(SplitGraph { graph, source: 2 * s + 1, sink: 2 * t, inf })
    }
}

/// Result of [`Graph::contract`].
#[derive(Debug, Clone)]
pub struct Contraction<C> {
    pub graph: Graph<C>,
    /// `mapping[old] = new`.
    pub mapping: Vec<usize>,
    /// Original edges that are not internal to a merged block.
    pub surviving_edges: usize,
}

/// Result of [`Graph::split_node_capacities`].
#[derive(Debug, Clone)]
pub struct SplitGraph<C> {
    pub graph: Graph<C>,
    pub source: usize,
    pub sink: usize,
    pub inf: C,
}

/// Disjoint nonempty blocks covering `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    blocks: Vec<Vec<usize>>,
    block_of: Vec<usize>,
}

impl Partition {
    pub fn new(n: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut block_of = vec![usize::MAX; n];
        for (bi, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(Error::ContractMisuse(format!("block {bi} is empty")));
            }
            for &v in block {
                if v >= n {
                    return Err(Error::NodeOutOfRange { id: v, n });
                }
                if block_of[v] != usize::MAX {
                    return Err(Error::ContractMisuse(format!("node {v} appears in two blocks")));
                }
                block_of[v] = bi;
            }
        }
        if let Some(v) = block_of.iter().position(|&b| b == usize::MAX) {
            return Err(Error::ContractMisuse(format!("node {v} is not covered")));
        }
        Ok(Partition { blocks, block_of })
    }

    pub fn singletons(n: usize) -> Self {
        Partition { blocks: (0..n).map(|v| vec![v]).collect(), block_of: (0..n).collect() }
    }

    pub fn n(&self) -> usize {
        self.block_of.len()
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block_of(&self, v: usize) -> usize {
        self.block_of[v]
    }
}
