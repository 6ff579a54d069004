//! Cut-equivalent trees.
//!
//! All constructions share one Gomory-Hu engine that maintains a tree of
//! super-nodes. [`gomory_hu`] runs it to completion, [`partial_tree`] runs a
//! truncated execution with capped flows that never separates pairs of
//! connectivity above `k`, and [`hybrid_cut_tree`] resumes a full execution
//! from the `d`-partial tree. [`gusfield`] works on the input graph directly.

use std::collections::{BTreeMap, VecDeque};

use crate::error::{Error, Result};
use crate::graph::{Graph, Partition};
use crate::maxflow::max_flow;
use crate::scalar::Capacity;

/// Tree over the blocks of a partition (the state of a possibly truncated
/// Gomory-Hu execution).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuperNodeTree<C> {
    partition: Partition,
    edges: Vec<(usize, usize, C)>,
}

impl<C: Capacity> SuperNodeTree<C> {
    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        self.partition.blocks()
    }

    /// Tree edges between block indices.
    pub fn edges(&self) -> &[(usize, usize, C)] {
        &self.edges
    }

    /// Converts a fully resolved tree (all blocks singletons).
    pub fn into_cut_tree(self) -> Result<CutTree<C>> {
        if self.partition.blocks().iter().any(|b| b.len() != 1) {
            return Err(Error::InvalidTree("super-node tree has non-singleton blocks".into()));
        }
        let node = |b: usize| self.partition.blocks()[b][0];
        let edges: Vec<_> = self.edges.iter().map(|&(a, b, w)| (node(a), node(b), w)).collect();
        CutTree::from_edges(self.partition.n(), &edges)
    }
}

/// Rooted cut-equivalent tree: `weight[v]` is the weight of edge `v - parent[v]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CutTree<C> {
    root: usize,
    parent: Vec<usize>,
    weight: Vec<C>,
}

/// Answer to a min-cut query on a tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeCut<C> {
    pub value: C,
    /// Sorted nodes on the query source's side.
    pub side: Vec<usize>,
    /// The bottleneck edge, source-side endpoint first.
    pub edge: (usize, usize),
}

impl<C: Capacity> CutTree<C> {
    /// Builds a tree from an undirected edge list, rooted at node 0.
    pub fn from_edges(n: usize, edges: &[(usize, usize, C)]) -> Result<Self> {
        if n == 0 {
            if !edges.is_empty() {
                return Err(Error::InvalidTree("edges on an empty tree".into()));
            }
            return Ok(CutTree { root: 0, parent: Vec::new(), weight: Vec::new() });
        }
        if edges.len() != n - 1 {
            return Err(Error::InvalidTree(format!("{} edges for {n} nodes", edges.len())));
        }
        let mut adj = vec![Vec::new(); n];
        for &(u, v, w) in edges {
            if u >= n || v >= n {
                return Err(Error::NodeOutOfRange { id: u.max(v), n });
            }
            if u == v {
                return Err(Error::InvalidTree(format!("self-loop at {u}")));
            }
            if w < C::zero() {
                return Err(Error::InvalidTree(format!("negative weight on {u}-{v}")));
            }
            adj[u].push((v, w));
            adj[v].push((u, w));
        }
        let mut parent = vec![usize::MAX; n];
        let mut weight = vec![C::zero(); n];
        parent[0] = 0;
        let mut queue = VecDeque::from([0]);
        let mut seen = 1;
        while let Some(x) = queue.pop_front() {
            for &(y, w) in &adj[x] {
                if parent[y] == usize::MAX {
                    parent[y] = x;
                    weight[y] = w;
                    seen += 1;
                    queue.push_back(y);
                }
            }
        }
        if seen != n {
            return Err(Error::InvalidTree("edges do not connect all nodes".into()));
        }
        Ok(CutTree { root: 0, parent, weight })
    }

    pub fn n(&self) -> usize {
        self.parent.len()
    }

    pub fn root(&self) -> usize {
        self.root
    }

    /// Parent of `v`; the root is its own parent.
    pub fn parent(&self, v: usize) -> usize {
        self.parent[v]
    }

    pub fn weight(&self, v: usize) -> C {
        self.weight[v]
    }

    /// `(v, parent(v), weight)` for every non-root node in ascending order.
    pub fn edges(&self) -> Vec<(usize, usize, C)> {
        (0..self.n()).filter(|&v| v != self.root).map(|v| (v, self.parent[v], self.weight[v])).collect()
    }

    pub fn total_weight(&self) -> C {
        self.edges().into_iter().map(|e| e.2).sum()
    }

    pub fn adjacency(&self) -> Vec<Vec<(usize, C)>> {
        let mut adj = vec![Vec::new(); self.n()];
        for (v, p, w) in self.edges() {
            adj[v].push((p, w));
            adj[p].push((v, w));
        }
        adj
    }

    /// Copy of the tree with the weight of edge `v - parent(v)` replaced.
    pub fn with_weight(&self, v: usize, w: C) -> Self {
        let mut t = self.clone();
        t.weight[v] = w;
        t
    }

    fn depths(&self) -> Vec<usize> {
        let adj = self.adjacency();
        let mut depth = vec![usize::MAX; self.n()];
        if self.n() == 0 {
            return depth;
        }
        depth[self.root] = 0;
        let mut stack = vec![self.root];
        while let Some(x) = stack.pop() {
            for &(y, _) in &adj[x] {
                if depth[y] == usize::MAX {
                    depth[y] = depth[x] + 1;
                    stack.push(y);
                }
            }
        }
        depth
    }

    /// Nodes on the tree path from `s` to `u`, inclusive.
    pub fn path(&self, s: usize, u: usize) -> Vec<usize> {
        let depth = self.depths();
        let (mut a, mut b) = (s, u);
        let mut front = vec![a];
        let mut back = vec![b];
        while a != b {
            if depth[a] >= depth[b] {
                a = self.parent[a];
                front.push(a);
            } else {
                b = self.parent[b];
                back.push(b);
            }
        }
        back.pop();
        front.extend(back.into_iter().rev());
        front
    }

    /// Hop distance between every pair of endpoints in `pairs`.
    pub fn hop_distances(&self, pairs: impl IntoIterator<Item = (usize, usize)>) -> Vec<usize> {
        let depth = self.depths();
        pairs
            .into_iter()
            .map(|(mut a, mut b)| {
                let mut hops = 0;
                while a != b {
                    if depth[a] >= depth[b] {
                        a = self.parent[a];
                    } else {
                        b = self.parent[b];
                    }
                    hops += 1;
                }
                hops
            })
            .collect()
    }

    /// Component of `start` after deleting the tree edge `{a, b}`.
    pub fn component_without(&self, start: usize, a: usize, b: usize) -> Vec<usize> {
        let adj = self.adjacency();
        let mut seen = vec![false; self.n()];
        seen[start] = true;
        let mut stack = vec![start];
        while let Some(x) = stack.pop() {
            for &(y, _) in &adj[x] {
                if seen[y] || (x == a && y == b) || (x == b && y == a) {
                    continue;
                }
                seen[y] = true;
                stack.push(y);
            }
        }
        (0..self.n()).filter(|&v| seen[v]).collect()
    }

    /// Min `s`-`u` cut read off the tree. Among equal bottleneck edges the one
    /// closest to `s` is used.
    pub fn query(&self, s: usize, u: usize) -> Result<TreeCut<C>> {
        for id in [s, u] {
            if id >= self.n() {
                return Err(Error::NodeOutOfRange { id, n: self.n() });
            }
        }
        if s == u {
            return Err(Error::SameTerminals(s));
        }
        let path = self.path(s, u);
        let mut best: Option<(C, usize)> = None;
        for i in 0..path.len() - 1 {
            let (x, y) = (path[i], path[i + 1]);
            let w = if self.parent[x] == y { self.weight[x] } else { self.weight[y] };
            if best.is_none_or(|(bw, _)| w < bw) {
                best = Some((w, i));
            }
        }
        let (value, i) = best.expect("path has an edge");
        let (x, y) = (path[i], path[i + 1]);
        Ok(TreeCut { value, side: self.component_without(s, x, y), edge: (x, y) })
    }

    /// `matrix[s][u]` = bottleneck weight between `s` and `u`; zero diagonal.
    pub fn all_pairs_matrix(&self) -> Vec<Vec<C>> {
        let n = self.n();
        let adj = self.adjacency();
        let mut matrix = vec![vec![C::zero(); n]; n];
        let mut stack = Vec::new();
        for s in 0..n {
            let row = &mut matrix[s];
            stack.clear();
            stack.push((s, usize::MAX, C::max_value()));
            while let Some((x, from, bottleneck)) = stack.pop() {
                if x != s {
                    row[x] = bottleneck;
                }
                for &(y, w) in &adj[x] {
                    if y != from {
                        stack.push((y, x, bottleneck.min(w)));
                    }
                }
            }
        }
        matrix
    }
}

/// Counters collected while building a tree.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BuildStats<C> {
    /// All max-flow invocations, capped or not.
    pub flow_calls: usize,
    /// Invocations that stopped at the cap.
    pub capped_calls: usize,
    /// Sum of flow values over all invocations.
    pub flow_sum: C,
    /// Uncapped invocations after the partial tree (hybrid only).
    pub stage2_calls: usize,
    /// Flow values of the stage-2 invocations, in call order.
    pub stage2_flows: Vec<C>,
    /// Nodes whose capacity-weighted degree exceeds the threshold (hybrid only).
    pub high_degree_nodes: usize,
    /// Threshold used by the hybrid construction.
    pub threshold: Option<C>,
}

impl<C: Capacity> BuildStats<C> {
    pub fn stage2_flow_sum(&self) -> C {
        self.stage2_flows.iter().copied().sum()
    }
}

enum Step<C> {
    Split(C),
    Capped,
}

/// Intermediate tree of a Gomory-Hu execution.
struct Engine<'g, C> {
    graph: &'g Graph<C>,
    blocks: Vec<Vec<usize>>,
    block_of: Vec<usize>,
    adj: Vec<BTreeMap<usize, C>>,
    stats: BuildStats<C>,
    /// Values of uncapped flows, in call order.
    splits: Vec<C>,
}

impl<'g, C: Capacity> Engine<'g, C> {
    fn new(graph: &'g Graph<C>) -> Self {
        let n = graph.n();
        let (blocks, adj) = if n == 0 { (Vec::new(), Vec::new()) } else { (vec![(0..n).collect()], vec![BTreeMap::new()]) };
        Engine { graph, blocks, block_of: vec![0; n], adj, stats: BuildStats::default(), splits: Vec::new() }
    }

    /// Splits block `i` with a min `s`-`t` cut of the auxiliary graph, or
    /// reports that the flow reached `cap`.
    fn step(&mut self, i: usize, s: usize, t: usize, cap: Option<C>) -> Result<Step<C>> {
        // Components of the tree without block i, one per neighbor.
        let keep = self.blocks[i].clone();
        let mut comps: Vec<Vec<usize>> = Vec::new();
        let mut comp_of_neighbor = Vec::new();
        for &j in self.adj[i].keys() {
            let mut nodes = Vec::new();
            let mut stack = vec![(j, i)];
            while let Some((x, from)) = stack.pop() {
                nodes.extend_from_slice(&self.blocks[x]);
                for &y in self.adj[x].keys() {
                    if y != from {
                        stack.push((y, x));
                    }
                }
            }
            comp_of_neighbor.push((j, keep.len() + comps.len()));
            comps.push(nodes);
        }
        let mut parts = vec![keep.clone()];
        parts.extend(comps);
        let partition = Partition::new(self.graph.n(), parts)?;
        let aux = self.graph.contract_block(&partition, 0)?;
        let fr = max_flow(&aux.graph, aux.mapping[s], aux.mapping[t], cap)?;
        self.stats.flow_calls += 1;
        self.stats.flow_sum = self.stats.flow_sum + fr.value;
        let Some(side) = fr.cut_side else {
            self.stats.capped_calls += 1;
            return Ok(Step::Capped);
        };

        let (s_part, t_part): (Vec<usize>, Vec<usize>) = keep.iter().partition(|&&v| side[aux.mapping[v]]);
        let new = self.blocks.len();
        for &v in &t_part {
            self.block_of[v] = new;
        }
        self.blocks[i] = s_part;
        self.blocks.push(t_part);
        self.adj.push(BTreeMap::new());
        for (j, merged) in comp_of_neighbor {
            if !side[merged] {
                let w = self.adj[i].remove(&j).expect("neighbor edge");
                self.adj[j].remove(&i);
                self.adj[j].insert(new, w);
                self.adj[new].insert(j, w);
            }
        }
        self.adj[i].insert(new, fr.value);
        self.adj[new].insert(i, fr.value);
        self.splits.push(fr.value);
        Ok(Step::Split(fr.value))
    }

    /// Index of the first block (ordered by smallest member) satisfying `pick`,
    /// together with the chosen pair.
    fn choose(&self, mut pick: impl FnMut(&[usize]) -> Option<(usize, usize)>) -> Option<(usize, usize, usize)> {
        let mut order: Vec<usize> = (0..self.blocks.len()).collect();
        order.sort_by_key(|&b| self.blocks[b].iter().min().copied());
        order.into_iter().find_map(|b| pick(&self.blocks[b]).map(|(s, t)| (b, s, t)))
    }

    fn finish(&mut self) -> Result<()> {
        while let Some((b, s, t)) = self.choose(|block| {
            let mut sorted = block.to_vec();
            sorted.sort_unstable();
            (sorted.len() >= 2).then(|| (sorted[0], sorted[1]))
        }) {
            match self.step(b, s, t, None)? {
                Step::Split(_) => {}
                Step::Capped => unreachable!("uncapped flow"),
            }
        }
        Ok(())
    }

    fn truncate(&mut self, k: C) -> Result<()> {
        let mut clusters = DisjointSet::new(self.graph.n());
        loop {
            let chosen = self.choose(|block| {
                let mut sorted = block.to_vec();
                sorted.sort_unstable();
                let first = *sorted.first()?;
                let root = clusters.find(first);
                sorted.iter().copied().find(|&v| clusters.find(v) != root).map(|v| (first, v))
            });
            let Some((b, s, t)) = chosen else { break };
            if let Step::Capped = self.step(b, s, t, Some(k + C::one()))? {
                clusters.union(s, t);
            }
        }
        Ok(())
    }

    fn super_tree(&self) -> Result<SuperNodeTree<C>> {
        let blocks: Vec<Vec<usize>> = self
            .blocks
            .iter()
            .map(|b| {
                let mut b = b.clone();
                b.sort_unstable();
                b
            })
            .collect();
        let mut edges = Vec::new();
        for (a, nbrs) in self.adj.iter().enumerate() {
            for (&b, &w) in nbrs {
                if a < b {
                    edges.push((a, b, w));
                }
            }
        }
        Ok(SuperNodeTree { partition: Partition::new(self.graph.n(), blocks)?, edges })
    }
}

struct DisjointSet {
    parent: Vec<usize>,
}

impl DisjointSet {
    fn new(n: usize) -> Self {
        DisjointSet { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        if a != b {
            self.parent[a.max(b)] = a.min(b);
        }
    }
}

fn edge_capacitated<C: Capacity>(g: &Graph<C>) -> Result<()> {
    if g.is_node_capacitated() {
        return Err(Error::Unsupported("node-capacitated graphs have no cut-equivalent tree here".into()));
    }
    if g.has_directed_edges() {
        return Err(Error::Unsupported("directed edges".into()));
    }
    Ok(())
}

/// Classical Gomory-Hu: `n - 1` uncapped flows on contracted auxiliary graphs.
pub fn gomory_hu<C: Capacity>(g: &Graph<C>) -> Result<CutTree<C>> {
    gomory_hu_with_stats(g).map(|(t, _)| t)
}

pub fn gomory_hu_with_stats<C: Capacity>(g: &Graph<C>) -> Result<(CutTree<C>, BuildStats<C>)> {
    edge_capacitated(g)?;
    let mut engine = Engine::new(g);
    engine.finish()?;
    let tree = engine.super_tree()?.into_cut_tree()?;
    Ok((tree, engine.stats))
}

/// Gusfield's variant: every flow runs on `g` itself, no contraction.
pub fn gusfield<C: Capacity>(g: &Graph<C>) -> Result<CutTree<C>> {
    gusfield_with_stats(g).map(|(t, _)| t)
}

pub fn gusfield_with_stats<C: Capacity>(g: &Graph<C>) -> Result<(CutTree<C>, BuildStats<C>)> {
    edge_capacitated(g)?;
    let n = g.n();
    let mut stats = BuildStats::default();
    let mut parent = vec![0usize; n];
    let mut weight = vec![C::zero(); n];
    for s in 1..n {
        let t = parent[s];
        let fr = max_flow(g, s, t, None)?;
        stats.flow_calls += 1;
        stats.flow_sum = stats.flow_sum + fr.value;
        let side = fr.cut_side.expect("uncapped flow has a cut");
        weight[s] = fr.value;
        for i in 0..n {
            if i != s && side[i] && parent[i] == t {
                parent[i] = s;
            }
        }
        if side[parent[t]] {
            parent[s] = parent[t];
            parent[t] = s;
            weight[s] = weight[t];
            weight[t] = fr.value;
        }
    }
    let edges: Vec<_> = (0..n).filter(|&v| parent[v] != v).map(|v| (v, parent[v], weight[v])).collect();
    Ok((CutTree::from_edges(n, &edges)?, stats))
}

/// `k`-partial tree via a truncated Gomory-Hu execution.
///
/// Every flow is capped at `k + 1`. A capped flow proves its pair is more
/// than `k`-connected and the pair is merged into one cluster; otherwise the
/// super-node is split along the min cut. A super-node is final once it is a
/// single cluster.
pub fn partial_tree<C: Capacity>(g: &Graph<C>, k: C) -> Result<SuperNodeTree<C>> {
    partial_tree_with_stats(g, k).map(|(t, _)| t)
}

pub fn partial_tree_with_stats<C: Capacity>(g: &Graph<C>, k: C) -> Result<(SuperNodeTree<C>, BuildStats<C>)> {
    if k < C::one() {
        return Err(Error::ContractMisuse(format!("k must be at least 1, got {k}")));
    }
    edge_capacitated(g)?;
    let mut engine = Engine::new(g);
    engine.truncate(k)?;
    Ok((engine.super_tree()?, engine.stats))
}

/// `ceil(sqrt(m))` where `m` counts edges with multiplicity (total capacity).
pub fn default_threshold<C: Capacity>(g: &Graph<C>) -> C {
    let m = g.total_capacity().to_f64().unwrap_or(0.0);
    C::from(m.sqrt().ceil().max(1.0)).unwrap_or_else(C::max_value)
}

/// `ceil(sqrt(m) * n^(1/6))`, the threshold tuned for flow algorithms whose
/// cost grows with the square root of the flow value.
pub fn tuned_threshold<C: Capacity>(g: &Graph<C>) -> C {
    let m = g.total_capacity().to_f64().unwrap_or(0.0);
    let n = g.n() as f64;
    C::from((m.sqrt() * n.powf(1.0 / 6.0)).ceil().max(1.0)).unwrap_or_else(C::max_value)
}

/// Two-stage construction: a `d`-partial tree resolves every pair involving a
/// node of degree at most `d`, then a Gomory-Hu execution resumes inside the
/// remaining super-nodes, which contain only nodes of degree above `d`.
pub fn hybrid_cut_tree<C: Capacity>(g: &Graph<C>, d: Option<C>) -> Result<CutTree<C>> {
    hybrid_cut_tree_with_stats(g, d).map(|(t, _)| t)
}

pub fn hybrid_cut_tree_with_stats<C: Capacity>(g: &Graph<C>, d: Option<C>) -> Result<(CutTree<C>, BuildStats<C>)> {
    edge_capacitated(g)?;
    let d = d.unwrap_or_else(|| default_threshold(g));
    if d < C::one() {
        return Err(Error::ContractMisuse(format!("d must be at least 1, got {d}")));
    }
    let mut engine = Engine::new(g);
    engine.truncate(d)?;
    let stage1_calls = engine.stats.flow_calls;
    let stage1_splits = engine.splits.len();
    engine.finish()?;
    let tree = engine.super_tree()?.into_cut_tree()?;

    let mut stats = engine.stats;
    stats.stage2_calls = stats.flow_calls - stage1_calls;
    stats.stage2_flows = engine.splits[stage1_splits..].to_vec();
    stats.high_degree_nodes = g.degrees().into_iter().filter(|&deg| deg > d).count();
    stats.threshold = Some(d);
    Ok((tree, stats))
}
