//! Certifying construction of cut-equivalent trees.
//!
//! The prover walks the recursive centroid decomposition of a candidate tree
//! and, for every centroid, records an *expansion*: the auxiliary graph in
//! which every component of the tree outside the centroid's subtree is merged
//! into one node, the cuts separating the centroid from each tree neighbor,
//! and flow evidence that those cuts are minimum. The verifier replays the
//! expansions against the graph and the tree and rejects at the first
//! failing check.

mod audit;
mod centroid;
mod packing;

use serde::{Deserialize, Serialize};

use crate::cuttree::CutTree;
use crate::error::{Error, Result};
use crate::graph::{Contraction, Graph, Partition};
use crate::maxflow::max_flow;
use crate::scalar::Capacity;

pub use audit::{aux_size_audit, stretch_check, AuxAudit, Stretch};
pub use centroid::{centroid_decompose, CentroidPlan};
pub use packing::{
    check_tree_packing, eulerian_transform, explain_tree_packing, greedy_packing, DirectedTree, PackingError,
};

use centroid::{components, is_centroid, tree_adjacency};

pub const WITNESS_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(bound = "C: Capacity")]
pub struct Witness<C> {
    pub version: u32,
    pub expansions: Vec<Expansion<C>>,
}

/// One expansion step. Auxiliary-graph node ids: the nodes of the expanded
/// subtree (`blocks[0]`) in ascending order, then one merged node per
/// further block.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(bound = "C: Capacity")]
pub struct Expansion<C> {
    pub centroid: usize,
    pub blocks: Vec<Vec<usize>>,
    pub cuts: Vec<ClaimedCut<C>>,
    pub evidence: Vec<Evidence<C>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(bound = "C: Capacity")]
pub struct ClaimedCut<C> {
    /// Tree neighbor of the centroid (original node id).
    pub neighbor: usize,
    /// Auxiliary node ids on the neighbor's side.
    pub side: Vec<usize>,
    pub value: C,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", bound = "C: Capacity")]
pub enum Evidence<C> {
    /// One feasible flow per neighbor, centroid to neighbor.
    Flows { flows: Vec<NeighborFlow<C>> },
    /// Edge-disjoint directed trees rooted at the centroid in the Eulerian
    /// transform of the auxiliary graph.
    Packing { root: usize, trees: Vec<DirectedTree> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(bound = "C: Capacity")]
pub struct NeighborFlow<C> {
    pub neighbor: usize,
    pub value: C,
    /// `(from, to, units)` over auxiliary node ids, units positive.
    pub edges: Vec<(usize, usize, C)>,
}

impl<C: Capacity> Witness<C> {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("witness serializes")
    }

    pub fn from_json(text: &str) -> std::result::Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Check {
    Malformed,
    Centroid,
    Blocks,
    CutSides,
    CutValue,
    Flow,
    Packing,
    Incomplete,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rejection {
    /// Index of the failing expansion, if the failure is tied to one.
    pub expansion: Option<usize>,
    pub check: Check,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Accept,
    Reject(Rejection),
}

impl Verdict {
    pub fn is_accept(&self) -> bool {
        matches!(self, Verdict::Accept)
    }

    pub fn rejection(&self) -> Option<&Rejection> {
        match self {
            Verdict::Accept => None,
            Verdict::Reject(r) => Some(r),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ProveOptions {
    /// Try to attach tree-packing evidence (unit-capacity graphs only).
    pub packing: bool,
    pub packing_attempts: usize,
    pub seed: u64,
}

impl Default for ProveOptions {
    fn default() -> Self {
        ProveOptions { packing: true, packing_attempts: 16, seed: 0 }
    }
}

/// Everything an expansion of `subtree` around `centroid` is checked against,
/// derived from the graph and the tree alone.
pub(crate) struct ExpansionFrame<C> {
    pub blocks: Vec<Vec<usize>>,
    pub aux: Contraction<C>,
    pub neighbors: Vec<usize>,
    pub sides: Vec<Vec<usize>>,
    pub weights: Vec<C>,
}

pub(crate) fn expansion_frame<C: Capacity>(
    g: &Graph<C>,
    t: &CutTree<C>,
    adj: &[Vec<usize>],
    subtree: &[usize],
    centroid: usize,
) -> Result<ExpansionFrame<C>> {
    let n = g.n();
    let mut in_subtree = vec![false; n];
    for &v in subtree {
        in_subtree[v] = true;
    }
    let outside: Vec<bool> = in_subtree.iter().map(|b| !b).collect();
    let mut blocks = vec![subtree.to_vec()];
    blocks.extend(components(adj, &outside));
    let partition = Partition::new(n, blocks.clone())?;
    let aux = g.contract_block(&partition, 0)?;

    let mut neighbors: Vec<usize> = adj[centroid].iter().copied().filter(|&u| in_subtree[u]).collect();
    neighbors.sort_unstable();
    let mut sides = Vec::with_capacity(neighbors.len());
    let mut weights = Vec::with_capacity(neighbors.len());
    for &u in &neighbors {
        let mut side: Vec<usize> = t.component_without(u, centroid, u).into_iter().map(|v| aux.mapping[v]).collect();
        side.sort_unstable();
        side.dedup();
        sides.push(side);
        weights.push(if t.parent(u) == centroid { t.weight(u) } else { t.weight(centroid) });
    }
    Ok(ExpansionFrame { blocks, aux, neighbors, sides, weights })
}

/// Evaluates all cuts `(V \ side_k, side_k)` of `aux` in one pass over its
/// edges. Sides must be pairwise disjoint. Returns the capacities and the
/// number of per-cut updates made (at most two per edge).
pub fn evaluate_cuts<C: Capacity>(aux: &Graph<C>, sides: &[Vec<usize>]) -> (Vec<C>, usize) {
    let mut label = vec![usize::MAX; aux.n()];
    for (k, side) in sides.iter().enumerate() {
        for &v in side {
            debug_assert_eq!(label[v], usize::MAX, "cut sides overlap");
            label[v] = k;
        }
    }
    let mut values = vec![C::zero(); sides.len()];
    let mut updates = 0;
    for e in aux.edges() {
        let (a, b) = (label[e.u], label[e.v]);
        if a == b {
            continue;
        }
        for k in [a, b] {
            if k != usize::MAX {
                values[k] = values[k] + e.cap;
                updates += 1;
            }
        }
    }
    (values, updates)
}

fn check_inputs<C: Capacity>(g: &Graph<C>, t: &CutTree<C>) -> Result<()> {
    if t.n() != g.n() {
        return Err(Error::InvalidTree(format!("tree has {} nodes, graph has {}", t.n(), g.n())));
    }
    if g.is_node_capacitated() || g.has_directed_edges() {
        return Err(Error::Unsupported("certification needs an undirected edge-capacitated graph".into()));
    }
    Ok(())
}

pub fn prove<C: Capacity>(g: &Graph<C>, t: &CutTree<C>) -> Result<Witness<C>> {
    prove_with(g, t, &ProveOptions::default())
}

/// Builds a witness for `t`. Claimed values are the capacities of the
/// tree-induced cuts; a wrong tree yields a witness the verifier rejects.
pub fn prove_with<C: Capacity>(g: &Graph<C>, t: &CutTree<C>, opts: &ProveOptions) -> Result<Witness<C>> {
    check_inputs(g, t)?;
    let adj = tree_adjacency(t);
    let plan = centroid_decompose(t);
    let unit = g.is_unit();
    let mut expansions = Vec::new();
    for (j, (&c, subtree)) in plan.order.iter().zip(&plan.subtrees).enumerate() {
        if subtree.len() < 2 {
            continue;
        }
        let frame = expansion_frame(g, t, &adj, subtree, c)?;
        let (values, _) = evaluate_cuts(&frame.aux.graph, &frame.sides);
        let root = frame.aux.mapping[c];
        let cuts = frame
            .neighbors
            .iter()
            .zip(&frame.sides)
            .zip(&values)
            .map(|((&u, side), &value)| ClaimedCut { neighbor: u, side: side.clone(), value })
            .collect();

        let mut flows = Vec::with_capacity(frame.neighbors.len());
        for &u in &frame.neighbors {
            let fr = max_flow(&frame.aux.graph, root, frame.aux.mapping[u], None)?;
            let edges = frame
                .aux
                .graph
                .edges()
                .iter()
                .zip(&fr.edge_flows)
                .filter(|(_, &f)| f != C::zero())
                .map(|(e, &f)| if f > C::zero() { (e.u, e.v, f) } else { (e.v, e.u, -f) })
                .collect();
            flows.push(NeighborFlow { neighbor: u, value: fr.value, edges });
        }
        let mut evidence = vec![Evidence::Flows { flows }];

        if opts.packing && unit {
            let mut lambda = vec![C::zero(); frame.aux.graph.n()];
            for (&u, &w) in frame.neighbors.iter().zip(&frame.weights) {
                lambda[frame.aux.mapping[u]] = w;
            }
            let seed = opts.seed ^ (j as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15);
            if let Some(trees) = greedy_packing(&frame.aux.graph, root, &lambda, opts.packing_attempts, seed) {
                evidence.push(Evidence::Packing { root, trees });
            }
        }
        expansions.push(Expansion { centroid: c, blocks: frame.blocks, cuts, evidence });
    }
    Ok(Witness { version: WITNESS_VERSION, expansions })
}

fn reject(expansion: Option<usize>, check: Check, detail: impl Into<String>) -> Verdict {
    Verdict::Reject(Rejection { expansion, check, detail: detail.into() })
}

/// Checks a flow from `root` to `sink` over auxiliary node ids: arcs must be
/// auxiliary edges, per-edge net flow within capacity, conservation at every
/// other node. Returns the net outflow of `root`.
fn check_flow<C: Capacity>(aux: &Graph<C>, root: usize, sink: usize, arcs: &[(usize, usize, C)]) -> std::result::Result<C, String> {
    use std::collections::HashMap;
    let cap: HashMap<(usize, usize), C> = aux.edges().iter().map(|e| ((e.u.min(e.v), e.u.max(e.v)), e.cap)).collect();
    let mut net: HashMap<(usize, usize), C> = HashMap::new();
    let mut balance = vec![C::zero(); aux.n()];
    for &(a, b, f) in arcs {
        if a >= aux.n() || b >= aux.n() {
            return Err(format!("arc {a}->{b} outside the auxiliary graph"));
        }
        if f <= C::zero() {
            return Err(format!("non-positive units on arc {a}->{b}"));
        }
        let key = (a.min(b), a.max(b));
        if !cap.contains_key(&key) {
            return Err(format!("arc {a}->{b} is not an auxiliary edge"));
        }
        let signed = if a < b { f } else { -f };
        let slot = net.entry(key).or_insert_with(C::zero);
        *slot = *slot + signed;
        balance[a] = balance[a] + f;
        balance[b] = balance[b] - f;
    }
    for (key, f) in &net {
        if f.abs() > cap[key] {
            return Err(format!("flow {} exceeds capacity {} on {:?}", f.abs(), cap[key], key));
        }
    }
    for (v, &bal) in balance.iter().enumerate() {
        if v != root && v != sink && bal != C::zero() {
            return Err(format!("conservation violated at auxiliary node {v}"));
        }
    }
    Ok(balance[root])
}

/// Replays the witness. Accepts only if every tree edge is covered by exactly
/// one expansion whose cut and flow checks pass.
pub fn verify<C: Capacity>(g: &Graph<C>, t: &CutTree<C>, w: &Witness<C>) -> Verdict {
    if let Err(e) = check_inputs(g, t) {
        return reject(None, Check::Malformed, e.to_string());
    }
    if w.version != WITNESS_VERSION {
        return reject(None, Check::Malformed, format!("unsupported witness version {}", w.version));
    }
    let n = g.n();
    let adj = tree_adjacency(t);
    // current super-nodes of the intermediate tree
    let mut super_of = vec![0usize; n];
    let mut supers: Vec<Vec<usize>> = if n == 0 { Vec::new() } else { vec![(0..n).collect()] };

    for (j, exp) in w.expansions.iter().enumerate() {
        let at = Some(j);
        let c = exp.centroid;
        if c >= n {
            return reject(at, Check::Malformed, format!("centroid {c} out of range"));
        }
        let subtree = supers[super_of[c]].clone();
        if subtree.len() < 2 {
            return reject(at, Check::Malformed, format!("super-node of {c} is already a singleton"));
        }
        if !is_centroid(&adj, &subtree, c) {
            return reject(at, Check::Centroid, format!("{c} is not a centroid of its super-node"));
        }
        let frame = match expansion_frame(g, t, &adj, &subtree, c) {
            Ok(f) => f,
            Err(e) => return reject(at, Check::Malformed, e.to_string()),
        };
        if exp.blocks != frame.blocks {
            return reject(at, Check::Blocks, "auxiliary partition does not match the tree");
        }

        // (a) cut check
        if exp.cuts.len() != frame.neighbors.len() {
            return reject(at, Check::CutSides, format!("{} cuts for {} neighbors", exp.cuts.len(), frame.neighbors.len()));
        }
        let root = frame.aux.mapping[c];
        let mut owner = vec![false; frame.aux.graph.n()];
        for (k, cut) in exp.cuts.iter().enumerate() {
            if cut.neighbor != frame.neighbors[k] || cut.side != frame.sides[k] {
                return reject(at, Check::CutSides, format!("cut {k} is not the tree cut at neighbor {}", frame.neighbors[k]));
            }
            for &v in &cut.side {
                if v == root || owner[v] {
                    return reject(at, Check::CutSides, format!("cut sides overlap at auxiliary node {v}"));
                }
                owner[v] = true;
            }
        }
        let (values, updates) = evaluate_cuts(&frame.aux.graph, &frame.sides);
        debug_assert!(updates <= 2 * frame.aux.graph.m());
        for (k, cut) in exp.cuts.iter().enumerate() {
            if cut.value != values[k] || values[k] != frame.weights[k] {
                return reject(
                    at,
                    Check::CutValue,
                    format!(
                        "neighbor {}: claimed {}, evaluated {}, tree weight {}",
                        cut.neighbor, cut.value, values[k], frame.weights[k]
                    ),
                );
            }
        }

        // (b) flow check
        if exp.evidence.is_empty() {
            return reject(at, Check::Flow, "no flow evidence");
        }
        for ev in &exp.evidence {
            match ev {
                Evidence::Flows { flows } => {
                    if flows.len() != frame.neighbors.len() {
                        return reject(at, Check::Flow, "one flow per neighbor required");
                    }
                    for (k, nf) in flows.iter().enumerate() {
                        let u = frame.neighbors[k];
                        if nf.neighbor != u {
                            return reject(at, Check::Flow, format!("flow {k} targets {} instead of {u}", nf.neighbor));
                        }
                        match check_flow(&frame.aux.graph, root, frame.aux.mapping[u], &nf.edges) {
                            Err(msg) => return reject(at, Check::Flow, format!("neighbor {u}: {msg}")),
                            Ok(value) if value != nf.value => {
                                return reject(at, Check::Flow, format!("neighbor {u}: flow carries {value}, claims {}", nf.value))
                            }
                            Ok(value) if value < frame.weights[k] => {
                                return reject(
                                    at,
                                    Check::Flow,
                                    format!("neighbor {u}: flow {value} below tree weight {}", frame.weights[k]),
                                )
                            }
                            Ok(_) => {}
                        }
                    }
                }
                Evidence::Packing { root: r, trees } => {
                    if *r != root {
                        return reject(at, Check::Packing, "packing root is not the centroid");
                    }
                    let mut lambda = vec![C::zero(); frame.aux.graph.n()];
                    for (&u, &wt) in frame.neighbors.iter().zip(&frame.weights) {
                        lambda[frame.aux.mapping[u]] = wt;
                    }
                    if let Err(e) = explain_tree_packing(&frame.aux.graph, root, &lambda, trees) {
                        return reject(at, Check::Packing, e.to_string());
                    }
                }
            }
        }

        // expand: the super-node becomes {c} plus one piece per neighbor
        let pieces: Vec<Vec<usize>> = {
            let mut allowed = vec![false; n];
            for &v in &subtree {
                allowed[v] = true;
            }
            allowed[c] = false;
            components(&adj, &allowed)
        };
        let slot = super_of[c];
        supers[slot] = vec![c];
        for piece in pieces {
            let id = supers.len();
            for &v in &piece {
                super_of[v] = id;
            }
            supers.push(piece);
        }
    }
    if let Some(big) = supers.iter().find(|s| s.len() > 1) {
        return reject(None, Check::Incomplete, format!("super-node {:?} never expanded", big));
    }
    Verdict::Accept
}
