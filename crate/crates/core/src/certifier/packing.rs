//! Tree-packing evidence for max-flow lower bounds.
//!
//! An undirected multigraph `H` becomes the Eulerian digraph `H_e` by
//! subdividing every unit edge with a fresh node and orienting each half in
//! both directions. Edge-disjoint directed trees rooted at `r` in `H_e`
//! certify that `max-flow(r, v) >= #trees containing v`.

use std::collections::HashSet;
use std::fmt;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::graph::Graph;
use crate::scalar::Capacity;

/// A directed tree given by its `(parent, child)` arcs in `H_e`.
pub type DirectedTree = Vec<(usize, usize)>;

/// Subdivides every edge copy (an edge of capacity `c` counts as `c` copies)
/// and adds both orientations of each half.
///
/// Copy `k` in enumeration order gets node `h.n() + k`; its arcs are
/// `u -> w`, `w -> u`, `w -> v`, `v -> w`.
pub fn eulerian_transform<C: Capacity>(h: &Graph<C>) -> Graph<C> {
    let copies: usize = h.edges().iter().map(|e| e.cap.as_usize()).sum();
    let mut out = Graph::new(h.n() + copies);
    let mut w = h.n();
    for e in h.edges() {
        for _ in 0..e.cap.as_usize() {
            for (a, b) in [(e.u, w), (w, e.u), (w, e.v), (e.v, w)] {
                out.add_arc(a, b, C::one()).expect("valid arc");
            }
            w += 1;
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PackingError {
    BadRoot(usize),
    MissingArc { tree: usize, arc: (usize, usize) },
    SharedArc { tree: usize, arc: (usize, usize) },
    TwoParents { tree: usize, node: usize },
    RootHasParent { tree: usize },
    Detached { tree: usize, node: usize },
    Deficit { node: usize, trees: usize, required: usize },
}

impl fmt::Display for PackingError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PackingError::BadRoot(r) => write!(f, "root {r} is not an original node"),
            PackingError::MissingArc { tree, arc } => write!(f, "tree {tree}: arc {arc:?} not in the Eulerian graph"),
            PackingError::SharedArc { tree, arc } => write!(f, "tree {tree}: arc {arc:?} already used"),
            PackingError::TwoParents { tree, node } => write!(f, "tree {tree}: node {node} has two parents"),
            PackingError::RootHasParent { tree } => write!(f, "tree {tree}: root has a parent"),
            PackingError::Detached { tree, node } => write!(f, "tree {tree}: node {node} not connected to the root"),
            PackingError::Deficit { node, trees, required } => {
                write!(f, "node {node} is in {trees} trees, needs {required}")
            }
        }
    }
}

/// Checks that `trees` are edge-disjoint directed trees rooted at `root` in
/// the Eulerian transform of `h`, and that every original node `v != root`
/// appears in at least `lambda[v]` of them.
pub fn explain_tree_packing<C: Capacity>(
    h: &Graph<C>,
    root: usize,
    lambda: &[C],
    trees: &[DirectedTree],
) -> Result<(), PackingError> {
    if root >= h.n() {
        return Err(PackingError::BadRoot(root));
    }
    let he = eulerian_transform(h);
    let arcs: HashSet<(usize, usize)> = he.edges().iter().map(|e| (e.u, e.v)).collect();
    let mut used = HashSet::new();
    let mut occurrences = vec![0usize; h.n()];
    for (ti, tree) in trees.iter().enumerate() {
        let mut parent = std::collections::HashMap::new();
        for &arc in tree {
            if !arcs.contains(&arc) {
                return Err(PackingError::MissingArc { tree: ti, arc });
            }
            if !used.insert(arc) {
                return Err(PackingError::SharedArc { tree: ti, arc });
            }
            let (p, c) = arc;
            if c == root {
                return Err(PackingError::RootHasParent { tree: ti });
            }
            if parent.insert(c, p).is_some() {
                return Err(PackingError::TwoParents { tree: ti, node: c });
            }
        }
        // every node must climb to the root within |tree| steps
        for &start in parent.keys() {
            let mut x = start;
            let mut steps = 0;
            while x != root {
                match parent.get(&x) {
                    Some(&p) if steps <= tree.len() => {
                        x = p;
                        steps += 1;
                    }
                    _ => return Err(PackingError::Detached { tree: ti, node: start }),
                }
            }
        }
        for &v in parent.keys() {
            if v < h.n() {
                occurrences[v] += 1;
            }
        }
    }
    for v in 0..h.n() {
        if v == root {
            continue;
        }
        let need = lambda.get(v).copied().unwrap_or_else(C::zero);
        if need > C::zero() && C::from_usize(occurrences[v]) < need {
            return Err(PackingError::Deficit { node: v, trees: occurrences[v], required: need.as_usize() });
        }
    }
    Ok(())
}

pub fn check_tree_packing<C: Capacity>(h: &Graph<C>, root: usize, lambda: &[C], trees: &[DirectedTree]) -> bool {
    explain_tree_packing(h, root, lambda, trees).is_ok()
}

/// Best-effort packer: each round grows a DFS tree from `root` over unused
/// arcs and keeps only the paths to nodes still short of their demand.
/// Retries with shuffled arc orders; `None` when every attempt fails.
pub fn greedy_packing<C: Capacity>(
    h: &Graph<C>,
    root: usize,
    lambda: &[C],
    attempts: usize,
    seed: u64,
) -> Option<Vec<DirectedTree>> {
    let he = eulerian_transform(h);
    let demand: Vec<usize> = (0..h.n())
        .map(|v| if v == root { 0 } else { lambda.get(v).map_or(0, |l| (*l).max(C::zero()).as_usize()) })
        .collect();
    let rounds = demand.iter().copied().max().unwrap_or(0);
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); he.n()];
    for (i, e) in he.edges().iter().enumerate() {
        adj[e.u].push(i);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for attempt in 0..attempts.max(1) {
        if attempt > 0 {
            for list in adj.iter_mut() {
                list.shuffle(&mut rng);
            }
        }
        if let Some(trees) = pack_once(&he, &adj, root, &demand, rounds) {
            return Some(trees);
        }
    }
    None
}

fn pack_once<C: Capacity>(
    he: &Graph<C>,
    adj: &[Vec<usize>],
    root: usize,
    demand: &[usize],
    rounds: usize,
) -> Option<Vec<DirectedTree>> {
    let arcs = he.edges();
    let mut used = vec![false; arcs.len()];
    let mut have = vec![0usize; demand.len()];
    let mut trees = Vec::with_capacity(rounds);
    let mut via = vec![usize::MAX; he.n()];
    let mut in_tree = vec![false; he.n()];
    for _ in 0..rounds {
        via.fill(usize::MAX);
        let mut seen = vec![false; he.n()];
        seen[root] = true;
        // depth-first, so each tree spends as few root arcs as possible
        let mut next = vec![0usize; he.n()];
        let mut stack = vec![root];
        while let Some(&x) = stack.last() {
            match adj[x][next[x]..].iter().position(|&a| !used[a] && !seen[arcs[a].v]) {
                Some(off) => {
                    let a = adj[x][next[x] + off];
                    next[x] += off + 1;
                    let y = arcs[a].v;
                    seen[y] = true;
                    via[y] = a;
                    stack.push(y);
                }
                None => {
                    stack.pop();
                }
            }
        }
        in_tree.fill(false);
        in_tree[root] = true;
        let mut tree = Vec::new();
        for v in 0..demand.len() {
            if have[v] >= demand[v] {
                continue;
            }
            if !seen[v] {
                return None;
            }
            let mut x = v;
            while !in_tree[x] {
                in_tree[x] = true;
                let a = via[x];
                used[a] = true;
                tree.push((arcs[a].u, x));
                x = arcs[a].u;
            }
        }
        for (v, got) in have.iter_mut().enumerate() {
            if v != root && in_tree[v] {
                *got += 1;
            }
        }
        trees.push(tree);
    }
    Some(trees)
}
