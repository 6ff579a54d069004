use crate::cuttree::CutTree;
use crate::scalar::Capacity;

/// Recursive centroid decomposition of a tree, listed by increasing depth.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CentroidPlan {
    /// Centroids by increasing depth; smallest id first within a depth.
    pub order: Vec<usize>,
    /// `depth[v]` is the recursion depth at which `v` became a centroid.
    pub depth: Vec<usize>,
    /// `subtrees[i]` is the sorted node set of the subtree in which
    /// `order[i]` was chosen.
    pub subtrees: Vec<Vec<usize>>,
}

impl CentroidPlan {
    pub fn max_depth(&self) -> usize {
        self.depth.iter().copied().max().unwrap_or(0)
    }

    pub fn at_depth(&self, d: usize) -> impl Iterator<Item = usize> + '_ {
        self.order.iter().copied().filter(move |&c| self.depth[c] == d)
    }
}

/// Components of the subgraph of `adj` induced by `allowed`, each sorted,
/// ordered by smallest member.
pub(crate) fn components(adj: &[Vec<usize>], allowed: &[bool]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; adj.len()];
    let mut out = Vec::new();
    for start in 0..adj.len() {
        if !allowed[start] || seen[start] {
            continue;
        }
        seen[start] = true;
        let mut comp = vec![start];
        let mut stack = vec![start];
        while let Some(x) = stack.pop() {
            for &y in &adj[x] {
                if allowed[y] && !seen[y] {
                    seen[y] = true;
                    comp.push(y);
                    stack.push(y);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

/// Smallest-id node of the connected node set `nodes` whose removal leaves
/// pieces of at most `|nodes| / 2` nodes.
pub(crate) fn centroid_of(adj: &[Vec<usize>], nodes: &[usize], inside: &[bool]) -> usize {
    let total = nodes.len();
    let root = nodes[0];
    let mut order = Vec::with_capacity(total);
    let mut parent = vec![usize::MAX; adj.len()];
    parent[root] = root;
    let mut stack = vec![root];
    while let Some(x) = stack.pop() {
        order.push(x);
        for &y in &adj[x] {
            if inside[y] && parent[y] == usize::MAX {
                parent[y] = x;
                stack.push(y);
            }
        }
    }
    let mut size = vec![1usize; adj.len()];
    let mut heaviest = vec![0usize; adj.len()];
    for &x in order.iter().rev() {
        if x != root {
            let p = parent[x];
            size[p] += size[x];
            heaviest[p] = heaviest[p].max(size[x]);
        }
    }
    order
        .iter()
        .copied()
        .filter(|&x| 2 * heaviest[x].max(total - size[x]) <= total)
        .min()
        .expect("every tree has a centroid")
}

/// True when `c` is a centroid of the connected node set `nodes`.
pub(crate) fn is_centroid(adj: &[Vec<usize>], nodes: &[usize], c: usize) -> bool {
    let mut allowed = vec![false; adj.len()];
    for &v in nodes {
        allowed[v] = true;
    }
    if !allowed[c] {
        return false;
    }
    allowed[c] = false;
    components(adj, &allowed).iter().all(|comp| 2 * comp.len() <= nodes.len())
}

pub(crate) fn tree_adjacency<C: Capacity>(t: &CutTree<C>) -> Vec<Vec<usize>> {
    t.adjacency().into_iter().map(|nbrs| nbrs.into_iter().map(|(v, _)| v).collect()).collect()
}

pub fn centroid_decompose<C: Capacity>(t: &CutTree<C>) -> CentroidPlan {
    let n = t.n();
    let adj = tree_adjacency(t);
    let mut plan = CentroidPlan { order: Vec::new(), depth: vec![0; n], subtrees: Vec::new() };
    if n == 0 {
        return plan;
    }
    let mut inside = vec![false; n];
    let mut level = vec![(0..n).collect::<Vec<_>>()];
    let mut depth = 0;
    while !level.is_empty() {
        let mut chosen: Vec<(usize, Vec<usize>)> = level
            .into_iter()
            .map(|nodes| {
                for &v in &nodes {
                    inside[v] = true;
                }
                let c = centroid_of(&adj, &nodes, &inside);
                for &v in &nodes {
                    inside[v] = false;
                }
                (c, nodes)
            })
            .collect();
        chosen.sort_by_key(|(c, _)| *c);
        let mut next = Vec::new();
        for (c, nodes) in chosen {
            plan.order.push(c);
            plan.depth[c] = depth;
            let mut allowed = vec![false; n];
            for &v in &nodes {
                allowed[v] = true;
            }
            allowed[c] = false;
            next.extend(components(&adj, &allowed));
            plan.subtrees.push(nodes);
        }
        level = next;
        depth += 1;
    }
    plan
}
