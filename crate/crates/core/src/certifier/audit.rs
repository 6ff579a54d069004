use serde::Serialize;

use super::centroid::{tree_adjacency, CentroidPlan};
use super::expansion_frame;
use crate::cuttree::CutTree;
use crate::error::Result;
use crate::graph::Graph;
use crate::scalar::Capacity;

/// Both sides of the stretch identity for a candidate cut tree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(bound = "C: Capacity")]
pub struct Stretch<C> {
    /// Sum over graph edges of capacity times tree hop distance.
    pub lhs: C,
    /// Sum of tree edge weights.
    pub rhs_equality: C,
    /// Twice the total graph capacity.
    pub rhs_bound: C,
    pub ok: bool,
}

pub fn stretch_check<C: Capacity>(g: &Graph<C>, t: &CutTree<C>) -> Stretch<C> {
    let hops = t.hop_distances(g.edges().iter().map(|e| (e.u, e.v)));
    let lhs = g.edges().iter().zip(hops).map(|(e, h)| e.cap * C::from_usize(h)).sum::<C>();
    let rhs_equality = t.total_weight();
    let rhs_bound = g.total_capacity() + g.total_capacity();
    Stretch { lhs, rhs_equality, rhs_bound, ok: lhs == rhs_equality && lhs <= rhs_bound }
}

/// Auxiliary graph sizes of the expansions, grouped by centroid depth.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AuxAudit {
    /// Original edges surviving contraction, summed per depth.
    pub per_depth: Vec<usize>,
    /// Largest single auxiliary graph per depth.
    pub peak_per_depth: Vec<usize>,
    /// Distinct edges after summing parallels, per depth.
    pub distinct_per_depth: Vec<usize>,
    pub total: usize,
    pub per_depth_bound: usize,
    pub total_bound: usize,
    /// The bounds are only claimed for unit-capacity graphs.
    pub bound_applies: bool,
    pub ok: bool,
}

fn ceil_log2(n: usize) -> usize {
    if n <= 1 {
        0
    } else {
        (usize::BITS - (n - 1).leading_zeros()) as usize
    }
}

/// Measures every expansion of `plan` on `g`. Bounds: `4m` per depth and
/// `4m (ceil(log2 n) + 1)` overall.
pub fn aux_size_audit<C: Capacity>(g: &Graph<C>, t: &CutTree<C>, plan: &CentroidPlan) -> Result<AuxAudit> {
    let adj = tree_adjacency(t);
    let depths = plan.max_depth() + 1;
    let mut per_depth = vec![0; depths];
    let mut peak_per_depth = vec![0; depths];
    let mut distinct_per_depth = vec![0; depths];
    for (&c, subtree) in plan.order.iter().zip(&plan.subtrees) {
        if subtree.len() < 2 {
            continue;
        }
        let frame = expansion_frame(g, t, &adj, subtree, c)?;
        let d = plan.depth[c];
        per_depth[d] += frame.aux.surviving_edges;
        peak_per_depth[d] = peak_per_depth[d].max(frame.aux.surviving_edges);
        distinct_per_depth[d] += frame.aux.graph.m();
    }
    let m = g.m();
    let total = per_depth.iter().sum();
    let per_depth_bound = 4 * m;
    let total_bound = 4 * m * (ceil_log2(g.n()) + 1);
    let bound_applies = g.is_unit();
    let ok = !bound_applies || (per_depth.iter().all(|&s| s <= per_depth_bound) && total <= total_bound);
    Ok(AuxAudit { per_depth, peak_per_depth, distinct_per_depth, total, per_depth_bound, total_bound, bound_applies, ok })
}
