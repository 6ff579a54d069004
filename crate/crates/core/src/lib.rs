//! Cut-equivalent (Gomory-Hu) trees, max-flow, tree certificates and the
//! node-capacitated hardness gadgets.
//!
//! Everything is generic over an integer [`Capacity`]; the `*64` aliases
//! below cover the common case.

pub mod certifier;
pub mod cuttree;
pub mod error;
pub mod gadgets;
pub mod graph;
pub mod io;
pub mod maxflow;
pub mod scalar;

pub use certifier::{prove, prove_with, verify, Check, ProveOptions, Rejection, Verdict, Witness};
pub use cuttree::{
    default_threshold, gomory_hu, gomory_hu_with_stats, gusfield, gusfield_with_stats, hybrid_cut_tree,
    hybrid_cut_tree_with_stats, partial_tree, partial_tree_with_stats, tuned_threshold, BuildStats, CutTree,
    SuperNodeTree, TreeCut,
};
pub use error::{Error, Result};
pub use graph::{Contraction, Edge, Graph, Partition, SplitGraph};
pub use maxflow::{flow_decompose, max_flow, FlowResult};
pub use scalar::Capacity;

pub type Graph64 = Graph<i64>;
pub type CutTree64 = CutTree<i64>;
pub type SuperNodeTree64 = SuperNodeTree<i64>;
pub type FlowResult64 = FlowResult<i64>;
pub type BuildStats64 = BuildStats<i64>;
pub type Witness64 = Witness<i64>;

pub type Graph32 = Graph<i32>;
pub type CutTree32 = CutTree<i32>;
