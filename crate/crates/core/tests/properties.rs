mod common;

use ghkit::certifier::stretch_check;
use ghkit::io::{parse_graph, parse_tree, write_graph, write_tree};
use ghkit::{gomory_hu, max_flow, Graph, Partition};
use proptest::prelude::*;

fn graph_strategy(max_n: usize, max_m: usize, max_cap: i64) -> impl Strategy<Value = Graph<i64>> {
    (2..=max_n).prop_flat_map(move |n| {
        prop::collection::vec((0..n, 0..n, 1..=max_cap), 0..=max_m).prop_map(move |raw| {
            let mut g = Graph::new(n);
            for (u, v, c) in raw {
                if u != v {
                    g.add_edge(u, v, c).unwrap();
                }
            }
            g
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn capped_flow_is_monotone(g in graph_strategy(8, 16, 4), k1 in 1i64..10, k2 in 1i64..10) {
        let (lo, hi) = (k1.min(k2), k1.max(k2));
        let t = g.n() - 1;
        let full = max_flow(&g, 0, t, None).unwrap().value;
        let a = max_flow(&g, 0, t, Some(lo)).unwrap();
        let b = max_flow(&g, 0, t, Some(hi)).unwrap();
        prop_assert!(a.value <= b.value);
        prop_assert_eq!(a.value, full.min(lo));
        prop_assert_eq!(b.value, full.min(hi));
    }

    #[test]
    fn contraction_preserves_block_cuts(
        g in graph_strategy(8, 16, 3),
        labels in prop::collection::vec(0usize..4, 8),
        mask in any::<u32>(),
    ) {
        let n = g.n();
        let mut blocks: Vec<Vec<usize>> = vec![Vec::new(); 4];
        for v in 0..n {
            blocks[labels[v]].push(v);
        }
        blocks.retain(|b| !b.is_empty());
        let p = Partition::new(n, blocks.clone()).unwrap();
        let keep = blocks[0].clone();
        let c = g.contract(&p, &keep).unwrap();
        // any bipartition of the contracted nodes lifts to a bipartition of g
        let side: Vec<bool> = (0..c.graph.n()).map(|x| mask >> (x % 32) & 1 == 1).collect();
        let lifted: Vec<bool> = (0..n).map(|v| side[c.mapping[v]]).collect();
        prop_assert_eq!(c.graph.cut_capacity(&side), g.cut_capacity(&lifted));
        prop_assert!(c.surviving_edges <= g.m());
    }

    #[test]
    fn split_flow_matches_vertex_cut(g in graph_strategy(7, 12, 1), caps in prop::collection::vec(1i64..4, 7)) {
        let mut g = g;
        for v in 0..g.n() {
            g.set_node_cap(v, caps[v]).unwrap();
        }
        let t = g.n() - 1;
        let split = g.split_node_capacities(0, t).unwrap();
        let value = max_flow(&split.graph, split.source, split.sink, None).unwrap().value;
        prop_assert_eq!(value, common::brute_node_cut(&g, 0, t));
    }

    #[test]
    fn graph_and_tree_files_round_trip(g in graph_strategy(9, 20, 5)) {
        let text = write_graph(&g);
        prop_assert_eq!(&parse_graph::<i64>(&text).unwrap(), &g);
        let t = gomory_hu(&g).unwrap();
        prop_assert_eq!(parse_tree::<i64>(&write_tree(&t)).unwrap().all_pairs_matrix(), t.all_pairs_matrix());
    }

    #[test]
    fn stretch_identity(g in graph_strategy(9, 20, 3)) {
        let t = gomory_hu(&g).unwrap();
        let s = stretch_check(&g, &t);
        prop_assert!(s.ok);
        prop_assert!(t.total_weight() <= 2 * g.total_capacity());
    }
}
