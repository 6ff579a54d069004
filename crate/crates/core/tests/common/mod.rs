//! Brute-force oracles and seeded instance generators shared by the
//! integration tests. Nothing here calls the flow or tree code under test.
#![allow(dead_code)]

use ghkit::Graph;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Minimum `s`-`t` cut by enumerating every bipartition (edge capacities).
pub fn brute_min_cut(g: &Graph<i64>, s: usize, t: usize) -> i64 {
    let n = g.n();
    assert!(n <= 20, "brute force limited to 20 nodes");
    let mut best = i64::MAX;
    for mask in 0u32..(1 << n) {
        if mask >> s & 1 == 0 || mask >> t & 1 == 1 {
            continue;
        }
        let mut cut = 0;
        for e in g.edges() {
            let (a, b) = (mask >> e.u & 1 == 1, mask >> e.v & 1 == 1);
            if (a && !b) || (!e.directed && b && !a) {
                cut += e.cap;
            }
        }
        best = best.min(cut);
    }
    best
}

pub fn brute_matrix(g: &Graph<i64>) -> Vec<Vec<i64>> {
    let n = g.n();
    let mut m = vec![vec![0; n]; n];
    for s in 0..n {
        for t in s + 1..n {
            let v = brute_min_cut(g, s, t);
            m[s][t] = v;
            m[t][s] = v;
        }
    }
    m
}

/// Node-capacitated min cut with unbounded edges and unconstrained
/// terminals: cheapest node set whose removal separates `s` from `t`.
/// Uncapacitated nodes and direct `s -> t` edges cost `inf` each.
pub fn brute_node_cut(g: &Graph<i64>, s: usize, t: usize) -> i64 {
    let n = g.n();
    assert!(n <= 20, "brute force limited to 20 nodes");
    let caps = g.node_caps().expect("node capacities");
    let inf: i64 = caps.values().sum::<i64>() + 1;
    let direct =
        g.edges().iter().filter(|e| (e.u == s && e.v == t) || (!e.directed && e.u == t && e.v == s)).count() as i64;
    let inner: Vec<usize> = (0..n).filter(|&v| v != s && v != t).collect();
    let mut best = i64::MAX;
    for mask in 0u32..(1 << inner.len()) {
        let mut removed = vec![false; n];
        let mut cost = direct * inf;
        for (i, &v) in inner.iter().enumerate() {
            if mask >> i & 1 == 1 {
                removed[v] = true;
                cost += caps.get(&v).copied().unwrap_or(inf);
            }
        }
        if cost >= best {
            continue;
        }
        // reachability from s avoiding removed nodes and direct s-t edges
        let mut seen = vec![false; n];
        seen[s] = true;
        let mut stack = vec![s];
        while let Some(x) = stack.pop() {
            for e in g.edges() {
                let y = if e.u == x {
                    e.v
                } else if !e.directed && e.v == x {
                    e.u
                } else {
                    continue;
                };
                if (x == s && y == t) || removed[y] || seen[y] {
                    continue;
                }
                seen[y] = true;
                stack.push(y);
            }
        }
        if !seen[t] {
            best = cost;
        }
    }
    best
}

/// Connectivity via tree paths: minimum edge weight on the `s`-`u` path.
pub fn path_min(edges: &[(usize, usize, i64)], n: usize, s: usize, u: usize) -> i64 {
    let mut adj = vec![Vec::new(); n];
    for &(a, b, w) in edges {
        adj[a].push((b, w));
        adj[b].push((a, w));
    }
    fn walk(adj: &[Vec<(usize, i64)>], x: usize, from: usize, goal: usize, low: i64) -> Option<i64> {
        if x == goal {
            return Some(low);
        }
        adj[x].iter().filter(|&&(y, _)| y != from).find_map(|&(y, w)| walk(adj, y, x, goal, low.min(w)))
    }
    walk(&adj, s, usize::MAX, u, i64::MAX).expect("tree is connected")
}

/// Random undirected multigraph; `unit` forces capacity 1.
pub fn random_graph(r: &mut ChaCha8Rng, n: usize, m: usize, max_cap: i64) -> Graph<i64> {
    let mut g = Graph::new(n);
    if n < 2 {
        return g;
    }
    for _ in 0..m {
        let u = r.gen_range(0..n);
        let mut v = r.gen_range(0..n - 1);
        if v >= u {
            v += 1;
        }
        g.add_edge(u, v, r.gen_range(1..=max_cap)).unwrap();
    }
    g
}

/// Random graph mixing undirected edges and arcs.
pub fn random_mixed(r: &mut ChaCha8Rng, n: usize, m: usize, max_cap: i64) -> Graph<i64> {
    let mut g = Graph::new(n);
    for _ in 0..m {
        let u = r.gen_range(0..n);
        let mut v = r.gen_range(0..n - 1);
        if v >= u {
            v += 1;
        }
        let c = r.gen_range(1..=max_cap);
        if r.gen_bool(0.4) {
            g.add_arc(u, v, c).unwrap();
        } else {
            g.add_edge(u, v, c).unwrap();
        }
    }
    g
}

pub fn path(n: usize) -> Graph<i64> {
    Graph::unit(n, &(1..n).map(|v| (v - 1, v)).collect::<Vec<_>>()).unwrap()
}

pub fn cycle(n: usize) -> Graph<i64> {
    Graph::unit(n, &(0..n).map(|v| (v, (v + 1) % n)).collect::<Vec<_>>()).unwrap()
}

pub fn clique(n: usize) -> Graph<i64> {
    let edges: Vec<_> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    Graph::unit(n, &edges).unwrap()
}

pub fn star(leaves: usize) -> Graph<i64> {
    Graph::unit(leaves + 1, &(1..=leaves).map(|v| (0, v)).collect::<Vec<_>>()).unwrap()
}

/// The fixed small-graph catalog: P3, K3, C4, K4, K_{1,4} and two
/// graphs with several components.
pub fn catalog() -> Vec<(&'static str, Graph<i64>)> {
    vec![
        ("P3", path(3)),
        ("K3", clique(3)),
        ("C4", cycle(4)),
        ("K4", clique(4)),
        ("K1,4", star(4)),
        ("K3+P2", Graph::unit(5, &[(0, 1), (1, 2), (0, 2), (3, 4)]).unwrap()),
        ("P2+iso+P2", Graph::unit(5, &[(0, 1), (3, 4)]).unwrap()),
    ]
}
