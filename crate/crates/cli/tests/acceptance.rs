//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Run with `cargo test -p ghkit-cli --test acceptance`. Exits non-zero if
//! any criterion fails. Oracles are independent of the code under test
//! except where a criterion names the library routine as the reference
//! (per-pair `max_flow`, itself checked against brute force in the core
//! crate's tests).

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use ghkit::certifier::{
    aux_size_audit, centroid_decompose, check_tree_packing, explain_tree_packing, stretch_check, DirectedTree,
};
use ghkit::gadgets::{
    build_3ov_final, build_3ov_intermediate, build_bmm_gadget, node_capacitated_flow, BmmInstance, OvInstance,
};
use ghkit::{
    gomory_hu, gusfield, hybrid_cut_tree, hybrid_cut_tree_with_stats, max_flow, prove, verify, CutTree, Graph,
};
use ghkit_cli::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn unit(n: usize, edges: &[(usize, usize)]) -> Graph<i64> {
    Graph::unit(n, edges).unwrap()
}

fn catalog() -> Vec<Graph<i64>> {
    vec![
        unit(3, &[(0, 1), (1, 2)]),
        unit(3, &[(0, 1), (1, 2), (0, 2)]),
        unit(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]),
        unit(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]),
        unit(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]),
        unit(5, &[(0, 1), (1, 2), (0, 2), (3, 4)]),
        unit(6, &[(0, 1), (2, 3), (3, 4), (4, 2)]),
    ]
}

/// Catalog plus 200 seeded random unit graphs with n <= 60, m <= 300.
fn corpus() -> Vec<Graph<i64>> {
    let mut out = catalog();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for i in 0..200 {
        let n = rng.gen_range(2..=60);
        let max_m = (n * (n - 1) / 2).min(300);
        let m = rng.gen_range(0..=max_m);
        let p = GenParams { n, m, ..GenParams::default() };
        out.push(generate(GenKind::RandomGnm, &p, 10_000 + i).unwrap());
    }
    out
}

fn flow_matrix(g: &Graph<i64>) -> Vec<Vec<i64>> {
    let n = g.n();
    let mut m = vec![vec![0; n]; n];
    for s in 0..n {
        for t in s + 1..n {
            let v = max_flow(g, s, t, None).unwrap().value;
            m[s][t] = v;
            m[t][s] = v;
        }
    }
    m
}

fn ceil_sqrt(x: i64) -> i64 {
    let mut r = (x as f64).sqrt() as i64;
    while r * r < x {
        r += 1;
    }
    while r > 0 && (r - 1) * (r - 1) >= x {
        r -= 1;
    }
    r.max(1)
}

fn thresholds(g: &Graph<i64>) -> [i64; 3] {
    [1, ceil_sqrt(g.m() as i64), g.n() as i64]
}

fn criterion_1(corpus: &[Graph<i64>]) -> Outcome {
    let start = Instant::now();
    let mut bad = 0;
    for g in corpus {
        if hybrid_cut_tree(g, None).unwrap().all_pairs_matrix() != flow_matrix(g) {
            bad += 1;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(bad == 0 && secs < 60.0, format!("{} graphs, {bad} mismatches, {secs:.1}s (limit 60s)", corpus.len()))
}

fn criterion_2(corpus: &[Graph<i64>]) -> Outcome {
    let mut bad = 0;
    for g in corpus {
        let reference = gomory_hu(g).unwrap().all_pairs_matrix();
        let mut same = gusfield(g).unwrap().all_pairs_matrix() == reference;
        for d in thresholds(g) {
            same &= hybrid_cut_tree(g, Some(d)).unwrap().all_pairs_matrix() == reference;
        }
        bad += usize::from(!same);
    }
    outcome(bad == 0, format!("gh/gusfield/hybrid(d=1,sqrt m,n) on {} graphs, {bad} disagreements", corpus.len()))
}

fn criterion_3(corpus: &[Graph<i64>]) -> Outcome {
    let (mut runs, mut bad, mut worst) = (0, 0, 0.0f64);
    for g in corpus {
        let m = g.m() as i64;
        for d in thresholds(g).into_iter().chain([ghkit::default_threshold(g)]) {
            let (_, s) = hybrid_cut_tree_with_stats(g, Some(d)).unwrap();
            let high = g.degrees().into_iter().filter(|&x| x > d).count();
            runs += 1;
            if s.stage2_calls > high || s.stage2_flow_sum() > 2 * m {
                bad += 1;
            }
            if m > 0 {
                worst = worst.max(s.stage2_flow_sum() as f64 / (2 * m) as f64);
            }
        }
    }
    outcome(bad == 0, format!("{runs} hybrid runs, {bad} violations, max stage-2 sum / 2m = {worst:.3}"))
}

fn criterion_4(corpus: &[Graph<i64>]) -> Outcome {
    let (mut trees, mut bad) = (0, 0);
    for g in corpus {
        let mut built = vec![gomory_hu(g).unwrap(), gusfield(g).unwrap()];
        built.extend(thresholds(g).map(|d| hybrid_cut_tree(g, Some(d)).unwrap()));
        for t in built {
            trees += 1;
            let s = stretch_check(g, &t);
            if !(s.ok && s.lhs == s.rhs_equality && s.lhs <= s.rhs_bound) {
                bad += 1;
            }
        }
    }
    outcome(bad == 0, format!("{trees} trees, {bad} violations"))
}

/// Valid iff each tree edge's induced cut has capacity equal to its weight
/// and to the max-flow between its endpoints.
fn tree_is_valid(g: &Graph<i64>, t: &CutTree<i64>) -> bool {
    t.edges().into_iter().all(|(v, p, w)| {
        let mut side = vec![false; g.n()];
        for x in t.component_without(v, v, p) {
            side[x] = true;
        }
        g.cut_capacity(&side) == w && max_flow(g, v, p, None).unwrap().value == w
    })
}

fn certifier_instances() -> Vec<Graph<i64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    (0..100)
        .map(|i| {
            let n = rng.gen_range(2..=40);
            let max_m = (n * (n - 1) / 2).min(3 * n);
            let m = rng.gen_range(n - 1..=max_m.max(n - 1));
            let p = GenParams { n, m, ..GenParams::default() };
            generate(GenKind::RandomGnm, &p, 20_000 + i).unwrap()
        })
        .collect()
}

fn criterion_5(instances: &[Graph<i64>]) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut accepted = 0;
    let (mut weight_muts, mut weight_caught) = (0, 0);
    let (mut struct_invalid, mut struct_caught, mut struct_valid) = (0, 0, 0);
    for g in instances {
        let t = hybrid_cut_tree(g, None).unwrap();
        let w = prove(g, &t).unwrap();
        accepted += usize::from(verify(g, &t, &w).is_accept());
        let edges = t.edges();
        if edges.is_empty() {
            continue;
        }
        for _ in 0..4 {
            let (v, _, wt) = edges[rng.gen_range(0..edges.len())];
            for delta in [-1, 1] {
                if wt + delta < 0 {
                    continue;
                }
                let bad = t.with_weight(v, wt + delta);
                weight_muts += 1;
                let self_cert = verify(g, &bad, &prove(g, &bad).unwrap()).is_accept();
                let replay = verify(g, &bad, &w).is_accept();
                weight_caught += usize::from(!self_cert && !replay);
            }
        }
        for round in 0..4 {
            let k = rng.gen_range(0..edges.len());
            let mut moved = edges.clone();
            if round == 3 {
                // swap two leaves, keeping each edge weight in place
                let mut deg = vec![0; g.n()];
                for &(a, b, _) in &edges {
                    deg[a] += 1;
                    deg[b] += 1;
                }
                let leaves: Vec<usize> = (0..g.n()).filter(|&v| deg[v] == 1).collect();
                if leaves.len() < 2 {
                    continue;
                }
                let a = leaves[rng.gen_range(0..leaves.len())];
                let b = leaves[(leaves.iter().position(|&x| x == a).unwrap() + 1) % leaves.len()];
                for e in moved.iter_mut() {
                    for end in [&mut e.0, &mut e.1] {
                        if *end == a {
                            *end = b;
                        } else if *end == b {
                            *end = a;
                        }
                    }
                }
            } else if rng.gen_bool(0.5) && edges.len() >= 2 {
                // swap two weights
                let j = (k + 1 + rng.gen_range(0..edges.len() - 1)) % edges.len();
                let (wk, wj) = (moved[k].2, moved[j].2);
                moved[k].2 = wj;
                moved[j].2 = wk;
            } else {
                // re-hang a subtree elsewhere
                let (v, p, wt) = edges[k];
                let below = t.component_without(v, v, p);
                let targets: Vec<usize> = (0..g.n()).filter(|x| *x != p && !below.contains(x)).collect();
                if targets.is_empty() {
                    continue;
                }
                moved[k] = (v, targets[rng.gen_range(0..targets.len())], wt);
            }
            let bad = CutTree::from_edges(g.n(), &moved).unwrap();
            if tree_is_valid(g, &bad) {
                struct_valid += 1;
                continue;
            }
            struct_invalid += 1;
            struct_caught += usize::from(!verify(g, &bad, &prove(g, &bad).unwrap()).is_accept());
        }
    }
    let pass = accepted == instances.len()
        && weight_muts >= 500
        && weight_caught == weight_muts
        && struct_caught == struct_invalid
        && struct_invalid > 0;
    outcome(
        pass,
        format!(
            "round trip {accepted}/{}; weight mutations rejected {weight_caught}/{weight_muts}; \
             invalid structural mutations rejected {struct_caught}/{struct_invalid} ({struct_valid} mutations still valid, skipped)",
            instances.len()
        ),
    )
}

fn criterion_6(corpus: &[Graph<i64>], instances: &[Graph<i64>]) -> Outcome {
    let (mut runs, mut bad, mut worst) = (0, 0, 0.0f64);
    for g in corpus.iter().chain(instances) {
        let t = hybrid_cut_tree(g, None).unwrap();
        let a = aux_size_audit(g, &t, &centroid_decompose(&t)).unwrap();
        runs += 1;
        let m = g.m();
        let log = if g.n() <= 1 { 0 } else { (usize::BITS - (g.n() - 1).leading_zeros()) as usize };
        let ok = a.per_depth.iter().all(|&x| x <= 4 * m) && a.total <= 4 * m * (log + 1);
        bad += usize::from(!ok);
        if m > 0 {
            worst = worst.max(a.per_depth.iter().copied().max().unwrap_or(0) as f64 / (4 * m) as f64);
        }
    }
    outcome(bad == 0, format!("{runs} certifier runs, {bad} violations, max per-depth / 4m = {worst:.3}"))
}

type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

type Fixture = (Graph<i64>, usize, Vec<i64>, Vec<DirectedTree>);

/// Hand-built packings. Unit edge `i` of an `n`-node graph is subdivided by
/// node `n + i`.
fn packing_fixtures() -> Vec<Fixture> {
    let mut out = Vec::new();
    for n in 3..=8 {
        let edges: Vec<_> = (0..n).map(|v| (v, (v + 1) % n)).collect();
        let g = unit(n, &edges);
        let cw: DirectedTree = (0..n - 1).flat_map(|v| [(v, n + v), (n + v, v + 1)]).collect();
        let mut ccw: DirectedTree = vec![(0, 2 * n - 1), (2 * n - 1, n - 1)];
        for v in (1..n - 1).rev() {
            ccw.extend([(v + 1, n + v), (n + v, v)]);
        }
        let mut lambda = vec![2; n];
        lambda[0] = 0;
        out.push((g, 0, lambda, vec![cw, ccw]));
    }
    for k in 1..=4 {
        let g = unit(2, &vec![(0, 1); k]);
        let trees = (0..k).map(|i| vec![(0, 2 + i), (2 + i, 1)]).collect();
        out.push((g, 0, vec![0, k as i64], trees));
    }
    let k4 = unit(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
    let s = |i: usize| 4 + i;
    let trees = vec![
        vec![(0, s(0)), (s(0), 1), (1, s(3)), (s(3), 2), (2, s(5)), (s(5), 3)],
        vec![(0, s(1)), (s(1), 2), (2, s(3)), (s(3), 1), (1, s(4)), (s(4), 3)],
        vec![(0, s(2)), (s(2), 3), (3, s(5)), (s(5), 2), (3, s(4)), (s(4), 1)],
    ];
    out.push((k4, 0, vec![0, 3, 3, 3], trees));
    let p4 = unit(4, &[(0, 1), (1, 2), (2, 3)]);
    out.push((p4, 1, vec![1, 0, 1, 1], vec![vec![(1, 4), (4, 0), (1, 5), (5, 2), (2, 6), (6, 3)]]));
    out
}

fn criterion_7() -> Outcome {
    let fixtures = packing_fixtures();
    let mut pos_ok = 0;
    let mut negatives = Vec::new();
    for (g, root, lambda, trees) in &fixtures {
        pos_ok += usize::from(check_tree_packing(g, *root, lambda, trees));
        // shared arcs: the first tree twice
        let mut dup = trees.clone();
        dup.push(trees[0].clone());
        negatives.push((g, *root, lambda.clone(), dup));
        // count deficit: ask one more tree than given at a node
        let mut more = lambda.clone();
        let v = (0..g.n()).find(|&v| v != *root && more[v] > 0).unwrap();
        more[v] += 1;
        negatives.push((g, *root, more, trees.clone()));
        // a missing arc: drop the last arc of the first tree
        let mut cut = trees.clone();
        let dropped = cut[0].pop().unwrap();
        if dropped.1 < g.n() && lambda[dropped.1] as usize == trees.len() {
            negatives.push((g, *root, lambda.clone(), cut));
        }
        // an arc that is not in the Eulerian graph
        let mut fake = trees.clone();
        fake[0].push((*root, (*root + 1) % g.n()));
        negatives.push((g, *root, lambda.clone(), fake));
    }
    let neg_ok = negatives.iter().filter(|(g, r, l, t)| explain_tree_packing(g, *r, l, t).is_err()).count();
    let pass = pos_ok == fixtures.len() && fixtures.len() >= 10 && neg_ok == negatives.len() && negatives.len() >= 20;
    outcome(
        pass,
        format!("valid accepted {pos_ok}/{}, invalid rejected {neg_ok}/{}", fixtures.len(), negatives.len()),
    )
}

fn brute_3ov(ov: &OvInstance) -> bool {
    let (u1, u2, u3) = (&ov.u1, &ov.u2, &ov.u3);
    u1.iter().any(|a| u2.iter().any(|b| u3.iter().any(|c| (0..ov.d).all(|i| !(a[i] && b[i] && c[i])))))
}

fn criterion_8() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut instances = Vec::new();
    for i in 0..50 {
        let n = [2, 3][i % 2];
        let d = 3 + (i / 2) % 4;
        let density = [0.5, 0.7, 0.85, 0.95][(i / 8) % 4];
        instances.push(OvInstance::random(n, d, density, rng.gen()).unwrap());
    }
    let figure = OvInstance::from_strs(&["110", "111"], &["101", "001"], &["111", "101"]).unwrap();
    instances.push(figure.clone());
    let (mut bad, mut yes, mut min_gap) = (0, 0, i64::MAX);
    for ov in &instances {
        let g = build_3ov_final::<i64>(ov).unwrap();
        let threshold = 2 * (ov.n * ov.n * ov.d) as i64;
        let mut min_flow = i64::MAX;
        for &a in &g.alphas {
            for &c in &g.gammas {
                min_flow = min_flow.min(node_capacitated_flow(&g.graph, a, c).unwrap());
            }
        }
        let has_triple = brute_3ov(ov);
        yes += usize::from(has_triple);
        if (min_flow >= threshold) == has_triple {
            bad += 1;
        }
        if has_triple {
            min_gap = min_gap.min(threshold - min_flow);
        }
    }
    let mid = build_3ov_intermediate::<i64>(&figure).unwrap();
    let fig = node_capacitated_flow(&mid.graph, mid.alphas[0], mid.gammas[1]).unwrap();
    let secs = start.elapsed().as_secs_f64();
    outcome(
        bad == 0 && fig == 5 && secs < 120.0,
        format!(
            "{} instances ({yes} with a triple), {bad} dichotomy failures, smallest yes-gap {min_gap}; \
             figure flow in G' = {fig} (want 5); {secs:.1}s (limit 120s)",
            instances.len()
        ),
    )
}

fn criterion_9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let (mut entries, mut mismatches, mut straddle) = (0, 0, 0);
    for i in 0..20 {
        let n = if i < 4 { 8 } else { rng.gen_range(1..=8) };
        let density = [0.15, 0.3, 0.5][i % 3];
        let inst = BmmInstance::random(n, density, rng.gen()).unwrap();
        let g = build_bmm_gadget::<i64>(&inst).unwrap();
        let two_n = 2 * n as i64;
        for a in 0..n {
            for c in 0..n {
                let product = (0..n).any(|b| inst.p[a][b] && inst.q[b][c]);
                let f = node_capacitated_flow(&g.graph, g.a[a], g.c[c]).unwrap();
                entries += 1;
                mismatches += usize::from((f >= two_n) != product);
                straddle += usize::from(f == two_n - 1);
            }
        }
    }
    outcome(
        mismatches == 0 && straddle == 0,
        format!("20 matrix pairs, {entries} entries, {mismatches} mismatches, {straddle} flows equal to 2n-1"),
    )
}

fn criterion_10() -> Outcome {
    let mut diffs = Vec::new();
    let kinds = [
        (GenKind::RandomGnm, GenParams { n: 50, m: 120, ..GenParams::default() }),
        (GenKind::RandomRegular, GenParams { n: 30, degree: 4, ..GenParams::default() }),
        (GenKind::Path, GenParams { n: 5, ..GenParams::default() }),
        (GenKind::Star, GenParams { n: 5, ..GenParams::default() }),
        (GenKind::Clique, GenParams { n: 5, ..GenParams::default() }),
        (GenKind::OvGadget, GenParams { n: 3, dim: 4, ..GenParams::default() }),
        (GenKind::BmmGadget, GenParams { n: 4, density: 0.4, ..GenParams::default() }),
    ];
    for (kind, p) in &kinds {
        if cmd_gen(*kind, p, 7).unwrap() != cmd_gen(*kind, p, 7).unwrap() {
            diffs.push(format!("gen {kind:?}"));
        }
    }
    let g = cmd_gen(GenKind::RandomGnm, &kinds[0].1, 7).unwrap();
    for (algo, param) in [(Algo::Gh, None), (Algo::Gusfield, None), (Algo::Hybrid, Some(3)), (Algo::Partial, Some(2))] {
        let (a, b) = (cmd_tree(&g, algo, param).unwrap(), cmd_tree(&g, algo, param).unwrap());
        let stats = |o: &TreeOutput| o.stats.render(Format::Json, None);
        if a.text != b.text || stats(&a) != stats(&b) {
            diffs.push(format!("tree {algo:?}"));
        }
    }
    let t = cmd_tree(&g, Algo::Gh, None).unwrap().text;
    let (v1, v2) = (cmd_verify(&g, &t, None, Format::Json), cmd_verify(&g, &t, None, Format::Json));
    if v1.code != v2.code || v1.message != v2.message || v1.witness != v2.witness {
        diffs.push("verify".into());
    }
    for q in [Query::Pair(0, 7), Query::AllPairs] {
        if cmd_query(&t, q, Format::Json).unwrap() != cmd_query(&t, q, Format::Json).unwrap() {
            diffs.push(format!("query {q:?}"));
        }
    }
    let spec = BenchSpec {
        kind: GenKind::RandomGnm,
        params: GenParams { n: 40, m: 100, ..GenParams::default() },
        count: 3,
        algos: vec![Algo::Gh, Algo::Gusfield, Algo::Hybrid],
        repeats: 2,
        d: None,
        seed: 7,
        workers: 1,
    };
    let a = cmd_bench(&spec).unwrap().to_ndjson(false);
    let b = cmd_bench(&BenchSpec { workers: 4, ..spec.clone() }).unwrap().to_ndjson(false);
    if a != b {
        diffs.push("bench".into());
    }
    outcome(diffs.is_empty(), if diffs.is_empty() { "gen/tree/verify/query/bench byte-identical".into() } else { format!("differs: {}", diffs.join(", ")) })
}

fn main() {
    let total = Instant::now();
    let corpus = corpus();
    let instances = certifier_instances();
    let criteria: Vec<Criterion> = vec![
        ("oracle equivalence", Box::new(|| criterion_1(&corpus))),
        ("algorithm agreement", Box::new(|| criterion_2(&corpus))),
        ("stage-2 call and flow-sum bounds", Box::new(|| criterion_3(&corpus))),
        ("stretch identity", Box::new(|| criterion_4(&corpus))),
        ("certifier round trip and rejections", Box::new(|| criterion_5(&instances))),
        ("auxiliary-size audit", Box::new(|| criterion_6(&corpus, &instances))),
        ("tree-packing checker", Box::new(criterion_7)),
        ("3OV gadget dichotomy", Box::new(criterion_8)),
        ("BMM gadget threshold", Box::new(criterion_9)),
        ("determinism", Box::new(criterion_10)),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            outcome(false, format!("panicked: {msg}"))
        });
        failed += usize::from(!result.pass);
        println!(
            "criterion {:>2} {:<38} {}  {} [{}]",
            i + 1,
            name,
            if result.pass { "PASS" } else { "FAIL" },
            result.detail,
            fmt_secs(start.elapsed())
        );
    }
    println!("acceptance: {}/{} passed in {}", criteria.len() - failed, criteria.len(), fmt_secs(total.elapsed()));
    if failed > 0 {
        std::process::exit(1);
    }
}

fn fmt_secs(d: Duration) -> String {
    format!("{:.1}s", d.as_secs_f64())
}
