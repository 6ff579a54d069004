//! Subcommand implementations behind the `ghkit` binary.
//!
//! Each `cmd_*` takes already-read inputs and returns the text it would
//! print, so the binary only does file I/O and exit codes.

use std::time::Instant;

use ghkit::certifier::{aux_size_audit, centroid_decompose, stretch_check};
use ghkit::gadgets::{build_3ov_final, build_3ov_intermediate, build_bmm_gadget, BmmInstance, OvInstance};
use ghkit::io::{parse_graph, parse_tree, write_graph, write_tree};
use ghkit::{
    gomory_hu_with_stats, gusfield_with_stats, hybrid_cut_tree_with_stats, partial_tree_with_stats, prove, verify,
    BuildStats, CutTree, Graph, SuperNodeTree, Verdict, Witness,
};
use rand::seq::index::sample;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

pub const BENCH_SCHEMA: u32 = 1;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Input(#[from] ghkit::Error),
    #[error("invariant violated: {0}")]
    Invariant(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Invariant(_) => 1,
            CliError::Usage(_) | CliError::Input(_) => 2,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GenKind {
    RandomGnm,
    RandomRegular,
    Path,
    Star,
    Clique,
    OvGadget,
    BmmGadget,
}

#[derive(Debug, Clone)]
pub struct GenParams {
    pub n: usize,
    pub m: usize,
    /// Degree for `random-regular`.
    pub degree: usize,
    /// Vector dimension for `ov-gadget`.
    pub dim: usize,
    /// Bit density for random gadget instances.
    pub density: f64,
    /// Emit the intermediate (partly directed) 3OV gadget.
    pub intermediate: bool,
    /// Gadget instance text (`ov ...` / `bmm ...`) instead of a random one.
    pub instance: Option<String>,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams { n: 10, m: 20, degree: 3, dim: 4, density: 0.5, intermediate: false, instance: None }
    }
}

fn simple_gnm(n: usize, m: usize, rng: &mut ChaCha8Rng) -> CliResult<Graph<i64>> {
    let pairs = n * n.saturating_sub(1) / 2;
    if m > pairs {
        return Err(CliError::Usage(format!("{m} edges do not fit a simple graph on {n} nodes")));
    }
    let mut chosen = sample(rng, pairs, m).into_vec();
    chosen.sort_unstable();
    let mut edges = Vec::with_capacity(m);
    let (mut u, mut row_start) = (0, 0);
    for k in chosen {
        while k >= row_start + (n - 1 - u) {
            row_start += n - 1 - u;
            u += 1;
        }
        edges.push((u, u + 1 + (k - row_start)));
    }
    Ok(Graph::unit(n, &edges)?)
}

fn random_regular(n: usize, k: usize, rng: &mut ChaCha8Rng) -> CliResult<Graph<i64>> {
    if k >= n || (n * k) % 2 == 1 {
        return Err(CliError::Usage(format!("no simple {k}-regular graph on {n} nodes")));
    }
    // pairing model, restarted until the pairing is simple
    for _ in 0..10_000 {
        let mut stubs: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat_n(v, k)).collect();
        stubs.shuffle(rng);
        let mut seen = std::collections::HashSet::new();
        let mut edges = Vec::with_capacity(n * k / 2);
        let simple = stubs.chunks(2).all(|p| {
            let (u, v) = (p[0].min(p[1]), p[0].max(p[1]));
            edges.push((u, v));
            u != v && seen.insert((u, v))
        });
        if simple {
            edges.sort_unstable();
            return Ok(Graph::unit(n, &edges)?);
        }
    }
    Err(CliError::Usage(format!("gave up sampling a simple {k}-regular graph on {n} nodes")))
}

pub fn generate(kind: GenKind, p: &GenParams, seed: u64) -> CliResult<Graph<i64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = p.n;
    let g = match kind {
        GenKind::RandomGnm => simple_gnm(n, p.m, &mut rng)?,
        GenKind::RandomRegular => random_regular(n, p.degree, &mut rng)?,
        GenKind::Path => Graph::unit(n, &(1..n).map(|v| (v - 1, v)).collect::<Vec<_>>())?,
        GenKind::Star => Graph::unit(n, &(1..n).map(|v| (0, v)).collect::<Vec<_>>())?,
        GenKind::Clique => {
            let edges: Vec<_> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
            Graph::unit(n, &edges)?
        }
        GenKind::OvGadget => {
            let ov = match &p.instance {
                Some(text) => OvInstance::parse(text)?,
                None => OvInstance::random(n, p.dim, p.density, rng.gen())?,
            };
            if p.intermediate {
                build_3ov_intermediate(&ov)?.graph
            } else {
                build_3ov_final(&ov)?.graph
            }
        }
        GenKind::BmmGadget => {
            let inst = match &p.instance {
                Some(text) => BmmInstance::parse(text)?,
                None => BmmInstance::random(n, p.density, rng.gen())?,
            };
            build_bmm_gadget(&inst)?.graph
        }
    };
    Ok(g)
}

/// Graph file for `kind`; identical for identical `(kind, params, seed)`.
pub fn cmd_gen(kind: GenKind, p: &GenParams, seed: u64) -> CliResult<String> {
    Ok(write_graph(&generate(kind, p, seed)?))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algo {
    Gh,
    Gusfield,
    Hybrid,
    Partial,
}

#[derive(Debug, Clone, Serialize)]
pub struct TreeStats {
    pub algorithm: Algo,
    pub n: usize,
    pub m: usize,
    pub flow_calls: usize,
    pub capped_calls: usize,
    pub flow_sum: i64,
    pub stage2_calls: usize,
    pub stage2_flow_sum: i64,
    pub high_degree_nodes: usize,
    pub threshold: Option<i64>,
    pub blocks: Option<usize>,
}

impl TreeStats {
    fn new(algorithm: Algo, g: &Graph<i64>, s: &BuildStats<i64>) -> Self {
        TreeStats {
            algorithm,
            n: g.n(),
            m: g.m(),
            flow_calls: s.flow_calls,
            capped_calls: s.capped_calls,
            flow_sum: s.flow_sum,
            stage2_calls: s.stage2_calls,
            stage2_flow_sum: s.stage2_flow_sum(),
            high_degree_nodes: s.high_degree_nodes,
            threshold: s.threshold,
            blocks: None,
        }
    }

    pub fn render(&self, format: Format, millis: Option<u128>) -> String {
        match format {
            Format::Json => {
                let mut v = serde_json::to_value(self).expect("stats serialize");
                if let Some(ms) = millis {
                    v["time_ms"] = (ms as u64).into();
                }
                v.to_string()
            }
            Format::Text => {
                let mut line = format!(
                    "algorithm={} n={} m={} flow_calls={} capped_calls={} flow_sum={}",
                    serde_json::to_value(self.algorithm).unwrap().as_str().unwrap(),
                    self.n,
                    self.m,
                    self.flow_calls,
                    self.capped_calls,
                    self.flow_sum
                );
                if let (Algo::Partial, Some(k)) = (self.algorithm, self.threshold) {
                    line += &format!(" k={k}");
                } else if let Some(d) = self.threshold {
                    line += &format!(
                        " d={d} stage2_calls={} stage2_flow_sum={} high_degree_nodes={}",
                        self.stage2_calls, self.stage2_flow_sum, self.high_degree_nodes
                    );
                }
                if let Some(b) = self.blocks {
                    line += &format!(" blocks={b}");
                }
                if let Some(ms) = millis {
                    line += &format!(" time_ms={ms}");
                }
                line
            }
        }
    }
}

pub struct TreeOutput {
    /// Tree file, or block file for `partial`.
    pub text: String,
    pub stats: TreeStats,
    pub millis: u128,
}

/// `pt <n> <blocks>`, then `b <id> <members...>` and `e <a> <b> <w>` lines
/// over block ids.
pub fn write_blocks(t: &SuperNodeTree<i64>) -> String {
    let mut out = format!("pt {} {}\n", t.partition().n(), t.blocks().len());
    for (i, b) in t.blocks().iter().enumerate() {
        let mut members = b.clone();
        members.sort_unstable();
        let list: Vec<String> = members.iter().map(|v| v.to_string()).collect();
        out += &format!("b {i} {}\n", list.join(" "));
    }
    for &(a, b, w) in t.edges() {
        out += &format!("e {a} {b} {w}\n");
    }
    out
}

pub fn cmd_tree(graph_text: &str, algo: Algo, param: Option<i64>) -> CliResult<TreeOutput> {
    let g: Graph<i64> = parse_graph(graph_text)?;
    let start = Instant::now();
    let (text, stats) = match algo {
        Algo::Gh => {
            let (t, s) = gomory_hu_with_stats(&g)?;
            (write_tree(&t), TreeStats::new(algo, &g, &s))
        }
        Algo::Gusfield => {
            let (t, s) = gusfield_with_stats(&g)?;
            (write_tree(&t), TreeStats::new(algo, &g, &s))
        }
        Algo::Hybrid => {
            let (t, s) = hybrid_cut_tree_with_stats(&g, param)?;
            (write_tree(&t), TreeStats::new(algo, &g, &s))
        }
        Algo::Partial => {
            let k = param.ok_or_else(|| CliError::Usage("partial needs --k".into()))?;
            let (t, s) = partial_tree_with_stats(&g, k)?;
            let mut stats = TreeStats::new(algo, &g, &s);
            stats.threshold = Some(k);
            stats.blocks = Some(t.blocks().len());
            (write_blocks(&t), stats)
        }
    };
    Ok(TreeOutput { text, stats, millis: start.elapsed().as_millis() })
}

pub struct VerifyOutcome {
    /// 0 accept, 1 reject, 2 malformed input.
    pub code: i32,
    pub message: String,
    /// The witness produced when none was supplied.
    pub witness: Option<String>,
}

pub fn cmd_verify(graph_text: &str, tree_text: &str, witness_text: Option<&str>, format: Format) -> VerifyOutcome {
    let malformed = |msg: String| VerifyOutcome { code: 2, message: msg, witness: None };
    let g: Graph<i64> = match parse_graph(graph_text) {
        Ok(g) => g,
        Err(e) => return malformed(format!("graph: {e}")),
    };
    let t: CutTree<i64> = match parse_tree(tree_text) {
        Ok(t) => t,
        Err(e) => return malformed(format!("tree: {e}")),
    };
    if t.n() != g.n() {
        return malformed(format!("tree has {} nodes, graph has {}", t.n(), g.n()));
    }
    let (w, produced) = match witness_text {
        Some(text) => match Witness::from_json(text) {
            Ok(w) => (w, None),
            Err(e) => return malformed(format!("witness: {e}")),
        },
        None => match prove(&g, &t) {
            Ok(w) => {
                let json = w.to_json();
                (w, Some(json))
            }
            Err(e) => return malformed(e.to_string()),
        },
    };
    let verdict = verify(&g, &t, &w);
    let (code, message) = match (&verdict, format) {
        (Verdict::Accept, Format::Text) => (0, "accept".to_string()),
        (Verdict::Accept, Format::Json) => (0, r#"{"verdict":"accept"}"#.to_string()),
        (Verdict::Reject(r), Format::Text) => (
            1,
            match r.expansion {
                Some(j) => format!("reject: expansion {j}: {:?}: {}", r.check, r.detail),
                None => format!("reject: {:?}: {}", r.check, r.detail),
            },
        ),
        (Verdict::Reject(r), Format::Json) => {
            (1, serde_json::json!({ "verdict": "reject", "rejection": r }).to_string())
        }
    };
    VerifyOutcome { code, message, witness: produced }
}

#[derive(Debug, Clone, Copy)]
pub enum Query {
    Pair(usize, usize),
    AllPairs,
}

pub fn cmd_query(tree_text: &str, q: Query, format: Format) -> CliResult<String> {
    let t: CutTree<i64> = parse_tree(tree_text)?;
    match q {
        Query::Pair(s, u) => {
            if s == u || s >= t.n() || u >= t.n() {
                return Err(CliError::Usage(format!("need two distinct nodes below {}, got {s} and {u}", t.n())));
            }
            let cut = t.query(s, u)?;
            Ok(match format {
                Format::Text => cut.value.to_string(),
                Format::Json => serde_json::json!({ "s": s, "t": u, "value": cut.value, "side": cut.side }).to_string(),
            })
        }
        Query::AllPairs => {
            let m = t.all_pairs_matrix();
            Ok(match format {
                Format::Text => m
                    .iter()
                    .map(|row| row.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" "))
                    .collect::<Vec<_>>()
                    .join("\n"),
                Format::Json => serde_json::to_string(&m).expect("matrix serializes"),
            })
        }
    }
}

#[derive(Debug, Clone)]
pub struct BenchSpec {
    pub kind: GenKind,
    pub params: GenParams,
    pub count: usize,
    pub algos: Vec<Algo>,
    pub repeats: usize,
    /// Hybrid threshold; default when `None`.
    pub d: Option<i64>,
    pub seed: u64,
    pub workers: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRecord {
    pub schema: u32,
    pub instance: usize,
    pub n: usize,
    pub m: usize,
    pub algorithm: Algo,
    pub repeat: usize,
    pub wall_ms: f64,
    pub flow_calls: usize,
    pub flow_sum: i64,
    pub stage2_calls: usize,
    pub stage2_flow_sum: i64,
    pub high_degree_nodes: usize,
    pub threshold: Option<i64>,
    pub tree_weight: i64,
    pub stretch_ok: bool,
    pub peak_aux_edges_per_depth: Vec<usize>,
    /// Stage-2 call count and flow-sum bounds (hybrid on unit graphs).
    pub invariants_ok: bool,
}

pub struct BenchReport {
    pub records: Vec<BenchRecord>,
}

impl BenchReport {
    /// One JSON object per line; `timing = false` drops `wall_ms`.
    pub fn to_ndjson(&self, timing: bool) -> String {
        let mut out = String::new();
        for r in &self.records {
            let mut v = serde_json::to_value(r).expect("record serializes");
            if !timing {
                v.as_object_mut().unwrap().remove("wall_ms");
            }
            out += &v.to_string();
            out.push('\n');
        }
        out
    }

    pub fn violations(&self) -> Vec<&BenchRecord> {
        self.records.iter().filter(|r| !r.invariants_ok || !r.stretch_ok).collect()
    }
}

fn bench_one(id: usize, g: &Graph<i64>, algo: Algo, repeat: usize, d: Option<i64>) -> CliResult<BenchRecord> {
    let start = Instant::now();
    let (t, s) = match algo {
        Algo::Gh => gomory_hu_with_stats(g)?,
        Algo::Gusfield => gusfield_with_stats(g)?,
        Algo::Hybrid => hybrid_cut_tree_with_stats(g, d)?,
        Algo::Partial => return Err(CliError::Usage("bench builds full trees; partial is not benchmarked".into())),
    };
    let wall_ms = start.elapsed().as_secs_f64() * 1e3;
    let audit = aux_size_audit(g, &t, &centroid_decompose(&t))?;
    let m = g.total_capacity();
    let invariants_ok = algo != Algo::Hybrid
        || !g.is_unit()
        || (s.stage2_calls <= s.high_degree_nodes && s.stage2_flow_sum() <= 2 * m);
    Ok(BenchRecord {
        schema: BENCH_SCHEMA,
        instance: id,
        n: g.n(),
        m: g.m(),
        algorithm: algo,
        repeat,
        wall_ms,
        flow_calls: s.flow_calls,
        flow_sum: s.flow_sum,
        stage2_calls: s.stage2_calls,
        stage2_flow_sum: s.stage2_flow_sum(),
        high_degree_nodes: s.high_degree_nodes,
        threshold: s.threshold,
        tree_weight: t.total_weight(),
        stretch_ok: stretch_check(g, &t).ok,
        peak_aux_edges_per_depth: audit.peak_per_depth,
        invariants_ok: invariants_ok && audit.ok,
    })
}

/// Runs every algorithm `repeats` times on `count` generated instances.
/// Instance `i` uses seed `seed + i`. Runs are spread over `workers`
/// threads; record order does not depend on scheduling.
pub fn cmd_bench(spec: &BenchSpec) -> CliResult<BenchReport> {
    let graphs: Vec<Graph<i64>> = (0..spec.count)
        .map(|i| generate(spec.kind, &spec.params, spec.seed.wrapping_add(i as u64)))
        .collect::<CliResult<_>>()?;
    let mut jobs = Vec::new();
    for i in 0..graphs.len() {
        for &a in &spec.algos {
            for r in 0..spec.repeats {
                jobs.push((i, a, r));
            }
        }
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(spec.workers.max(1))
        .build()
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let records = pool.install(|| {
        jobs.par_iter().map(|&(i, a, r)| bench_one(i, &graphs[i], a, r, spec.d)).collect::<CliResult<Vec<_>>>()
    })?;
    Ok(BenchReport { records })
}
