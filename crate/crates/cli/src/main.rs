use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use ghkit_cli::*;

#[derive(Parser)]
#[command(name = "ghkit", version, about = "Cut-equivalent trees, certificates and gadgets")]
struct Cli {
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[arg(long, global = true, default_value_t = 1)]
    workers: usize,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Write a generated graph file.
    Gen {
        #[arg(value_enum)]
        kind: GenKind,
        #[arg(long, default_value_t = 10)]
        n: usize,
        #[arg(long, default_value_t = 20)]
        m: usize,
        #[arg(long, default_value_t = 3)]
        degree: usize,
        /// Vector dimension of a random 3OV instance.
        #[arg(long, default_value_t = 4)]
        dim: usize,
        #[arg(long, default_value_t = 0.5)]
        density: f64,
        /// Emit the intermediate 3OV gadget (directed V1 edges, unscaled).
        #[arg(long)]
        intermediate: bool,
        /// Gadget instance file instead of a random instance.
        #[arg(long)]
        instance: Option<PathBuf>,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Build a cut tree (or a partial tree) and print a stats line.
    Tree {
        graph: PathBuf,
        #[arg(long, value_enum, default_value_t = Algo::Hybrid)]
        algo: Algo,
        /// Hybrid degree threshold.
        #[arg(long)]
        d: Option<i64>,
        /// Partial tree connectivity bound.
        #[arg(long)]
        k: Option<i64>,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Certify a tree: exit 0 accept, 1 reject, 2 malformed input.
    Verify {
        graph: PathBuf,
        tree: PathBuf,
        /// Check this witness instead of producing one.
        #[arg(long)]
        witness: Option<PathBuf>,
        /// Save the produced witness.
        #[arg(long)]
        emit_witness: Option<PathBuf>,
    },
    /// Min-cut values read off a tree file.
    Query {
        tree: PathBuf,
        s: Option<usize>,
        t: Option<usize>,
        #[arg(long)]
        all_pairs: bool,
    },
    /// Time the constructions on a generated corpus (NDJSON records).
    Bench {
        #[arg(long, value_enum, default_value_t = GenKind::RandomGnm)]
        kind: GenKind,
        #[arg(long, default_value_t = 100)]
        n: usize,
        #[arg(long, default_value_t = 300)]
        m: usize,
        #[arg(long, default_value_t = 3)]
        degree: usize,
        #[arg(long, default_value_t = 10)]
        count: usize,
        #[arg(long, value_enum, value_delimiter = ',', default_values_t = [Algo::Gh, Algo::Hybrid])]
        algos: Vec<Algo>,
        #[arg(long, default_value_t = 1)]
        repeats: usize,
        #[arg(long)]
        d: Option<i64>,
        /// Drop wall-clock fields for reproducible output.
        #[arg(long)]
        no_timing: bool,
    },
}

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn emit(out: &Option<PathBuf>, text: &str) -> CliResult<()> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| CliError::Usage(format!("{}: {e}", p.display()))),
        None => {
            stdout(text);
            Ok(())
        }
    }
}

/// Write to stdout; a closed pipe (e.g. `| head`) ends the process quietly.
fn stdout(text: &str) {
    if let Err(e) = io::stdout().lock().write_all(text.as_bytes()) {
        if e.kind() == io::ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
        eprintln!("error: {e}");
        std::process::exit(2);
    }
}

fn run(cli: Cli) -> CliResult<i32> {
    match cli.cmd {
        Cmd::Gen { kind, n, m, degree, dim, density, intermediate, instance, out } => {
            let instance = instance.as_deref().map(read).transpose()?;
            let params = GenParams { n, m, degree, dim, density, intermediate, instance };
            emit(&out, &cmd_gen(kind, &params, cli.seed)?)?;
        }
        Cmd::Tree { graph, algo, d, k, out } => {
            let param = if algo == Algo::Partial { k } else { d };
            let res = cmd_tree(&read(&graph)?, algo, param)?;
            let stats = res.stats.render(cli.format, Some(res.millis));
            if out.is_some() {
                emit(&out, &res.text)?;
                stdout(&format!("{stats}\n"));
            } else {
                stdout(&res.text);
                eprintln!("{stats}");
            }
        }
        Cmd::Verify { graph, tree, witness, emit_witness } => {
            let witness = witness.as_deref().map(read).transpose()?;
            let res = cmd_verify(&read(&graph)?, &read(&tree)?, witness.as_deref(), cli.format);
            if let (Some(path), Some(w)) = (&emit_witness, &res.witness) {
                emit(&Some(path.clone()), w)?;
            }
            if res.code == 2 {
                eprintln!("{}", res.message);
            } else {
                stdout(&format!("{}\n", res.message));
            }
            return Ok(res.code);
        }
        Cmd::Query { tree, s, t, all_pairs } => {
            let q = match (all_pairs, s, t) {
                (true, None, None) => Query::AllPairs,
                (false, Some(s), Some(t)) => Query::Pair(s, t),
                _ => return Err(CliError::Usage("give either <s> <t> or --all-pairs".into())),
            };
            stdout(&format!("{}\n", cmd_query(&read(&tree)?, q, cli.format)?));
        }
        Cmd::Bench { kind, n, m, degree, count, algos, repeats, d, no_timing } => {
            let spec = BenchSpec {
                kind,
                params: GenParams { n, m, degree, ..GenParams::default() },
                count,
                algos,
                repeats,
                d,
                seed: cli.seed,
                workers: cli.workers,
            };
            let report = cmd_bench(&spec)?;
            stdout(&report.to_ndjson(!no_timing));
            let bad = report.violations();
            if !bad.is_empty() {
                return Err(CliError::Invariant(format!("{} runs broke the call-count or stretch bounds", bad.len())));
            }
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
