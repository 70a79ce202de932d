//! `densesf`: generate, check, solve and verify dense Steiner Forest
//! instances; build reduction gadgets; run seeded benchmark suites.
//!
//! Exit status: 0 success, 1 no solution or infeasible, 2 usage or input
//! error, 3 precondition violated, 4 internal error.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::json;

use densesf_core::generators::{
    gen_bounded_degree_graph, gen_dense, gen_packing, gen_parallel_bicliques, gen_set_cover,
    with_intra_edges, DenseParams,
};
use densesf_core::greedy::solve_greedy;
use densesf_core::half_dense::solve_half_dense;
use densesf_core::harness::{bench_instance, suite_instances, write_csv, BenchConfig, BenchRecord, Suite};
use densesf_core::instance::is_pairwise_dense;
use densesf_core::oracle::oracle_steiner_forest;
use densesf_core::reductions::{
    set_cover_to_group_steiner, verify_forest_gadget, verify_group_gadget, vertex_cover_to_steiner_forest,
    vertex_cover_to_steiner_tree,
};
use densesf_core::tree_solver::solve_theorem1;
use densesf_core::{
    measure_density, parse_rational, verify_solution, Error, Graph, OracleCaps, PackingBackend,
    PackingInstance, Rational, SetCoverInstance, SolutionForest, SteinerForestInstance, TreeSolverConfig,
};

#[derive(Parser)]
#[command(
    name = "densesf",
    version,
    about = "Solvers and gadgets for dense Steiner Forest instances"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate an instance as JSON on stdout
    Gen(GenArgs),
    /// Measure pairwise density
    Check {
        instance: PathBuf,
        /// Exit 3 unless the instance is at least this dense
        #[arg(long, value_parser = rational)]
        delta: Option<Rational>,
    },
    /// Solve an instance; the forest goes to stdout, its value to stderr
    Solve {
        instance: PathBuf,
        #[arg(long, value_enum, default_value_t = Algorithm::Auto)]
        algorithm: Algorithm,
        #[command(flatten)]
        backend: BackendArgs,
        /// Contraction threshold max(3, ceil(1/epsilon)) for the tree solver;
        /// omit for an exact finish
        #[arg(long, value_parser = rational)]
        epsilon: Option<Rational>,
    },
    /// Check a forest against an instance
    Verify { instance: PathBuf, solution: PathBuf },
    /// Solve a 3-Set Packing instance
    Pack {
        instance: PathBuf,
        #[command(flatten)]
        backend: BackendArgs,
    },
    /// Build a hardness gadget
    Reduce {
        #[command(subcommand)]
        kind: ReduceKind,
    },
    /// Run a seeded suite and write one CSV row per instance
    Bench(BenchArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Algorithm {
    Auto,
    Greedy,
    Packing,
    Tree,
    Brute,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BackendKind {
    Exact,
    Local,
}

#[derive(Args)]
struct BackendArgs {
    /// Packing subroutine of the half-dense solver
    #[arg(long, value_enum, default_value_t = BackendKind::Exact)]
    backend: BackendKind,
    /// Members swapped out per local-search move
    #[arg(long, default_value_t = 2)]
    swap_size: usize,
}

impl BackendArgs {
    fn backend(&self) -> Result<PackingBackend, Error> {
        match self.backend {
            BackendKind::Exact => Ok(PackingBackend::Exact),
            BackendKind::Local if self.swap_size == 0 => {
                Err(Error::Input("--swap-size must be at least 1".into()))
            }
            BackendKind::Local => Ok(PackingBackend::LocalSearch {
                swap_size: self.swap_size,
            }),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GenKind {
    Dense,
    Bicliques,
    SetCover,
    Graph,
    Packing,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, value_enum)]
    kind: GenKind,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// dense: terminal set sizes, e.g. 2,2,3
    #[arg(long, value_delimiter = ',')]
    sizes: Vec<usize>,
    /// dense: number of Steiner nodes
    #[arg(long, default_value_t = 0)]
    steiner: usize,
    /// dense: target density
    #[arg(long, value_parser = rational, default_value = "3/5")]
    delta: Rational,
    /// dense, bicliques: probability of edges inside terminal sets
    #[arg(long, default_value_t = 0.0)]
    intra: f64,
    /// bicliques: number of terminal sets
    #[arg(long)]
    k: Option<usize>,
    /// bicliques: size of each half
    #[arg(long, default_value_t = 1)]
    half_size: usize,
    /// bicliques: set pairs joined crosswise, e.g. 0-2,1-3
    #[arg(long, value_delimiter = ',', value_parser = pair)]
    cross: Vec<(usize, usize)>,
    /// set-cover: universe size; graph: node count; packing: universe size
    #[arg(long)]
    n: Option<usize>,
    /// set-cover: family size; packing: family size
    #[arg(long)]
    m: Option<usize>,
    /// graph: maximum degree
    #[arg(long)]
    max_degree: Option<usize>,
}

#[derive(Subcommand)]
enum ReduceKind {
    /// Set Cover JSON to a Group Steiner Tree instance
    SetCover {
        input: PathBuf,
        /// Print the oracle comparison instead of the gadget
        #[arg(long)]
        verify: bool,
    },
    /// Graph JSON to a Steiner tree (or, with --forest, Steiner forest) instance
    VertexCover {
        input: PathBuf,
        #[arg(long)]
        forest: bool,
        /// Print the oracle comparison of both gadgets instead of the gadget
        #[arg(long)]
        verify: bool,
    },
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, value_parser = suite)]
    suite: Suite,
    #[arg(long, default_value_t = 100)]
    count: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// CSV destination; stdout when omitted
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    backend: BackendArgs,
    #[arg(long, value_parser = rational)]
    epsilon: Option<Rational>,
    /// Skip the oracle; the oracle_value and ratio columns stay empty
    #[arg(long)]
    no_oracle: bool,
    /// Write 0 for wall time so reruns are byte-identical
    #[arg(long)]
    no_timing: bool,
}

fn rational(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

fn suite(s: &str) -> Result<Suite, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn pair(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s
        .split_once('-')
        .ok_or_else(|| format!("expected i-j, got {s:?}"))?;
    Ok((
        a.trim().parse().map_err(|_| format!("bad index in {s:?}"))?,
        b.trim().parse().map_err(|_| format!("bad index in {s:?}"))?,
    ))
}

/// An error with the exit status it maps to.
struct Failure {
    code: u8,
    error: anyhow::Error,
    /// machine-readable detail for stdout
    detail: Option<serde_json::Value>,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::NoSolution => 1,
            Error::Input(_) | Error::Json(_) | Error::Csv(_) | Error::Io(_) | Error::Disconnected(..) => 2,
            Error::Precondition(_) | Error::SizeLimit(_) => 3,
            Error::Invariant(_) => 4,
        };
        Failure {
            code,
            error: e.into(),
            detail: None,
        }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(error: anyhow::Error) -> Self {
        Failure {
            code: 2,
            error,
            detail: None,
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::from(anyhow::Error::from(e))
    }
}

type CmdResult = Result<(), Failure>;

fn read_input(path: &Path) -> anyhow::Result<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = read_input(path)?;
    serde_json::from_str(&text)
        .with_context(|| format!("parsing {}", path.display()))
        .map_err(Failure::from)
}

fn emit(value: impl serde::Serialize) -> CmdResult {
    let mut out = io::stdout().lock();
    serde_json::to_writer(&mut out, &value).map_err(|e| Failure::from(Error::from(e)))?;
    writeln!(out)?;
    Ok(())
}

/// Attaches the density report to precondition failures.
fn with_density(inst: &SteinerForestInstance, e: Error) -> Failure {
    let mut f = Failure::from(e);
    if f.code == 3 {
        f.detail = Some(json!({ "density": measure_density(inst).to_json() }));
    }
    f
}

fn tree_config(epsilon: Option<Rational>) -> Result<TreeSolverConfig, Error> {
    epsilon.map_or(Ok(TreeSolverConfig::exact()), TreeSolverConfig::from_epsilon)
}

fn cmd_gen(a: GenArgs) -> CmdResult {
    let need = |v: Option<usize>, flag: &str| {
        v.ok_or_else(|| Failure::from(anyhow::anyhow!("--kind needs --{flag}")))
    };
    match a.kind {
        GenKind::Dense => {
            if a.sizes.is_empty() {
                return Err(anyhow::anyhow!("--kind dense needs --sizes").into());
            }
            emit(gen_dense(&DenseParams {
                sizes: a.sizes,
                steiner_count: a.steiner,
                delta: a.delta,
                intra_edge_prob: a.intra,
                seed: a.seed,
            })?)
        }
        GenKind::Bicliques => {
            let base = gen_parallel_bicliques(need(a.k, "k")?, a.half_size, &a.cross, a.seed)?;
            emit(with_intra_edges(&base, a.intra, a.seed)?)
        }
        GenKind::SetCover => emit(gen_set_cover(need(a.n, "n")?, need(a.m, "m")?, a.seed)?),
        GenKind::Graph => emit(gen_bounded_degree_graph(
            need(a.n, "n")?,
            need(a.max_degree, "max-degree")?,
            a.seed,
        )?),
        GenKind::Packing => emit(gen_packing(need(a.n, "n")?, need(a.m, "m")?, a.seed)?),
    }
}

fn cmd_check(path: &Path, delta: Option<Rational>) -> CmdResult {
    let inst: SteinerForestInstance = read_json(path)?;
    let report = measure_density(&inst);
    emit(report.to_json())?;
    match delta {
        Some(d) if !is_pairwise_dense(&inst, d) => Err(Failure {
            code: 3,
            error: anyhow::anyhow!("not pairwise {d}-dense: {report}"),
            detail: None,
        }),
        _ => Ok(()),
    }
}

fn solve_with(
    inst: &SteinerForestInstance,
    algorithm: Algorithm,
    backend: PackingBackend,
    epsilon: Option<Rational>,
) -> Result<(SolutionForest, &'static str), Error> {
    let half = Rational::new(1, 2);
    let algorithm = match algorithm {
        Algorithm::Auto => {
            let delta = measure_density(inst).delta;
            if delta.is_none_or(|d| d > half) {
                Algorithm::Tree
            } else if delta == Some(half) && !inst.has_steiner_nodes() {
                Algorithm::Packing
            } else {
                Algorithm::Brute
            }
        }
        other => other,
    };
    match algorithm {
        Algorithm::Greedy => Ok((solve_greedy(inst)?, "greedy")),
        Algorithm::Packing => Ok((solve_half_dense(inst, backend)?, "half-dense")),
        Algorithm::Tree => Ok((solve_theorem1(inst, &tree_config(epsilon)?)?, "theorem1")),
        Algorithm::Brute | Algorithm::Auto => {
            let caps = OracleCaps::from_env()?;
            match oracle_steiner_forest(inst, &caps) {
                Ok(f) => Ok((f, "brute")),
                Err(Error::SizeLimit(msg)) => Err(Error::Precondition(format!(
                    "no approximation guarantee applies at this density and the instance exceeds the exhaustive solver ({msg})"
                ))),
                Err(e) => Err(e),
            }
        }
    }
}

fn cmd_solve(
    path: &Path,
    algorithm: Algorithm,
    backend: &BackendArgs,
    epsilon: Option<Rational>,
) -> CmdResult {
    let inst: SteinerForestInstance = read_json(path)?;
    let backend = backend.backend()?;
    let (forest, used) =
        solve_with(&inst, algorithm, backend, epsilon).map_err(|e| with_density(&inst, e))?;
    if let Err(v) = verify_solution(&inst, &forest) {
        let msgs: Vec<String> = v.iter().map(ToString::to_string).collect();
        return Err(Error::Invariant(format!(
            "{used} returned an infeasible forest: {}",
            msgs.join("; ")
        ))
        .into());
    }
    emit(&forest)?;
    eprintln!("algorithm {used}, value {}", forest.edge_count());
    Ok(())
}

fn cmd_verify(inst_path: &Path, sol_path: &Path) -> CmdResult {
    let inst: SteinerForestInstance = read_json(inst_path)?;
    let forest: SolutionForest = read_json(sol_path)?;
    match verify_solution(&inst, &forest) {
        Ok(()) => emit(json!({ "feasible": true, "value": forest.edge_count() })),
        Err(violations) => {
            let list: Vec<String> = violations.iter().map(ToString::to_string).collect();
            emit(json!({ "feasible": false, "violations": list }))?;
            Err(Failure {
                code: 1,
                error: anyhow::anyhow!("{} violation(s)", list.len()),
                detail: None,
            })
        }
    }
}

fn cmd_pack(path: &Path, backend: &BackendArgs) -> CmdResult {
    let p: PackingInstance = read_json(path)?;
    let backend = backend.backend()?;
    let packing = backend.solve(&p)?;
    emit(json!({ "backend": backend.to_string(), "size": packing.len(), "chosen": packing.chosen }))
}

fn cmd_reduce(kind: ReduceKind) -> CmdResult {
    let caps = OracleCaps::from_env()?;
    match kind {
        ReduceKind::SetCover { input, verify } => {
            let sc: SetCoverInstance = read_json(&input)?;
            if verify {
                emit(verify_group_gadget(&sc, &caps)?)
            } else {
                emit(set_cover_to_group_steiner(&sc)?)
            }
        }
        ReduceKind::VertexCover {
            input,
            forest,
            verify,
        } => {
            let g: Graph = read_json(&input)?;
            if verify {
                emit(verify_forest_gadget(&g, &caps)?)
            } else if forest {
                emit(vertex_cover_to_steiner_forest(&g)?)
            } else {
                emit(vertex_cover_to_steiner_tree(&g)?)
            }
        }
    }
}

fn cmd_bench(a: BenchArgs) -> CmdResult {
    let config = BenchConfig {
        suite: a.suite,
        backend: a.backend.backend()?,
        tree: tree_config(a.epsilon)?,
        with_oracle: !a.no_oracle,
        record_time: !a.no_timing,
        caps: OracleCaps::from_env()?,
    };
    let instances = suite_instances(a.suite, a.count, a.seed)?;
    // collect() keeps instance order whatever the completion order
    let records: Vec<BenchRecord> = instances
        .par_iter()
        .enumerate()
        .map(|(id, inst)| bench_instance(&config, id, inst))
        .collect::<Result<_, Error>>()?;
    match &a.out {
        Some(path) => write_csv(
            &records,
            fs::File::create(path).with_context(|| format!("creating {}", path.display()))?,
        )?,
        None => write_csv(&records, io::stdout().lock())?,
    }
    let worst = records.iter().filter_map(BenchRecord::ratio_value).max();
    eprintln!(
        "{} records, suite {}, worst ratio {}",
        records.len(),
        a.suite,
        worst.map_or_else(|| "n/a".to_string(), |r| r.to_string())
    );
    Ok(())
}

fn run(cli: Cli) -> CmdResult {
    match cli.command {
        Command::Gen(a) => cmd_gen(a),
        Command::Check { instance, delta } => cmd_check(&instance, delta),
        Command::Solve {
            instance,
            algorithm,
            backend,
            epsilon,
        } => cmd_solve(&instance, algorithm, &backend, epsilon),
        Command::Verify { instance, solution } => cmd_verify(&instance, &solution),
        Command::Pack { instance, backend } => cmd_pack(&instance, &backend),
        Command::Reduce { kind } => cmd_reduce(kind),
        Command::Bench(a) => cmd_bench(a),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            if let Some(detail) = f.detail {
                let _ = emit(detail);
            }
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}
