//! Seeded benchmark suites and their CSV records.
//!
//! A suite is a deterministic stream of feasible instances drawn from one
//! seed. Solving is separated from generation so callers can fan instances
//! out in parallel and still emit records in instance order.

use std::fmt;
use std::io::Write;
use std::str::FromStr;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::generators::{gen_dense, gen_parallel_bicliques, with_intra_edges, DenseParams};
use crate::graph::connected_components;
use crate::greedy::solve_greedy;
use crate::half_dense::solve_half_dense;
use crate::instance::{measure_density, verify_solution, SolutionForest, SteinerForestInstance};
use crate::oracle::{oracle_steiner_forest, OracleCaps};
use crate::packing::PackingBackend;
use crate::rational::{format_rational, Rational};
use crate::tree_solver::{solve_theorem1, TreeSolverConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    /// above one half, no Steiner nodes
    Greedy,
    /// exactly one half, no Steiner nodes
    HalfDense,
    /// above one half with one to four Steiner nodes
    Theorem1,
}

impl Suite {
    pub const ALL: [Suite; 3] = [Suite::Greedy, Suite::HalfDense, Suite::Theorem1];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Greedy => "greedy",
            Suite::HalfDense => "half-dense",
            Suite::Theorem1 => "theorem1",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::Input(format!("unknown suite {s:?} (greedy, half-dense, theorem1)")))
    }
}

/// Every terminal set lies inside one connected component.
pub fn is_feasible(inst: &SteinerForestInstance) -> bool {
    let mut comp = vec![0usize; inst.node_count()];
    for (c, nodes) in connected_components(inst.graph()).iter().enumerate() {
        for v in nodes.iter() {
            comp[v] = c;
        }
    }
    inst.terminal_sets()
        .iter()
        .all(|s| s.iter().all(|v| comp[v] == comp[s.as_slice()[0]]))
}

const ABOVE_HALF: [(i64, i64); 5] = [(3, 5), (2, 3), (3, 4), (4, 5), (1, 1)];

/// Draws sizes in `1..=3` for `k` sets without exceeding `budget` nodes.
fn draw_sizes(rng: &mut ChaCha8Rng, k: usize, budget: usize) -> Vec<usize> {
    let mut left = budget;
    (0..k)
        .map(|i| {
            let reserve = k - i - 1;
            let s = rng.gen_range(1..=3usize.min(left - reserve));
            left -= s;
            s
        })
        .collect()
}

fn draw_greedy(rng: &mut ChaCha8Rng) -> Result<SteinerForestInstance> {
    let k = rng.gen_range(1..=6);
    let sizes = draw_sizes(rng, k, 16);
    let (p, q) = ABOVE_HALF[rng.gen_range(0..ABOVE_HALF.len())];
    gen_dense(&DenseParams {
        sizes,
        steiner_count: 0,
        delta: Rational::new(p, q),
        intra_edge_prob: [0.0, 0.3, 0.7][rng.gen_range(0..3)],
        seed: rng.gen(),
    })
}

fn draw_half_dense(rng: &mut ChaCha8Rng, index: usize) -> Result<SteinerForestInstance> {
    if index.is_multiple_of(2) {
        // even sizes, so that exactly half of a set is an integer
        let k = rng.gen_range(2..=6);
        let mut left = 16 - 2 * k;
        let sizes = (0..k)
            .map(|_| {
                if left >= 2 && rng.gen_bool(0.4) {
                    left -= 2;
                    4
                } else {
                    2
                }
            })
            .collect();
        return gen_dense(&DenseParams {
            sizes,
            steiner_count: 0,
            delta: Rational::new(1, 2),
            intra_edge_prob: [0.0, 0.4][rng.gen_range(0..2)],
            seed: rng.gen(),
        });
    }
    let k = rng.gen_range(2..=6);
    let half = rng.gen_range(1..=(8 / k).max(1));
    let mut cross = Vec::new();
    for i in 0..k {
        for j in i + 1..k {
            if rng.gen_bool(0.35) {
                cross.push((i, j));
            }
        }
    }
    let inst = gen_parallel_bicliques(k, half, &cross, rng.gen())?;
    with_intra_edges(&inst, [0.0, 0.5][rng.gen_range(0..2)], rng.gen())
}

fn draw_theorem1(rng: &mut ChaCha8Rng) -> Result<SteinerForestInstance> {
    let steiner_count = rng.gen_range(1..=4);
    let k = rng.gen_range(1..=4);
    let sizes = draw_sizes(rng, k, 14 - steiner_count);
    let (p, q) = ABOVE_HALF[rng.gen_range(0..ABOVE_HALF.len())];
    gen_dense(&DenseParams {
        sizes,
        steiner_count,
        delta: Rational::new(p, q),
        intra_edge_prob: [0.0, 0.3, 0.6][rng.gen_range(0..3)],
        seed: rng.gen(),
    })
}

/// The first `count` feasible instances of a suite. Infeasible draws are
/// discarded, so the stream depends only on `seed`.
pub fn suite_instances(suite: Suite, count: usize, seed: u64) -> Result<Vec<SteinerForestInstance>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let inst = match suite {
            Suite::Greedy => draw_greedy(&mut rng)?,
            Suite::HalfDense => draw_half_dense(&mut rng, out.len())?,
            Suite::Theorem1 => draw_theorem1(&mut rng)?,
        };
        if is_feasible(&inst) {
            out.push(inst);
        }
    }
    Ok(out)
}

/// Solver settings for a bench run.
#[derive(Debug, Clone, Copy)]
pub struct BenchConfig {
    pub suite: Suite,
    pub backend: PackingBackend,
    pub tree: TreeSolverConfig,
    pub with_oracle: bool,
    /// `false` writes 0 for wall time, which makes runs byte-comparable
    pub record_time: bool,
    pub caps: OracleCaps,
}

impl BenchConfig {
    pub fn new(suite: Suite) -> Self {
        BenchConfig {
            suite,
            backend: PackingBackend::Exact,
            tree: TreeSolverConfig::exact(),
            with_oracle: true,
            record_time: true,
            caps: OracleCaps::default(),
        }
    }

    fn backend_label(&self) -> String {
        match self.suite {
            Suite::Greedy => "none".into(),
            Suite::HalfDense => self.backend.to_string(),
            Suite::Theorem1 => format!("threshold-{}", self.tree.threshold),
        }
    }

    pub fn solve(&self, inst: &SteinerForestInstance) -> Result<SolutionForest> {
        match self.suite {
            Suite::Greedy => solve_greedy(inst),
            Suite::HalfDense => solve_half_dense(inst, self.backend),
            Suite::Theorem1 => solve_theorem1(inst, &self.tree),
        }
    }
}

/// One CSV row. Column order is the field order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRecord {
    pub instance_id: usize,
    pub n: usize,
    pub k: usize,
    pub measured_delta: String,
    pub algorithm: String,
    pub backend: String,
    pub value: usize,
    pub oracle_value: Option<usize>,
    pub ratio: Option<String>,
    pub wall_time_ms: f64,
}

impl BenchRecord {
    pub fn ratio_value(&self) -> Option<Rational> {
        match (self.oracle_value, self.value) {
            (Some(0), 0) => Some(Rational::from_integer(1)),
            (Some(0), _) | (None, _) => None,
            (Some(opt), v) => Some(Rational::new(v as i64, opt as i64)),
        }
    }
}

/// Solves, verifies, and (optionally) compares one instance.
pub fn bench_instance(
    config: &BenchConfig,
    instance_id: usize,
    inst: &SteinerForestInstance,
) -> Result<BenchRecord> {
    let start = Instant::now();
    let forest = config.solve(inst)?;
    let elapsed = start.elapsed().as_secs_f64() * 1000.0;
    if let Err(violations) = verify_solution(inst, &forest) {
        return Err(Error::Invariant(format!(
            "{} produced an infeasible forest on instance {instance_id}: {}",
            config.suite,
            violations
                .iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join("; ")
        )));
    }
    let oracle_value = if config.with_oracle {
        Some(oracle_steiner_forest(inst, &config.caps)?.edge_count())
    } else {
        None
    };
    let mut record = BenchRecord {
        instance_id,
        n: inst.node_count(),
        k: inst.set_count(),
        measured_delta: measure_density(inst)
            .delta
            .map_or_else(|| "undefined".to_string(), |d| format_rational(&d)),
        algorithm: config.suite.name().to_string(),
        backend: config.backend_label(),
        value: forest.edge_count(),
        oracle_value,
        ratio: None,
        wall_time_ms: if config.record_time { elapsed } else { 0.0 },
    };
    record.ratio = record.ratio_value().map(|r| format_rational(&r));
    Ok(record)
}

/// Sequential run of a whole suite.
pub fn run_suite(config: &BenchConfig, count: usize, seed: u64) -> Result<Vec<BenchRecord>> {
    suite_instances(config.suite, count, seed)?
        .iter()
        .enumerate()
        .map(|(id, inst)| bench_instance(config, id, inst))
        .collect()
}

pub fn write_csv<W: Write>(records: &[BenchRecord], out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(true).from_writer(out);
    if records.is_empty() {
        w.write_record([
            "instance_id",
            "n",
            "k",
            "measured_delta",
            "algorithm",
            "backend",
            "value",
            "oracle_value",
            "ratio",
            "wall_time_ms",
        ])?;
    }
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn csv_string(records: &[BenchRecord]) -> Result<String> {
    let mut buf = Vec::new();
    write_csv(records, &mut buf)?;
    String::from_utf8(buf).map_err(|e| Error::Invariant(e.to_string()))
}
