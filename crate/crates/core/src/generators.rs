//! Seeded instance generators. Every generator is deterministic in its seed.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{Edge, Graph, NodeId, NodeSet};
use crate::instance::{measure_density, DensityTarget, SteinerForestInstance};
use crate::packing::PackingInstance;
use crate::rational::Rational;
use crate::reductions::SetCoverInstance;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Parameters for [`gen_dense`]. Terminal set `i` gets `sizes[i]` nodes;
/// sets are laid out contiguously from node 0, Steiner nodes come last.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseParams {
    pub sizes: Vec<usize>,
    pub steiner_count: usize,
    pub delta: Rational,
    /// Probability of each edge inside a terminal set and between two
    /// Steiner nodes. Such edges do not affect density.
    pub intra_edge_prob: f64,
    pub seed: u64,
}

fn ceil_times(delta: Rational, size: usize) -> usize {
    (delta * Rational::from_integer(size as i64)).ceil().to_integer() as usize
}

/// Random pairwise `delta`-dense instance.
pub fn gen_dense(params: &DenseParams) -> Result<SteinerForestInstance> {
    let delta = params.delta;
    if delta <= Rational::from_integer(0) || delta > Rational::from_integer(1) {
        return Err(Error::Input("delta must lie in (0, 1]".into()));
    }
    if params.sizes.is_empty() || params.sizes.contains(&0) {
        return Err(Error::Input("need at least one set and all sizes >= 1".into()));
    }
    if !(0.0..=1.0).contains(&params.intra_edge_prob) {
        return Err(Error::Input("intra_edge_prob must lie in [0, 1]".into()));
    }
    let mut rng = rng(params.seed);

    let mut groups: Vec<Vec<NodeId>> = Vec::new();
    let mut next = 0;
    for &size in &params.sizes {
        groups.push((next..next + size).collect());
        next += size;
    }
    let steiner: Vec<NodeId> = (next..next + params.steiner_count).collect();
    let n = next + params.steiner_count;

    let mut edges: BTreeSet<Edge> = BTreeSet::new();
    for g in groups.iter().chain(std::iter::once(&steiner)) {
        for (a, &u) in g.iter().enumerate() {
            for &v in &g[a + 1..] {
                if rng.gen_bool(params.intra_edge_prob) {
                    edges.insert(Edge::new(u, v));
                }
            }
        }
    }

    let mut targets: Vec<&Vec<NodeId>> = groups.iter().collect();
    if !steiner.is_empty() {
        targets.push(&steiner);
    }
    for (i, group) in groups.iter().enumerate() {
        for &t in group {
            for (j, target) in targets.iter().enumerate() {
                if j == i {
                    continue;
                }
                let need = ceil_times(delta, target.len());
                let have = target
                    .iter()
                    .filter(|&&w| edges.contains(&Edge::new(t, w)))
                    .count();
                if have >= need {
                    continue;
                }
                let free: Vec<NodeId> = target
                    .iter()
                    .copied()
                    .filter(|&w| !edges.contains(&Edge::new(t, w)))
                    .collect();
                for &w in free.choose_multiple(&mut rng, need - have) {
                    edges.insert(Edge::new(t, w));
                }
            }
        }
    }

    let sets = groups.into_iter().map(NodeSet::from).collect();
    let mut inst = SteinerForestInstance::new(Graph::new(n, edges.iter().copied())?, sets)?;
    // Repair pass: adding edges never lowers density, so this terminates.
    loop {
        let report = measure_density(&inst);
        match (report.delta, report.witness) {
            (Some(d), Some(w)) if d < delta => {
                let pool: Vec<NodeId> = match w.target {
                    DensityTarget::Set(j) => inst.terminal_set(j).iter().collect(),
                    DensityTarget::Steiner => inst.steiner_nodes().iter().collect(),
                };
                let add = pool
                    .into_iter()
                    .find(|&v| !inst.graph().has_edge(w.terminal, v))
                    .ok_or_else(|| Error::Invariant("density repair found no free edge".into()))?;
                let graph = inst.graph().with_edges([Edge::new(w.terminal, add)])?;
                inst = SteinerForestInstance::new(graph, inst.terminal_sets().to_vec())?;
            }
            _ => return Ok(inst),
        }
    }
}

/// Exactly half-dense instance whose sets split into halves `A_i` and `B_i`.
///
/// Every pair of sets is joined by two bicliques of half-size parts. By
/// default they are `A_i-A_j` and `B_i-B_j`, which keeps the two sides apart;
/// a pair listed in `cross_pairs` is joined crosswise (`A_i-B_j`, `B_i-A_j`)
/// instead, which is how connected pairs and triplets arise. The seed only
/// permutes node labels.
pub fn gen_parallel_bicliques(
    k: usize,
    half_size: usize,
    cross_pairs: &[(usize, usize)],
    seed: u64,
) -> Result<SteinerForestInstance> {
    if k < 2 {
        return Err(Error::Input("need at least two terminal sets".into()));
    }
    if half_size == 0 {
        return Err(Error::Input("half_size must be positive".into()));
    }
    let crossed: BTreeSet<(usize, usize)> = cross_pairs
        .iter()
        .map(|&(a, b)| if a < b { (a, b) } else { (b, a) })
        .collect();
    if let Some(&(a, b)) = crossed.iter().find(|&&(a, b)| a == b || b >= k) {
        return Err(Error::Input(format!("invalid cross pair ({a}, {b})")));
    }
    let h = half_size;
    let side = |set: usize, b_side: bool| -> std::ops::Range<NodeId> {
        let start = set * 2 * h + if b_side { h } else { 0 };
        start..start + h
    };
    let mut edges = Vec::new();
    for i in 0..k {
        for j in i + 1..k {
            let cross = crossed.contains(&(i, j));
            for b_side in [false, true] {
                for u in side(i, b_side) {
                    for v in side(j, b_side ^ cross) {
                        edges.push(Edge::new(u, v));
                    }
                }
            }
        }
    }
    let n = 2 * h * k;
    let mut perm: Vec<NodeId> = (0..n).collect();
    perm.shuffle(&mut rng(seed));
    let graph = Graph::new(n, edges)?.permuted(&perm);
    let sets = (0..k)
        .map(|i| (i * 2 * h..(i + 1) * 2 * h).map(|v| perm[v]).collect())
        .collect();
    SteinerForestInstance::new(graph, sets)
}

/// Adds each absent edge inside a terminal set with probability `prob`.
/// Cross-set and Steiner neighborhoods are untouched, so density is preserved.
pub fn with_intra_edges(inst: &SteinerForestInstance, prob: f64, seed: u64) -> Result<SteinerForestInstance> {
    let mut rng = rng(seed);
    let mut extra = Vec::new();
    for set in inst.terminal_sets() {
        let nodes = set.as_slice();
        for (a, &u) in nodes.iter().enumerate() {
            for &v in &nodes[a + 1..] {
                if rng.gen_bool(prob) {
                    extra.push(Edge::new(u, v));
                }
            }
        }
    }
    SteinerForestInstance::new(inst.graph().with_edges(extra)?, inst.terminal_sets().to_vec())
}

/// Random Set Cover instance with `m` non-empty sets whose union is the universe.
pub fn gen_set_cover(n: usize, m: usize, seed: u64) -> Result<SetCoverInstance> {
    if n == 0 || m == 0 {
        return Err(Error::Input("set cover needs n >= 1 and m >= 1".into()));
    }
    let mut rng = rng(seed);
    let mut family: Vec<Vec<usize>> = (0..m)
        .map(|_| (0..n).filter(|_| rng.gen_bool(0.4)).collect())
        .collect();
    for set in &mut family {
        if set.is_empty() {
            set.push(rng.gen_range(0..n));
        }
    }
    for u in 0..n {
        if !family.iter().any(|s| s.contains(&u)) {
            let j = rng.gen_range(0..m);
            family[j].push(u);
            family[j].sort_unstable();
        }
    }
    SetCoverInstance::new(n, family)
}

/// Random graph on `n` nodes with maximum degree at most `max_degree`.
pub fn gen_bounded_degree_graph(n: usize, max_degree: usize, seed: u64) -> Result<Graph> {
    if n == 0 || max_degree == 0 {
        return Err(Error::Input("need n >= 1 and max_degree >= 1".into()));
    }
    let mut rng = rng(seed);
    let mut pairs: Vec<(NodeId, NodeId)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    pairs.shuffle(&mut rng);
    let mut degree = vec![0usize; n];
    let mut edges = Vec::new();
    for (u, v) in pairs {
        if degree[u] < max_degree && degree[v] < max_degree && rng.gen_bool(0.7) {
            degree[u] += 1;
            degree[v] += 1;
            edges.push(Edge::new(u, v));
        }
    }
    Graph::new(n, edges)
}

/// Random 3-Set Packing instance with `family_size` distinct members of size 2 or 3.
pub fn gen_packing(universe: usize, family_size: usize, seed: u64) -> Result<PackingInstance> {
    if universe < 2 {
        return Err(Error::Input("universe must have at least two elements".into()));
    }
    let mut rng = rng(seed);
    let mut family: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut attempts = 0;
    while family.len() < family_size && attempts < family_size * 20 {
        attempts += 1;
        let size = if universe >= 3 && rng.gen_bool(0.5) { 3 } else { 2 };
        let mut members: Vec<usize> = (0..universe)
            .collect::<Vec<_>>()
            .choose_multiple(&mut rng, size)
            .copied()
            .collect();
        members.sort_unstable();
        family.insert(members);
    }
    PackingInstance::new(universe, family.into_iter().collect())
}
