//! Single-tree solver for dense instances with Steiner nodes, and the
//! combiner that picks the better of "one tree through Steiner nodes" and
//! "optimal forest on terminals only".
//!
//! The single-tree solver contracts Steiner stars greedily until few
//! terminal components remain, then finishes exactly with a subset dynamic
//! program over those components.

use std::collections::VecDeque;

use crate::dsu::DisjointSets;
use crate::error::{Error, Result};
use crate::graph::{spanning_tree, Graph, NodeId, NodeSet};
use crate::greedy::solve_greedy;
use crate::instance::{measure_density, SolutionForest, SteinerForestInstance};
use crate::rational::Rational;

/// Largest number of terminal components handed to the exact finish.
pub const DEFAULT_EXACT_CAP: usize = 14;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TreeSolverConfig {
    /// Contraction stops once at most this many terminal components remain.
    pub threshold: usize,
    /// Hard limit on components entering the exact finish.
    pub exact_cap: usize,
}

impl TreeSolverConfig {
    /// `threshold = max(3, ceil(1 / epsilon))`, capped by [`DEFAULT_EXACT_CAP`].
    pub fn from_epsilon(epsilon: Rational) -> Result<Self> {
        if epsilon <= Rational::from_integer(0) {
            return Err(Error::Input("epsilon must be positive".into()));
        }
        let inv = epsilon.recip().ceil().to_integer().max(3) as usize;
        Ok(TreeSolverConfig {
            threshold: inv.min(DEFAULT_EXACT_CAP),
            exact_cap: DEFAULT_EXACT_CAP,
        })
    }

    /// No contraction unless more than [`DEFAULT_EXACT_CAP`] components exist.
    pub fn exact() -> Self {
        TreeSolverConfig {
            threshold: DEFAULT_EXACT_CAP,
            exact_cap: DEFAULT_EXACT_CAP,
        }
    }
}

/// Components of the graph induced by `in_tree`, as labels `0..count` in
/// order of first appearance; nodes outside the tree get `usize::MAX`.
fn tree_components(g: &Graph, in_tree: &[bool]) -> (Vec<usize>, usize) {
    let n = g.node_count();
    let mut dsu = DisjointSets::new(n);
    for e in g.edges() {
        if in_tree[e.lo()] && in_tree[e.hi()] {
            dsu.union(e.lo(), e.hi());
        }
    }
    let mut label_of_root = vec![usize::MAX; n];
    let mut labels = vec![usize::MAX; n];
    let mut count = 0;
    for v in (0..n).filter(|&v| in_tree[v]) {
        let r = dsu.find(v);
        if label_of_root[r] == usize::MAX {
            label_of_root[r] = count;
            count += 1;
        }
        labels[v] = label_of_root[r];
    }
    (labels, count)
}

/// One tree containing every terminal, possibly through Steiner nodes.
pub fn solve_single_tree(inst: &SteinerForestInstance, config: &TreeSolverConfig) -> Result<SolutionForest> {
    let g = inst.graph();
    let n = g.node_count();
    let terminals = inst.terminals();
    let mut in_tree = vec![false; n];
    for t in terminals.iter() {
        in_tree[t] = true;
    }

    let everything = vec![true; n];
    let (reach, _) = tree_components(g, &everything);
    let first = terminals.first().expect("instances have terminals");
    if terminals.iter().any(|t| reach[t] != reach[first]) {
        return Err(Error::NoSolution);
    }

    let (mut labels, mut count) = tree_components(g, &in_tree);

    // Star contraction: absorb the Steiner node touching the most components.
    let mut seen = vec![usize::MAX; n];
    while count > config.threshold {
        let mut best: Option<(usize, NodeId)> = None;
        for s in (0..n).filter(|&s| !in_tree[s]) {
            let mut distinct = 0;
            for &w in g.neighbors(s) {
                if in_tree[w] && seen[labels[w]] != s {
                    seen[labels[w]] = s;
                    distinct += 1;
                }
            }
            if distinct >= 2 && best.is_none_or(|(d, _)| distinct > d) {
                best = Some((distinct, s));
            }
        }
        let Some((_, s)) = best else { break };
        in_tree[s] = true;
        seen.iter_mut().for_each(|x| *x = usize::MAX);
        (labels, count) = tree_components(g, &in_tree);
    }

    // Paths of two or more Steiner nodes: join the component holding the
    // smallest node to its nearest neighbor component until the cap is met.
    while count > config.exact_cap {
        let path = nearest_component_path(g, &in_tree, &labels, labels[first])
            .ok_or_else(|| Error::Invariant("terminal components stopped merging".into()))?;
        for v in path {
            in_tree[v] = true;
        }
        (labels, count) = tree_components(g, &in_tree);
    }

    let chosen = exact_finish(g, &in_tree, &labels, count);
    for s in chosen {
        in_tree[s] = true;
    }
    let nodes: NodeSet = (0..n).filter(|&v| in_tree[v]).collect();
    let edges = spanning_tree(g, &nodes)
        .map_err(|e| Error::Invariant(format!("single tree is disconnected: {e}")))?;
    Ok(SolutionForest::new(edges))
}

/// Interior nodes of a shortest path from component `from` to any other component.
fn nearest_component_path(g: &Graph, in_tree: &[bool], labels: &[usize], from: usize) -> Option<Vec<NodeId>> {
    let n = g.node_count();
    let mut parent = vec![usize::MAX; n];
    let mut queue: VecDeque<NodeId> = (0..n).filter(|&v| in_tree[v] && labels[v] == from).collect();
    for &v in &queue {
        parent[v] = v;
    }
    while let Some(u) = queue.pop_front() {
        for &w in g.neighbors(u) {
            if parent[w] != usize::MAX {
                continue;
            }
            parent[w] = u;
            if in_tree[w] {
                let mut path = Vec::new();
                let mut x = u;
                while !in_tree[x] {
                    path.push(x);
                    x = parent[x];
                }
                return Some(path);
            }
            queue.push_back(w);
        }
    }
    None
}

/// Minimum set of free Steiner nodes connecting all `count` components
/// (subset dynamic program over components on the contracted graph).
fn exact_finish(g: &Graph, in_tree: &[bool], labels: &[usize], count: usize) -> Vec<NodeId> {
    if count <= 1 {
        return Vec::new();
    }
    let n = g.node_count();
    // contracted ids: components 0..count, then free Steiner nodes
    let free: Vec<NodeId> = (0..n).filter(|&v| !in_tree[v]).collect();
    let mut cid = vec![0usize; n];
    for v in 0..n {
        cid[v] = if in_tree[v] {
            labels[v]
        } else {
            count + free.partition_point(|&x| x < v)
        };
    }
    let m = count + free.len();
    let mut adj = vec![Vec::new(); m];
    for e in g.edges() {
        let (a, b) = (cid[e.lo()], cid[e.hi()]);
        if a != b {
            adj[a].push(b);
            adj[b].push(a);
        }
    }
    for list in &mut adj {
        list.sort_unstable();
        list.dedup();
    }

    const INF: u32 = u32::MAX / 4;
    // BFS distances and parents from every contracted node
    let mut dist = vec![vec![INF; m]; m];
    let mut parent = vec![vec![usize::MAX; m]; m];
    for src in 0..m {
        let (d, p) = (&mut dist[src], &mut parent[src]);
        d[src] = 0;
        p[src] = src;
        let mut queue = VecDeque::from([src]);
        while let Some(u) = queue.pop_front() {
            for &w in &adj[u] {
                if d[w] == INF {
                    d[w] = d[u] + 1;
                    p[w] = u;
                    queue.push_back(w);
                }
            }
        }
    }

    let full = (1usize << count) - 1;
    let mut cost = vec![vec![INF; m]; full + 1];
    // split[mask][v]: submask used at v (0 = none); via[mask][v]: node the
    // tree for mask is anchored at before walking to v
    let mut split = vec![vec![0usize; m]; full + 1];
    let mut via = vec![vec![usize::MAX; m]; full + 1];
    for i in 0..count {
        for v in 0..m {
            cost[1 << i][v] = dist[i][v];
            via[1 << i][v] = i;
        }
    }
    let mut merged = vec![INF; m];
    for mask in 1..=full {
        if mask.count_ones() < 2 {
            continue;
        }
        let low = mask & mask.wrapping_neg();
        for v in 0..m {
            merged[v] = INF;
            let mut sub = (mask - 1) & mask;
            while sub > 0 {
                if sub & low != 0 {
                    let c = cost[sub][v] + cost[mask ^ sub][v];
                    if c < merged[v] {
                        merged[v] = c;
                        split[mask][v] = sub;
                    }
                }
                sub = (sub - 1) & mask;
            }
        }
        for v in 0..m {
            let (mut best, mut arg) = (INF, usize::MAX);
            for u in 0..m {
                let c = merged[u].saturating_add(dist[u][v]);
                if c < best {
                    best = c;
                    arg = u;
                }
            }
            cost[mask][v] = best;
            via[mask][v] = arg;
        }
    }

    let mut used = vec![false; m];
    let mut stack = vec![(full, 0usize)];
    while let Some((mask, v)) = stack.pop() {
        let u = via[mask][v];
        let mut x = v;
        used[x] = true;
        while x != u {
            x = parent[u][x];
            used[x] = true;
        }
        if mask.count_ones() >= 2 {
            let sub = split[mask][u];
            stack.push((sub, u));
            stack.push((mask ^ sub, u));
        }
    }
    (count..m).filter(|&c| used[c]).map(|c| free[c - count]).collect()
}

/// Which branch of the combiner produced the answer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Theorem1Branch {
    SingleTree,
    TerminalsOnly,
}

#[derive(Debug, Clone)]
pub struct Theorem1Outcome {
    pub forest: SolutionForest,
    pub branch: Theorem1Branch,
    pub single_tree_value: Option<usize>,
    pub terminals_only_value: Option<usize>,
}

pub fn solve_theorem1(inst: &SteinerForestInstance, config: &TreeSolverConfig) -> Result<SolutionForest> {
    solve_theorem1_detailed(inst, config).map(|o| o.forest)
}

/// Better of one Steiner tree over all terminals and the greedy forest on
/// the terminal-only instance; ties go to the terminal-only forest.
pub fn solve_theorem1_detailed(
    inst: &SteinerForestInstance,
    config: &TreeSolverConfig,
) -> Result<Theorem1Outcome> {
    let report = measure_density(inst);
    if report.delta.is_some_and(|d| d <= Rational::new(1, 2)) {
        return Err(Error::Precondition(format!(
            "combiner requires density > 1/2, measured {report}"
        )));
    }

    let single = if inst.has_steiner_nodes() {
        match solve_single_tree(inst, config) {
            Ok(f) => Some(f),
            Err(Error::NoSolution) => None,
            Err(e) => return Err(e),
        }
    } else {
        None
    };

    let (restricted, sub) = inst.restrict_to_terminals();
    let terminal_only = match solve_greedy(&restricted) {
        Ok(f) => Some(SolutionForest::new(
            f.edges().iter().map(|&e| sub.original_edge(e)),
        )),
        Err(Error::NoSolution) => None,
        Err(e) => return Err(e),
    };

    let single_tree_value = single.as_ref().map(SolutionForest::edge_count);
    let terminals_only_value = terminal_only.as_ref().map(SolutionForest::edge_count);
    let (forest, branch) = match (single, terminal_only) {
        (Some(a), Some(b)) if a.edge_count() < b.edge_count() => (a, Theorem1Branch::SingleTree),
        (_, Some(b)) => (b, Theorem1Branch::TerminalsOnly),
        (Some(a), None) => (a, Theorem1Branch::SingleTree),
        (None, None) => return Err(Error::NoSolution),
    };
    Ok(Theorem1Outcome {
        forest,
        branch,
        single_tree_value,
        terminals_only_value,
    })
}
