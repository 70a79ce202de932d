//! Steiner Forest instances, pairwise density, and solution checking.
//!
//! Terminal sets are indexed from 0. A node that belongs to no terminal
//! set is a Steiner node.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::dsu::DisjointSets;
use crate::error::{Error, Result};
use crate::graph::{induced_subgraph, Edge, Graph, InducedSubgraph, NodeId, NodeSet};
use crate::rational::{format_rational, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SteinerForestInstance {
    graph: Graph,
    terminal_sets: Vec<NodeSet>,
    owner: Vec<Option<usize>>,
}

#[derive(Serialize, Deserialize)]
struct InstanceJson {
    nodes: usize,
    edges: Vec<Edge>,
    terminal_sets: Vec<NodeSet>,
}

impl Serialize for SteinerForestInstance {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        InstanceJson {
            nodes: self.graph.node_count(),
            edges: self.graph.edges().to_vec(),
            terminal_sets: self.terminal_sets.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SteinerForestInstance {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = InstanceJson::deserialize(d)?;
        let graph = Graph::new(raw.nodes, raw.edges).map_err(serde::de::Error::custom)?;
        SteinerForestInstance::new(graph, raw.terminal_sets).map_err(serde::de::Error::custom)
    }
}

impl SteinerForestInstance {
    /// Requires at least one terminal set, every set non-empty, all sets
    /// pairwise disjoint and inside the graph.
    pub fn new(graph: Graph, terminal_sets: Vec<NodeSet>) -> Result<Self> {
        if terminal_sets.is_empty() {
            return Err(Error::Input("an instance needs at least one terminal set".into()));
        }
        let mut owner = vec![None; graph.node_count()];
        for (i, set) in terminal_sets.iter().enumerate() {
            if set.is_empty() {
                return Err(Error::Input(format!("terminal set {i} is empty")));
            }
            for v in set.iter() {
                if v >= graph.node_count() {
                    return Err(Error::Input(format!(
                        "terminal {v} of set {i} is outside 0..{}",
                        graph.node_count()
                    )));
                }
                if let Some(j) = owner[v] {
                    return Err(Error::Input(format!(
                        "node {v} belongs to terminal sets {j} and {i}"
                    )));
                }
                owner[v] = Some(i);
            }
        }
        Ok(SteinerForestInstance {
            graph,
            terminal_sets,
            owner,
        })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn node_count(&self) -> usize {
        self.graph.node_count()
    }

    pub fn terminal_sets(&self) -> &[NodeSet] {
        &self.terminal_sets
    }

    pub fn set_count(&self) -> usize {
        self.terminal_sets.len()
    }

    pub fn terminal_set(&self, i: usize) -> &NodeSet {
        &self.terminal_sets[i]
    }

    /// Index of the terminal set containing `v`, or `None` for a Steiner node.
    pub fn set_of(&self, v: NodeId) -> Option<usize> {
        self.owner[v]
    }

    pub fn steiner_nodes(&self) -> NodeSet {
        (0..self.node_count())
            .filter(|&v| self.owner[v].is_none())
            .collect()
    }

    pub fn has_steiner_nodes(&self) -> bool {
        self.owner.iter().any(Option::is_none)
    }

    pub fn terminals(&self) -> NodeSet {
        (0..self.node_count())
            .filter(|&v| self.owner[v].is_some())
            .collect()
    }

    /// Union of the terminal sets with the given indices.
    pub fn union_of(&self, sets: &[usize]) -> NodeSet {
        sets.iter().flat_map(|&i| self.terminal_sets[i].iter()).collect()
    }

    pub(crate) fn check_set_index(&self, i: usize) -> Result<()> {
        if i < self.set_count() {
            Ok(())
        } else {
            Err(Error::Input(format!(
                "terminal set index {i} out of range (k = {})",
                self.set_count()
            )))
        }
    }

    /// The instance on terminal nodes only, with the relabeling used.
    pub fn restrict_to_terminals(&self) -> (SteinerForestInstance, InducedSubgraph) {
        let sub = induced_subgraph(&self.graph, &self.terminals()).expect("terminals are valid nodes");
        let sets = self
            .terminal_sets
            .iter()
            .map(|s| {
                s.iter()
                    .map(|v| sub.local_id(v).expect("terminal kept"))
                    .collect()
            })
            .collect();
        let inst =
            SteinerForestInstance::new(sub.graph.clone(), sets).expect("restriction preserves validity");
        (inst, sub)
    }

    /// Relabels node `v` as `perm[v]`. Set order is preserved.
    pub fn permuted(&self, perm: &[NodeId]) -> SteinerForestInstance {
        let graph = self.graph.permuted(perm);
        let sets = self
            .terminal_sets
            .iter()
            .map(|s| s.iter().map(|v| perm[v]).collect())
            .collect();
        SteinerForestInstance::new(graph, sets).expect("permutation preserves validity")
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

/// Where the minimum cross-neighborhood ratio was attained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DensityTarget {
    Set(usize),
    Steiner,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DensityWitness {
    pub terminal: NodeId,
    pub target: DensityTarget,
}

/// Largest `delta` for which the instance is pairwise `delta`-dense.
/// `delta` is `None` when no cross-set or Steiner constraint exists.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DensityReport {
    pub delta: Option<Rational>,
    pub witness: Option<DensityWitness>,
}

impl DensityReport {
    pub fn to_json(&self) -> serde_json::Value {
        let delta = match &self.delta {
            Some(d) => serde_json::Value::from(format_rational(d)),
            None => serde_json::Value::from("undefined"),
        };
        let witness = match self.witness {
            Some(w) => serde_json::json!({
                "terminal": w.terminal,
                "target": match w.target {
                    DensityTarget::Set(j) => serde_json::Value::from(j),
                    DensityTarget::Steiner => serde_json::Value::from("S"),
                },
            }),
            None => serde_json::Value::Null,
        };
        serde_json::json!({ "delta": delta, "witness": witness })
    }
}

impl fmt::Display for DensityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (&self.delta, self.witness) {
            (Some(d), Some(w)) => {
                write!(
                    f,
                    "delta = {} (terminal {} against ",
                    format_rational(d),
                    w.terminal
                )?;
                match w.target {
                    DensityTarget::Set(j) => write!(f, "set {j})"),
                    DensityTarget::Steiner => write!(f, "Steiner nodes)"),
                }
            }
            _ => write!(f, "delta undefined (no cross-set constraint)"),
        }
    }
}

pub fn measure_density(inst: &SteinerForestInstance) -> DensityReport {
    let k = inst.set_count();
    let steiner_count = inst.node_count() - inst.terminals().len();
    let mut best: Option<(Rational, DensityWitness)> = None;
    let mut counts = vec![0i64; k];
    for (i, set) in inst.terminal_sets().iter().enumerate() {
        for t in set.iter() {
            counts.iter_mut().for_each(|c| *c = 0);
            let mut steiner = 0i64;
            for &w in inst.graph().neighbors(t) {
                match inst.set_of(w) {
                    Some(j) => counts[j] += 1,
                    None => steiner += 1,
                }
            }
            let mut consider = |ratio: Rational, target| {
                if best.as_ref().is_none_or(|(b, _)| ratio < *b) {
                    best = Some((ratio, DensityWitness { terminal: t, target }));
                }
            };
            for (j, &c) in counts.iter().enumerate() {
                if j != i {
                    let size = inst.terminal_set(j).len() as i64;
                    consider(Rational::new(c, size), DensityTarget::Set(j));
                }
            }
            if steiner_count > 0 {
                consider(
                    Rational::new(steiner, steiner_count as i64),
                    DensityTarget::Steiner,
                );
            }
        }
    }
    DensityReport {
        delta: best.map(|(d, _)| d),
        witness: best.map(|(_, w)| w),
    }
}

/// Whether every terminal meets the `delta` threshold against every other
/// set and the Steiner nodes. Vacuously true when no constraint exists.
pub fn is_pairwise_dense(inst: &SteinerForestInstance, delta: Rational) -> bool {
    measure_density(inst).delta.is_none_or(|d| d >= delta)
}

/// Indices of terminal sets that induce a connected subgraph.
pub fn trivial_sets(inst: &SteinerForestInstance) -> Vec<usize> {
    (0..inst.set_count())
        .filter(|&i| inst.graph().is_induced_connected(inst.terminal_set(i)))
        .collect()
}

/// A forest given by its edges, kept sorted.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SolutionForest {
    edges: Vec<Edge>,
}

impl SolutionForest {
    pub fn new(edges: impl IntoIterator<Item = Edge>) -> Self {
        let mut edges: Vec<Edge> = edges.into_iter().collect();
        edges.sort_unstable();
        edges.dedup();
        SolutionForest { edges }
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Trees of the forest over `node_count` nodes, untouched nodes included
    /// as singletons; `Err` on the first edge that closes a cycle.
    pub(crate) fn trees(&self, node_count: usize) -> std::result::Result<Vec<NodeSet>, Edge> {
        let mut dsu = DisjointSets::new(node_count);
        for &e in &self.edges {
            if !dsu.union(e.lo(), e.hi()) {
                return Err(e);
            }
        }
        let mut groups: Vec<Vec<NodeId>> = vec![Vec::new(); node_count];
        for v in 0..node_count {
            let r = dsu.find(v);
            groups[r].push(v);
        }
        let mut trees: Vec<NodeSet> = groups
            .into_iter()
            .filter(|g| !g.is_empty())
            .map(NodeSet::from)
            .collect();
        trees.sort();
        Ok(trees)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    NotAForest { closing_edge: Edge },
    EdgeNotInGraph(Edge),
    Separated { set: usize, a: NodeId, b: NodeId },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NotAForest { closing_edge: e } => {
                write!(f, "not a forest: edge ({}, {}) closes a cycle", e.lo(), e.hi())
            }
            Violation::EdgeNotInGraph(e) => {
                write!(f, "edge ({}, {}) is not in the graph", e.lo(), e.hi())
            }
            Violation::Separated { set, a, b } => {
                write!(f, "terminal set {set}: nodes {a} and {b} are separated")
            }
        }
    }
}

/// Checks that `f` is a forest of graph edges connecting every terminal set.
pub fn verify_solution(
    inst: &SteinerForestInstance,
    f: &SolutionForest,
) -> std::result::Result<(), Vec<Violation>> {
    let mut violations = Vec::new();
    for &e in f.edges() {
        if !inst.graph().has_edge(e.lo(), e.hi()) {
            violations.push(Violation::EdgeNotInGraph(e));
        }
    }
    if !violations.is_empty() {
        return Err(violations);
    }
    let n = inst.node_count();
    let mut dsu = DisjointSets::new(n);
    for &e in f.edges() {
        if !dsu.union(e.lo(), e.hi()) {
            violations.push(Violation::NotAForest { closing_edge: e });
        }
    }
    for (i, set) in inst.terminal_sets().iter().enumerate() {
        let first = set.first().expect("terminal sets are non-empty");
        if let Some(b) = set.iter().find(|&v| !dsu.same(first, v)) {
            violations.push(Violation::Separated { set: i, a: first, b });
        }
    }
    if violations.is_empty() {
        Ok(())
    } else {
        Err(violations)
    }
}

/// Number of edges in `f`.
pub fn solution_value(inst: &SteinerForestInstance, f: &SolutionForest) -> Result<usize> {
    component_count(inst, f)?;
    Ok(f.edge_count())
}

/// Number of trees of `f`, counting untouched nodes as singletons, so that
/// `solution_value + component_count = node_count`.
pub fn component_count(inst: &SteinerForestInstance, f: &SolutionForest) -> Result<usize> {
    if let Some(e) = f.edges().iter().find(|e| e.hi() >= inst.node_count()) {
        return Err(Error::Input(format!(
            "edge ({}, {}) outside the graph",
            e.lo(),
            e.hi()
        )));
    }
    f.trees(inst.node_count())
        .map(|t| t.len())
        .map_err(|e| Error::Input(format!("edge ({}, {}) closes a cycle", e.lo(), e.hi())))
}
