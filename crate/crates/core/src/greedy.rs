//! Exact greedy solver for pairwise (>1/2)-dense instances without Steiner nodes.
//!
//! Above one half, any two terminal sets induce a connected subgraph. An
//! optimal forest then consists of one tree per trivial set plus trees
//! spanning pairs of the remaining sets, with a single leftover set folded
//! into an existing tree.

use crate::error::{Error, Result};
use crate::graph::{spanning_tree, Edge, NodeSet};
use crate::instance::{measure_density, trivial_sets, SolutionForest, SteinerForestInstance};
use crate::rational::Rational;

/// Checks the solver's preconditions: no Steiner nodes and density strictly
/// above one half (or no cross-set constraint at all).
pub fn check_greedy_preconditions(inst: &SteinerForestInstance) -> Result<()> {
    if inst.has_steiner_nodes() {
        return Err(Error::Precondition(
            "greedy solver requires an instance without Steiner nodes".into(),
        ));
    }
    let report = measure_density(inst);
    if let Some(d) = report.delta {
        if d <= Rational::new(1, 2) {
            return Err(Error::Precondition(format!(
                "greedy solver requires density > 1/2, measured {report}"
            )));
        }
    }
    Ok(())
}

pub fn solve_greedy(inst: &SteinerForestInstance) -> Result<SolutionForest> {
    check_greedy_preconditions(inst)?;
    let g = inst.graph();

    let trivial = trivial_sets(inst);
    if inst.set_count() == 1 && trivial.is_empty() {
        return Err(Error::NoSolution);
    }

    // Each tree is kept as its vertex set and realized at the end.
    let mut trees: Vec<NodeSet> = trivial.iter().map(|&i| inst.terminal_set(i).clone()).collect();
    let mut last_pair: Option<usize> = None;

    let rest: Vec<usize> = (0..inst.set_count()).filter(|i| !trivial.contains(i)).collect();
    let mut chunks = rest.chunks_exact(2);
    for pair in &mut chunks {
        trees.push(inst.union_of(pair));
        last_pair = Some(trees.len() - 1);
    }
    if let [leftover] = chunks.remainder() {
        let host = last_pair.unwrap_or(0);
        trees[host] = trees[host].union(inst.terminal_set(*leftover));
    }

    let mut edges: Vec<Edge> = Vec::with_capacity(inst.node_count());
    for tree in &trees {
        let t = spanning_tree(g, tree).map_err(|e| {
            Error::Invariant(format!(
                "greedy tree over {:?} is disconnected: {e}",
                tree.as_slice()
            ))
        })?;
        edges.extend(t);
    }
    Ok(SolutionForest::new(edges))
}
