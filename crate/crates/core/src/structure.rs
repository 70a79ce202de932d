//! Structural checks on terminal-set families: pair connectivity, the
//! two-component split of half-dense families, triplets, and tree ranks.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::graph::{connected_components, induced_subgraph, NodeSet};
use crate::instance::{verify_solution, SolutionForest, SteinerForestInstance};

/// Whether `G[T_i ∪ T_j]` is connected.
pub fn pair_connected(inst: &SteinerForestInstance, i: usize, j: usize) -> Result<bool> {
    inst.check_set_index(i)?;
    inst.check_set_index(j)?;
    if i == j {
        return Err(Error::Input(format!(
            "pair needs two distinct sets, got ({i}, {i})"
        )));
    }
    Ok(inst.graph().is_induced_connected(&inst.union_of(&[i, j])))
}

/// Components of the graph induced by a family of terminal sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilySplit {
    pub components: Vec<NodeSet>,
}

impl FamilySplit {
    pub fn is_connected(&self) -> bool {
        self.components.len() == 1
    }
}

/// Components of `G[∪ family]`.
///
/// On a half-dense instance this is one component, or two components that
/// each hold exactly half of every member set. Anything else is reported
/// as [`Error::Invariant`].
pub fn family_components(inst: &SteinerForestInstance, family: &[usize]) -> Result<FamilySplit> {
    if family.len() < 2 {
        return Err(Error::Input("family needs at least two sets".into()));
    }
    for &i in family {
        inst.check_set_index(i)?;
    }
    let union = inst.union_of(family);
    let sub = induced_subgraph(inst.graph(), &union)?;
    let components: Vec<NodeSet> = connected_components(&sub.graph)
        .into_iter()
        .map(|part| part.iter().map(|v| sub.labels[v]).collect())
        .collect();
    match components.len() {
        1 => {}
        2 => {
            for &i in family {
                let size = inst.terminal_set(i).len();
                let inside = components[0]
                    .iter()
                    .filter(|&v| inst.set_of(v) == Some(i))
                    .count();
                if 2 * inside != size {
                    return Err(Error::Invariant(format!(
                        "set {i} splits {inside}/{} across the two components",
                        size - inside
                    )));
                }
            }
        }
        c => {
            return Err(Error::Invariant(format!(
                "family induces {c} components; the instance is not half-dense"
            )))
        }
    }
    Ok(FamilySplit { components })
}

/// Whether `G[T_i ∪ T_j ∪ T_l]` is connected.
pub fn is_triplet(inst: &SteinerForestInstance, i: usize, j: usize, l: usize) -> Result<bool> {
    for x in [i, j, l] {
        inst.check_set_index(x)?;
    }
    if i == j || j == l || i == l {
        return Err(Error::Input(format!(
            "triplet indices must be distinct: ({i}, {j}, {l})"
        )));
    }
    Ok(inst.graph().is_induced_connected(&inst.union_of(&[i, j, l])))
}

/// Lexicographically first triplet among `family` (in the given order).
pub fn find_triplet(inst: &SteinerForestInstance, family: &[usize]) -> Option<[usize; 3]> {
    let m = family.len();
    for a in 0..m {
        for b in a + 1..m {
            for c in b + 1..m {
                let (i, j, l) = (family[a], family[b], family[c]);
                if is_triplet(inst, i, j, l).unwrap_or(false) {
                    return Some([i, j, l]);
                }
            }
        }
    }
    None
}

/// Number of solution trees per rank, where the rank of a tree is the number
/// of terminal sets it fully contains. Isolated nodes of rank 0 are skipped.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RankHistogram {
    pub counts: BTreeMap<usize, usize>,
}

impl RankHistogram {
    pub fn count(&self, rank: usize) -> usize {
        self.counts.get(&rank).copied().unwrap_or(0)
    }

    pub fn max_rank(&self) -> usize {
        self.counts.keys().next_back().copied().unwrap_or(0)
    }

    pub fn tree_count(&self) -> usize {
        self.counts.values().sum()
    }
}

/// Rank of every tree of `f`, paired with its vertex set.
pub fn tree_ranks(inst: &SteinerForestInstance, f: &SolutionForest) -> Result<Vec<(NodeSet, usize)>> {
    let trees = f
        .trees(inst.node_count())
        .map_err(|e| Error::Input(format!("edge ({}, {}) closes a cycle", e.lo(), e.hi())))?;
    Ok(trees
        .into_iter()
        .map(|tree| {
            let rank = inst
                .terminal_sets()
                .iter()
                .filter(|s| s.iter().all(|v| tree.contains(v)))
                .count();
            (tree, rank)
        })
        .filter(|(tree, rank)| *rank > 0 || tree.len() > 1)
        .collect())
}

pub fn rank_histogram(inst: &SteinerForestInstance, f: &SolutionForest) -> Result<RankHistogram> {
    if let Err(violations) = verify_solution(inst, f) {
        return Err(Error::Input(format!("infeasible forest: {}", violations[0])));
    }
    let mut counts = BTreeMap::new();
    for (_, rank) in tree_ranks(inst, f)? {
        *counts.entry(rank).or_insert(0) += 1;
    }
    Ok(RankHistogram { counts })
}
