//! Approximation for pairwise 1/2-dense instances without Steiner nodes,
//! by reduction to 3-Set Packing over the non-trivial terminal sets.
//!
//! Trivial sets get their own trees. Connected pairs and triplets of the
//! remaining sets form the packing family; every packed member becomes a
//! tree, and sets left over are attached to one existing tree. The
//! resulting value is within `(4 - beta) / 3` of optimal when the packing
//! backend guarantees `beta`.

use crate::error::{Error, Result};
use crate::graph::{spanning_tree, Edge, NodeSet};
use crate::instance::{measure_density, trivial_sets, SolutionForest, SteinerForestInstance};
use crate::packing::{packing_guarantee, PackingBackend, PackingInstance};
use crate::rational::Rational;
use crate::structure::{is_triplet, pair_connected};

/// Packing instance over the non-trivial sets of a Steiner Forest instance.
#[derive(Debug, Clone)]
pub struct PackingReduction {
    pub packing: PackingInstance,
    /// Packing element `e` stands for terminal set `universe_sets[e]`.
    pub universe_sets: Vec<usize>,
}

impl PackingReduction {
    /// Terminal-set indices of family member `idx`.
    pub fn member_sets(&self, idx: usize) -> Vec<usize> {
        self.packing
            .member(idx)
            .iter()
            .map(|&e| self.universe_sets[e])
            .collect()
    }
}

pub fn check_half_dense_preconditions(inst: &SteinerForestInstance) -> Result<()> {
    if inst.has_steiner_nodes() {
        return Err(Error::Precondition(
            "packing solver requires an instance without Steiner nodes".into(),
        ));
    }
    let report = measure_density(inst);
    if report.delta.is_some_and(|d| d < Rational::new(1, 2)) {
        return Err(Error::Precondition(format!(
            "packing solver requires density >= 1/2, measured {report}"
        )));
    }
    Ok(())
}

fn reduction_over(inst: &SteinerForestInstance, universe_sets: Vec<usize>) -> Result<PackingReduction> {
    let m = universe_sets.len();
    let mut family = Vec::new();
    for a in 0..m {
        for b in a + 1..m {
            if pair_connected(inst, universe_sets[a], universe_sets[b])? {
                family.push(vec![a, b]);
            }
        }
    }
    for a in 0..m {
        for b in a + 1..m {
            for c in b + 1..m {
                if is_triplet(inst, universe_sets[a], universe_sets[b], universe_sets[c])? {
                    family.push(vec![a, b, c]);
                }
            }
        }
    }
    Ok(PackingReduction {
        packing: PackingInstance::new(m, family)?,
        universe_sets,
    })
}

/// Universe = non-trivial sets; family = connected pairs, then triplets,
/// each in lexicographic order.
pub fn build_packing_instance(inst: &SteinerForestInstance) -> Result<PackingReduction> {
    check_half_dense_preconditions(inst)?;
    let trivial = trivial_sets(inst);
    let universe = (0..inst.set_count()).filter(|i| !trivial.contains(i)).collect();
    reduction_over(inst, universe)
}

/// How trivial sets are handled before the packing step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TrivialHandling {
    /// Every trivial set becomes its own tree and leaves the universe.
    #[default]
    AllSeparate,
    /// All trivial sets but the first become their own trees; the first one
    /// stays in the packing universe and gets its own tree only if unpacked.
    KeepOne,
}

/// Solution plus the quantities of the ratio analysis.
#[derive(Debug, Clone)]
pub struct HalfDenseOutcome {
    pub forest: SolutionForest,
    pub trivial_count: usize,
    pub packing_size: usize,
    pub leftover_sets: Vec<usize>,
}

pub fn solve_half_dense(inst: &SteinerForestInstance, backend: PackingBackend) -> Result<SolutionForest> {
    solve_half_dense_with(inst, backend, TrivialHandling::AllSeparate).map(|o| o.forest)
}

pub fn solve_half_dense_with(
    inst: &SteinerForestInstance,
    backend: PackingBackend,
    handling: TrivialHandling,
) -> Result<HalfDenseOutcome> {
    check_half_dense_preconditions(inst)?;
    let mut trivial = trivial_sets(inst);
    let mut universe: Vec<usize> = (0..inst.set_count()).filter(|i| !trivial.contains(i)).collect();
    let kept_trivial = match handling {
        TrivialHandling::KeepOne if !trivial.is_empty() => {
            let first = trivial.remove(0);
            universe.insert(universe.partition_point(|&x| x < first), first);
            Some(first)
        }
        _ => None,
    };
    let reduction = reduction_over(inst, universe)?;
    let packing = backend.solve(&reduction.packing)?;
    if !reduction.packing.is_packing(&packing.chosen) {
        return Err(Error::Invariant(
            "packing backend returned overlapping members".into(),
        ));
    }

    if packing.is_empty()
        && trivial.is_empty()
        && kept_trivial.is_none()
        && !reduction.universe_sets.is_empty()
    {
        return Err(Error::NoSolution);
    }

    let mut trees: Vec<NodeSet> = trivial.iter().map(|&i| inst.terminal_set(i).clone()).collect();
    let mut covered = vec![false; inst.set_count()];
    for &i in &trivial {
        covered[i] = true;
    }
    for &c in &packing.chosen {
        let sets = reduction.member_sets(c);
        for &i in &sets {
            covered[i] = true;
        }
        trees.push(inst.union_of(&sets));
    }
    if let Some(t) = kept_trivial.filter(|&t| !covered[t]) {
        covered[t] = true;
        trees.push(inst.terminal_set(t).clone());
    }

    let leftover_sets: Vec<usize> = (0..inst.set_count()).filter(|&i| !covered[i]).collect();
    if !leftover_sets.is_empty() {
        let leftover = inst.union_of(&leftover_sets);
        let g = inst.graph();
        let host = trees
            .iter()
            .position(|tree| {
                leftover
                    .iter()
                    .all(|t| g.neighbors(t).iter().any(|&w| tree.contains(w)))
            })
            .ok_or_else(|| Error::Invariant("no tree gives every leftover terminal a neighbor".into()))?;
        trees[host] = trees[host].union(&leftover);
    }

    let mut edges: Vec<Edge> = Vec::with_capacity(inst.node_count());
    for tree in &trees {
        edges.extend(spanning_tree(inst.graph(), tree).map_err(|e| {
            Error::Invariant(format!("tree over {:?} is disconnected: {e}", tree.as_slice()))
        })?);
    }
    Ok(HalfDenseOutcome {
        forest: SolutionForest::new(edges),
        trivial_count: trivial.len() + usize::from(kept_trivial.is_some()),
        packing_size: packing.len(),
        leftover_sets,
    })
}

/// Approximation ratio `(4 - beta) / 3` implied by a packing guarantee `beta`.
pub fn ratio_bound(beta: Rational) -> Result<Rational> {
    if beta <= Rational::from_integer(0) || beta > Rational::from_integer(1) {
        return Err(Error::Input(format!("beta must lie in (0, 1], got {beta}")));
    }
    Ok((Rational::from_integer(4) - beta) / Rational::from_integer(3))
}

/// Ratio bound for a concrete backend.
pub fn backend_ratio_bound(backend: PackingBackend) -> Rational {
    ratio_bound(packing_guarantee(backend)).expect("guarantees lie in (0, 1]")
}
