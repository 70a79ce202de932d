//! Exhaustive solvers used as ground truth at desk scale.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::graph::{mask_connected, spanning_tree, Edge, Graph, NodeSet};
use crate::instance::{SolutionForest, SteinerForestInstance};
use crate::reductions::{GroupSteinerInstance, SetCoverInstance};

/// Size limits for the exhaustive solvers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleCaps {
    pub max_sets: usize,
    pub max_steiner: usize,
    pub max_nodes: usize,
    pub max_group_nodes: usize,
    pub max_cover_universe: usize,
    pub max_cover_family: usize,
    pub max_vc_nodes: usize,
}

impl Default for OracleCaps {
    fn default() -> Self {
        OracleCaps {
            max_sets: 8,
            max_steiner: 10,
            max_nodes: 18,
            max_group_nodes: 24,
            max_cover_universe: 12,
            max_cover_family: 20,
            max_vc_nodes: 10,
        }
    }
}

/// Environment variable holding cap overrides, e.g. `sets=6,nodes=20`.
pub const CAPS_ENV: &str = "DENSESF_ORACLE_CAPS";

impl OracleCaps {
    /// Applies `key=value` overrides separated by commas.
    pub fn with_overrides(mut self, overrides: &str) -> Result<Self> {
        for item in overrides.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (key, value) = item
                .split_once('=')
                .ok_or_else(|| Error::Input(format!("cap override {item:?} is not key=value")))?;
            let value: usize = value
                .trim()
                .parse()
                .map_err(|_| Error::Input(format!("cap override {item:?} needs an integer")))?;
            let slot = match key.trim() {
                "sets" => &mut self.max_sets,
                "steiner" => &mut self.max_steiner,
                "nodes" => &mut self.max_nodes,
                "group_nodes" => &mut self.max_group_nodes,
                "cover_universe" => &mut self.max_cover_universe,
                "cover_family" => &mut self.max_cover_family,
                "vc_nodes" => &mut self.max_vc_nodes,
                other => return Err(Error::Input(format!("unknown oracle cap {other:?}"))),
            };
            *slot = value;
        }
        Ok(self)
    }

    /// Defaults, overridden by [`CAPS_ENV`] when set.
    pub fn from_env() -> Result<Self> {
        match std::env::var(CAPS_ENV) {
            Ok(text) => OracleCaps::default().with_overrides(&text),
            Err(_) => Ok(OracleCaps::default()),
        }
    }
}

fn limit(what: &str, value: usize, cap: usize) -> Result<()> {
    if value > cap {
        Err(Error::SizeLimit(format!(
            "oracle handles {what} <= {cap}, got {value}"
        )))
    } else {
        Ok(())
    }
}

const INF: usize = usize::MAX / 4;

/// For every family of terminal sets (bitmask over set indices), the
/// fewest Steiner nodes that make the family's union connected.
struct BlockTable {
    set_masks: Vec<u64>,
    /// `steiner[m]`: node mask of the cheapest Steiner subset for family `m`
    steiner: Vec<Option<u64>>,
}

impl BlockTable {
    fn build(inst: &SteinerForestInstance, caps: &OracleCaps) -> Result<Self> {
        let n = inst.node_count();
        let k = inst.set_count();
        let steiner_nodes = inst.steiner_nodes();
        limit("nodes", n, caps.max_nodes.min(64))?;
        limit("terminal sets", k, caps.max_sets.min(20))?;
        limit("Steiner nodes", steiner_nodes.len(), caps.max_steiner.min(24))?;

        let adj = inst.graph().adjacency_masks().expect("node count checked");
        let set_masks: Vec<u64> = inst
            .terminal_sets()
            .iter()
            .map(|s| s.iter().fold(0u64, |m, v| m | 1 << v))
            .collect();

        let s = steiner_nodes.len();
        let mut subsets: Vec<u32> = (0..1u32 << s).collect();
        subsets.sort_by_key(|x| (x.count_ones(), *x));
        let expand = |bits: u32| -> u64 {
            steiner_nodes
                .iter()
                .enumerate()
                .filter(|(i, _)| bits >> i & 1 == 1)
                .fold(0u64, |m, (_, v)| m | 1 << v)
        };

        let families = 1usize << k;
        let union: Vec<u64> = (0..families)
            .map(|fam| {
                (0..k)
                    .filter(|i| fam >> i & 1 == 1)
                    .fold(0, |m, i| m | set_masks[i])
            })
            .collect();
        let mut steiner = vec![None; families];
        let mut open: Vec<usize> = (1..families).collect();
        for bits in subsets {
            if open.is_empty() {
                break;
            }
            let extra = expand(bits);
            open.retain(|&fam| {
                if mask_connected(&adj, union[fam] | extra) {
                    steiner[fam] = Some(extra);
                    false
                } else {
                    true
                }
            });
        }
        Ok(BlockTable { set_masks, steiner })
    }

    fn nodes(&self, fam: usize) -> Option<u64> {
        let terminals = (0..self.set_masks.len())
            .filter(|i| fam >> i & 1 == 1)
            .fold(0u64, |m, i| m | self.set_masks[i]);
        self.steiner[fam].map(|x| terminals | x)
    }

    fn cost(&self, fam: usize) -> usize {
        self.nodes(fam).map_or(INF, |m| m.count_ones() as usize - 1)
    }
}

fn mask_to_set(mask: u64) -> NodeSet {
    (0..64).filter(|v| mask >> v & 1 == 1).collect()
}

fn realize(g: &Graph, blocks: Vec<u64>) -> Result<SolutionForest> {
    // Blocks chosen independently may share Steiner nodes; merging them
    // never costs more, so fold overlapping blocks together.
    let mut merged: Vec<u64> = Vec::new();
    for mut b in blocks {
        while let Some(pos) = merged.iter().position(|&m| m & b != 0) {
            b |= merged.swap_remove(pos);
        }
        merged.push(b);
    }
    merged.sort_unstable();
    let mut edges: Vec<Edge> = Vec::new();
    for m in merged {
        edges.extend(
            spanning_tree(g, &mask_to_set(m))
                .map_err(|e| Error::Invariant(format!("oracle block disconnected: {e}")))?,
        );
    }
    Ok(SolutionForest::new(edges))
}

/// Minimum-edge Steiner forest, or [`Error::NoSolution`] when none exists.
///
/// Partitions the terminal sets into blocks; each block is charged the
/// fewest Steiner nodes that connect it. Letting blocks reuse Steiner
/// nodes does not change the optimum, because two blocks sharing a node
/// can always be merged at no extra cost.
pub fn oracle_steiner_forest(inst: &SteinerForestInstance, caps: &OracleCaps) -> Result<SolutionForest> {
    let table = BlockTable::build(inst, caps)?;
    let k = inst.set_count();
    let full = (1usize << k) - 1;
    let mut best = vec![INF; full + 1];
    let mut choice = vec![0usize; full + 1];
    best[0] = 0;
    for fam in 1..=full {
        let low = fam & fam.wrapping_neg();
        let mut sub = fam;
        while sub > 0 {
            if sub & low != 0 {
                let c = table.cost(sub).saturating_add(best[fam ^ sub]);
                if c < best[fam] {
                    best[fam] = c;
                    choice[fam] = sub;
                }
            }
            sub = (sub - 1) & fam;
        }
    }
    if best[full] >= INF {
        return Err(Error::NoSolution);
    }
    let mut blocks = Vec::new();
    let mut rest = full;
    while rest != 0 {
        let b = choice[rest];
        blocks.push(table.nodes(b).expect("chosen blocks are connectable"));
        rest ^= b;
    }
    let forest = realize(inst.graph(), blocks)?;
    if forest.edge_count() != best[full] {
        return Err(Error::Invariant(format!(
            "oracle forest has {} edges, table says {}",
            forest.edge_count(),
            best[full]
        )));
    }
    Ok(forest)
}

/// Cheapest single tree containing every terminal.
pub fn oracle_single_tree(inst: &SteinerForestInstance, caps: &OracleCaps) -> Result<SolutionForest> {
    let table = BlockTable::build(inst, caps)?;
    let full = (1usize << inst.set_count()) - 1;
    match table.nodes(full) {
        Some(m) => realize(inst.graph(), vec![m]),
        None => Err(Error::NoSolution),
    }
}

/// Minimum-edge subtree touching every group, or [`Error::NoSolution`].
///
/// Enumerates connected node sets (each exactly once) in growing order,
/// pruning any set that cannot beat the best cover found so far.
pub fn oracle_group_steiner(gi: &GroupSteinerInstance, caps: &OracleCaps) -> Result<Vec<Edge>> {
    let g = gi.graph();
    let n = g.node_count();
    limit("group Steiner nodes", n, caps.max_group_nodes.min(64))?;
    let adj = g.adjacency_masks().expect("node count checked");
    let groups: Vec<u64> = gi
        .groups()
        .iter()
        .map(|s| s.iter().fold(0u64, |m, v| m | 1 << v))
        .collect();
    let disjoint = {
        let mut seen = 0u64;
        groups.iter().all(|&m| {
            let ok = seen & m == 0;
            seen |= m;
            ok
        })
    };

    struct Search<'a> {
        adj: &'a [u64],
        groups: &'a [u64],
        disjoint: bool,
        best: Option<u64>,
    }

    impl Search<'_> {
        fn best_len(&self) -> usize {
            self.best.map_or(usize::MAX, |b| b.count_ones() as usize)
        }

        fn missing(&self, sub: u64) -> usize {
            let uncovered = self.groups.iter().filter(|&&m| m & sub == 0).count();
            if self.disjoint {
                uncovered
            } else {
                uncovered.min(1)
            }
        }

        fn extend(&mut self, sub: u64, border: u64, mut ext: u64, root: usize) {
            let missing = self.missing(sub);
            if missing == 0 {
                if (sub.count_ones() as usize) < self.best_len() {
                    self.best = Some(sub);
                }
                return;
            }
            if sub.count_ones() as usize + missing >= self.best_len() {
                return;
            }
            while ext != 0 {
                let w = ext.trailing_zeros() as usize;
                ext &= ext - 1;
                let above_root = !((2u64 << root) - 1);
                let fresh = self.adj[w] & !sub & !border & above_root;
                self.extend(sub | 1 << w, border | self.adj[w], ext | fresh, root);
            }
        }
    }

    let mut search = Search {
        adj: &adj,
        groups: &groups,
        disjoint,
        best: None,
    };
    for (root, &nbrs) in adj.iter().enumerate() {
        let above_root = !((2u64 << root) - 1);
        search.extend(1 << root, nbrs | 1 << root, nbrs & above_root, root);
    }
    let best = search.best.ok_or(Error::NoSolution)?;
    spanning_tree(g, &mask_to_set(best))
}

/// Minimum number of family members covering the universe; `None` if the
/// family does not cover it.
pub fn oracle_set_cover(sc: &SetCoverInstance, caps: &OracleCaps) -> Result<Option<usize>> {
    limit("set cover universe", sc.universe_size(), caps.max_cover_universe)?;
    limit(
        "set cover family",
        sc.family().len(),
        caps.max_cover_family.min(30),
    )?;
    let full = (1u64 << sc.universe_size()) - 1;
    let masks: Vec<u64> = sc
        .family()
        .iter()
        .map(|s| s.iter().fold(0u64, |m, &u| m | 1 << u))
        .collect();
    let mut best: Option<usize> = None;
    for pick in 0u32..1 << masks.len() {
        let size = pick.count_ones() as usize;
        if best.is_some_and(|b| size >= b) {
            continue;
        }
        let covered = (0..masks.len())
            .filter(|i| pick >> i & 1 == 1)
            .fold(0u64, |m, i| m | masks[i]);
        if covered == full {
            best = Some(size);
        }
    }
    Ok(best)
}

/// Minimum vertex cover size by subset enumeration.
pub fn oracle_vertex_cover(g: &Graph, caps: &OracleCaps) -> Result<usize> {
    limit("vertex cover nodes", g.node_count(), caps.max_vc_nodes.min(30))?;
    let mut best = g.node_count();
    for pick in 0u32..1 << g.node_count() {
        let size = pick.count_ones() as usize;
        if size < best
            && g.edges()
                .iter()
                .all(|e| pick >> e.lo() & 1 == 1 || pick >> e.hi() & 1 == 1)
        {
            best = size;
        }
    }
    Ok(best)
}

/// Vertex covers of `g` of minimum size, smallest first (used for audits).
pub fn minimum_vertex_covers(g: &Graph, caps: &OracleCaps) -> Result<Vec<BTreeSet<usize>>> {
    let best = oracle_vertex_cover(g, caps)?;
    Ok((0u32..1 << g.node_count())
        .filter(|pick| pick.count_ones() as usize == best)
        .filter(|pick| {
            g.edges()
                .iter()
                .all(|e| pick >> e.lo() & 1 == 1 || pick >> e.hi() & 1 == 1)
        })
        .map(|pick| (0..g.node_count()).filter(|v| pick >> v & 1 == 1).collect())
        .collect())
}
