//! Hardness gadgets: Set Cover to dense Group Steiner Tree, and Vertex
//! Cover to unit-weight Steiner tree / forest. Each constructor comes with
//! a verifier that measures the claimed cost correspondence using oracles.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Edge, Graph, NodeId, NodeSet};
use crate::instance::{SolutionForest, SteinerForestInstance};
use crate::oracle::{
    oracle_group_steiner, oracle_set_cover, oracle_steiner_forest, oracle_vertex_cover, OracleCaps,
};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetCoverInstance {
    universe_size: usize,
    family: Vec<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
struct SetCoverJson {
    universe: usize,
    family: Vec<Vec<usize>>,
}

impl Serialize for SetCoverInstance {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SetCoverJson {
            universe: self.universe_size,
            family: self.family.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SetCoverInstance {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = SetCoverJson::deserialize(d)?;
        SetCoverInstance::new(raw.universe, raw.family).map_err(serde::de::Error::custom)
    }
}

impl SetCoverInstance {
    /// Members are sorted and deduplicated; each must be non-empty and
    /// inside `[0, universe_size)`. The family need not cover the universe.
    pub fn new(universe_size: usize, family: Vec<Vec<usize>>) -> Result<Self> {
        let mut clean = Vec::with_capacity(family.len());
        for (j, mut s) in family.into_iter().enumerate() {
            if s.is_empty() {
                return Err(Error::Input(format!("family member {j} is empty")));
            }
            if let Some(&u) = s.iter().find(|&&u| u >= universe_size) {
                return Err(Error::Input(format!(
                    "family member {j} contains {u}, universe has {universe_size} elements"
                )));
            }
            s.sort_unstable();
            s.dedup();
            clean.push(s);
        }
        Ok(SetCoverInstance {
            universe_size,
            family: clean,
        })
    }

    pub fn universe_size(&self) -> usize {
        self.universe_size
    }

    pub fn family(&self) -> &[Vec<usize>] {
        &self.family
    }

    pub fn is_coverable(&self) -> bool {
        (0..self.universe_size).all(|u| self.family.iter().any(|s| s.binary_search(&u).is_ok()))
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

/// A graph with node groups; a solution is a subtree touching every group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupSteinerInstance {
    graph: Graph,
    groups: Vec<NodeSet>,
}

#[derive(Serialize, Deserialize)]
struct GroupJson {
    nodes: usize,
    edges: Vec<Edge>,
    groups: Vec<NodeSet>,
}

impl Serialize for GroupSteinerInstance {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GroupJson {
            nodes: self.graph.node_count(),
            edges: self.graph.edges().to_vec(),
            groups: self.groups.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for GroupSteinerInstance {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = GroupJson::deserialize(d)?;
        let graph = Graph::new(raw.nodes, raw.edges).map_err(serde::de::Error::custom)?;
        GroupSteinerInstance::new(graph, raw.groups).map_err(serde::de::Error::custom)
    }
}

impl GroupSteinerInstance {
    pub fn new(graph: Graph, groups: Vec<NodeSet>) -> Result<Self> {
        if groups.is_empty() {
            return Err(Error::Input("need at least one group".into()));
        }
        for (i, grp) in groups.iter().enumerate() {
            if grp.is_empty() {
                return Err(Error::Input(format!("group {i} is empty")));
            }
            if let Some(v) = grp.iter().find(|&v| v >= graph.node_count()) {
                return Err(Error::Input(format!(
                    "group {i} names node {v} outside the graph"
                )));
            }
        }
        Ok(GroupSteinerInstance { graph, groups })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn groups(&self) -> &[NodeSet] {
        &self.groups
    }

    /// True when every node lies in exactly one group, i.e. there are no
    /// Steiner nodes.
    pub fn groups_partition_nodes(&self) -> bool {
        let mut hits = vec![0usize; self.graph.node_count()];
        for v in self.groups.iter().flat_map(|g| g.iter()) {
            hits[v] += 1;
        }
        hits.iter().all(|&h| h == 1)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }
}

/// Node ids in the Set Cover gadget with `n` elements and `k` sets.
#[derive(Debug, Clone, Copy)]
pub struct GroupGadgetLayout {
    pub n: usize,
    pub k: usize,
}

impl GroupGadgetLayout {
    /// Copy of element `u` attached to set `j`.
    pub fn element(&self, u: usize, j: usize) -> NodeId {
        u * self.k + j
    }

    pub fn set_node(&self, j: usize) -> NodeId {
        self.n * self.k + j
    }

    pub fn root(&self) -> NodeId {
        self.n * self.k + self.k
    }

    pub fn node_count(&self) -> usize {
        self.n * self.k + self.k + 1
    }
}

/// Groups are listed as: one per element (its k copies), then the set
/// nodes, then the root alone.
pub fn set_cover_to_group_steiner(sc: &SetCoverInstance) -> Result<GroupSteinerInstance> {
    let k = sc.family().len();
    if k == 0 {
        return Err(Error::Input("set cover family is empty".into()));
    }
    let lay = GroupGadgetLayout {
        n: sc.universe_size(),
        k,
    };
    let mut edges = Vec::new();
    for (j, s) in sc.family().iter().enumerate() {
        edges.extend(s.iter().map(|&u| Edge::new(lay.set_node(j), lay.element(u, j))));
        edges.push(Edge::new(lay.set_node(j), lay.root()));
    }
    let mut groups: Vec<NodeSet> = (0..lay.n)
        .map(|u| (0..k).map(|j| lay.element(u, j)).collect())
        .collect();
    groups.push((0..k).map(|j| lay.set_node(j)).collect());
    groups.push(NodeSet::from(vec![lay.root()]));
    GroupSteinerInstance::new(Graph::new(lay.node_count(), edges)?, groups)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GroupGadgetReport {
    pub universe_size: usize,
    /// `None` when the family does not cover the universe
    pub cover_optimum: Option<usize>,
    /// `None` when no tree touches every group
    pub group_optimum: Option<usize>,
    pub holds: bool,
}

/// Checks that the gadget's optimum equals `n` plus the cover optimum.
pub fn verify_group_gadget(sc: &SetCoverInstance, caps: &OracleCaps) -> Result<GroupGadgetReport> {
    let cover_optimum = oracle_set_cover(sc, caps)?;
    let gadget = set_cover_to_group_steiner(sc)?;
    let group_optimum = match oracle_group_steiner(&gadget, caps) {
        Ok(tree) => Some(tree.len()),
        Err(Error::NoSolution) => None,
        Err(e) => return Err(e),
    };
    let n = sc.universe_size();
    let holds = match (cover_optimum, group_optimum) {
        (Some(c), Some(g)) => g == n + c,
        (None, None) => true,
        _ => false,
    };
    Ok(GroupGadgetReport {
        universe_size: n,
        cover_optimum,
        group_optimum,
        holds,
    })
}

fn require_edges(g: &Graph) -> Result<()> {
    if g.edge_count() == 0 {
        Err(Error::Input(
            "vertex cover gadget needs a graph with at least one edge".into(),
        ))
    } else {
        Ok(())
    }
}

fn tree_gadget_graph(g: &Graph, companions: bool) -> Result<Graph> {
    let nv = g.node_count();
    let m = g.edge_count();
    let mut edges = Vec::new();
    for u in 0..nv {
        edges.extend((u + 1..nv).map(|v| Edge::new(u, v)));
    }
    for (i, e) in g.edges().iter().enumerate() {
        edges.push(Edge::new(nv + i, e.lo()));
        edges.push(Edge::new(nv + i, e.hi()));
        if companions {
            edges.push(Edge::new(nv + i, nv + m + i));
        }
    }
    Graph::new(nv + m * (1 + companions as usize), edges)
}

/// Original nodes keep their ids and form a clique; edge `i` of `g` becomes
/// node `|V| + i`, adjacent to its two endpoints. The edge nodes form the
/// single terminal set.
pub fn vertex_cover_to_steiner_tree(g: &Graph) -> Result<SteinerForestInstance> {
    require_edges(g)?;
    let nv = g.node_count();
    let terminals: NodeSet = (nv..nv + g.edge_count()).collect();
    SteinerForestInstance::new(tree_gadget_graph(g, false)?, vec![terminals])
}

/// Extends the tree gadget with a companion `|V| + |E| + i` hanging off
/// each edge node. Terminal sets: the pairs `{edge node, companion}` in
/// edge order, then all original nodes.
pub fn vertex_cover_to_steiner_forest(g: &Graph) -> Result<SteinerForestInstance> {
    require_edges(g)?;
    let nv = g.node_count();
    let m = g.edge_count();
    let mut sets: Vec<NodeSet> = (0..m).map(|i| NodeSet::from(vec![nv + i, nv + m + i])).collect();
    sets.push((0..nv).collect());
    SteinerForestInstance::new(tree_gadget_graph(g, true)?, sets)
}

/// Builds a tree for the tree gadget from a vertex cover: each edge node
/// hangs off its smallest covering endpoint and the cover is chained
/// through the clique. Uses `|E| + |C| - 1` edges.
pub fn emit_tree_from_cover(g: &Graph, cover: &[NodeId]) -> Result<SolutionForest> {
    require_edges(g)?;
    let cover: NodeSet = cover.iter().copied().collect();
    if let Some(v) = cover.iter().find(|&v| v >= g.node_count()) {
        return Err(Error::Input(format!("cover names node {v} outside the graph")));
    }
    let nv = g.node_count();
    let mut edges: Vec<Edge> = cover
        .as_slice()
        .windows(2)
        .map(|w| Edge::new(w[0], w[1]))
        .collect();
    for (i, e) in g.edges().iter().enumerate() {
        let host = if cover.contains(e.lo()) {
            e.lo()
        } else if cover.contains(e.hi()) {
            e.hi()
        } else {
            return Err(Error::Input(format!("edge {:?} is not covered", e.endpoints())));
        };
        edges.push(Edge::new(nv + i, host));
    }
    Ok(SolutionForest::new(edges))
}

/// Which count the step-two increase matches.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum IncreaseMatch {
    NodeCount,
    EdgeCount,
    Both,
    Neither,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ForestGadgetReport {
    pub node_count: usize,
    pub edge_count: usize,
    pub cover_optimum: usize,
    /// optimum of the tree gadget
    pub before: usize,
    /// optimum of the forest gadget
    pub after: usize,
    pub increase: i64,
    pub matches: IncreaseMatch,
}

/// Measures how much the forest gadget's optimum exceeds the tree gadget's.
pub fn verify_forest_gadget(g: &Graph, caps: &OracleCaps) -> Result<ForestGadgetReport> {
    let cover_optimum = oracle_vertex_cover(g, caps)?;
    let before = oracle_steiner_forest(&vertex_cover_to_steiner_tree(g)?, caps)?.edge_count();
    let after = oracle_steiner_forest(&vertex_cover_to_steiner_forest(g)?, caps)?.edge_count();
    let increase = after as i64 - before as i64;
    let nodes = increase == g.node_count() as i64;
    let edges = increase == g.edge_count() as i64;
    let matches = match (nodes, edges) {
        (true, true) => IncreaseMatch::Both,
        (true, false) => IncreaseMatch::NodeCount,
        (false, true) => IncreaseMatch::EdgeCount,
        (false, false) => IncreaseMatch::Neither,
    };
    Ok(ForestGadgetReport {
        node_count: g.node_count(),
        edge_count: g.edge_count(),
        cover_optimum,
        before,
        after,
        increase,
        matches,
    })
}
