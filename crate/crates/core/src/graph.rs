//! Undirected simple graphs over dense node ids and the connectivity
//! primitives the solvers are built on.

use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Node identifier. Nodes of a graph with `n` nodes are `0..n`.
pub type NodeId = usize;

/// An undirected edge stored with the smaller endpoint first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(from = "[NodeId; 2]", into = "[NodeId; 2]")]
pub struct Edge(NodeId, NodeId);

impl Edge {
    pub fn new(u: NodeId, v: NodeId) -> Self {
        if u <= v {
            Edge(u, v)
        } else {
            Edge(v, u)
        }
    }

    pub fn lo(self) -> NodeId {
        self.0
    }

    pub fn hi(self) -> NodeId {
        self.1
    }

    pub fn endpoints(self) -> (NodeId, NodeId) {
        (self.0, self.1)
    }
}

impl From<[NodeId; 2]> for Edge {
    fn from([u, v]: [NodeId; 2]) -> Self {
        Edge::new(u, v)
    }
}

impl From<Edge> for [NodeId; 2] {
    fn from(e: Edge) -> Self {
        [e.0, e.1]
    }
}

/// A sorted, duplicate-free set of node ids.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(from = "Vec<NodeId>", into = "Vec<NodeId>")]
pub struct NodeSet(Vec<NodeId>);

impl NodeSet {
    pub fn new() -> Self {
        NodeSet(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: NodeId) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[NodeId] {
        &self.0
    }

    pub fn first(&self) -> Option<NodeId> {
        self.0.first().copied()
    }

    pub fn union(&self, other: &NodeSet) -> NodeSet {
        self.iter().chain(other.iter()).collect()
    }

    pub fn is_disjoint(&self, other: &NodeSet) -> bool {
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].cmp(&other.0[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => return false,
            }
        }
        true
    }
}

impl From<Vec<NodeId>> for NodeSet {
    fn from(mut v: Vec<NodeId>) -> Self {
        v.sort_unstable();
        v.dedup();
        NodeSet(v)
    }
}

impl From<NodeSet> for Vec<NodeId> {
    fn from(s: NodeSet) -> Self {
        s.0
    }
}

impl FromIterator<NodeId> for NodeSet {
    fn from_iter<I: IntoIterator<Item = NodeId>>(iter: I) -> Self {
        NodeSet::from(iter.into_iter().collect::<Vec<_>>())
    }
}

impl<'a> IntoIterator for &'a NodeSet {
    type Item = &'a NodeId;
    type IntoIter = std::slice::Iter<'a, NodeId>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

/// Undirected simple graph. Immutable once built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    node_count: usize,
    edges: Vec<Edge>,
    adjacency: Vec<Vec<NodeId>>,
}

#[derive(Serialize, Deserialize)]
struct GraphJson {
    nodes: usize,
    edges: Vec<Edge>,
}

impl Serialize for Graph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GraphJson {
            nodes: self.node_count,
            edges: self.edges.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Graph {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = GraphJson::deserialize(d)?;
        Graph::new(raw.nodes, raw.edges).map_err(serde::de::Error::custom)
    }
}

impl Graph {
    /// Builds a graph, rejecting self-loops and out-of-range endpoints.
    /// Parallel edges are collapsed with a warning.
    pub fn new<I, E>(node_count: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = E>,
        E: Into<Edge>,
    {
        let mut set = BTreeSet::new();
        let mut duplicates = 0usize;
        for e in edges {
            let e = e.into();
            if e.hi() >= node_count {
                return Err(Error::Input(format!(
                    "edge ({}, {}) has an endpoint outside 0..{node_count}",
                    e.lo(),
                    e.hi()
                )));
            }
            if e.lo() == e.hi() {
                return Err(Error::Input(format!("self-loop on node {}", e.lo())));
            }
            if !set.insert(e) {
                duplicates += 1;
            }
        }
        if duplicates > 0 {
            log::warn!("dropped {duplicates} parallel edge(s)");
        }
        Ok(Self::from_sorted_edges(node_count, set.into_iter().collect()))
    }

    fn from_sorted_edges(node_count: usize, edges: Vec<Edge>) -> Self {
        let mut adjacency = vec![Vec::new(); node_count];
        for e in &edges {
            adjacency[e.lo()].push(e.hi());
            adjacency[e.hi()].push(e.lo());
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Graph {
            node_count,
            edges,
            adjacency,
        }
    }

    pub fn empty(node_count: usize) -> Self {
        Self::from_sorted_edges(node_count, Vec::new())
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges in ascending order.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Neighbors of `v` in ascending order.
    pub fn neighbors(&self, v: NodeId) -> &[NodeId] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: NodeId) -> usize {
        self.adjacency[v].len()
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        u < self.node_count && v < self.node_count && self.adjacency[u].binary_search(&v).is_ok()
    }

    /// Returns a copy with `extra` edges added.
    pub fn with_edges<I, E>(&self, extra: I) -> Result<Graph>
    where
        I: IntoIterator<Item = E>,
        E: Into<Edge>,
    {
        let mut all: BTreeSet<Edge> = self.edges.iter().copied().collect();
        for e in extra {
            let e = e.into();
            if e.hi() >= self.node_count || e.lo() == e.hi() {
                return Err(Error::Input(format!("invalid edge ({}, {})", e.lo(), e.hi())));
            }
            all.insert(e);
        }
        Ok(Self::from_sorted_edges(
            self.node_count,
            all.into_iter().collect(),
        ))
    }

    /// Relabels node `v` to `perm[v]`.
    pub fn permuted(&self, perm: &[NodeId]) -> Graph {
        let edges: BTreeSet<Edge> = self
            .edges
            .iter()
            .map(|e| Edge::new(perm[e.lo()], perm[e.hi()]))
            .collect();
        Self::from_sorted_edges(self.node_count, edges.into_iter().collect())
    }

    /// Per-node neighbor bitmasks, available when the graph has at most 64 nodes.
    pub fn adjacency_masks(&self) -> Option<Vec<u64>> {
        if self.node_count > 64 {
            return None;
        }
        Some(
            self.adjacency
                .iter()
                .map(|list| list.iter().fold(0u64, |m, &w| m | (1 << w)))
                .collect(),
        )
    }

    fn check_members(&self, s: &NodeSet) -> Result<()> {
        match s.iter().find(|&v| v >= self.node_count) {
            Some(v) => Err(Error::Input(format!(
                "node {v} is outside 0..{}",
                self.node_count
            ))),
            None => Ok(()),
        }
    }

    /// Breadth-first search restricted to nodes with `allowed[v]`, starting
    /// from `root`. Returns the BFS tree edges and the visit marks.
    fn restricted_bfs(&self, root: NodeId, allowed: &[bool]) -> (Vec<Edge>, Vec<bool>) {
        let mut seen = vec![false; self.node_count];
        let mut tree = Vec::new();
        let mut queue = VecDeque::from([root]);
        seen[root] = true;
        while let Some(u) = queue.pop_front() {
            for &w in &self.adjacency[u] {
                if allowed[w] && !seen[w] {
                    seen[w] = true;
                    tree.push(Edge::new(u, w));
                    queue.push_back(w);
                }
            }
        }
        (tree, seen)
    }

    /// Whether the subgraph induced by `s` is connected. The empty set counts as connected.
    pub fn is_induced_connected(&self, s: &NodeSet) -> bool {
        let Some(root) = s.first() else {
            return true;
        };
        let mut allowed = vec![false; self.node_count];
        for v in s.iter() {
            allowed[v] = true;
        }
        let (tree, _) = self.restricted_bfs(root, &allowed);
        tree.len() + 1 == s.len()
    }
}

/// Partition of all nodes into connected components, ordered by minimum member.
pub fn connected_components(g: &Graph) -> Vec<NodeSet> {
    let allowed = vec![true; g.node_count()];
    let mut assigned = vec![false; g.node_count()];
    let mut parts = Vec::new();
    for v in 0..g.node_count() {
        if assigned[v] {
            continue;
        }
        let (_, seen) = g.restricted_bfs(v, &allowed);
        let part: NodeSet = (0..g.node_count()).filter(|&w| seen[w]).collect();
        for w in part.iter() {
            assigned[w] = true;
        }
        parts.push(part);
    }
    parts
}

/// Subgraph induced by `s` together with the relabeling map.
///
/// `labels[i]` is the original id of new node `i`; new ids follow the
/// ascending order of `s`.
#[derive(Debug, Clone)]
pub struct InducedSubgraph {
    pub graph: Graph,
    pub labels: Vec<NodeId>,
}

impl InducedSubgraph {
    /// Maps an id of the original graph to the induced graph, if present.
    pub fn local_id(&self, original: NodeId) -> Option<NodeId> {
        self.labels.binary_search(&original).ok()
    }

    pub fn original_edge(&self, e: Edge) -> Edge {
        Edge::new(self.labels[e.lo()], self.labels[e.hi()])
    }
}

pub fn induced_subgraph(g: &Graph, s: &NodeSet) -> Result<InducedSubgraph> {
    g.check_members(s)?;
    let labels: Vec<NodeId> = s.iter().collect();
    let mut local = vec![usize::MAX; g.node_count()];
    for (i, &v) in labels.iter().enumerate() {
        local[v] = i;
    }
    let edges = g
        .edges()
        .iter()
        .filter(|e| local[e.lo()] != usize::MAX && local[e.hi()] != usize::MAX)
        .map(|e| Edge::new(local[e.lo()], local[e.hi()]))
        .collect::<BTreeSet<_>>();
    Ok(InducedSubgraph {
        graph: Graph::from_sorted_edges(labels.len(), edges.into_iter().collect()),
        labels,
    })
}

/// BFS spanning tree of `G[s]` rooted at the minimum node of `s`.
///
/// Fails with [`Error::Disconnected`] naming the root and the smallest
/// unreachable node when `G[s]` is not connected.
pub fn spanning_tree(g: &Graph, s: &NodeSet) -> Result<Vec<Edge>> {
    g.check_members(s)?;
    let Some(root) = s.first() else {
        return Ok(Vec::new());
    };
    let mut allowed = vec![false; g.node_count()];
    for v in s.iter() {
        allowed[v] = true;
    }
    let (mut tree, seen) = g.restricted_bfs(root, &allowed);
    if let Some(missing) = s.iter().find(|&v| !seen[v]) {
        return Err(Error::Disconnected(root, missing));
    }
    tree.sort_unstable();
    Ok(tree)
}

/// Connectivity of the node set `mask` in a graph given by neighbor bitmasks.
pub(crate) fn mask_connected(adj: &[u64], mask: u64) -> bool {
    if mask == 0 {
        return true;
    }
    let mut reached = mask & mask.wrapping_neg();
    let mut frontier = reached;
    while frontier != 0 {
        let mut next = 0u64;
        let mut f = frontier;
        while f != 0 {
            let v = f.trailing_zeros() as usize;
            f &= f - 1;
            next |= adj[v];
        }
        next &= mask & !reached;
        reached |= next;
        frontier = next;
    }
    reached == mask
}
