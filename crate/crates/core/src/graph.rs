//! Vertex and edge model for a pair of graphs sharing a common subgraph.
//!
//! A [`SefeInstance`] stores one edge list over a shared vertex set. Every
//! edge carries an [`EdgeLabel`] telling whether it belongs to both graphs or
//! to exactly one of them. The four derived graphs (shared layer, `G1`, `G2`
//! and the union) are plain [`Multigraph`]s and feed the planarity test.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(pub u32);

impl VertexId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl From<usize> for VertexId {
    fn from(i: usize) -> Self {
        VertexId(u32::try_from(i).expect("vertex id exceeds u32"))
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum EdgeLabel {
    #[serde(rename = "shared")]
    Shared,
    #[serde(rename = "p1")]
    Private1,
    #[serde(rename = "p2")]
    Private2,
}

impl EdgeLabel {
    pub fn is_private(self) -> bool {
        !matches!(self, EdgeLabel::Shared)
    }

    /// The private label of the other graph. Shared maps to itself.
    pub fn opposite(self) -> EdgeLabel {
        match self {
            EdgeLabel::Shared => EdgeLabel::Shared,
            EdgeLabel::Private1 => EdgeLabel::Private2,
            EdgeLabel::Private2 => EdgeLabel::Private1,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            EdgeLabel::Shared => "shared",
            EdgeLabel::Private1 => "p1",
            EdgeLabel::Private2 => "p2",
        }
    }
}

impl fmt::Display for EdgeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for EdgeLabel {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "shared" => Ok(EdgeLabel::Shared),
            "p1" => Ok(EdgeLabel::Private1),
            "p2" => Ok(EdgeLabel::Private2),
            other => Err(GraphError::BadLabel(other.to_string())),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Edge {
    pub u: VertexId,
    pub v: VertexId,
    pub label: EdgeLabel,
}

impl Edge {
    pub fn key(&self) -> EdgeKey {
        EdgeKey::new(self.u, self.v, self.label)
    }

    pub fn has_endpoint(&self, w: VertexId) -> bool {
        self.u == w || self.v == w
    }

    pub fn shares_endpoint(&self, other: &Edge) -> bool {
        self.has_endpoint(other.u) || self.has_endpoint(other.v)
    }
}

/// Orientation-free edge address, written `u-v-label` with `u < v`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeKey {
    pub u: VertexId,
    pub v: VertexId,
    pub label: EdgeLabel,
}

impl EdgeKey {
    pub fn new(a: VertexId, b: VertexId, label: EdgeLabel) -> Self {
        let (u, v) = if a <= b { (a, b) } else { (b, a) };
        EdgeKey { u, v, label }
    }
}

impl fmt::Display for EdgeKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}-{}", self.u, self.v, self.label)
    }
}

impl FromStr for EdgeKey {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || GraphError::BadEdgeKey(s.to_string());
        let mut parts = s.splitn(3, '-');
        let u: u32 = parts.next().and_then(|p| p.parse().ok()).ok_or_else(bad)?;
        let v: u32 = parts.next().and_then(|p| p.parse().ok()).ok_or_else(bad)?;
        let label: EdgeLabel = parts.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
        if u >= v {
            return Err(bad());
        }
        Ok(EdgeKey { u: VertexId(u), v: VertexId(v), label })
    }
}

impl Serialize for EdgeKey {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for EdgeKey {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("edge {index} is a self-loop at vertex {vertex}")]
    SelfLoop { index: usize, vertex: VertexId },
    #[error("edge {index} ({u}, {v}) duplicates an earlier edge")]
    DuplicateEdge { index: usize, u: VertexId, v: VertexId },
    #[error("edge {index} has endpoint {vertex} outside [0, {n})")]
    EndpointOutOfRange { index: usize, vertex: VertexId, n: usize },
    #[error("tag for vertex {vertex} outside [0, {n})")]
    TagOutOfRange { vertex: VertexId, n: usize },
    #[error("unknown edge label {0:?}")]
    BadLabel(String),
    #[error("malformed edge key {0:?}")]
    BadEdgeKey(String),
}

/// Two graphs on the vertex set `[0, n)` described by one labeled edge list.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawInstance", into = "RawInstance")]
pub struct SefeInstance {
    n: usize,
    edges: Vec<Edge>,
    tags: BTreeMap<VertexId, String>,
}

#[derive(Serialize, Deserialize)]
struct RawInstance {
    n: usize,
    edges: Vec<(VertexId, VertexId, EdgeLabel)>,
    #[serde(default)]
    tags: BTreeMap<VertexId, String>,
}

impl TryFrom<RawInstance> for SefeInstance {
    type Error = GraphError;

    fn try_from(raw: RawInstance) -> Result<Self, Self::Error> {
        let edges = raw.edges.into_iter().map(|(u, v, label)| Edge { u, v, label }).collect();
        SefeInstance::from_parts(raw.n, edges, raw.tags)
    }
}

impl From<SefeInstance> for RawInstance {
    fn from(inst: SefeInstance) -> Self {
        RawInstance {
            n: inst.n,
            edges: inst.edges.iter().map(|e| (e.u, e.v, e.label)).collect(),
            tags: inst.tags,
        }
    }
}

impl SefeInstance {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_vertices(n: usize) -> Self {
        SefeInstance { n, ..Self::default() }
    }

    /// Builds an instance and checks the structural invariants: endpoints in
    /// range, no self-loops and no repeated undirected edge.
    pub fn from_parts(
        n: usize,
        edges: Vec<Edge>,
        tags: BTreeMap<VertexId, String>,
    ) -> Result<Self, GraphError> {
        let mut seen: HashMap<(VertexId, VertexId), usize> = HashMap::with_capacity(edges.len());
        for (index, e) in edges.iter().enumerate() {
            for w in [e.u, e.v] {
                if w.index() >= n {
                    return Err(GraphError::EndpointOutOfRange { index, vertex: w, n });
                }
            }
            if e.u == e.v {
                return Err(GraphError::SelfLoop { index, vertex: e.u });
            }
            let k = if e.u < e.v { (e.u, e.v) } else { (e.v, e.u) };
            if seen.insert(k, index).is_some() {
                return Err(GraphError::DuplicateEdge { index, u: e.u, v: e.v });
            }
        }
        if let Some((&vertex, _)) = tags.iter().find(|(v, _)| v.index() >= n) {
            return Err(GraphError::TagOutOfRange { vertex, n });
        }
        Ok(SefeInstance { n, edges, tags })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, index: usize) -> &Edge {
        &self.edges[index]
    }

    pub fn tags(&self) -> &BTreeMap<VertexId, String> {
        &self.tags
    }

    pub fn tag(&self, v: VertexId) -> Option<&str> {
        self.tags.get(&v).map(String::as_str)
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> {
        (0..self.n).map(VertexId::from)
    }

    pub fn add_vertex(&mut self, tag: impl Into<String>) -> VertexId {
        let id = VertexId::from(self.n);
        self.n += 1;
        let tag = tag.into();
        if !tag.is_empty() {
            self.tags.insert(id, tag);
        }
        id
    }

    /// Appends an edge and returns its index. Callers are gadget builders
    /// that never produce loops or repeated edges.
    pub fn add_edge(&mut self, u: VertexId, v: VertexId, label: EdgeLabel) -> usize {
        debug_assert!(u != v, "self-loop at {u}");
        debug_assert!(u.index() < self.n && v.index() < self.n);
        self.edges.push(Edge { u, v, label });
        self.edges.len() - 1
    }

    pub fn count_label(&self, label: EdgeLabel) -> usize {
        self.edges.iter().filter(|e| e.label == label).count()
    }

    /// Map from edge key to edge index.
    pub fn key_index(&self) -> HashMap<EdgeKey, usize> {
        self.edges.iter().enumerate().map(|(i, e)| (e.key(), i)).collect()
    }

    pub fn find_edge(&self, key: &EdgeKey) -> Option<usize> {
        self.edges.iter().position(|e| e.key() == *key)
    }

    /// Vertices with no incident edge of the given layer filter.
    pub fn isolated_in(&self, keep: impl Fn(EdgeLabel) -> bool) -> usize {
        let mut deg = vec![0usize; self.n];
        for e in self.edges.iter().filter(|e| keep(e.label)) {
            deg[e.u.index()] += 1;
            deg[e.v.index()] += 1;
        }
        deg.iter().filter(|&&d| d == 0).count()
    }

    /// Copy of the instance with vertex `v` renamed to `perm[v]`.
    pub fn relabeled(&self, perm: &[usize]) -> SefeInstance {
        assert_eq!(perm.len(), self.n);
        let map = |v: VertexId| VertexId::from(perm[v.index()]);
        SefeInstance {
            n: self.n,
            edges: self.edges.iter().map(|e| Edge { u: map(e.u), v: map(e.v), label: e.label }).collect(),
            tags: self.tags.iter().map(|(v, t)| (map(*v), t.clone())).collect(),
        }
    }
}

/// Undirected graph with parallel edges allowed. Only used as planarity-test
/// input, so it carries no labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Multigraph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl Multigraph {
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Result<Self, GraphError> {
        for (index, &(u, v)) in edges.iter().enumerate() {
            for w in [u, v] {
                if w >= n {
                    return Err(GraphError::EndpointOutOfRange { index, vertex: VertexId::from(w), n });
                }
            }
        }
        Ok(Multigraph { n, edges })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Drops self-loops and collapses parallel edges. Isolated vertices stay.
    pub fn simplify(&self) -> Multigraph {
        let mut es: Vec<(usize, usize)> = self
            .edges
            .iter()
            .filter(|(u, v)| u != v)
            .map(|&(u, v)| if u < v { (u, v) } else { (v, u) })
            .collect();
        es.sort_unstable();
        es.dedup();
        Multigraph { n: self.n, edges: es }
    }

    pub fn relabeled(&self, perm: &[usize]) -> Multigraph {
        assert_eq!(perm.len(), self.n);
        Multigraph { n: self.n, edges: self.edges.iter().map(|&(u, v)| (perm[u], perm[v])).collect() }
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut adj = vec![Vec::new(); self.n];
        for &(u, v) in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        let mut seen = vec![false; self.n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for &w in &adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == self.n
    }
}

/// The four graphs derived from an instance, all on the same vertex set.
#[derive(Clone, Debug)]
pub struct Layers {
    pub shared: Multigraph,
    pub g1: Multigraph,
    pub g2: Multigraph,
    pub union: Multigraph,
}

pub fn split_layers(inst: &SefeInstance) -> Result<Layers, GraphError> {
    let n = inst.vertex_count();
    let pick = |keep: &dyn Fn(EdgeLabel) -> bool| {
        let es = inst
            .edges()
            .iter()
            .filter(|e| keep(e.label))
            .map(|e| (e.u.index(), e.v.index()))
            .collect();
        Multigraph::new(n, es)
    };
    Ok(Layers {
        shared: pick(&|l| l == EdgeLabel::Shared)?,
        g1: pick(&|l| l != EdgeLabel::Private2)?,
        g2: pick(&|l| l != EdgeLabel::Private1)?,
        union: pick(&|_| true)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(i: u32) -> VertexId {
        VertexId(i)
    }

    #[test]
    fn split_layers_partitions_by_label() {
        let mut inst = SefeInstance::with_vertices(3);
        inst.add_edge(v(0), v(1), EdgeLabel::Shared);
        inst.add_edge(v(1), v(2), EdgeLabel::Private1);
        inst.add_edge(v(2), v(0), EdgeLabel::Private2);
        let l = split_layers(&inst).unwrap();
        assert_eq!(l.shared.edge_count(), 1);
        assert_eq!(l.g1.edge_count(), 2);
        assert_eq!(l.g2.edge_count(), 2);
        assert_eq!(l.union.edge_count(), 3);
        for g in [&l.shared, &l.g1, &l.g2, &l.union] {
            assert_eq!(g.vertex_count(), 3);
        }
    }

    #[test]
    fn split_layers_of_edgeless_instance() {
        let inst = SefeInstance::with_vertices(3);
        let l = split_layers(&inst).unwrap();
        for g in [&l.shared, &l.g1, &l.g2, &l.union] {
            assert_eq!(g.vertex_count(), 3);
            assert_eq!(g.edge_count(), 0);
        }
    }

    #[test]
    fn from_parts_rejects_malformed_edges() {
        let e = |a, b| Edge { u: v(a), v: v(b), label: EdgeLabel::Shared };
        assert!(matches!(
            SefeInstance::from_parts(2, vec![e(0, 2)], BTreeMap::new()),
            Err(GraphError::EndpointOutOfRange { .. })
        ));
        assert!(matches!(
            SefeInstance::from_parts(2, vec![e(1, 1)], BTreeMap::new()),
            Err(GraphError::SelfLoop { .. })
        ));
        assert!(matches!(
            SefeInstance::from_parts(2, vec![e(0, 1), e(1, 0)], BTreeMap::new()),
            Err(GraphError::DuplicateEdge { index: 1, .. })
        ));
    }

    #[test]
    fn json_preserves_edge_order_and_tags() {
        let text = r#"{"n":4,"edges":[[3,1,"p2"],[0,1,"shared"],[2,0,"p1"]],"tags":{"0":"pole:s","3":"x"}}"#;
        let inst: SefeInstance = serde_json::from_str(text).unwrap();
        assert_eq!(inst.edge(0).label, EdgeLabel::Private2);
        assert_eq!(inst.edge(0).u, v(3));
        assert_eq!(inst.tag(v(0)), Some("pole:s"));
        let back = serde_json::to_string(&inst).unwrap();
        assert_eq!(back, text);
    }

    #[test]
    fn json_rejects_duplicate_edges() {
        let text = r#"{"n":2,"edges":[[0,1,"p1"],[1,0,"p2"]]}"#;
        assert!(serde_json::from_str::<SefeInstance>(text).is_err());
    }

    #[test]
    fn edge_keys_round_trip_and_normalize() {
        let k = EdgeKey::new(v(7), v(2), EdgeLabel::Private1);
        assert_eq!(k.to_string(), "2-7-p1");
        assert_eq!("2-7-p1".parse::<EdgeKey>().unwrap(), k);
        assert!("7-2-p1".parse::<EdgeKey>().is_err());
        assert!("2-7-p3".parse::<EdgeKey>().is_err());
        assert!("2-p1".parse::<EdgeKey>().is_err());
    }

    #[test]
    fn simplify_keeps_isolated_vertices() {
        let g = Multigraph::new(4, vec![(0, 1), (1, 0), (0, 1), (2, 2)]).unwrap();
        let s = g.simplify();
        assert_eq!(s.vertex_count(), 4);
        assert_eq!(s.edges(), &[(0, 1)]);
    }
}
