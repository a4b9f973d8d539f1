//! Simple undirected graphs with dense vertex ids.
//!
//! Vertices are `0..n`. Edges are stored as ordered pairs `(u, v)` with
//! `u < v` in a `BTreeSet`, so iteration order is the canonical
//! lexicographic edge order used throughout the crate.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type VertexId = usize;

/// Unordered vertex pair, stored with the smaller endpoint first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Edge(pub VertexId, pub VertexId);

impl Edge {
    /// Normalizes the endpoint order. Panics on a loop.
    pub fn new(a: VertexId, b: VertexId) -> Self {
        assert!(a != b, "loop at vertex {a}");
        if a < b {
            Edge(a, b)
        } else {
            Edge(b, a)
        }
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.0 == v || self.1 == v
    }

    pub fn other(&self, v: VertexId) -> VertexId {
        if self.0 == v {
            self.1
        } else {
            self.0
        }
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.0, self.1)
    }
}

/// A set of vertices kept as a sorted, deduplicated vector.
///
/// The derived `Ord` is the lexicographic order on the sorted member
/// lists. [`VertexSet::canonical_cmp`] orders by cardinality first.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexSet(Vec<VertexId>);

impl VertexSet {
    pub fn new() -> Self {
        VertexSet(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn insert(&mut self, v: VertexId) -> bool {
        match self.0.binary_search(&v) {
            Ok(_) => false,
            Err(pos) => {
                self.0.insert(pos, v);
                true
            }
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[VertexId] {
        &self.0
    }

    pub fn first(&self) -> Option<VertexId> {
        self.0.first().copied()
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.iter().all(|v| other.contains(v))
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        self.iter().chain(other.iter()).collect()
    }

    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        self.iter().filter(|&v| other.contains(v)).collect()
    }

    pub fn difference(&self, other: &VertexSet) -> VertexSet {
        self.iter().filter(|&v| !other.contains(v)).collect()
    }

    pub fn intersection_len(&self, other: &VertexSet) -> usize {
        self.iter().filter(|&v| other.contains(v)).count()
    }

    /// Bitmask over vertex ids. Every member must be below 64.
    pub fn to_mask(&self) -> u64 {
        self.iter().fold(0u64, |m, v| {
            assert!(v < 64, "vertex {v} does not fit a 64-bit mask");
            m | (1u64 << v)
        })
    }

    pub fn from_mask(mask: u64) -> Self {
        VertexSet((0..64).filter(|&i| mask >> i & 1 == 1).collect())
    }

    /// Cardinality first, then lexicographic.
    pub fn canonical_cmp(&self, other: &VertexSet) -> std::cmp::Ordering {
        self.len().cmp(&other.len()).then_with(|| self.0.cmp(&other.0))
    }

    /// All nonempty subsets in canonical order.
    pub fn nonempty_subsets(&self) -> Vec<VertexSet> {
        let k = self.len();
        let mut out: Vec<VertexSet> =
            (1u64..(1 << k)).map(|m| (0..k).filter(|&i| m >> i & 1 == 1).map(|i| self.0[i]).collect()).collect();
        out.sort_by(|a, b| a.canonical_cmp(b));
        out
    }
}

impl FromIterator<VertexId> for VertexSet {
    fn from_iter<I: IntoIterator<Item = VertexId>>(iter: I) -> Self {
        let mut v: Vec<VertexId> = iter.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        VertexSet(v)
    }
}

impl<const N: usize> From<[VertexId; N]> for VertexSet {
    fn from(arr: [VertexId; N]) -> Self {
        arr.into_iter().collect()
    }
}

impl From<Vec<VertexId>> for VertexSet {
    fn from(v: Vec<VertexId>) -> Self {
        v.into_iter().collect()
    }
}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: BTreeSet<Edge>,
    labels: BTreeMap<VertexId, String>,
}

impl Serialize for Graph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_file(None).serialize(s)
    }
}

/// On-disk graph layout.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GraphFile {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
    #[serde(rename = "T", default, skip_serializing_if = "Option::is_none")]
    pub t: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub labels: BTreeMap<String, String>,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph { n, edges: BTreeSet::new(), labels: BTreeMap::new() }
    }

    /// Builds a graph, rejecting loops, duplicate edges and unknown endpoints.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (VertexId, VertexId)>) -> Result<Self> {
        let mut g = Graph::empty(n);
        for (a, b) in edges {
            if a >= n {
                return Err(Error::UnknownVertex { vertex: a, n });
            }
            if b >= n {
                return Err(Error::UnknownVertex { vertex: b, n });
            }
            if a == b {
                return Err(Error::Parse(format!("loop at vertex {a}")));
            }
            if !g.edges.insert(Edge::new(a, b)) {
                return Err(Error::Parse(format!("duplicate edge {}", Edge::new(a, b))));
            }
        }
        Ok(g)
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Graph::empty(n);
        for a in 0..n {
            for b in a + 1..n {
                g.edges.insert(Edge(a, b));
            }
        }
        g
    }

    pub fn complete_bipartite(left: usize, right: usize) -> Self {
        let mut g = Graph::empty(left + right);
        for a in 0..left {
            for b in left..left + right {
                g.edges.insert(Edge(a, b));
            }
        }
        g
    }

    pub fn with_labels<S: Into<String>>(mut self, labels: impl IntoIterator<Item = (VertexId, S)>) -> Self {
        for (v, name) in labels {
            if v < self.n {
                self.labels.insert(v, name.into());
            }
        }
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.edges.iter().copied()
    }

    pub fn edge_list(&self) -> Vec<Edge> {
        self.edges.iter().copied().collect()
    }

    pub fn labels(&self) -> &BTreeMap<VertexId, String> {
        &self.labels
    }

    pub fn label(&self, v: VertexId) -> Option<&str> {
        self.labels.get(&v).map(String::as_str)
    }

    /// Label if present, otherwise the numeric id.
    pub fn display_name(&self, v: VertexId) -> String {
        self.label(v).map(str::to_owned).unwrap_or_else(|| v.to_string())
    }

    /// Looks a vertex up by label, falling back to a numeric id.
    pub fn vertex_by_name(&self, name: &str) -> Option<VertexId> {
        self.labels
            .iter()
            .find(|(_, l)| l.as_str() == name)
            .map(|(&v, _)| v)
            .or_else(|| name.parse::<usize>().ok().filter(|&v| v < self.n))
    }

    pub fn vertices(&self) -> VertexSet {
        (0..self.n).collect()
    }

    pub fn has_edge(&self, a: VertexId, b: VertexId) -> bool {
        a != b && self.edges.contains(&Edge::new(a, b))
    }

    /// Returns false when the edge was already present.
    pub fn add_edge(&mut self, a: VertexId, b: VertexId) -> Result<bool> {
        self.check_vertex(a)?;
        self.check_vertex(b)?;
        if a == b {
            return Err(Error::InvalidArgument(format!("loop at vertex {a}")));
        }
        Ok(self.edges.insert(Edge::new(a, b)))
    }

    pub fn remove_edge(&mut self, a: VertexId, b: VertexId) -> bool {
        a != b && self.edges.remove(&Edge::new(a, b))
    }

    /// Appends an isolated vertex and returns its id.
    pub fn add_vertex(&mut self) -> VertexId {
        self.n += 1;
        self.n - 1
    }

    pub fn neighbors(&self, v: VertexId) -> VertexSet {
        self.edges.iter().filter(|e| e.contains(v)).map(|e| e.other(v)).collect()
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.edges.iter().filter(|e| e.contains(v)).count()
    }

    pub fn check_vertex(&self, v: VertexId) -> Result<()> {
        if v < self.n {
            Ok(())
        } else {
            Err(Error::UnknownVertex { vertex: v, n: self.n })
        }
    }

    pub fn check_set(&self, x: &VertexSet) -> Result<()> {
        x.iter().try_for_each(|v| self.check_vertex(v))
    }

    /// Adjacency bitmasks, one per vertex. Requires `n <= 64`.
    pub fn adjacency_masks(&self) -> Vec<u64> {
        assert!(self.n <= 64, "adjacency masks need n <= 64");
        let mut adj = vec![0u64; self.n];
        for e in &self.edges {
            adj[e.0] |= 1 << e.1;
            adj[e.1] |= 1 << e.0;
        }
        adj
    }

    /// Number of edges with both endpoints in `x`.
    pub fn induced_edge_count(&self, x: &VertexSet) -> Result<usize> {
        self.check_set(x)?;
        Ok(self.edges.iter().filter(|e| x.contains(e.0) && x.contains(e.1)).count())
    }

    pub fn induced_edges(&self, x: &VertexSet) -> Vec<Edge> {
        self.edges.iter().filter(|e| x.contains(e.0) && x.contains(e.1)).copied().collect()
    }

    /// Contracts `s` to a single vertex and simplifies the result.
    pub fn contract(&self, s: &VertexSet) -> Result<Graph> {
        self.contract_with_map(s).map(|(g, _)| g)
    }

    /// Like [`Graph::contract`], also returning the old-to-new vertex map.
    ///
    /// The merged vertex takes the position of `min(s)`; the remaining
    /// vertices keep their relative order and are renumbered densely.
    pub fn contract_with_map(&self, s: &VertexSet) -> Result<(Graph, Vec<VertexId>)> {
        if s.len() < 2 {
            return Err(Error::Precondition(format!("contraction needs |S| >= 2, got {}", s.len())));
        }
        self.check_set(s)?;
        let z = s.first().unwrap();
        let mut map = vec![0; self.n];
        let mut next = 0;
        for (v, slot) in map.iter_mut().enumerate() {
            if s.contains(v) && v != z {
                continue;
            }
            *slot = next;
            next += 1;
        }
        for v in s.iter() {
            map[v] = map[z];
        }
        let mut g = Graph::empty(next);
        for e in &self.edges {
            let (a, b) = (map[e.0], map[e.1]);
            if a != b {
                g.edges.insert(Edge::new(a, b));
            }
        }
        for (&v, l) in &self.labels {
            if !s.contains(v) {
                g.labels.insert(map[v], l.clone());
            }
        }
        if !self.labels.is_empty() {
            let joined: Vec<String> = s.iter().map(|v| self.display_name(v)).collect();
            g.labels.insert(map[z], joined.join("+"));
        }
        Ok((g, map))
    }

    /// Removes the listed edges; absent edges are ignored.
    pub fn delete_edges(&self, f: &[Edge]) -> Graph {
        let mut g = self.clone();
        for e in f {
            g.edges.remove(e);
        }
        g
    }

    /// Removes every edge with both endpoints in `t`.
    pub fn minus_t_edges(&self, t: &VertexSet) -> Result<Graph> {
        self.check_set(t)?;
        let inside = self.induced_edges(t);
        Ok(self.delete_edges(&inside))
    }

    /// Spanning subgraph on the given edges (all must belong to `self`).
    pub fn spanning_subgraph(&self, edges: &[Edge]) -> Graph {
        let mut g = Graph::empty(self.n);
        g.labels = self.labels.clone();
        for e in edges {
            debug_assert!(self.edges.contains(e));
            g.edges.insert(*e);
        }
        g
    }

    /// Deletes vertex `v` and renumbers the rest densely.
    pub fn remove_vertex(&self, v: VertexId) -> Result<Graph> {
        self.check_vertex(v)?;
        let idx = |x: VertexId| if x > v { x - 1 } else { x };
        let mut g = Graph::empty(self.n - 1);
        for e in &self.edges {
            if !e.contains(v) {
                g.edges.insert(Edge::new(idx(e.0), idx(e.1)));
            }
        }
        for (&x, l) in &self.labels {
            if x != v {
                g.labels.insert(idx(x), l.clone());
            }
        }
        Ok(g)
    }

    pub fn to_file(&self, t: Option<&VertexSet>) -> GraphFile {
        GraphFile {
            n: self.n,
            edges: self.edges.iter().map(|e| [e.0, e.1]).collect(),
            t: t.map(|t| t.as_slice().to_vec()),
            labels: self.labels.iter().map(|(k, v)| (k.to_string(), v.clone())).collect(),
        }
    }

    pub fn to_json(&self, t: Option<&VertexSet>) -> String {
        serde_json::to_string(&self.to_file(t)).expect("graph serializes")
    }

    pub fn to_edge_list(&self) -> String {
        let mut s = format!("{} {}\n", self.n, self.edges.len());
        for e in &self.edges {
            s.push_str(&format!("{} {}\n", e.0, e.1));
        }
        s
    }
}

impl GraphFile {
    pub fn into_graph(self) -> Result<(Graph, Option<VertexSet>)> {
        let mut g = Graph::new(self.n, self.edges.iter().map(|e| (e[0], e[1])))?;
        for (k, v) in self.labels {
            let id: usize = k.parse().map_err(|_| Error::Parse(format!("label key {k:?} is not a vertex id")))?;
            g.check_vertex(id)?;
            g.labels.insert(id, v);
        }
        let t = match self.t {
            Some(t) => {
                let set: VertexSet = t.into();
                g.check_set(&set)?;
                Some(set)
            }
            None => None,
        };
        Ok((g, t))
    }
}

/// Parses either graph JSON or the whitespace edge-list format.
pub fn parse_graph(text: &str) -> Result<Graph> {
    parse_graph_with_t(text).map(|(g, _)| g)
}

/// As [`parse_graph`], also returning the optional `"T"` field.
pub fn parse_graph_with_t(text: &str) -> Result<(Graph, Option<VertexSet>)> {
    let trimmed = text.trim_start();
    if trimmed.starts_with('{') {
        let file: GraphFile = serde_json::from_str(trimmed).map_err(|e| Error::Parse(e.to_string()))?;
        file.into_graph()
    } else {
        parse_edge_list(trimmed).map(|g| (g, None))
    }
}

fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut nums = text.split_whitespace().map(|tok| {
        tok.parse::<usize>().map_err(|_| Error::Parse(format!("expected a non-negative integer, found {tok:?}")))
    });
    let mut next = |what: &str| nums.next().unwrap_or_else(|| Err(Error::Parse(format!("missing {what}"))));
    let n = next("vertex count")?;
    let m = next("edge count")?;
    let mut edges = Vec::with_capacity(m);
    for i in 0..m {
        let a = next(&format!("endpoint of edge {i}"))?;
        let b = next(&format!("endpoint of edge {i}"))?;
        edges.push((a, b));
    }
    if nums.next().is_some() {
        return Err(Error::Parse(format!("trailing tokens after {m} edges")));
    }
    Graph::new(n, edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn parse_triangle() {
        let g = parse_graph(r#"{"n":3,"edges":[[0,1],[1,2],[0,2]]}"#).unwrap();
        assert_eq!(g, Graph::complete(3));
    }

    #[test]
    fn parse_rejects_loop() {
        let err = parse_graph(r#"{"n":2,"edges":[[0,0]]}"#).unwrap_err();
        assert!(err.to_string().contains("loop"), "{err}");
    }

    #[test]
    fn parse_rejects_duplicate_and_out_of_range() {
        let dup = parse_graph(r#"{"n":3,"edges":[[0,1],[1,0]]}"#).unwrap_err();
        assert!(dup.to_string().contains("duplicate edge 0-1"), "{dup}");
        let oor = parse_graph(r#"{"n":3,"edges":[[0,3]]}"#).unwrap_err();
        assert_eq!(oor, Error::UnknownVertex { vertex: 3, n: 3 });
        assert!(matches!(parse_graph("{\"n\": 3"), Err(Error::Parse(_))));
    }

    #[test]
    fn parse_edge_list_format() {
        let g = parse_graph("4 3\n0 1\n1 2\n2 3\n").unwrap();
        assert_eq!(g.n(), 4);
        assert_eq!(g.edge_count(), 3);
        assert!(parse_graph("3 2\n0 1\n").is_err());
        assert!(parse_graph("3 1\n0 1 2").is_err());
    }

    #[test]
    fn parse_fig4_file() {
        let fig4 = fixtures::fig4();
        let text = fig4.graph.to_json(fig4.t.as_ref());
        let (g, t) = parse_graph_with_t(&text).unwrap();
        assert_eq!(g.n(), 8);
        assert_eq!(g.edge_count(), 13);
        assert_eq!(t, Some(VertexSet::from([0, 1, 2])));
        assert_eq!(g.label(0), Some("u"));
    }

    #[test]
    fn induced_counts() {
        let k4 = Graph::complete(4);
        assert_eq!(k4.induced_edge_count(&k4.vertices()).unwrap(), 6);
        assert_eq!(k4.induced_edge_count(&VertexSet::from([1, 2])).unwrap(), 1);
        assert!(k4.induced_edge_count(&VertexSet::from([1, 7])).is_err());

        let fig4 = fixtures::fig4().graph;
        let buv: VertexSet = ["b", "u", "v"].iter().map(|n| fig4.vertex_by_name(n).unwrap()).collect();
        assert_eq!(fig4.induced_edge_count(&buv).unwrap(), 2);
    }

    #[test]
    fn contract_examples() {
        let fig4 = fixtures::fig4().graph;
        let uv = fig4.contract(&VertexSet::from([0, 1])).unwrap();
        assert_eq!((uv.n(), uv.edge_count()), (7, 10));
        assert_eq!(uv.label(0), Some("u+v"));
        let t = fig4.contract(&VertexSet::from([0, 1, 2])).unwrap();
        assert_eq!((t.n(), t.edge_count()), (6, 9));

        let k2 = Graph::complete(3).contract(&VertexSet::from([1, 2])).unwrap();
        assert_eq!(k2, Graph::complete(2));
        assert!(Graph::complete(3).contract(&VertexSet::from([1])).is_err());
    }

    #[test]
    fn delete_and_minus_t() {
        let k4 = Graph::complete(4);
        assert_eq!(k4.delete_edges(&[Edge(0, 1)]).edge_count(), 5);
        let k3 = Graph::complete(3);
        let path = Graph::new(3, [(0, 1), (1, 2)]).unwrap();
        assert_eq!(path.delete_edges(&[Edge(0, 2)]), path);
        let one = Graph::new(4, [(0, 1), (0, 3)]).unwrap();
        let cut = one.delete_edges(&[Edge(0, 1), Edge(0, 2), Edge(1, 2)]);
        assert_eq!(cut.edge_list(), vec![Edge(0, 3)]);

        assert_eq!(k4.minus_t_edges(&VertexSet::from([0, 1, 2])).unwrap().edge_count(), 3);
        assert_eq!(k3.minus_t_edges(&k3.vertices()).unwrap().edge_count(), 0);
        let fig4 = fixtures::fig4();
        assert_eq!(fig4.graph.minus_t_edges(fig4.t.as_ref().unwrap()).unwrap(), fig4.graph);
    }

    #[test]
    fn remove_vertex_renumbers() {
        let g = Graph::new(4, [(0, 1), (1, 2), (2, 3), (0, 3)]).unwrap();
        let h = g.remove_vertex(1).unwrap();
        assert_eq!(h.n(), 3);
        assert_eq!(h.edge_list(), vec![Edge(0, 2), Edge(1, 2)]);
    }
}
