//! Bundled graphs: the seven three-coincident base cases built on a six
//! cycle, the contraction counterexample, and `K_{5,5}`.

use serde::Serialize;

use crate::graph::{Graph, GraphFile, VertexSet};
use crate::linalg::{Realization, RealizationFile};

#[derive(Debug, Clone)]
pub struct Fixture {
    pub name: String,
    pub graph: Graph,
    pub t: Option<VertexSet>,
    pub realization: Option<Realization>,
}

#[derive(Debug, Clone, Serialize)]
pub struct FixtureFile {
    pub name: String,
    pub graph: GraphFile,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub realization: Option<RealizationFile>,
}

impl Fixture {
    pub fn to_file(&self) -> FixtureFile {
        FixtureFile {
            name: self.name.clone(),
            graph: self.graph.to_file(self.t.as_ref()),
            realization: self.realization.as_ref().map(Realization::to_file),
        }
    }
}

fn named(names: &[&str], edges: &[(&str, &str)]) -> Graph {
    let id = |s: &str| names.iter().position(|&n| n == s).unwrap_or_else(|| panic!("unknown vertex {s}"));
    Graph::new(names.len(), edges.iter().map(|&(a, b)| (id(a), id(b))))
        .expect("fixture edges are valid")
        .with_labels(names.iter().enumerate().map(|(i, &n)| (i, n)))
}

const HEX_NAMES: [&str; 9] = ["u", "v", "w", "a", "b", "c", "d", "e", "f"];

/// The outer cycle u-a-v-b-w-c-u shared by all seven base cases.
const HEX_CYCLE: [(&str, &str); 6] = [("a", "u"), ("a", "v"), ("b", "v"), ("b", "w"), ("c", "u"), ("c", "w")];

/// Inner wirings of d, e, f for each panel, read off the drawing.
const HEX_INNER: [&[(&str, &str)]; 7] = [
    &[("d", "a"), ("d", "u"), ("e", "b"), ("e", "v"), ("e", "d"), ("f", "c"), ("f", "w"), ("f", "d"), ("f", "e")],
    &[("d", "u"), ("d", "b"), ("e", "v"), ("e", "d"), ("e", "a"), ("f", "w"), ("f", "d"), ("f", "e"), ("f", "c")],
    &[("d", "u"), ("d", "b"), ("e", "v"), ("e", "d"), ("e", "c"), ("f", "w"), ("f", "d"), ("f", "e"), ("f", "a")],
    &[("d", "u"), ("e", "v"), ("e", "d"), ("e", "a"), ("e", "b"), ("f", "w"), ("f", "d"), ("f", "e"), ("f", "c")],
    &[("d", "u"), ("e", "v"), ("e", "d"), ("e", "a"), ("e", "c"), ("f", "w"), ("f", "d"), ("f", "e"), ("f", "b")],
    &[("d", "u"), ("d", "b"), ("e", "v"), ("e", "d"), ("e", "a"), ("e", "c"), ("f", "w"), ("f", "d"), ("f", "e")],
    &[("d", "u"), ("e", "v"), ("e", "d"), ("e", "a"), ("e", "b"), ("e", "c"), ("f", "w"), ("f", "d"), ("f", "e")],
];

/// The printed coordinates: u, v, w at the origin.
pub fn hex_realization() -> Realization {
    Realization::from_integers(
        2,
        &[
            vec![0, 0], // u
            vec![0, 0], // v
            vec![0, 0], // w
            vec![0, 1], // a
            vec![1, 0], // b
            vec![2, 3], // c
            vec![1, 3], // d
            vec![1, 4], // e
            vec![2, 2], // f
        ],
    )
}

/// `fig3-1` .. `fig3-7`, with `T = {u, v, w} = {0, 1, 2}`.
pub fn fig3() -> Vec<Fixture> {
    HEX_INNER
        .iter()
        .enumerate()
        .map(|(i, inner)| {
            let edges: Vec<(&str, &str)> = HEX_CYCLE.iter().chain(inner.iter()).copied().collect();
            Fixture {
                name: format!("fig3-{}", i + 1),
                graph: named(&HEX_NAMES, &edges),
                t: Some(VertexSet::from([0, 1, 2])),
                realization: (i == 0).then(hex_realization),
            }
        })
        .collect()
}

/// Rigid `G` and `G/T` but flexible `G/uv`; `T = {u, v, w} = {0, 1, 2}`.
pub fn fig4() -> Fixture {
    let names = ["u", "v", "w", "a", "b", "c", "d", "e"];
    let edges = [
        ("b", "a"),
        ("b", "u"),
        ("b", "v"),
        ("c", "a"),
        ("c", "u"),
        ("c", "v"),
        ("d", "a"),
        ("d", "u"),
        ("d", "v"),
        ("e", "b"),
        ("e", "c"),
        ("w", "e"),
        ("w", "d"),
    ];
    Fixture {
        name: "fig4".into(),
        graph: named(&names, &edges),
        t: Some(VertexSet::from([0, 1, 2])),
        realization: None,
    }
}

/// `K_{5,5}` with `u = 0` and `v = 5` on opposite sides.
pub fn k55() -> Fixture {
    let mut labels: Vec<(usize, String)> =
        (0..10).map(|i| (i, format!("{}{}", if i < 5 { "l" } else { "r" }, i % 5))).collect();
    labels[0].1 = "u".into();
    labels[5].1 = "v".into();
    Fixture {
        name: "k55".into(),
        graph: Graph::complete_bipartite(5, 5).with_labels(labels),
        t: Some(VertexSet::from([0, 5])),
        realization: None,
    }
}

pub fn all() -> Vec<Fixture> {
    let mut out = fig3();
    out.push(fig4());
    out.push(k55());
    out
}

pub fn by_name(name: &str) -> Option<Fixture> {
    all().into_iter().find(|f| f.name == name)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes() {
        for f in fig3() {
            assert_eq!((f.graph.n(), f.graph.edge_count()), (9, 15), "{}", f.name);
            let t = f.t.as_ref().unwrap();
            assert_eq!(f.graph.induced_edge_count(t).unwrap(), 0);
            // the inner triangle-ish block d, e, f always spans three edges
            assert_eq!(f.graph.induced_edge_count(&VertexSet::from([6, 7, 8])).unwrap(), 3, "{}", f.name);
        }
        let f4 = by_name("fig4").unwrap();
        assert_eq!((f4.graph.n(), f4.graph.edge_count()), (8, 13));
        let k = by_name("k55").unwrap();
        assert_eq!((k.graph.n(), k.graph.edge_count()), (10, 25));
        assert!(by_name("nope").is_none());
    }

    #[test]
    fn panels_are_distinct() {
        let graphs: Vec<Graph> = fig3().into_iter().map(|f| f.graph).collect();
        for i in 0..graphs.len() {
            for j in i + 1..graphs.len() {
                assert_ne!(graphs[i], graphs[j]);
            }
        }
    }

    #[test]
    fn every_vertex_of_hex_has_degree_at_least_two() {
        for f in fig3() {
            for v in 0..9 {
                assert!(f.graph.degree(v) >= 2, "{} vertex {v}", f.name);
            }
            // y-vertices adjacent to T: d-u, e-v, f-w in every panel
            assert!(f.graph.has_edge(6, 0) && f.graph.has_edge(7, 1) && f.graph.has_edge(8, 2));
        }
    }
}
