//! Counting conditions: set and family values, `S`-sparsity with explicit
//! violation witnesses, family transformations, and combinatorial ranks.

mod check;
mod cover;
mod families;
mod pebble;

pub use check::{
    is_s_sparse, is_s_sparse_with, is_strongly_t_sparse, is_strongly_t_sparse_with, strongly_sparse_fast,
    SparsityConfig, DEFAULT_CAP,
};
pub use cover::{ly_rank_bruteforce, CoverRank, CoverSolver, LY_CAP};
pub use families::{absorb_set, combine_families, merge_overlapping, thin_out};
pub use pebble::{pebble_rank_23, pebble_rank_graph, PebbleGame};

use std::collections::BTreeSet;

use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::graph::{Edge, Graph, VertexSet};

/// `2|X| - 3` when `X` is not inside `S`, otherwise 0.
pub fn val_set(x: &VertexSet, s: &VertexSet) -> Result<usize> {
    if x.len() < 2 {
        return Err(Error::InvalidArgument(format!("value is defined for sets of size >= 2, got {x}")));
    }
    Ok(if x.is_subset(s) { 0 } else { 2 * x.len() - 3 })
}

/// Every pair inside some member.
fn pairs_within<'a>(sets: impl IntoIterator<Item = &'a VertexSet>) -> BTreeSet<Edge> {
    let mut out = BTreeSet::new();
    for x in sets {
        let xs = x.as_slice();
        for (i, &a) in xs.iter().enumerate() {
            for &b in &xs[i + 1..] {
                out.insert(Edge(a, b));
            }
        }
    }
    out
}

fn edges_within<'a>(g: &Graph, sets: impl IntoIterator<Item = &'a VertexSet> + Clone) -> BTreeSet<Edge> {
    g.edges().filter(|e| sets.clone().into_iter().any(|x| x.contains(e.0) && x.contains(e.1))).collect()
}

/// Nonempty family of proper supersets of `S`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CompatibleFamily {
    s: VertexSet,
    sets: Vec<VertexSet>,
}

impl CompatibleFamily {
    pub fn new(s: VertexSet, sets: Vec<VertexSet>) -> Result<Self> {
        if s.is_empty() {
            return Err(Error::InvalidArgument("compatible family needs a nonempty S".into()));
        }
        if sets.is_empty() {
            return Err(Error::InvalidArgument("compatible family must have a member".into()));
        }
        if let Some(h) = sets.iter().find(|h| !(s.is_subset(h) && h.len() > s.len())) {
            return Err(Error::InvalidArgument(format!("member {h} is not a proper superset of {s}")));
        }
        Ok(CompatibleFamily { s, sets })
    }

    pub fn s(&self) -> &VertexSet {
        &self.s
    }

    pub fn sets(&self) -> &[VertexSet] {
        &self.sets
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    /// `sum (2|H_i - S| - 1) + 2(|S| - 1)`.
    pub fn val(&self) -> usize {
        let members: usize = self.sets.iter().map(|h| 2 * (h.len() - self.s.len()) - 1).sum();
        members + 2 * (self.s.len() - 1)
    }

    /// Members pairwise meet exactly in `S`.
    pub fn is_thin(&self) -> bool {
        (0..self.sets.len())
            .all(|i| (i + 1..self.sets.len()).all(|j| self.sets[i].intersection_len(&self.sets[j]) == self.s.len()))
    }

    /// All vertex pairs spanned by a member.
    pub fn cov(&self) -> BTreeSet<Edge> {
        pairs_within(&self.sets)
    }

    pub fn union(&self) -> VertexSet {
        self.sets.iter().fold(VertexSet::new(), |acc, h| acc.union(h))
    }

    /// Number of edges of `g` induced by some member.
    pub fn induced_edge_count(&self, g: &Graph) -> usize {
        edges_within(g, &self.sets).len()
    }

    pub fn to_json(&self, g: &Graph) -> Value {
        json!({
            "S": names(g, &self.s),
            "sets": self.sets.iter().map(|h| names(g, h)).collect::<Vec<_>>(),
        })
    }
}

pub fn val_family(h: &CompatibleFamily) -> usize {
    h.val()
}

/// `{H, X_1, ..., X_k}` with `H` possibly empty.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AugmentedFamily {
    s: VertexSet,
    h: Vec<VertexSet>,
    x: Vec<VertexSet>,
}

impl AugmentedFamily {
    pub fn new(s: VertexSet, h: Vec<VertexSet>, x: Vec<VertexSet>) -> Result<Self> {
        if s.len() < 2 {
            return Err(Error::InvalidArgument(format!("augmented family needs |S| >= 2, got {s}")));
        }
        if !h.is_empty() {
            CompatibleFamily::new(s.clone(), h.clone())?;
        }
        if let Some(bad) = x.iter().find(|x| x.len() < 2) {
            return Err(Error::InvalidArgument(format!("set {bad} has fewer than two vertices")));
        }
        Ok(AugmentedFamily { s, h, x })
    }

    pub fn s(&self) -> &VertexSet {
        &self.s
    }

    pub fn h(&self) -> &[VertexSet] {
        &self.h
    }

    pub fn x(&self) -> &[VertexSet] {
        &self.x
    }

    pub fn family(&self) -> Option<CompatibleFamily> {
        (!self.h.is_empty()).then(|| CompatibleFamily { s: self.s.clone(), sets: self.h.clone() })
    }

    pub fn val(&self) -> usize {
        let fam = self.family().map_or(0, |f| f.val());
        fam + self.x.iter().map(|x| 2 * x.len() - 3).sum::<usize>()
    }

    /// Conditions (T.1)-(T.3).
    pub fn is_one_thin(&self) -> bool {
        let t1 = (0..self.x.len()).all(|i| (i + 1..self.x.len()).all(|j| self.x[i].intersection_len(&self.x[j]) <= 1));
        let t2 = self.family().is_none_or(|f| f.is_thin());
        let hu = self.h.iter().fold(VertexSet::new(), |acc, h| acc.union(h));
        let t3 = self.x.iter().all(|x| x.intersection_len(&hu) <= 1);
        t1 && t2 && t3
    }

    pub fn cov(&self) -> BTreeSet<Edge> {
        pairs_within(self.h.iter().chain(self.x.iter()))
    }

    pub fn covers(&self, edges: &[Edge]) -> bool {
        edges.iter().all(|e| self.h.iter().chain(self.x.iter()).any(|x| x.contains(e.0) && x.contains(e.1)))
    }

    pub fn induced_edge_count(&self, g: &Graph) -> usize {
        let all: Vec<&VertexSet> = self.h.iter().chain(self.x.iter()).collect();
        g.edges().filter(|e| all.iter().any(|x| x.contains(e.0) && x.contains(e.1))).count()
    }

    pub fn to_json(&self, g: &Graph) -> Value {
        json!({
            "S": names(g, &self.s),
            "H": self.h.iter().map(|h| names(g, h)).collect::<Vec<_>>(),
            "X": self.x.iter().map(|x| names(g, x)).collect::<Vec<_>>(),
            "val": self.val(),
        })
    }
}

pub fn val_augmented(l: &AugmentedFamily) -> usize {
    l.val()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ViolationKind {
    Set,
    Family,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Witness {
    Set(VertexSet),
    Family(CompatibleFamily),
}

/// A set or family whose induced edge count exceeds its value.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SparsityViolation {
    /// The `S` under which the count fails.
    pub s: VertexSet,
    pub kind: ViolationKind,
    pub witness: Witness,
    pub lhs: usize,
    pub rhs: usize,
}

impl SparsityViolation {
    pub fn to_json(&self, g: &Graph) -> Value {
        let witness = match &self.witness {
            Witness::Set(x) => json!(names(g, x)),
            Witness::Family(h) => json!(h.sets().iter().map(|x| names(g, x)).collect::<Vec<_>>()),
        };
        json!({
            "S": names(g, &self.s),
            "kind": self.kind,
            "witness": witness,
            "lhs": self.lhs,
            "rhs": self.rhs,
        })
    }
}

pub(crate) fn names(g: &Graph, x: &VertexSet) -> Vec<String> {
    x.iter().map(|v| g.display_name(v)).collect()
}
