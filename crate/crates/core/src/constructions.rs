//! Extension moves, vertex splitting, rigid-subgraph replacement and the
//! inverse low-degree reduction.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Edge, Graph, VertexId, VertexSet};
use crate::linalg::Realization;
use crate::sparsity::{strongly_sparse_fast, SparsityConfig};

/// Probability of a 0-extension at each step of [`henneberg_random`].
pub const ZERO_EXTENSION_PROB: f64 = 0.7;

/// Adds a vertex `w = n` joined to `a` and `b`.
pub fn zero_extension(g: &Graph, a: VertexId, b: VertexId) -> Result<Graph> {
    g.check_vertex(a)?;
    g.check_vertex(b)?;
    if a == b {
        return Err(Error::InvalidArgument(format!("0-extension needs two distinct vertices, got {a} twice")));
    }
    let mut out = g.clone();
    let w = out.add_vertex();
    out.add_edge(w, a)?;
    out.add_edge(w, b)?;
    Ok(out)
}

/// Deletes `uv` and adds a vertex `w = n` joined to `u`, `v` and `x`.
pub fn one_extension(g: &Graph, uv: Edge, x: VertexId) -> Result<Graph> {
    g.check_vertex(x)?;
    if !g.has_edge(uv.0, uv.1) {
        return Err(Error::InvalidArgument(format!("{uv} is not an edge")));
    }
    if uv.contains(x) {
        return Err(Error::InvalidArgument(format!("{x} is an endpoint of {uv}")));
    }
    let mut out = g.clone();
    out.remove_edge(uv.0, uv.1);
    let w = out.add_vertex();
    for y in [uv.0, uv.1, x] {
        out.add_edge(w, y)?;
    }
    Ok(out)
}

/// Splits `z`: it keeps `U1 + U2`, and a new vertex `z'` takes `U2 + U3`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitSpec {
    pub z: VertexId,
    pub u1: VertexSet,
    pub u2: VertexSet,
    pub u3: VertexSet,
}

impl SplitSpec {
    pub fn validate(&self, g: &Graph) -> Result<()> {
        g.check_vertex(self.z)?;
        if self.u2.len() != 2 {
            return Err(Error::InvalidArgument(format!("U2 must have two vertices, got {}", self.u2)));
        }
        let total = self.u1.len() + self.u2.len() + self.u3.len();
        let all = self.u1.union(&self.u2).union(&self.u3);
        if all.len() != total || all != g.neighbors(self.z) {
            return Err(Error::InvalidArgument(format!(
                "U1, U2, U3 must partition the neighbours {} of {}",
                g.neighbors(self.z),
                self.z
            )));
        }
        Ok(())
    }
}

pub fn vertex_split(g: &Graph, spec: &SplitSpec) -> Result<Graph> {
    spec.validate(g)?;
    let mut out = g.clone();
    for y in spec.u3.iter() {
        out.remove_edge(spec.z, y);
    }
    let z2 = out.add_vertex();
    for y in spec.u2.iter().chain(spec.u3.iter()) {
        out.add_edge(z2, y)?;
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Replacement {
    pub graph: Graph,
    /// New id of every old vertex; the members of `Y_i` share one id.
    pub map: Vec<VertexId>,
    /// New ids `y_1, ..., y_m`.
    pub reps: Vec<VertexId>,
}

impl Replacement {
    /// `p(v) = p'(y_i)` on `Y_i` and `p(v) = p'(v)` elsewhere.
    pub fn lift(&self, p: &Realization) -> Realization {
        let mut out = Realization::new(p.dim(), Vec::new()).expect("positive dimension");
        for &v in &self.map {
            out.push(p.coord(v).to_vec());
        }
        out
    }
}

/// Contracts each block `Y_i` to a vertex `y_i` and joins the `y_i`
/// pairwise. `y_i` sits at the position of `min(Y_i)`; other vertices keep
/// their relative order.
pub fn replace_rigid_subgraph(g: &Graph, y: &VertexSet, partition: &[VertexSet]) -> Result<Replacement> {
    g.check_set(y)?;
    if partition.len() < 3 {
        return Err(Error::InvalidArgument(format!("partition needs at least 3 blocks, got {}", partition.len())));
    }
    let sizes: usize = partition.iter().map(VertexSet::len).sum();
    let union = partition.iter().fold(VertexSet::new(), |acc, b| acc.union(b));
    if partition.iter().any(VertexSet::is_empty) || sizes != y.len() || &union != y {
        return Err(Error::InvalidArgument(format!("blocks do not partition {y}")));
    }
    let block_of = |v: VertexId| partition.iter().position(|b| b.contains(v));
    let mut map = vec![0; g.n()];
    let mut next = 0;
    for (v, slot) in map.iter_mut().enumerate() {
        match block_of(v) {
            Some(i) if partition[i].first() != Some(v) => continue,
            _ => {
                *slot = next;
                next += 1;
            }
        }
    }
    for b in partition {
        let head = map[b.first().unwrap()];
        for v in b.iter() {
            map[v] = head;
        }
    }
    let mut out = Graph::empty(next);
    for e in g.edges() {
        let (a, b) = (map[e.0], map[e.1]);
        if a != b && !out.has_edge(a, b) {
            out.add_edge(a, b)?;
        }
    }
    let reps: Vec<VertexId> = partition.iter().map(|b| map[b.first().unwrap()]).collect();
    for i in 0..reps.len() {
        for j in i + 1..reps.len() {
            if !out.has_edge(reps[i], reps[j]) {
                out.add_edge(reps[i], reps[j])?;
            }
        }
    }
    Ok(Replacement { graph: out, map, reps })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reduction {
    /// `G - z`, or `G - z + xy`; vertices above `z` shift down by one.
    pub graph: Graph,
    pub t: VertexSet,
    /// The added edge `xy` in the new numbering.
    pub added: Option<Edge>,
}

/// Removes a vertex of degree 2 or 3 outside `T` while keeping strong
/// `T`-sparsity. For degree 3 the first non-adjacent neighbour pair, in
/// lexicographic order, that keeps the graph strongly sparse is joined.
pub fn reduce_low_degree(g: &Graph, t: &VertexSet, z: VertexId) -> Result<Reduction> {
    reduce_low_degree_with(g, t, z, SparsityConfig::default())
}

pub fn reduce_low_degree_with(g: &Graph, t: &VertexSet, z: VertexId, cfg: SparsityConfig) -> Result<Reduction> {
    g.check_vertex(z)?;
    g.check_set(t)?;
    if t.contains(z) {
        return Err(Error::Precondition(format!("{z} lies in T")));
    }
    let nbrs = g.neighbors(z);
    if nbrs.intersection_len(t) > 1 {
        return Err(Error::Precondition(format!("{z} has more than one neighbour in T")));
    }
    if !(2..=3).contains(&nbrs.len()) {
        return Err(Error::Precondition(format!("{z} has degree {}, expected 2 or 3", nbrs.len())));
    }
    if !strongly_sparse_fast(g, t, cfg)? {
        return Err(Error::Precondition("graph is not strongly T-sparse".into()));
    }
    let shift = |v: VertexId| if v > z { v - 1 } else { v };
    let base = g.remove_vertex(z)?;
    let t2: VertexSet = t.iter().map(shift).collect();
    if nbrs.len() == 2 {
        return Ok(Reduction { graph: base, t: t2, added: None });
    }
    let ns = nbrs.as_slice();
    for (i, &x) in ns.iter().enumerate() {
        for &y in &ns[i + 1..] {
            if g.has_edge(x, y) {
                continue;
            }
            let mut cand = base.clone();
            cand.add_edge(shift(x), shift(y))?;
            if strongly_sparse_fast(&cand, &t2, cfg)? {
                return Ok(Reduction { graph: cand, t: t2, added: Some(Edge::new(shift(x), shift(y))) });
            }
        }
    }
    Err(Error::NoValidPair(z))
}

/// Random sequence of 0- and 1-extensions starting from one edge.
pub fn henneberg_random(n: usize, seed: u64) -> Result<Graph> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("need at least 2 vertices, got {n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = Graph::new(2, [(0, 1)])?;
    while g.n() < n {
        let k = g.n();
        if k < 3 || rng.gen_bool(ZERO_EXTENSION_PROB) {
            let picks: Vec<VertexId> = (0..k).collect::<Vec<_>>().choose_multiple(&mut rng, 2).copied().collect();
            g = zero_extension(&g, picks[0], picks[1])?;
        } else {
            let edges = g.edge_list();
            let e = *edges.choose(&mut rng).expect("graph has edges");
            let others: Vec<VertexId> = (0..k).filter(|&v| !e.contains(v)).collect();
            let x = *others.choose(&mut rng).expect("a third vertex exists");
            g = one_extension(&g, e, x)?;
        }
    }
    Ok(g)
}
