//! Rank, bases and small circuits over an independence oracle.

mod dual;

pub use dual::{mt_rank_cover_min, MtCoverRank};

use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::graph::{Edge, Graph, VertexSet};
use crate::linalg::{rigidity_matrix, sample_t_coincident, CoincidenceSpec, RankMethod, RigidityMatrix, MERSENNE_61};
use crate::seed::derive_seed;
use crate::sparsity::{strongly_sparse_fast, AugmentedFamily, PebbleGame, SparsityConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OracleKind {
    Mt,
    Rt,
    Laman,
}

impl std::fmt::Display for OracleKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            OracleKind::Mt => "mt",
            OracleKind::Rt => "rt",
            OracleKind::Laman => "laman",
        })
    }
}

/// Independence test on subsets of a host graph's edges.
pub trait IndependenceOracle {
    fn kind(&self) -> OracleKind;

    fn ground(&self) -> &Graph;

    fn is_independent(&mut self, edges: &[Edge]) -> Result<bool>;

    /// Set when the oracle's matroid property is not proven for the input.
    fn conjectural(&self) -> bool {
        false
    }
}

fn check_edges(g: &Graph, edges: &[Edge]) -> Result<()> {
    match edges.iter().find(|e| !g.has_edge(e.0, e.1)) {
        Some(e) => Err(Error::InvalidArgument(format!("{e} is not an edge of the graph"))),
        None => Ok(()),
    }
}

/// Generic 2-dimensional rigidity via the pebble game.
#[derive(Debug, Clone)]
pub struct LamanOracle {
    g: Graph,
}

impl LamanOracle {
    pub fn new(g: &Graph) -> Self {
        LamanOracle { g: g.clone() }
    }
}

impl IndependenceOracle for LamanOracle {
    fn kind(&self) -> OracleKind {
        OracleKind::Laman
    }

    fn ground(&self) -> &Graph {
        &self.g
    }

    fn is_independent(&mut self, edges: &[Edge]) -> Result<bool> {
        check_edges(&self.g, edges)?;
        let mut game = PebbleGame::new(self.g.n());
        Ok(edges.iter().all(|&e| game.try_add(e)))
    }
}

/// Strong `T`-sparsity of the spanning subgraph.
#[derive(Debug, Clone)]
pub struct MtOracle {
    g: Graph,
    t: VertexSet,
    cfg: SparsityConfig,
}

impl MtOracle {
    pub fn new(g: &Graph, t: &VertexSet) -> Result<Self> {
        Self::with_config(g, t, SparsityConfig::default())
    }

    pub fn with_config(g: &Graph, t: &VertexSet, cfg: SparsityConfig) -> Result<Self> {
        g.check_set(t)?;
        if t.is_empty() {
            return Err(Error::InvalidArgument("T must be nonempty".into()));
        }
        if g.n() > cfg.cap {
            return Err(Error::CapExceeded { n: g.n(), cap: cfg.cap });
        }
        Ok(MtOracle { g: g.clone(), t: t.clone(), cfg })
    }

    pub fn t(&self) -> &VertexSet {
        &self.t
    }
}

impl IndependenceOracle for MtOracle {
    fn kind(&self) -> OracleKind {
        OracleKind::Mt
    }

    fn ground(&self) -> &Graph {
        &self.g
    }

    fn is_independent(&mut self, edges: &[Edge]) -> Result<bool> {
        check_edges(&self.g, edges)?;
        strongly_sparse_fast(&self.g.spanning_subgraph(edges), &self.t, self.cfg)
    }

    fn conjectural(&self) -> bool {
        self.t.len() >= 4
    }
}

/// Row independence at sampled `T`-coincident realizations. One sampled
/// matrix answers every query; further samples are drawn only when a
/// subset looks dependent.
#[derive(Debug, Clone)]
pub struct RtOracle {
    g: Graph,
    spec: CoincidenceSpec,
    d: usize,
    trials: usize,
    seed: u64,
    method: RankMethod,
    pool: Vec<RigidityMatrix>,
}

impl RtOracle {
    pub fn new(g: &Graph, t: &VertexSet, d: usize, trials: usize, seed: u64) -> Result<Self> {
        g.check_set(t)?;
        if trials == 0 || d == 0 {
            return Err(Error::InvalidArgument("trials and dimension must be positive".into()));
        }
        let spec = CoincidenceSpec::new(t.clone())?;
        Ok(RtOracle { g: g.clone(), spec, d, trials, seed, method: RankMethod::auto(g.n()), pool: Vec::new() })
    }

    pub fn with_method(mut self, method: RankMethod) -> Self {
        self.method = method;
        self
    }

    fn matrix(&mut self, i: usize) -> Result<&RigidityMatrix> {
        while self.pool.len() <= i {
            let k = self.pool.len() as u64;
            let p = sample_t_coincident(&self.g, &self.spec, self.d, derive_seed(self.seed, k))?;
            self.pool.push(rigidity_matrix(&self.g, &p)?);
        }
        Ok(&self.pool[i])
    }

    fn rank_at(&mut self, i: usize, edges: &[Edge]) -> Result<usize> {
        let method = self.method;
        let m = self.matrix(i)?;
        match method {
            RankMethod::ExactRational => Ok(m.rank_of_rows(edges)),
            RankMethod::PrimeField => {
                let rows: Vec<_> = edges
                    .iter()
                    .map(|e| m.rows[m.row_index.binary_search(e).expect("edge has a row")].clone())
                    .collect();
                crate::linalg::rank_mod_prime(&rows, MERSENNE_61)
            }
        }
    }
}

impl IndependenceOracle for RtOracle {
    fn kind(&self) -> OracleKind {
        OracleKind::Rt
    }

    fn ground(&self) -> &Graph {
        &self.g
    }

    fn is_independent(&mut self, edges: &[Edge]) -> Result<bool> {
        check_edges(&self.g, edges)?;
        for i in 0..self.trials {
            if self.rank_at(i, edges)? == edges.len() {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MatroidRankCertificate {
    pub oracle: OracleKind,
    pub rank: usize,
    pub base: Vec<Edge>,
    pub dual: Option<AugmentedFamily>,
    pub conjectural: bool,
}

impl MatroidRankCertificate {
    pub fn to_json(&self, g: &Graph) -> Value {
        let edge = |e: &Edge| json!([g.display_name(e.0), g.display_name(e.1)]);
        json!({
            "oracle": self.oracle,
            "rank": self.rank,
            "base": self.base.iter().map(edge).collect::<Vec<_>>(),
            "dual": self.dual.as_ref().map(|l| l.to_json(g)),
            "conjectural": self.conjectural,
        })
    }
}

/// Scans `edges` in lexicographic order, keeping each edge that leaves the
/// kept set independent.
pub fn greedy_rank(oracle: &mut dyn IndependenceOracle, edges: &[Edge]) -> Result<MatroidRankCertificate> {
    let mut order = edges.to_vec();
    order.sort();
    order.dedup();
    greedy_in_order(oracle, &order)
}

/// Greedy scan in the given order.
pub fn greedy_in_order(oracle: &mut dyn IndependenceOracle, order: &[Edge]) -> Result<MatroidRankCertificate> {
    check_edges(oracle.ground(), order)?;
    let mut base: Vec<Edge> = Vec::new();
    for &e in order {
        base.push(e);
        if !oracle.is_independent(&base)? {
            base.pop();
        }
    }
    Ok(MatroidRankCertificate {
        oracle: oracle.kind(),
        rank: base.len(),
        base,
        dual: None,
        conjectural: oracle.conjectural(),
    })
}

pub const CIRCUIT_SUBSET_CAP: u128 = 5_000_000;

fn binomial(n: usize, k: usize) -> u128 {
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i as u128 + 1))
}

/// Minimal dependent edge sets with at most `k` edges, by size and then
/// lexicographically.
pub fn circuits_upto(oracle: &mut dyn IndependenceOracle, k: usize) -> Result<Vec<Vec<Edge>>> {
    let ground = oracle.ground().edge_list();
    let m = ground.len();
    let k = k.min(m);
    let count: u128 = (1..=k).map(|j| binomial(m, j)).sum();
    if count > CIRCUIT_SUBSET_CAP {
        return Err(Error::TooManySubsets { count, cap: CIRCUIT_SUBSET_CAP });
    }
    let mut out: Vec<Vec<Edge>> = Vec::new();
    for size in 1..=k {
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            let set: Vec<Edge> = idx.iter().map(|&i| ground[i]).collect();
            let has_smaller = out.iter().any(|c| c.iter().all(|e| set.contains(e)));
            if !has_smaller && !oracle.is_independent(&set)? {
                out.push(set);
            }
            let Some(i) = (0..size).rev().find(|&i| idx[i] < m - size + i) else { break };
            idx[i] += 1;
            for j in i + 1..size {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use rand::seq::SliceRandom;
    use rand::SeedableRng;

    fn vs<const N: usize>(a: [usize; N]) -> VertexSet {
        VertexSet::from(a)
    }

    #[test]
    fn greedy_examples() {
        let k4 = Graph::complete(4);
        let mut mt = MtOracle::new(&k4, &vs([0, 1])).unwrap();
        let c = greedy_rank(&mut mt, &k4.edge_list()).unwrap();
        assert_eq!(c.rank, 5);
        assert!(!c.base.contains(&Edge(0, 1)));
        let mut rt = RtOracle::new(&k4, &vs([0, 1]), 2, 3, 1).unwrap();
        assert_eq!(greedy_rank(&mut rt, &k4.edge_list()).unwrap().rank, 5);
        let mut laman = LamanOracle::new(&k4);
        assert_eq!(greedy_rank(&mut laman, &k4.edge_list()).unwrap().rank, 5);
    }

    #[test]
    fn fig4_rank_is_twelve() {
        let f = fixtures::fig4();
        let t = f.t.unwrap();
        let mut mt = MtOracle::new(&f.graph, &t).unwrap();
        let c = greedy_rank(&mut mt, &f.graph.edge_list()).unwrap();
        assert_eq!(c.rank, 12);
        let mut rt = RtOracle::new(&f.graph, &t, 2, 3, 9).unwrap();
        assert_eq!(greedy_rank(&mut rt, &f.graph.edge_list()).unwrap().rank, 12);
        assert!(!c.conjectural);
    }

    #[test]
    fn circuits() {
        let k4 = Graph::complete(4);
        let mut laman = LamanOracle::new(&k4);
        assert_eq!(circuits_upto(&mut laman, 6).unwrap(), vec![k4.edge_list()]);

        let mut mt = MtOracle::new(&k4, &vs([0, 1])).unwrap();
        let cs = circuits_upto(&mut mt, 3).unwrap();
        assert_eq!(cs[0], vec![Edge(0, 1)]);

        // the six edges from b, c, d to u and v form the only small circuit
        let f = fixtures::fig4();
        let mut mt = MtOracle::new(&f.graph, f.t.as_ref().unwrap()).unwrap();
        let cs = circuits_upto(&mut mt, 7).unwrap();
        let star = vec![Edge(0, 4), Edge(0, 5), Edge(0, 6), Edge(1, 4), Edge(1, 5), Edge(1, 6)];
        assert_eq!(cs, vec![star]);

        // an added edge between T-vertices is a loop; one outside T is a coloop
        let mut g = f.graph.clone();
        g.add_edge(0, 1).unwrap();
        g.add_edge(3, 7).unwrap();
        let mut mt = MtOracle::new(&g, f.t.as_ref().unwrap()).unwrap();
        let cs = circuits_upto(&mut mt, g.edge_count()).unwrap();
        assert!(cs.contains(&vec![Edge(0, 1)]));
        assert!(cs.iter().all(|c| !c.contains(&Edge(3, 7))));
        assert!(circuits_upto(&mut LamanOracle::new(&Graph::complete(12)), 12).is_err());
    }

    #[test]
    fn conjectural_flag() {
        let g = Graph::complete(6);
        assert!(MtOracle::new(&g, &vs([0, 1, 2, 3])).unwrap().conjectural());
        assert!(!MtOracle::new(&g, &vs([0, 1, 2])).unwrap().conjectural());
    }

    #[test]
    fn oracles_are_downward_closed_on_chains() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let g = fixtures::fig3()[2].graph.clone();
        let t = vs([0, 1, 2]);
        let mut mt = MtOracle::new(&g, &t).unwrap();
        let mut rt = RtOracle::new(&g, &t, 2, 3, 4).unwrap();
        assert!(mt.is_independent(&[]).unwrap() && rt.is_independent(&[]).unwrap());
        for _ in 0..5 {
            let mut edges = g.edge_list();
            edges.shuffle(&mut rng);
            let mut seen_dependent = [false, false];
            for k in 0..=edges.len() {
                let chain = &edges[..k];
                for (slot, o) in [&mut mt as &mut dyn IndependenceOracle, &mut rt].into_iter().enumerate() {
                    let ind = o.is_independent(chain).unwrap();
                    assert!(!(ind && seen_dependent[slot]));
                    seen_dependent[slot] |= !ind;
                }
            }
        }
    }

    #[test]
    fn permuted_greedy_bases_have_equal_size() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(8);
        let f = fixtures::fig4();
        let mut mt = MtOracle::new(&f.graph, f.t.as_ref().unwrap()).unwrap();
        for _ in 0..10 {
            let mut order = f.graph.edge_list();
            order.shuffle(&mut rng);
            assert_eq!(greedy_in_order(&mut mt, &order).unwrap().rank, 12);
        }
    }
}
