//! Decision procedures for coincident rigidity and the randomized harnesses
//! that compare the combinatorial and algebraic sides.

mod extensions;
mod harness;

pub use extensions::{extension_suite, ExtensionReport, MoveTally};
pub use harness::{
    conjecture_search, cross_validate, random_instance, ConjectureCandidate, ConjectureReport, Mismatch, XvalConfig,
    XvalGroup, XvalReport,
};

use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::linalg::{generic_rank, rigidity_target, CoincidenceSpec, RankReport};
use crate::sparsity::{names, pebble_rank_graph};

/// Pebble-game rank of `G'` (when `s` is `None`) or of `G'/S`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ContractionRank {
    pub s: Option<VertexSet>,
    pub rank: usize,
    pub target: usize,
}

impl ContractionRank {
    pub fn rigid(&self) -> bool {
        self.rank == self.target
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoincidenceVerdict {
    pub graph: Graph,
    pub t: VertexSet,
    pub combinatorial: Option<bool>,
    pub algebraic: Option<bool>,
    /// First `S` whose contraction is flexible.
    pub failing_s: Option<VertexSet>,
    /// Whether `G'` itself is rigid.
    pub base_rigid: Option<bool>,
    pub contractions: Vec<ContractionRank>,
    pub reports: Vec<RankReport>,
}

impl CoincidenceVerdict {
    fn new(g: &Graph, t: &VertexSet) -> Self {
        CoincidenceVerdict {
            graph: g.clone(),
            t: t.clone(),
            combinatorial: None,
            algebraic: None,
            failing_s: None,
            base_rigid: None,
            contractions: Vec::new(),
            reports: Vec::new(),
        }
    }

    /// False only when both sides ran and disagree.
    pub fn consistent(&self) -> bool {
        match (self.combinatorial, self.algebraic) {
            (Some(c), Some(a)) => c == a,
            _ => true,
        }
    }

    pub fn to_json(&self) -> Value {
        let g = &self.graph;
        json!({
            "n": g.n(),
            "edges": g.edge_count(),
            "T": names(g, &self.t),
            "combinatorial": self.combinatorial,
            "algebraic": self.algebraic,
            "consistent": self.consistent(),
            "failing_S": self.failing_s.as_ref().map(|s| names(g, s)),
            "base_rigid": self.base_rigid,
            "contractions": self.contractions.iter().map(|c| json!({
                "S": c.s.as_ref().map(|s| names(g, s)),
                "rank": c.rank,
                "target": c.target,
            })).collect::<Vec<_>>(),
            "reports": self.reports,
        })
    }
}

fn check_t_range(t: &VertexSet) -> Result<()> {
    if !(2..=3).contains(&t.len()) {
        return Err(Error::Precondition(format!("the characterization needs 2 <= |T| <= 3, got {t}")));
    }
    Ok(())
}

/// `G' = G - E(T)` must be rigid, and so must `G'/S` for every `S` in `T`
/// with `|S| >= 2`; rigidity is decided by the pebble game.
pub fn coincident_rigid_combinatorial(g: &Graph, t: &VertexSet) -> Result<CoincidenceVerdict> {
    g.check_set(t)?;
    check_t_range(t)?;
    let base = g.minus_t_edges(t)?;
    let mut v = CoincidenceVerdict::new(g, t);
    let top = ContractionRank { s: None, rank: pebble_rank_graph(&base), target: rigidity_target(base.n(), 2) };
    v.base_rigid = Some(top.rigid());
    v.contractions.push(top);
    for s in t.nonempty_subsets().into_iter().filter(|s| s.len() >= 2) {
        let c = base.contract(&s)?;
        let r = ContractionRank { s: Some(s.clone()), rank: pebble_rank_graph(&c), target: rigidity_target(c.n(), 2) };
        if !r.rigid() && v.failing_s.is_none() {
            v.failing_s = Some(s);
        }
        v.contractions.push(r);
    }
    v.combinatorial = Some(v.base_rigid == Some(true) && v.failing_s.is_none());
    Ok(v)
}

/// Rank at sampled generic `T`-coincident realizations in dimension `d`.
pub fn coincident_rigid_algebraic(
    g: &Graph,
    t: &VertexSet,
    d: usize,
    trials: usize,
    seed: u64,
) -> Result<CoincidenceVerdict> {
    let spec = CoincidenceSpec::new(t.clone())?;
    let report = generic_rank(g, &spec, d, trials, seed)?;
    let mut v = CoincidenceVerdict::new(g, t);
    v.algebraic = Some(report.rigid);
    v.reports.push(report);
    Ok(v)
}

/// Both sides; the combinatorial side only runs for `d = 2` and
/// `2 <= |T| <= 3`.
pub fn check_graph(g: &Graph, t: &VertexSet, d: usize, trials: usize, seed: u64) -> Result<CoincidenceVerdict> {
    let mut v = coincident_rigid_algebraic(g, t, d, trials, seed)?;
    if d == 2 && (2..=3).contains(&t.len()) {
        let c = coincident_rigid_combinatorial(g, t)?;
        v.combinatorial = c.combinatorial;
        v.failing_s = c.failing_s;
        v.base_rigid = c.base_rigid;
        v.contractions = c.contractions;
    }
    Ok(v)
}

/// Ranks in dimension 3 of `K_{5,5}` with `u`, `v` coincident, of
/// `K_{5,5} - uv` and of `K_{5,5}/uv`, each with its target.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct K55Report {
    pub coincident: RankReport,
    pub minus_uv: RankReport,
    pub contracted: RankReport,
}

impl K55Report {
    pub fn holds(&self) -> bool {
        self.coincident.rank < self.coincident.target && self.minus_uv.rigid && self.contracted.rigid
    }
}

pub fn k55_report(trials: usize, seed: u64) -> Result<K55Report> {
    let f = crate::fixtures::k55();
    let g = f.graph;
    let uv = f.t.expect("k55 marks u and v");
    let (u, v) = (uv.as_slice()[0], uv.as_slice()[1]);
    let coincident = generic_rank(&g, &CoincidenceSpec::new(uv.clone())?, 3, trials, seed)?;
    let mut minus = g.clone();
    minus.remove_edge(u, v);
    let minus_uv = generic_rank(&minus, &CoincidenceSpec::trivial(), 3, trials, seed)?;
    let contracted = generic_rank(&g.contract(&uv)?, &CoincidenceSpec::trivial(), 3, trials, seed)?;
    Ok(K55Report { coincident, minus_uv, contracted })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn vs<const N: usize>(a: [usize; N]) -> VertexSet {
        VertexSet::from(a)
    }

    #[test]
    fn fig4_verdicts() {
        let f = fixtures::fig4();
        let t = f.t.unwrap();
        let c = coincident_rigid_combinatorial(&f.graph, &t).unwrap();
        assert_eq!(c.combinatorial, Some(false));
        assert_eq!(c.failing_s, Some(vs([0, 1])));
        assert_eq!(c.base_rigid, Some(true));
        let ranks: Vec<(usize, usize)> = c.contractions.iter().map(|r| (r.rank, r.target)).collect();
        // G', G'/uv, G'/uw, G'/vw, G'/T
        assert_eq!(ranks[0], (13, 13));
        assert!(ranks[1].0 <= 10 && ranks[1].1 == 11);
        assert_eq!(ranks[4], (9, 9));

        let a = coincident_rigid_algebraic(&f.graph, &t, 2, 3, 1).unwrap();
        assert_eq!(a.algebraic, Some(false));
        assert_eq!(a.reports[0].rank, 12);

        let both = check_graph(&f.graph, &t, 2, 3, 1).unwrap();
        assert!(both.consistent());
        assert_eq!(both.to_json()["failing_S"], json!(["u", "v"]));
    }

    #[test]
    fn k4_and_fig3() {
        let k4 = Graph::complete(4);
        let c = coincident_rigid_combinatorial(&k4, &vs([0, 1])).unwrap();
        assert_eq!(c.combinatorial, Some(true));
        for f in fixtures::fig3() {
            let v = check_graph(&f.graph, f.t.as_ref().unwrap(), 2, 3, 2).unwrap();
            assert_eq!((v.combinatorial, v.algebraic), (Some(true), Some(true)), "{}", f.name);
        }
        assert!(coincident_rigid_combinatorial(&k4, &vs([0])).is_err());
        assert!(coincident_rigid_combinatorial(&k4, &vs([0, 1, 2, 3])).is_err());
    }

    #[test]
    fn k55_in_three_dimensions() {
        let r = k55_report(3, 7).unwrap();
        assert!(r.coincident.rank <= 23);
        assert_eq!((r.minus_uv.rank, r.minus_uv.target), (24, 24));
        assert_eq!((r.contracted.rank, r.contracted.target), (21, 21));
        assert!(r.holds());
        let f = fixtures::k55();
        let a = coincident_rigid_algebraic(&f.graph, f.t.as_ref().unwrap(), 3, 3, 1).unwrap();
        assert_eq!(a.algebraic, Some(false));
    }
}
