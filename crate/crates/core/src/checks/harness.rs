use std::time::Instant;

use rand::seq::{IteratorRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;

use crate::constructions::henneberg_random;
use crate::error::{Error, Result};
use crate::graph::{Edge, Graph, GraphFile, VertexSet};
use crate::linalg::{generic_rank, CoincidenceSpec, RankMethod, RankReport};
use crate::matroid::{greedy_rank, IndependenceOracle, MtOracle, OracleKind, RtOracle};
use crate::seed::derive_seed;
use crate::sparsity::{is_strongly_t_sparse, DEFAULT_CAP};

/// Either `G(n, m)` with `m` within 3 of `2n - 3`, or a Henneberg graph
/// with up to two extra edges; then a uniform `T` of the requested size.
pub fn random_instance(rng: &mut ChaCha8Rng, n: usize, t_size: usize) -> Result<(Graph, VertexSet)> {
    if n < 2 || t_size == 0 || t_size > n {
        return Err(Error::InvalidArgument(format!("cannot draw |T| = {t_size} from {n} vertices")));
    }
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    let g = if rng.gen_bool(0.5) {
        let m = (2 * n as i64 - 3 + rng.gen_range(-3..=3)).clamp(0, pairs.len() as i64) as usize;
        Graph::new(n, pairs.choose_multiple(rng, m).copied())?
    } else {
        let mut g = henneberg_random(n, rng.gen())?;
        let extra = rng.gen_range(0..=2);
        let free: Vec<(usize, usize)> = pairs.iter().copied().filter(|&(a, b)| !g.has_edge(a, b)).collect();
        for &(a, b) in free.choose_multiple(rng, extra) {
            g.add_edge(a, b)?;
        }
        g
    };
    let mut t: Vec<usize> = (0..n).choose_multiple(rng, t_size);
    t.sort_unstable();
    Ok((g, VertexSet::from(t)))
}

/// Answers with the mt-oracle and records the first query where the
/// rt-oracle disagrees.
struct Paired {
    mt: MtOracle,
    rt: RtOracle,
    queries: usize,
    disagreement: Option<(Vec<Edge>, bool, bool)>,
}

impl IndependenceOracle for Paired {
    fn kind(&self) -> OracleKind {
        OracleKind::Mt
    }

    fn ground(&self) -> &Graph {
        self.mt.ground()
    }

    fn is_independent(&mut self, edges: &[Edge]) -> Result<bool> {
        self.queries += 1;
        let a = self.mt.is_independent(edges)?;
        let b = self.rt.is_independent(edges)?;
        if a != b && self.disagreement.is_none() {
            self.disagreement = Some((edges.to_vec(), a, b));
        }
        Ok(a)
    }

    fn conjectural(&self) -> bool {
        self.mt.conjectural()
    }
}

struct Outcome {
    queries: usize,
    mt_rank: usize,
    disagreement: Option<(Vec<Edge>, bool, bool)>,
}

/// Greedy over the full edge set followed by the full set itself.
fn compare(g: &Graph, t: &VertexSet, trials: usize, seed: u64) -> Result<Outcome> {
    let mut p = Paired {
        mt: MtOracle::new(g, t)?,
        rt: RtOracle::new(g, t, 2, trials, seed)?.with_method(RankMethod::ExactRational),
        queries: 0,
        disagreement: None,
    };
    let cert = greedy_rank(&mut p, &g.edge_list())?;
    p.is_independent(&g.edge_list())?;
    Ok(Outcome { queries: p.queries, mt_rank: cert.rank, disagreement: p.disagreement })
}

#[derive(Debug, Clone, Serialize)]
pub struct XvalConfig {
    pub n_min: usize,
    pub n_max: usize,
    pub t_sizes: Vec<usize>,
    /// Total instances, dealt round-robin over `t_sizes`.
    pub samples: usize,
    pub seed: u64,
    pub trials: usize,
}

impl Default for XvalConfig {
    fn default() -> Self {
        XvalConfig { n_min: 3, n_max: 7, t_sizes: vec![1, 2, 3], samples: 500, seed: 42, trials: 3 }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Mismatch {
    pub index: usize,
    pub graph: GraphFile,
    pub edges: Vec<Edge>,
    pub mt: bool,
    pub rt: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct XvalGroup {
    pub t_size: usize,
    pub instances: usize,
    pub mismatches: usize,
    pub conjectural: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct XvalReport {
    pub config: XvalConfig,
    pub groups: Vec<XvalGroup>,
    pub queries: usize,
    pub mismatches: Vec<Mismatch>,
    pub elapsed_ms: u128,
}

impl XvalReport {
    /// No mismatch outside the conjectural groups.
    pub fn passed(&self) -> bool {
        self.groups.iter().all(|g| g.conjectural || g.mismatches == 0)
    }
}

fn instance_size(rng: &mut ChaCha8Rng, n_min: usize, n_max: usize, t_size: usize) -> usize {
    rng.gen_range(n_min.max(t_size).max(3)..=n_max)
}

fn check_sizes(n_max: usize, t_sizes: &[usize]) -> Result<()> {
    if n_max > DEFAULT_CAP {
        return Err(Error::CapExceeded { n: n_max, cap: DEFAULT_CAP });
    }
    if t_sizes.is_empty() || t_sizes.iter().any(|&t| t == 0 || t > n_max.max(3)) || n_max < 3 {
        return Err(Error::InvalidArgument(format!("bad sizes: n_max = {n_max}, |T| in {t_sizes:?}")));
    }
    Ok(())
}

/// Runs the mt- and rt-oracles side by side on random instances and
/// compares every query of a greedy scan plus the full edge set.
pub fn cross_validate(cfg: &XvalConfig) -> Result<XvalReport> {
    check_sizes(cfg.n_max, &cfg.t_sizes)?;
    let start = Instant::now();
    let results: Vec<(usize, Graph, VertexSet, Outcome)> = (0..cfg.samples)
        .into_par_iter()
        .map(|i| {
            let root = derive_seed(cfg.seed, i as u64);
            let mut rng = ChaCha8Rng::seed_from_u64(root);
            let t_size = cfg.t_sizes[i % cfg.t_sizes.len()];
            let n = instance_size(&mut rng, cfg.n_min, cfg.n_max, t_size);
            let (g, t) = random_instance(&mut rng, n, t_size)?;
            let out = compare(&g, &t, cfg.trials, derive_seed(root, 1))?;
            Ok((t_size, g, t, out))
        })
        .collect::<Result<_>>()?;

    let mut groups: Vec<XvalGroup> = Vec::new();
    for &t_size in &cfg.t_sizes {
        if !groups.iter().any(|g| g.t_size == t_size) {
            groups.push(XvalGroup { t_size, instances: 0, mismatches: 0, conjectural: t_size >= 4 });
        }
    }
    let mut mismatches = Vec::new();
    let mut queries = 0;
    for (i, (t_size, g, t, out)) in results.into_iter().enumerate() {
        queries += out.queries;
        let group = groups.iter_mut().find(|x| x.t_size == t_size).expect("group exists");
        group.instances += 1;
        if let Some((edges, mt, rt)) = out.disagreement {
            group.mismatches += 1;
            mismatches.push(Mismatch { index: i, graph: g.to_file(Some(&t)), edges, mt, rt });
        }
    }
    Ok(XvalReport { config: cfg.clone(), groups, queries, mismatches, elapsed_ms: start.elapsed().as_millis() })
}

/// Fresh seeds used to re-examine a suspected counterexample.
pub const QUARANTINE_SEEDS: usize = 10;
const QUARANTINE_SALT: u64 = 0x5157_4f52_414e_5449;

#[derive(Debug, Clone, Serialize)]
pub struct ConjectureCandidate {
    pub index: usize,
    pub graph: GraphFile,
    pub edges: Vec<Edge>,
    pub mt_independent: bool,
    pub rt_independent: bool,
    /// Survived re-verification.
    pub confirmed: bool,
    pub rank: RankReport,
    pub violation: Option<Value>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConjectureReport {
    pub n_max: usize,
    pub t_size: usize,
    pub budget: usize,
    pub seed: u64,
    pub checked: usize,
    pub greedy_ranks: Vec<usize>,
    pub candidates: Vec<ConjectureCandidate>,
    pub confirmed: usize,
    pub elapsed_ms: u128,
}

/// Searches for instances with `|T| >= 4` where strong sparsity and
/// coincident independence differ.
///
/// An rt answer of "independent" is a proof. An rt answer of "dependent"
/// is re-checked at `QUARANTINE_SEEDS` fresh realizations before the
/// candidate counts as confirmed.
pub fn conjecture_search(n_max: usize, t_size: usize, budget: usize, seed: u64) -> Result<ConjectureReport> {
    if t_size < 4 {
        return Err(Error::Precondition(format!("the search targets |T| >= 4, got {t_size}")));
    }
    check_sizes(n_max, &[t_size])?;
    let start = Instant::now();
    let found: Vec<(usize, Option<ConjectureCandidate>)> = (0..budget)
        .into_par_iter()
        .map(|i| {
            let root = derive_seed(seed, i as u64);
            let mut rng = ChaCha8Rng::seed_from_u64(root);
            let n = instance_size(&mut rng, 3, n_max, t_size);
            let (g, t) = random_instance(&mut rng, n, t_size)?;
            let out = compare(&g, &t, 3, derive_seed(root, 1))?;
            let Some((edges, mt, rt)) = out.disagreement else {
                return Ok((out.mt_rank, None));
            };
            let sub = g.spanning_subgraph(&edges);
            let fresh = derive_seed(seed ^ QUARANTINE_SALT, i as u64);
            let spec = CoincidenceSpec::new(t.clone())?;
            let rank = generic_rank(&sub, &spec, 2, QUARANTINE_SEEDS, fresh)?;
            let confirmed = if rt { true } else { !rank.independent };
            let violation = is_strongly_t_sparse(&sub, &t)?.map(|v| v.to_json(&sub));
            let cand = ConjectureCandidate {
                index: i,
                graph: g.to_file(Some(&t)),
                edges,
                mt_independent: mt,
                rt_independent: rt,
                confirmed,
                rank,
                violation,
            };
            Ok((out.mt_rank, Some(cand)))
        })
        .collect::<Result<_>>()?;
    let greedy_ranks = found.iter().map(|f| f.0).collect();
    let candidates: Vec<ConjectureCandidate> = found.into_iter().filter_map(|f| f.1).collect();
    Ok(ConjectureReport {
        n_max,
        t_size,
        budget,
        seed,
        checked: budget,
        greedy_ranks,
        confirmed: candidates.iter().filter(|c| c.confirmed).count(),
        candidates,
        elapsed_ms: start.elapsed().as_millis(),
    })
}
