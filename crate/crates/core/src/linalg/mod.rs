//! Rigidity matrices, realizations and rank.

pub mod rank;
mod realization;

pub use rank::{is_prime_u64, rank_mod_prime, rank_rational, MERSENNE_61};
pub use realization::{parse_rational, CoincidenceSpec, Realization, RealizationFile};

use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Edge, Graph};
use crate::seed::derive_seed;

/// Integer coordinates are sampled from `[-SAMPLE_BOUND, SAMPLE_BOUND]`.
pub const SAMPLE_BOUND: i64 = 1 << 20;

/// Exact rational arithmetic is used up to this many vertices by default.
pub const EXACT_VERTEX_LIMIT: usize = 30;

pub const DEFAULT_TRIALS: usize = 3;

/// `|E| x d|V|` rigidity matrix of a framework.
#[derive(Debug, Clone, PartialEq)]
pub struct RigidityMatrix {
    pub dim: usize,
    pub cols: usize,
    pub rows: Vec<Vec<BigRational>>,
    /// Edge of each row, in the graph's canonical edge order.
    pub row_index: Vec<Edge>,
}

impl RigidityMatrix {
    pub fn rank_exact(&self) -> usize {
        rank_rational(&self.rows)
    }

    pub fn rank_modp(&self, prime: u64) -> Result<usize> {
        rank_mod_prime(&self.rows, prime)
    }

    /// Rank of the rows belonging to `edges`.
    pub fn rank_of_rows(&self, edges: &[Edge]) -> usize {
        let rows: Vec<Vec<BigRational>> = edges
            .iter()
            .map(|e| {
                let i = self.row_index.binary_search(e).expect("edge has a row");
                self.rows[i].clone()
            })
            .collect();
        rank_rational(&rows)
    }

    /// `M v`, for checking kernel membership.
    pub fn apply(&self, v: &[BigRational]) -> Vec<BigRational> {
        assert_eq!(v.len(), self.cols);
        self.rows.iter().map(|row| row.iter().zip(v).fold(BigRational::zero(), |acc, (a, b)| acc + a * b)).collect()
    }
}

pub fn rigidity_matrix(g: &Graph, p: &Realization) -> Result<RigidityMatrix> {
    if p.len() < g.n() {
        return Err(Error::InvalidArgument(format!(
            "realization has coordinates for {} vertices, graph has {}",
            p.len(),
            g.n()
        )));
    }
    let d = p.dim();
    let cols = d * g.n();
    let mut rows = Vec::with_capacity(g.edge_count());
    let mut row_index = Vec::with_capacity(g.edge_count());
    for e in g.edges() {
        let mut row = vec![BigRational::zero(); cols];
        for k in 0..d {
            let diff = &p.coord(e.0)[k] - &p.coord(e.1)[k];
            row[d * e.1 + k] = -diff.clone();
            row[d * e.0 + k] = diff;
        }
        rows.push(row);
        row_index.push(e);
    }
    Ok(RigidityMatrix { dim: d, cols, rows, row_index })
}

/// Maximum rank of a framework on `n` vertices in dimension `d`.
pub fn rigidity_target(n: usize, d: usize) -> usize {
    if n >= d {
        d * n - d * (d + 1) / 2
    } else {
        n * n.saturating_sub(1) / 2
    }
}

pub fn is_infinitesimally_rigid(g: &Graph, p: &Realization) -> Result<bool> {
    let m = rigidity_matrix(g, p)?;
    Ok(m.rank_exact() == rigidity_target(g.n(), p.dim()))
}

/// Basis of the infinitesimal isometries evaluated at `p`: `d` translations
/// and `C(d,2)` rotations, each flattened to length `d n`.
pub fn trivial_motions(p: &Realization) -> Vec<Vec<BigRational>> {
    let d = p.dim();
    let n = p.len();
    let mut out = Vec::new();
    for k in 0..d {
        let mut v = vec![BigRational::zero(); d * n];
        for x in 0..n {
            v[d * x + k] = BigRational::from_integer(1.into());
        }
        out.push(v);
    }
    for i in 0..d {
        for j in i + 1..d {
            let mut v = vec![BigRational::zero(); d * n];
            for x in 0..n {
                let c = p.coord(x);
                v[d * x + i] = -c[j].clone();
                v[d * x + j] = c[i].clone();
            }
            out.push(v);
        }
    }
    out
}

/// Generic `T`-coincident realization with integer coordinates.
///
/// Vertices outside `T - ref` get independent uniform coordinates in
/// `[-SAMPLE_BOUND, SAMPLE_BOUND]`, drawn in vertex order; every vertex of
/// `T` is placed on `ref`.
pub fn sample_t_coincident(g: &Graph, spec: &CoincidenceSpec, d: usize, seed: u64) -> Result<Realization> {
    g.check_set(spec.t())?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut coords: Vec<Vec<i64>> = vec![Vec::new(); g.n()];
    for (v, c) in coords.iter_mut().enumerate() {
        if spec.t().contains(v) && v != spec.reference() {
            continue;
        }
        *c = (0..d).map(|_| rng.gen_range(-SAMPLE_BOUND..=SAMPLE_BOUND)).collect();
    }
    let anchor = coords[spec.reference()].clone();
    for v in spec.t().iter() {
        coords[v] = anchor.clone();
    }
    Ok(Realization::from_integers(d, &coords))
}

/// Plain generic realization (no coincidences).
pub fn sample_generic(g: &Graph, d: usize, seed: u64) -> Realization {
    if g.n() == 0 {
        return Realization::new(d.max(1), Vec::new()).expect("empty realization");
    }
    sample_t_coincident(g, &CoincidenceSpec::trivial(), d, seed).expect("vertex 0 exists")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RankMethod {
    ExactRational,
    PrimeField,
}

impl RankMethod {
    pub fn auto(n: usize) -> Self {
        if n <= EXACT_VERTEX_LIMIT {
            RankMethod::ExactRational
        } else {
            RankMethod::PrimeField
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankReport {
    pub rank: usize,
    pub target: usize,
    pub rigid: bool,
    pub independent: bool,
    pub edges: usize,
    pub method: RankMethod,
    pub trials: usize,
    pub seed: u64,
    /// Schwartz-Zippel bound on the probability that `rank` falls short of
    /// the generic rank: `(r / N)^trials` with `r = min(|E|, target)` and
    /// `N` the number of sample values per coordinate.
    pub failure_bound: f64,
}

pub fn generic_rank(g: &Graph, spec: &CoincidenceSpec, d: usize, trials: usize, seed: u64) -> Result<RankReport> {
    generic_rank_with(g, spec, d, trials, seed, RankMethod::auto(g.n()))
}

/// Maximum rank over `trials` sampled `T`-coincident realizations.
pub fn generic_rank_with(
    g: &Graph,
    spec: &CoincidenceSpec,
    d: usize,
    trials: usize,
    seed: u64,
    method: RankMethod,
) -> Result<RankReport> {
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    if d == 0 {
        return Err(Error::InvalidArgument("dimension must be at least 1".into()));
    }
    g.check_set(spec.t())?;
    let ranks: Vec<usize> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let p = sample_t_coincident(g, spec, d, derive_seed(seed, i as u64))?;
            let m = rigidity_matrix(g, &p)?;
            match method {
                RankMethod::ExactRational => Ok(m.rank_exact()),
                RankMethod::PrimeField => m.rank_modp(MERSENNE_61),
            }
        })
        .collect::<Result<_>>()?;
    let rank = ranks.into_iter().max().unwrap();
    let target = rigidity_target(g.n(), d);
    let degree = g.edge_count().min(target) as f64;
    let range = (2 * SAMPLE_BOUND + 1) as f64;
    Ok(RankReport {
        rank,
        target,
        rigid: rank == target,
        independent: rank == g.edge_count(),
        edges: g.edge_count(),
        method,
        trials,
        seed,
        failure_bound: (degree / range).powi(trials as i32).min(1.0),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::graph::VertexSet;
    use proptest::prelude::*;

    fn tri() -> Realization {
        Realization::from_integers(2, &[vec![0, 0], vec![1, 0], vec![0, 1]])
    }

    #[test]
    fn single_edge_row() {
        let g = Graph::complete(2);
        let p = Realization::from_integers(2, &[vec![0, 0], vec![1, 0]]);
        let m = rigidity_matrix(&g, &p).unwrap();
        let ints: Vec<i64> = m.rows[0].iter().map(|x| x.to_integer().try_into().unwrap()).collect();
        assert_eq!(ints, vec![-1, 0, 1, 0]);
        assert_eq!(m.rank_exact(), 1);

        let same = Realization::from_integers(2, &[vec![3, 3], vec![3, 3]]);
        let z = rigidity_matrix(&g, &same).unwrap();
        assert!(z.rows[0].iter().all(Zero::is_zero));
        assert_eq!(z.rank_exact(), 0);
    }

    #[test]
    fn triangle_ranks() {
        let g = Graph::complete(3);
        let m = rigidity_matrix(&g, &tri()).unwrap();
        assert_eq!(m.rank_exact(), 3);
        assert_eq!(m.rank_modp(MERSENNE_61).unwrap(), 3);
        assert!(m.rank_modp(MERSENNE_61 + 2).is_err());
    }

    #[test]
    fn missing_coordinates() {
        let g = Graph::complete(4);
        assert!(rigidity_matrix(&g, &tri()).is_err());
    }

    #[test]
    fn rigidity_thresholds() {
        let k2 = Graph::complete(2);
        let p = Realization::from_integers(2, &[vec![0, 0], vec![2, 1]]);
        assert!(is_infinitesimally_rigid(&k2, &p).unwrap());
        let path = Graph::new(3, [(0, 1), (1, 2)]).unwrap();
        assert!(!is_infinitesimally_rigid(&path, &sample_generic(&path, 2, 1)).unwrap());
        assert_eq!(rigidity_target(2, 3), 1);
        assert_eq!(rigidity_target(10, 3), 24);
    }

    #[test]
    fn fig3_printed_realization() {
        let f = fixtures::fig3()[0].clone();
        let p = f.realization.clone().unwrap();
        let m = rigidity_matrix(&f.graph, &p).unwrap();
        assert_eq!((m.rows.len(), m.cols), (15, 18));
        assert_eq!(m.rank_exact(), 15);
        assert_eq!(m.rank_modp(MERSENNE_61).unwrap(), 15);
        assert!(is_infinitesimally_rigid(&f.graph, &p).unwrap());
    }

    #[test]
    fn coincident_sampling() {
        let g = Graph::complete(5);
        let single = CoincidenceSpec::new(VertexSet::from([2])).unwrap();
        let p = sample_t_coincident(&g, &single, 2, 9).unwrap();
        assert_eq!(p, sample_generic(&g, 2, 9));
        let spec = CoincidenceSpec::new(VertexSet::from([1, 3])).unwrap();
        let p = sample_t_coincident(&g, &spec, 2, 7).unwrap();
        assert_eq!(p.coord(1), p.coord(3));
        assert_ne!(p.coord(0), p.coord(1));
        assert_eq!(p, sample_t_coincident(&g, &spec, 2, 7).unwrap());
        assert_ne!(p, sample_t_coincident(&g, &spec, 2, 8).unwrap());
    }

    #[test]
    fn generic_rank_examples() {
        let uv = CoincidenceSpec::new(VertexSet::from([0, 1])).unwrap();
        let k4 = generic_rank(&Graph::complete(4), &uv, 2, 3, 42).unwrap();
        assert_eq!(k4.rank, 5);
        assert!(k4.rigid);
        assert!(k4.failure_bound < 1e-15);
        let k3 = generic_rank(&Graph::complete(3), &uv, 2, 3, 42).unwrap();
        assert!(k3.rank < 3 && !k3.rigid);
        assert!(generic_rank(&Graph::complete(3), &uv, 2, 0, 42).is_err());

        let modp = generic_rank_with(&Graph::complete(4), &uv, 2, 2, 5, RankMethod::PrimeField).unwrap();
        assert_eq!(modp.rank, 5);
    }

    #[test]
    fn rotations_and_translations_in_kernel() {
        for (seed, d) in [(1u64, 2usize), (2, 3)] {
            let g = Graph::complete(6);
            let p = sample_generic(&g, d, seed);
            let m = rigidity_matrix(&g, &p).unwrap();
            let motions = trivial_motions(&p);
            assert_eq!(motions.len(), d * (d + 1) / 2);
            for v in motions {
                assert!(m.apply(&v).iter().all(Zero::is_zero));
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn rank_bounded_and_monotone(
            n in 3usize..7,
            mask in any::<u32>(),
            seed in any::<u64>(),
            d in 2usize..4,
        ) {
            let all = Graph::complete(n).edge_list();
            let edges: Vec<Edge> = all.iter().enumerate()
                .filter(|(i, _)| mask >> (i % 32) & 1 == 1)
                .map(|(_, e)| *e)
                .collect();
            let g = Graph::complete(n).spanning_subgraph(&edges);
            let p = sample_generic(&g, d, seed);
            let m = rigidity_matrix(&g, &p).unwrap();
            let r = m.rank_exact();
            prop_assert!(r <= g.edge_count().min(rigidity_target(n, d)));
            prop_assert!(m.rank_modp(MERSENNE_61).unwrap() <= r);
            // one more edge never lowers the rank, one fewer never raises it
            let full = rigidity_matrix(&Graph::complete(n), &p).unwrap();
            prop_assert!(full.rank_exact() >= r);
            if let Some((last, rest)) = edges.split_last() {
                let _ = last;
                prop_assert!(m.rank_of_rows(rest) <= r);
            }
        }

        #[test]
        fn contraction_bound(
            n in 4usize..7,
            mask in any::<u32>(),
            seed in any::<u64>(),
            tsize in 2usize..4,
        ) {
            let all = Graph::complete(n).edge_list();
            let edges: Vec<Edge> = all.iter().enumerate()
                .filter(|(i, _)| mask >> (i % 32) & 1 == 1)
                .map(|(_, e)| *e)
                .collect();
            let g = Graph::complete(n).spanning_subgraph(&edges);
            let t: VertexSet = (0..tsize).collect();
            let (gt, map) = g.contract_with_map(&t).unwrap();
            let pt = sample_generic(&gt, 2, seed);
            // lift p_T to a T-coincident realization of G
            let coords: Vec<Vec<BigRational>> = (0..n).map(|v| pt.coord(map[v]).to_vec()).collect();
            let p = Realization::new(2, coords).unwrap();
            let lhs = rigidity_matrix(&g, &p).unwrap().rank_exact();
            let rhs = rigidity_matrix(&gt, &pt).unwrap().rank_exact() + 2 * (tsize - 1);
            prop_assert!(lhs <= rhs);
        }
    }
}
