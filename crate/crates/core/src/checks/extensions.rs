//! Randomized numeric checks of the extension moves at coincident
//! realizations, in exact arithmetic and dimension 2.

use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::seq::{IteratorRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::constructions::{
    henneberg_random, one_extension, replace_rigid_subgraph, vertex_split, zero_extension, SplitSpec,
};
use crate::error::Result;
use crate::graph::{Edge, Graph, VertexSet};
use crate::linalg::{
    is_infinitesimally_rigid, rigidity_matrix, sample_generic, sample_t_coincident, CoincidenceSpec, Realization,
    SAMPLE_BOUND,
};
use crate::seed::derive_seed;

/// Placements of a new point tried before a 1-extension or lift counts as
/// failed.
pub const PLACEMENT_ATTEMPTS: usize = 5;

#[derive(Debug, Clone, Serialize)]
pub struct MoveTally {
    pub name: String,
    pub instances: usize,
    pub skipped: usize,
    /// Seeds of failing instances.
    pub failures: Vec<u64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExtensionReport {
    pub seed: u64,
    pub target: usize,
    pub moves: Vec<MoveTally>,
    pub elapsed_ms: u128,
}

impl ExtensionReport {
    pub fn passed(&self) -> bool {
        self.moves.iter().all(|l| l.failures.is_empty() && l.instances >= self.target)
    }
}

type TrialFn = fn(u64) -> Result<Trial>;

enum Trial {
    Pass,
    Fail,
    Skip,
}

type Point = Vec<BigRational>;

fn point(rng: &mut ChaCha8Rng) -> Point {
    (0..2).map(|_| BigRational::from_integer(BigInt::from(rng.gen_range(-SAMPLE_BOUND..=SAMPLE_BOUND)))).collect()
}

fn collinear(a: &[BigRational], b: &[BigRational], c: &[BigRational]) -> bool {
    ((&b[0] - &a[0]) * (&c[1] - &a[1]) - (&b[1] - &a[1]) * (&c[0] - &a[0])).is_zero()
}

fn rank(g: &Graph, p: &Realization) -> Result<usize> {
    Ok(rigidity_matrix(g, p)?.rank_exact())
}

/// Henneberg graph with a random coincident set of size 0 to 3, realized
/// generically subject to the coincidence.
fn base(rng: &mut ChaCha8Rng) -> Result<(Graph, Realization)> {
    let n = rng.gen_range(4..=8);
    let g = henneberg_random(n, rng.gen())?;
    let k = rng.gen_range(0..=3);
    let p = if k == 0 {
        sample_generic(&g, 2, rng.gen())
    } else {
        let t: VertexSet = (0..n).choose_multiple(rng, k).into_iter().collect();
        sample_t_coincident(&g, &CoincidenceSpec::new(t)?, 2, rng.gen())?
    };
    Ok((g, p))
}

fn with_point(p: &Realization, q: Point) -> Realization {
    let mut out = p.clone();
    out.push(q);
    out
}

/// Rank grows by exactly 2 when `w` is placed off the line through `a, b`.
fn zero_ext_trial(seed: u64) -> Result<Trial> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut g, p) = base(&mut rng)?;
    if rng.gen_bool(0.5) {
        let free: Vec<(usize, usize)> =
            (0..g.n()).flat_map(|a| (a + 1..g.n()).map(move |b| (a, b))).filter(|&(a, b)| !g.has_edge(a, b)).collect();
        if let Some(&(a, b)) = free.choose(&mut rng) {
            g.add_edge(a, b)?;
        }
    }
    let pairs: Vec<(usize, usize)> = (0..g.n())
        .flat_map(|a| (a + 1..g.n()).map(move |b| (a, b)))
        .filter(|&(a, b)| p.coord(a) != p.coord(b))
        .collect();
    let Some(&(a, b)) = pairs.choose(&mut rng) else {
        return Ok(Trial::Skip);
    };
    let mut q = point(&mut rng);
    while collinear(p.coord(a), p.coord(b), &q) {
        q = point(&mut rng);
    }
    let g2 = zero_extension(&g, a, b)?;
    let ok = rank(&g2, &with_point(&p, q))? == rank(&g, &p)? + 2;
    Ok(if ok { Trial::Pass } else { Trial::Fail })
}

/// An independent framework stays independent after a 1-extension whose
/// three neighbours are not collinear, for some placement of `w`.
fn one_ext_trial(seed: u64) -> Result<Trial> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (g, p) = base(&mut rng)?;
    if rank(&g, &p)? != g.edge_count() {
        return Ok(Trial::Skip);
    }
    let mut options: Vec<(Edge, usize)> = Vec::new();
    for e in g.edges() {
        for x in (0..g.n()).filter(|&x| !e.contains(x)) {
            if !collinear(p.coord(e.0), p.coord(e.1), p.coord(x)) {
                options.push((e, x));
            }
        }
    }
    let Some(&(e, x)) = options.choose(&mut rng) else {
        return Ok(Trial::Skip);
    };
    let g2 = one_extension(&g, e, x)?;
    for _ in 0..PLACEMENT_ATTEMPTS {
        if rank(&g2, &with_point(&p, point(&mut rng)))? == g2.edge_count() {
            return Ok(Trial::Pass);
        }
    }
    Ok(Trial::Fail)
}

/// Splitting `z` with `z'` placed on `z` keeps an independent framework
/// independent when `z, z1, z2` are not collinear.
fn split_trial(seed: u64) -> Result<Trial> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (g, p) = base(&mut rng)?;
    if rank(&g, &p)? != g.edge_count() {
        return Ok(Trial::Skip);
    }
    let mut options: Vec<(usize, usize, usize)> = Vec::new();
    for z in 0..g.n() {
        let nb = g.neighbors(z);
        for (i, &a) in nb.as_slice().iter().enumerate() {
            for &b in &nb.as_slice()[i + 1..] {
                if !collinear(p.coord(z), p.coord(a), p.coord(b)) {
                    options.push((z, a, b));
                }
            }
        }
    }
    let Some(&(z, a, b)) = options.choose(&mut rng) else {
        return Ok(Trial::Skip);
    };
    let (mut u1, mut u3) = (VertexSet::new(), VertexSet::new());
    for y in g.neighbors(z).iter().filter(|&y| y != a && y != b) {
        if rng.gen_bool(0.5) {
            u1.insert(y);
        } else {
            u3.insert(y);
        }
    }
    let spec = SplitSpec { z, u1, u2: VertexSet::from([a, b]), u3 };
    let g2 = vertex_split(&g, &spec)?;
    let p2 = with_point(&p, p.coord(z).to_vec());
    Ok(if rank(&g2, &p2)? == g2.edge_count() { Trial::Pass } else { Trial::Fail })
}

/// Rigid block `Y` inside a rigid graph, replaced by `m >= 3` joined
/// representatives. A rigid `(G', p')` lifts to a rigid `G + K(Y)`, and `G`
/// itself is rigid once the `Y` coordinates are freed.
fn replacement_trial(seed: u64) -> Result<Trial> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = rng.gen_range(4..=6);
    let n = k + rng.gen_range(2..=5);
    let mut g = henneberg_random(k, rng.gen())?;
    while g.n() < n {
        let picks: Vec<usize> = (0..g.n()).choose_multiple(&mut rng, 2);
        g = zero_extension(&g, picks[0], picks[1])?;
    }
    for _ in 0..rng.gen_range(0..=2) {
        let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if a != b {
            g.add_edge(a, b)?;
        }
    }
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(&mut rng);
    let g = Graph::new(n, g.edges().map(|e| (perm[e.0], perm[e.1])))?;
    let y: VertexSet = (0..k).map(|v| perm[v]).collect();

    let m = rng.gen_range(3..=k);
    let mut order = y.as_slice().to_vec();
    order.shuffle(&mut rng);
    let mut blocks: Vec<VertexSet> = order[..m].iter().map(|&v| VertexSet::from([v])).collect();
    for &v in &order[m..] {
        let i = rng.gen_range(0..m);
        blocks[i].insert(v);
    }
    let r = replace_rigid_subgraph(&g, &y, &blocks)?;
    let p_small = sample_generic(&r.graph, 2, rng.gen());
    if !is_infinitesimally_rigid(&r.graph, &p_small)? {
        return Ok(Trial::Skip);
    }
    let lifted = r.lift(&p_small);
    let mut star = g.clone();
    for (i, a) in y.iter().enumerate() {
        for b in y.iter().skip(i + 1) {
            star.add_edge(a, b)?;
        }
    }
    if !is_infinitesimally_rigid(&star, &lifted)? {
        return Ok(Trial::Fail);
    }
    for _ in 0..PLACEMENT_ATTEMPTS {
        let mut p = lifted.clone();
        for v in y.iter() {
            p.set_coord(v, point(&mut rng));
        }
        if is_infinitesimally_rigid(&g, &p)? {
            return Ok(Trial::Pass);
        }
    }
    Ok(Trial::Fail)
}

fn tally(name: &str, target: usize, seed: u64, trial: TrialFn) -> Result<MoveTally> {
    let attempts = 4 * target;
    let results: Vec<(u64, Trial)> = (0..attempts as u64)
        .into_par_iter()
        .map(|i| {
            let s = derive_seed(seed, i);
            Ok((s, trial(s)?))
        })
        .collect::<Result<_>>()?;
    let mut out = MoveTally { name: name.to_string(), instances: 0, skipped: 0, failures: Vec::new() };
    for (s, r) in results {
        if out.instances == target {
            break;
        }
        match r {
            Trial::Pass => out.instances += 1,
            Trial::Fail => {
                out.instances += 1;
                out.failures.push(s);
            }
            Trial::Skip => out.skipped += 1,
        }
    }
    Ok(out)
}

/// Runs `target` valid instances of each move check.
pub fn extension_suite(target: usize, seed: u64) -> Result<ExtensionReport> {
    let start = Instant::now();
    let checks: [(&str, TrialFn); 4] = [
        ("0-extension", zero_ext_trial),
        ("1-extension", one_ext_trial),
        ("vertex-split", split_trial),
        ("rigid-replacement", replacement_trial),
    ];
    let moves = checks
        .iter()
        .enumerate()
        .map(|(i, (name, f))| tally(name, target, derive_seed(seed, 1000 + i as u64), *f))
        .collect::<Result<_>>()?;
    Ok(ExtensionReport { seed, target, moves, elapsed_ms: start.elapsed().as_millis() })
}
