use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Edge, Graph, VertexSet};

pub const LY_CAP: usize = 10;

/// Covers are searched over vertex masks, so the solver itself stops here.
const SOLVER_VERTEX_LIMIT: usize = 16;

/// Minimum of `sum (2|X| - 3)` over covers of a fixed edge set by vertex
/// sets, memoized on the set of still uncovered edges.
///
/// Only sets spanning a connected subgraph of the universe with at least
/// `2|X| - 3` universe edges are tried: any other set can be split or
/// shrunk without raising the value.
pub struct CoverSolver {
    universe: Vec<Edge>,
    /// Universe edges inside each vertex mask.
    inside: Vec<u64>,
    /// Candidates `(cost, vertex mask)` containing each universe edge.
    by_edge: Vec<Vec<(u32, u32)>>,
    memo: HashMap<u64, (u32, u32)>,
}

impl CoverSolver {
    pub fn new(n: usize, universe: &[Edge]) -> Result<Self> {
        if n > SOLVER_VERTEX_LIMIT {
            return Err(Error::CapExceeded { n, cap: SOLVER_VERTEX_LIMIT });
        }
        if universe.len() > 64 {
            return Err(Error::InvalidArgument(format!("{} edges exceed the 64-edge cover limit", universe.len())));
        }
        let mut inside = vec![0u64; 1 << n];
        let mut adj = vec![0u32; n];
        for (k, e) in universe.iter().enumerate() {
            if e.1 >= n {
                return Err(Error::UnknownVertex { vertex: e.1, n });
            }
            adj[e.0] |= 1 << e.1;
            adj[e.1] |= 1 << e.0;
            let pair = (1usize << e.0) | (1usize << e.1);
            for (mask, slot) in inside.iter_mut().enumerate() {
                if mask & pair == pair {
                    *slot |= 1 << k;
                }
            }
        }
        let mut by_edge = vec![Vec::new(); universe.len()];
        for mask in 1u32..(1 << n) {
            let size = mask.count_ones();
            if size < 2 || inside[mask as usize].count_ones() < 2 * size - 3 || !connected(mask, &adj) {
                continue;
            }
            let cost = 2 * size - 3;
            let mut edges = inside[mask as usize];
            while edges != 0 {
                let k = edges.trailing_zeros() as usize;
                edges &= edges - 1;
                by_edge[k].push((cost, mask));
            }
        }
        for list in &mut by_edge {
            list.sort_unstable();
        }
        Ok(CoverSolver { universe: universe.to_vec(), inside, by_edge, memo: HashMap::new() })
    }

    pub fn universe(&self) -> &[Edge] {
        &self.universe
    }

    pub fn full(&self) -> u64 {
        if self.universe.len() == 64 {
            u64::MAX
        } else {
            (1u64 << self.universe.len()) - 1
        }
    }

    /// Universe edges spanned by a vertex mask.
    pub fn inside(&self, mask: u32) -> u64 {
        self.inside[mask as usize]
    }

    /// Minimum cover value of the universe edges in `rem`.
    pub fn solve(&mut self, rem: u64) -> u32 {
        if rem == 0 {
            return 0;
        }
        if let Some(&(v, _)) = self.memo.get(&rem) {
            return v;
        }
        let e = rem.trailing_zeros() as usize;
        let mut best = (u32::MAX, 0);
        for i in 0..self.by_edge[e].len() {
            let (cost, mask) = self.by_edge[e][i];
            if cost >= best.0 {
                break;
            }
            let v = cost + self.solve(rem & !self.inside[mask as usize]);
            if v < best.0 {
                best = (v, mask);
            }
        }
        self.memo.insert(rem, best);
        best.0
    }

    /// An optimal cover of `rem`.
    pub fn cover(&mut self, rem: u64) -> Vec<VertexSet> {
        let mut out = Vec::new();
        let mut rem = rem;
        while rem != 0 {
            self.solve(rem);
            let mask = self.memo[&rem].1;
            out.push(VertexSet::from_mask(mask as u64));
            rem &= !self.inside[mask as usize];
        }
        out
    }
}

fn connected(mask: u32, adj: &[u32]) -> bool {
    let start = mask & mask.wrapping_neg();
    let mut seen = start;
    let mut frontier = start;
    while frontier != 0 {
        let v = frontier.trailing_zeros() as usize;
        frontier &= frontier - 1;
        let new = adj[v] & mask & !seen;
        seen |= new;
        frontier |= new;
    }
    seen == mask
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoverRank {
    pub rank: usize,
    /// A 1-thin cover attaining the minimum.
    pub cover: Vec<VertexSet>,
}

/// Minimum of `sum (2|X| - 3)` over 1-thin covers of `edges`.
pub fn ly_rank_bruteforce(g: &Graph, edges: &[Edge]) -> Result<CoverRank> {
    if g.n() > LY_CAP {
        return Err(Error::CapExceeded { n: g.n(), cap: LY_CAP });
    }
    let mut universe: Vec<Edge> = edges.to_vec();
    universe.sort();
    universe.dedup();
    if let Some(e) = universe.iter().find(|e| !g.has_edge(e.0, e.1)) {
        return Err(Error::InvalidArgument(format!("{e} is not an edge of the graph")));
    }
    let mut solver = CoverSolver::new(g.n(), &universe)?;
    let full = solver.full();
    let rank = solver.solve(full) as usize;
    let cover = solver.cover(full);
    // merging two sets meeting in two vertices lowers the value, so an
    // optimal cover is already 1-thin
    debug_assert!((0..cover.len()).all(|i| (i + 1..cover.len()).all(|j| cover[i].intersection_len(&cover[j]) <= 1)));
    Ok(CoverRank { rank, cover })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sparsity::pebble_rank_graph;

    #[test]
    fn examples() {
        let k4 = Graph::complete(4);
        let r = ly_rank_bruteforce(&k4, &k4.edge_list()).unwrap();
        assert_eq!(r.rank, 5);
        assert_eq!(r.cover, vec![VertexSet::from([0, 1, 2, 3])]);

        let bowtie = Graph::new(5, [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4)]).unwrap();
        assert_eq!(ly_rank_bruteforce(&bowtie, &bowtie.edge_list()).unwrap().rank, 6);

        assert_eq!(ly_rank_bruteforce(&k4, &[]).unwrap().rank, 0);
        assert!(ly_rank_bruteforce(&Graph::empty(11), &[]).is_err());
        assert!(ly_rank_bruteforce(&Graph::complete(3), &[Edge(0, 1), Edge(0, 1)]).is_ok());
        assert!(ly_rank_bruteforce(&Graph::empty(3), &[Edge(0, 1)]).is_err());
    }

    #[test]
    fn complete_bipartite_5_5() {
        let g = Graph::complete_bipartite(5, 5);
        let r = ly_rank_bruteforce(&g, &g.edge_list()).unwrap();
        assert_eq!(r.rank, 17);
        assert_eq!(pebble_rank_graph(&g), 17);
    }

    #[test]
    fn random_small_graphs_match_pebble_game() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let n = rng.gen_range(2..=8);
            let mut g = Graph::empty(n);
            for a in 0..n {
                for b in a + 1..n {
                    if rng.gen_bool(0.45) {
                        g.add_edge(a, b).unwrap();
                    }
                }
            }
            let r = ly_rank_bruteforce(&g, &g.edge_list()).unwrap();
            assert_eq!(r.rank, pebble_rank_graph(&g), "{:?}", g.edge_list());
            let total: usize = r.cover.iter().map(|x| 2 * x.len() - 3).sum();
            assert_eq!(total, r.rank);
        }
    }
}
