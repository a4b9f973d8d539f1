use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Edge, Graph, VertexSet};
use crate::sparsity::{thin_out, AugmentedFamily, CoverSolver, LY_CAP};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MtCoverRank {
    pub rank: usize,
    /// A 1-thin augmented family attaining the minimum.
    pub witness: AugmentedFamily,
    /// False when `|T| >= 4`, where the formula is not known to give the rank.
    pub proven: bool,
}

struct Best {
    val: u32,
    s: u32,
    blocks: Vec<u32>,
}

struct Search<'a> {
    solver: &'a mut CoverSolver,
    full: u64,
    s_mask: u32,
    elems: Vec<usize>,
    /// Block index of each element of `elems`, or `None` when unused.
    assign: Vec<Option<usize>>,
    blocks: Vec<u32>,
    best: &'a mut Best,
}

impl Search<'_> {
    /// Restricted-growth enumeration of partial partitions; the family value
    /// only grows along a branch, so branches at or above the best are cut.
    fn run(&mut self, k: usize, val: u32) {
        if val >= self.best.val {
            return;
        }
        if k == self.elems.len() {
            if self.blocks.is_empty() {
                return;
            }
            let covered = self.blocks.iter().fold(0u64, |acc, &b| acc | self.solver.inside(self.s_mask | b));
            let total = val + self.solver.solve(self.full & !covered);
            if total < self.best.val {
                *self.best = Best { val: total, s: self.s_mask, blocks: self.blocks.clone() };
            }
            return;
        }
        let bit = 1u32 << self.elems[k];
        self.assign[k] = None;
        self.run(k + 1, val);
        for j in 0..self.blocks.len() {
            self.blocks[j] |= bit;
            self.assign[k] = Some(j);
            self.run(k + 1, val + 2);
            self.blocks[j] &= !bit;
        }
        self.blocks.push(bit);
        self.assign[k] = Some(self.blocks.len() - 1);
        self.run(k + 1, val + 1);
        self.blocks.pop();
        self.assign[k] = None;
    }
}

/// Minimum of `val_S(L)` over `S` in `T` with `|S| >= 2` and 1-thin
/// augmented `S`-compatible families `L` covering `edges - E(T)`.
///
/// A family with no `H` part is admissible for every `S`; it is reported
/// under the first `S` in size-then-lex order. Ties keep the first `S`.
pub fn mt_rank_cover_min(g: &Graph, edges: &[Edge], t: &VertexSet) -> Result<MtCoverRank> {
    if g.n() > LY_CAP {
        return Err(Error::CapExceeded { n: g.n(), cap: LY_CAP });
    }
    g.check_set(t)?;
    if t.len() < 2 {
        return Err(Error::Precondition(format!("the minimum ranges over S in T with |S| >= 2, but T = {t}")));
    }
    if let Some(e) = edges.iter().find(|e| !g.has_edge(e.0, e.1)) {
        return Err(Error::InvalidArgument(format!("{e} is not an edge of the graph")));
    }
    let mut universe: Vec<Edge> = edges.iter().copied().filter(|e| !(t.contains(e.0) && t.contains(e.1))).collect();
    universe.sort();
    universe.dedup();

    let mut solver = CoverSolver::new(g.n(), &universe)?;
    let full = solver.full();
    let subsets: Vec<VertexSet> = t.nonempty_subsets().into_iter().filter(|s| s.len() >= 2).collect();

    let mut best = Best { val: solver.solve(full), s: subsets[0].to_mask() as u32, blocks: Vec::new() };
    for s in &subsets {
        let s_mask = s.to_mask() as u32;
        let elems: Vec<usize> = (0..g.n()).filter(|v| !s.contains(*v)).collect();
        let mut search = Search {
            solver: &mut solver,
            full,
            s_mask,
            assign: vec![None; elems.len()],
            elems,
            blocks: Vec::new(),
            best: &mut best,
        };
        search.run(0, 2 * (s.len() as u32 - 1));
    }

    let s = VertexSet::from_mask(best.s as u64);
    let h: Vec<VertexSet> = best.blocks.iter().map(|&b| VertexSet::from_mask((best.s | b) as u64)).collect();
    let covered = best.blocks.iter().fold(0u64, |acc, &b| acc | solver.inside(best.s | b));
    let x = solver.cover(full & !covered);
    let raw = AugmentedFamily::new(s, h, x)?;
    let witness = thin_out(&raw);
    assert_eq!(witness.val(), best.val as usize, "an optimal family stays optimal after thinning");
    assert!(witness.covers(&universe));
    Ok(MtCoverRank { rank: best.val as usize, witness, proven: t.len() <= 3 })
}
