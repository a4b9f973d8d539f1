use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};

use super::{CompatibleFamily, SparsityViolation, ViolationKind, Witness};

pub const DEFAULT_CAP: usize = 12;

/// Largest cap accepted at all; subset tables have `2^n` entries.
const HARD_CAP: usize = 22;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SparsityConfig {
    pub cap: usize,
}

impl Default for SparsityConfig {
    fn default() -> Self {
        SparsityConfig { cap: DEFAULT_CAP }
    }
}

/// `i(X)` for every vertex mask.
pub(crate) fn induced_counts(g: &Graph) -> Vec<u32> {
    let n = g.n();
    let adj = g.adjacency_masks();
    let mut c = vec![0u32; 1 << n];
    for mask in 1usize..(1 << n) {
        let low = mask.trailing_zeros() as usize;
        let rest = mask & (mask - 1);
        c[mask] = c[rest] + (adj[low] as usize & rest).count_ones();
    }
    c
}

fn check_cap(g: &Graph, cfg: SparsityConfig) -> Result<()> {
    let cap = cfg.cap.min(HARD_CAP);
    if g.n() > cap {
        return Err(Error::CapExceeded { n: g.n(), cap });
    }
    Ok(())
}

fn set_violated(c: &[u32], mask: usize, s_mask: usize) -> bool {
    let k = mask.count_ones() as i64;
    let val = if mask & !s_mask == 0 { 0 } else { 2 * k - 3 };
    c[mask] as i64 > val
}

/// Lexicographic `k`-subsets of `0..n`.
fn for_each_combination(n: usize, k: usize, mut f: impl FnMut(&[usize]) -> bool) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        if f(&idx) {
            return;
        }
        let Some(i) = (0..k).rev().find(|&i| idx[i] < n - k + i) else { return };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

fn set_violation(g: &Graph, c: &[u32], s: &VertexSet) -> Option<SparsityViolation> {
    let n = g.n();
    let s_mask = s.to_mask() as usize;
    let any = (1usize..1 << n).any(|m| m.count_ones() >= 2 && set_violated(c, m, s_mask));
    if !any {
        return None;
    }
    for k in 2..=n {
        let mut found = None;
        for_each_combination(n, k, |idx| {
            let mask = idx.iter().fold(0usize, |m, &v| m | 1 << v);
            if set_violated(c, mask, s_mask) {
                found = Some(mask);
                true
            } else {
                false
            }
        });
        if let Some(mask) = found {
            let x = VertexSet::from_mask(mask as u64);
            let rhs = if mask & !s_mask == 0 { 0 } else { 2 * x.len() - 3 };
            return Some(SparsityViolation {
                s: s.clone(),
                kind: ViolationKind::Set,
                witness: Witness::Set(x),
                lhs: c[mask] as usize,
                rhs,
            });
        }
    }
    unreachable!("a violating set exists")
}

/// Families whose members meet exactly in `S` are `S` plus the blocks of a
/// partial partition of `R = V - S`. With `w(B) = i(S+B) - i(S) - 2|B| + 1`
/// a violation is a packing of blocks with total weight above
/// `2|S| - 2 - i(S)`.
struct FamilySearch {
    /// Vertices of `R`, ascending; bit `k` of a block mask is `elems[k]`.
    elems: Vec<usize>,
    s_mask: usize,
    i_s: i64,
    w: Vec<i64>,
    /// Best total weight of a packing inside each mask (possibly empty).
    f: Vec<i64>,
    thr: i64,
}

impl FamilySearch {
    fn new(n: usize, c: &[u32], s: &VertexSet) -> Self {
        let s_mask = s.to_mask() as usize;
        let elems: Vec<usize> = (0..n).filter(|v| s_mask >> v & 1 == 0).collect();
        let m = elems.len();
        let i_s = c[s_mask] as i64;
        let full =
            |b: usize| -> usize { (0..m).filter(|k| b >> k & 1 == 1).fold(s_mask, |acc, k| acc | 1 << elems[k]) };
        let mut w = vec![0i64; 1 << m];
        for (b, wb) in w.iter_mut().enumerate().skip(1) {
            let size = b.count_ones() as i64;
            *wb = c[full(b)] as i64 - i_s - 2 * size + 1;
        }
        let mut f = vec![0i64; 1 << m];
        for b in 1usize..1 << m {
            let low = b & b.wrapping_neg();
            let rest = b ^ low;
            let mut best = f[rest];
            let mut sub = rest;
            loop {
                let block = sub | low;
                best = best.max(w[block] + f[rest & !sub]);
                if sub == 0 {
                    break;
                }
                sub = (sub - 1) & rest;
            }
            f[b] = best;
        }
        let thr = 2 * s.len() as i64 - 2 - i_s;
        FamilySearch { elems, s_mask, i_s, w, f, thr }
    }

    fn all(&self) -> usize {
        (1 << self.elems.len()) - 1
    }

    fn violated(&self) -> bool {
        let all = self.all();
        let mut b = all;
        while b != 0 {
            if self.w[b] + self.f[all & !b] > self.thr {
                return true;
            }
            b = (b - 1) & all;
        }
        false
    }

    /// Lexicographically smallest violating block sequence, blocks listed
    /// by their least element and compared as sorted lists.
    fn witness(&self) -> Vec<usize> {
        let mut blocks = Vec::new();
        let mut acc = 0i64;
        let mut avail = self.all();
        loop {
            let block =
                self.first_feasible(avail, acc).expect("a feasible block exists while the search is incomplete");
            acc += self.w[block];
            blocks.push(block);
            if acc > self.thr {
                return blocks;
            }
            let low = block.trailing_zeros();
            avail &= !block & !((2usize << low) - 1);
        }
    }

    fn first_feasible(&self, avail: usize, acc: i64) -> Option<usize> {
        let feasible = |block: usize| {
            let low = block.trailing_zeros();
            let rest = avail & !block & !((2usize << low) - 1);
            acc + self.w[block] + self.f[rest] > self.thr
        };
        fn dfs(block: usize, last: usize, avail: usize, feasible: &dyn Fn(usize) -> bool) -> Option<usize> {
            if feasible(block) {
                return Some(block);
            }
            let mut rest = avail & !((2usize << last) - 1);
            while rest != 0 {
                let y = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                if let Some(b) = dfs(block | 1 << y, y, avail, feasible) {
                    return Some(b);
                }
            }
            None
        }
        let mut rest = avail;
        while rest != 0 {
            let x = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if let Some(b) = dfs(1 << x, x, avail, &feasible) {
                return Some(b);
            }
        }
        None
    }

    fn lift(&self, block: usize) -> VertexSet {
        let mut mask = self.s_mask;
        for (k, &v) in self.elems.iter().enumerate() {
            if block >> k & 1 == 1 {
                mask |= 1 << v;
            }
        }
        VertexSet::from_mask(mask as u64)
    }

    fn violation(&self, s: &VertexSet) -> SparsityViolation {
        let blocks = self.witness();
        let lhs = self.i_s + blocks.iter().map(|&b| self.w[b] + 2 * b.count_ones() as i64 - 1).sum::<i64>();
        let family = CompatibleFamily::new(s.clone(), blocks.iter().map(|&b| self.lift(b)).collect())
            .expect("lifted blocks are proper supersets");
        let rhs = family.val();
        debug_assert!(lhs > rhs as i64);
        SparsityViolation {
            s: s.clone(),
            kind: ViolationKind::Family,
            witness: Witness::Family(family),
            lhs: lhs as usize,
            rhs,
        }
    }
}

fn s_violation(g: &Graph, c: &[u32], s: &VertexSet) -> Option<SparsityViolation> {
    set_violation(g, c, s).or_else(|| {
        let search = FamilySearch::new(g.n(), c, s);
        search.violated().then(|| search.violation(s))
    })
}

fn s_sparse_fast(g: &Graph, c: &[u32], s: &VertexSet) -> bool {
    let s_mask = s.to_mask() as usize;
    let sets_ok = (1usize..1 << g.n()).all(|m| m.count_ones() < 2 || !set_violated(c, m, s_mask));
    sets_ok && !FamilySearch::new(g.n(), c, s).violated()
}

fn check_s(g: &Graph, s: &VertexSet) -> Result<()> {
    g.check_set(s)?;
    if s.is_empty() {
        return Err(Error::InvalidArgument("S must be nonempty".into()));
    }
    Ok(())
}

pub fn is_s_sparse(g: &Graph, s: &VertexSet) -> Result<Option<SparsityViolation>> {
    is_s_sparse_with(g, s, SparsityConfig::default())
}

/// `None` when `g` is `S`-sparse, otherwise the smallest violation: sets
/// before families, sets by size then lexicographically.
pub fn is_s_sparse_with(g: &Graph, s: &VertexSet, cfg: SparsityConfig) -> Result<Option<SparsityViolation>> {
    check_cap(g, cfg)?;
    check_s(g, s)?;
    Ok(s_violation(g, &induced_counts(g), s))
}

pub fn is_strongly_t_sparse(g: &Graph, t: &VertexSet) -> Result<Option<SparsityViolation>> {
    is_strongly_t_sparse_with(g, t, SparsityConfig::default())
}

/// First violation over nonempty `S` of `T` in size-then-lex order.
pub fn is_strongly_t_sparse_with(g: &Graph, t: &VertexSet, cfg: SparsityConfig) -> Result<Option<SparsityViolation>> {
    check_cap(g, cfg)?;
    check_s(g, t)?;
    let c = induced_counts(g);
    Ok(t.nonempty_subsets().iter().find_map(|s| s_violation(g, &c, s)))
}

/// Boolean form of the strong check, without witness extraction.
pub fn strongly_sparse_fast(g: &Graph, t: &VertexSet, cfg: SparsityConfig) -> Result<bool> {
    check_cap(g, cfg)?;
    check_s(g, t)?;
    let c = induced_counts(g);
    Ok(t.nonempty_subsets().iter().all(|s| s_sparse_fast(g, &c, s)))
}
