use crate::error::{Error, Result};
use crate::graph::VertexSet;

use super::{pairs_within, val_set, AugmentedFamily, CompatibleFamily};

fn overlapping_pair(sets: &[VertexSet], limit: usize) -> Option<(usize, usize)> {
    (0..sets.len())
        .find_map(|i| (i + 1..sets.len()).find(|&j| sets[i].intersection_len(&sets[j]) > limit).map(|j| (i, j)))
}

/// Replaces the first pair of members sharing a vertex outside `S` by
/// their union.
pub fn merge_overlapping(h: &CompatibleFamily) -> Result<CompatibleFamily> {
    let (i, j) = overlapping_pair(h.sets(), h.s().len())
        .ok_or_else(|| Error::Precondition("no two members meet outside S".into()))?;
    let mut sets = h.sets().to_vec();
    let other = sets.remove(j);
    sets[i] = sets[i].union(&other);
    let out = CompatibleFamily::new(h.s().clone(), sets)?;
    assert!(out.val() < h.val(), "merging must lower the value");
    assert!(h.cov().is_subset(&out.cov()));
    Ok(out)
}

/// Absorbs `Y` into a family whose members meet exactly in `S`.
///
/// If `Y` meets `S` in at most one vertex and some member in two or more,
/// those members and `Y` become one member. If `Y` avoids `S` and meets at
/// least two members in exactly one vertex each, the first two of them are
/// merged with `Y`.
pub fn absorb_set(h: &CompatibleFamily, y: &VertexSet) -> Result<CompatibleFamily> {
    if !h.is_thin() {
        return Err(Error::Precondition("family members must meet exactly in S".into()));
    }
    let val_y = val_set(y, h.s())?;
    let s = h.s();
    let meets: Vec<usize> = h.sets().iter().map(|m| m.intersection_len(y)).collect();

    let out = if y.intersection_len(s) <= 1 && meets.iter().any(|&k| k >= 2) {
        let mut keep = Vec::new();
        let mut x = y.clone();
        for (m, &k) in h.sets().iter().zip(&meets) {
            if k >= 2 {
                x = x.union(m);
            } else {
                keep.push(m.clone());
            }
        }
        keep.push(x);
        let out = CompatibleFamily::new(s.clone(), keep)?;
        assert!(out.val() <= h.val() + val_y);
        out
    } else if y.intersection_len(s) == 0
        && meets.iter().filter(|&&k| k == 1).count() >= 2
        && meets.iter().all(|&k| k <= 1)
    {
        let mut hits = meets.iter().enumerate().filter(|(_, &k)| k == 1).map(|(i, _)| i);
        let (a, b) = (hits.next().unwrap(), hits.next().unwrap());
        let mut sets = h.sets().to_vec();
        let hb = sets.remove(b);
        sets[a] = sets[a].union(&hb).union(y);
        let out = CompatibleFamily::new(s.clone(), sets)?;
        assert_eq!(out.val(), h.val() + val_y);
        out
    } else {
        return Err(Error::Precondition(format!("{y} cannot be absorbed into the family")));
    };
    let mut want = h.cov();
    want.extend(pairs_within([y]));
    assert!(want.is_subset(&out.cov()));
    Ok(out)
}

/// Joins an `S1`-family and an `S2`-family into an `(S1 + S2)`-family. A
/// member of the first family is linked to a member of the second when
/// they share a vertex outside their own `S`; each connected component
/// becomes the union of its members together with `S1 + S2`. Components whose union is `S1 + S2`
/// itself are dropped.
pub fn combine_families(h1: &CompatibleFamily, h2: &CompatibleFamily) -> Result<CompatibleFamily> {
    if h1.s().intersection_len(h2.s()) == 0 {
        return Err(Error::Precondition(format!("{} and {} are disjoint", h1.s(), h2.s())));
    }
    let s = h1.s().union(h2.s());
    let members: Vec<&VertexSet> = h1.sets().iter().chain(h2.sets()).collect();
    let k1 = h1.len();
    let mut comp: Vec<usize> = (0..members.len()).collect();
    fn root(comp: &mut [usize], mut x: usize) -> usize {
        while comp[x] != x {
            comp[x] = comp[comp[x]];
            x = comp[x];
        }
        x
    }
    let outside: Vec<VertexSet> =
        h1.sets().iter().map(|m| m.difference(h1.s())).chain(h2.sets().iter().map(|m| m.difference(h2.s()))).collect();
    for i in 0..k1 {
        for j in k1..members.len() {
            if outside[i].intersection_len(&outside[j]) > 0 {
                let (a, b) = (root(&mut comp, i), root(&mut comp, j));
                comp[a.max(b)] = a.min(b);
            }
        }
    }
    let mut unions: Vec<(usize, VertexSet)> = Vec::new();
    for (i, m) in members.iter().enumerate() {
        let r = root(&mut comp, i);
        match unions.iter_mut().find(|(k, _)| *k == r) {
            Some((_, u)) => *u = u.union(m),
            None => unions.push((r, s.union(m))),
        }
    }
    let mut sets: Vec<VertexSet> = Vec::new();
    for (_, u) in unions {
        if u.len() > s.len() && !sets.contains(&u) {
            sets.push(u);
        }
    }
    if sets.is_empty() {
        return Err(Error::Precondition("every component collapses onto S1 + S2".into()));
    }
    let out = CompatibleFamily::new(s, sets)?;
    let cov = out.cov();
    assert!(h1.cov().is_subset(&cov) && h2.cov().is_subset(&cov));
    Ok(out)
}

/// Rewrites an augmented family into 1-thin form without raising its
/// value or losing coverage.
pub fn thin_out(l: &AugmentedFamily) -> AugmentedFamily {
    let s = l.s().clone();
    let mut h = l.h().to_vec();
    let mut x = l.x().to_vec();
    let start_val = l.val();
    let start_cov = l.cov();
    loop {
        if let Some((i, j)) = overlapping_pair(&h, s.len()) {
            let other = h.remove(j);
            h[i] = h[i].union(&other);
            continue;
        }
        if let Some((i, j)) = overlapping_pair(&x, 1) {
            let other = x.remove(j);
            x[i] = x[i].union(&other);
            continue;
        }
        if !h.is_empty() {
            let hu = h.iter().fold(VertexSet::new(), |acc, m| acc.union(m));
            if let Some(i) = x.iter().position(|y| y.intersection_len(&hu) >= 2) {
                let y = x.remove(i);
                if y.is_subset(&s) {
                    continue;
                }
                let fam = CompatibleFamily::new(s.clone(), h.clone()).expect("members stay proper supersets");
                h = if y.intersection_len(&s) >= 2 {
                    // Y + S joins as a new member; overlaps are merged next round
                    let mut next = h.clone();
                    next.push(y.union(&s));
                    next
                } else {
                    absorb_set(&fam, &y).expect("thin family absorbs a set meeting it twice").sets().to_vec()
                };
                continue;
            }
        }
        break;
    }
    let out = AugmentedFamily::new(s, h, x).expect("thinning keeps the family well formed");
    assert!(out.val() <= start_val);
    assert!(start_cov.is_subset(&out.cov()));
    debug_assert!(out.is_one_thin());
    out
}
