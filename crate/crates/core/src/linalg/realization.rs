use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{VertexId, VertexSet};

/// Exact rational coordinates for vertices `0..len()`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Realization {
    dim: usize,
    coords: Vec<Vec<BigRational>>,
}

impl Realization {
    pub fn new(dim: usize, coords: Vec<Vec<BigRational>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidArgument("dimension must be at least 1".into()));
        }
        if let Some((v, c)) = coords.iter().enumerate().find(|(_, c)| c.len() != dim) {
            return Err(Error::InvalidArgument(format!("vertex {v} has {} coordinates, expected {dim}", c.len())));
        }
        Ok(Realization { dim, coords })
    }

    pub fn from_integers(dim: usize, coords: &[Vec<i64>]) -> Self {
        let coords =
            coords.iter().map(|c| c.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect()).collect();
        Realization::new(dim, coords).expect("integer coordinates have the right length")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn coord(&self, v: VertexId) -> &[BigRational] {
        &self.coords[v]
    }

    pub fn set_coord(&mut self, v: VertexId, c: Vec<BigRational>) {
        assert_eq!(c.len(), self.dim);
        if v >= self.coords.len() {
            self.coords.resize(v + 1, vec![BigRational::default(); self.dim]);
        }
        self.coords[v] = c;
    }

    pub fn push(&mut self, c: Vec<BigRational>) -> VertexId {
        assert_eq!(c.len(), self.dim);
        self.coords.push(c);
        self.coords.len() - 1
    }

    pub fn to_file(&self) -> RealizationFile {
        RealizationFile {
            d: self.dim,
            coords: self
                .coords
                .iter()
                .enumerate()
                .map(|(v, c)| (v.to_string(), c.iter().map(|x| x.to_string()).collect()))
                .collect(),
        }
    }
}

/// Realization JSON: `{"d": 2, "coords": {"0": ["1/2", "3"], ...}}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RealizationFile {
    pub d: usize,
    pub coords: BTreeMap<String, Vec<String>>,
}

impl RealizationFile {
    /// Vertex ids must be exactly `0..k` for some `k`.
    pub fn into_realization(self) -> Result<Realization> {
        let mut coords = vec![None; self.coords.len()];
        for (k, c) in self.coords {
            let v: usize = k.parse().map_err(|_| Error::Parse(format!("coordinate key {k:?} is not a vertex id")))?;
            let slot = coords.get_mut(v).ok_or_else(|| Error::Parse(format!("vertex ids must be dense, found {v}")))?;
            *slot = Some(c.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>()?);
        }
        let coords = coords.into_iter().map(|c| c.expect("dense keys fill every slot")).collect();
        Realization::new(self.d, coords)
    }
}

/// Parses `"p/q"` or `"p"`.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::Parse(format!("invalid rational {s:?}"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s.trim(), "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den == BigInt::from(0) {
        return Err(bad());
    }
    Ok(BigRational::new(num, den))
}

/// The vertex set placed at one point, with its reference vertex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoincidenceSpec {
    t: VertexSet,
    reference: VertexId,
}

impl CoincidenceSpec {
    /// Uses `min(t)` as the reference vertex.
    pub fn new(t: VertexSet) -> Result<Self> {
        let reference = t.first().ok_or_else(|| Error::InvalidArgument("coincident set must be nonempty".into()))?;
        Ok(CoincidenceSpec { t, reference })
    }

    pub fn with_reference(t: VertexSet, reference: VertexId) -> Result<Self> {
        if !t.contains(reference) {
            return Err(Error::InvalidArgument(format!("reference {reference} is not in {t}")));
        }
        Ok(CoincidenceSpec { t, reference })
    }

    /// No coincidences: `T = {0}`.
    pub fn trivial() -> Self {
        CoincidenceSpec { t: VertexSet::from([0]), reference: 0 }
    }

    pub fn t(&self) -> &VertexSet {
        &self.t
    }

    pub fn reference(&self) -> VertexId {
        self.reference
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals() {
        assert_eq!(parse_rational("3/6").unwrap(), BigRational::new(1.into(), 2.into()));
        assert_eq!(parse_rational("-4").unwrap(), BigRational::from_integer((-4).into()));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn realization_json_round_trip() {
        let p = Realization::new(
            2,
            vec![
                vec![parse_rational("1/2").unwrap(), parse_rational("3").unwrap()],
                vec![parse_rational("-7/3").unwrap(), parse_rational("0").unwrap()],
            ],
        )
        .unwrap();
        let json = serde_json::to_string(&p.to_file()).unwrap();
        assert_eq!(json, r#"{"d":2,"coords":{"0":["1/2","3"],"1":["-7/3","0"]}}"#);
        let back: RealizationFile = serde_json::from_str(&json).unwrap();
        assert_eq!(back.into_realization().unwrap(), p);
    }

    #[test]
    fn sparse_keys_rejected() {
        let f: RealizationFile = serde_json::from_str(r#"{"d":1,"coords":{"0":["1"],"2":["3"]}}"#).unwrap();
        assert!(f.into_realization().is_err());
        let short: RealizationFile = serde_json::from_str(r#"{"d":2,"coords":{"0":["1"]}}"#).unwrap();
        assert!(short.into_realization().is_err());
    }

    #[test]
    fn coincidence_spec() {
        let s = CoincidenceSpec::new(VertexSet::from([4, 2])).unwrap();
        assert_eq!(s.reference(), 2);
        assert!(CoincidenceSpec::new(VertexSet::new()).is_err());
        assert!(CoincidenceSpec::with_reference(VertexSet::from([1]), 3).is_err());
    }
}
