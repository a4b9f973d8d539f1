//! Python bindings. Reports cross the boundary as plain dicts and lists.

use std::collections::HashMap;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use serde_json::{json, Value};

use coincident_rigidity::checks::{check_graph, cross_validate, XvalConfig};
use coincident_rigidity::constructions::{henneberg_random, one_extension, zero_extension};
use coincident_rigidity::graph::parse_graph_with_t;
use coincident_rigidity::linalg::{generic_rank, CoincidenceSpec};
use coincident_rigidity::matroid::{
    greedy_rank, mt_rank_cover_min, IndependenceOracle, LamanOracle, MtOracle, RtOracle,
};
use coincident_rigidity::sparsity::{is_s_sparse, is_strongly_t_sparse, pebble_rank_graph};
use coincident_rigidity::{fixtures, Edge, Error, Graph, Result, VertexSet};

fn py_err(e: Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_py<'py>(py: Python<'py>, v: &Value) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.call_method1("loads", (v.to_string(),))
}

fn set(t: Option<Vec<usize>>) -> Option<VertexSet> {
    t.map(VertexSet::from)
}

fn rank_json(g: &Graph, t: Option<VertexSet>, d: usize, trials: usize, seed: u64) -> Result<Value> {
    let spec = match t {
        Some(t) if !t.is_empty() => CoincidenceSpec::new(t)?,
        _ => CoincidenceSpec::trivial(),
    };
    Ok(serde_json::to_value(generic_rank(g, &spec, d, trials, seed)?).expect("report serializes"))
}

fn sparse_json(g: &Graph, t: &VertexSet, strong: bool) -> Result<Value> {
    let v = if strong { is_strongly_t_sparse(g, t)? } else { is_s_sparse(g, t)? };
    Ok(json!({ "sparse": v.is_none(), "violation": v.map(|v| v.to_json(g)) }))
}

fn mrank_json(g: &Graph, t: &VertexSet, oracle: &str, d: usize, trials: usize, seed: u64) -> Result<Value> {
    let mut o: Box<dyn IndependenceOracle> = match oracle {
        "mt" => Box::new(MtOracle::new(g, t)?),
        "rt" => Box::new(RtOracle::new(g, t, d, trials, seed)?),
        "laman" => Box::new(LamanOracle::new(g)),
        other => return Err(Error::InvalidArgument(format!("unknown oracle {other:?}; use mt, rt or laman"))),
    };
    Ok(greedy_rank(o.as_mut(), &g.edge_list())?.to_json(g))
}

fn cover_json(g: &Graph, t: &VertexSet) -> Result<Value> {
    let r = mt_rank_cover_min(g, &g.edge_list(), t)?;
    Ok(json!({ "rank": r.rank, "witness": r.witness.to_json(g), "proven": r.proven }))
}

/// Simple undirected graph on vertices `0..n`.
#[pyclass(name = "Graph", module = "coincident_rigidity")]
struct PyGraph {
    inner: Graph,
}

#[pymethods]
impl PyGraph {
    #[new]
    #[pyo3(signature = (n, edges, labels = None))]
    fn new(n: usize, edges: Vec<(usize, usize)>, labels: Option<HashMap<usize, String>>) -> PyResult<Self> {
        let g = Graph::new(n, edges).map_err(py_err)?;
        Ok(PyGraph { inner: g.with_labels(labels.unwrap_or_default()) })
    }

    /// Parses graph JSON or a whitespace edge list; returns `(graph, T)`.
    #[staticmethod]
    fn parse(text: &str) -> PyResult<(Self, Option<Vec<usize>>)> {
        let (g, t) = parse_graph_with_t(text).map_err(py_err)?;
        Ok((PyGraph { inner: g }, t.map(|t| t.as_slice().to_vec())))
    }

    #[staticmethod]
    fn henneberg(n: usize, seed: u64) -> PyResult<Self> {
        Ok(PyGraph { inner: henneberg_random(n, seed).map_err(py_err)? })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn edge_count(&self) -> usize {
        self.inner.edge_count()
    }

    fn edges(&self) -> Vec<(usize, usize)> {
        self.inner.edges().map(|e| (e.0, e.1)).collect()
    }

    fn has_edge(&self, a: usize, b: usize) -> bool {
        self.inner.has_edge(a, b)
    }

    fn add_edge(&mut self, a: usize, b: usize) -> PyResult<bool> {
        self.inner.add_edge(a, b).map_err(py_err)
    }

    fn contract(&self, s: Vec<usize>) -> PyResult<Self> {
        Ok(PyGraph { inner: self.inner.contract(&VertexSet::from(s)).map_err(py_err)? })
    }

    fn zero_extension(&self, a: usize, b: usize) -> PyResult<Self> {
        Ok(PyGraph { inner: zero_extension(&self.inner, a, b).map_err(py_err)? })
    }

    fn one_extension(&self, u: usize, v: usize, x: usize) -> PyResult<Self> {
        Ok(PyGraph { inner: one_extension(&self.inner, Edge::new(u, v), x).map_err(py_err)? })
    }

    #[pyo3(signature = (t = None))]
    fn to_json(&self, t: Option<Vec<usize>>) -> String {
        self.inner.to_json(set(t).as_ref())
    }

    fn __len__(&self) -> usize {
        self.inner.n()
    }

    fn __repr__(&self) -> String {
        format!("Graph(n={}, edges={})", self.inner.n(), self.inner.edge_count())
    }
}

/// Maximum rigidity-matrix rank over sampled `T`-coincident realizations.
#[pyfunction]
#[pyo3(signature = (g, t = None, d = 2, trials = 3, seed = 42))]
fn rank<'py>(
    py: Python<'py>,
    g: &PyGraph,
    t: Option<Vec<usize>>,
    d: usize,
    trials: usize,
    seed: u64,
) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &rank_json(&g.inner, set(t), d, trials, seed).map_err(py_err)?)
}

#[pyfunction]
fn pebble_rank(g: &PyGraph) -> usize {
    pebble_rank_graph(&g.inner)
}

/// `{"sparse": bool, "violation": ...}` for `S`-sparsity, or strong
/// `T`-sparsity when `strong` is set.
#[pyfunction]
#[pyo3(signature = (g, t, strong = false))]
fn sparse<'py>(py: Python<'py>, g: &PyGraph, t: Vec<usize>, strong: bool) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &sparse_json(&g.inner, &VertexSet::from(t), strong).map_err(py_err)?)
}

#[pyfunction]
#[pyo3(signature = (g, t, oracle = "mt", d = 2, trials = 3, seed = 42))]
fn mrank<'py>(
    py: Python<'py>,
    g: &PyGraph,
    t: Vec<usize>,
    oracle: &str,
    d: usize,
    trials: usize,
    seed: u64,
) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &mrank_json(&g.inner, &VertexSet::from(t), oracle, d, trials, seed).map_err(py_err)?)
}

#[pyfunction]
fn cover_rank<'py>(py: Python<'py>, g: &PyGraph, t: Vec<usize>) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &cover_json(&g.inner, &VertexSet::from(t)).map_err(py_err)?)
}

/// Combinatorial and algebraic verdicts.
#[pyfunction]
#[pyo3(signature = (g, t, d = 2, trials = 3, seed = 42))]
fn check<'py>(
    py: Python<'py>,
    g: &PyGraph,
    t: Vec<usize>,
    d: usize,
    trials: usize,
    seed: u64,
) -> PyResult<Bound<'py, PyAny>> {
    let v = check_graph(&g.inner, &VertexSet::from(t), d, trials, seed).map_err(py_err)?;
    to_py(py, &v.to_json())
}

#[pyfunction]
#[pyo3(signature = (n_max = 7, t_sizes = vec![1, 2, 3], samples = 500, seed = 42))]
fn xval<'py>(
    py: Python<'py>,
    n_max: usize,
    t_sizes: Vec<usize>,
    samples: usize,
    seed: u64,
) -> PyResult<Bound<'py, PyAny>> {
    let cfg = XvalConfig { n_max, t_sizes, samples, seed, ..XvalConfig::default() };
    let r = py.detach(|| cross_validate(&cfg)).map_err(py_err)?;
    let mut v = serde_json::to_value(&r).expect("report serializes");
    v["passed"] = json!(r.passed());
    to_py(py, &v)
}

#[pyfunction]
fn fixture_names() -> Vec<String> {
    fixtures::all().into_iter().map(|f| f.name).collect()
}

/// `(graph, T)` for a bundled fixture.
#[pyfunction]
fn fixture(name: &str) -> PyResult<(PyGraph, Option<Vec<usize>>)> {
    let f = fixtures::by_name(name).ok_or_else(|| PyValueError::new_err(format!("no fixture named {name:?}")))?;
    Ok((PyGraph { inner: f.graph }, f.t.map(|t| t.as_slice().to_vec())))
}

#[pymodule]
#[pyo3(name = "coincident_rigidity")]
fn python_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGraph>()?;
    m.add_function(wrap_pyfunction!(rank, m)?)?;
    m.add_function(wrap_pyfunction!(pebble_rank, m)?)?;
    m.add_function(wrap_pyfunction!(sparse, m)?)?;
    m.add_function(wrap_pyfunction!(mrank, m)?)?;
    m.add_function(wrap_pyfunction!(cover_rank, m)?)?;
    m.add_function(wrap_pyfunction!(check, m)?)?;
    m.add_function(wrap_pyfunction!(xval, m)?)?;
    m.add_function(wrap_pyfunction!(fixture_names, m)?)?;
    m.add_function(wrap_pyfunction!(fixture, m)?)?;
    Ok(())
}
