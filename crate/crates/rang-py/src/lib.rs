//! Python bindings. Node ids, levels, and weights cross the boundary as plain
//! tuples; structured reports cross as JSON strings.

use std::collections::BTreeSet;

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use rang::centrality::{centrality_ranking, detect_leaders as detect, PathLength};
use rang::community::{louvain as louvain_rs, to_undirected};
use rang::compare::{
    combined_score as cs_rs, jaccard_leadership, nmi_partitions,
};
use rang::generate::{generate_ensemble, GenConfig, Model};
use rang::ingest::{load_dataset as load_rs, save_dataset as save_rs};
use rang::model::{validate_network, validate_partition, Edge, Group, NodeRecord};
use rang::stability::{
    exact_match as exact_rs, flexible_match as flexible_rs, stability_verdict, Matching,
};

fn runtime_err(e: impl std::fmt::Display) -> PyErr {
    PyRuntimeError::new_err(e.to_string())
}

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Directed weighted network with hierarchy levels on the nodes.
#[pyclass(name = "Network")]
#[derive(Clone)]
struct PyNetwork {
    inner: rang::Network,
}

#[pymethods]
impl PyNetwork {
    /// nodes: [(id, level)], edges: [(source, target, weight)]
    #[new]
    fn new(nodes: Vec<(u64, u8)>, edges: Vec<(u64, u64, u64)>) -> PyResult<Self> {
        let mut inner = rang::Network::new(
            nodes.into_iter().map(|(id, level)| NodeRecord { id, level }).collect(),
            edges
                .into_iter()
                .map(|(source, target, weight)| Edge { source, target, weight })
                .collect(),
        );
        inner.canonicalize();
        let violations = validate_network(&inner);
        if !violations.is_empty() {
            return Err(value_err(
                violations.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "),
            ));
        }
        Ok(PyNetwork { inner })
    }

    #[getter]
    fn nodes(&self) -> Vec<(u64, u8)> {
        self.inner.nodes.iter().map(|n| (n.id, n.level)).collect()
    }

    #[getter]
    fn edges(&self) -> Vec<(u64, u64, u64)> {
        self.inner.edges.iter().map(|e| (e.source, e.target, e.weight)).collect()
    }

    #[getter]
    fn total_weight(&self) -> u64 {
        self.inner.total_weight()
    }

    fn __len__(&self) -> usize {
        self.inner.nodes.len()
    }

    fn __repr__(&self) -> String {
        format!(
            "Network(nodes={}, edges={}, total_weight={})",
            self.inner.nodes.len(),
            self.inner.edges.len(),
            self.inner.total_weight()
        )
    }
}

/// Group partition over the level-1 nodes of a network.
#[pyclass(name = "Partition")]
#[derive(Clone)]
struct PyPartition {
    inner: rang::GroupPartition,
}

#[pymethods]
impl PyPartition {
    /// groups: [(gid, members, leader or None, independent)]
    #[new]
    fn new(groups: Vec<(u64, Vec<u64>, Option<u64>, bool)>) -> Self {
        let mut inner = rang::GroupPartition::new(
            groups
                .into_iter()
                .map(|(gid, members, leader, independent)| Group {
                    gid,
                    members: members.into_iter().collect(),
                    leader,
                    independent,
                })
                .collect(),
        );
        inner.canonicalize();
        PyPartition { inner }
    }

    #[getter]
    fn groups(&self) -> Vec<(u64, Vec<u64>, Option<u64>, bool)> {
        self.inner
            .groups
            .iter()
            .map(|g| {
                (g.gid, g.members.iter().copied().collect(), g.leader, g.independent)
            })
            .collect()
    }

    fn __len__(&self) -> usize {
        self.inner.groups.len()
    }

    fn __repr__(&self) -> String {
        format!("Partition(groups={})", self.inner.groups.len())
    }
}

/// Read nodes.csv, edges.csv, and groups.json from a directory.
#[pyfunction]
fn load_dataset(path: &str) -> PyResult<(PyNetwork, PyPartition)> {
    let (net, part) = load_rs(path).map_err(runtime_err)?;
    Ok((PyNetwork { inner: net }, PyPartition { inner: part }))
}

/// Write the dataset back out in canonical order.
#[pyfunction]
fn save_dataset(network: &PyNetwork, partition: &PyPartition, path: &str) -> PyResult<()> {
    save_rs(&network.inner, &partition.inner, path).map_err(runtime_err)
}

/// All violations of the structural rules, as strings. Empty means valid.
#[pyfunction]
fn validate(network: &PyNetwork, partition: &PyPartition) -> Vec<String> {
    let mut out: Vec<String> =
        validate_network(&network.inner).iter().map(|v| v.to_string()).collect();
    let (violations, warnings) = validate_partition(&network.inner, &partition.inner);
    out.extend(violations.iter().map(|v| v.to_string()));
    out.extend(warnings);
    out
}

/// Edge-class census of the network under the partition, as JSON.
#[pyfunction]
fn summarize(network: &PyNetwork, partition: &PyPartition) -> PyResult<String> {
    let summary =
        rang::classify::summarize(&network.inner, &partition.inner).map_err(value_err)?;
    serde_json::to_string_pretty(&summary).map_err(runtime_err)
}

fn parse_mode(unit_lengths: bool) -> PathLength {
    if unit_lengths {
        PathLength::Unit
    } else {
        PathLength::InverseWeight
    }
}

/// Generate an anonymized ensemble. Returns a list of
/// (network, partition, id_map) where id_map pairs generated ids with the
/// original ids they replace.
#[pyfunction]
#[pyo3(signature = (network, partition, model = "bwrn", seed = 0, count = 1, p_b = 0.875))]
fn generate(
    network: &PyNetwork,
    partition: &PyPartition,
    model: &str,
    seed: u64,
    count: usize,
    p_b: f64,
) -> PyResult<Vec<(PyNetwork, PyPartition, Vec<(u64, u64)>)>> {
    let model: Model = model.parse().map_err(value_err)?;
    let cfg = GenConfig { p_b, ..GenConfig::new(model, seed, count) };
    let ensemble = generate_ensemble(&network.inner, &partition.inner, &cfg).map_err(runtime_err)?;
    Ok(ensemble
        .members
        .into_iter()
        .map(|m| {
            (
                PyNetwork { inner: m.network },
                PyPartition { inner: m.partition },
                m.id_map,
            )
        })
        .collect())
}

/// Louvain community detection on the undirected weight projection.
#[pyfunction]
#[pyo3(signature = (network, shuffle_seed = None))]
fn louvain(network: &PyNetwork, shuffle_seed: Option<u64>) -> PyPartition {
    let g = to_undirected(&network.inner);
    PyPartition { inner: louvain_rs(&g, shuffle_seed) }
}

/// Per-node (id, raw betweenness, relative betweenness) sorted by rank.
#[pyfunction]
#[pyo3(signature = (network, unit_lengths = false))]
fn betweenness_ranking(network: &PyNetwork, unit_lengths: bool) -> Vec<(u64, f64, f64)> {
    let g = to_undirected(&network.inner);
    centrality_ranking(&g, parse_mode(unit_lengths))
}

/// The leadership set: nodes whose relative betweenness reaches 90% of the
/// m-th ranked node's value.
#[pyfunction]
#[pyo3(signature = (network, m, unit_lengths = false))]
fn detect_leaders(network: &PyNetwork, m: usize, unit_lengths: bool) -> PyResult<Vec<u64>> {
    let g = to_undirected(&network.inner);
    let set = detect(&g, m, parse_mode(unit_lengths)).map_err(value_err)?;
    Ok(set.into_iter().collect())
}

/// Normalized mutual information over an explicit node universe.
#[pyfunction]
fn nmi(p: &PyPartition, q: &PyPartition, universe: Vec<u64>) -> PyResult<f64> {
    let u: BTreeSet<u64> = universe.into_iter().collect();
    nmi_partitions(&p.inner, &q.inner, &u).map_err(value_err)
}

#[pyfunction]
fn jaccard(a: Vec<u64>, b: Vec<u64>) -> f64 {
    let a: BTreeSet<u64> = a.into_iter().collect();
    let b: BTreeSet<u64> = b.into_iter().collect();
    jaccard_leadership(&a, &b)
}

#[pyfunction]
fn combined_score(nmi_value: f64, jaccard_value: f64) -> f64 {
    cs_rs(nmi_value, jaccard_value)
}

#[pyfunction]
fn exact_match(p: &PyPartition, q: &PyPartition) -> PyResult<bool> {
    exact_rs(&p.inner, &q.inner).map_err(value_err)
}

#[pyfunction]
fn flexible_match(p: &PyPartition, q: &PyPartition) -> bool {
    flexible_rs(&p.inner, &q.inner)
}

/// Ensemble stability verdict against an original partition, as JSON.
#[pyfunction]
#[pyo3(signature = (partitions, original, matching = "exact", threshold = 0.1))]
fn stability(
    partitions: Vec<PyPartition>,
    original: &PyPartition,
    matching: &str,
    threshold: f64,
) -> PyResult<String> {
    let mode: Matching = matching.parse().map_err(value_err)?;
    let parts: Vec<rang::GroupPartition> = partitions.into_iter().map(|p| p.inner).collect();
    let verdict = stability_verdict(&parts, &original.inner, mode, threshold);
    serde_json::to_string_pretty(&verdict).map_err(runtime_err)
}

#[pymodule]
fn rang_py(_py: Python<'_>, m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyNetwork>()?;
    m.add_class::<PyPartition>()?;
    m.add_function(wrap_pyfunction!(load_dataset, m)?)?;
    m.add_function(wrap_pyfunction!(save_dataset, m)?)?;
    m.add_function(wrap_pyfunction!(validate, m)?)?;
    m.add_function(wrap_pyfunction!(summarize, m)?)?;
    m.add_function(wrap_pyfunction!(generate, m)?)?;
    m.add_function(wrap_pyfunction!(louvain, m)?)?;
    m.add_function(wrap_pyfunction!(betweenness_ranking, m)?)?;
    m.add_function(wrap_pyfunction!(detect_leaders, m)?)?;
    m.add_function(wrap_pyfunction!(nmi, m)?)?;
    m.add_function(wrap_pyfunction!(jaccard, m)?)?;
    m.add_function(wrap_pyfunction!(combined_score, m)?)?;
    m.add_function(wrap_pyfunction!(exact_match, m)?)?;
    m.add_function(wrap_pyfunction!(flexible_match, m)?)?;
    m.add_function(wrap_pyfunction!(stability, m)?)?;
    Ok(())
}
