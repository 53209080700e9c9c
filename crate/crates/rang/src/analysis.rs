//! Ensemble-level drivers: detect groups and leaders on every member,
//! score them against the original, and feed the stability pipeline.
//!
//! Generated networks carry shuffled ids; members are mapped back to the
//! original id space through their id maps before any comparison, so NMI,
//! Jaccard, and structure matching all operate on a single node universe.

use std::collections::{BTreeSet, HashMap};

use rayon::prelude::*;
use thiserror::Error;

use crate::centrality::{detect_leaders, CentralityError, PathLength};
use crate::community::{louvain, to_undirected};
use crate::compare::{ensemble_report, CompareError, EnsembleReport};
use crate::model::{GroupPartition, Network, NodeId};

#[derive(Debug, Error)]
pub enum AnalysisError {
    #[error(transparent)]
    Centrality(#[from] CentralityError),
    #[error(transparent)]
    Compare(#[from] CompareError),
    #[error("member {index}: id map does not cover node {node}")]
    IncompleteIdMap { index: usize, node: NodeId },
    #[error("original network has no management nodes; pass m explicitly")]
    NoManagementNodes,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct AnalyzeOptions {
    /// Management-node count for the leadership threshold; defaults to the
    /// number of level >= 2 nodes in the original network.
    pub m: Option<usize>,
    pub path_mode: PathLength,
    /// Louvain visit-order shuffle seed; None = deterministic ascending ids.
    pub detector_seed: Option<u64>,
}

/// Translate a generated network back into the original id space using its
/// (generated id, original id) map.
pub fn remap_network(
    net: &Network,
    id_map: &[(NodeId, NodeId)],
    index: usize,
) -> Result<Network, AnalysisError> {
    let map: HashMap<NodeId, NodeId> = id_map.iter().copied().collect();
    let lookup = |id: NodeId| {
        map.get(&id)
            .copied()
            .ok_or(AnalysisError::IncompleteIdMap { index, node: id })
    };
    let mut out = net.clone();
    for n in &mut out.nodes {
        n.id = lookup(n.id)?;
    }
    for e in &mut out.edges {
        e.source = lookup(e.source)?;
        e.target = lookup(e.target)?;
    }
    out.canonicalize();
    Ok(out)
}

/// Louvain partition and RBC-detected leader set for one network.
pub fn detect_member(
    net: &Network,
    m: usize,
    opts: &AnalyzeOptions,
) -> Result<(GroupPartition, BTreeSet<NodeId>), AnalysisError> {
    let g = to_undirected(net);
    let part = louvain(&g, opts.detector_seed);
    let leaders = detect_leaders(&g, m, opts.path_mode)?;
    Ok((part, leaders))
}

pub fn default_management_count(original: &Network) -> usize {
    original.roster_at_least(2).len()
}

/// Score an ensemble (members already in original id space) against the
/// original network: NMI against the original's stored partition, Jaccard
/// against the RBC-detected leaders of the original.
pub fn analyze_ensemble(
    original: &Network,
    original_partition: &GroupPartition,
    members: &[Network],
    opts: &AnalyzeOptions,
) -> Result<EnsembleReport, AnalysisError> {
    let m = match opts.m {
        Some(m) => m,
        None => {
            let m = default_management_count(original);
            if m == 0 {
                return Err(AnalysisError::NoManagementNodes);
            }
            m
        }
    };
    let original_graph = to_undirected(original);
    let original_leaders = detect_leaders(&original_graph, m, opts.path_mode)?;
    let universe = original.node_ids();

    let detected: Result<Vec<(GroupPartition, BTreeSet<NodeId>)>, AnalysisError> = members
        .par_iter()
        .map(|net| detect_member(net, m, opts))
        .collect();
    Ok(ensemble_report(
        &detected?,
        original_partition,
        &original_leaders,
        &universe,
    )?)
}

/// Detected partitions for the stability pipeline, in member order.
pub fn detected_partitions(
    members: &[Network],
    detector_seed: Option<u64>,
) -> Vec<GroupPartition> {
    members
        .par_iter()
        .map(|net| louvain(&to_undirected(net), detector_seed))
        .collect()
}
