//! Similarity metrics between generated and original networks: partition NMI,
//! leadership Jaccard, and their product, the Combined Score.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{GroupPartition, NodeId};

#[derive(Debug, Error)]
pub enum CompareError {
    #[error("partitions cover different node universes")]
    UniverseMismatch,
    #[error("ensemble is empty")]
    EmptyEnsemble,
}

/// Extend a partition to a full label assignment over `universe`: nodes the
/// partition leaves out become singleton groups.
pub fn complete_assignment(
    part: &GroupPartition,
    universe: &BTreeSet<NodeId>,
) -> BTreeMap<NodeId, u64> {
    let mut labels: BTreeMap<NodeId, u64> = BTreeMap::new();
    let mut next = 0u64;
    for g in &part.groups {
        for &m in &g.members {
            if universe.contains(&m) {
                labels.insert(m, next);
            }
        }
        next += 1;
    }
    for &id in universe {
        if !labels.contains_key(&id) {
            labels.insert(id, next);
            next += 1;
        }
    }
    labels
}

fn entropy(counts: &BTreeMap<u64, u64>, n: f64) -> f64 {
    counts
        .values()
        .map(|&c| {
            let p = c as f64 / n;
            -p * p.ln()
        })
        .sum()
}

/// Normalized mutual information with the 2I/(H(P)+H(Q)) normalization,
/// natural logs. Both partitions single-block (H = 0 for both) gives 1;
/// exactly one degenerate side gives 0.
pub fn nmi(p: &BTreeMap<NodeId, u64>, q: &BTreeMap<NodeId, u64>) -> Result<f64, CompareError> {
    if p.len() != q.len() || p.keys().ne(q.keys()) {
        return Err(CompareError::UniverseMismatch);
    }
    let n = p.len() as f64;
    if p.is_empty() {
        return Ok(1.0);
    }

    let mut pc: BTreeMap<u64, u64> = BTreeMap::new();
    let mut qc: BTreeMap<u64, u64> = BTreeMap::new();
    let mut joint: BTreeMap<(u64, u64), u64> = BTreeMap::new();
    for (node, &a) in p {
        let b = q[node];
        *pc.entry(a).or_insert(0) += 1;
        *qc.entry(b).or_insert(0) += 1;
        *joint.entry((a, b)).or_insert(0) += 1;
    }

    let hp = entropy(&pc, n);
    let hq = entropy(&qc, n);
    if hp == 0.0 && hq == 0.0 {
        return Ok(1.0);
    }

    let mut mi = 0.0;
    for (&(a, b), &c) in &joint {
        let pab = c as f64 / n;
        let pa = pc[&a] as f64 / n;
        let pb = qc[&b] as f64 / n;
        mi += pab * (pab / (pa * pb)).ln();
    }
    Ok((2.0 * mi / (hp + hq)).clamp(0.0, 1.0))
}

/// NMI between two partitions over an explicit node universe; uncovered
/// nodes enter as singletons.
pub fn nmi_partitions(
    p: &GroupPartition,
    q: &GroupPartition,
    universe: &BTreeSet<NodeId>,
) -> Result<f64, CompareError> {
    nmi(
        &complete_assignment(p, universe),
        &complete_assignment(q, universe),
    )
}

/// |a ∩ b| / |a ∪ b|, defined as 1 when both are empty.
pub fn jaccard_leadership(a: &BTreeSet<NodeId>, b: &BTreeSet<NodeId>) -> f64 {
    let union = a.union(b).count();
    if union == 0 {
        return 1.0;
    }
    a.intersection(b).count() as f64 / union as f64
}

/// Product of group similarity and leadership similarity.
pub fn combined_score(nmi_value: f64, jaccard_value: f64) -> f64 {
    debug_assert!((0.0..=1.0).contains(&nmi_value) && (0.0..=1.0).contains(&jaccard_value));
    nmi_value * jaccard_value
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MemberScores {
    pub index: usize,
    pub nmi: f64,
    pub jaccard: f64,
    pub combined: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Aggregate {
    pub mean: f64,
    /// Lower median for even counts.
    pub median: f64,
    pub min: f64,
    pub max: f64,
}

impl Aggregate {
    pub fn of(values: &[f64]) -> Self {
        assert!(!values.is_empty());
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        let n = sorted.len();
        Aggregate {
            mean: sorted.iter().sum::<f64>() / n as f64,
            median: sorted[(n - 1) / 2],
            min: sorted[0],
            max: sorted[n - 1],
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EnsembleReport {
    pub per_network: Vec<MemberScores>,
    pub nmi: Aggregate,
    pub jaccard: Aggregate,
    pub combined: Aggregate,
}

/// Score every ensemble member's (detected partition, detected leader set)
/// against the original and aggregate.
pub fn ensemble_report(
    members: &[(GroupPartition, BTreeSet<NodeId>)],
    original_partition: &GroupPartition,
    original_leaders: &BTreeSet<NodeId>,
    universe: &BTreeSet<NodeId>,
) -> Result<EnsembleReport, CompareError> {
    if members.is_empty() {
        return Err(CompareError::EmptyEnsemble);
    }
    let original = complete_assignment(original_partition, universe);
    let per_network: Result<Vec<MemberScores>, CompareError> = members
        .iter()
        .enumerate()
        .map(|(index, (part, leaders))| {
            let n = nmi(&complete_assignment(part, universe), &original)?;
            let j = jaccard_leadership(leaders, original_leaders);
            Ok(MemberScores { index, nmi: n, jaccard: j, combined: combined_score(n, j) })
        })
        .collect();
    let per_network = per_network?;
    let col = |f: fn(&MemberScores) -> f64| -> Vec<f64> { per_network.iter().map(f).collect() };
    Ok(EnsembleReport {
        nmi: Aggregate::of(&col(|s| s.nmi)),
        jaccard: Aggregate::of(&col(|s| s.jaccard)),
        combined: Aggregate::of(&col(|s| s.combined)),
        per_network,
    })
}
