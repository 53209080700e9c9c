//! Meta-graph stability analysis: which detected group structures recur
//! across an ensemble, and how often the original's structure appears.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{GroupPartition, NodeId};

#[derive(Debug, Error)]
pub enum StabilityError {
    #[error("partitions cover different node universes")]
    UniverseMismatch,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Matching {
    Exact,
    Flexible,
}

impl std::str::FromStr for Matching {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "exact" => Ok(Matching::Exact),
            "flexible" => Ok(Matching::Flexible),
            other => Err(format!("unknown matching mode {other:?}, expected exact|flexible")),
        }
    }
}

/// Hashable label-free form: groups sorted by (size desc, smallest member asc),
/// members ascending.
pub fn canonical_form(p: &GroupPartition) -> Vec<Vec<NodeId>> {
    let mut groups: Vec<Vec<NodeId>> = p
        .groups
        .iter()
        .map(|g| g.members.iter().copied().collect())
        .collect();
    groups.sort_by(|a, b| {
        b.len()
            .cmp(&a.len())
            .then_with(|| a.first().cmp(&b.first()))
    });
    groups
}

fn universe(p: &GroupPartition) -> BTreeSet<NodeId> {
    p.member_ids()
}

/// True iff the partitions have identical member sets (group labels ignored).
pub fn exact_match(p: &GroupPartition, q: &GroupPartition) -> Result<bool, StabilityError> {
    if universe(p) != universe(q) {
        return Err(StabilityError::UniverseMismatch);
    }
    Ok(canonical_form(p) == canonical_form(q))
}

/// True iff some group bijection pairs every group A of p with a group B of q
/// such that |A\B| <= 1 and |B\A| <= 1. Partitions with different group
/// counts or universes never match. Exact matches always do.
pub fn flexible_match(p: &GroupPartition, q: &GroupPartition) -> bool {
    if p.groups.len() != q.groups.len() || universe(p) != universe(q) {
        return false;
    }
    let k = p.groups.len();
    if k == 0 {
        return true;
    }
    // Feasibility edges, then perfect-matching search by augmenting paths.
    let ok = |a: &BTreeSet<NodeId>, b: &BTreeSet<NodeId>| {
        a.difference(b).count() <= 1 && b.difference(a).count() <= 1
    };
    let edges: Vec<Vec<usize>> = p
        .groups
        .iter()
        .map(|ga| {
            q.groups
                .iter()
                .enumerate()
                .filter(|(_, gb)| ok(&ga.members, &gb.members))
                .map(|(j, _)| j)
                .collect()
        })
        .collect();

    let mut matched_right: Vec<Option<usize>> = vec![None; k];
    fn augment(
        u: usize,
        edges: &[Vec<usize>],
        matched_right: &mut [Option<usize>],
        seen: &mut [bool],
    ) -> bool {
        for &v in &edges[u] {
            if seen[v] {
                continue;
            }
            seen[v] = true;
            if matched_right[v].is_none()
                || augment(matched_right[v].unwrap(), edges, matched_right, seen)
            {
                matched_right[v] = Some(u);
                return true;
            }
        }
        false
    }
    (0..k).all(|u| {
        let mut seen = vec![false; k];
        augment(u, &edges, &mut matched_right, &mut seen)
    })
}

fn matches(p: &GroupPartition, q: &GroupPartition, mode: Matching) -> bool {
    match mode {
        Matching::Exact => exact_match(p, q).unwrap_or(false),
        Matching::Flexible => flexible_match(p, q),
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MetaGraph {
    pub member_count: usize,
    pub mode: Matching,
    /// Sorted neighbor lists; symmetric, no self-loops.
    pub adjacency: Vec<Vec<usize>>,
    /// Per member: does it match the original partition?
    pub matches_original: Vec<bool>,
}

impl MetaGraph {
    pub fn degrees(&self) -> Vec<usize> {
        self.adjacency.iter().map(|a| a.len()).collect()
    }

    /// (degree, node count) histogram rows, ascending by degree.
    pub fn degree_histogram(&self) -> Vec<(usize, usize)> {
        let mut hist: BTreeMap<usize, usize> = BTreeMap::new();
        for d in self.degrees() {
            *hist.entry(d).or_insert(0) += 1;
        }
        hist.into_iter().collect()
    }
}

/// Meta-graph over ensemble members: edge (i, j) iff the matching predicate
/// holds between their detected partitions.
pub fn build_metagraph(
    partitions: &[GroupPartition],
    original: Option<&GroupPartition>,
    mode: Matching,
) -> MetaGraph {
    let g = partitions.len();
    let mut adjacency = vec![Vec::new(); g];

    match mode {
        Matching::Exact => {
            // Canonical-form hashing avoids the O(G^2) pair loop.
            let mut buckets: BTreeMap<Vec<Vec<NodeId>>, Vec<usize>> = BTreeMap::new();
            for (i, p) in partitions.iter().enumerate() {
                buckets.entry(canonical_form(p)).or_default().push(i);
            }
            for members in buckets.values() {
                for &i in members {
                    adjacency[i] = members.iter().copied().filter(|&j| j != i).collect();
                }
            }
        }
        Matching::Flexible => {
            let pair_hits: Vec<(usize, usize)> = (0..g)
                .into_par_iter()
                .flat_map_iter(|i| {
                    (i + 1..g)
                        .filter(move |&j| flexible_match(&partitions[i], &partitions[j]))
                        .map(move |j| (i, j))
                })
                .collect();
            for (i, j) in pair_hits {
                adjacency[i].push(j);
                adjacency[j].push(i);
            }
            for a in &mut adjacency {
                a.sort_unstable();
            }
        }
    }

    let matches_original = partitions
        .iter()
        .map(|p| original.map(|o| matches(p, o, mode)).unwrap_or(false))
        .collect();

    MetaGraph { member_count: g, mode, adjacency, matches_original }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CensusEntry {
    /// Index of a representative ensemble member.
    pub representative: usize,
    /// Exact mode: members sharing the canonical structure. Flexible mode:
    /// closed neighborhood size in the meta-graph (matching is not
    /// transitive, so no equivalence classes exist).
    pub frequency: usize,
    pub matches_original: bool,
}

/// Structure frequencies, descending. Exact mode groups by canonical form;
/// flexible mode reports per-member closed neighborhood sizes.
pub fn structure_census(
    partitions: &[GroupPartition],
    original: Option<&GroupPartition>,
    mode: Matching,
) -> Vec<CensusEntry> {
    match mode {
        Matching::Exact => {
            let mut buckets: BTreeMap<Vec<Vec<NodeId>>, Vec<usize>> = BTreeMap::new();
            for (i, p) in partitions.iter().enumerate() {
                buckets.entry(canonical_form(p)).or_default().push(i);
            }
            let mut out: Vec<CensusEntry> = buckets
                .into_iter()
                .map(|(_, members)| {
                    let rep = members[0];
                    CensusEntry {
                        representative: rep,
                        frequency: members.len(),
                        matches_original: original
                            .map(|o| matches(&partitions[rep], o, mode))
                            .unwrap_or(false),
                    }
                })
                .collect();
            out.sort_by(|a, b| {
                b.frequency
                    .cmp(&a.frequency)
                    .then_with(|| a.representative.cmp(&b.representative))
            });
            out
        }
        Matching::Flexible => {
            let mg = build_metagraph(partitions, original, mode);
            let mut out: Vec<CensusEntry> = (0..partitions.len())
                .map(|i| CensusEntry {
                    representative: i,
                    frequency: mg.adjacency[i].len() + 1,
                    matches_original: mg.matches_original[i],
                })
                .collect();
            out.sort_by(|a, b| {
                b.frequency
                    .cmp(&a.frequency)
                    .then_with(|| a.representative.cmp(&b.representative))
            });
            out
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StabilityVerdict {
    pub ensemble_size: usize,
    pub mode: Matching,
    /// How many ensemble members match the original's structure.
    pub original_frequency: usize,
    pub original_share: f64,
    pub stable: bool,
    pub threshold: f64,
    pub top_structures: Vec<CensusEntry>,
}

pub const DEFAULT_STABILITY_THRESHOLD: f64 = 0.1;

/// Verdict: stable iff the original structure's share of the ensemble reaches
/// the threshold. Reports the top-10 structure frequencies alongside.
pub fn stability_verdict(
    partitions: &[GroupPartition],
    original: &GroupPartition,
    mode: Matching,
    threshold: f64,
) -> StabilityVerdict {
    let g = partitions.len();
    let original_frequency = partitions.iter().filter(|p| matches(p, original, mode)).count();
    let original_share = if g == 0 { 0.0 } else { original_frequency as f64 / g as f64 };
    let mut top_structures = structure_census(partitions, Some(original), mode);
    top_structures.truncate(10);
    StabilityVerdict {
        ensemble_size: g,
        mode,
        original_frequency,
        original_share,
        stable: original_share >= threshold,
        threshold,
        top_structures,
    }
}
