//! Edge classification and the shareable group-structure summary.
//!
//! Every ordered node pair belongs to exactly one [`EdgeClassKind`]; the six
//! named classes cover member/leader structure, the residual classes bucket
//! the rest by endpoint roles so no weight is ever dropped.

use std::collections::{BTreeMap, HashMap};

use thiserror::Error;

use crate::model::{
    EdgeClass, EdgeClassKind, EdgeClassSummary, GroupId, GroupPartition, Network, NodeId,
    NodeRecord, Role,
};

#[derive(Debug, Error)]
pub enum ClassifyError {
    #[error("partition references node {0} absent from the network")]
    UnknownNode(NodeId),
}

/// Role and membership lookup tables shared by classification and generation.
#[derive(Debug, Clone)]
pub struct ClassContext {
    nodes: Vec<NodeRecord>,
    levels: HashMap<NodeId, u8>,
    /// level-1 member -> gid
    member_group: HashMap<NodeId, GroupId>,
    /// leader -> gids of groups it leads (ascending)
    leads: HashMap<NodeId, Vec<GroupId>>,
    group_sizes: BTreeMap<GroupId, u64>,
}

impl ClassContext {
    pub fn new(nodes: &[NodeRecord], part: &GroupPartition) -> Result<Self, ClassifyError> {
        let levels: HashMap<NodeId, u8> = nodes.iter().map(|n| (n.id, n.level)).collect();
        let mut member_group = HashMap::new();
        let mut leads: HashMap<NodeId, Vec<GroupId>> = HashMap::new();
        let mut group_sizes = BTreeMap::new();
        for g in &part.groups {
            group_sizes.insert(g.gid, g.members.len() as u64);
            for &m in &g.members {
                if !levels.contains_key(&m) {
                    return Err(ClassifyError::UnknownNode(m));
                }
                member_group.insert(m, g.gid);
            }
            if let Some(l) = g.leader {
                if !levels.contains_key(&l) {
                    return Err(ClassifyError::UnknownNode(l));
                }
                leads.entry(l).or_default().push(g.gid);
            }
        }
        for gids in leads.values_mut() {
            gids.sort_unstable();
        }
        Ok(ClassContext {
            nodes: nodes.to_vec(),
            levels,
            member_group,
            leads,
            group_sizes,
        })
    }

    pub fn role(&self, id: NodeId) -> Role {
        if self.levels.get(&id).copied() == Some(3) {
            Role::Boss
        } else if self.leads.contains_key(&id) {
            Role::Leader
        } else if self.member_group.contains_key(&id) {
            Role::Member
        } else {
            Role::Unassigned
        }
    }

    fn level(&self, id: NodeId) -> u8 {
        self.levels.get(&id).copied().unwrap_or(0)
    }

    /// Classify the ordered pair (source, target). Deterministic; when a node
    /// leads several groups the lowest gid wins ties.
    pub fn classify(&self, source: NodeId, target: NodeId) -> EdgeClassKind {
        if let (Some(&gi), Some(&gj)) = (self.member_group.get(&source), self.member_group.get(&target)) {
            return if gi == gj {
                EdgeClassKind::IntraGroup(gi)
            } else {
                EdgeClassKind::InterGroup(gi, gj)
            };
        }
        if let Some(gids) = self.leads.get(&source) {
            if let Some(&gt) = self.member_group.get(&target) {
                if gids.contains(&gt) {
                    return EdgeClassKind::LeaderToGroup(gt);
                }
            }
            if self.level(target) == 1 {
                return EdgeClassKind::LeaderToOutside(gids[0]);
            }
        }
        if let Some(gids) = self.leads.get(&target) {
            if let Some(&gs) = self.member_group.get(&source) {
                if gids.contains(&gs) {
                    return EdgeClassKind::GroupToLeader(gs);
                }
            }
            if self.level(source) == 1 {
                return EdgeClassKind::OutsideToLeader(gids[0]);
            }
        }
        EdgeClassKind::Residual(self.role(source), self.role(target))
    }

    /// All ordered node pairs, bucketed by class. Pair order within a class is
    /// deterministic (nodes in input order).
    pub fn class_pairs(&self) -> BTreeMap<EdgeClassKind, Vec<(NodeId, NodeId)>> {
        let mut map: BTreeMap<EdgeClassKind, Vec<(NodeId, NodeId)>> = BTreeMap::new();
        for a in &self.nodes {
            for b in &self.nodes {
                if a.id == b.id {
                    continue;
                }
                map.entry(self.classify(a.id, b.id)).or_default().push((a.id, b.id));
            }
        }
        map
    }

    pub fn group_sizes(&self) -> &BTreeMap<GroupId, u64> {
        &self.group_sizes
    }

    pub fn nodes(&self) -> &[NodeRecord] {
        &self.nodes
    }
}

/// Convenience wrapper over [`ClassContext::classify`].
pub fn classify_edge(
    source: NodeId,
    target: NodeId,
    ctx: &ClassContext,
) -> EdgeClassKind {
    ctx.classify(source, target)
}

/// Build the edge-class summary: per-class capacity, weight sum, and the
/// sorted (descending) weight multiset the generators replay.
pub fn summarize(net: &Network, part: &GroupPartition) -> Result<EdgeClassSummary, ClassifyError> {
    let ctx = ClassContext::new(&net.nodes, part)?;
    summarize_with(net, &ctx)
}

pub fn summarize_with(net: &Network, ctx: &ClassContext) -> Result<EdgeClassSummary, ClassifyError> {
    let pairs = ctx.class_pairs();
    let mut weights: BTreeMap<EdgeClassKind, Vec<u64>> = BTreeMap::new();
    for e in &net.edges {
        weights.entry(ctx.classify(e.source, e.target)).or_default().push(e.weight);
    }

    let mut classes = Vec::with_capacity(pairs.len());
    let mut residual_weight = 0u64;
    for (kind, ps) in &pairs {
        let mut w = weights.remove(kind).unwrap_or_default();
        w.sort_unstable_by(|a, b| b.cmp(a));
        let weight_sum: u64 = w.iter().sum();
        if kind.is_residual() {
            residual_weight += weight_sum;
        }
        classes.push(EdgeClass {
            kind: *kind,
            capacity: ps.len() as u64,
            weight_sum,
            weights: w,
        });
    }
    // Every edge must land in a class with eligible pairs.
    debug_assert!(weights.is_empty(), "edges classified outside the pair universe");

    let mut roster: BTreeMap<u8, Vec<NodeId>> = BTreeMap::new();
    for n in &net.nodes {
        roster.entry(n.level).or_default().push(n.id);
    }
    for ids in roster.values_mut() {
        ids.sort_unstable();
    }

    Ok(EdgeClassSummary {
        classes,
        node_count: net.nodes.len(),
        group_sizes: ctx.group_sizes().clone(),
        roster,
        residual_weight,
    })
}

/// Reciprocity statistic for a group: fraction of its members' edges that are
/// reciprocated. Reported alongside independence detection.
pub fn group_reciprocity(net: &Network, members: &std::collections::BTreeSet<NodeId>) -> f64 {
    use std::collections::HashSet;
    let pairs: HashSet<(NodeId, NodeId)> =
        net.edges.iter().map(|e| (e.source, e.target)).collect();
    let mut touching = 0u64;
    let mut reciprocated = 0u64;
    for e in &net.edges {
        if members.contains(&e.source) || members.contains(&e.target) {
            touching += 1;
            if pairs.contains(&(e.target, e.source)) {
                reciprocated += 1;
            }
        }
    }
    if touching == 0 {
        0.0
    } else {
        reciprocated as f64 / touching as f64
    }
}

/// Flag groups that look independent: no member has an incoming edge from
/// outside the group, and the group is small (at most `size_cap` members).
/// Groups already flagged independent in the input are kept regardless.
pub fn detect_independent(part: &GroupPartition, net: &Network, size_cap: usize) -> Vec<GroupId> {
    let mut out = Vec::new();
    for g in &part.groups {
        if g.independent {
            out.push(g.gid);
            continue;
        }
        if g.members.len() > size_cap {
            continue;
        }
        let incoming_from_outside = net.edges.iter().any(|e| {
            g.members.contains(&e.target) && !g.members.contains(&e.source)
        });
        if !incoming_from_outside {
            out.push(g.gid);
        }
    }
    out
}
