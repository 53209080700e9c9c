//! Core domain types: networks, hierarchy levels, groups, and edge classes.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

pub type NodeId = u64;
pub type GroupId = u64;

/// Hierarchy levels: 1 = member, 2 = manager, 3 = boss.
pub const MIN_LEVEL: u8 = 1;
pub const MAX_LEVEL: u8 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct NodeRecord {
    pub id: NodeId,
    pub level: u8,
}

/// A directed edge carrying an interaction count. Weight-0 edges are never stored.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Edge {
    pub source: NodeId,
    pub target: NodeId,
    pub weight: u64,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Network {
    pub nodes: Vec<NodeRecord>,
    pub edges: Vec<Edge>,
}

impl Network {
    pub fn new(nodes: Vec<NodeRecord>, edges: Vec<Edge>) -> Self {
        Network { nodes, edges }
    }

    pub fn total_weight(&self) -> u64 {
        self.edges.iter().map(|e| e.weight).sum()
    }

    pub fn node_ids(&self) -> BTreeSet<NodeId> {
        self.nodes.iter().map(|n| n.id).collect()
    }

    pub fn levels(&self) -> HashMap<NodeId, u8> {
        self.nodes.iter().map(|n| (n.id, n.level)).collect()
    }

    /// Ids of nodes at hierarchy level `level` or above.
    pub fn roster_at_least(&self, level: u8) -> BTreeSet<NodeId> {
        self.nodes
            .iter()
            .filter(|n| n.level >= level)
            .map(|n| n.id)
            .collect()
    }

    /// Sort nodes by id and edges by (source, target). Serialization of a
    /// canonicalized network is byte-stable.
    pub fn canonicalize(&mut self) {
        self.nodes.sort_by_key(|n| n.id);
        self.edges.sort_by_key(|e| (e.source, e.target));
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Group {
    pub gid: GroupId,
    pub members: BTreeSet<NodeId>,
    pub leader: Option<NodeId>,
    pub independent: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupPartition {
    pub groups: Vec<Group>,
}

impl GroupPartition {
    pub fn new(groups: Vec<Group>) -> Self {
        GroupPartition { groups }
    }

    /// All member ids across groups.
    pub fn member_ids(&self) -> BTreeSet<NodeId> {
        self.groups
            .iter()
            .flat_map(|g| g.members.iter().copied())
            .collect()
    }

    pub fn leader_ids(&self) -> BTreeSet<NodeId> {
        self.groups.iter().filter_map(|g| g.leader).collect()
    }

    /// Sort groups by gid; member sets are ordered already.
    pub fn canonicalize(&mut self) {
        self.groups.sort_by_key(|g| g.gid);
    }

    /// Member id -> gid. Disjointness is a validation concern; later groups lose ties.
    pub fn membership(&self) -> HashMap<NodeId, GroupId> {
        let mut map = HashMap::new();
        for g in &self.groups {
            for &m in &g.members {
                map.entry(m).or_insert(g.gid);
            }
        }
        map
    }
}

/// Node roles derived from levels and partition structure, used to bucket
/// edges the six named classes do not cover.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Role {
    Boss,
    Leader,
    Member,
    Unassigned,
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Role::Boss => "boss",
            Role::Leader => "leader",
            Role::Member => "member",
            Role::Unassigned => "unassigned",
        };
        f.write_str(s)
    }
}

/// Edge classes of the group-structure summary. Each class defines a disjoint
/// universe of ordered node pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum EdgeClassKind {
    /// Member-to-member inside group i; capacity |g_i|(|g_i|-1).
    IntraGroup(GroupId),
    /// Member of group i to member of group j; capacity |g_i||g_j|.
    InterGroup(GroupId, GroupId),
    /// Group leader to own members; capacity |g_i|.
    LeaderToGroup(GroupId),
    /// Own members to group leader; capacity |g_i|.
    GroupToLeader(GroupId),
    /// Group leader to level-1 nodes outside the group; capacity |not-i|.
    LeaderToOutside(GroupId),
    /// Level-1 nodes outside the group to its leader; capacity |not-i|.
    OutsideToLeader(GroupId),
    /// Everything else, bucketed by the ordered endpoint roles.
    Residual(Role, Role),
}

impl EdgeClassKind {
    pub fn is_residual(&self) -> bool {
        matches!(self, EdgeClassKind::Residual(..))
    }
}

impl fmt::Display for EdgeClassKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EdgeClassKind::IntraGroup(i) => write!(f, "intra({i})"),
            EdgeClassKind::InterGroup(i, j) => write!(f, "inter({i},{j})"),
            EdgeClassKind::LeaderToGroup(i) => write!(f, "leader_to_group({i})"),
            EdgeClassKind::GroupToLeader(i) => write!(f, "group_to_leader({i})"),
            EdgeClassKind::LeaderToOutside(i) => write!(f, "leader_to_outside({i})"),
            EdgeClassKind::OutsideToLeader(i) => write!(f, "outside_to_leader({i})"),
            EdgeClassKind::Residual(a, b) => write!(f, "residual({a},{b})"),
        }
    }
}

/// Per-class statistics plus the original weight multiset (sorted descending),
/// which the generators consume.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeClass {
    pub kind: EdgeClassKind,
    /// Number of ordered node pairs eligible for this class.
    pub capacity: u64,
    pub weight_sum: u64,
    pub weights: Vec<u64>,
}

/// The anonymized, shareable summary of a network's group structure.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeClassSummary {
    pub classes: Vec<EdgeClass>,
    pub node_count: usize,
    pub group_sizes: BTreeMap<GroupId, u64>,
    /// Node ids per hierarchy level.
    pub roster: BTreeMap<u8, Vec<NodeId>>,
    /// Total weight falling into residual classes.
    pub residual_weight: u64,
}

impl EdgeClassSummary {
    pub fn total_weight(&self) -> u64 {
        self.classes.iter().map(|c| c.weight_sum).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    DuplicateNodeId(NodeId),
    BadLevel { id: NodeId, level: u8 },
    SelfLoop(NodeId),
    DuplicateEdge(NodeId, NodeId),
    ZeroWeightEdge(NodeId, NodeId),
    UnknownEndpoint { source: NodeId, target: NodeId, missing: NodeId },
    EmptyGroup(GroupId),
    LeaderInOwnGroup { gid: GroupId, leader: NodeId },
    IndependentWithLeader { gid: GroupId, leader: NodeId },
    OverlappingGroups { node: NodeId, first: GroupId, second: GroupId },
    UnknownGroupNode { gid: GroupId, node: NodeId },
    DuplicateGroupId(GroupId),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DuplicateNodeId(id) => write!(f, "duplicate node id {id}"),
            Violation::BadLevel { id, level } => {
                write!(f, "node {id} has level {level}, expected 1..=3")
            }
            Violation::SelfLoop(id) => write!(f, "self-loop at node {id}"),
            Violation::DuplicateEdge(s, t) => write!(f, "duplicate edge ({s},{t})"),
            Violation::ZeroWeightEdge(s, t) => write!(f, "edge ({s},{t}) has weight 0"),
            Violation::UnknownEndpoint { source, target, missing } => {
                write!(f, "edge ({source},{target}) references unknown node {missing}")
            }
            Violation::EmptyGroup(gid) => write!(f, "group {gid} has no members"),
            Violation::LeaderInOwnGroup { gid, leader } => {
                write!(f, "group {gid} lists its leader {leader} among members")
            }
            Violation::IndependentWithLeader { gid, leader } => {
                write!(f, "independent group {gid} must not have a leader (has {leader})")
            }
            Violation::OverlappingGroups { node, first, second } => {
                write!(f, "node {node} belongs to groups {first} and {second}")
            }
            Violation::UnknownGroupNode { gid, node } => {
                write!(f, "group {gid} references unknown node {node}")
            }
            Violation::DuplicateGroupId(gid) => write!(f, "duplicate group id {gid}"),
        }
    }
}

/// Check every structural invariant of a network. Violations are data, not errors.
pub fn validate_network(net: &Network) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    for n in &net.nodes {
        if !seen.insert(n.id) {
            out.push(Violation::DuplicateNodeId(n.id));
        }
        if n.level < MIN_LEVEL || n.level > MAX_LEVEL {
            out.push(Violation::BadLevel { id: n.id, level: n.level });
        }
    }
    let mut pairs = HashSet::new();
    for e in &net.edges {
        if e.source == e.target {
            out.push(Violation::SelfLoop(e.source));
        }
        if !pairs.insert((e.source, e.target)) {
            out.push(Violation::DuplicateEdge(e.source, e.target));
        }
        if e.weight == 0 {
            out.push(Violation::ZeroWeightEdge(e.source, e.target));
        }
        for endpoint in [e.source, e.target] {
            if !seen.contains(&endpoint) {
                out.push(Violation::UnknownEndpoint {
                    source: e.source,
                    target: e.target,
                    missing: endpoint,
                });
            }
        }
    }
    out
}

/// Validate a partition against its network. Returns hard violations and
/// soft warnings (coverage gaps are warnings: detectors legitimately leave
/// low-degree nodes unassigned).
pub fn validate_partition(net: &Network, part: &GroupPartition) -> (Vec<Violation>, Vec<String>) {
    let mut violations = Vec::new();
    let mut warnings = Vec::new();
    let ids = net.node_ids();
    let mut gids = HashSet::new();
    let mut owner: HashMap<NodeId, GroupId> = HashMap::new();

    for g in &part.groups {
        if !gids.insert(g.gid) {
            violations.push(Violation::DuplicateGroupId(g.gid));
        }
        if g.members.is_empty() {
            violations.push(Violation::EmptyGroup(g.gid));
        }
        if let Some(l) = g.leader {
            if g.members.contains(&l) {
                violations.push(Violation::LeaderInOwnGroup { gid: g.gid, leader: l });
            }
            if g.independent {
                violations.push(Violation::IndependentWithLeader { gid: g.gid, leader: l });
            }
            if !ids.contains(&l) {
                violations.push(Violation::UnknownGroupNode { gid: g.gid, node: l });
            }
        }
        for &m in &g.members {
            if !ids.contains(&m) {
                violations.push(Violation::UnknownGroupNode { gid: g.gid, node: m });
            }
            match owner.get(&m) {
                Some(&first) if first != g.gid => {
                    violations.push(Violation::OverlappingGroups { node: m, first, second: g.gid });
                }
                _ => {
                    owner.insert(m, g.gid);
                }
            }
        }
    }

    let covered: BTreeSet<NodeId> = part
        .member_ids()
        .union(&part.leader_ids())
        .copied()
        .chain(net.roster_at_least(3))
        .collect();
    let uncovered: Vec<NodeId> = ids.difference(&covered).copied().collect();
    if !uncovered.is_empty() {
        warnings.push(format!(
            "{} node(s) not covered by any group, leader, or boss role: {:?}",
            uncovered.len(),
            uncovered
        ));
    }
    (violations, warnings)
}
