//! Undirected transform and Louvain group detection.
//!
//! Directed edges are folded into undirected ones by summing the (up to two)
//! opposing weights. Louvain runs with resolution 1 and, by default, a
//! deterministic ascending-id visit order so that ensemble variance is
//! attributable to the generator, not the detector.

use std::collections::{BTreeMap, HashMap};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::model::{Group, GroupPartition, Network, NodeId};

/// Undirected weighted graph over a fixed node set, indexed densely.
#[derive(Debug, Clone)]
pub struct UGraph {
    ids: Vec<NodeId>,
    index: HashMap<NodeId, usize>,
    adj: Vec<Vec<(usize, f64)>>,
    total_weight: f64,
}

impl UGraph {
    pub fn node_count(&self) -> usize {
        self.ids.len()
    }

    pub fn ids(&self) -> &[NodeId] {
        &self.ids
    }

    pub fn index_of(&self, id: NodeId) -> Option<usize> {
        self.index.get(&id).copied()
    }

    pub fn neighbors(&self, idx: usize) -> &[(usize, f64)] {
        &self.adj[idx]
    }

    /// Sum of all undirected edge weights (each edge once).
    pub fn total_weight(&self) -> f64 {
        self.total_weight
    }

    pub fn weighted_degree(&self, idx: usize) -> f64 {
        self.adj[idx].iter().map(|&(_, w)| w).sum()
    }
}

/// Fold a directed network into its undirected weighted form.
pub fn to_undirected(net: &Network) -> UGraph {
    let mut ids: Vec<NodeId> = net.nodes.iter().map(|n| n.id).collect();
    ids.sort_unstable();
    let index: HashMap<NodeId, usize> = ids.iter().enumerate().map(|(i, &id)| (id, i)).collect();

    let mut pair_w: BTreeMap<(usize, usize), f64> = BTreeMap::new();
    for e in &net.edges {
        let a = index[&e.source];
        let b = index[&e.target];
        let key = if a < b { (a, b) } else { (b, a) };
        *pair_w.entry(key).or_insert(0.0) += e.weight as f64;
    }

    let mut adj = vec![Vec::new(); ids.len()];
    let mut total_weight = 0.0;
    for (&(a, b), &w) in &pair_w {
        adj[a].push((b, w));
        adj[b].push((a, w));
        total_weight += w;
    }
    UGraph { ids, index, adj, total_weight }
}

/// Weighted Newman modularity of a partition (which must cover all nodes).
pub fn modularity(g: &UGraph, part: &GroupPartition) -> f64 {
    let mut comm = vec![usize::MAX; g.node_count()];
    for (ci, grp) in part.groups.iter().enumerate() {
        for &m in &grp.members {
            if let Some(i) = g.index_of(m) {
                comm[i] = ci;
            }
        }
    }
    assert!(
        comm.iter().all(|&c| c != usize::MAX),
        "partition must cover every graph node"
    );
    modularity_of_assignment(g, &comm)
}

pub(crate) fn modularity_of_assignment(g: &UGraph, comm: &[usize]) -> f64 {
    let m = g.total_weight();
    if m <= 0.0 {
        return 0.0;
    }
    let nc = comm.iter().copied().max().map_or(0, |c| c + 1);
    let mut internal = vec![0.0; nc];
    let mut tot = vec![0.0; nc];
    for u in 0..g.node_count() {
        tot[comm[u]] += g.weighted_degree(u);
        for &(v, w) in g.neighbors(u) {
            if v > u && comm[v] == comm[u] {
                internal[comm[u]] += w;
            }
        }
    }
    let m2 = 2.0 * m;
    (0..nc)
        .map(|c| internal[c] / m - (tot[c] / m2).powi(2))
        .sum()
}

struct LevelGraph {
    n: usize,
    adj: Vec<Vec<(usize, f64)>>,
    self_w: Vec<f64>,
    deg: Vec<f64>,
    m2: f64,
}

impl LevelGraph {
    fn from_ugraph(g: &UGraph) -> Self {
        let n = g.node_count();
        let adj: Vec<Vec<(usize, f64)>> = (0..n).map(|u| g.neighbors(u).to_vec()).collect();
        let self_w = vec![0.0; n];
        let deg: Vec<f64> = (0..n).map(|u| g.weighted_degree(u)).collect();
        let m2 = deg.iter().sum();
        LevelGraph { n, adj, self_w, deg, m2 }
    }

    fn modularity(&self, comm: &[usize]) -> f64 {
        if self.m2 <= 0.0 {
            return 0.0;
        }
        let nc = comm.iter().copied().max().map_or(0, |c| c + 1);
        let mut internal = vec![0.0; nc];
        let mut tot = vec![0.0; nc];
        for u in 0..self.n {
            tot[comm[u]] += self.deg[u];
            internal[comm[u]] += self.self_w[u];
            for &(v, w) in &self.adj[u] {
                if v > u && comm[v] == comm[u] {
                    internal[comm[u]] += w;
                }
            }
        }
        let m = self.m2 / 2.0;
        (0..nc)
            .map(|c| internal[c] / m - (tot[c] / self.m2).powi(2))
            .sum()
    }
}

/// One local-moving phase. Returns the (compacted) community assignment and
/// whether any node moved.
fn one_level(g: &LevelGraph, order: &[usize]) -> (Vec<usize>, bool) {
    let mut comm: Vec<usize> = (0..g.n).collect();
    let mut tot: Vec<f64> = g.deg.clone();
    let mut improved = false;

    // Each full pass may only raise modularity; the pass cap is a safety net
    // against pathological tie cycling.
    let max_passes = 128;
    for _ in 0..max_passes {
        #[cfg(debug_assertions)]
        let q_before = g.modularity(&compact(&comm).0);
        let mut moved = false;
        for &u in order {
            let cur = comm[u];
            tot[cur] -= g.deg[u];

            let mut links: HashMap<usize, f64> = HashMap::new();
            links.insert(cur, 0.0);
            for &(v, w) in &g.adj[u] {
                *links.entry(comm[v]).or_insert(0.0) += w;
            }

            let mut best_c = cur;
            let mut best_gain = f64::NEG_INFINITY;
            let mut cands: Vec<(usize, f64)> = links.into_iter().collect();
            cands.sort_unstable_by_key(|&(c, _)| c);
            for (c, k_uc) in cands {
                let gain = k_uc - tot[c] * g.deg[u] / g.m2;
                if gain > best_gain + 1e-12 {
                    best_gain = gain;
                    best_c = c;
                }
                // ascending candidate order: on a tie the lowest id already won
            }

            tot[best_c] += g.deg[u];
            if best_c != cur {
                comm[u] = best_c;
                moved = true;
                improved = true;
            }
        }
        #[cfg(debug_assertions)]
        {
            let q_after = g.modularity(&compact(&comm).0);
            debug_assert!(
                q_after >= q_before - 1e-9,
                "local moving decreased modularity: {q_before} -> {q_after}"
            );
        }
        if !moved {
            break;
        }
    }

    let (compacted, _) = compact(&comm);
    (compacted, improved)
}

/// Renumber community labels to 0..k, preserving first-appearance order by label.
fn compact(comm: &[usize]) -> (Vec<usize>, usize) {
    let mut map: BTreeMap<usize, usize> = BTreeMap::new();
    for &c in comm {
        let next = map.len();
        map.entry(c).or_insert(next);
    }
    (comm.iter().map(|c| map[c]).collect(), map.len())
}

fn aggregate(g: &LevelGraph, comm: &[usize], nc: usize) -> LevelGraph {
    let mut self_w = vec![0.0; nc];
    let mut pair: BTreeMap<(usize, usize), f64> = BTreeMap::new();
    for u in 0..g.n {
        self_w[comm[u]] += g.self_w[u];
        for &(v, w) in &g.adj[u] {
            if v < u {
                continue;
            }
            let (a, b) = (comm[u].min(comm[v]), comm[u].max(comm[v]));
            if a == b {
                self_w[a] += w;
            } else {
                *pair.entry((a, b)).or_insert(0.0) += w;
            }
        }
    }
    let mut adj = vec![Vec::new(); nc];
    for (&(a, b), &w) in &pair {
        adj[a].push((b, w));
        adj[b].push((a, w));
    }
    let deg: Vec<f64> = (0..nc)
        .map(|c| adj[c].iter().map(|&(_, w)| w).sum::<f64>() + 2.0 * self_w[c])
        .collect();
    let m2 = deg.iter().sum();
    LevelGraph { n: nc, adj, self_w, deg, m2 }
}

/// Louvain community detection. `shuffle_seed: None` visits nodes in
/// ascending id order (fully deterministic); `Some(seed)` shuffles the visit
/// order per level to expose detector-induced variance.
pub fn louvain(g: &UGraph, shuffle_seed: Option<u64>) -> GroupPartition {
    let n = g.node_count();
    if n == 0 {
        return GroupPartition::default();
    }
    let mut assign: Vec<usize> = (0..n).collect();
    if g.total_weight() > 0.0 {
        let mut rng = shuffle_seed.map(ChaCha8Rng::seed_from_u64);
        let mut lg = LevelGraph::from_ugraph(g);
        loop {
            let mut order: Vec<usize> = (0..lg.n).collect();
            if let Some(r) = rng.as_mut() {
                order.shuffle(r);
            }
            let (comm, improved) = one_level(&lg, &order);
            if !improved {
                break;
            }
            for a in assign.iter_mut() {
                *a = comm[*a];
            }
            let nc = comm.iter().copied().max().unwrap() + 1;
            if nc == lg.n {
                break;
            }
            lg = aggregate(&lg, &comm, nc);
        }
    }

    // Emit groups ordered by smallest member id, gids 1..k.
    let mut by_comm: BTreeMap<usize, Vec<NodeId>> = BTreeMap::new();
    for (i, &c) in assign.iter().enumerate() {
        by_comm.entry(c).or_default().push(g.ids()[i]);
    }
    let mut groups: Vec<Vec<NodeId>> = by_comm.into_values().collect();
    groups.sort_by_key(|members| *members.iter().min().unwrap());
    GroupPartition::new(
        groups
            .into_iter()
            .enumerate()
            .map(|(i, members)| Group {
                gid: i as u64 + 1,
                members: members.into_iter().collect(),
                leader: None,
                independent: false,
            })
            .collect(),
    )
}
