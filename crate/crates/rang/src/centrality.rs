//! Betweenness centrality (Brandes) and threshold-based leadership detection.
//!
//! Shortest paths on weighted graphs default to edge length 1/weight: more
//! interaction means closer, matching the information-flow reading. A unit
//! length mode exists for comparison.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use rayon::prelude::*;
use thiserror::Error;

use crate::community::UGraph;
use crate::model::NodeId;

/// Tolerance for treating two path lengths as tied.
const EPS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PathLength {
    /// length = 1 / weight
    #[default]
    InverseWeight,
    /// length = 1 for every edge
    Unit,
}

#[derive(Debug, Error)]
pub enum CentralityError {
    #[error("management node count m={m} out of range 1..={n}")]
    BadManagementCount { m: usize, n: usize },
}

#[derive(Debug, PartialEq)]
struct HeapItem {
    dist: f64,
    node: usize,
}

impl Eq for HeapItem {}

impl Ord for HeapItem {
    fn cmp(&self, other: &Self) -> Ordering {
        // min-heap on distance, then node index for determinism
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.node.cmp(&self.node))
    }
}

impl PartialOrd for HeapItem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn edge_length(weight: f64, mode: PathLength) -> f64 {
    match mode {
        PathLength::InverseWeight => 1.0 / weight,
        PathLength::Unit => 1.0,
    }
}

/// Per-source Brandes accumulation. Returns delta contributions for one source.
fn brandes_source(g: &UGraph, s: usize, mode: PathLength) -> Vec<f64> {
    let n = g.node_count();
    let mut dist = vec![f64::INFINITY; n];
    let mut sigma = vec![0.0f64; n];
    let mut pred: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut settled = vec![false; n];
    let mut order: Vec<usize> = Vec::with_capacity(n);
    let mut heap = BinaryHeap::new();

    dist[s] = 0.0;
    sigma[s] = 1.0;
    heap.push(HeapItem { dist: 0.0, node: s });

    while let Some(HeapItem { dist: d, node: u }) = heap.pop() {
        if settled[u] || d > dist[u] + EPS {
            continue;
        }
        settled[u] = true;
        order.push(u);
        for &(v, w) in g.neighbors(u) {
            let nd = dist[u] + edge_length(w, mode);
            if nd < dist[v] - EPS {
                dist[v] = nd;
                sigma[v] = sigma[u];
                pred[v] = vec![u];
                heap.push(HeapItem { dist: nd, node: v });
            } else if (nd - dist[v]).abs() <= EPS && !settled[v] {
                sigma[v] += sigma[u];
                pred[v].push(u);
            }
        }
    }

    let mut delta = vec![0.0f64; n];
    let mut contrib = vec![0.0f64; n];
    for &u in order.iter().rev() {
        for &p in &pred[u] {
            delta[p] += sigma[p] / sigma[u] * (1.0 + delta[u]);
        }
        if u != s {
            contrib[u] = delta[u];
        }
    }
    contrib
}

/// Raw betweenness: for each node, the endpoint-excluded sum over unordered
/// pairs of the fraction of shortest paths passing through it. Indexed like
/// the graph's id order.
pub fn betweenness(g: &UGraph, mode: PathLength) -> Vec<f64> {
    let n = g.node_count();
    if n == 0 {
        return Vec::new();
    }
    // Per-source runs are independent; summation order is fixed by source
    // index, so the reduction is deterministic under any thread count.
    let per_source: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|s| brandes_source(g, s, mode))
        .collect();
    let mut bc = vec![0.0f64; n];
    for contrib in &per_source {
        for (b, c) in bc.iter_mut().zip(contrib) {
            *b += c;
        }
    }
    // Undirected: every pair was counted from both endpoints.
    for b in &mut bc {
        *b /= 2.0;
    }
    bc
}

/// Betweenness divided by (n-1)(n-2)/2, clamped to the n >= 3 convention
/// (all zeros below that).
pub fn relative_betweenness(g: &UGraph, mode: PathLength) -> Vec<f64> {
    let n = g.node_count();
    if n < 3 {
        return vec![0.0; n];
    }
    let norm = ((n - 1) * (n - 2)) as f64 / 2.0;
    betweenness(g, mode).into_iter().map(|b| b / norm).collect()
}

/// Nodes ranked by (RBC desc, id asc), 1-based rank.
pub fn centrality_ranking(g: &UGraph, mode: PathLength) -> Vec<(NodeId, f64, f64)> {
    let raw = betweenness(g, mode);
    let n = g.node_count();
    let norm = if n >= 3 { ((n - 1) * (n - 2)) as f64 / 2.0 } else { f64::INFINITY };
    let mut rows: Vec<(NodeId, f64, f64)> = g
        .ids()
        .iter()
        .zip(&raw)
        .map(|(&id, &b)| (id, b, if norm.is_finite() { b / norm } else { 0.0 }))
        .collect();
    rows.sort_by(|a, b| b.2.total_cmp(&a.2).then_with(|| a.0.cmp(&b.0)));
    rows
}

/// Leadership rule: threshold at 90% of the RBC of the m-th ranked node,
/// return every node at or above it.
pub fn detect_leaders(
    g: &UGraph,
    m: usize,
    mode: PathLength,
) -> Result<std::collections::BTreeSet<NodeId>, CentralityError> {
    let n = g.node_count();
    if m < 1 || m > n {
        return Err(CentralityError::BadManagementCount { m, n });
    }
    let rows = centrality_ranking(g, mode);
    let threshold = 0.9 * rows[m - 1].2;
    Ok(rows
        .iter()
        .filter(|&&(_, _, rbc)| rbc >= threshold)
        .map(|&(id, _, _)| id)
        .collect())
}
