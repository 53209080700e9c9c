//! Synthetic network generators: BWRN, WRG, and the weighted SBM baseline.
//!
//! All randomness flows from a 64-bit master seed. Ensemble member k draws
//! from its own ChaCha stream, so parallel and serial generation produce
//! identical ensembles.

use std::collections::BTreeMap;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Bernoulli, Binomial, Distribution};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::classify::{summarize_with, ClassContext, ClassifyError};
use crate::model::{
    Edge, EdgeClassSummary, Group, GroupPartition, Network, NodeId,
};

/// Weight-assignment model for generated networks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    Bwrn,
    Wrg,
    Sbm,
}

impl std::str::FromStr for Model {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "bwrn" => Ok(Model::Bwrn),
            "wrg" => Ok(Model::Wrg),
            "sbm" => Ok(Model::Sbm),
            other => Err(format!("unknown model {other:?}, expected bwrn|wrg|sbm")),
        }
    }
}

impl std::fmt::Display for Model {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Model::Bwrn => "bwrn",
            Model::Wrg => "wrg",
            Model::Sbm => "sbm",
        })
    }
}

/// Default trade-off value used throughout the experiments: roughly 10% of
/// weight-1 edges vanish while a similar share gain weight.
pub const DEFAULT_P_B: f64 = 0.875;

/// WRG per-pair trial cap; hitting it means a degenerate success probability.
pub const WRG_WEIGHT_CAP: u64 = 1_000_000;

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct GenConfig {
    pub model: Model,
    pub p_b: f64,
    pub seed: u64,
    pub count: usize,
    /// SBM only: pick group pairs weighted by their probability instead of uniformly.
    pub weighted_pair_choice: bool,
    /// Reshuffle node ids in each generated network by a seeded permutation.
    pub shuffle_ids: bool,
}

impl GenConfig {
    pub fn new(model: Model, seed: u64, count: usize) -> Self {
        GenConfig {
            model,
            p_b: DEFAULT_P_B,
            seed,
            count,
            weighted_pair_choice: false,
            shuffle_ids: true,
        }
    }

    fn validate(&self) -> Result<(), GenError> {
        if self.count < 1 {
            return Err(GenError::BadConfig("count must be >= 1".into()));
        }
        if !(self.p_b > 0.0 && self.p_b <= 1.0) {
            return Err(GenError::BadConfig(format!(
                "p_B must lie in (0,1], got {}",
                self.p_b
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Error)]
pub enum GenError {
    #[error("invalid configuration: {0}")]
    BadConfig(String),
    #[error("WRG trial cap exceeded for class {0} (success probability too close to 1)")]
    WrgCapExceeded(String),
    #[error(transparent)]
    Classify(#[from] ClassifyError),
}

/// One generated network plus the (permuted) reference partition and the
/// generated-id -> original-id map needed to evaluate against the original.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GeneratedMember {
    pub network: Network,
    pub partition: GroupPartition,
    /// Pairs (generated id, original id); identity when ids were not shuffled.
    pub id_map: Vec<(NodeId, NodeId)>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GeneratedEnsemble {
    pub config: GenConfig,
    pub members: Vec<GeneratedMember>,
}

/// Decompose an original weight into the BWRN trial parameters
/// (w_B = floor(w / p_B), p_a = w - p_B * w_B).
pub fn bwrn_params(w: u64, p_b: f64) -> (u64, f64) {
    let w_b = (w as f64 / p_b).floor() as u64;
    let p_a = (w as f64 - p_b * w_b as f64).clamp(0.0, 1.0);
    (w_b, p_a)
}

/// Sample a generated weight for an original weight `w`: successes of
/// w_B Bernoulli(p_B) trials, plus one Bernoulli(p_a) trial when
/// p_B * w_B < w. Expected value is exactly w.
pub fn bwrn_sample_weight<R: Rng + ?Sized>(w: u64, p_b: f64, rng: &mut R) -> u64 {
    debug_assert!(w >= 1 && p_b > 0.0 && p_b <= 1.0);
    let (w_b, p_a) = bwrn_params(w, p_b);
    let mut k = Binomial::new(w_b, p_b).expect("valid binomial").sample(rng);
    if p_a > 0.0 && Bernoulli::new(p_a).expect("valid bernoulli").sample(rng) {
        k += 1;
    }
    k
}

fn pairs_for<'a>(
    pairs: &'a BTreeMap<crate::model::EdgeClassKind, Vec<(NodeId, NodeId)>>,
    kind: &crate::model::EdgeClassKind,
) -> &'a [(NodeId, NodeId)] {
    pairs.get(kind).map(|v| v.as_slice()).unwrap_or(&[])
}

/// BWRN: replay each class's original weight multiset (heaviest first) onto
/// uniformly chosen unused pairs of that class, resampling each weight.
pub fn bwrn_generate<R: Rng + ?Sized>(
    summary: &EdgeClassSummary,
    ctx: &ClassContext,
    p_b: f64,
    rng: &mut R,
) -> Network {
    let universe = ctx.class_pairs();
    let mut edges = Vec::new();
    for class in &summary.classes {
        if class.weights.is_empty() {
            continue;
        }
        let mut free: Vec<(NodeId, NodeId)> = pairs_for(&universe, &class.kind).to_vec();
        assert!(
            class.weights.len() <= free.len(),
            "class {} holds more edges than its capacity",
            class.kind
        );
        // weights are pre-sorted descending by summarize
        for &w in &class.weights {
            let idx = rng.gen_range(0..free.len());
            let (s, t) = free.swap_remove(idx);
            let k = bwrn_sample_weight(w, p_b, rng);
            if k > 0 {
                edges.push(Edge { source: s, target: t, weight: k });
            }
        }
    }
    edges.sort_by_key(|e| (e.source, e.target));
    Network::new(ctx.nodes().to_vec(), edges)
}

/// WRG: per class, every eligible pair draws a geometric weight with success
/// probability p = W / (W + E); weight-0 pairs create no edge.
pub fn wrg_generate<R: Rng + ?Sized>(
    summary: &EdgeClassSummary,
    ctx: &ClassContext,
    rng: &mut R,
) -> Result<Network, GenError> {
    let universe = ctx.class_pairs();
    let mut edges = Vec::new();
    for class in &summary.classes {
        if class.capacity == 0 || class.weight_sum == 0 {
            continue;
        }
        let w = class.weight_sum as f64;
        let e = class.capacity as f64;
        let p = w / (w + e);
        let trial = Bernoulli::new(p).expect("p in (0,1)");
        for &(s, t) in pairs_for(&universe, &class.kind) {
            let mut k = 0u64;
            while trial.sample(rng) {
                k += 1;
                if k >= WRG_WEIGHT_CAP {
                    return Err(GenError::WrgCapExceeded(class.kind.to_string()));
                }
            }
            if k > 0 {
                edges.push(Edge { source: s, target: t, weight: k });
            }
        }
    }
    edges.sort_by_key(|e| (e.source, e.target));
    Ok(Network::new(ctx.nodes().to_vec(), edges))
}

/// Weighted SBM baseline. Blocks are the partition groups plus one singleton
/// block per unassigned node (leaders, boss, stragglers), so every original
/// edge contributes to some block-pair probability. Repeats single-unit
/// Bernoulli increments until the generated total weight equals the original.
pub fn sbm_generate<R: Rng + ?Sized>(
    net: &Network,
    part: &GroupPartition,
    weighted_pair_choice: bool,
    rng: &mut R,
) -> Network {
    let w_total = net.total_weight();
    if w_total == 0 {
        return Network::new(net.nodes.clone(), Vec::new());
    }

    // Blocks sorted: groups by gid, then singleton blocks by node id.
    let membership = part.membership();
    let mut blocks: Vec<Vec<NodeId>> = Vec::new();
    let mut sorted_groups: Vec<&Group> = part.groups.iter().collect();
    sorted_groups.sort_by_key(|g| g.gid);
    for g in &sorted_groups {
        blocks.push(g.members.iter().copied().collect());
    }
    let mut singles: Vec<NodeId> = net
        .nodes
        .iter()
        .map(|n| n.id)
        .filter(|id| !membership.contains_key(id))
        .collect();
    singles.sort_unstable();
    for id in singles {
        blocks.push(vec![id]);
    }

    let block_of: std::collections::HashMap<NodeId, usize> = blocks
        .iter()
        .enumerate()
        .flat_map(|(bi, ids)| ids.iter().map(move |&id| (id, bi)))
        .collect();

    let nb = blocks.len();
    let mut pair_weight = vec![vec![0u64; nb]; nb];
    for e in &net.edges {
        pair_weight[block_of[&e.source]][block_of[&e.target]] += e.weight;
    }

    // Ordered block pairs that admit at least one distinct node pair.
    let mut eligible: Vec<(usize, usize, f64)> = Vec::new();
    for i in 0..nb {
        for j in 0..nb {
            if i == j && blocks[i].len() < 2 {
                continue;
            }
            eligible.push((i, j, pair_weight[i][j] as f64 / w_total as f64));
        }
    }

    let cumulative: Vec<f64> = if weighted_pair_choice {
        let mut acc = 0.0;
        eligible
            .iter()
            .map(|&(_, _, p)| {
                acc += p;
                acc
            })
            .collect()
    } else {
        Vec::new()
    };

    let mut weights: BTreeMap<(NodeId, NodeId), u64> = BTreeMap::new();
    let mut generated = 0u64;
    while generated < w_total {
        let (bi, bj, p) = if weighted_pair_choice {
            let x: f64 = rng.gen_range(0.0..*cumulative.last().unwrap());
            let idx = cumulative.partition_point(|&c| c <= x);
            eligible[idx.min(eligible.len() - 1)]
        } else {
            eligible[rng.gen_range(0..eligible.len())]
        };
        if p <= 0.0 {
            continue;
        }
        let (u, v) = if bi == bj {
            let a = rng.gen_range(0..blocks[bi].len());
            let mut b = rng.gen_range(0..blocks[bi].len() - 1);
            if b >= a {
                b += 1;
            }
            (blocks[bi][a], blocks[bi][b])
        } else {
            (
                blocks[bi][rng.gen_range(0..blocks[bi].len())],
                blocks[bj][rng.gen_range(0..blocks[bj].len())],
            )
        };
        if rng.gen_bool(p) {
            *weights.entry((u, v)).or_insert(0) += 1;
            generated += 1;
        }
    }

    let edges = weights
        .into_iter()
        .map(|((source, target), weight)| Edge { source, target, weight })
        .collect();
    Network::new(net.nodes.clone(), edges)
}

/// Generate one network in the original id space.
pub fn generate_one<R: Rng + ?Sized>(
    net: &Network,
    part: &GroupPartition,
    summary: &EdgeClassSummary,
    ctx: &ClassContext,
    cfg: &GenConfig,
    rng: &mut R,
) -> Result<Network, GenError> {
    match cfg.model {
        Model::Bwrn => Ok(bwrn_generate(summary, ctx, cfg.p_b, rng)),
        Model::Wrg => wrg_generate(summary, ctx, rng),
        Model::Sbm => Ok(sbm_generate(net, part, cfg.weighted_pair_choice, rng)),
    }
}

fn shuffle_member<R: Rng + ?Sized>(
    mut network: Network,
    part: &GroupPartition,
    rng: &mut R,
) -> GeneratedMember {
    let mut ids: Vec<NodeId> = network.nodes.iter().map(|n| n.id).collect();
    ids.sort_unstable();
    let mut shuffled = ids.clone();
    shuffled.shuffle(rng);
    let map: std::collections::HashMap<NodeId, NodeId> =
        ids.iter().copied().zip(shuffled.iter().copied()).collect();

    for n in &mut network.nodes {
        n.id = map[&n.id];
    }
    for e in &mut network.edges {
        e.source = map[&e.source];
        e.target = map[&e.target];
    }
    network.canonicalize();

    let mut partition = part.clone();
    for g in &mut partition.groups {
        g.members = g.members.iter().map(|m| map[m]).collect();
        g.leader = g.leader.map(|l| map[&l]);
    }

    let mut id_map: Vec<(NodeId, NodeId)> =
        map.iter().map(|(&orig, &gen)| (gen, orig)).collect();
    id_map.sort_unstable();
    GeneratedMember { network, partition, id_map }
}

/// Generate `cfg.count` independent networks. Member k draws from ChaCha
/// stream k of the master seed; identical configs give identical ensembles
/// regardless of thread count.
pub fn generate_ensemble(
    net: &Network,
    part: &GroupPartition,
    cfg: &GenConfig,
) -> Result<GeneratedEnsemble, GenError> {
    cfg.validate()?;
    let ctx = ClassContext::new(&net.nodes, part)?;
    let summary = summarize_with(net, &ctx)?;

    let members: Result<Vec<GeneratedMember>, GenError> = (0..cfg.count)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(k as u64 + 1);
            let network = generate_one(net, part, &summary, &ctx, cfg, &mut rng)?;
            if cfg.shuffle_ids {
                Ok(shuffle_member(network, part, &mut rng))
            } else {
                let id_map = network.nodes.iter().map(|n| (n.id, n.id)).collect();
                Ok(GeneratedMember { network, partition: part.clone(), id_map })
            }
        })
        .collect();

    Ok(GeneratedEnsemble { config: *cfg, members: members? })
}
