//! Random anonymized network generator and ensemble analytics.
//!
//! Pipeline: ingest a directed weighted network with hierarchy roles and
//! groups, summarize its edge-class statistics, generate ensembles of
//! statistically similar synthetic networks (BWRN, WRG, or a weighted SBM
//! baseline), then score the ensemble for group similarity (NMI), leadership
//! preservation (Jaccard over RBC-detected leaders), and structure stability
//! (meta-graph matching).

pub mod analysis;
pub mod centrality;
pub mod classify;
pub mod community;
pub mod compare;
pub mod generate;
pub mod ingest;
pub mod model;
pub mod stability;

pub use model::{Edge, GroupPartition, Network, NodeRecord};
