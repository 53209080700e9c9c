//! The three-file data-exchange format: `nodes.csv`, `edges.csv`, `groups.json`.
//!
//! This is the boundary between data owners and everyone else. Files are
//! UTF-8 with LF line endings; all fields are numeric so no quoting exists.
//! `save_dataset` writes canonical order (sorted ids), so save -> load -> save
//! is byte-identical.

use std::collections::BTreeSet;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{
    validate_network, validate_partition, Edge, Group, GroupPartition, Network, NodeRecord,
    Violation,
};

pub const NODES_FILE: &str = "nodes.csv";
pub const EDGES_FILE: &str = "edges.csv";
pub const GROUPS_FILE: &str = "groups.json";

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("missing file {0}")]
    MissingFile(String),
    #[error("{file}:{line}: {message}")]
    Malformed {
        file: String,
        line: usize,
        message: String,
    },
    #[error("invalid {file}: {message}")]
    BadJson { file: String, message: String },
    #[error("validation failed:\n{}", .0.iter().map(|v| format!("  - {v}")).collect::<Vec<_>>().join("\n"))]
    Validation(Vec<Violation>),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Serialize, Deserialize)]
struct GroupJson {
    gid: u64,
    members: Vec<u64>,
    leader: Option<u64>,
    independent: bool,
}

fn parse_u64(tok: &str, file: &str, line: usize, what: &str) -> Result<u64, IngestError> {
    tok.trim().parse::<u64>().map_err(|_| IngestError::Malformed {
        file: file.to_string(),
        line,
        message: format!("{what} must be a non-negative integer, got {tok:?}"),
    })
}

fn read_csv(
    dir: &Path,
    file: &str,
    header: &str,
    cols: usize,
) -> Result<Vec<(usize, Vec<String>)>, IngestError> {
    let path = dir.join(file);
    if !path.is_file() {
        return Err(IngestError::MissingFile(path.display().to_string()));
    }
    let text = fs::read_to_string(&path)?;
    let mut rows = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() {
            continue;
        }
        if line == 1 {
            if trimmed != header {
                return Err(IngestError::Malformed {
                    file: file.to_string(),
                    line,
                    message: format!("expected header {header:?}, got {trimmed:?}"),
                });
            }
            continue;
        }
        let fields: Vec<String> = trimmed.split(',').map(|s| s.trim().to_string()).collect();
        if fields.len() != cols {
            return Err(IngestError::Malformed {
                file: file.to_string(),
                line,
                message: format!("expected {cols} fields, got {}", fields.len()),
            });
        }
        rows.push((line, fields));
    }
    Ok(rows)
}

/// Load and validate a dataset directory.
pub fn load_dataset(dir: impl AsRef<Path>) -> Result<(Network, GroupPartition), IngestError> {
    let dir = dir.as_ref();

    let mut nodes = Vec::new();
    for (line, f) in read_csv(dir, NODES_FILE, "id,level", 2)? {
        let id = parse_u64(&f[0], NODES_FILE, line, "id")?;
        let level = parse_u64(&f[1], NODES_FILE, line, "level")?;
        let level = u8::try_from(level).map_err(|_| IngestError::Malformed {
            file: NODES_FILE.to_string(),
            line,
            message: format!("level {level} out of range"),
        })?;
        nodes.push(NodeRecord { id, level });
    }

    let mut edges = Vec::new();
    for (line, f) in read_csv(dir, EDGES_FILE, "source,target,weight", 3)? {
        edges.push(Edge {
            source: parse_u64(&f[0], EDGES_FILE, line, "source")?,
            target: parse_u64(&f[1], EDGES_FILE, line, "target")?,
            weight: parse_u64(&f[2], EDGES_FILE, line, "weight")?,
        });
    }

    let groups_path = dir.join(GROUPS_FILE);
    if !groups_path.is_file() {
        return Err(IngestError::MissingFile(groups_path.display().to_string()));
    }
    let raw: Vec<GroupJson> =
        serde_json::from_str(&fs::read_to_string(&groups_path)?).map_err(|e| {
            IngestError::BadJson {
                file: GROUPS_FILE.to_string(),
                message: e.to_string(),
            }
        })?;
    let groups = raw
        .into_iter()
        .map(|g| Group {
            gid: g.gid,
            members: g.members.into_iter().collect::<BTreeSet<_>>(),
            leader: g.leader,
            independent: g.independent,
        })
        .collect();

    let mut net = Network::new(nodes, edges);
    let mut part = GroupPartition::new(groups);
    net.canonicalize();
    part.canonicalize();

    let mut violations = validate_network(&net);
    let (pv, _warnings) = validate_partition(&net, &part);
    violations.extend(pv);
    if !violations.is_empty() {
        return Err(IngestError::Validation(violations));
    }
    Ok((net, part))
}

/// Write a dataset directory in canonical order.
pub fn save_dataset(
    net: &Network,
    part: &GroupPartition,
    dir: impl AsRef<Path>,
) -> Result<(), IngestError> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir)?;

    let mut net = net.clone();
    let mut part = part.clone();
    net.canonicalize();
    part.canonicalize();

    let mut nodes_out = String::from("id,level\n");
    for n in &net.nodes {
        nodes_out.push_str(&format!("{},{}\n", n.id, n.level));
    }
    fs::write(dir.join(NODES_FILE), nodes_out)?;

    let mut edges_out = String::from("source,target,weight\n");
    for e in &net.edges {
        edges_out.push_str(&format!("{},{},{}\n", e.source, e.target, e.weight));
    }
    fs::write(dir.join(EDGES_FILE), edges_out)?;

    let raw: Vec<GroupJson> = part
        .groups
        .iter()
        .map(|g| GroupJson {
            gid: g.gid,
            members: g.members.iter().copied().collect(),
            leader: g.leader,
            independent: g.independent,
        })
        .collect();
    let mut json = serde_json::to_string_pretty(&raw).expect("groups serialize");
    json.push('\n');
    fs::write(dir.join(GROUPS_FILE), json)?;
    Ok(())
}

/// Warn about node id tokens that are not plain non-negative integers.
/// Operates on the raw file so it can flag ids the strict parser would reject.
pub fn anonymize_check(dir: impl AsRef<Path>) -> Result<Vec<String>, IngestError> {
    let path = dir.as_ref().join(NODES_FILE);
    if !path.is_file() {
        return Err(IngestError::MissingFile(path.display().to_string()));
    }
    let text = fs::read_to_string(&path)?;
    let mut warnings = Vec::new();
    for (i, raw) in text.lines().enumerate().skip(1) {
        let trimmed = raw.trim();
        if trimmed.is_empty() {
            continue;
        }
        let id = trimmed.split(',').next().unwrap_or("").trim();
        if id.parse::<u64>().is_err() {
            warnings.push(format!(
                "{NODES_FILE}:{}: id {id:?} is not a bare numeric identifier; \
                 replace personal identifiers with unique numeric ids",
                i + 1
            ));
        }
    }
    Ok(warnings)
}
