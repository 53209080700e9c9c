//! `rang` command-line pipeline: validate, summarize, generate, analyze, stability.
//!
//! Exit codes: 0 success, 1 I/O or configuration error, 2 validation failure.
//! All randomness flows from `--seed`; output trees are byte-identical across
//! reruns and thread counts.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use rang::analysis::{
    analyze_ensemble, default_management_count, detected_partitions, remap_network,
    AnalyzeOptions,
};
use rang::centrality::{centrality_ranking, PathLength};
use rang::classify::summarize;
use rang::community::{louvain, to_undirected};
use rang::compare::EnsembleReport;
use rang::generate::{generate_ensemble, GenConfig, Model, DEFAULT_P_B};
use rang::ingest::{anonymize_check, load_dataset, save_dataset, IngestError};
use rang::model::{validate_network, GroupPartition, Network, NodeId};
use rang::stability::{
    build_metagraph, stability_verdict, structure_census, Matching,
    DEFAULT_STABILITY_THRESHOLD,
};

#[derive(Parser)]
#[command(name = "rang", version, about = "Synthetic covert-network generator and ensemble analytics")]
struct Cli {
    /// Worker thread cap (falls back to env RANG_THREADS, then all cores)
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Machine-readable JSON on stdout instead of human summaries
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a dataset directory against all structural invariants
    Validate { dir: PathBuf },
    /// Export the anonymized edge-class summary (summary.json)
    Summarize {
        dir: PathBuf,
        /// Output file
        #[arg(long, default_value = "summary.json")]
        out: PathBuf,
    },
    /// Generate an ensemble of synthetic networks
    Generate(GenerateArgs),
    /// Detect groups and leaders on every ensemble member and score them
    /// against the original (report.json, report.csv, centrality.csv)
    Analyze(AnalyzeArgs),
    /// Meta-graph structure-frequency analysis of an ensemble
    /// (metagraph_degrees.csv, census.json)
    Stability(StabilityArgs),
}

#[derive(Args)]
struct GenerateArgs {
    dir: PathBuf,
    /// Weight model: bwrn, wrg, or sbm
    #[arg(long, value_parser = parse_model)]
    model: Model,
    #[arg(long)]
    count: usize,
    /// BWRN success probability p_B in (0, 1]
    #[arg(long, default_value_t = DEFAULT_P_B)]
    pb: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
    /// SBM: pick block pairs weighted by probability instead of uniformly
    #[arg(long)]
    weighted_pairs: bool,
    /// Keep original node ids instead of reshuffling them per member
    #[arg(long)]
    keep_ids: bool,
    /// Flag groups with no incoming outside edges as independent
    #[arg(long)]
    auto_independent: bool,
}

#[derive(Args)]
struct AnalyzeArgs {
    original_dir: PathBuf,
    ensemble_dir: PathBuf,
    /// Management-node count for the leadership threshold
    /// (default: level >= 2 nodes in the original)
    #[arg(long)]
    m: Option<usize>,
    /// Use unit edge lengths for shortest paths instead of 1/weight
    #[arg(long)]
    unit_lengths: bool,
    /// Directory for report.json / report.csv / centrality.csv
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Args)]
struct StabilityArgs {
    original_dir: PathBuf,
    ensemble_dir: PathBuf,
    /// Matching predicate: exact or flexible
    #[arg(long, value_parser = parse_matching)]
    matching: Matching,
    #[arg(long, default_value_t = DEFAULT_STABILITY_THRESHOLD)]
    threshold: f64,
    /// Directory for metagraph_degrees.csv / census.json / verdict.json
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

fn parse_model(s: &str) -> Result<Model, String> {
    s.parse()
}

fn parse_matching(s: &str) -> Result<Matching, String> {
    s.parse()
}

enum CliError {
    /// I/O, config, or any other operational failure -> exit 1
    Run(String),
    /// Dataset invariant violations -> exit 2
    Validation(String),
}

impl<E: std::error::Error> From<E> for CliError {
    fn from(e: E) -> Self {
        CliError::Run(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();

    let threads = cli.threads.or_else(|| {
        std::env::var("RANG_THREADS").ok().and_then(|v| v.parse().ok())
    });
    if let Some(t) = threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }

    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Run(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Validation(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Validate { dir } => cmd_validate(dir, cli.json),
        Command::Summarize { dir, out } => cmd_summarize(dir, out),
        Command::Generate(args) => cmd_generate(args, cli.json),
        Command::Analyze(args) => cmd_analyze(args, cli.json),
        Command::Stability(args) => cmd_stability(args, cli.json),
    }
}

fn load(dir: &Path) -> Result<(Network, GroupPartition), CliError> {
    match load_dataset(dir) {
        Ok(x) => Ok(x),
        Err(IngestError::Validation(v)) => Err(CliError::Validation(
            v.iter()
                .map(|x| format!("violation: {x}"))
                .collect::<Vec<_>>()
                .join("\n"),
        )),
        Err(e) => Err(CliError::Run(e.to_string())),
    }
}

fn cmd_validate(dir: &Path, json: bool) -> Result<(), CliError> {
    for w in anonymize_check(dir).map_err(|e| CliError::Run(e.to_string()))? {
        eprintln!("warning: {w}");
    }
    let (net, part) = load(dir)?;
    // load() already enforced the invariants; report the clean result.
    let (_, warnings) = rang::model::validate_partition(&net, &part);
    for w in &warnings {
        eprintln!("warning: {w}");
    }
    if json {
        println!(
            "{}",
            serde_json::json!({
                "nodes": net.nodes.len(),
                "edges": net.edges.len(),
                "total_weight": net.total_weight(),
                "groups": part.groups.len(),
                "warnings": warnings,
            })
        );
    } else {
        println!(
            "ok: {} nodes, {} edges (total weight {}), {} groups",
            net.nodes.len(),
            net.edges.len(),
            net.total_weight(),
            part.groups.len()
        );
    }
    Ok(())
}

fn cmd_summarize(dir: &Path, out: &Path) -> Result<(), CliError> {
    let (net, part) = load(dir)?;
    let summary = summarize(&net, &part).map_err(|e| CliError::Run(e.to_string()))?;
    write_json(out, &summary)?;
    println!(
        "wrote {} ({} classes, residual weight {})",
        out.display(),
        summary.classes.len(),
        summary.residual_weight
    );
    Ok(())
}

#[derive(serde::Serialize)]
struct Manifest<'a> {
    model: Model,
    p_b: f64,
    seed: u64,
    count: usize,
    weighted_pair_choice: bool,
    shuffled_ids: bool,
    version: &'a str,
}

fn cmd_generate(args: &GenerateArgs, json: bool) -> Result<(), CliError> {
    let (net, mut part) = load(&args.dir)?;
    if args.auto_independent {
        let flagged = rang::classify::detect_independent(&part, &net, 6);
        for g in &mut part.groups {
            if flagged.contains(&g.gid) && !g.independent {
                g.independent = true;
                g.leader = None;
            }
        }
    } else {
        for gid in rang::classify::detect_independent(&part, &net, 6) {
            if !part.groups.iter().any(|g| g.gid == gid && g.independent) {
                eprintln!(
                    "warning: group {gid} looks independent (no incoming outside edges); \
                     rerun with --auto-independent to flag it"
                );
            }
        }
    }

    let cfg = GenConfig {
        model: args.model,
        p_b: args.pb,
        seed: args.seed,
        count: args.count,
        weighted_pair_choice: args.weighted_pairs,
        shuffle_ids: !args.keep_ids,
    };
    let ensemble =
        generate_ensemble(&net, &part, &cfg).map_err(|e| CliError::Run(e.to_string()))?;

    fs::create_dir_all(&args.out)?;
    for (k, member) in ensemble.members.iter().enumerate() {
        let dir = args.out.join(k.to_string());
        save_dataset(&member.network, &member.partition, &dir)
            .map_err(|e| CliError::Run(e.to_string()))?;
        write_json(&dir.join("mapping.json"), &member.id_map)?;
        debug_assert!(validate_network(&member.network).is_empty());
    }
    let manifest = Manifest {
        model: cfg.model,
        p_b: cfg.p_b,
        seed: cfg.seed,
        count: cfg.count,
        weighted_pair_choice: cfg.weighted_pair_choice,
        shuffled_ids: cfg.shuffle_ids,
        version: env!("CARGO_PKG_VERSION"),
    };
    write_json(&args.out.join("manifest.json"), &manifest)?;

    if json {
        println!("{}", serde_json::to_string(&manifest).unwrap());
    } else {
        println!(
            "generated {} {} network(s) into {}",
            cfg.count,
            cfg.model,
            args.out.display()
        );
    }
    Ok(())
}

/// Member directories of an ensemble, ordered numerically.
fn member_dirs(ensemble_dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    let mut dirs: Vec<(u64, PathBuf)> = Vec::new();
    for entry in fs::read_dir(ensemble_dir)
        .map_err(|e| CliError::Run(format!("{}: {e}", ensemble_dir.display())))?
    {
        let path = entry?.path();
        if !path.is_dir() {
            continue;
        }
        let Some(name) = path.file_name().and_then(|n| n.to_str()) else {
            continue;
        };
        if let Ok(k) = name.parse::<u64>() {
            dirs.push((k, path));
        }
    }
    dirs.sort_by_key(|&(k, _)| k);
    if dirs.is_empty() {
        return Err(CliError::Run(format!(
            "no ensemble member directories found under {}",
            ensemble_dir.display()
        )));
    }
    Ok(dirs.into_iter().map(|(_, p)| p).collect())
}

/// Load ensemble members and map them back to the original id space via
/// their mapping.json (identity when absent).
fn load_members(ensemble_dir: &Path) -> Result<Vec<Network>, CliError> {
    let mut members = Vec::new();
    for (index, dir) in member_dirs(ensemble_dir)?.iter().enumerate() {
        let (net, _) = load(dir)?;
        let mapping_path = dir.join("mapping.json");
        let net = if mapping_path.is_file() {
            let id_map: Vec<(NodeId, NodeId)> =
                serde_json::from_str(&fs::read_to_string(&mapping_path)?)
                    .map_err(|e| CliError::Run(format!("{}: {e}", mapping_path.display())))?;
            remap_network(&net, &id_map, index).map_err(|e| CliError::Run(e.to_string()))?
        } else {
            net
        };
        members.push(net);
    }
    Ok(members)
}

fn cmd_analyze(args: &AnalyzeArgs, json: bool) -> Result<(), CliError> {
    let (original, original_part) = load(&args.original_dir)?;
    let members = load_members(&args.ensemble_dir)?;
    let opts = AnalyzeOptions {
        m: args.m,
        path_mode: if args.unit_lengths { PathLength::Unit } else { PathLength::InverseWeight },
        detector_seed: None,
    };
    let report = analyze_ensemble(&original, &original_part, &members, &opts)
        .map_err(|e| CliError::Run(e.to_string()))?;

    fs::create_dir_all(&args.out)?;
    write_json(&args.out.join("report.json"), &report)?;
    write_report_csv(&args.out.join("report.csv"), &report)?;
    write_centrality_csv(&args.out.join("centrality.csv"), &original, opts.path_mode)?;

    if json {
        println!("{}", serde_json::to_string(&report).unwrap());
    } else {
        let m = args.m.unwrap_or_else(|| default_management_count(&original));
        println!("analyzed {} network(s) against {} (m = {m})", members.len(), args.original_dir.display());
        println!(
            "NMI      mean {:.3}  median {:.3}  min {:.3}  max {:.3}",
            report.nmi.mean, report.nmi.median, report.nmi.min, report.nmi.max
        );
        println!(
            "Jaccard  mean {:.3}  median {:.3}  min {:.3}  max {:.3}",
            report.jaccard.mean, report.jaccard.median, report.jaccard.min, report.jaccard.max
        );
        println!(
            "Combined mean {:.3}  median {:.3}  min {:.3}  max {:.3}",
            report.combined.mean, report.combined.median, report.combined.min, report.combined.max
        );
    }
    Ok(())
}

fn cmd_stability(args: &StabilityArgs, json: bool) -> Result<(), CliError> {
    let (original, _) = load(&args.original_dir)?;
    let members = load_members(&args.ensemble_dir)?;

    // Structure matching compares detector output with detector output, so
    // the original's reference structure is also Louvain-detected.
    let original_detected = louvain(&to_undirected(&original), None);
    let partitions = detected_partitions(&members, None);

    let metagraph = build_metagraph(&partitions, Some(&original_detected), args.matching);
    let census = structure_census(&partitions, Some(&original_detected), args.matching);
    let verdict = stability_verdict(&partitions, &original_detected, args.matching, args.threshold);

    fs::create_dir_all(&args.out)?;
    let mut csv = String::from("degree,count\n");
    for (degree, count) in metagraph.degree_histogram() {
        csv.push_str(&format!("{degree},{count}\n"));
    }
    fs::write(args.out.join("metagraph_degrees.csv"), csv)?;
    write_json(&args.out.join("census.json"), &census)?;
    write_json(&args.out.join("verdict.json"), &verdict)?;

    if json {
        println!("{}", serde_json::to_string(&verdict).unwrap());
    } else {
        println!(
            "{} matching over {} network(s): original structure occurs {} time(s) ({:.1}%) -> {}",
            match args.matching {
                Matching::Exact => "exact",
                Matching::Flexible => "flexible",
            },
            verdict.ensemble_size,
            verdict.original_frequency,
            100.0 * verdict.original_share,
            if verdict.stable { "stable" } else { "not stable" }
        );
        for entry in verdict.top_structures.iter().take(10) {
            println!(
                "  structure of member {:>4}: frequency {}{}",
                entry.representative,
                entry.frequency,
                if entry.matches_original { "  (matches original)" } else { "" }
            );
        }
    }
    Ok(())
}

fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::Run(format!("{}: {e}", path.display())))?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

fn write_report_csv(path: &Path, report: &EnsembleReport) -> Result<(), CliError> {
    let mut out = String::from("network,nmi,jaccard,combined\n");
    for row in &report.per_network {
        out.push_str(&format!("{},{},{},{}\n", row.index, row.nmi, row.jaccard, row.combined));
    }
    for (label, agg) in [
        ("mean", &report.nmi),
        ("median", &report.nmi),
        ("min", &report.nmi),
        ("max", &report.nmi),
    ] {
        let pick = |a: &rang::compare::Aggregate| match label {
            "mean" => a.mean,
            "median" => a.median,
            "min" => a.min,
            _ => a.max,
        };
        out.push_str(&format!(
            "{label},{},{},{}\n",
            pick(agg),
            pick(&report.jaccard),
            pick(&report.combined)
        ));
    }
    fs::write(path, out)?;
    Ok(())
}

fn write_centrality_csv(path: &Path, net: &Network, mode: PathLength) -> Result<(), CliError> {
    let g = to_undirected(net);
    let rows = centrality_ranking(&g, mode);
    let mut out = String::from("id,betweenness,rbc,rank\n");
    for (rank, (id, raw, rbc)) in rows.iter().enumerate() {
        out.push_str(&format!("{id},{raw},{rbc},{}\n", rank + 1));
    }
    fs::write(path, out)?;
    Ok(())
}
