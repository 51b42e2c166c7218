//! `semnet analyze`: per-network descriptive statistics for the full graph
//! and its largest connected component, degree curves (density, mean
//! neighbor degree, clustering) with rewired-ensemble columns, and one
//! combined statistics table. Networks fail independently; the run carries
//! on and the summary lists what broke.

use std::path::PathBuf;

use rayon::prelude::*;
use serde::Serialize;

use semnet::degree::{annd, clustering, degree_density, default_log_width, log_bin};
use semnet::graph::Graph;
use semnet::ingest::Relation;
use semnet::tables::{
    binned_density_table, component_size_table, curve_table, density_table, rewired_stats,
    stats_table, NetworkStats, RewiredStats, Scope, StatsRow,
};
use semnet::tail::estimate_degree_tail;

use crate::config::{RunConfig, Stamp};
use crate::io::{graph_path, load_graph, write_text};
use crate::{io, CliError, EXIT_PARTIAL};

#[derive(Serialize)]
struct NetworkReport {
    #[serde(flatten)]
    stamp: Stamp,
    language: String,
    relation: String,
    full: NetworkStats,
    lcc: NetworkStats,
    /// Rewired-ensemble statistics of the LCC; absent when rewiring is off.
    rewired_lcc: Option<RewiredStats>,
}

struct JobOutput {
    report: NetworkReport,
    json_path: PathBuf,
    files: Vec<(PathBuf, String)>,
    rows: [StatsRow; 2],
}

#[derive(Serialize)]
struct Failure {
    language: String,
    relation: String,
    error: String,
}

#[derive(Serialize)]
struct Summary {
    #[serde(flatten)]
    stamp: Stamp,
    analyzed: Vec<String>,
    failures: Vec<Failure>,
}

fn scope_stats(g: &Graph, cfg: &RunConfig, key: &str) -> Result<ScopePieces, String> {
    let mixing = annd(g);
    let clust = clustering(g);
    let comps = g.connected_components();
    let tail =
        estimate_degree_tail(&g.degrees(), &cfg.tail_config(key)).map_err(|e| e.to_string())?;
    Ok(ScopePieces {
        stats: NetworkStats {
            n: g.node_count(),
            links: g.link_count(),
            d_max: g.max_degree(),
            mean_degree: g.mean_degree(),
            annd: mixing.mean_annd,
            rho_d: mixing.rho_d,
            rho_degenerate: mixing.rho_degenerate,
            c_g: clust.c_g,
            lcc_fraction: comps.lcc_fraction,
            tail,
        },
        annd_curve: mixing.annd_by_degree,
        c_curve: clust.c_by_degree,
        component_sizes: comps.sizes,
    })
}

struct ScopePieces {
    stats: NetworkStats,
    annd_curve: std::collections::BTreeMap<u32, f64>,
    c_curve: std::collections::BTreeMap<u32, f64>,
    component_sizes: Vec<usize>,
}

fn run_network(cfg: &RunConfig, language: &str, relation: Relation) -> Result<JobOutput, String> {
    let key = format!("{language}/{relation}");
    let g = load_graph(&graph_path(&cfg.out, language, relation))?;
    if g.node_count() == 0 {
        return Err("graph is empty".into());
    }
    let full = scope_stats(&g, cfg, &key)?;
    let lcc_graph = g.extract_lcc();
    let lcc = scope_stats(&lcc_graph, cfg, &key)?;
    let rewired =
        cfg.rewire_config(cfg.network_seed(&key)).map(|rc| rewired_stats(&lcc_graph, &rc));

    let dir = cfg.out.join(language);
    let file = |suffix: &str| dir.join(format!("{relation}.{suffix}"));
    let mut files = vec![
        (file("full.density.tsv"), density_table(&degree_density(&g))),
        (file("lcc.density.tsv"), density_table(&degree_density(&lcc_graph))),
        (file("full.annd.tsv"), curve_table("annd", &full.annd_curve, None)),
        (file("full.clustering.tsv"), curve_table("clustering", &full.c_curve, None)),
        (
            file("lcc.annd.tsv"),
            curve_table("annd", &lcc.annd_curve, rewired.as_ref().map(|r| &r.annd_curve)),
        ),
        (
            file("lcc.clustering.tsv"),
            curve_table("clustering", &lcc.c_curve, rewired.as_ref().map(|r| &r.c_curve)),
        ),
        (file("components.tsv"), component_size_table(&full.component_sizes)),
    ];
    // Log-binned LCC density, the regression input; a graph whose LCC has no
    // linked nodes has nothing to bin.
    let mut positive = degree_density(&lcc_graph);
    positive.remove(&0);
    let width = cfg.bin_log_width.unwrap_or_else(|| default_log_width(lcc_graph.max_degree()));
    if let Ok(binned) = log_bin(&positive, width) {
        files.push((file("lcc.binned.tsv"), binned_density_table(&binned)));
    }

    let row = |scope, stats: &NetworkStats, rewired: Option<&RewiredStats>| StatsRow {
        language: language.to_string(),
        relation: relation.to_string(),
        scope,
        stats: stats.clone(),
        rewired: rewired.cloned(),
    };
    Ok(JobOutput {
        rows: [
            row(Scope::Full, &full.stats, None),
            row(Scope::Lcc, &lcc.stats, rewired.as_ref()),
        ],
        json_path: file("stats.json"),
        report: NetworkReport {
            stamp: cfg.stamp(),
            language: language.to_string(),
            relation: relation.to_string(),
            full: full.stats,
            lcc: lcc.stats,
            rewired_lcc: rewired,
        },
        files,
    })
}

pub fn run(cfg: &RunConfig) -> Result<u8, CliError> {
    let relations = cfg.relations().map_err(CliError::Usage)?;
    let jobs: Vec<(String, Relation)> = cfg
        .languages
        .iter()
        .flat_map(|l| relations.iter().map(move |&r| (l.clone(), r)))
        .collect();
    if jobs.is_empty() {
        return Err(CliError::Empty("no networks configured".into()));
    }

    let outputs: Vec<Result<JobOutput, String>> = jobs
        .par_iter()
        .map(|(language, relation)| run_network(cfg, language, *relation))
        .collect();

    let mut rows = Vec::new();
    let mut analyzed = Vec::new();
    let mut failures = Vec::new();
    for ((language, relation), outcome) in jobs.iter().zip(outputs) {
        match outcome {
            Ok(out) => {
                for (path, text) in &out.files {
                    write_text(path, text)?;
                }
                io::write_json(&out.json_path, &out.report)?;
                rows.extend(out.rows);
                analyzed.push(format!("{language}/{relation}"));
            }
            Err(error) => {
                eprintln!("analyze {language}/{relation}: {error}");
                failures.push(Failure {
                    language: language.clone(),
                    relation: relation.to_string(),
                    error,
                });
            }
        }
    }
    write_text(&cfg.out.join("stats.tsv"), &stats_table(&rows))?;
    let partial = !failures.is_empty();
    io::write_json(
        &cfg.out.join("analyze_summary.json"),
        &Summary { stamp: cfg.stamp(), analyzed, failures },
    )?;
    Ok(if partial { EXIT_PARTIAL } else { 0 })
}
