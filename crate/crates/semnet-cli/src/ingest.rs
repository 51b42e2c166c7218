//! `semnet ingest`: one pass over the dump per language, producing edge-list
//! files for every requested relation (Union derived by set union, never
//! parsed), a part-of-speech table per language, and a report of row
//! accounting per network.

use std::collections::HashMap;

use serde::Serialize;

use semnet::graph::Graph;
use semnet::ingest::{
    build_relation_graph, build_union, parse_assertions_multi, IngestReport, PosTable, Relation,
};

use crate::config::{RunConfig, Stamp};
use crate::io::{graph_path, open_dump, pos_path, write_graph, write_pos_table};
use crate::{io, CliError};

#[derive(Serialize)]
struct NetworkRow {
    language: String,
    relation: String,
    nodes: usize,
    links: usize,
    path: String,
    /// Absent for Union, which is derived rather than parsed.
    report: Option<IngestReport>,
}

#[derive(Serialize)]
struct FullReport {
    #[serde(flatten)]
    stamp: Stamp,
    networks: Vec<NetworkRow>,
}

pub fn run(cfg: &RunConfig) -> Result<u8, CliError> {
    let dataset = cfg
        .dataset
        .as_ref()
        .ok_or_else(|| CliError::Usage("no dataset configured; pass --dataset".into()))?;
    let requested = cfg.relations().map_err(CliError::Usage)?;
    if requested.is_empty() || cfg.languages.is_empty() {
        return Err(CliError::Usage("need at least one language and one relation".into()));
    }

    // Union is built from its part graphs, so requesting it pulls the parts
    // into the parse set even when they are not requested themselves.
    let mut parse_set: Vec<Relation> =
        requested.iter().copied().filter(|&r| r != Relation::Union).collect();
    if requested.contains(&Relation::Union) {
        for part in Relation::UNION_PARTS {
            if !parse_set.contains(&part) {
                parse_set.push(part);
            }
        }
    }

    let mut rows = Vec::new();
    let mut total_kept = 0u64;
    for language in &cfg.languages {
        let reader = open_dump(dataset).map_err(|e| {
            CliError::Usage(format!("cannot open dataset {}: {e}", dataset.display()))
        })?;
        let parsed = parse_assertions_multi(reader, language, &parse_set)
            .map_err(|e| CliError::Usage(format!("dataset read failed: {e}")))?;

        let mut pos = PosTable::default();
        let mut graphs: HashMap<Relation, Graph> = HashMap::new();
        let mut reports: HashMap<Relation, IngestReport> = HashMap::new();
        for (rel, slice) in parse_set.iter().zip(&parsed) {
            pos.absorb(PosTable::from_pairs(&slice.pairs));
            total_kept += slice.report.rows_kept;
            graphs.insert(*rel, build_relation_graph(slice));
            reports.insert(*rel, slice.report.clone());
        }
        if requested.contains(&Relation::Union) {
            let parts: Vec<&Graph> =
                Relation::UNION_PARTS.iter().map(|r| &graphs[r]).collect();
            graphs.insert(Relation::Union, build_union(&parts));
        }

        for &rel in &requested {
            let g = &graphs[&rel];
            let path = graph_path(&cfg.out, language, rel);
            write_graph(&path, g)?;
            rows.push(NetworkRow {
                language: language.clone(),
                relation: rel.to_string(),
                nodes: g.node_count(),
                links: g.link_count(),
                path: format!("{language}/{rel}.tsv"),
                report: reports.get(&rel).cloned(),
            });
        }
        write_pos_table(&pos_path(&cfg.out, language), &pos)?;
    }

    let report = FullReport { stamp: cfg.stamp(), networks: rows };
    io::write_json(&cfg.out.join("ingest_report.json"), &report)?;
    if total_kept == 0 {
        eprintln!("no assertions kept for the requested languages and relations");
        return Ok(3);
    }
    Ok(0)
}
