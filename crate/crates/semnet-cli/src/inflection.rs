//! `semnet inflection`: peak detection in Related-To degree densities, the
//! part-of-speech makeup of peak words and their neighborhoods, and the
//! before/after comparison under Form-Of merging. A missing Form-Of graph
//! downgrades the run to peak analysis only, flagged in the report.

use serde::Serialize;

use semnet::degree::{default_log_width, degree_density, fit_log_log, log_bin};
use semnet::inflection::{
    build_peak_report, detect_peak, merge_and_compare, GrammarTable, PeakBounds, PeakReport,
};
use semnet::ingest::{build_merge_map, PosTable, Relation};

use crate::config::{RunConfig, Stamp};
use crate::io::{graph_path, load_graph, load_pos_table, pos_path, write_text};
use crate::{io, CliError, EXIT_PARTIAL};

/// Expected-inflection counts shipped with the binary; a config or flag
/// override replaces the whole table.
const BUILTIN_GRAMMAR: &str = include_str!("../data/grammar.tsv");

#[derive(Serialize)]
struct MergeSummary {
    peak_before: Option<PeakBounds>,
    peak_after: Option<PeakBounds>,
    /// Density mass inside the before-peak range, per graph.
    mass_before: Option<f64>,
    mass_after: Option<f64>,
    links_before: usize,
    links_after: usize,
    isolated_after: usize,
    merged_words: usize,
}

#[derive(Serialize)]
struct InflectionReport {
    #[serde(flatten)]
    stamp: Stamp,
    language: String,
    m_expected: Option<u32>,
    bin_log_width: f64,
    theta: f64,
    pos_available: bool,
    formof_available: bool,
    peak: Option<PeakReport>,
    merge: Option<MergeSummary>,
}

fn run_language(cfg: &RunConfig, grammar: &GrammarTable, language: &str) -> Result<(), String> {
    let g = load_graph(&graph_path(&cfg.out, language, Relation::RelatedTo))?;
    if g.node_count() == 0 {
        return Err("Related-To graph is empty".into());
    }
    let pos_file = pos_path(&cfg.out, language);
    let (pos, pos_available) = if pos_file.exists() {
        (load_pos_table(&pos_file)?, true)
    } else {
        (PosTable::default(), false)
    };
    let formof_file = graph_path(&cfg.out, language, Relation::FormOf);
    let formof = if formof_file.exists() { Some(load_graph(&formof_file)?) } else { None };

    let key = format!("{language}/{}", Relation::RelatedTo);
    let peak_cfg = cfg.peak_config(&key);
    let width = cfg.bin_log_width.unwrap_or_else(|| default_log_width(g.max_degree()));
    let mut density = degree_density(&g);
    density.remove(&0);
    let binned = log_bin(&density, width).map_err(|e| e.to_string())?;
    let fit = fit_log_log(&binned, peak_cfg.window).map_err(|e| e.to_string())?;
    let peak = detect_peak(&binned, &fit, &peak_cfg);
    let m_expected = grammar.expectation(language);
    let report =
        peak.map(|b| build_peak_report(&g, b, m_expected, &pos, formof.as_ref()));

    let dir = cfg.out.join(language);
    let merge = match &formof {
        Some(f) => {
            let mm = build_merge_map(f);
            let cmp = merge_and_compare(&g, &mm, width, &peak_cfg).map_err(|e| e.to_string())?;
            write_text(&dir.join("inflection.density.tsv"), &semnet::tables::merge_density_table(&cmp))
                .map_err(|e| e.to_string())?;
            Some(MergeSummary {
                peak_before: cmp.peak_before,
                peak_after: cmp.peak_after,
                mass_before: cmp.mass_before,
                mass_after: cmp.mass_after,
                links_before: cmp.links_before,
                links_after: cmp.links_after,
                isolated_after: cmp.isolated_after,
                merged_words: mm.merged_count(),
            })
        }
        None => {
            write_text(
                &dir.join("inflection.density.tsv"),
                &semnet::tables::binned_density_table(&binned),
            )
            .map_err(|e| e.to_string())?;
            None
        }
    };

    io::write_json(
        &dir.join("inflection.json"),
        &InflectionReport {
            stamp: cfg.stamp(),
            language: language.to_string(),
            m_expected,
            bin_log_width: width,
            theta: peak_cfg.theta,
            pos_available,
            formof_available: formof.is_some(),
            peak: report,
            merge,
        },
    )
    .map_err(|e| e.to_string())
}

pub fn run(cfg: &RunConfig) -> Result<u8, CliError> {
    if cfg.languages.is_empty() {
        return Err(CliError::Empty("no languages configured".into()));
    }
    let grammar_text = match &cfg.grammar_file {
        Some(path) => std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?,
        None => BUILTIN_GRAMMAR.to_string(),
    };
    let grammar =
        GrammarTable::from_tsv(&grammar_text).map_err(|e| CliError::Usage(e.to_string()))?;

    let mut failures = Vec::new();
    for language in &cfg.languages {
        if let Err(error) = run_language(cfg, &grammar, language) {
            eprintln!("inflection {language}: {error}");
            failures.push(serde_json::json!({ "language": language, "error": error }));
        }
    }
    io::write_json(
        &cfg.out.join("inflection_summary.json"),
        &serde_json::json!({
            "seed": cfg.seed,
            "config_hash": cfg.hash(),
            "rng": cfg.stamp().rng,
            "failures": failures,
        }),
    )?;
    Ok(if failures.is_empty() { 0 } else { EXIT_PARTIAL })
}
