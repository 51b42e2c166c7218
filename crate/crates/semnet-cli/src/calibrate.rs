//! `semnet calibrate`: for each network's largest connected component, fit
//! the configuration model to the degree sequence, draw a null ensemble, and
//! report the calibrated similarity and complementarity coefficients (mean
//! log-ratio of observed to null, with dispersion). Undersized networks are
//! skipped with a reason; model failures mark the row failed and the run
//! continues.

use rayon::prelude::*;
use serde::Serialize;

use semnet::ingest::Relation;
use semnet::motifs::{c_graph, s_graph};
use semnet::tables::{
    calibration_table, CalibrationCell, CalibrationOutcome, CalibrationRow,
};
use semnet::ubcm::{calibrate_value, fit_ubcm, sample_ubcm, CalibrationResult};

use crate::config::{RunConfig, Stamp};
use crate::io::{graph_path, load_graph, write_text};
use crate::{io, CliError, EXIT_PARTIAL};

#[derive(Serialize)]
struct FullReport {
    #[serde(flatten)]
    stamp: Stamp,
    rows: Vec<CalibrationRow>,
}

fn cell(result: &CalibrationResult) -> CalibrationCell {
    CalibrationCell {
        calibrated: result.calibrated,
        dispersion: result.dispersion,
        excluded: result.excluded,
    }
}

fn run_network(cfg: &RunConfig, language: &str, relation: Relation) -> CalibrationRow {
    let key = format!("{language}/{relation}");
    let row = |n: usize, outcome: CalibrationOutcome| CalibrationRow {
        language: language.to_string(),
        relation: relation.to_string(),
        n,
        outcome,
    };
    let g = match load_graph(&graph_path(&cfg.out, language, relation)) {
        Ok(g) => g,
        Err(e) => return row(0, CalibrationOutcome::Failed { reason: e }),
    };
    let lcc = g.extract_lcc();
    let n = lcc.node_count();
    if n < cfg.calibration.min_nodes {
        return row(
            n,
            CalibrationOutcome::Skipped {
                reason: format!(
                    "LCC has {n} nodes; calibration needs at least {}",
                    cfg.calibration.min_nodes
                ),
            },
        );
    }
    let Some(samples) = cfg.calibration.samples_for(n) else {
        return row(
            n,
            CalibrationOutcome::Skipped { reason: format!("LCC has {n} nodes, above the size cap") },
        );
    };

    let model = match fit_ubcm(&lcc.degrees()) {
        Ok(m) => m,
        Err(e) => return row(n, CalibrationOutcome::Failed { reason: e.to_string() }),
    };
    let seed = cfg.network_seed(&key);
    // One ensemble serves both coefficients.
    let pairs: Vec<(f64, f64)> = (0..samples)
        .into_par_iter()
        .map(|k| {
            let null = sample_ubcm(&model, seed.wrapping_add(k as u64));
            (s_graph(&null), c_graph(&null))
        })
        .collect();
    let similarity =
        calibrate_value(s_graph(&lcc), pairs.iter().map(|p| p.0).collect());
    let complementarity =
        calibrate_value(c_graph(&lcc), pairs.iter().map(|p| p.1).collect());
    match (similarity, complementarity) {
        (Ok(s), Ok(c)) => row(
            n,
            CalibrationOutcome::Done {
                similarity: cell(&s),
                complementarity: cell(&c),
                samples,
            },
        ),
        (Err(e), _) => {
            row(n, CalibrationOutcome::Failed { reason: format!("similarity: {e}") })
        }
        (_, Err(e)) => {
            row(n, CalibrationOutcome::Failed { reason: format!("complementarity: {e}") })
        }
    }
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
    let rows: Vec<CalibrationRow> = jobs
        .par_iter()
        .map(|(language, relation)| run_network(cfg, language, *relation))
        .collect();

    write_text(&cfg.out.join("calibration.tsv"), &calibration_table(&rows))?;
    let failed = rows
        .iter()
        .any(|r| matches!(r.outcome, CalibrationOutcome::Failed { .. }));
    io::write_json(
        &cfg.out.join("calibration.json"),
        &FullReport { stamp: cfg.stamp(), rows },
    )?;
    Ok(if failed { EXIT_PARTIAL } else { 0 })
}
