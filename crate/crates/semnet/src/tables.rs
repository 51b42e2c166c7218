//! Network summary statistics and deterministic table emission.
//!
//! Every emitter renders to a `String` with fixed float formats, `\t`
//! separators, `\n` line endings and stable row order, so reruns over the
//! same inputs are byte-identical and diffs against published tables are
//! mechanical.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use crate::degree::{annd, clustering, BinnedDensity};
use crate::graph::Graph;
use crate::inflection::MergeComparison;
use crate::rewire::{mean_std, rewire, MeanStd, RewireConfig};
use crate::tail::{estimate_degree_tail, TailConfig, TailError, TailEstimate, Verdict};

/// Whether a row describes a full graph or its largest connected component.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Scope {
    Full,
    Lcc,
}

impl std::fmt::Display for Scope {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Scope::Full => "full",
            Scope::Lcc => "lcc",
        })
    }
}

/// Descriptive statistics of one network: size, degrees, mixing, clustering,
/// connectedness, and the degree-tail analysis (absent for small samples).
#[derive(Clone, Debug, Serialize)]
pub struct NetworkStats {
    pub n: usize,
    pub links: usize,
    pub d_max: u32,
    pub mean_degree: f64,
    /// Mean over non-isolated nodes of their mean neighbor degree.
    pub annd: f64,
    /// Degree assortativity; meaningless when `rho_degenerate`.
    pub rho_d: f64,
    pub rho_degenerate: bool,
    pub c_g: f64,
    pub lcc_fraction: f64,
    pub tail: Option<TailEstimate>,
}

pub fn network_stats(g: &Graph, tail_cfg: &TailConfig) -> Result<NetworkStats, TailError> {
    let mixing = annd(g);
    let clust = clustering(g);
    let comps = g.connected_components();
    let tail = estimate_degree_tail(&g.degrees(), tail_cfg)?;
    Ok(NetworkStats {
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
    })
}

/// Mixing and clustering over a degree-preserving rewired ensemble, scalars
/// and per-degree curves from one shared set of realizations.
#[derive(Clone, Debug, Serialize)]
pub struct RewiredStats {
    pub annd: MeanStd,
    pub c_g: MeanStd,
    pub annd_curve: BTreeMap<u32, MeanStd>,
    pub c_curve: BTreeMap<u32, MeanStd>,
    /// Realizations that hit the attempt cap before finishing their budget.
    pub cap_hits: u32,
}

pub fn rewired_stats(g: &Graph, cfg: &RewireConfig) -> RewiredStats {
    struct Piece {
        annd: f64,
        c_g: f64,
        annd_curve: BTreeMap<u32, f64>,
        c_curve: BTreeMap<u32, f64>,
        capped: bool,
    }
    let pieces: Vec<Piece> = (0..cfg.realizations)
        .into_par_iter()
        .map(|r| {
            let mut c = cfg.clone();
            c.seed = cfg.seed.wrapping_add(r as u64);
            let out = rewire(g, &c);
            let mixing = annd(&out.graph);
            let clust = clustering(&out.graph);
            Piece {
                annd: mixing.mean_annd,
                c_g: clust.c_g,
                annd_curve: mixing.annd_by_degree,
                c_curve: clust.c_by_degree,
                capped: out.cap_reached,
            }
        })
        .collect();
    let collect_curve = |pick: fn(&Piece) -> &BTreeMap<u32, f64>| {
        let mut by_degree: BTreeMap<u32, Vec<f64>> = BTreeMap::new();
        for p in &pieces {
            for (&k, &v) in pick(p) {
                by_degree.entry(k).or_default().push(v);
            }
        }
        by_degree
            .into_iter()
            .map(|(k, vs)| (k, mean_std(&vs)))
            .collect::<BTreeMap<u32, MeanStd>>()
    };
    RewiredStats {
        annd: mean_std(&pieces.iter().map(|p| p.annd).collect::<Vec<_>>()),
        c_g: mean_std(&pieces.iter().map(|p| p.c_g).collect::<Vec<_>>()),
        annd_curve: collect_curve(|p| &p.annd_curve),
        c_curve: collect_curve(|p| &p.c_curve),
        cap_hits: pieces.iter().filter(|p| p.capped).count() as u32,
    }
}

/// One line of the per-network statistics table.
#[derive(Clone, Debug, Serialize)]
pub struct StatsRow {
    pub language: String,
    pub relation: String,
    pub scope: Scope,
    pub stats: NetworkStats,
    pub rewired: Option<RewiredStats>,
}

fn f6(v: f64) -> String {
    format!("{v:.6}")
}

fn e6(v: f64) -> String {
    format!("{v:.6e}")
}

/// Gamma cell: the estimate at table precision, `x` for sequences judged
/// hardly or not power-law, `skipped` below the sample-size floor.
fn gamma_cell(tail: Option<&TailEstimate>, pick: fn(&TailEstimate) -> Option<f64>) -> String {
    match tail {
        None => "skipped".into(),
        Some(t) if t.verdict != Verdict::PowerLaw => "x".into(),
        Some(t) => pick(t).map_or_else(|| "x".into(), |v| format!("{v:.1}")),
    }
}

const NA: &str = "na";

pub fn stats_table(rows: &[StatsRow]) -> String {
    let mut out = String::from(
        "language\trelation\tscope\tN\tL\td_max\tmean_degree\tannd\tannd_rewired\t\
         annd_rewired_std\tc_G\tc_G_rewired\tc_G_rewired_std\trho_d\tgamma_slope\t\
         gamma_hill\tgamma_moments\tgamma_kernel\tlcc_fraction\n",
    );
    for row in rows {
        let s = &row.stats;
        let (annd_rw, annd_rw_std, cg_rw, cg_rw_std) = match &row.rewired {
            Some(r) => (f6(r.annd.mean), f6(r.annd.std), e6(r.c_g.mean), e6(r.c_g.std)),
            None => (NA.into(), NA.into(), NA.into(), NA.into()),
        };
        let rho = if s.rho_degenerate { NA.into() } else { f6(s.rho_d) };
        let tail = s.tail.as_ref();
        writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
            row.language,
            row.relation,
            row.scope,
            s.n,
            s.links,
            s.d_max,
            f6(s.mean_degree),
            f6(s.annd),
            annd_rw,
            annd_rw_std,
            e6(s.c_g),
            cg_rw,
            cg_rw_std,
            rho,
            gamma_cell(tail, |t| t.gamma_slope),
            gamma_cell(tail, |t| t.gamma_hill),
            gamma_cell(tail, |t| t.gamma_moments),
            gamma_cell(tail, |t| t.gamma_kernel),
            f6(s.lcc_fraction),
        )
        .unwrap();
    }
    out
}

/// `degree<TAB>density`, ascending degree.
pub fn density_table(density: &BTreeMap<u32, f64>) -> String {
    let mut out = String::from("degree\tdensity\n");
    for (&k, &p) in density {
        writeln!(out, "{k}\t{}", e6(p)).unwrap();
    }
    out
}

/// Log-binned density, one bin per line.
pub fn binned_density_table(binned: &BinnedDensity) -> String {
    let mut out = String::from("bin_lo\tbin_hi\tcenter\theight\tmass\n");
    let centers = binned.centers();
    for i in 0..binned.bins() {
        writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}",
            f6(binned.edges[i]),
            f6(binned.edges[i + 1]),
            f6(centers[i]),
            e6(binned.heights[i]),
            e6(binned.mass[i]),
        )
        .unwrap();
    }
    out
}

/// Per-degree curve with optional rewired-ensemble columns. Rewiring
/// preserves the degree multiset, so the ensemble normally covers every
/// observed class; absent classes render as `na`.
pub fn curve_table(
    metric: &str,
    observed: &BTreeMap<u32, f64>,
    rewired: Option<&BTreeMap<u32, MeanStd>>,
) -> String {
    let mut out = format!("degree\t{metric}\t{metric}_rewired\t{metric}_rewired_std\n");
    for (&k, &v) in observed {
        let (rw, rw_std) = match rewired.and_then(|r| r.get(&k)) {
            Some(m) => (e6(m.mean), e6(m.std)),
            None => (NA.into(), NA.into()),
        };
        writeln!(out, "{k}\t{}\t{rw}\t{rw_std}", e6(v)).unwrap();
    }
    out
}

/// Before/after-merge densities on their shared bin grid.
pub fn merge_density_table(cmp: &MergeComparison) -> String {
    assert_eq!(cmp.before.edges, cmp.after.edges, "densities must share a grid");
    let mut out = String::from("bin_lo\tbin_hi\tcenter\theight_before\theight_after\n");
    let centers = cmp.before.centers();
    for i in 0..cmp.before.bins() {
        writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}",
            f6(cmp.before.edges[i]),
            f6(cmp.before.edges[i + 1]),
            f6(centers[i]),
            e6(cmp.before.heights[i]),
            e6(cmp.after.heights[i]),
        )
        .unwrap();
    }
    out
}

/// Component-size histogram, largest sizes first.
pub fn component_size_table(sizes: &[usize]) -> String {
    let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
    for &s in sizes {
        *counts.entry(s).or_insert(0) += 1;
    }
    let mut out = String::from("size\tcount\n");
    for (&size, &count) in counts.iter().rev() {
        writeln!(out, "{size}\t{count}").unwrap();
    }
    out
}

/// Calibrated coefficient pair for one network.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct CalibrationCell {
    pub calibrated: f64,
    pub dispersion: f64,
    pub excluded: u32,
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum CalibrationOutcome {
    Done {
        similarity: CalibrationCell,
        complementarity: CalibrationCell,
        samples: u32,
    },
    Skipped { reason: String },
    Failed { reason: String },
}

#[derive(Clone, Debug, Serialize)]
pub struct CalibrationRow {
    pub language: String,
    pub relation: String,
    pub n: usize,
    pub outcome: CalibrationOutcome,
}

fn one_line(reason: &str) -> String {
    reason.replace(['\t', '\n'], " ")
}

pub fn calibration_table(rows: &[CalibrationRow]) -> String {
    let mut out = String::from(
        "language\trelation\tN\tC_similarity\tdispersion_similarity\texcluded_similarity\t\
         C_complementarity\tdispersion_complementarity\texcluded_complementarity\tR\tstatus\n",
    );
    for row in rows {
        let cells = match &row.outcome {
            CalibrationOutcome::Done { similarity, complementarity, samples } => format!(
                "{}\t{}\t{}\t{}\t{}\t{}\t{}\tok",
                f6(similarity.calibrated),
                f6(similarity.dispersion),
                similarity.excluded,
                f6(complementarity.calibrated),
                f6(complementarity.dispersion),
                complementarity.excluded,
                samples,
            ),
            CalibrationOutcome::Skipped { reason } => {
                format!("{NA}\t{NA}\t{NA}\t{NA}\t{NA}\t{NA}\t{NA}\tskipped: {}", one_line(reason))
            }
            CalibrationOutcome::Failed { reason } => {
                format!("{NA}\t{NA}\t{NA}\t{NA}\t{NA}\t{NA}\t{NA}\tfailed: {}", one_line(reason))
            }
        };
        writeln!(out, "{}\t{}\t{}\t{}", row.language, row.relation, row.n, cells).unwrap();
    }
    out
}
