//! Degree-peak analysis for grammatical inflection: detect anomalous bumps
//! in a log-binned degree density against a power-law baseline, relate the
//! peak position to a language's expected number of word forms m, break the
//! peak words down by part of speech, and compare densities before and after
//! Form-Of node merging.

use std::collections::{BTreeMap, HashSet};

use serde::Serialize;
use thiserror::Error;

use crate::degree::{
    degree_density, fit_log_log, log_bin_range, BinnedDensity, LogLogFit, StatsError,
};
use crate::graph::{Graph, NodeId};
use crate::ingest::{apply_merge, MergeMap, PosTable, PosTag};
use crate::rewire::{mean_std, MeanStd};

/// Peak detection parameters. A peak is a run of at least `min_run`
/// consecutive bins whose height exceeds `theta` times the baseline-fit
/// prediction, with bin centers inside `window`; among candidate runs the
/// one with the largest excess mass wins.
#[derive(Clone, Copy, Debug)]
pub struct PeakConfig {
    pub theta: f64,
    pub min_run: usize,
    pub window: (f64, f64),
}

impl Default for PeakConfig {
    fn default() -> PeakConfig {
        PeakConfig { theta: 3.0, min_run: 2, window: (1.0, f64::INFINITY) }
    }
}

/// Degree bounds of a detected peak, inclusive on both ends.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PeakBounds {
    pub k_min: u32,
    pub k_max: u32,
}

impl PeakBounds {
    pub fn contains(&self, k: u32) -> bool {
        self.k_min <= k && k <= self.k_max
    }

    /// Matched per the containment-with-slack rule: inside the bounds or
    /// within 2 degrees of the nearest bound.
    pub fn matches(&self, m: u32) -> bool {
        m + 2 >= self.k_min && m <= self.k_max + 2
    }
}

/// Find the dominant above-baseline run. Absence is a normal result.
pub fn detect_peak(binned: &BinnedDensity, fit: &LogLogFit, cfg: &PeakConfig) -> Option<PeakBounds> {
    let centers = binned.centers();
    let widths = binned.widths();
    let flagged: Vec<bool> = (0..binned.bins())
        .map(|i| {
            centers[i] >= cfg.window.0
                && centers[i] <= cfg.window.1
                && binned.heights[i] > 0.0
                && binned.heights[i] >= cfg.theta * fit.predict(centers[i])
        })
        .collect();
    let mut best: Option<(f64, usize, usize)> = None; // (excess mass, start, end)
    let mut i = 0;
    while i < flagged.len() {
        if !flagged[i] {
            i += 1;
            continue;
        }
        let start = i;
        while i < flagged.len() && flagged[i] {
            i += 1;
        }
        let end = i - 1;
        if end - start + 1 < cfg.min_run {
            continue;
        }
        let excess: f64 = (start..=end)
            .map(|b| (binned.heights[b] - fit.predict(centers[b])) * widths[b])
            .sum();
        if best.map_or(true, |(m, _, _)| excess > m) {
            best = Some((excess, start, end));
        }
    }
    best.map(|(_, start, end)| PeakBounds {
        k_min: binned.edges[start].ceil() as u32,
        k_max: (binned.edges[end + 1].ceil() as u32).saturating_sub(1),
    })
}

#[derive(Debug, Error)]
pub enum GrammarTableError {
    #[error("line {line}: expected `language<TAB>m`, got `{content}`")]
    BadLine { line: usize, content: String },
    #[error("line {line}: duplicate language `{language}`")]
    Duplicate { line: usize, language: String },
}

/// Language → expected number of grammatical word forms, from a TSV file
/// (`language<TAB>m`, `#` comments). Shipped as data so new languages are
/// configuration, not code.
#[derive(Clone, Debug, Default)]
pub struct GrammarTable {
    m: BTreeMap<String, u32>,
}

impl GrammarTable {
    pub fn from_tsv(text: &str) -> Result<GrammarTable, GrammarTableError> {
        let mut m = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let mut fields = trimmed.split('\t');
            let (lang, value) = match (fields.next(), fields.next(), fields.next()) {
                (Some(l), Some(v), None) if !l.is_empty() => (l, v),
                _ => return Err(GrammarTableError::BadLine { line, content: raw.to_string() }),
            };
            let value: u32 = value
                .parse()
                .map_err(|_| GrammarTableError::BadLine { line, content: raw.to_string() })?;
            if m.insert(lang.to_string(), value).is_some() {
                return Err(GrammarTableError::Duplicate { line, language: lang.to_string() });
            }
        }
        Ok(GrammarTable { m })
    }

    pub fn expectation(&self, language: &str) -> Option<u32> {
        self.m.get(language).copied()
    }

    pub fn languages(&self) -> impl Iterator<Item = (&str, u32)> {
        self.m.iter().map(|(l, &v)| (l.as_str(), v))
    }
}

/// Nodes whose degree falls inside the inclusive bounds, ascending by id.
pub fn nodes_in_degree_range(g: &Graph, bounds: PeakBounds) -> Vec<NodeId> {
    (0..g.node_count() as NodeId)
        .filter(|&i| bounds.contains(g.degree(i)))
        .collect()
}

/// Tag percentages among the tagged members of a word set. `tagged == 0`
/// doubles as the "nothing to report" flag.
#[derive(Clone, Debug, Default, Serialize)]
pub struct PosBreakdown {
    pub total: usize,
    pub tagged: usize,
    /// Percent per tag among tagged words; sums to 100 when tagged > 0.
    pub percent: BTreeMap<PosTag, f64>,
}

pub fn pos_breakdown<'a, I>(labels: I, table: &PosTable) -> PosBreakdown
where
    I: IntoIterator<Item = &'a str>,
{
    let mut total = 0usize;
    let mut counts: BTreeMap<PosTag, usize> = BTreeMap::new();
    for label in labels {
        total += 1;
        if let Some(tag) = table.tag(label) {
            *counts.entry(tag).or_insert(0) += 1;
        }
    }
    let tagged: usize = counts.values().sum();
    let percent = counts
        .into_iter()
        .map(|(tag, n)| (tag, 100.0 * n as f64 / tagged as f64))
        .collect();
    PosBreakdown { total, tagged, percent }
}

/// Per-word neighbor tag percentages aggregated as mean ± sample standard
/// deviation over the words that have at least one tagged neighbor. Every
/// tag that appears anywhere gets an entry, with absent tags counted as 0%
/// for each word so the spread is comparable across tags.
#[derive(Clone, Debug, Default, Serialize)]
pub struct NeighborPosBreakdown {
    /// Words contributing, i.e. with >= 1 tagged neighbor.
    pub words_counted: usize,
    pub per_tag: BTreeMap<PosTag, MeanStd>,
}

pub fn neighbor_pos_breakdown(g: &Graph, nodes: &[NodeId], table: &PosTable) -> NeighborPosBreakdown {
    let mut per_word: Vec<BTreeMap<PosTag, f64>> = Vec::new();
    let mut seen: HashSet<PosTag> = HashSet::new();
    for &i in nodes {
        let mut counts: BTreeMap<PosTag, usize> = BTreeMap::new();
        for &j in g.neighbors(i) {
            if let Some(label) = g.label(j) {
                if let Some(tag) = table.tag(label) {
                    *counts.entry(tag).or_insert(0) += 1;
                }
            }
        }
        let tagged: usize = counts.values().sum();
        if tagged == 0 {
            continue;
        }
        seen.extend(counts.keys().copied());
        per_word.push(
            counts
                .into_iter()
                .map(|(tag, n)| (tag, 100.0 * n as f64 / tagged as f64))
                .collect(),
        );
    }
    let mut per_tag = BTreeMap::new();
    for tag in seen {
        let values: Vec<f64> = per_word
            .iter()
            .map(|w| w.get(&tag).copied().unwrap_or(0.0))
            .collect();
        per_tag.insert(tag, mean_std(&values));
    }
    NeighborPosBreakdown { words_counted: per_word.len(), per_tag }
}

/// Fraction of the given nodes whose label occurs in the Form-Of graph.
pub fn formof_coverage(g: &Graph, nodes: &[NodeId], formof: &Graph) -> f64 {
    if nodes.is_empty() {
        return 0.0;
    }
    let known: HashSet<&str> = formof
        .labels()
        .map(|ls| ls.iter().map(|s| s.as_str()).collect())
        .unwrap_or_default();
    let covered = nodes
        .iter()
        .filter(|&&i| g.label(i).is_some_and(|l| known.contains(l)))
        .count();
    covered as f64 / nodes.len() as f64
}

/// Everything reported about one detected peak.
#[derive(Clone, Debug, Serialize)]
pub struct PeakReport {
    pub k_min: u32,
    pub k_max: u32,
    pub m_expected: Option<u32>,
    /// m inside the bounds, with 2 degrees of slack at each end.
    pub matched: Option<bool>,
    pub node_count: usize,
    pub labels: Vec<String>,
    pub formof_coverage: Option<f64>,
    pub peak_pos: PosBreakdown,
    pub neighbor_pos: NeighborPosBreakdown,
}

pub fn build_peak_report(
    g: &Graph,
    bounds: PeakBounds,
    m_expected: Option<u32>,
    pos: &PosTable,
    formof: Option<&Graph>,
) -> PeakReport {
    let nodes = nodes_in_degree_range(g, bounds);
    let labels: Vec<String> = nodes
        .iter()
        .filter_map(|&i| g.label(i).map(str::to_string))
        .collect();
    PeakReport {
        k_min: bounds.k_min,
        k_max: bounds.k_max,
        m_expected,
        matched: m_expected.map(|m| bounds.matches(m)),
        node_count: nodes.len(),
        peak_pos: pos_breakdown(labels.iter().map(String::as_str), pos),
        neighbor_pos: neighbor_pos_breakdown(g, &nodes, pos),
        formof_coverage: formof.map(|f| formof_coverage(g, &nodes, f)),
        labels,
    }
}

/// Densities and peak verdicts before and after Form-Of merging, binned on a
/// shared grid so the curves are directly comparable.
#[derive(Clone, Debug)]
pub struct MergeComparison {
    pub before: BinnedDensity,
    pub after: BinnedDensity,
    pub fit_before: LogLogFit,
    pub fit_after: LogLogFit,
    pub peak_before: Option<PeakBounds>,
    pub peak_after: Option<PeakBounds>,
    /// Density mass inside the before-peak degree range, per graph.
    pub mass_before: Option<f64>,
    pub mass_after: Option<f64>,
    pub links_before: usize,
    pub links_after: usize,
    /// Nodes isolated by the merge, excluded from the after-density.
    pub isolated_after: usize,
}

fn mass_in_range(density: &BTreeMap<u32, f64>, bounds: PeakBounds) -> f64 {
    density
        .range(bounds.k_min..=bounds.k_max)
        .map(|(_, &p)| p)
        .sum()
}

pub fn merge_and_compare(
    g: &Graph,
    m: &MergeMap,
    log_width: f64,
    cfg: &PeakConfig,
) -> Result<MergeComparison, StatsError> {
    let merged = apply_merge(g, m);
    let mut density_before = degree_density(g);
    let mut density_after = degree_density(&merged);
    // The merge can isolate nodes whose links were all internal to a group;
    // isolated nodes cannot sit on a log grid and are reported separately.
    let isolated_after = merged.degrees().iter().filter(|&&d| d == 0).count();
    density_before.remove(&0);
    density_after.remove(&0);
    if density_before.is_empty() || density_after.is_empty() {
        return Err(StatsError::EmptyDensity);
    }
    let lo = (*density_before.keys().next().unwrap()).min(*density_after.keys().next().unwrap());
    let hi =
        (*density_before.keys().next_back().unwrap()).max(*density_after.keys().next_back().unwrap());
    let before = log_bin_range(&density_before, log_width, lo, hi)?;
    let after = log_bin_range(&density_after, log_width, lo, hi)?;
    let fit_before = fit_log_log(&before, cfg.window)?;
    let fit_after = fit_log_log(&after, cfg.window)?;
    let peak_before = detect_peak(&before, &fit_before, cfg);
    let peak_after = detect_peak(&after, &fit_after, cfg);
    Ok(MergeComparison {
        mass_before: peak_before.map(|b| mass_in_range(&density_before, b)),
        mass_after: peak_before.map(|b| mass_in_range(&density_after, b)),
        before,
        after,
        fit_before,
        fit_after,
        peak_before,
        peak_after,
        links_before: g.link_count(),
        links_after: merged.link_count(),
        isolated_after,
    })
}

/// Convenience: bin a degree density and detect a peak in one step; a failed
/// baseline fit means no baseline to stand out from, hence no peak.
pub fn detect_degree_peak(g: &Graph, log_width: f64, cfg: &PeakConfig) -> Option<PeakBounds> {
    let mut density = degree_density(g);
    density.remove(&0);
    let binned = crate::degree::log_bin(&density, log_width).ok()?;
    let fit = fit_log_log(&binned, cfg.window).ok()?;
    detect_peak(&binned, &fit, cfg)
}
