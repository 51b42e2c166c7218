//! Degree statistics: densities, logarithmic binning, degree mixing, and
//! local clustering.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::graph::{Graph, NodeId};

#[derive(Debug, thiserror::Error)]
pub enum StatsError {
    #[error("degree density is empty")]
    EmptyDensity,
    #[error("log-binning requires degrees >= 1, found {0}")]
    NonPositiveDegree(u32),
    #[error("log width must be positive and finite, got {0}")]
    BadLogWidth(f64),
    #[error("binning range [{lo}, {hi}] does not cover the density support")]
    BadRange { lo: u32, hi: u32 },
    #[error("regression window holds {found} nonzero bins, need at least 3")]
    WindowTooNarrow { found: usize },
}

/// Number of nodes per degree value.
pub fn degree_histogram(g: &Graph) -> BTreeMap<u32, u64> {
    let mut hist = BTreeMap::new();
    for d in g.degrees() {
        *hist.entry(d).or_insert(0u64) += 1;
    }
    hist
}

/// Fraction of nodes per degree value. Sums to 1 for a nonempty graph.
pub fn degree_density(g: &Graph) -> BTreeMap<u32, f64> {
    let n = g.node_count() as f64;
    degree_histogram(g)
        .into_iter()
        .map(|(d, c)| (d, c as f64 / n))
        .collect()
}

/// Degree density collapsed into bins of constant logarithmic width.
///
/// Bin edges are geometric: `edges[i+1] / edges[i] = e^b`. A bin's height is
/// its mass divided by its linear width, so heights are densities per unit
/// degree and `sum(height * width)` reproduces the total input mass.
#[derive(Clone, Debug)]
pub struct BinnedDensity {
    /// Bin boundaries, length `bins() + 1`; bin `i` covers `[edges[i], edges[i+1])`.
    pub edges: Vec<f64>,
    /// Input weight collected per bin (counts or probabilities, as given).
    pub mass: Vec<f64>,
    /// `mass[i] / (edges[i+1] - edges[i])`.
    pub heights: Vec<f64>,
    /// Constant logarithmic width `b`.
    pub log_width: f64,
}

impl BinnedDensity {
    pub fn bins(&self) -> usize {
        self.mass.len()
    }

    /// Geometric center of each bin, the degree coordinate used for fits.
    pub fn centers(&self) -> Vec<f64> {
        self.edges.windows(2).map(|w| (w[0] * w[1]).sqrt()).collect()
    }

    pub fn widths(&self) -> Vec<f64> {
        self.edges.windows(2).map(|w| w[1] - w[0]).collect()
    }

    pub fn total_mass(&self) -> f64 {
        self.mass.iter().sum()
    }
}

/// Log width giving roughly 20 bins over `[1, d_max]`.
pub fn default_log_width(max_degree: u32) -> f64 {
    (max_degree.max(2) as f64).ln() / 20.0
}

/// Bins a degree-indexed density with constant log width `b`. The grid starts
/// at the smallest degree present and ends just past the largest.
pub fn log_bin(density: &BTreeMap<u32, f64>, b: f64) -> Result<BinnedDensity, StatsError> {
    let lo = *density.keys().next().ok_or(StatsError::EmptyDensity)?;
    let hi = *density.keys().next_back().unwrap();
    log_bin_range(density, b, lo, hi)
}

/// Same as [`log_bin`] but over an explicit degree range, so two densities
/// can share one grid. The range must cover the density's support.
pub fn log_bin_range(
    density: &BTreeMap<u32, f64>,
    b: f64,
    lo: u32,
    hi: u32,
) -> Result<BinnedDensity, StatsError> {
    if !(b.is_finite() && b > 0.0) {
        return Err(StatsError::BadLogWidth(b));
    }
    if density.is_empty() {
        return Err(StatsError::EmptyDensity);
    }
    let (&dmin, &dmax) = (
        density.keys().next().unwrap(),
        density.keys().next_back().unwrap(),
    );
    if dmin == 0 {
        return Err(StatsError::NonPositiveDegree(0));
    }
    if lo == 0 || lo > dmin || hi < dmax {
        return Err(StatsError::BadRange { lo, hi });
    }

    let start = lo as f64;
    let nbins = ((hi as f64 / start).ln() / b).floor() as usize + 1;
    let mut edges = Vec::with_capacity(nbins + 1);
    for i in 0..=nbins {
        edges.push(start * (b * i as f64).exp());
    }
    let mut mass = vec![0.0; nbins];
    for (&k, &p) in density {
        let kf = k as f64;
        let mut idx = ((kf / start).ln() / b).floor() as isize;
        // Guard against boundary rounding in the float logarithm.
        idx = idx.clamp(0, nbins as isize - 1);
        while idx > 0 && kf < edges[idx as usize] {
            idx -= 1;
        }
        while (idx as usize) < nbins - 1 && kf >= edges[idx as usize + 1] {
            idx += 1;
        }
        mass[idx as usize] += p;
    }
    let heights = mass
        .iter()
        .zip(edges.windows(2))
        .map(|(m, w)| m / (w[1] - w[0]))
        .collect();
    Ok(BinnedDensity { edges, mass, heights, log_width: b })
}

/// Ordinary least squares fit of `ln(height)` against `ln(center)` over the
/// nonzero bins whose centers fall in `window` (inclusive).
#[derive(Clone, Copy, Debug)]
pub struct LogLogFit {
    pub slope: f64,
    pub intercept: f64,
    /// Number of bins entering the fit.
    pub points: usize,
}

impl LogLogFit {
    /// Fitted height at degree coordinate `k`.
    pub fn predict(&self, k: f64) -> f64 {
        (self.intercept + self.slope * k.ln()).exp()
    }
}

pub fn fit_log_log(binned: &BinnedDensity, window: (f64, f64)) -> Result<LogLogFit, StatsError> {
    let centers = binned.centers();
    let pts: Vec<(f64, f64)> = centers
        .iter()
        .zip(&binned.heights)
        .filter(|(c, h)| **c >= window.0 && **c <= window.1 && **h > 0.0)
        .map(|(c, h)| (c.ln(), h.ln()))
        .collect();
    if pts.len() < 3 {
        return Err(StatsError::WindowTooNarrow { found: pts.len() });
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    Ok(LogLogFit { slope, intercept: my - slope * mx, points: pts.len() })
}

/// Degree-mixing statistics.
#[derive(Clone, Debug)]
pub struct MixingStats {
    /// Average nearest-neighbor degree per degree class: for each degree `k`,
    /// the mean over degree-`k` nodes of their mean neighbor degree.
    pub annd_by_degree: BTreeMap<u32, f64>,
    /// Mean over all non-isolated nodes of their mean neighbor degree.
    pub mean_annd: f64,
    /// Pearson correlation of end degrees over both orientations of every
    /// link. Zero when degenerate.
    pub rho_d: f64,
    /// Set when the degree variance over link ends vanishes (for example on
    /// regular graphs) or the graph has no links.
    pub rho_degenerate: bool,
}

/// Average nearest-neighbor degree curve and the degree assortativity
/// coefficient.
pub fn annd(g: &Graph) -> MixingStats {
    let degrees = g.degrees();
    let mut per_class: BTreeMap<u32, (f64, u64)> = BTreeMap::new();
    let mut node_mean_sum = 0.0;
    let mut non_isolated = 0u64;
    for i in 0..g.node_count() as NodeId {
        let d = degrees[i as usize];
        if d == 0 {
            continue;
        }
        let s: u64 = g.neighbors(i).iter().map(|&j| degrees[j as usize] as u64).sum();
        let mean_nb = s as f64 / d as f64;
        let e = per_class.entry(d).or_insert((0.0, 0));
        e.0 += mean_nb;
        e.1 += 1;
        node_mean_sum += mean_nb;
        non_isolated += 1;
    }
    let annd_by_degree = per_class
        .into_iter()
        .map(|(k, (sum, cnt))| (k, sum / cnt as f64))
        .collect();
    let mean_annd = if non_isolated == 0 { 0.0 } else { node_mean_sum / non_isolated as f64 };

    // Moments over the 2L directed link ends, in exact integer arithmetic.
    let mut s1: u128 = 0; // sum of source degrees = sum d_i^2
    let mut s2: u128 = 0; // sum of squared source degrees = sum d_i^3
    let mut sxy: u128 = 0; // sum over directed pairs of d_i * d_j
    for i in 0..g.node_count() as NodeId {
        let di = degrees[i as usize] as u128;
        s1 += di * di;
        s2 += di * di * di;
        let row: u128 = g.neighbors(i).iter().map(|&j| degrees[j as usize] as u128).sum();
        sxy += di * row;
    }
    let n_pairs = 2 * g.link_count();
    let (rho_d, rho_degenerate) = if n_pairs == 0 {
        (0.0, true)
    } else {
        let n = n_pairs as f64;
        let mean = s1 as f64 / n;
        let var = s2 as f64 / n - mean * mean;
        let cov = sxy as f64 / n - mean * mean;
        if var <= 0.0 {
            (0.0, true)
        } else {
            (cov / var, false)
        }
    };
    MixingStats { annd_by_degree, mean_annd, rho_d, rho_degenerate }
}

/// Local and graph-level clustering.
#[derive(Clone, Debug)]
pub struct ClusteringStats {
    /// Local clustering coefficient per node; 0 for degree < 2.
    pub local: Vec<f64>,
    /// Plain average of `local` over all nodes.
    pub c_g: f64,
    /// Mean local coefficient per degree class.
    pub c_by_degree: BTreeMap<u32, f64>,
}

/// Local clustering via sorted-adjacency intersection: for node `i`,
/// `sum_j |N(i) cap N(j)|` over neighbors `j` counts each linked neighbor
/// pair twice, giving `c_i = sum_j n_ij / (d_i (d_i - 1))`.
pub fn clustering(g: &Graph) -> ClusteringStats {
    let n = g.node_count();
    let local: Vec<f64> = (0..n as NodeId)
        .into_par_iter()
        .map(|i| {
            let d = g.degree(i) as u64;
            if d < 2 {
                return 0.0;
            }
            let paired: u64 = g
                .neighbors(i)
                .iter()
                .map(|&j| sorted_common_count(g.neighbors(i), g.neighbors(j)))
                .sum();
            paired as f64 / (d * (d - 1)) as f64
        })
        .collect();
    let c_g = if n == 0 { 0.0 } else { local.iter().sum::<f64>() / n as f64 };
    let mut per_class: BTreeMap<u32, (f64, u64)> = BTreeMap::new();
    for (i, &c) in local.iter().enumerate() {
        let e = per_class.entry(g.degree(i as NodeId)).or_insert((0.0, 0));
        e.0 += c;
        e.1 += 1;
    }
    let c_by_degree = per_class
        .into_iter()
        .map(|(k, (sum, cnt))| (k, sum / cnt as f64))
        .collect();
    ClusteringStats { local, c_g, c_by_degree }
}

/// Size of the intersection of two strictly increasing slices.
pub(crate) fn sorted_common_count(a: &[NodeId], b: &[NodeId]) -> u64 {
    let (mut x, mut y, mut count) = (0usize, 0usize, 0u64);
    while x < a.len() && y < b.len() {
        match a[x].cmp(&b[y]) {
            std::cmp::Ordering::Less => x += 1,
            std::cmp::Ordering::Greater => y += 1,
            std::cmp::Ordering::Equal => {
                count += 1;
                x += 1;
                y += 1;
            }
        }
    }
    count
}
