//! Tail-index estimation for degree distributions.
//!
//! Three estimators of the extreme-value index `xi` (Hill, moments, and a
//! biweight-kernel estimator) plus a log-log regression slope on the binned
//! density. A distribution is called a power law only when all three `xi`
//! estimates clear 1/4, i.e. when the implied exponent `gamma = 1 + 1/xi`
//! stays below 5; a negative estimate rules the power law out.

use serde::Serialize;

use crate::degree::{self, BinnedDensity, StatsError};

#[derive(Debug, thiserror::Error)]
pub enum TailError {
    #[error("kernel bandwidth must lie in (0, 1), got {0}")]
    BadBandwidth(f64),
    #[error("need at least {need} positive samples, found {found}")]
    SampleTooSmall { need: usize, found: usize },
}

/// Hill estimator over the `k` largest values of a descending-sorted sample:
/// the mean of `ln(X_(n-i+1) / X_(n-k))` for `i = 1..k`.
///
/// Requires `2 <= k < sorted.len()` and positive values down to index `k`.
pub fn hill_xi(sorted_desc: &[f64], k: usize) -> f64 {
    assert!(k >= 2 && k < sorted_desc.len(), "tail size {k} out of range");
    let threshold = sorted_desc[k];
    assert!(threshold > 0.0, "tail threshold must be positive");
    let sum: f64 = sorted_desc[..k].iter().map(|x| (x / threshold).ln()).sum();
    sum / k as f64
}

/// Moments (de Haan type) estimate; degenerate when the second log moment
/// vanishes or the correction denominator collapses.
#[derive(Clone, Copy, Debug)]
pub struct MomentsEstimate {
    pub xi: f64,
    pub degenerate: bool,
}

/// Moments estimator `M1 + 1 - (1/2) / (1 - M1^2 / M2)` with
/// `Mr = mean of ln(X_(n-i+1)/X_(n-k))^r` over the top `k` values.
pub fn moments_xi(sorted_desc: &[f64], k: usize) -> MomentsEstimate {
    assert!(k >= 2 && k < sorted_desc.len(), "tail size {k} out of range");
    let threshold = sorted_desc[k];
    assert!(threshold > 0.0, "tail threshold must be positive");
    let (mut m1, mut m2) = (0.0, 0.0);
    for x in &sorted_desc[..k] {
        let l = (x / threshold).ln();
        m1 += l;
        m2 += l * l;
    }
    m1 /= k as f64;
    m2 /= k as f64;
    if m2 <= 0.0 {
        return MomentsEstimate { xi: 0.0, degenerate: true };
    }
    let denom = 1.0 - m1 * m1 / m2;
    if denom.abs() < 1e-12 {
        return MomentsEstimate { xi: 0.0, degenerate: true };
    }
    MomentsEstimate { xi: m1 + 1.0 - 0.5 / denom, degenerate: false }
}

/// Biweight kernel `K(u) = (15/8)(1 - u^2)^2` on `[0, 1]`; integrates to 1.
fn biweight(u: f64) -> f64 {
    let t = 1.0 - u * u;
    15.0 / 8.0 * t * t
}

/// Kernel-type estimator: weighted sum of rescaled log spacings
/// `j (ln X_(n-j+1) - ln X_(n-j))`, with weights `K(j/(nh)) / (nh)`. The
/// bandwidth fraction `h` sets the effective tail to roughly `n * h` order
/// statistics.
pub fn kernel_xi(sorted_desc: &[f64], h: f64) -> Result<f64, TailError> {
    if !(h > 0.0 && h < 1.0) || !h.is_finite() {
        return Err(TailError::BadBandwidth(h));
    }
    let n = sorted_desc.len();
    if n < 2 {
        return Err(TailError::SampleTooSmall { need: 2, found: n });
    }
    let nh = n as f64 * h;
    let jmax = (nh.floor() as usize).min(n - 1);
    let mut acc = 0.0;
    for j in 1..=jmax {
        let u = j as f64 / nh;
        if u > 1.0 {
            break;
        }
        assert!(sorted_desc[j] > 0.0, "tail values must be positive");
        let spacing = (sorted_desc[j - 1] / sorted_desc[j]).ln();
        acc += j as f64 / nh * biweight(u) * spacing;
    }
    Ok(acc)
}

/// Three-estimator power-law verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    /// All three `xi` estimates exceed 1/4.
    PowerLaw,
    /// No estimate is negative, but at least one sits in `[0, 1/4]`.
    HardlyPowerLaw,
    /// At least one estimate is negative.
    NotPowerLaw,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::PowerLaw => "power_law",
            Verdict::HardlyPowerLaw => "hardly_power_law",
            Verdict::NotPowerLaw => "not_power_law",
        })
    }
}

pub fn classify(xi_hill: f64, xi_moments: f64, xi_kernel: f64) -> Verdict {
    let xs = [xi_hill, xi_moments, xi_kernel];
    if xs.iter().any(|x| *x < 0.0) {
        Verdict::NotPowerLaw
    } else if xs.iter().all(|x| *x > 0.25) {
        Verdict::PowerLaw
    } else {
        // An estimate exactly at 0 lands here by convention.
        Verdict::HardlyPowerLaw
    }
}

/// `gamma = 1 + 1/xi` for a strictly positive index.
pub fn gamma_from_xi(xi: f64) -> Option<f64> {
    (xi > 0.0).then(|| 1.0 + 1.0 / xi)
}

/// Picks the tail size `k` minimizing the Kolmogorov-Smirnov distance between
/// the top-`k` exceedances and the Pareto tail fitted by Hill at the same
/// threshold. Candidates come from a logarithmic grid on `[k_min, n/2]`.
/// Falls back to `sqrt(n)` when no candidate admits a positive Hill estimate.
pub fn select_tail_size(sorted_desc: &[f64], k_min: usize, grid_points: usize) -> usize {
    let n = sorted_desc.len();
    let fallback = ((n as f64).sqrt() as usize).clamp(2, n.saturating_sub(1).max(2));
    let hi = n / 2;
    let lo = k_min.max(2);
    if n < 5 || lo > hi || grid_points == 0 {
        return fallback;
    }
    let mut best: Option<(f64, usize)> = None;
    let mut prev = 0usize;
    for t in 0..grid_points {
        let f = if grid_points == 1 { 0.0 } else { t as f64 / (grid_points - 1) as f64 };
        let k = ((lo as f64) * (hi as f64 / lo as f64).powf(f)).round() as usize;
        let k = k.clamp(lo, hi);
        if k == prev {
            continue;
        }
        prev = k;
        if sorted_desc[k] <= 0.0 {
            continue;
        }
        let xi = hill_xi(sorted_desc, k);
        if xi <= 0.0 {
            continue;
        }
        let d = ks_distance(&sorted_desc[..k], sorted_desc[k], xi);
        if best.map_or(true, |(bd, _)| d < bd) {
            best = Some((d, k));
        }
    }
    best.map_or(fallback, |(_, k)| k)
}

/// KS distance between descending exceedances and the Pareto CDF
/// `F(x) = 1 - (x/u)^(-1/xi)` above threshold `u`.
fn ks_distance(exceedances_desc: &[f64], u: f64, xi: f64) -> f64 {
    let k = exceedances_desc.len();
    let mut d: f64 = 0.0;
    // Ascending order: the i-th smallest exceedance is at index k - i.
    for i in 1..=k {
        let x = exceedances_desc[k - i];
        let fitted = 1.0 - (x / u).powf(-1.0 / xi);
        let lo = (i - 1) as f64 / k as f64;
        let hi = i as f64 / k as f64;
        d = d.max((fitted - lo).abs()).max((fitted - hi).abs());
    }
    d
}

/// Regression-based exponent: negated slope of `ln(height)` over `ln(k)` on
/// the nonzero bins inside `window`.
pub fn slope_exponent(binned: &BinnedDensity, window: (f64, f64)) -> Result<f64, StatsError> {
    Ok(-degree::fit_log_log(binned, window)?.slope)
}

#[derive(Clone, Debug)]
pub struct TailConfig {
    /// Estimation is skipped when the sample holds at most this many values.
    pub min_sample: usize,
    /// Lower bound of the tail-size grid.
    pub k_min: usize,
    /// Number of grid candidates for the tail size.
    pub grid_points: usize,
    /// Kernel bandwidth fraction; `None` uses `k*/n`.
    pub bandwidth: Option<f64>,
    /// Log width for the slope regression's binning; `None` picks the
    /// default ~20-bin width.
    pub bin_log_width: Option<f64>,
    /// Regression window in degrees; `None` starts at the density mode.
    pub window: Option<(f64, f64)>,
}

impl Default for TailConfig {
    fn default() -> Self {
        TailConfig {
            min_sample: 1000,
            k_min: 10,
            grid_points: 40,
            bandwidth: None,
            bin_log_width: None,
            window: None,
        }
    }
}

/// Full tail analysis of one sample.
#[derive(Clone, Debug, Serialize)]
pub struct TailEstimate {
    /// Positive sample size the estimate is based on.
    pub n: usize,
    /// Selected tail size shared by the Hill and moments estimators.
    pub k_star: usize,
    pub xi_hill: f64,
    pub xi_moments: f64,
    pub moments_degenerate: bool,
    pub xi_kernel: f64,
    pub kernel_bandwidth: f64,
    pub gamma_hill: Option<f64>,
    pub gamma_moments: Option<f64>,
    pub gamma_kernel: Option<f64>,
    /// Exponent from the binned-density regression; set by
    /// [`estimate_degree_tail`], absent for raw samples.
    pub gamma_slope: Option<f64>,
    pub verdict: Verdict,
    /// Power-law verdict with the mean implied exponent inside (2, 3).
    pub scale_free: bool,
}

/// Runs the three index estimators on a raw sample. Non-finite and
/// non-positive values are dropped; returns `None` when no more than
/// `cfg.min_sample` values remain.
pub fn estimate_tail(sample: &[f64], cfg: &TailConfig) -> Result<Option<TailEstimate>, TailError> {
    if let Some(h) = cfg.bandwidth {
        if !(h > 0.0 && h < 1.0) || !h.is_finite() {
            return Err(TailError::BadBandwidth(h));
        }
    }
    let mut xs: Vec<f64> = sample
        .iter()
        .copied()
        .filter(|x| x.is_finite() && *x > 0.0)
        .collect();
    let n = xs.len();
    if n <= cfg.min_sample {
        return Ok(None);
    }
    xs.sort_unstable_by(|a, b| b.partial_cmp(a).unwrap());
    let k_star = select_tail_size(&xs, cfg.k_min, cfg.grid_points);
    let xi_hill = hill_xi(&xs, k_star);
    let moments = moments_xi(&xs, k_star);
    let bandwidth = cfg.bandwidth.unwrap_or((k_star as f64 / n as f64).clamp(1e-6, 0.5));
    let xi_kernel = kernel_xi(&xs, bandwidth)?;
    let verdict = classify(xi_hill, moments.xi, xi_kernel);
    let gammas = [
        gamma_from_xi(xi_hill),
        gamma_from_xi(moments.xi),
        gamma_from_xi(xi_kernel),
    ];
    let scale_free = verdict == Verdict::PowerLaw && {
        let known: Vec<f64> = gammas.iter().flatten().copied().collect();
        let mean = known.iter().sum::<f64>() / known.len() as f64;
        mean > 2.0 && mean < 3.0
    };
    Ok(Some(TailEstimate {
        n,
        k_star,
        xi_hill,
        xi_moments: moments.xi,
        moments_degenerate: moments.degenerate,
        xi_kernel,
        kernel_bandwidth: bandwidth,
        gamma_hill: gammas[0],
        gamma_moments: gammas[1],
        gamma_kernel: gammas[2],
        gamma_slope: None,
        verdict,
        scale_free,
    }))
}

/// Tail analysis of a degree sequence, including the regression exponent on
/// the log-binned density. Zero degrees are ignored.
pub fn estimate_degree_tail(
    degrees: &[u32],
    cfg: &TailConfig,
) -> Result<Option<TailEstimate>, TailError> {
    let sample: Vec<f64> = degrees.iter().map(|&d| d as f64).collect();
    let mut est = match estimate_tail(&sample, cfg)? {
        Some(e) => e,
        None => return Ok(None),
    };
    est.gamma_slope = degree_slope(degrees, cfg);
    Ok(Some(est))
}

/// Slope exponent of the binned degree density, or `None` when the density
/// cannot be binned or the window is too narrow.
fn degree_slope(degrees: &[u32], cfg: &TailConfig) -> Option<f64> {
    let mut density = std::collections::BTreeMap::new();
    let mut total = 0u64;
    for &d in degrees {
        if d > 0 {
            *density.entry(d).or_insert(0u64) += 1;
            total += 1;
        }
    }
    if total == 0 {
        return None;
    }
    let density: std::collections::BTreeMap<u32, f64> = density
        .into_iter()
        .map(|(k, c)| (k, c as f64 / total as f64))
        .collect();
    let d_max = *density.keys().next_back().unwrap();
    let b = cfg.bin_log_width.unwrap_or_else(|| degree::default_log_width(d_max));
    let binned = degree::log_bin(&density, b).ok()?;
    let window = cfg.window.unwrap_or_else(|| {
        // Default: fit from the density mode outward.
        let centers = binned.centers();
        let mode = binned
            .heights
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
            .map(|(i, _)| centers[i])
            .unwrap_or(1.0);
        (mode, f64::INFINITY)
    });
    slope_exponent(&binned, window).ok()
}
