//! Undirected binary configuration model: maximum-entropy link probabilities
//! constrained to an expected degree sequence, null-model sampling, and
//! calibrated coefficients.
//!
//! The generic solution is `p_ij = x_i x_j / (1 + x_i x_j)` with one positive
//! weight per node, fit by fixed-point iteration over degree classes (equal
//! degrees provably share a weight). Degree-sequence corners where the finite
//! fixed point cannot reach the constraint — hubs with `d = n - 1` (links
//! forced present) and nodes whose whole degree is absorbed by such hubs
//! (remaining links forced absent) — are peeled off exactly beforehand, and
//! their pair probabilities resolve by removal order: a forced-full node
//! links to everything still active at its removal.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::graph::{Graph, NodeId};
use crate::rewire::mean_std;

/// Fit tolerance: max over nodes of |expected degree − target degree|.
pub const FIT_TOLERANCE: f64 = 1e-8;
/// Fixed-point sweep cap.
pub const FIT_MAX_SWEEPS: u32 = 50_000;
/// Calibration refuses graphs smaller than this.
pub const MIN_CALIBRATION_NODES: usize = 100;
/// Default null-ensemble size.
pub const DEFAULT_SAMPLES: u32 = 500;
/// Reduced ensemble size for very large graphs.
pub const REDUCED_SAMPLES: u32 = 100;

#[derive(Debug, Error)]
pub enum UbcmError {
    #[error("need at least 2 nodes, found {found}")]
    TooFewNodes { found: usize },
    #[error("node {node} has degree {degree}, outside [1, {max}]")]
    BadDegree { node: usize, degree: u32, max: u32 },
    #[error("degree sum {sum} is odd")]
    OddDegreeSum { sum: u64 },
    #[error("degree sequence fails the Erdos-Gallai condition")]
    NotGraphical,
    #[error("fit stopped after {iterations} sweeps with residual {residual:.3e}")]
    NotConverged { iterations: u32, residual: f64 },
    #[error("graph has {found} nodes; calibration needs at least {need}")]
    GraphTooSmall { found: usize, need: usize },
    #[error("observed coefficient is zero; calibrated log-ratio undefined")]
    ObservedZero,
    #[error("all {total} null-sample coefficients are zero; calibration undefined")]
    AllSamplesZero { total: u32 },
}

/// Pair probability from two weights, boundary values included: zero weight
/// forces the link absent, an infinite product forces it present.
pub fn pair_probability(x: f64, y: f64) -> f64 {
    if x == 0.0 || y == 0.0 {
        0.0
    } else {
        let prod = x * y;
        if prod.is_infinite() {
            1.0
        } else {
            prod / (1.0 + prod)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum NodeClass {
    Finite(f64),
    /// Link forced to every node active at removal time; payload is removal order.
    Full(u32),
    /// No links beyond the forced ones already accounted; payload is removal order.
    Empty(u32),
}

/// Fitted configuration model.
#[derive(Clone, Debug)]
pub struct UbcmModel {
    class: Vec<NodeClass>,
    residual: f64,
    iterations: u32,
}

impl UbcmModel {
    pub fn node_count(&self) -> usize {
        self.class.len()
    }

    /// Max over nodes of |expected degree − target| at the end of the fit.
    pub fn residual(&self) -> f64 {
        self.residual
    }

    pub fn iterations(&self) -> u32 {
        self.iterations
    }

    /// Node weights; forced nodes surface as `+inf` / `0.0`.
    pub fn weights(&self) -> Vec<f64> {
        self.class
            .iter()
            .map(|c| match *c {
                NodeClass::Finite(x) => x,
                NodeClass::Full(_) => f64::INFINITY,
                NodeClass::Empty(_) => 0.0,
            })
            .collect()
    }

    /// Probability that the unordered pair (i, j) is linked; 0 for i == j.
    pub fn link_probability(&self, i: NodeId, j: NodeId) -> f64 {
        if i == j {
            return 0.0;
        }
        use NodeClass::*;
        match (self.class[i as usize], self.class[j as usize]) {
            (Finite(a), Finite(b)) => pair_probability(a, b),
            (Full(_), Finite(_)) | (Finite(_), Full(_)) | (Full(_), Full(_)) => 1.0,
            (Empty(_), Finite(_)) | (Finite(_), Empty(_)) | (Empty(_), Empty(_)) => 0.0,
            // The earlier-removed node decides: a full node was linked to
            // everything still active, an already-removed empty node was not.
            (Full(f), Empty(e)) | (Empty(e), Full(f)) => {
                if f < e {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }

    /// Expected degree of node i under the model; O(n).
    pub fn expected_degree(&self, i: NodeId) -> f64 {
        (0..self.class.len() as NodeId)
            .filter(|&j| j != i)
            .map(|j| self.link_probability(i, j))
            .sum()
    }

    /// Model from explicit weights, for constructed nulls and tests. Forced
    /// weights resolve by the plain pair formula (a zero weight always wins),
    /// so `0` vs `inf` pairs are unlinked. `residual`/`iterations` are 0.
    pub fn from_weights(weights: &[f64]) -> UbcmModel {
        let class = weights
            .iter()
            .map(|&w| {
                assert!(w >= 0.0 && !w.is_nan(), "weights must be non-negative");
                if w == 0.0 {
                    NodeClass::Empty(0)
                } else if w.is_infinite() {
                    NodeClass::Full(u32::MAX)
                } else {
                    NodeClass::Finite(w)
                }
            })
            .collect();
        UbcmModel { class, residual: 0.0, iterations: 0 }
    }
}

fn erdos_gallai(sorted_desc: &[u32]) -> bool {
    let n = sorted_desc.len();
    let mut prefix = vec![0u64; n + 1];
    for (i, &d) in sorted_desc.iter().enumerate() {
        prefix[i + 1] = prefix[i] + d as u64;
    }
    for k in 1..=n {
        let tail = &sorted_desc[k..];
        // Among the tail, degrees >= k contribute k each, the rest themselves.
        let big = tail.partition_point(|&d| d as usize >= k);
        let tail_sum = (prefix[n] - prefix[k + big]) + (k as u64) * big as u64;
        if prefix[k] > (k as u64) * (k as u64 - 1) + tail_sum {
            return false;
        }
    }
    true
}

/// Fit with default tolerance and sweep cap.
pub fn fit_ubcm(degrees: &[u32]) -> Result<UbcmModel, UbcmError> {
    fit_ubcm_with(degrees, FIT_TOLERANCE, FIT_MAX_SWEEPS)
}

pub fn fit_ubcm_with(degrees: &[u32], tol: f64, max_sweeps: u32) -> Result<UbcmModel, UbcmError> {
    let n = degrees.len();
    if n < 2 {
        return Err(UbcmError::TooFewNodes { found: n });
    }
    let max = (n - 1) as u32;
    let mut sum = 0u64;
    for (node, &d) in degrees.iter().enumerate() {
        if d == 0 || d > max {
            return Err(UbcmError::BadDegree { node, degree: d, max });
        }
        sum += d as u64;
    }
    if sum % 2 != 0 {
        return Err(UbcmError::OddDegreeSum { sum });
    }
    let mut sorted = degrees.to_vec();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    if !erdos_gallai(&sorted) {
        return Err(UbcmError::NotGraphical);
    }

    // Peel forced structure. All active nodes share the offset `hubs`:
    // every hub removal forced one link onto each of them.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_unstable_by_key(|&i| (degrees[i], i));
    let mut class = vec![NodeClass::Finite(0.0); n];
    let (mut lo, mut hi) = (0usize, n); // active window in `order`
    let mut hubs = 0u32;
    let mut removal = 0u32;
    loop {
        while lo < hi && degrees[order[lo]] == hubs {
            class[order[lo]] = NodeClass::Empty(removal);
            removal += 1;
            lo += 1;
        }
        let active = hi - lo;
        if active == 0 {
            break;
        }
        let top = order[hi - 1];
        if (degrees[top] - hubs) as usize == active - 1 {
            class[top] = NodeClass::Full(removal);
            removal += 1;
            hubs += 1;
            hi -= 1;
        } else {
            break;
        }
    }

    // Interior fixed point over residual-degree classes.
    let interior = &order[lo..hi];
    let mut residual = 0.0f64;
    let mut iterations = 0u32;
    if !interior.is_empty() {
        let active = interior.len();
        let mut classes: Vec<(f64, f64)> = Vec::new(); // (residual degree, count)
        for &i in interior {
            let r = (degrees[i] - hubs) as f64;
            match classes.last_mut() {
                Some(last) if last.0 == r => last.1 += 1.0,
                _ => classes.push((r, 1.0)),
            }
        }
        let c = classes.len();
        let mut x = vec![0.0f64; c];
        if c == 1 {
            // One class: p = r/(m-1) analytically, x = sqrt(p/(1-p)).
            let (r, m) = classes[0];
            let p = r / (m - 1.0);
            debug_assert!(p > 0.0 && p < 1.0);
            x[0] = (p / (1.0 - p)).sqrt();
        } else {
            let total: f64 = classes.iter().map(|&(r, m)| r * m).sum();
            for (a, &(r, _)) in classes.iter().enumerate() {
                x[a] = r / total.sqrt();
            }
            for sweep in 1..=max_sweeps {
                iterations = sweep;
                for a in 0..c {
                    let xa = x[a];
                    let denom: f64 = classes
                        .iter()
                        .enumerate()
                        .map(|(b, &(_, m))| {
                            let mb = if a == b { m - 1.0 } else { m };
                            mb * x[b] / (1.0 + xa * x[b])
                        })
                        .sum();
                    x[a] = classes[a].0 / denom;
                }
                let res = fit_residual(&classes, &x);
                if res < tol {
                    break;
                }
            }
        }
        residual = fit_residual(&classes, &x);
        if residual >= tol {
            return Err(UbcmError::NotConverged { iterations, residual });
        }
        // Interior nodes are sorted by degree, classes too: walk in step.
        let mut a = 0usize;
        for &i in interior {
            let r = (degrees[i] - hubs) as f64;
            while classes[a].0 != r {
                a += 1;
            }
            class[i] = NodeClass::Finite(x[a]);
        }
        let _ = active;
    }
    Ok(UbcmModel { class, residual, iterations })
}

fn fit_residual(classes: &[(f64, f64)], x: &[f64]) -> f64 {
    let mut worst = 0.0f64;
    for (a, &(r, _)) in classes.iter().enumerate() {
        let expect: f64 = classes
            .iter()
            .enumerate()
            .map(|(b, &(_, m))| {
                let mb = if a == b { m - 1.0 } else { m };
                mb * pair_probability(x[a], x[b])
            })
            .sum();
        worst = worst.max((expect - r).abs());
    }
    worst
}

/// Draw one graph: every unordered pair linked independently with its model
/// probability. Forced links are laid down deterministically; the finite
/// block uses geometric gap-skipping over weight-sorted nodes, so sparse
/// models cost O(N + L) rather than O(N^2).
pub fn sample_ubcm(model: &UbcmModel, seed: u64) -> Graph {
    let n = model.class.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges: Vec<(NodeId, NodeId)> = Vec::new();

    let mut fulls: Vec<(u32, NodeId)> = Vec::new();
    let mut empties: Vec<(u32, NodeId)> = Vec::new();
    let mut finites: Vec<(f64, NodeId)> = Vec::new();
    for (i, c) in model.class.iter().enumerate() {
        match *c {
            NodeClass::Full(o) => fulls.push((o, i as NodeId)),
            NodeClass::Empty(o) => empties.push((o, i as NodeId)),
            NodeClass::Finite(x) => finites.push((x, i as NodeId)),
        }
    }
    empties.sort_unstable();
    for &(of, i) in &fulls {
        for &(_, j) in &finites {
            edges.push((i, j));
        }
        for &(og, j) in &fulls {
            if og > of {
                edges.push((i, j));
            }
        }
        // Empties removed after this hub were active when it linked out.
        let cut = empties.partition_point(|&(oe, _)| oe <= of);
        for &(_, j) in &empties[cut..] {
            edges.push((i, j));
        }
    }

    // Weight-descending order makes the row bound q monotone.
    finites.sort_unstable_by(|a, b| b.0.partial_cmp(&a.0).unwrap().then(a.1.cmp(&b.1)));
    let nf = finites.len();
    for i in 0..nf {
        let xi = finites[i].0;
        let mut j = i + 1;
        if j >= nf {
            break;
        }
        let mut q = pair_probability(xi, finites[j].0);
        while j < nf && q > 0.0 {
            let r: f64 = rng.random();
            let gap = ((1.0 - r).ln() / (1.0 - q).ln()) as usize;
            j = j.saturating_add(gap);
            if j >= nf {
                break;
            }
            let p = pair_probability(xi, finites[j].0);
            if rng.random::<f64>() * q < p {
                edges.push((finites[i].1, finites[j].1));
            }
            q = p;
            j += 1;
        }
    }
    Graph::from_numeric_edges(n, edges)
}

/// Plain O(N^2) Bernoulli sweep over all pairs; oracle for `sample_ubcm`.
pub fn sample_ubcm_dense(model: &UbcmModel, seed: u64) -> Graph {
    let n = model.class.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for i in 0..n as NodeId {
        for j in (i + 1)..n as NodeId {
            let p = model.link_probability(i, j);
            if p >= 1.0 || (p > 0.0 && rng.random::<f64>() < p) {
                edges.push((i, j));
            }
        }
    }
    Graph::from_numeric_edges(n, edges)
}

/// Metric values on R null samples, seeds derived as seed + r (wrapping).
pub fn null_metric_samples<F>(model: &UbcmModel, r: u32, seed: u64, metric: F) -> Vec<f64>
where
    F: Fn(&Graph) -> f64 + Sync,
{
    (0..r)
        .into_par_iter()
        .map(|k| metric(&sample_ubcm(model, seed.wrapping_add(k as u64))))
        .collect()
}

/// Calibrated coefficient: observed value, null samples, and the mean
/// log-ratio with its dispersion.
#[derive(Clone, Debug)]
pub struct CalibrationResult {
    pub observed: f64,
    /// All R sample values, zeros included.
    pub samples: Vec<f64>,
    /// Mean of ln(observed / sample) over nonzero samples.
    pub calibrated: f64,
    /// Sample standard deviation of the log-ratios.
    pub dispersion: f64,
    /// Samples excluded for a zero (or non-finite) coefficient.
    pub excluded: u32,
}

impl CalibrationResult {
    pub fn r(&self) -> u32 {
        self.samples.len() as u32
    }

    /// Standard error of the calibrated mean over the included samples.
    pub fn standard_error(&self) -> f64 {
        let kept = self.samples.len() as u32 - self.excluded;
        if kept == 0 {
            f64::NAN
        } else {
            self.dispersion / (kept as f64).sqrt()
        }
    }
}

/// The log-ratio reduction alone, for pre-computed sample values.
pub fn calibrate_value(observed: f64, samples: Vec<f64>) -> Result<CalibrationResult, UbcmError> {
    if observed <= 0.0 || !observed.is_finite() {
        return Err(UbcmError::ObservedZero);
    }
    let ratios: Vec<f64> = samples
        .iter()
        .filter(|&&s| s > 0.0 && s.is_finite())
        .map(|&s| (observed / s).ln())
        .collect();
    if ratios.is_empty() {
        return Err(UbcmError::AllSamplesZero { total: samples.len() as u32 });
    }
    let excluded = (samples.len() - ratios.len()) as u32;
    let stats = mean_std(&ratios);
    Ok(CalibrationResult {
        observed,
        samples,
        calibrated: stats.mean,
        dispersion: stats.std,
        excluded,
    })
}

/// Full calibration of a graph metric against the configuration-model null:
/// fit to the observed degree sequence, draw R samples, reduce per
/// `calibrate_value`. The graph is used as given and must have at least
/// `MIN_CALIBRATION_NODES` nodes and minimum degree 1 (pass the LCC).
pub fn calibrate<F>(g: &Graph, metric: F, r: u32, seed: u64) -> Result<CalibrationResult, UbcmError>
where
    F: Fn(&Graph) -> f64 + Sync,
{
    if g.node_count() < MIN_CALIBRATION_NODES {
        return Err(UbcmError::GraphTooSmall {
            found: g.node_count(),
            need: MIN_CALIBRATION_NODES,
        });
    }
    let model = fit_ubcm(&g.degrees())?;
    let observed = metric(g);
    let samples = null_metric_samples(&model, r, seed, metric);
    calibrate_value(observed, samples)
}
