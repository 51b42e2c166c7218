//! Acceptance suite: one test per numbered criterion, each enforcing its
//! stated tolerance and wall-clock budget. Run with `--nocapture` to see the
//! measured values behind every pass/fail line.

mod common;

use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp, Pareto};

use common::{all_graphs_on, gnm, gnp, motif_oracle, preferential_attachment, random_small};
use semnet::degree::log_bin;
use semnet::graph::Graph;
use semnet::inflection::{merge_and_compare, PeakConfig};
use semnet::ingest::build_merge_map;
use semnet::motifs::{c_graph, complementarity_coefficients, s_graph, similarity_coefficients};
use semnet::rewire::{rewire, RewireConfig};
use semnet::tail::{estimate_tail, hill_xi, slope_exponent, TailConfig, Verdict};
use semnet::ubcm::{calibrate_value, fit_ubcm, sample_ubcm};

fn budget(start: Instant, limit: Duration, what: &str) {
    let took = start.elapsed();
    assert!(took < limit, "{what} took {took:?}, budget {limit:?}");
}

fn check_against_oracle(g: &Graph, what: &str) -> f64 {
    let oracle = motif_oracle(g);
    let sim = similarity_coefficients(g);
    let comp = complementarity_coefficients(g);
    assert_eq!(sim.triangles, oracle.triangles, "{what}: T_i");
    assert_eq!(sim.wedge_denom, oracle.t_wedge, "{what}: t^W_i");
    assert_eq!(sim.head_denom, oracle.t_head, "{what}: t^H_i");
    assert_eq!(comp.quadrangles, oracle.quadrangles, "{what}: Q_i");
    assert_eq!(comp.wedge_denom, oracle.q_wedge, "{what}: q^W_i");
    assert_eq!(comp.head_denom, oracle.q_head, "{what}: q^H_i");
    let mut gap = (sim.s_graph - oracle.s_graph).abs().max((comp.c_graph - oracle.c_graph).abs());
    for i in 0..g.node_count() {
        gap = gap
            .max((sim.s_local[i] - oracle.s_local[i]).abs())
            .max((comp.c_local[i] - oracle.c_local[i]).abs());
        assert!(gap <= 1e-12, "{what}: node {i} coefficient gap {gap:e}");
    }
    gap
}

#[test]
fn criterion_01_motif_kernels_match_exhaustive_enumeration() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xC1);
    let mut gap: f64 = 0.0;
    let mut graphs = 0u32;
    for _ in 0..500 {
        let g = random_small(&mut rng, 8);
        gap = gap.max(check_against_oracle(&g, "random"));
        graphs += 1;
    }
    for n in 0..=5u32 {
        for g in all_graphs_on(n) {
            gap = gap.max(check_against_oracle(&g, "exhaustive"));
            graphs += 1;
        }
    }
    budget(start, Duration::from_secs(60), "criterion 1");
    println!(
        "criterion 1 PASS: {graphs} graphs, worst coefficient gap {gap:.2e}, {:?}",
        start.elapsed()
    );
}

#[test]
fn criterion_02_closed_form_extremes() {
    let complete = |n: u32| {
        Graph::from_numeric_edges(
            n as usize,
            (0..n).flat_map(|i| ((i + 1)..n).map(move |j| (i, j))),
        )
    };
    let bipartite = |a: u32, b: u32| {
        Graph::from_numeric_edges(
            (a + b) as usize,
            (0..a).flat_map(move |i| (0..b).map(move |j| (i, a + j))),
        )
    };
    for n in 3..=8u32 {
        let sim = similarity_coefficients(&complete(n));
        assert!(sim.s_local.iter().all(|&s| s == 1.0), "K_{n}: {:?}", sim.s_local);
        assert_eq!(sim.s_graph, 1.0, "K_{n}");
    }
    for a in 2..=5u32 {
        for b in 2..=5u32 {
            let comp = complementarity_coefficients(&bipartite(a, b));
            assert!(
                comp.c_local.iter().all(|&c| c == 1.0),
                "K_{{{a},{b}}}: {:?}",
                comp.c_local
            );
            assert_eq!(comp.c_graph, 1.0, "K_{{{a},{b}}}");
        }
    }
    // Stars have no quadrangle budget at all: the convention 0/0 = 0 shows.
    for b in 1..=5u32 {
        assert_eq!(c_graph(&bipartite(1, b)), 0.0, "K_{{1,{b}}}");
    }
    // The 4-cycle by hand: one quadrangle per node over q^W = q^H = 2.
    let square = Graph::from_numeric_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)]);
    let comp = complementarity_coefficients(&square);
    assert_eq!(comp.quadrangles, vec![1; 4]);
    assert_eq!(comp.wedge_denom, vec![2; 4]);
    assert_eq!(comp.head_denom, vec![2; 4]);
    assert_eq!(comp.c_local, vec![1.0; 4]);
    println!("criterion 2 PASS: K_n, K_a,b, C_4 extremes are exact");
}

#[test]
fn criterion_03_rewiring_preserves_degrees() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xC3);
    for case in 0..1000u64 {
        let n = 2 + (case % 39) as u32;
        let p = 0.02 + 0.33 * (case as f64 / 1000.0);
        let g = gnp(&mut rng, n, p);
        let cfg = RewireConfig { multiplier: 2, seed: case, ..RewireConfig::default() };
        let out = rewire(&g, &cfg);
        assert_eq!(out.graph.degrees(), g.degrees(), "case {case}: degree multiset");
        for i in 0..out.graph.node_count() as u32 {
            let row = out.graph.neighbors(i);
            assert!(row.windows(2).all(|w| w[0] < w[1]) && !row.contains(&i), "case {case}");
        }
        if case % 10 == 0 {
            let again = rewire(&g, &cfg);
            assert_eq!(again.graph.links(), out.graph.links(), "case {case}: determinism");
        }
    }
    // A triangle admits no valid swap: the attempt cap is the only way out.
    let k3 = Graph::from_numeric_edges(3, [(0, 1), (1, 2), (2, 0)]);
    let out = rewire(&k3, &RewireConfig { attempt_cap: Some(500), ..RewireConfig::default() });
    assert!(out.cap_reached, "K_3 must terminate via the cap");
    assert_eq!(out.completed_swaps, 0);
    assert_eq!(out.graph.links(), k3.links());
    budget(start, Duration::from_secs(60), "criterion 3");
    println!("criterion 3 PASS: 1000 graphs rewired, K_3 capped, {:?}", start.elapsed());
}

#[test]
fn criterion_04_tail_estimators_on_synthetic_samples() {
    let start = Instant::now();
    let cfg = TailConfig::default();
    let xi_true = 2.0 / 3.0; // gamma = 2.5 has extreme value index 1/(gamma-1)
    let pareto = Pareto::new(1.0, 1.5).unwrap();
    let mut pareto_good = 0u32;
    let mut worst: f64 = 0.0;
    for seed in 0..20u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(0x9A0 + seed);
        let xs: Vec<f64> = (0..100_000).map(|_| pareto.sample(&mut rng)).collect();
        let est = estimate_tail(&xs, &cfg).unwrap().expect("sample above floor");
        let errs = [est.xi_hill, est.xi_moments, est.xi_kernel].map(|x| (x - xi_true).abs());
        let in_band = errs.iter().all(|&e| e <= 0.12);
        if in_band && est.verdict == Verdict::PowerLaw {
            pareto_good += 1;
        }
        worst = errs.iter().fold(worst, |a, &b| a.max(b));
    }
    assert!(pareto_good >= 18, "Pareto runs in band with PowerLaw verdict: {pareto_good}/20");

    let exp = Exp::new(1.0).unwrap();
    let mut exp_good = 0u32;
    for seed in 0..20u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(0xE90 + seed);
        let xs: Vec<f64> = (0..100_000).map(|_| exp.sample(&mut rng)).collect();
        let est = estimate_tail(&xs, &cfg).unwrap().expect("sample above floor");
        if est.verdict != Verdict::PowerLaw {
            exp_good += 1;
        }
    }
    assert!(exp_good >= 18, "exponential runs rejected as power law: {exp_good}/20");

    // Hill is exactly scale invariant; powers of two are lossless in binary.
    let mut rng = ChaCha8Rng::seed_from_u64(0x111);
    let mut xs: Vec<f64> = (0..10_000).map(|_| pareto.sample(&mut rng)).collect();
    xs.sort_unstable_by(|a, b| b.partial_cmp(a).unwrap());
    let scaled: Vec<f64> = xs.iter().map(|x| x * 4.0).collect();
    for k in [50usize, 200, 1000] {
        assert_eq!(hill_xi(&xs, k), hill_xi(&scaled, k), "Hill scale invariance at k={k}");
    }
    budget(start, Duration::from_secs(120), "criterion 4");
    println!(
        "criterion 4 PASS: Pareto {pareto_good}/20 (worst gap {worst:.3}), \
         exponential {exp_good}/20, Hill scale-exact, {:?}",
        start.elapsed()
    );
}

#[test]
fn criterion_05_slope_estimator_recovers_the_exponent() {
    let start = Instant::now();
    let density: std::collections::BTreeMap<u32, f64> =
        (1..=50_000u32).map(|k| (k, (k as f64).powf(-2.3))).collect();
    let binned = log_bin(&density, 0.2).unwrap();
    let gamma = slope_exponent(&binned, (1.0, 5e4)).unwrap();
    assert!((gamma - 2.3).abs() <= 0.05, "gamma_slope = {gamma}");
    budget(start, Duration::from_secs(1), "criterion 5");
    println!("criterion 5 PASS: gamma_slope = {gamma:.4}, {:?}", start.elapsed());
}

#[test]
fn criterion_06_ubcm_fit_and_self_calibration() {
    let start = Instant::now();
    // Heterogeneous degree sequences from preferential attachment.
    for (n, seed) in [(300u32, 1u64), (3000, 2), (10_000, 3)] {
        let g = preferential_attachment(seed, n, 3);
        let model = fit_ubcm(&g.degrees()).unwrap();
        assert!(model.residual() < 1e-8, "N={n}: residual {:.3e}", model.residual());
    }
    // Regular sequence: closed form p = k/(N-1).
    let model = fit_ubcm(&vec![6u32; 200]).unwrap();
    let p = model.link_probability(0, 1);
    assert!((p - 6.0 / 199.0).abs() < 1e-9, "regular p = {p}");

    // Self-calibration: a graph drawn from a UBCM, calibrated against fresh
    // draws of the same model, must sit at zero up to sampling noise.
    let base = preferential_attachment(7, 400, 3);
    let model = fit_ubcm(&base.degrees()).unwrap();
    let trials = 30u64;
    let r = 60u64;
    let (mut cs, mut cc) = (Vec::new(), Vec::new());
    for t in 0..trials {
        let block = 0xCA11 + t * (r + 1);
        let observed = sample_ubcm(&model, block);
        let mut sim = Vec::with_capacity(r as usize);
        let mut comp = Vec::with_capacity(r as usize);
        for i in 1..=r {
            let null = sample_ubcm(&model, block + i);
            sim.push(s_graph(&null));
            comp.push(c_graph(&null));
        }
        cs.push(calibrate_value(s_graph(&observed), sim).unwrap().calibrated);
        cc.push(calibrate_value(c_graph(&observed), comp).unwrap().calibrated);
    }
    let t_stat = |xs: &[f64]| {
        let n = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / n;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
        (mean, mean / (var / n).sqrt())
    };
    let (mean_s, t_s) = t_stat(&cs);
    let (mean_c, t_c) = t_stat(&cc);
    assert!(t_s.abs() <= 3.0, "C(s) mean {mean_s:.4}, t = {t_s:.2}");
    assert!(t_c.abs() <= 3.0, "C(c) mean {mean_c:.4}, t = {t_c:.2}");
    budget(start, Duration::from_secs(300), "criterion 6");
    println!(
        "criterion 6 PASS: residuals < 1e-8 to N=10^4, regular p exact, \
         self-calibration C(s) t={t_s:.2}, C(c) t={t_c:.2}, {:?}",
        start.elapsed()
    );
}

/// A vocabulary where 700 root words each carry 54 inflected forms (every
/// form related to its root) on top of an exact power-law background of star
/// graphs, plus the Form-Of star needed to merge each root's forms back in.
fn inflected_corpus(m: u32, roots: u32) -> (Graph, Graph) {
    let mut related: Vec<(String, String)> = Vec::new();
    let mut formof: Vec<(String, String)> = Vec::new();
    for k in 2..=100u32 {
        let stars = (5e4 * (k as f64).powf(-2.5)).round() as u32;
        for s in 0..stars {
            for leaf in 0..k {
                related.push((format!("bg{k}_{s}"), format!("bg{k}_{s}_l{leaf}")));
            }
        }
    }
    for t in 0..roots {
        let root = format!("root{t}");
        for f in 0..m {
            let form = format!("root{t}_f{f}");
            related.push((root.clone(), form.clone()));
            formof.push((form, root.clone()));
        }
        for x in 0..(t % 11) {
            related.push((root.clone(), format!("rt{t}_{x}")));
        }
    }
    (semnet::build_graph(related), semnet::build_graph(formof))
}

#[test]
fn criterion_07_inflection_peak_appears_and_merges_away() {
    let start = Instant::now();
    let (g, formof) = inflected_corpus(54, 700);
    let cfg = PeakConfig { theta: 3.0, min_run: 2, window: (2.0, 200.0) };
    let map = build_merge_map(&formof);
    let cmp = merge_and_compare(&g, &map, 0.1, &cfg).unwrap();
    let before = cmp.peak_before.expect("peak before merging");
    assert!(
        before.contains(54),
        "peak [{}, {}] must contain 54",
        before.k_min,
        before.k_max
    );
    assert_eq!(cmp.peak_after, None, "no peak after merging");
    assert!(cmp.isolated_after > 0, "roots with no other relateds end up isolated");
    budget(start, Duration::from_secs(10), "criterion 7");
    println!(
        "criterion 7 PASS: peak [{}, {}] contains 54 before, none after, {:?}",
        before.k_min,
        before.k_max,
        start.elapsed()
    );
}

#[test]
fn criterion_08_coefficient_throughput_on_a_large_sparse_graph() {
    let start = Instant::now();
    let g = gnm(0xBEEF, 100_000, 500_000);
    let built = start.elapsed();

    let t0 = Instant::now();
    let s = s_graph(&g);
    let s_time = t0.elapsed();
    let t1 = Instant::now();
    let c = c_graph(&g);
    let c_time = t1.elapsed();

    assert!(s.is_finite() && s >= 0.0);
    assert!(c.is_finite() && c >= 0.0);
    budget(start, Duration::from_secs(600), "criterion 8");
    println!(
        "criterion 8 PASS: N=1e5 L=5e5 built in {built:?}; s(G)={s:.6} in {s_time:?} \
         ({:.0} links/ms), c(G)={c:.6} in {c_time:?} ({:.0} links/ms)",
        500_000.0 / s_time.as_secs_f64() / 1000.0,
        500_000.0 / c_time.as_secs_f64() / 1000.0,
    );
}
