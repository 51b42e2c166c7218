//! Property suite: the contracts every module promises, checked against
//! brute-force oracles and algebraic identities on arbitrary small graphs.

mod common;

use proptest::prelude::*;

use common::{bfs_component_sizes, motif_oracle};
use semnet::degree::{degree_density, fit_log_log, log_bin};
use semnet::graph::Graph;
use semnet::inflection::{detect_peak, PeakConfig};
use semnet::ingest::{apply_merge, build_merge_map};
use semnet::motifs::{complementarity_coefficients, similarity_coefficients};
use semnet::rewire::{rewire, RewireConfig};
use semnet::ubcm::calibrate_value;

fn arb_graph(max_n: u32, edge_factor: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(move |n| {
        proptest::collection::vec((0..n, 0..n), 0..=edge_factor * n as usize)
            .prop_map(move |edges| Graph::from_numeric_edges(n as usize, edges))
    })
}

/// No self-loops, no duplicates, rows sorted: what "simple graph in CSR
/// canonical form" means for every constructor and transform.
fn assert_canonical(g: &Graph) {
    for i in 0..g.node_count() as u32 {
        let row = g.neighbors(i);
        for w in row.windows(2) {
            assert!(w[0] < w[1], "row {i} not strictly ascending: {row:?}");
        }
        assert!(!row.contains(&i), "self-loop at {i}");
    }
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1.0)
}

proptest! {
    #[test]
    fn motif_kernels_match_the_literal_sums(g in arb_graph(9, 3)) {
        let oracle = motif_oracle(&g);
        let sim = similarity_coefficients(&g);
        prop_assert_eq!(&sim.triangles, &oracle.triangles);
        prop_assert_eq!(&sim.wedge_denom, &oracle.t_wedge);
        prop_assert_eq!(&sim.head_denom, &oracle.t_head);
        let comp = complementarity_coefficients(&g);
        prop_assert_eq!(&comp.quadrangles, &oracle.quadrangles);
        prop_assert_eq!(&comp.wedge_denom, &oracle.q_wedge);
        prop_assert_eq!(&comp.head_denom, &oracle.q_head);
        for i in 0..g.node_count() {
            prop_assert!(close(sim.s_local[i], oracle.s_local[i]));
            prop_assert!(close(comp.c_local[i], oracle.c_local[i]));
        }
        prop_assert!(close(sim.s_graph, oracle.s_graph));
        prop_assert!(close(comp.c_graph, oracle.c_graph));
    }

    #[test]
    fn degree_sum_is_twice_the_link_count(g in arb_graph(40, 4)) {
        let sum: u64 = g.degrees().iter().map(|&d| d as u64).sum();
        prop_assert_eq!(sum, 2 * g.link_count() as u64);
        assert_canonical(&g);
    }

    #[test]
    fn component_report_matches_bfs(g in arb_graph(40, 2)) {
        let report = g.connected_components();
        prop_assert_eq!(&report.sizes, &bfs_component_sizes(&g));
        let expect = report.sizes[0] as f64 / g.node_count() as f64;
        prop_assert!(close(report.lcc_fraction, expect));
        // The LCC is its own single component of the same size.
        let lcc = g.extract_lcc();
        prop_assert_eq!(lcc.node_count(), report.sizes[0]);
        prop_assert_eq!(lcc.connected_components().sizes.len(), 1);
        assert_canonical(&lcc);
    }

    #[test]
    fn log_binning_conserves_mass(g in arb_graph(60, 4), width in 0.05f64..1.0) {
        let mut density = degree_density(&g);
        density.remove(&0);
        prop_assume!(!density.is_empty());
        let total: f64 = density.values().sum();
        let binned = log_bin(&density, width).unwrap();
        let mass: f64 = binned.mass.iter().sum();
        prop_assert!((mass - total).abs() < 1e-9, "mass {mass} vs density {total}");
        for (b, &m) in binned.mass.iter().enumerate() {
            let width_b = binned.edges[b + 1] - binned.edges[b];
            prop_assert!((binned.heights[b] * width_b - m).abs() <= 1e-9 * m.max(1.0));
        }
    }

    #[test]
    fn rewiring_preserves_degrees_and_simplicity(g in arb_graph(30, 3), seed in any::<u64>()) {
        let cfg = RewireConfig { multiplier: 2, seed, ..RewireConfig::default() };
        let out = rewire(&g, &cfg);
        prop_assert_eq!(out.graph.degrees(), g.degrees());
        assert_canonical(&out.graph);
        let again = rewire(&g, &cfg);
        prop_assert_eq!(again.graph.links(), out.graph.links(), "same seed, same links");
    }

    #[test]
    fn merging_yields_a_simple_smaller_graph(
        n in 2u32..20,
        word_edges in proptest::collection::vec((0u32..20, 0u32..20), 1..40),
        form_edges in proptest::collection::vec((0u32..20, 0u32..20), 0..12),
    ) {
        let label = |i: u32| format!("w{}", i % n);
        let g = semnet::build_graph(word_edges.iter().map(|&(a, b)| (label(a), label(b))));
        let formof = semnet::build_graph(form_edges.iter().map(|&(a, b)| (label(a), label(b))));
        let map = build_merge_map(&formof);
        let merged = apply_merge(&g, &map);
        assert_canonical(&merged);
        prop_assert!(merged.node_count() <= g.node_count());
        prop_assert!(merged.link_count() <= g.link_count());
        if map.is_identity() {
            prop_assert_eq!(merged.node_count(), g.node_count());
            prop_assert_eq!(merged.link_count(), g.link_count());
        }
        // Merging twice changes nothing more.
        let twice = apply_merge(&merged, &map);
        prop_assert_eq!(twice.node_count(), merged.node_count());
        prop_assert_eq!(twice.link_count(), merged.link_count());
    }

    #[test]
    fn peak_detection_ignores_the_density_scale(
        g in arb_graph(80, 5),
        factor in 1e-3f64..1e6,
    ) {
        let mut density = degree_density(&g);
        density.remove(&0);
        prop_assume!(!density.is_empty());
        let binned = log_bin(&density, 0.3).unwrap();
        let Ok(fit) = fit_log_log(&binned, (1.0, f64::INFINITY)) else {
            return Ok(());
        };
        let cfg = PeakConfig::default();
        let base = detect_peak(&binned, &fit, &cfg);

        let scaled_density = density.iter().map(|(&k, &v)| (k, v * factor)).collect();
        let scaled_binned = log_bin(&scaled_density, 0.3).unwrap();
        let scaled_fit = fit_log_log(&scaled_binned, (1.0, f64::INFINITY)).unwrap();
        prop_assert_eq!(detect_peak(&scaled_binned, &scaled_fit, &cfg), base);
    }

    #[test]
    fn calibration_of_a_constant_ensemble_is_zero(
        observed in 0.1f64..10.0,
        r in 1usize..50,
    ) {
        let res = calibrate_value(observed, vec![observed; r]).unwrap();
        prop_assert_eq!(res.calibrated, 0.0);
        prop_assert_eq!(res.dispersion, 0.0);
        prop_assert_eq!(res.excluded, 0);
    }
}
