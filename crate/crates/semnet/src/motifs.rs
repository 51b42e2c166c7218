//! Triangle- and quadrangle-based motif coefficients.
//!
//! Similarity is triadic closure: node `i`'s triangle count `T_i` against the
//! wedge budget `t^W_i = d_i (d_i - 1)` and the head budget
//! `t^H_i = sum_{j in N(i)} (d_j - 1)`. Complementarity is quadrangle
//! closure: the chordless quadrangle count `Q_i` against
//! `q^W_i = sum_{j in N(i)} ((d_i - 1)(d_j - 1) - n_ij)` and
//! `q^H_i = sum_{j in N(i)} sum_{k in N(j), k != i} (d_k - 1 - a_ik)`,
//! where `n_ij` counts common neighbors. Every ratio with a zero denominator
//! is defined as 0, and graph-level values are plain means over all nodes.

use rayon::prelude::*;

use crate::degree::sorted_common_count;
use crate::graph::{Graph, NodeId};

/// Per-node and graph-level similarity (triangle) coefficients.
#[derive(Clone, Debug)]
pub struct SimilarityCoefficients {
    /// Triangles through each node.
    pub triangles: Vec<u64>,
    /// Wedge denominators `d_i (d_i - 1)`.
    pub wedge_denom: Vec<u64>,
    /// Head denominators `sum_{j in N(i)} (d_j - 1)`.
    pub head_denom: Vec<u64>,
    pub s_wedge: Vec<f64>,
    pub s_head: Vec<f64>,
    /// Combined coefficient `4 T_i / (t^W_i + t^H_i)`.
    pub s_local: Vec<f64>,
    /// Mean of `s_local` over all nodes.
    pub s_graph: f64,
}

/// Per-node and graph-level complementarity (quadrangle) coefficients.
#[derive(Clone, Debug)]
pub struct ComplementarityCoefficients {
    /// Chordless quadrangles through each node.
    pub quadrangles: Vec<u64>,
    pub wedge_denom: Vec<u64>,
    pub head_denom: Vec<u64>,
    pub c_wedge: Vec<f64>,
    pub c_head: Vec<f64>,
    /// Combined coefficient `4 Q_i / (q^W_i + q^H_i)`.
    pub c_local: Vec<f64>,
    /// Mean of `c_local` over all nodes.
    pub c_graph: f64,
}

fn ratio(num: u64, den: u64) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

fn mean(values: &[f64]) -> f64 {
    if values.is_empty() {
        0.0
    } else {
        values.iter().sum::<f64>() / values.len() as f64
    }
}

/// Head budgets `t^H_i = sum_{j in N(i)} (d_j - 1)` for every node.
fn head_budgets(g: &Graph, degrees: &[u32]) -> Vec<u64> {
    (0..g.node_count() as NodeId)
        .map(|i| {
            g.neighbors(i)
                .iter()
                .map(|&j| degrees[j as usize] as u64 - 1)
                .sum()
        })
        .collect()
}

/// Triangle counts by ordered enumeration: each triangle `i < j < k` is found
/// once at its lowest edge and credited to all three corners. Deliberately a
/// different route than the per-node intersection sums used for clustering,
/// so the two can cross-check each other.
fn triangle_counts(g: &Graph) -> Vec<u64> {
    let n = g.node_count();
    let mut t = vec![0u64; n];
    for i in 0..n as NodeId {
        let ni = g.neighbors(i);
        for &j in ni {
            if j <= i {
                continue;
            }
            let nj = g.neighbors(j);
            // Common neighbors above j close a triangle exactly once.
            let ai = &ni[ni.partition_point(|&x| x <= j)..];
            let aj = &nj[nj.partition_point(|&x| x <= j)..];
            let (mut x, mut y) = (0usize, 0usize);
            while x < ai.len() && y < aj.len() {
                match ai[x].cmp(&aj[y]) {
                    std::cmp::Ordering::Less => x += 1,
                    std::cmp::Ordering::Greater => y += 1,
                    std::cmp::Ordering::Equal => {
                        let k = ai[x];
                        t[i as usize] += 1;
                        t[j as usize] += 1;
                        t[k as usize] += 1;
                        x += 1;
                        y += 1;
                    }
                }
            }
        }
    }
    t
}

pub fn similarity_coefficients(g: &Graph) -> SimilarityCoefficients {
    let n = g.node_count();
    let degrees = g.degrees();
    let triangles = triangle_counts(g);
    let head_denom = head_budgets(g, &degrees);
    let wedge_denom: Vec<u64> = degrees.iter().map(|&d| d as u64 * (d as u64).saturating_sub(1)).collect();
    let mut s_wedge = Vec::with_capacity(n);
    let mut s_head = Vec::with_capacity(n);
    let mut s_local = Vec::with_capacity(n);
    for i in 0..n {
        let t2 = 2 * triangles[i];
        s_wedge.push(ratio(t2, wedge_denom[i]));
        s_head.push(ratio(t2, head_denom[i]));
        s_local.push(ratio(2 * t2, wedge_denom[i] + head_denom[i]));
    }
    let s_graph = mean(&s_local);
    SimilarityCoefficients { triangles, wedge_denom, head_denom, s_wedge, s_head, s_local, s_graph }
}

/// Graph-level similarity coefficient `s(G)`.
pub fn s_graph(g: &Graph) -> f64 {
    similarity_coefficients(g).s_graph
}

/// Per-thread scratch for quadrangle counting. The stamp array marks the
/// current node's neighborhood without ever being cleared: stamps are the
/// node id plus one, unique per node.
struct Scratch {
    stamp: Vec<u32>,
    count: Vec<u32>,
    touched: Vec<NodeId>,
}

impl Scratch {
    fn new(n: usize) -> Scratch {
        Scratch { stamp: vec![0; n], count: vec![0; n], touched: Vec::new() }
    }
}

struct NodeQuad {
    q: u64,
    qw: u64,
    qh: u64,
}

/// Chordless quadrangles through `i` plus both denominators.
///
/// Candidate count: for every antipode `l` outside `N(i) u {i}`, any two of
/// its links into `N(i)` close a quadrangle; pairs that are themselves linked
/// (a chord inside `N(i)`) are subtracted via the triangle edges of `i`.
fn quad_at_node(g: &Graph, degrees: &[u32], head: &[u64], scr: &mut Scratch, i: NodeId) -> NodeQuad {
    let ni = g.neighbors(i);
    let di = degrees[i as usize] as u64;
    let mark = i + 1;
    for &j in ni {
        scr.stamp[j as usize] = mark;
    }
    let (mut qw, mut qh, mut base) = (0u64, 0u64, 0u64);
    for &j in ni {
        let dj = degrees[j as usize] as u64;
        let mut nij = 0u64;
        for &l in g.neighbors(j) {
            if l == i {
                continue;
            }
            if scr.stamp[l as usize] == mark {
                nij += 1;
                continue;
            }
            let c = &mut scr.count[l as usize];
            if *c == 0 {
                scr.touched.push(l);
            }
            *c += 1;
        }
        // Both per-link terms are non-negative: n_ij <= min(d_i, d_j) - 1
        // and every common neighbor contributes at least 1 to head[j].
        qw += (di - 1) * (dj - 1) - nij;
        qh += head[j as usize] - (di - 1) - nij;
    }
    for &l in &scr.touched {
        let c = scr.count[l as usize] as u64;
        base += c * (c - 1) / 2;
        scr.count[l as usize] = 0;
    }
    scr.touched.clear();
    // Chord correction: for each linked pair j < k inside N(i), drop their
    // common antipodes outside N(i) u {i}.
    let mut chords = 0u64;
    for &j in ni {
        for &k in g.neighbors(j) {
            if k <= j || scr.stamp[k as usize] != mark {
                continue;
            }
            let (nj, nk) = (g.neighbors(j), g.neighbors(k));
            let (mut x, mut y) = (0usize, 0usize);
            while x < nj.len() && y < nk.len() {
                match nj[x].cmp(&nk[y]) {
                    std::cmp::Ordering::Less => x += 1,
                    std::cmp::Ordering::Greater => y += 1,
                    std::cmp::Ordering::Equal => {
                        let l = nj[x];
                        if l != i && scr.stamp[l as usize] != mark {
                            chords += 1;
                        }
                        x += 1;
                        y += 1;
                    }
                }
            }
        }
    }
    NodeQuad { q: base - chords, qw, qh }
}

pub fn complementarity_coefficients(g: &Graph) -> ComplementarityCoefficients {
    let n = g.node_count();
    let degrees = g.degrees();
    let head = head_budgets(g, &degrees);
    let per_node: Vec<NodeQuad> = (0..n as NodeId)
        .into_par_iter()
        .map_init(
            || Scratch::new(n),
            |scr, i| quad_at_node(g, &degrees, &head, scr, i),
        )
        .collect();
    let mut quadrangles = Vec::with_capacity(n);
    let mut wedge_denom = Vec::with_capacity(n);
    let mut head_denom = Vec::with_capacity(n);
    let mut c_wedge = Vec::with_capacity(n);
    let mut c_head = Vec::with_capacity(n);
    let mut c_local = Vec::with_capacity(n);
    for r in &per_node {
        let q2 = 2 * r.q;
        quadrangles.push(r.q);
        wedge_denom.push(r.qw);
        head_denom.push(r.qh);
        c_wedge.push(ratio(q2, r.qw));
        c_head.push(ratio(q2, r.qh));
        c_local.push(ratio(2 * q2, r.qw + r.qh));
    }
    let c_graph = mean(&c_local);
    ComplementarityCoefficients {
        quadrangles,
        wedge_denom,
        head_denom,
        c_wedge,
        c_head,
        c_local,
        c_graph,
    }
}

/// Graph-level complementarity coefficient `c(G)`.
pub fn c_graph(g: &Graph) -> f64 {
    complementarity_coefficients(g).c_graph
}

/// Common-neighbor count `n_ij` via sorted merge; exposed for table output.
pub fn common_neighbors(g: &Graph, i: NodeId, j: NodeId) -> u64 {
    sorted_common_count(g.neighbors(i), g.neighbors(j))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn complete(n: u32) -> Graph {
        let mut edges = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                edges.push((i, j));
            }
        }
        Graph::from_numeric_edges(n as usize, edges)
    }

    fn complete_bipartite(a: u32, b: u32) -> Graph {
        let mut edges = Vec::new();
        for i in 0..a {
            for j in 0..b {
                edges.push((i, a + j));
            }
        }
        Graph::from_numeric_edges((a + b) as usize, edges)
    }

    fn cycle(n: u32) -> Graph {
        Graph::from_numeric_edges(n as usize, (0..n).map(|i| (i, (i + 1) % n)))
    }

    #[test]
    fn square_is_pure_complementarity() {
        let g = cycle(4);
        let sim = similarity_coefficients(&g);
        let comp = complementarity_coefficients(&g);
        assert_eq!(sim.triangles, vec![0; 4]);
        assert_eq!(sim.s_graph, 0.0);
        assert_eq!(comp.quadrangles, vec![1; 4]);
        assert_eq!(comp.wedge_denom, vec![2; 4]);
        assert_eq!(comp.head_denom, vec![2; 4]);
        assert_eq!(comp.c_local, vec![1.0; 4]);
        assert_eq!(comp.c_graph, 1.0);
    }

    #[test]
    fn complete_graphs_are_pure_similarity() {
        for n in 3..=8u32 {
            let g = complete(n);
            let sim = similarity_coefficients(&g);
            assert!(sim.s_local.iter().all(|&s| s == 1.0), "K_{n}");
            assert_eq!(sim.s_graph, 1.0);
            let comp = complementarity_coefficients(&g);
            assert_eq!(comp.c_graph, 0.0, "K_{n} has no chordless quadrangles");
        }
    }

    #[test]
    fn complete_bipartite_is_pure_complementarity() {
        for (a, b) in [(2u32, 2u32), (2, 3), (3, 3), (4, 5), (5, 5)] {
            let g = complete_bipartite(a, b);
            let comp = complementarity_coefficients(&g);
            assert!(
                comp.c_local.iter().all(|&c| (c - 1.0).abs() < 1e-12),
                "K_{{{a},{b}}} locals {:?}",
                comp.c_local
            );
            let sim = similarity_coefficients(&g);
            assert_eq!(sim.s_graph, 0.0);
        }
    }

    #[test]
    fn k33_counts_by_hand() {
        let g = complete_bipartite(3, 3);
        let comp = complementarity_coefficients(&g);
        // Each node: 2 antipodes on its own side, C(3,2) neighbor pairs each.
        assert_eq!(comp.quadrangles, vec![6; 6]);
        assert_eq!(comp.wedge_denom, vec![12; 6]);
        assert_eq!(comp.head_denom, vec![12; 6]);
    }

    #[test]
    fn k4_counts_by_hand() {
        let g = complete(4);
        let sim = similarity_coefficients(&g);
        assert_eq!(sim.triangles, vec![3; 4]);
        assert_eq!(sim.wedge_denom, vec![6; 4]);
        assert_eq!(sim.head_denom, vec![6; 4]);
        let comp = complementarity_coefficients(&g);
        assert_eq!(comp.quadrangles, vec![0; 4]);
        assert_eq!(comp.wedge_denom, vec![6; 4], "(d_i-1)(d_j-1) - n_ij = 4 - 2 per link");
        assert_eq!(comp.head_denom, vec![6; 4]);
    }

    #[test]
    fn path_middle_node_has_zero_denominators() {
        let g = Graph::from_numeric_edges(3, [(0, 1), (1, 2)]);
        let comp = complementarity_coefficients(&g);
        assert_eq!(comp.wedge_denom[1], 0);
        assert_eq!(comp.head_denom[1], 0);
        assert_eq!(comp.c_local[1], 0.0, "zero denominator means zero coefficient");
        let sim = similarity_coefficients(&g);
        assert_eq!(sim.s_local[1], 0.0);
    }

    #[test]
    fn five_cycle_has_no_motifs() {
        let g = cycle(5);
        assert_eq!(s_graph(&g), 0.0);
        assert_eq!(c_graph(&g), 0.0);
    }

    #[test]
    fn pendant_triangle_triangle_counts() {
        let g = Graph::from_numeric_edges(4, [(0, 1), (1, 2), (2, 0), (2, 3)]);
        let sim = similarity_coefficients(&g);
        assert_eq!(sim.triangles, vec![1, 1, 1, 0]);
    }

    #[test]
    fn isolated_nodes_contribute_zero() {
        let g = Graph::from_numeric_edges(5, [(0, 1), (1, 2), (2, 0)]);
        let sim = similarity_coefficients(&g);
        assert_eq!(sim.s_local[3], 0.0);
        assert_eq!(sim.s_graph, 3.0 / 5.0);
    }

    #[test]
    fn chord_subtraction_matters() {
        // Square 0-1-2-3 plus chord (1,3): the 4-cycle through the chord is
        // no longer chordless, but 0-1-2-3 quadrangles vanish only where the
        // chord sits inside the neighbor set.
        let g = Graph::from_numeric_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0), (1, 3)]);
        let comp = complementarity_coefficients(&g);
        // Node 0: neighbors {1,3} are linked, and their other common
        // neighbor 2 is outside N(0): candidate pair killed by the chord.
        assert_eq!(comp.quadrangles, vec![0, 0, 0, 0]);
    }
}
