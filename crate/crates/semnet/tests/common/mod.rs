//! Brute-force oracles and graph generators shared by the integration
//! suites. Everything here is written from the definitions — literal sums
//! over an adjacency matrix, plain BFS — on purpose, so the optimized
//! kernels in the library have something independent to disagree with.

#![allow(dead_code)]

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use semnet::graph::{Graph, NodeId};

pub fn adjacency(g: &Graph) -> Vec<Vec<bool>> {
    let n = g.node_count();
    let mut a = vec![vec![false; n]; n];
    for (u, v) in g.links() {
        a[u as usize][v as usize] = true;
        a[v as usize][u as usize] = true;
    }
    a
}

pub struct MotifOracle {
    pub triangles: Vec<u64>,
    pub t_wedge: Vec<u64>,
    pub t_head: Vec<u64>,
    pub quadrangles: Vec<u64>,
    pub q_wedge: Vec<u64>,
    pub q_head: Vec<u64>,
    pub s_local: Vec<f64>,
    pub c_local: Vec<f64>,
    pub s_graph: f64,
    pub c_graph: f64,
}

fn ratio(num: u64, den: u64) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

/// Motif counts and coefficients straight from the defining sums.
///
/// Triangles: `2 T_i = sum_{j,k} a_ij a_ik a_jk` over ordered pairs.
/// Quadrangles: `2 Q_i = sum_{j != i} a_ij sum_{k != i,j} a_ik (1 - a_jk)
/// sum_{l != i,j,k} a_kl a_jl (1 - a_il)` — ordered (j, k), so the sum
/// counts each chordless quadrangle through `i` twice.
/// Denominators: `t^W_i = d_i (d_i - 1)`, `t^H_i = sum_j a_ij (d_j - 1)`,
/// `q^W_i = sum_j a_ij [(d_i - 1)(d_j - 1) - n_ij]`,
/// `q^H_i = sum_{j != i} a_ij sum_{k != i,j} a_jk (d_k - 1 - a_ik)`.
pub fn motif_oracle(g: &Graph) -> MotifOracle {
    let n = g.node_count();
    let a = adjacency(g);
    let d: Vec<u64> = g.degrees().iter().map(|&x| x as u64).collect();
    let mut out = MotifOracle {
        triangles: Vec::with_capacity(n),
        t_wedge: Vec::with_capacity(n),
        t_head: Vec::with_capacity(n),
        quadrangles: Vec::with_capacity(n),
        q_wedge: Vec::with_capacity(n),
        q_head: Vec::with_capacity(n),
        s_local: Vec::with_capacity(n),
        c_local: Vec::with_capacity(n),
        s_graph: 0.0,
        c_graph: 0.0,
    };
    for i in 0..n {
        let mut t2 = 0u64;
        for j in 0..n {
            for k in 0..n {
                if a[i][j] && a[i][k] && a[j][k] {
                    t2 += 1;
                }
            }
        }
        let tw = d[i] * d[i].saturating_sub(1);
        let th: u64 = (0..n).filter(|&j| a[i][j]).map(|j| d[j] - 1).sum();

        let mut q2 = 0u64;
        for j in 0..n {
            if j == i || !a[i][j] {
                continue;
            }
            for k in 0..n {
                if k == i || k == j || !a[i][k] || a[j][k] {
                    continue;
                }
                for l in 0..n {
                    if l == i || l == j || l == k {
                        continue;
                    }
                    if a[k][l] && a[j][l] && !a[i][l] {
                        q2 += 1;
                    }
                }
            }
        }
        let mut qw = 0u64;
        let mut qh = 0u64;
        for j in 0..n {
            if !a[i][j] {
                continue;
            }
            let nij = (0..n).filter(|&k| a[i][k] && a[j][k]).count() as u64;
            qw += (d[i] - 1) * (d[j] - 1) - nij;
            for k in 0..n {
                if k == i || k == j || !a[j][k] {
                    continue;
                }
                qh += d[k] - 1 - u64::from(a[i][k]);
            }
        }

        debug_assert_eq!(t2 % 2, 0);
        debug_assert_eq!(q2 % 2, 0);
        out.triangles.push(t2 / 2);
        out.t_wedge.push(tw);
        out.t_head.push(th);
        out.quadrangles.push(q2 / 2);
        out.q_wedge.push(qw);
        out.q_head.push(qh);
        out.s_local.push(ratio(2 * t2, tw + th));
        out.c_local.push(ratio(2 * q2, qw + qh));
    }
    if n > 0 {
        out.s_graph = out.s_local.iter().sum::<f64>() / n as f64;
        out.c_graph = out.c_local.iter().sum::<f64>() / n as f64;
    }
    out
}

/// Component sizes, largest first, by plain BFS over an adjacency matrix.
pub fn bfs_component_sizes(g: &Graph) -> Vec<usize> {
    let n = g.node_count();
    let mut seen = vec![false; n];
    let mut sizes = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut queue = vec![start as NodeId];
        let mut size = 0usize;
        while let Some(u) = queue.pop() {
            size += 1;
            for &v in g.neighbors(u) {
                if !seen[v as usize] {
                    seen[v as usize] = true;
                    queue.push(v);
                }
            }
        }
        sizes.push(size);
    }
    sizes.sort_unstable_by(|a, b| b.cmp(a));
    sizes
}

/// Erdős–Rényi draw over `n` nodes with link probability `p`.
pub fn gnp(rng: &mut impl Rng, n: u32, p: f64) -> Graph {
    let mut edges = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if rng.random::<f64>() < p {
                edges.push((i, j));
            }
        }
    }
    Graph::from_numeric_edges(n as usize, edges)
}

/// Uniform random graph with at most `max_n` nodes and a random density.
pub fn random_small(rng: &mut impl Rng, max_n: u32) -> Graph {
    let n = rng.random_range(1..=max_n);
    let p = rng.random::<f64>();
    gnp(rng, n, p)
}

/// Every labeled graph on exactly `n` nodes, one per edge bitmask.
pub fn all_graphs_on(n: u32) -> impl Iterator<Item = Graph> {
    let pairs: Vec<(u32, u32)> =
        (0..n).flat_map(|i| ((i + 1)..n).map(move |j| (i, j))).collect();
    let count = 1u64 << pairs.len();
    (0..count).map(move |mask| {
        let edges: Vec<(u32, u32)> = pairs
            .iter()
            .enumerate()
            .filter(|&(b, _)| mask >> b & 1 == 1)
            .map(|(_, &e)| e)
            .collect();
        Graph::from_numeric_edges(n as usize, edges)
    })
}

/// Uniform G(n, m): exactly `m` distinct links over `n` nodes.
pub fn gnm(seed: u64, n: u32, m: usize) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = std::collections::HashSet::with_capacity(m * 2);
    let mut edges = Vec::with_capacity(m);
    while edges.len() < m {
        let i = rng.random_range(0..n);
        let j = rng.random_range(0..n);
        if i == j {
            continue;
        }
        let key = (i.min(j), i.max(j));
        if seen.insert(key) {
            edges.push(key);
        }
    }
    Graph::from_numeric_edges(n as usize, edges)
}

/// Preferential-attachment graph: a seed clique on `m + 1` nodes, then each
/// new node links to `m` distinct targets drawn proportionally to degree.
/// Always connected, always graphical, degree spread is heavy-tailed.
pub fn preferential_attachment(seed: u64, n: u32, m: u32) -> Graph {
    assert!(n > m);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges: Vec<(u32, u32)> = Vec::new();
    // Endpoint pool: each node appears once per unit of degree.
    let mut pool: Vec<u32> = Vec::new();
    for i in 0..=m {
        for j in (i + 1)..=m {
            edges.push((i, j));
            pool.push(i);
            pool.push(j);
        }
    }
    for v in (m + 1)..n {
        let mut targets = std::collections::HashSet::new();
        while (targets.len() as u32) < m {
            targets.insert(pool[rng.random_range(0..pool.len())]);
        }
        for &t in &targets {
            edges.push((t, v));
            pool.push(t);
            pool.push(v);
        }
    }
    Graph::from_numeric_edges(n as usize, edges)
}
