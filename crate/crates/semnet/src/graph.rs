//! Undirected simple graphs with contiguous node ids and sorted adjacency.
//!
//! Construction canonicalizes arbitrary edge lists: self-loops are dropped,
//! duplicate links (in either orientation) collapse to one, and adjacency rows
//! come out sorted so that common-neighbor queries are linear merges.

use std::collections::HashMap;
use std::io::{self, BufRead, Write};

pub type NodeId = u32;

/// Undirected simple graph in compressed sparse row form.
///
/// Invariants, checked on every build:
/// * no self-loops, no duplicate links;
/// * each adjacency row is strictly increasing;
/// * the adjacency is symmetric, so the degree sum equals `2 * link_count()`.
#[derive(Clone, Debug, PartialEq)]
pub struct Graph {
    /// One label per node, or empty when nodes are anonymous.
    labels: Vec<String>,
    /// CSR row pointers, length `node_count() + 1`.
    offsets: Vec<usize>,
    /// Concatenated adjacency rows.
    adj: Vec<NodeId>,
}

/// Connected-component decomposition of a graph.
#[derive(Clone, Debug)]
pub struct ComponentReport {
    /// Component sizes, largest first.
    pub sizes: Vec<usize>,
    /// Component id of every node; ids follow discovery order over ascending
    /// node ids, so a component's id also identifies its minimum node id.
    pub membership: Vec<u32>,
    /// Component id of the largest component. Ties go to the component with
    /// the lowest minimum node id, which is the one discovered first.
    pub lcc_id: u32,
    /// Nodes of the largest component, ascending.
    pub lcc_nodes: Vec<NodeId>,
    /// `lcc_nodes.len() / node_count`, 0.0 for the empty graph.
    pub lcc_fraction: f64,
}

#[derive(Debug, thiserror::Error)]
pub enum EdgeListError {
    #[error("i/o: {0}")]
    Io(#[from] io::Error),
    #[error("line {line}: expected two non-empty tab-separated labels")]
    Malformed { line: usize },
}

/// Builds a graph from labeled node pairs. Node ids are assigned in order of
/// first appearance; self-loops and duplicate links are removed.
pub fn build_graph<I, S>(pairs: I) -> Graph
where
    I: IntoIterator<Item = (S, S)>,
    S: Into<String>,
{
    let mut labels: Vec<String> = Vec::new();
    let mut ids: HashMap<String, NodeId> = HashMap::new();
    let mut edges: Vec<(NodeId, NodeId)> = Vec::new();
    for (a, b) in pairs {
        let mut intern = |s: String| -> NodeId {
            match ids.get(&s) {
                Some(&id) => id,
                None => {
                    let id = labels.len() as NodeId;
                    ids.insert(s.clone(), id);
                    labels.push(s);
                    id
                }
            }
        };
        let u = intern(a.into());
        let v = intern(b.into());
        edges.push((u, v));
    }
    Graph::from_parts(labels, edges)
}

impl Graph {
    /// Builds a graph over nodes `0..n` from numeric edges; nodes carry no
    /// labels. Self-loops and duplicates are removed; isolated ids survive.
    pub fn from_numeric_edges(n: usize, edges: impl IntoIterator<Item = (NodeId, NodeId)>) -> Graph {
        let mut g = Graph::assemble(n, edges.into_iter().collect());
        g.labels = Vec::new();
        g
    }

    /// Builds a graph with one label per node from numeric edges. The node
    /// count is `labels.len()`; isolated ids survive.
    pub fn from_parts(labels: Vec<String>, edges: Vec<(NodeId, NodeId)>) -> Graph {
        let n = labels.len();
        let mut g = Graph::assemble(n, edges);
        g.labels = labels;
        g
    }

    fn assemble(n: usize, mut edges: Vec<(NodeId, NodeId)>) -> Graph {
        for e in edges.iter_mut() {
            if e.0 > e.1 {
                *e = (e.1, e.0);
            }
            assert!((e.1 as usize) < n, "edge endpoint {} out of range {n}", e.1);
        }
        edges.retain(|&(u, v)| u != v);
        edges.sort_unstable();
        edges.dedup();

        let mut deg = vec![0usize; n];
        for &(u, v) in &edges {
            deg[u as usize] += 1;
            deg[v as usize] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        let mut acc = 0usize;
        offsets.push(0);
        for d in &deg {
            acc += d;
            offsets.push(acc);
        }
        // Scatter both directions. The edge list is sorted by (min, max), so
        // every row receives its smaller neighbors first and in order, then
        // its larger neighbors in order: rows come out sorted for free.
        let mut cursor = offsets.clone();
        let mut adj = vec![0 as NodeId; 2 * edges.len()];
        for &(u, v) in &edges {
            adj[cursor[u as usize]] = v;
            cursor[u as usize] += 1;
        }
        for &(u, v) in &edges {
            adj[cursor[v as usize]] = u;
            cursor[v as usize] += 1;
        }
        // The second scatter appends smaller ids after larger ones, so rows
        // touched by both passes need a sort.
        let g_unsorted = Graph { labels: Vec::new(), offsets, adj };
        let mut g = g_unsorted;
        for i in 0..n {
            let (lo, hi) = (g.offsets[i], g.offsets[i + 1]);
            g.adj[lo..hi].sort_unstable();
        }
        g.check_invariants();
        g
    }

    /// Linear-time invariant check: sorted strict rows, no self-loops, degree
    /// sum consistent with the stored link count.
    fn check_invariants(&self) {
        let n = self.node_count();
        assert_eq!(self.offsets.len(), n + 1);
        assert_eq!(*self.offsets.last().unwrap_or(&0), self.adj.len());
        for i in 0..n {
            let row = self.neighbors(i as NodeId);
            for (a, b) in row.iter().zip(row.iter().skip(1)) {
                assert!(a < b, "row {i} not strictly increasing");
            }
            assert!(!row.contains(&(i as NodeId)), "self-loop at {i}");
        }
        debug_assert!((0..n as NodeId)
            .all(|i| self.neighbors(i).iter().all(|&j| self.is_link(j, i))));
    }

    pub fn node_count(&self) -> usize {
        self.offsets.len() - 1
    }

    /// Number of undirected links.
    pub fn link_count(&self) -> usize {
        self.adj.len() / 2
    }

    pub fn degree(&self, i: NodeId) -> u32 {
        (self.offsets[i as usize + 1] - self.offsets[i as usize]) as u32
    }

    pub fn degrees(&self) -> Vec<u32> {
        (0..self.node_count() as NodeId).map(|i| self.degree(i)).collect()
    }

    pub fn max_degree(&self) -> u32 {
        (0..self.node_count() as NodeId).map(|i| self.degree(i)).max().unwrap_or(0)
    }

    /// Mean degree `2L / N`; 0.0 for the empty graph.
    pub fn mean_degree(&self) -> f64 {
        if self.node_count() == 0 {
            0.0
        } else {
            self.adj.len() as f64 / self.node_count() as f64
        }
    }

    /// Neighbor ids of `i`, strictly increasing.
    pub fn neighbors(&self, i: NodeId) -> &[NodeId] {
        &self.adj[self.offsets[i as usize]..self.offsets[i as usize + 1]]
    }

    pub fn is_link(&self, i: NodeId, j: NodeId) -> bool {
        self.neighbors(i).binary_search(&j).is_ok()
    }

    pub fn has_labels(&self) -> bool {
        !self.labels.is_empty()
    }

    pub fn label(&self, i: NodeId) -> Option<&str> {
        self.labels.get(i as usize).map(|s| s.as_str())
    }

    /// Label table when the graph is labeled.
    pub fn labels(&self) -> Option<&[String]> {
        if self.labels.is_empty() {
            None
        } else {
            Some(&self.labels)
        }
    }

    /// All links as `(u, v)` with `u < v`, ascending.
    pub fn links(&self) -> Vec<(NodeId, NodeId)> {
        let mut out = Vec::with_capacity(self.link_count());
        for i in 0..self.node_count() as NodeId {
            for &j in self.neighbors(i) {
                if i < j {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Decomposes the graph into connected components by breadth-first
    /// search over ascending node ids.
    pub fn connected_components(&self) -> ComponentReport {
        let n = self.node_count();
        let mut membership = vec![u32::MAX; n];
        let mut sizes_by_id: Vec<usize> = Vec::new();
        let mut queue: Vec<NodeId> = Vec::new();
        for start in 0..n as NodeId {
            if membership[start as usize] != u32::MAX {
                continue;
            }
            let comp = sizes_by_id.len() as u32;
            let mut size = 0usize;
            membership[start as usize] = comp;
            queue.push(start);
            while let Some(i) = queue.pop() {
                size += 1;
                for &j in self.neighbors(i) {
                    if membership[j as usize] == u32::MAX {
                        membership[j as usize] = comp;
                        queue.push(j);
                    }
                }
            }
            sizes_by_id.push(size);
        }
        // First maximum wins: discovery order makes that the component with
        // the lowest minimum node id.
        let lcc_id = sizes_by_id
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(&a.0)))
            .map(|(id, _)| id as u32)
            .unwrap_or(0);
        let lcc_nodes: Vec<NodeId> = (0..n as NodeId)
            .filter(|&i| membership[i as usize] == lcc_id)
            .collect();
        let lcc_fraction = if n == 0 { 0.0 } else { lcc_nodes.len() as f64 / n as f64 };
        let mut sizes = sizes_by_id;
        sizes.sort_unstable_by(|a, b| b.cmp(a));
        ComponentReport { sizes, membership, lcc_id, lcc_nodes, lcc_fraction }
    }

    /// Induced subgraph on `nodes` (must be ascending and in range), with ids
    /// relabeled to `0..nodes.len()` preserving relative order.
    pub fn induced_subgraph(&self, nodes: &[NodeId]) -> Graph {
        let mut new_id = HashMap::with_capacity(nodes.len());
        for (k, &i) in nodes.iter().enumerate() {
            new_id.insert(i, k as NodeId);
        }
        let mut edges = Vec::new();
        for &i in nodes {
            let ni = new_id[&i];
            for &j in self.neighbors(i) {
                if i < j {
                    if let Some(&nj) = new_id.get(&j) {
                        edges.push((ni, nj));
                    }
                }
            }
        }
        if self.has_labels() {
            let labels = nodes.iter().map(|&i| self.labels[i as usize].clone()).collect();
            Graph::from_parts(labels, edges)
        } else {
            Graph::from_numeric_edges(nodes.len(), edges)
        }
    }

    /// Largest connected component as its own graph. Idempotent.
    pub fn extract_lcc(&self) -> Graph {
        let report = self.connected_components();
        self.induced_subgraph(&report.lcc_nodes)
    }

    /// Writes one `label<TAB>label` line per link in ascending id order, then
    /// one single-column line per isolated node so the node set round-trips.
    /// Anonymous nodes fall back to their decimal id.
    pub fn write_edge_list(&self, mut w: impl Write) -> io::Result<()> {
        let name = |i: NodeId| self.label(i).map(str::to_owned).unwrap_or_else(|| i.to_string());
        for (u, v) in self.links() {
            writeln!(w, "{}\t{}", name(u), name(v))?;
        }
        for i in 0..self.node_count() as NodeId {
            if self.degree(i) == 0 {
                writeln!(w, "{}", name(i))?;
            }
        }
        Ok(())
    }

    /// Reads an edge list written by [`Graph::write_edge_list`]: two-column
    /// lines are links, single-column lines declare a node without links.
    /// Blank lines are skipped. The result is always labeled, so a written
    /// anonymous graph comes back carrying its old ids as labels.
    pub fn read_edge_list(r: impl BufRead) -> Result<Graph, EdgeListError> {
        let mut ids: HashMap<String, NodeId> = HashMap::new();
        let mut labels: Vec<String> = Vec::new();
        let mut intern = |s: &str, labels: &mut Vec<String>| -> NodeId {
            match ids.get(s) {
                Some(&i) => i,
                None => {
                    let i = labels.len() as NodeId;
                    ids.insert(s.to_owned(), i);
                    labels.push(s.to_owned());
                    i
                }
            }
        };
        let mut edges: Vec<(NodeId, NodeId)> = Vec::new();
        for (idx, line) in r.lines().enumerate() {
            let line = line?;
            if line.is_empty() {
                continue;
            }
            let mut it = line.split('\t');
            match (it.next(), it.next(), it.next()) {
                (Some(a), Some(b), None) if !a.is_empty() && !b.is_empty() => {
                    let u = intern(a, &mut labels);
                    let v = intern(b, &mut labels);
                    edges.push((u, v));
                }
                (Some(a), None, None) if !a.is_empty() => {
                    intern(a, &mut labels);
                }
                _ => return Err(EdgeListError::Malformed { line: idx + 1 }),
            }
        }
        Ok(Graph::from_parts(labels, edges))
    }
}
