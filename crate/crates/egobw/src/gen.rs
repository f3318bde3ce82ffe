//! Seeded graph generators and the small demo fixture used across tests and
//! examples.

use rand::Rng;

use crate::graph::{Graph, Vertex};

/// Edge list of the 7-vertex demo graph (an ego network around vertex 3):
/// vertex 3 is adjacent to everything, vertex 2 to most, and {0,1} / {4,5,6}
/// form two side clusters. The ego-betweenness of vertex 3 is exactly 14/3.
pub const DEMO_EDGE_LIST: &str =
    "3 0\n3 1\n3 2\n3 4\n3 5\n3 6\n0 1\n0 2\n1 2\n2 4\n2 5\n4 6\n5 6\n";

/// The demo graph, parsed. Original ids equal internal ids.
pub fn demo_graph() -> Graph {
    Graph::parse_str(DEMO_EDGE_LIST).expect("demo fixture parses")
}

/// Erdős–Rényi graph on `n` vertices: each pair is an edge independently
/// with probability `p`. Deterministic given the RNG state.
pub fn er_graph(n: usize, p: f64, rng: &mut impl Rng) -> Graph {
    let mut edges = Vec::new();
    for i in 0..n as Vertex {
        for j in (i + 1)..n as Vertex {
            if rng.random::<f64>() < p {
                edges.push((i, j));
            }
        }
    }
    Graph::from_edges(n, &edges)
}

/// Preferential-attachment graph with a skewed degree distribution: each new
/// vertex attaches to `edges_per_vertex` endpoints sampled proportionally to
/// degree (duplicates redrawn, capped attempts).
pub fn power_law_graph(n: usize, edges_per_vertex: usize, rng: &mut impl Rng) -> Graph {
    assert!(n >= 2 && edges_per_vertex >= 1);
    let mut edges: Vec<(Vertex, Vertex)> = Vec::new();
    // endpoint pool: every edge contributes both endpoints, so sampling the
    // pool is degree-proportional
    let mut pool: Vec<Vertex> = vec![0];
    for v in 1..n as Vertex {
        let want = edges_per_vertex.min(v as usize);
        let mut picked: Vec<Vertex> = Vec::with_capacity(want);
        let mut attempts = 0;
        while picked.len() < want && attempts < 50 * want {
            attempts += 1;
            let t = pool[rng.random_range(0..pool.len())];
            if t != v && !picked.contains(&t) {
                picked.push(t);
            }
        }
        for &t in &picked {
            edges.push((v, t));
            pool.push(v);
            pool.push(t);
        }
        if picked.is_empty() {
            pool.push(v);
        }
    }
    Graph::from_edges(n, &edges)
}
