//! Parallel whole-graph scoring.
//!
//! Phase 1 fills the connector maps by parallel triangle enumeration:
//! [`vertex_pebw`] hands out vertices (each worker enumerates the triangles
//! topped at its vertices), [`edge_pebw`] hands out directed edges of the
//! oriented graph, which spreads the skew of heavy out-neighborhoods across
//! workers. Workers buffer map updates per chunk and apply each owner's
//! batch under one lock acquisition. Phase 2 scores every vertex from its
//! completed map in canonical pair order, so results are bit-identical to
//! the sequential pass for any thread count.

use std::sync::atomic::{AtomicU64, AtomicUsize, Ordering};
use std::sync::Mutex;

use crate::egoscore::{score_from_map, ConnectorMap, MapSink};
use crate::graph::{Graph, Marker, OrderedGraph, Vertex};
use crate::{Error, Result};

const VERTEX_CHUNK: usize = 64;
const EDGE_CHUNK: usize = 1024;

#[derive(Clone, Copy)]
enum Delta {
    Edge,
    Connector,
}

/// Buffers one worker's map updates: `(owner, pair code, kind)`.
struct BufferSink<'a> {
    order: &'a crate::graph::DegreeOrder,
    buf: Vec<(Vertex, u64, Delta)>,
}

impl MapSink for BufferSink<'_> {
    fn edge_entry(&mut self, owner: Vertex, a: Vertex, b: Vertex) {
        self.buf
            .push((owner, self.order.pair_code(a, b), Delta::Edge));
    }

    fn connector(&mut self, owner: Vertex, a: Vertex, b: Vertex) {
        self.buf
            .push((owner, self.order.pair_code(a, b), Delta::Connector));
    }
}

impl BufferSink<'_> {
    /// Groups the buffer by owner and applies each group under a single
    /// lock acquisition.
    fn flush(&mut self, maps: &[Mutex<ConnectorMap>]) {
        self.buf.sort_unstable_by_key(|&(owner, code, _)| (owner, code));
        let mut i = 0;
        while i < self.buf.len() {
            let owner = self.buf[i].0;
            let mut map = maps[owner as usize].lock().unwrap();
            while i < self.buf.len() && self.buf[i].0 == owner {
                let (_, code, delta) = self.buf[i];
                match delta {
                    Delta::Edge => map.mark_edge(code),
                    Delta::Connector => map.record_connector(code),
                }
                i += 1;
            }
        }
        self.buf.clear();
    }
}

enum WorkUnits {
    Vertices,
    Edges(Vec<(Vertex, Vertex)>),
}

fn parallel_fill(
    g: &Graph,
    og: &OrderedGraph,
    threads: usize,
    units: WorkUnits,
) -> (Vec<ConnectorMap>, u64) {
    let maps: Vec<Mutex<ConnectorMap>> = (0..g.n()).map(|_| Mutex::new(ConnectorMap::new())).collect();
    let cursor = AtomicUsize::new(0);
    let triangles = AtomicU64::new(0);

    let (total, chunk) = match &units {
        WorkUnits::Vertices => (g.n(), VERTEX_CHUNK),
        WorkUnits::Edges(edges) => (edges.len(), EDGE_CHUNK),
    };

    std::thread::scope(|scope| {
        for _ in 0..threads {
            scope.spawn(|| {
                let mut sink = BufferSink {
                    order: &og.order,
                    buf: Vec::new(),
                };
                let mut marker = Marker::new(g.n());
                let mut local_triangles = 0u64;
                loop {
                    let start = cursor.fetch_add(chunk, Ordering::Relaxed);
                    if start >= total {
                        break;
                    }
                    let end = (start + chunk).min(total);
                    match &units {
                        WorkUnits::Vertices => {
                            for pos in start..end {
                                let u = og.order.at(pos as u32);
                                local_triangles +=
                                    crate::egoscore::enumerate_from(g, og, u, &mut marker, &mut sink);
                            }
                        }
                        WorkUnits::Edges(edges) => {
                            for &(u, v) in &edges[start..end] {
                                local_triangles += enumerate_edge(g, og, u, v, &mut sink);
                            }
                        }
                    }
                    sink.flush(&maps);
                }
                triangles.fetch_add(local_triangles, Ordering::Relaxed);
            });
        }
    });

    let mut maps: Vec<ConnectorMap> = maps
        .into_iter()
        .map(|m| m.into_inner().unwrap())
        .collect();
    for map in &mut maps {
        map.set_complete();
    }
    (maps, triangles.into_inner())
}

/// Triangles whose top edge is the directed edge `(u, v)`: third vertices
/// are the common out-neighbors of `u` and `v`.
fn enumerate_edge<S: MapSink>(
    g: &Graph,
    og: &OrderedGraph,
    u: Vertex,
    v: Vertex,
    sink: &mut S,
) -> u64 {
    let mut triangles = 0;
    let (mut i, mut j) = (0, 0);
    let (a, b) = (og.out_neighbors(u), og.out_neighbors(v));
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                triangles += 1;
                crate::egoscore::visit_triangle(g, &og.order, u, v, a[i], sink);
                i += 1;
                j += 1;
            }
        }
    }
    triangles
}

fn parallel_score(g: &Graph, threads: usize, maps: &[ConnectorMap]) -> Vec<f64> {
    let cursor = AtomicUsize::new(0);
    let results = Mutex::new(vec![0.0f64; g.n()]);
    std::thread::scope(|scope| {
        for _ in 0..threads {
            scope.spawn(|| {
                let mut local: Vec<(usize, f64)> = Vec::new();
                loop {
                    let start = cursor.fetch_add(VERTEX_CHUNK, Ordering::Relaxed);
                    if start >= g.n() {
                        break;
                    }
                    let end = (start + VERTEX_CHUNK).min(g.n());
                    for u in start..end {
                        local.push((u, score_from_map(&maps[u], g.degree(u as Vertex))));
                    }
                }
                let mut out = results.lock().unwrap();
                for (u, s) in local {
                    out[u] = s;
                }
            });
        }
    });
    results.into_inner().unwrap()
}

fn check_threads(threads: usize) -> Result<()> {
    if threads < 1 {
        return Err(Error::InvalidArgument("threads must be at least 1".into()));
    }
    Ok(())
}

/// All ego-betweennesses, parallel over vertices of the oriented graph.
pub fn vertex_pebw(g: &Graph, og: &OrderedGraph, threads: usize) -> Result<Vec<f64>> {
    Ok(vertex_pebw_stats(g, og, threads)?.0)
}

/// [`vertex_pebw`] plus the number of triangles enumerated.
pub fn vertex_pebw_stats(
    g: &Graph,
    og: &OrderedGraph,
    threads: usize,
) -> Result<(Vec<f64>, u64)> {
    check_threads(threads)?;
    let (maps, triangles) = parallel_fill(g, og, threads, WorkUnits::Vertices);
    Ok((parallel_score(g, threads, &maps), triangles))
}

/// All ego-betweennesses, parallel over directed edges of the oriented
/// graph (balances skewed out-degree distributions).
pub fn edge_pebw(g: &Graph, og: &OrderedGraph, threads: usize) -> Result<Vec<f64>> {
    Ok(edge_pebw_stats(g, og, threads)?.0)
}

/// [`edge_pebw`] plus the number of triangles enumerated.
pub fn edge_pebw_stats(g: &Graph, og: &OrderedGraph, threads: usize) -> Result<(Vec<f64>, u64)> {
    check_threads(threads)?;
    let mut edges: Vec<(Vertex, Vertex)> = Vec::with_capacity(g.m());
    for u in 0..g.n() as Vertex {
        for &v in og.out_neighbors(u) {
            edges.push((u, v));
        }
    }
    let (maps, triangles) = parallel_fill(g, og, threads, WorkUnits::Edges(edges));
    Ok((parallel_score(g, threads, &maps), triangles))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::egoscore::score_all;
    use crate::gen::{demo_graph, er_graph, power_law_graph};
    use crate::graph::orient;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn rejects_zero_threads() {
        let g = demo_graph();
        let og = orient(&g);
        assert!(vertex_pebw(&g, &og, 0).is_err());
        assert!(edge_pebw(&g, &og, 0).is_err());
    }

    #[test]
    fn single_thread_equals_sequential_bitwise() {
        let mut rng = ChaCha8Rng::seed_from_u64(73);
        let g = er_graph(48, 0.25, &mut rng);
        let og = orient(&g);
        let sequential = score_all(&g, &og);
        assert_eq!(vertex_pebw(&g, &og, 1).unwrap(), sequential);
        assert_eq!(edge_pebw(&g, &og, 1).unwrap(), sequential);
    }

    #[test]
    fn demo_center_score_across_threads() {
        let g = demo_graph();
        let og = orient(&g);
        let d = g.resolve(3).unwrap() as usize;
        for threads in [2, 4] {
            let scores = vertex_pebw(&g, &og, threads).unwrap();
            assert!((scores[d] - 14.0 / 3.0).abs() < 1e-12);
            let scores = edge_pebw(&g, &og, threads).unwrap();
            assert!((scores[d] - 14.0 / 3.0).abs() < 1e-12);
        }
    }

    #[test]
    fn star_graph_has_no_triangles_and_matches() {
        let g = crate::graph::Graph::from_edges(9, &[(0, 1), (0, 2), (0, 3), (0, 4), (0, 5), (0, 6), (0, 7), (0, 8)]);
        let og = orient(&g);
        let sequential = score_all(&g, &og);
        let (scores, triangles) = edge_pebw_stats(&g, &og, 4).unwrap();
        assert_eq!(triangles, 0);
        assert_eq!(scores, sequential);
    }

    #[test]
    fn agreement_and_determinism_on_random_graphs() {
        let mut rng = ChaCha8Rng::seed_from_u64(79);
        for g in [
            er_graph(60, 0.2, &mut rng),
            power_law_graph(300, 3, &mut rng),
        ] {
            let og = orient(&g);
            let sequential = score_all(&g, &og);
            let mut maps = vec![ConnectorMap::new(); g.n()];
            let seq_triangles = crate::egoscore::triangle_pass(&g, &og, &mut maps);
            for threads in [1, 2, 4, 8] {
                let (v_scores, v_tri) = vertex_pebw_stats(&g, &og, threads).unwrap();
                let (e_scores, e_tri) = edge_pebw_stats(&g, &og, threads).unwrap();
                assert_eq!(v_scores, sequential, "vertex threads={threads}");
                assert_eq!(e_scores, sequential, "edge threads={threads}");
                assert_eq!(v_tri, seq_triangles);
                assert_eq!(e_tri, seq_triangles);
            }
        }
    }
}
