//! Connector-count bookkeeping and exact ego-betweenness scoring.
//!
//! For a vertex `p`, every pair of its neighbors falls into one of three
//! classes: adjacent pairs, pairs linked through `p` and some other common
//! neighbors ("connectors"), and pairs linked solely through `p`. The map
//! `S_p` records the first class with value 0 and the second with the
//! connector count; sole-connector pairs stay absent. The exact score is
//! then
//!
//! ```text
//! C_B(p) = d(d-1)/2 - #entries + Σ_{val>0} 1/(val+1)
//! ```
//!
//! and the same expression over a partially filled map is a valid upper
//! bound that tightens monotonically as entries accumulate.
//!
//! Connector counts are accumulated by triangle enumeration. A "diamond" (a
//! non-adjacent pair {a,b} plus an adjacent pair {p,c} of common neighbors)
//! is discovered once per triangle that contains it; the bookkeeping here
//! guarantees each diamond contributes exactly once per affected map,
//! whether the maps are filled by the bulk [`triangle_pass`] or vertex by
//! vertex through [`ego_bw_cal`].

use std::collections::HashMap;

use crate::graph::{DegreeOrder, Graph, Marker, OrderedGraph, Vertex};
use crate::{Error, Result};

/// Fill state of a [`ConnectorMap`]. Bounds may be read off a `Partial`
/// map; exact scores require `Complete`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MapState {
    Empty,
    Partial,
    Complete,
}

/// Per-vertex map from neighbor pairs (packed via [`DegreeOrder::pair_code`])
/// to connector counts. Value 0 marks an adjacent pair; value `c > 0` means
/// `c` identified connectors besides the owner; absence means the owner is
/// the sole connector (once complete).
#[derive(Debug, Clone)]
pub struct ConnectorMap {
    entries: HashMap<u64, u32>,
    state: MapState,
}

impl Default for ConnectorMap {
    fn default() -> Self {
        ConnectorMap::new()
    }
}

impl ConnectorMap {
    pub fn new() -> ConnectorMap {
        ConnectorMap {
            entries: HashMap::new(),
            state: MapState::Empty,
        }
    }

    pub fn state(&self) -> MapState {
        self.state
    }

    pub fn is_complete(&self) -> bool {
        self.state == MapState::Complete
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Number of identified adjacent pairs (`val == 0`).
    pub fn identified_edges(&self) -> usize {
        self.entries.values().filter(|&&v| v == 0).count()
    }

    /// Number of identified connector pairs (`val > 0`).
    pub fn identified_pairs(&self) -> usize {
        self.entries.values().filter(|&&v| v > 0).count()
    }

    pub fn get(&self, code: u64) -> Option<u32> {
        self.entries.get(&code).copied()
    }

    /// Entries in ascending pair-code order (the canonical summation order).
    pub fn sorted_entries(&self) -> Vec<(u64, u32)> {
        let mut out: Vec<(u64, u32)> = self.entries.iter().map(|(&k, &v)| (k, v)).collect();
        out.sort_unstable_by_key(|&(k, _)| k);
        out
    }

    fn touch(&mut self) {
        if self.state == MapState::Empty {
            self.state = MapState::Partial;
        }
    }

    /// Records an adjacent pair. A pair that already carries connectors
    /// would violate the val-0-means-edge invariant, so that is asserted,
    /// not repaired.
    pub(crate) fn mark_edge(&mut self, code: u64) {
        self.touch();
        let prev = self.entries.insert(code, 0);
        assert!(
            matches!(prev, None | Some(0)),
            "adjacent pair recorded with a connector count"
        );
    }

    /// Records one more connector for a non-adjacent pair. Incrementing an
    /// identified edge is illegal; the guard lives here so no call site can
    /// corrupt a val-0 entry.
    pub(crate) fn record_connector(&mut self, code: u64) {
        self.touch();
        match self.entries.entry(code) {
            std::collections::hash_map::Entry::Occupied(mut e) => {
                assert!(*e.get() != 0, "connector increment on an identified edge");
                *e.get_mut() += 1;
            }
            std::collections::hash_map::Entry::Vacant(e) => {
                e.insert(1);
            }
        }
    }

    /// Inserts a fully counted connector pair at once (used when a map is
    /// rebuilt from scratch rather than accumulated).
    pub(crate) fn insert_connectors(&mut self, code: u64, count: u32) {
        assert!(count > 0, "connector pairs carry positive counts");
        self.touch();
        let prev = self.entries.insert(code, count);
        assert!(prev.is_none(), "pair already present");
    }

    pub(crate) fn set_complete(&mut self) {
        self.state = MapState::Complete;
    }
}

/// Static upper bound: the number of neighbor pairs, `d(d-1)/2`.
pub fn static_bound(degree: usize) -> f64 {
    (degree as u64 * (degree as u64 - degree.min(1) as u64) / 2) as f64
}

fn reciprocal_formula(map: &ConnectorMap, degree: usize) -> f64 {
    let mut score = static_bound(degree);
    for (_, val) in map.sorted_entries() {
        score -= 1.0;
        if val != 0 {
            score += 1.0 / (val as f64 + 1.0);
        }
    }
    score
}

/// Dynamic upper bound from a possibly incomplete map: every identified
/// edge subtracts 1, every identified connector pair subtracts its excess
/// over the reciprocal. Equals the exact score once the map is complete,
/// and never increases as information accumulates.
pub fn dynamic_bound(map: &ConnectorMap, degree: usize) -> f64 {
    reciprocal_formula(map, degree)
}

/// Exact ego-betweenness from a complete map, terms summed in canonical
/// pair order so results are identical across algorithms and thread counts.
pub fn score_from_map(map: &ConnectorMap, degree: usize) -> f64 {
    assert!(map.is_complete(), "score_from_map requires a complete map");
    reciprocal_formula(map, degree)
}

/// Summary of the partially identified quantities backing the dynamic
/// bound, as read from a map's current state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundState {
    pub static_ub: f64,
    pub identified_edges: usize,
    pub identified_pairs: usize,
    pub bound: f64,
}

impl BoundState {
    pub fn read(map: &ConnectorMap, degree: usize) -> BoundState {
        BoundState {
            static_ub: static_bound(degree),
            identified_edges: map.identified_edges(),
            identified_pairs: map.identified_pairs(),
            bound: dynamic_bound(map, degree),
        }
    }
}

/// Sink for triangle-visit bookkeeping: the sequential pass applies updates
/// directly, the parallel pass buffers them per owner.
pub(crate) trait MapSink {
    fn edge_entry(&mut self, owner: Vertex, a: Vertex, b: Vertex);
    fn connector(&mut self, owner: Vertex, a: Vertex, b: Vertex);
}

pub(crate) struct DirectSink<'a> {
    pub maps: &'a mut [ConnectorMap],
    pub order: &'a DegreeOrder,
}

impl MapSink for DirectSink<'_> {
    fn edge_entry(&mut self, owner: Vertex, a: Vertex, b: Vertex) {
        self.maps[owner as usize].mark_edge(self.order.pair_code(a, b));
    }

    fn connector(&mut self, owner: Vertex, a: Vertex, b: Vertex) {
        self.maps[owner as usize].record_connector(self.order.pair_code(a, b));
    }
}

/// Processes one triangle `u ≺ v ≺ w`: inserts the three edge entries and
/// records every diamond whose connector edge lies in this triangle.
///
/// A diamond (pair {a,b}; connector edge {p,c}) is seen from both of its
/// triangles, once with `a` in the triangle and `b` discovered by the scan
/// and once the other way around; recording only when the in-triangle pair
/// endpoint precedes the discovered one makes the two visits record it
/// exactly once, with both owner updates (`S_p` and `S_c`) applied together.
pub(crate) fn visit_triangle<S: MapSink>(
    g: &Graph,
    order: &DegreeOrder,
    u: Vertex,
    v: Vertex,
    w: Vertex,
    sink: &mut S,
) {
    debug_assert!(order.precedes(u, v) && order.precedes(v, w));
    sink.edge_entry(u, v, w);
    sink.edge_entry(v, u, w);
    sink.edge_entry(w, u, v);

    for &x in g.neighbors(u) {
        if x == v || x == w {
            continue;
        }
        let xv = g.has_edge(x, v);
        let xw = g.has_edge(x, w);
        if xv && !xw && order.precedes(w, x) {
            // pair {x,w}, connector edge {u,v}: owner-u half
            sink.connector(u, x, w);
        } else if xw && !xv && order.precedes(v, x) {
            // pair {x,v}, connector edge {u,w}: both owners
            sink.connector(u, x, v);
            sink.connector(w, x, v);
        }
    }
    for &x in g.neighbors(v) {
        if x == u || x == w {
            continue;
        }
        let xu = g.has_edge(x, u);
        let xw = g.has_edge(x, w);
        if xu && !xw && order.precedes(w, x) {
            // pair {x,w}, connector edge {u,v}: owner-v half
            sink.connector(v, x, w);
        } else if xw && !xu && order.precedes(u, x) {
            // pair {x,u}, connector edge {v,w}: both owners
            sink.connector(v, x, u);
            sink.connector(w, x, u);
        }
    }
}

/// Enumerates every triangle exactly once from its highest-ranked vertex via
/// out-neighbor intersection and fills all connector maps to completion.
/// Returns the triangle count.
pub fn triangle_pass(g: &Graph, og: &OrderedGraph, maps: &mut [ConnectorMap]) -> u64 {
    assert_eq!(maps.len(), g.n());
    assert!(
        maps.iter().all(|m| m.state() == MapState::Empty),
        "triangle_pass requires empty maps"
    );
    let mut marker = Marker::new(g.n());
    let mut triangles = 0u64;
    let mut sink = DirectSink {
        maps,
        order: &og.order,
    };
    for pos in 0..g.n() as u32 {
        let u = og.order.at(pos);
        triangles += enumerate_from(g, og, u, &mut marker, &mut sink);
    }
    for map in sink.maps.iter_mut() {
        map.set_complete();
    }
    triangles
}

/// Enumerates the triangles whose highest-ranked vertex is `u` and feeds
/// them to the sink. Shared by the ordered sweep and the parallel passes.
pub(crate) fn enumerate_from<S: MapSink>(
    g: &Graph,
    og: &OrderedGraph,
    u: Vertex,
    marker: &mut Marker,
    sink: &mut S,
) -> u64 {
    let mut triangles = 0u64;
    for &v in og.out_neighbors(u) {
        marker.set(v);
    }
    for &v in og.out_neighbors(u) {
        for &w in og.out_neighbors(v) {
            if marker.test(w) {
                triangles += 1;
                visit_triangle(g, &og.order, u, v, w, sink);
            }
        }
    }
    marker.clear();
    triangles
}

/// Reusable workspace for [`ego_bw_cal`]: the processed flags, the
/// processed/unprocessed neighbor split, the per-neighbor triangle-partner
/// sets `rd`, and the visit markers.
#[derive(Debug)]
pub struct ComputeScratch {
    processed: Vec<bool>,
    rd: Vec<Vec<Vertex>>,
    vis: Marker,
    dn: Vec<Vertex>,
    en: Vec<Vertex>,
}

impl ComputeScratch {
    pub fn new(n: usize) -> ComputeScratch {
        ComputeScratch {
            processed: vec![false; n],
            rd: vec![Vec::new(); n],
            vis: Marker::new(n),
            dn: Vec::new(),
            en: Vec::new(),
        }
    }

    pub fn is_processed(&self, u: Vertex) -> bool {
        self.processed[u as usize]
    }

    pub fn mark_processed(&mut self, u: Vertex) {
        self.processed[u as usize] = true;
    }
}

/// Computes `C_B(u)` exactly, completing `S_u` and propagating every newly
/// discovered connector into the maps of unprocessed neighbors.
///
/// The maps and scratch must be threaded through a whole search session:
/// `scratch` marks exactly the vertices already computed exactly, and the
/// maps hold what those computations discovered. Any processing order
/// yields the same final scores.
///
/// A diamond's two updates are recorded when the first of its owner and its
/// connector is processed: the already-processed side of the neighborhood
/// is handled from the `rd` sets (complete for processed neighbors), the
/// unprocessed side by fresh triangle enumeration, and connectors that are
/// already processed are skipped because their own run recorded the pair.
pub fn ego_bw_cal(
    g: &Graph,
    og: &OrderedGraph,
    u: Vertex,
    scratch: &mut ComputeScratch,
    maps: &mut [ConnectorMap],
) -> Result<f64> {
    if (u as usize) >= g.n() {
        return Err(Error::InvalidVertex(u));
    }
    assert!(
        !scratch.processed[u as usize],
        "vertex {u} already computed exactly"
    );
    let degree = g.degree(u);
    if degree <= 1 {
        maps[u as usize].set_complete();
        return Ok(0.0);
    }
    let order = &og.order;

    scratch.dn.clear();
    scratch.en.clear();
    for &i in g.neighbors(u) {
        scratch.rd[i as usize].clear();
        if scratch.processed[i as usize] {
            scratch.dn.push(i);
        } else {
            scratch.en.push(i);
        }
    }
    // rebuild rd from the edge entries already in S_u
    for (code, val) in maps[u as usize].sorted_entries() {
        if val == 0 {
            let (a, b) = order.decode_pair(code);
            scratch.rd[a as usize].push(b);
            scratch.rd[b as usize].push(a);
        }
    }

    // processed x processed pairs: connectors come out of the rd sets,
    // restricted to unprocessed ones (processed connectors already
    // contributed when they were computed)
    for ii in 0..scratch.dn.len() {
        let i = scratch.dn[ii];
        for &p in &scratch.rd[i as usize] {
            scratch.vis.set(p);
        }
        for jj in (ii + 1)..scratch.dn.len() {
            let j = scratch.dn[jj];
            let adjacent = scratch.vis.test(j);
            debug_assert_eq!(adjacent, g.has_edge(i, j));
            if adjacent {
                continue;
            }
            let code = order.pair_code(i, j);
            for &p in &scratch.rd[j as usize] {
                if scratch.vis.test(p) && !scratch.processed[p as usize] {
                    maps[u as usize].record_connector(code);
                    maps[p as usize].record_connector(code);
                }
            }
        }
        scratch.vis.clear();
    }

    // unprocessed x unprocessed pairs: enumerate the still-untouched
    // triangles through u and extend each to diamonds via rd, growing rd as
    // triangles are found so each diamond lands exactly once
    for ii in 0..scratch.en.len() {
        let i = scratch.en[ii];
        for jj in (ii + 1)..scratch.en.len() {
            let j = scratch.en[jj];
            if !g.has_edge(i, j) {
                continue;
            }
            maps[u as usize].mark_edge(order.pair_code(i, j));
            maps[i as usize].mark_edge(order.pair_code(u, j));
            maps[j as usize].mark_edge(order.pair_code(u, i));
            for kk in 0..scratch.rd[j as usize].len() {
                let k = scratch.rd[j as usize][kk];
                if k != i && !g.has_edge(i, k) {
                    let code = order.pair_code(i, k);
                    maps[u as usize].record_connector(code);
                    maps[j as usize].record_connector(code);
                }
            }
            for kk in 0..scratch.rd[i as usize].len() {
                let k = scratch.rd[i as usize][kk];
                if k != j && !g.has_edge(j, k) {
                    let code = order.pair_code(j, k);
                    maps[u as usize].record_connector(code);
                    maps[i as usize].record_connector(code);
                }
            }
            scratch.rd[i as usize].push(j);
            scratch.rd[j as usize].push(i);
        }
    }

    maps[u as usize].set_complete();
    Ok(score_from_map(&maps[u as usize], degree))
}

/// Sequential full computation: triangle pass plus a deterministic scoring
/// sweep. The baseline every other full computation is compared against.
pub fn score_all(g: &Graph, og: &OrderedGraph) -> Vec<f64> {
    let mut maps: Vec<ConnectorMap> = vec![ConnectorMap::new(); g.n()];
    triangle_pass(g, og, &mut maps);
    (0..g.n())
        .map(|u| score_from_map(&maps[u], g.degree(u as Vertex)))
        .collect()
}
