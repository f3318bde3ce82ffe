//! Maintenance under edge insertions and deletions.
//!
//! A single edge update only moves the scores of the two endpoints and
//! their common neighbors. [`local_insert`] / [`local_delete`] keep the
//! whole score array exact by applying closed-form per-pair adjustments
//! read off freshly rebuilt connector maps of the affected neighborhood.
//! [`LazyIndex`] maintains only a top-k answer set, deferring exact
//! recomputation behind degree bounds and staleness flags.
//!
//! For the affected vertices, inserting `(u, v)` can only lower a common
//! neighbor's score (the pair gains a direct edge and new connectors) while
//! the endpoints can move either way; deletion mirrors this. The lazy rules
//! lean on exactly those monotonicity directions.

use std::collections::BinaryHeap;

use crate::egoscore::{static_bound, ConnectorMap};
use crate::graph::{DegreeOrder, Graph, Vertex};
use crate::{Error, Result};

/// Per-vertex exact ego-betweenness scores.
pub type ScoreArray = Vec<f64>;

/// Connector maps of the vertices affected by one edge update, rebuilt
/// complete against the current graph.
pub struct AffectedMaps {
    pub order: DegreeOrder,
    /// `(owner, map)` for the two endpoints followed by each common neighbor.
    pub maps: Vec<(Vertex, ConnectorMap)>,
}

impl AffectedMaps {
    pub fn map_for(&self, owner: Vertex) -> &ConnectorMap {
        &self
            .maps
            .iter()
            .find(|&&(o, _)| o == owner)
            .expect("owner is part of the affected set")
            .1
    }
}

/// Builds a complete connector map for `p` directly from the graph.
fn complete_map_for(g: &Graph, order: &DegreeOrder, p: Vertex) -> ConnectorMap {
    let nbrs = g.neighbors(p);
    let mut map = ConnectorMap::new();
    for (i, &a) in nbrs.iter().enumerate() {
        for &b in &nbrs[i + 1..] {
            let code = order.pair_code(a, b);
            if g.has_edge(a, b) {
                map.mark_edge(code);
            } else {
                let count = nbrs
                    .iter()
                    .filter(|&&w| w != a && w != b && g.has_edge(w, a) && g.has_edge(w, b))
                    .count();
                if count > 0 {
                    map.insert_connectors(code, count as u32);
                }
            }
        }
    }
    map.set_complete();
    map
}

/// Rebuilds the connector maps of `u`, `v`, and their common neighbors so
/// they are consistent with the current graph. The edge `(u, v)` must be
/// present: insertion calls this after inserting, deletion before deleting.
pub fn local_upt_smap(g: &Graph, u: Vertex, v: Vertex) -> Result<AffectedMaps> {
    if !g.has_edge(u, v) {
        return Err(Error::EdgeMissing(u, v));
    }
    let order = DegreeOrder::of(g);
    let mut owners = vec![u, v];
    owners.extend(g.common_neighbors(u, v)?);
    let maps = owners
        .into_iter()
        .map(|p| (p, complete_map_for(g, &order, p)))
        .collect();
    Ok(AffectedMaps { order, maps })
}

/// Connector count of a non-adjacent neighbor pair, read from a map.
fn connectors(map: &ConnectorMap, order: &DegreeOrder, a: Vertex, b: Vertex) -> f64 {
    match map.get(order.pair_code(a, b)) {
        None => 0.0,
        Some(0) => panic!("connector count requested for an adjacent pair"),
        Some(c) => c as f64,
    }
}

/// Endpoint adjustment for an inserted edge `(u, v)`: pairs of common
/// neighbors gained `v` as a connector, and every non-common neighbor now
/// forms a new pair with `v`. Map values are post-insertion.
fn endpoint_insert_delta(
    g: &Graph,
    order: &DegreeOrder,
    su: &ConnectorMap,
    u: Vertex,
    v: Vertex,
    l: &[Vertex],
) -> f64 {
    let mut delta = 0.0;
    for (i, &x) in l.iter().enumerate() {
        for &y in &l[i + 1..] {
            if !g.has_edge(x, y) {
                let s = connectors(su, order, x, y); // includes v, so s >= 1
                delta += 1.0 / (s + 1.0) - 1.0 / s;
            }
        }
    }
    for &x in g.neighbors(u) {
        if x != v && !g.has_edge(x, v) {
            let s = connectors(su, order, v, x);
            delta += 1.0 / (s + 1.0);
        }
    }
    delta
}

/// Common-neighbor adjustment for an inserted edge `(u, v)`: the pair
/// `(u, v)` stops relying on `w`, and pairs through `u` or `v` gained a
/// connector.
fn cn_insert_delta(
    g: &Graph,
    order: &DegreeOrder,
    sw: &ConnectorMap,
    w: Vertex,
    u: Vertex,
    v: Vertex,
    l: &[Vertex],
) -> f64 {
    let s_uv = l.iter().filter(|&&x| g.has_edge(x, w)).count() as f64;
    let mut delta = -1.0 / (s_uv + 1.0);
    for (a, b) in [(u, v), (v, u)] {
        for &x in g.neighbors(w) {
            if x != a && x != b && g.has_edge(x, a) && !g.has_edge(x, b) {
                let s = connectors(sw, order, x, b); // includes a, so s >= 1
                delta += 1.0 / (s + 1.0) - 1.0 / s;
            }
        }
    }
    delta
}

fn endpoint_delete_delta(
    g: &Graph,
    order: &DegreeOrder,
    su: &ConnectorMap,
    u: Vertex,
    v: Vertex,
    l: &[Vertex],
) -> f64 {
    let mut delta = 0.0;
    for (i, &x) in l.iter().enumerate() {
        for &y in &l[i + 1..] {
            if !g.has_edge(x, y) {
                let s = connectors(su, order, x, y); // still includes v
                delta += 1.0 / s - 1.0 / (s + 1.0);
            }
        }
    }
    for &x in g.neighbors(u) {
        if x != v && !g.has_edge(x, v) {
            let s = connectors(su, order, v, x);
            delta -= 1.0 / (s + 1.0);
        }
    }
    delta
}

fn cn_delete_delta(
    g: &Graph,
    order: &DegreeOrder,
    sw: &ConnectorMap,
    w: Vertex,
    u: Vertex,
    v: Vertex,
    l: &[Vertex],
) -> f64 {
    let s_uv = l.iter().filter(|&&x| g.has_edge(x, w)).count() as f64;
    let mut delta = 1.0 / (s_uv + 1.0);
    for (a, b) in [(u, v), (v, u)] {
        for &x in g.neighbors(w) {
            if x != a && x != b && g.has_edge(x, a) && !g.has_edge(x, b) {
                let s = connectors(sw, order, x, b); // still includes a
                delta += 1.0 / s - 1.0 / (s + 1.0);
            }
        }
    }
    delta
}

fn apply_deltas(
    g: &Graph,
    scores: &mut [f64],
    deltas: Vec<(Vertex, f64)>,
) -> Vec<Vertex> {
    let mut changed: Vec<Vertex> = Vec::new();
    for (x, delta) in deltas {
        if delta != 0.0 {
            scores[x as usize] += delta;
            changed.push(x);
        }
    }
    changed.sort_by_key(|&x| g.original_id(x));
    changed
}

/// Inserts `(u, v)` and updates the exact scores of the affected vertices.
/// Returns the vertices whose scores changed, sorted by original id.
pub fn local_insert(
    g: &mut Graph,
    scores: &mut [f64],
    u: Vertex,
    v: Vertex,
) -> Result<Vec<Vertex>> {
    g.insert_edge(u, v)?;
    let affected = local_upt_smap(g, u, v)?;
    let l = g.common_neighbors(u, v)?;
    let order = &affected.order;
    let mut deltas = vec![
        (u, endpoint_insert_delta(g, order, affected.map_for(u), u, v, &l)),
        (v, endpoint_insert_delta(g, order, affected.map_for(v), v, u, &l)),
    ];
    for &w in &l {
        deltas.push((w, cn_insert_delta(g, order, affected.map_for(w), w, u, v, &l)));
    }
    Ok(apply_deltas(g, scores, deltas))
}

/// Deletes `(u, v)` and updates the exact scores of the affected vertices.
/// Connector bookkeeping is captured while the edge still exists.
pub fn local_delete(
    g: &mut Graph,
    scores: &mut [f64],
    u: Vertex,
    v: Vertex,
) -> Result<Vec<Vertex>> {
    let affected = local_upt_smap(g, u, v)?; // errors if the edge is absent
    let l = g.common_neighbors(u, v)?;
    let order = &affected.order;
    let mut deltas = vec![
        (u, endpoint_delete_delta(g, order, affected.map_for(u), u, v, &l)),
        (v, endpoint_delete_delta(g, order, affected.map_for(v), v, u, &l)),
    ];
    for &w in &l {
        deltas.push((w, cn_delete_delta(g, order, affected.map_for(w), w, u, v, &l)));
    }
    g.remove_edge(u, v)?;
    Ok(apply_deltas(g, scores, deltas))
}

/// Exact single-vertex score straight from the graph (the recomputation
/// primitive for lazy maintenance).
pub fn exact_score(g: &Graph, p: Vertex) -> f64 {
    let nbrs = g.neighbors(p);
    let mut score = 0.0;
    for (i, &a) in nbrs.iter().enumerate() {
        for &b in &nbrs[i + 1..] {
            if g.has_edge(a, b) {
                continue;
            }
            let c = nbrs
                .iter()
                .filter(|&&w| w != a && w != b && g.has_edge(w, a) && g.has_edge(w, b))
                .count();
            score += 1.0 / (c as f64 + 1.0);
        }
    }
    score
}

#[derive(Debug)]
struct CandEntry {
    score: f64,
    orig: u64,
    vertex: Vertex,
}

impl PartialEq for CandEntry {
    fn eq(&self, other: &Self) -> bool {
        self.score == other.score && self.orig == other.orig
    }
}
impl Eq for CandEntry {}
impl PartialOrd for CandEntry {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for CandEntry {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.score
            .total_cmp(&other.score)
            .then(other.orig.cmp(&self.orig))
    }
}

/// Lazily maintained top-k answer: per-vertex last-known scores with
/// staleness flags, the current answer set `R`, and a max-priority pool of
/// outside candidates keyed by last-known score (re-keyed on pop).
///
/// Stale flags record scores that may be out of date; bound gates decide
/// when an exact recomputation is unavoidable. After every update call `R`
/// is a valid top-k set of the current graph.
pub struct LazyIndex {
    k: usize,
    scores: Vec<f64>,
    stale: Vec<bool>,
    in_r: Vec<bool>,
    r: Vec<Vertex>,
    cand: BinaryHeap<CandEntry>,
    recomputed: Vec<Vertex>,
    total_recomputes: u64,
}

impl LazyIndex {
    /// Computes all scores once (parallel when `threads > 1`) and seeds the
    /// top-k set.
    pub fn new(g: &Graph, k: usize, threads: usize) -> Result<LazyIndex> {
        if k < 1 {
            return Err(Error::InvalidArgument("k must be at least 1".into()));
        }
        let og = crate::graph::orient(g);
        let scores = crate::parallel::vertex_pebw(g, &og, threads.max(1))?;
        let mut by_score: Vec<Vertex> = (0..g.n() as Vertex).collect();
        by_score.sort_by(|&a, &b| {
            scores[b as usize]
                .total_cmp(&scores[a as usize])
                .then(g.original_id(a).cmp(&g.original_id(b)))
        });
        let take = k.min(g.n());
        let mut idx = LazyIndex {
            k,
            scores,
            stale: vec![false; g.n()],
            in_r: vec![false; g.n()],
            r: by_score[..take].to_vec(),
            cand: BinaryHeap::new(),
            recomputed: Vec::new(),
            total_recomputes: 0,
        };
        for &v in &idx.r {
            idx.in_r[v as usize] = true;
        }
        for &v in &by_score[take..] {
            idx.cand.push(CandEntry {
                score: idx.scores[v as usize],
                orig: g.original_id(v),
                vertex: v,
            });
        }
        Ok(idx)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Current answer set (unordered).
    pub fn answer_set(&self) -> &[Vertex] {
        &self.r
    }

    pub fn is_stale(&self, v: Vertex) -> bool {
        self.stale[v as usize]
    }

    pub fn last_known_score(&self, v: Vertex) -> f64 {
        self.scores[v as usize]
    }

    /// Vertices recomputed exactly during the most recent update call.
    pub fn recomputed_last_op(&self) -> &[Vertex] {
        &self.recomputed
    }

    pub fn total_recomputes(&self) -> u64 {
        self.total_recomputes
    }

    /// Resolves staleness inside `R` and returns the answer rows sorted by
    /// score descending (ties toward smaller original id).
    pub fn snapshot(&mut self, g: &Graph) -> Vec<(Vertex, f64)> {
        let members = self.r.clone();
        for v in members {
            if self.stale[v as usize] {
                self.recompute(g, v);
            }
        }
        let mut rows: Vec<(Vertex, f64)> = self
            .r
            .iter()
            .map(|&v| (v, self.scores[v as usize]))
            .collect();
        rows.sort_by(|a, b| {
            b.1.total_cmp(&a.1)
                .then(g.original_id(a.0).cmp(&g.original_id(b.0)))
        });
        rows
    }

    fn begin_op(&mut self) {
        self.recomputed.clear();
    }

    fn mark_stale(&mut self, v: Vertex) {
        self.stale[v as usize] = true;
    }

    fn recompute(&mut self, g: &Graph, v: Vertex) {
        self.stale[v as usize] = false;
        if g.degree(v) <= 1 {
            // identically zero, no ego network to explore
            self.scores[v as usize] = 0.0;
        } else {
            self.scores[v as usize] = exact_score(g, v);
            self.recomputed.push(v);
            self.total_recomputes += 1;
        }
        if !self.in_r[v as usize] {
            self.cand.push(CandEntry {
                score: self.scores[v as usize],
                orig: g.original_id(v),
                vertex: v,
            });
        }
    }

    /// The evictable member of `R`: lowest fresh score, recomputing flagged
    /// entries before trusting them. `exclude` skips one member (used when
    /// comparing a member against the rest).
    fn resolve_min(&mut self, g: &Graph, exclude: Option<Vertex>) -> Option<(Vertex, f64)> {
        loop {
            let y = self
                .r
                .iter()
                .copied()
                .filter(|&v| Some(v) != exclude)
                .min_by(|&a, &b| {
                    self.scores[a as usize]
                        .total_cmp(&self.scores[b as usize])
                        .then(g.original_id(b).cmp(&g.original_id(a)))
                })?;
            if self.stale[y as usize] {
                self.recompute(g, y);
            } else {
                return Some((y, self.scores[y as usize]));
            }
        }
    }

    /// Best vertex outside `R`. Before trusting the pool, any stale outside
    /// vertex whose static bound clears `threshold` (the current min of
    /// `R`) is recomputed; stored scores can underestimate after deletions,
    /// so the bound, not the stored score, decides who is safe to skip.
    fn best_outside(&mut self, g: &Graph, threshold: f64) -> Option<(Vertex, f64)> {
        for v in 0..g.n() as Vertex {
            if !self.in_r[v as usize]
                && self.stale[v as usize]
                && static_bound(g.degree(v)) > threshold
            {
                self.recompute(g, v);
            }
        }
        loop {
            let top = self.cand.pop()?;
            let v = top.vertex;
            if self.in_r[v as usize] || self.scores[v as usize] != top.score {
                continue; // residue from an earlier state
            }
            if self.stale[v as usize] {
                self.recompute(g, v); // re-keys the pool
                continue;
            }
            self.cand.push(top);
            return Some((v, self.scores[v as usize]));
        }
    }

    fn swap(&mut self, g: &Graph, out: Vertex, into: Vertex) {
        let slot = self.r.iter().position(|&v| v == out).expect("member");
        self.r[slot] = into;
        self.in_r[out as usize] = false;
        self.in_r[into as usize] = true;
        self.cand.push(CandEntry {
            score: self.scores[out as usize],
            orig: g.original_id(out),
            vertex: out,
        });
    }

    /// After member `x` was recomputed: if it fell below the rest of `R`,
    /// promote the best outside candidate when that candidate beats it.
    fn repair(&mut self, g: &Graph, x: Vertex) {
        if self.r.len() >= g.n() {
            return;
        }
        // k = 1 has no "rest": any drop triggers the candidate query
        let min_rest = match self.resolve_min(g, Some(x)) {
            Some((_, s)) => s,
            None => f64::INFINITY,
        };
        if self.scores[x as usize] >= min_rest {
            return;
        }
        let threshold = self.scores[x as usize];
        if let Some((y, sy)) = self.best_outside(g, threshold) {
            if sy > self.scores[x as usize] {
                self.swap(g, x, y);
            }
        }
    }

    /// Endpoint rule, shared by insertion and deletion: members are
    /// recomputed and repaired; outsiders are recomputed only when their
    /// refreshed static bound clears the current minimum of `R`.
    fn endpoint_update(&mut self, g: &Graph, u: Vertex) {
        if self.in_r[u as usize] {
            self.recompute(g, u);
            self.repair(g, u);
            return;
        }
        let (y, min_r) = self.resolve_min(g, None).expect("R is nonempty");
        if static_bound(g.degree(u)) > min_r {
            self.recompute(g, u);
            if self.scores[u as usize] > min_r {
                self.swap(g, y, u);
            }
        } else {
            self.mark_stale(u);
        }
    }
}

/// Inserts `(u, v)` and repairs the lazy top-k index.
///
/// Common neighbors' scores cannot increase under insertion, so members
/// among them are recomputed and repaired while outsiders are merely
/// flagged stale.
pub fn lazy_insert(g: &mut Graph, idx: &mut LazyIndex, u: Vertex, v: Vertex) -> Result<()> {
    g.insert_edge(u, v)?;
    idx.begin_op();
    let l = g.common_neighbors(u, v)?;
    idx.endpoint_update(g, u);
    idx.endpoint_update(g, v);
    for &x in &l {
        if idx.in_r[x as usize] {
            idx.recompute(g, x);
            idx.repair(g, x);
        } else {
            idx.mark_stale(x);
        }
    }
    Ok(())
}

/// Deletes `(u, v)` and repairs the lazy top-k index.
///
/// Common neighbors' scores cannot decrease under deletion, so members
/// among them keep their seat and are only flagged stale; outsiders may
/// have grown into the answer and are bound-gated.
pub fn lazy_delete(g: &mut Graph, idx: &mut LazyIndex, u: Vertex, v: Vertex) -> Result<()> {
    if !g.has_edge(u, v) {
        return Err(Error::EdgeMissing(u, v));
    }
    let l = g.common_neighbors(u, v)?;
    g.remove_edge(u, v)?;
    idx.begin_op();
    idx.endpoint_update(g, u);
    idx.endpoint_update(g, v);
    for &x in &l {
        if idx.in_r[x as usize] {
            idx.mark_stale(x);
        } else {
            let (y, min_r) = idx.resolve_min(g, None).expect("R is nonempty");
            if static_bound(g.degree(x)) > min_r {
                idx.recompute(g, x);
                if idx.scores[x as usize] > min_r {
                    idx.swap(g, y, x);
                }
            } else {
                idx.mark_stale(x);
            }
        }
    }
    Ok(())
}

/// One line of an update stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UpdateOp {
    Insert(u64, u64),
    Delete(u64, u64),
}

/// Parses an update stream: `+ u v` inserts, `- u v` deletes, `#` starts a
/// comment line. Returns `(line number, op)` pairs.
pub fn parse_update_stream(text: &str) -> Result<Vec<(usize, UpdateOp)>> {
    let mut ops = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut tokens = trimmed.split_whitespace();
        let bad = |msg: String| Error::Parse { line: lineno, msg };
        let sign = tokens.next().unwrap();
        let (a, b) = match (tokens.next(), tokens.next(), tokens.next()) {
            (Some(a), Some(b), None) => (a, b),
            _ => return Err(bad(format!("expected '+|- u v', got {trimmed:?}"))),
        };
        let parse = |tok: &str| {
            tok.parse::<u64>()
                .map_err(|_| bad(format!("invalid vertex id {tok:?}")))
        };
        let (a, b) = (parse(a)?, parse(b)?);
        let op = match sign {
            "+" => UpdateOp::Insert(a, b),
            "-" => UpdateOp::Delete(a, b),
            other => return Err(bad(format!("expected '+' or '-', got {other:?}"))),
        };
        ops.push((lineno, op));
    }
    Ok(ops)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::egoscore::score_all;
    use crate::gen::er_graph;
    use crate::graph::orient;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// The minimal insertion fixture: k=0, f=1, j=2, i=3 with edges
    /// k–f, k–j, i–f, i–j; inserting (i, k) moves C_B(k) from 1 to 1/2.
    fn minimal_fixture() -> Graph {
        Graph::from_edges(4, &[(0, 1), (0, 2), (3, 1), (3, 2)])
    }

    fn fresh_scores(g: &Graph) -> Vec<f64> {
        score_all(g, &orient(g))
    }

    #[test]
    fn local_upt_smap_matches_from_scratch_maps() {
        let mut rng = ChaCha8Rng::seed_from_u64(53);
        for _ in 0..10 {
            let g = er_graph(30, 0.25, &mut rng);
            // pick some present edge
            let Some(u) = (0..30u32).find(|&u| g.degree(u) > 0) else {
                continue;
            };
            let v = g.neighbors(u)[0];
            let affected = local_upt_smap(&g, u, v).unwrap();
            let og = orient(&g);
            let mut maps = vec![ConnectorMap::new(); g.n()];
            crate::egoscore::triangle_pass(&g, &og, &mut maps);
            for (owner, local_map) in &affected.maps {
                let reference = &maps[*owner as usize];
                assert_eq!(local_map.len(), reference.len(), "owner {owner}");
                for (code, val) in local_map.sorted_entries() {
                    let (a, b) = affected.order.decode_pair(code);
                    let ref_code = og.order.pair_code(a, b);
                    assert_eq!(reference.get(ref_code), Some(val), "owner {owner}");
                }
            }
        }
    }

    #[test]
    fn local_upt_smap_requires_present_edge() {
        let g = Graph::from_edges(3, &[(0, 1)]);
        assert!(local_upt_smap(&g, 0, 2).is_err());
    }

    #[test]
    fn minimal_fixture_smap_contents() {
        let mut g = minimal_fixture();
        g.insert_edge(3, 0).unwrap(); // insert (i, k)
        let affected = local_upt_smap(&g, 3, 0).unwrap();
        let sk = affected.map_for(0);
        let code = |a, b| affected.order.pair_code(a, b);
        assert_eq!(sk.get(code(1, 3)), Some(0)); // (f, i) adjacent
        assert_eq!(sk.get(code(2, 3)), Some(0)); // (j, i) adjacent
        assert_eq!(sk.get(code(1, 2)), Some(1)); // (f, j) gains connector i
    }

    #[test]
    fn insert_reproduces_half_score() {
        let mut g = minimal_fixture();
        let mut scores = fresh_scores(&g);
        assert_eq!(scores[0], 1.0);
        let changed = local_insert(&mut g, &mut scores, 3, 0).unwrap();
        assert!((scores[0] - 0.5).abs() < 1e-12, "C_B(k) = {}", scores[0]);
        assert!(changed.contains(&0));
        // i gains nothing here: its pair (f, j) now has connector k
        assert!((scores[3] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn insert_between_isolated_vertices_changes_nothing() {
        let mut g = Graph::parse_str("0 1\n1 2\n5 5\n6 6\n").unwrap();
        let mut scores = fresh_scores(&g);
        let before = scores.clone();
        let (a, b) = (g.resolve(5).unwrap(), g.resolve(6).unwrap());
        let changed = local_insert(&mut g, &mut scores, a, b).unwrap();
        assert!(changed.is_empty());
        assert_eq!(scores, before);
    }

    #[test]
    fn delete_only_edge_keeps_zero_scores() {
        let mut g = Graph::from_edges(2, &[(0, 1)]);
        let mut scores = fresh_scores(&g);
        let changed = local_delete(&mut g, &mut scores, 0, 1).unwrap();
        assert!(changed.is_empty());
        assert_eq!(scores, vec![0.0, 0.0]);
        assert!(local_delete(&mut g, &mut scores, 0, 1).is_err());
    }

    fn random_absent_pair(g: &Graph, rng: &mut impl Rng) -> Option<(Vertex, Vertex)> {
        let n = g.n() as u32;
        for _ in 0..200 {
            let u = rng.random_range(0..n);
            let v = rng.random_range(0..n);
            if u != v && !g.has_edge(u, v) {
                return Some((u, v));
            }
        }
        None
    }

    fn random_present_edge(g: &Graph, rng: &mut impl Rng) -> Option<(Vertex, Vertex)> {
        if g.m() == 0 {
            return None;
        }
        for _ in 0..200 {
            let u = rng.random_range(0..g.n() as u32);
            if g.degree(u) > 0 {
                let v = g.neighbors(u)[rng.random_range(0..g.degree(u))];
                return Some((u, v));
            }
        }
        None
    }

    #[test]
    fn random_updates_match_full_recompute() {
        let mut rng = ChaCha8Rng::seed_from_u64(59);
        let mut g = er_graph(28, 0.15, &mut rng);
        let mut scores = fresh_scores(&g);
        for step in 0..200 {
            let insert = rng.random::<f64>() < 0.5;
            let before = scores.clone();
            let (u, v, changed) = if insert {
                match random_absent_pair(&g, &mut rng) {
                    Some((u, v)) => {
                        let ch = local_insert(&mut g, &mut scores, u, v).unwrap();
                        (u, v, ch)
                    }
                    None => continue,
                }
            } else {
                match random_present_edge(&g, &mut rng) {
                    Some((u, v)) => {
                        let ch = local_delete(&mut g, &mut scores, u, v).unwrap();
                        (u, v, ch)
                    }
                    None => continue,
                }
            };
            let reference = fresh_scores(&g);
            let mut allowed: Vec<Vertex> = g.common_neighbors(u, v).unwrap();
            allowed.extend([u, v]);
            for x in 0..g.n() {
                assert!(
                    (scores[x] - reference[x]).abs() < 1e-9,
                    "step {step}, vertex {x}: {} vs {}",
                    scores[x],
                    reference[x]
                );
                // locality: scores outside the affected set never move
                if (before[x] - reference[x]).abs() > 1e-12 {
                    assert!(allowed.contains(&(x as Vertex)), "step {step} vertex {x}");
                }
                // monotone direction for common neighbors
                if allowed.contains(&(x as Vertex)) && x as Vertex != u && x as Vertex != v {
                    if insert {
                        assert!(reference[x] <= before[x] + 1e-12);
                    } else {
                        assert!(reference[x] >= before[x] - 1e-12);
                    }
                }
            }
            let _ = changed;
        }
    }

    #[test]
    fn insert_delete_involution() {
        let mut rng = ChaCha8Rng::seed_from_u64(61);
        let mut g = er_graph(24, 0.2, &mut rng);
        let mut scores = fresh_scores(&g);
        let original = scores.clone();
        for _ in 0..50 {
            let Some((u, v)) = random_absent_pair(&g, &mut rng) else {
                break;
            };
            local_insert(&mut g, &mut scores, u, v).unwrap();
            local_delete(&mut g, &mut scores, u, v).unwrap();
        }
        for x in 0..g.n() {
            assert!((scores[x] - original[x]).abs() < 1e-9);
        }
    }

    fn oracle_topk_multiset(g: &Graph, k: usize) -> Vec<f64> {
        let mut s = fresh_scores(g);
        s.sort_by(|a, b| b.total_cmp(a));
        s.truncate(k.min(g.n()));
        s
    }

    fn assert_valid_topk(g: &Graph, idx: &LazyIndex, context: &str) {
        let mut got: Vec<f64> = idx
            .answer_set()
            .iter()
            .map(|&v| exact_score(g, v))
            .collect();
        got.sort_by(|a, b| b.total_cmp(a));
        let want = oracle_topk_multiset(g, idx.k());
        assert_eq!(got.len(), want.len(), "{context}");
        for (a, b) in got.iter().zip(&want) {
            assert!((a - b).abs() < 1e-9, "{context}: {got:?} vs {want:?}");
        }
    }

    #[test]
    fn lazy_insert_skips_low_bound_endpoints() {
        // hub with six leaves scores 15; a has two pendant neighbors
        let mut g = Graph::from_edges(
            10,
            &[(0, 1), (0, 2), (0, 3), (0, 4), (0, 5), (0, 6), (7, 8), (7, 9)],
        );
        let mut idx = LazyIndex::new(&g, 1, 1).unwrap();
        assert_eq!(idx.answer_set(), &[0]);
        // inserting (7, 1) lifts 7's degree to 3: bound 3 < 15, so no
        // exact recomputation happens and 7 is just flagged
        lazy_insert(&mut g, &mut idx, 7, 1).unwrap();
        assert!(idx.recomputed_last_op().is_empty());
        assert!(idx.is_stale(7));
        assert_eq!(idx.answer_set(), &[0]);
        assert_valid_topk(&g, &idx, "after gated insert");
    }

    #[test]
    fn lazy_insert_between_isolated_with_k_equal_n() {
        let mut g = Graph::parse_str("0 1\n0 2\n1 2\n3 3\n4 4\n").unwrap();
        let mut idx = LazyIndex::new(&g, g.n(), 1).unwrap();
        let (a, b) = (g.resolve(3).unwrap(), g.resolve(4).unwrap());
        lazy_insert(&mut g, &mut idx, a, b).unwrap();
        assert!(idx.recomputed_last_op().is_empty());
        assert_valid_topk(&g, &idx, "k=n isolated insert");
    }

    #[test]
    fn lazy_delete_keeps_common_neighbor_member_without_recompute() {
        // hub 0 scores 15; x=7 is adjacent to p=8, q=9, 10, 11 with only
        // (8,9) adjacent, scoring 5; deleting (8,9) raises x to 6
        let mut g = Graph::from_edges(
            12,
            &[
                (0, 1),
                (0, 2),
                (0, 3),
                (0, 4),
                (0, 5),
                (0, 6),
                (7, 8),
                (7, 9),
                (7, 10),
                (7, 11),
                (8, 9),
            ],
        );
        let mut idx = LazyIndex::new(&g, 2, 1).unwrap();
        let mut r = idx.answer_set().to_vec();
        r.sort_unstable();
        assert_eq!(r, vec![0, 7]);
        lazy_delete(&mut g, &mut idx, 8, 9).unwrap();
        assert!(!idx.recomputed_last_op().contains(&7));
        assert!(idx.is_stale(7));
        let mut r = idx.answer_set().to_vec();
        r.sort_unstable();
        assert_eq!(r, vec![0, 7]);
        assert_valid_topk(&g, &idx, "after member-preserving delete");
    }

    #[test]
    fn lazy_streams_match_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(67);
        for &k in &[1usize, 5, 10] {
            let mut g = er_graph(24, 0.15, &mut rng);
            let mut idx = LazyIndex::new(&g, k, 1).unwrap();
            for step in 0..120 {
                let insert = rng.random::<f64>() < 0.5;
                if insert {
                    if let Some((u, v)) = random_absent_pair(&g, &mut rng) {
                        lazy_insert(&mut g, &mut idx, u, v).unwrap();
                    }
                } else if let Some((u, v)) = random_present_edge(&g, &mut rng) {
                    lazy_delete(&mut g, &mut idx, u, v).unwrap();
                }
                assert_valid_topk(&g, &idx, &format!("k={k} step={step}"));
            }
        }
    }

    #[test]
    fn lazy_snapshot_is_sorted_and_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(71);
        let mut g = er_graph(20, 0.2, &mut rng);
        let mut idx = LazyIndex::new(&g, 5, 1).unwrap();
        for _ in 0..30 {
            if let Some((u, v)) = random_present_edge(&g, &mut rng) {
                lazy_delete(&mut g, &mut idx, u, v).unwrap();
            }
        }
        let rows = idx.snapshot(&g);
        assert!(rows.windows(2).all(|w| w[0].1 >= w[1].1));
        for &(v, s) in &rows {
            assert!((s - exact_score(&g, v)).abs() < 1e-12);
        }
    }

    #[test]
    fn update_stream_parsing() {
        let ops = parse_update_stream("# c\n+ 1 2\n\n- 3 4\n").unwrap();
        assert_eq!(
            ops,
            vec![(2, UpdateOp::Insert(1, 2)), (4, UpdateOp::Delete(3, 4))]
        );
        assert!(parse_update_stream("* 1 2").is_err());
        assert!(parse_update_stream("+ 1").is_err());
        assert!(parse_update_stream("+ 1 x").is_err());
    }
}
