//! Top-k ego-betweenness search with upper-bound pruning.
//!
//! [`base_search`] sweeps the degree total order (equivalently,
//! non-increasing static bound) and stops once the k-th best exact score
//! dominates the next static bound. [`opt_search`] drives the same exact
//! computation from a priority queue of dynamic bounds that tighten as
//! connector information accumulates, re-queueing a vertex instead of
//! scoring it whenever its refreshed bound dropped by more than the
//! gradient ratio θ.

use std::collections::BinaryHeap;

use crate::egoscore::{
    dynamic_bound, ego_bw_cal, enumerate_from, score_from_map, static_bound, ComputeScratch,
    ConnectorMap, DirectSink,
};
use crate::graph::{orient, Graph, Marker, Vertex};
use crate::{Error, Result};

/// Default gradient ratio for [`opt_search`].
pub const DEFAULT_THETA: f64 = 1.05;

/// A top-k answer: exact scores sorted descending (ties toward the smaller
/// original id), plus how many vertices were scored exactly to get it.
#[derive(Debug, Clone)]
pub struct TopKResult {
    pub k: usize,
    /// `(vertex, score)` sorted by score descending.
    pub entries: Vec<(Vertex, f64)>,
    /// Number of exact ego-betweenness computations performed.
    pub exact_computations: usize,
}

impl TopKResult {
    fn from_tracker(tracker: TopTracker, g: &Graph, exact: usize, k: usize) -> TopKResult {
        let mut entries = tracker.entries;
        entries.sort_by(|a, b| {
            b.1.total_cmp(&a.1)
                .then(g.original_id(a.0).cmp(&g.original_id(b.0)))
        });
        TopKResult {
            k,
            entries,
            exact_computations: exact,
        }
    }
}

/// Running top-k set: admits a vertex when below capacity or strictly above
/// the current minimum; among equal minima the larger original id is
/// evicted first, so smaller ids are preferred.
struct TopTracker {
    capacity: usize,
    entries: Vec<(Vertex, f64)>,
}

impl TopTracker {
    fn new(capacity: usize) -> TopTracker {
        TopTracker {
            capacity,
            entries: Vec::with_capacity(capacity),
        }
    }

    fn is_full(&self) -> bool {
        self.entries.len() == self.capacity
    }

    fn min_score(&self) -> f64 {
        self.entries
            .iter()
            .map(|&(_, s)| s)
            .fold(f64::INFINITY, f64::min)
    }

    fn offer(&mut self, g: &Graph, v: Vertex, score: f64) {
        if self.entries.len() < self.capacity {
            self.entries.push((v, score));
            return;
        }
        // evictable slot: lowest score, ties toward the larger original id
        let (slot, &(cur, cur_score)) = self
            .entries
            .iter()
            .enumerate()
            .min_by(|(_, a), (_, b)| {
                a.1.total_cmp(&b.1)
                    .then(g.original_id(b.0).cmp(&g.original_id(a.0)))
            })
            .expect("capacity >= 1");
        let _ = cur;
        if score > cur_score {
            self.entries[slot] = (v, score);
        }
    }
}

/// Max-priority queue of `(vertex, bound)` pairs. A vertex is popped before
/// it can be re-pushed with a tighter bound, so each vertex appears at most
/// once at any time; ties pop in total-order position for determinism.
pub struct BoundQueue {
    heap: BinaryHeap<QueueEntry>,
}

struct QueueEntry {
    bound: f64,
    rank: u32,
    vertex: Vertex,
}

impl PartialEq for QueueEntry {
    fn eq(&self, other: &Self) -> bool {
        self.bound == other.bound && self.rank == other.rank
    }
}
impl Eq for QueueEntry {}
impl PartialOrd for QueueEntry {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for QueueEntry {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.bound
            .total_cmp(&other.bound)
            .then(other.rank.cmp(&self.rank))
    }
}

impl BoundQueue {
    pub fn new() -> BoundQueue {
        BoundQueue {
            heap: BinaryHeap::new(),
        }
    }

    pub fn push(&mut self, vertex: Vertex, rank: u32, bound: f64) {
        self.heap.push(QueueEntry {
            bound,
            rank,
            vertex,
        });
    }

    pub fn pop(&mut self) -> Option<(Vertex, f64)> {
        self.heap.pop().map(|e| (e.vertex, e.bound))
    }

    pub fn is_empty(&self) -> bool {
        self.heap.is_empty()
    }
}

impl Default for BoundQueue {
    fn default() -> Self {
        BoundQueue::new()
    }
}

/// Recorded `(vertex, refreshed dynamic bound)` events from an instrumented
/// [`opt_search`] run, for validating bound safety after the fact.
#[derive(Debug, Default)]
pub struct BoundTrace {
    pub events: Vec<(Vertex, f64)>,
}

impl BoundTrace {
    /// Counts violations of `C_B(v) ≤ ũb ≤ ub̄(v)` and of per-vertex
    /// monotonicity against externally supplied exact scores.
    pub fn violations(&self, g: &Graph, exact: &[f64]) -> usize {
        let mut bad = 0;
        let mut last = vec![f64::INFINITY; g.n()];
        for &(v, ub) in &self.events {
            let vi = v as usize;
            if ub > static_bound(g.degree(v)) + 1e-12 {
                bad += 1;
            }
            if exact[vi] > ub + 1e-9 {
                bad += 1;
            }
            if ub > last[vi] + 1e-12 {
                bad += 1;
            }
            last[vi] = ub;
        }
        bad
    }
}

fn check_k(k: usize) -> Result<()> {
    if k < 1 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    Ok(())
}

/// Top-k search with the static bound: processes vertices along the total
/// order, enumerating each one's remaining triangles and scoring it from
/// its completed map, until the k-th best exact score dominates the next
/// static bound.
pub fn base_search(g: &Graph, k: usize) -> Result<TopKResult> {
    check_k(k)?;
    let og = orient(g);
    let mut maps: Vec<ConnectorMap> = vec![ConnectorMap::new(); g.n()];
    let mut marker = Marker::new(g.n());
    let mut tracker = TopTracker::new(k.min(g.n()));
    let mut exact = 0usize;

    for pos in 0..g.n() as u32 {
        let u = og.order.at(pos);
        if tracker.is_full() && tracker.min_score() >= static_bound(g.degree(u)) {
            break;
        }
        let mut sink = DirectSink {
            maps: &mut maps,
            order: &og.order,
        };
        enumerate_from(g, &og, u, &mut marker, &mut sink);
        // every triangle containing u has now been visited, from u or from
        // an earlier vertex, so S_u is complete
        maps[u as usize].set_complete();
        let score = score_from_map(&maps[u as usize], g.degree(u));
        exact += 1;
        tracker.offer(g, u, score);
    }
    Ok(TopKResult::from_tracker(tracker, g, exact, k))
}

/// Top-k search with the dynamic bound and gradient ratio `theta`.
pub fn opt_search(g: &Graph, k: usize, theta: f64) -> Result<TopKResult> {
    opt_search_traced(g, k, theta, None)
}

/// [`opt_search`] with optional bound instrumentation.
pub fn opt_search_traced(
    g: &Graph,
    k: usize,
    theta: f64,
    mut trace: Option<&mut BoundTrace>,
) -> Result<TopKResult> {
    check_k(k)?;
    if !(theta >= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "theta must be at least 1, got {theta}"
        )));
    }
    let og = orient(g);
    let mut maps: Vec<ConnectorMap> = vec![ConnectorMap::new(); g.n()];
    let mut scratch = ComputeScratch::new(g.n());
    let mut tracker = TopTracker::new(k.min(g.n()));
    let mut queue = BoundQueue::new();
    let mut exact = 0usize;

    for u in 0..g.n() as Vertex {
        queue.push(u, og.order.rank(u), static_bound(g.degree(u)));
    }

    while let Some((v_star, popped_bound)) = queue.pop() {
        let refreshed = dynamic_bound(&maps[v_star as usize], g.degree(v_star));
        if let Some(t) = trace.as_deref_mut() {
            t.events.push((v_star, refreshed));
        }
        if theta * refreshed < popped_bound {
            if !tracker.is_full() || refreshed > tracker.min_score() {
                queue.push(v_star, og.order.rank(v_star), refreshed);
            }
            continue;
        }
        if tracker.is_full() && popped_bound <= tracker.min_score() {
            break;
        }
        let score = ego_bw_cal(g, &og, v_star, &mut scratch, &mut maps)?;
        exact += 1;
        tracker.offer(g, v_star, score);
        scratch.mark_processed(v_star);
    }
    Ok(TopKResult::from_tracker(tracker, g, exact, k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::{demo_graph, er_graph};
    use crate::reference::brute_force_cb;
    use num_traits::ToPrimitive;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn oracle_scores(g: &Graph) -> Vec<f64> {
        (0..g.n() as Vertex)
            .map(|u| brute_force_cb(g, u).0.to_f64().unwrap())
            .collect()
    }

    fn sorted_desc(mut scores: Vec<f64>) -> Vec<f64> {
        scores.sort_by(|a, b| b.total_cmp(a));
        scores
    }

    fn assert_matches_oracle(g: &Graph, result: &TopKResult, k: usize) {
        let oracle = oracle_scores(g);
        let want = &sorted_desc(oracle.clone())[..k.min(g.n())];
        assert_eq!(result.entries.len(), k.min(g.n()));
        for (i, &(_, s)) in result.entries.iter().enumerate() {
            assert!(
                (s - want[i]).abs() < 1e-9,
                "rank {i}: got {s}, oracle {}",
                want[i]
            );
        }
        // vertices with scores strictly above the k-th are forced
        let kth = want[want.len() - 1];
        for u in 0..g.n() as Vertex {
            if oracle[u as usize] > kth + 1e-9 {
                assert!(
                    result.entries.iter().any(|&(v, _)| v == u),
                    "forced vertex {u} missing"
                );
            }
        }
    }

    #[test]
    fn rejects_bad_arguments() {
        let g = demo_graph();
        assert!(base_search(&g, 0).is_err());
        assert!(opt_search(&g, 0, 1.05).is_err());
        assert!(opt_search(&g, 1, 0.9).is_err());
        assert!(opt_search(&g, 1, f64::NAN).is_err());
    }

    #[test]
    fn demo_top1_is_center() {
        let g = demo_graph();
        for result in [
            base_search(&g, 1).unwrap(),
            opt_search(&g, 1, 1.0).unwrap(),
        ] {
            assert_eq!(g.original_id(result.entries[0].0), 3);
            assert!((result.entries[0].1 - 14.0 / 3.0).abs() < 1e-12);
        }
    }

    #[test]
    fn k_at_least_n_yields_full_ranking() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let g = er_graph(24, 0.2, &mut rng);
        let base = base_search(&g, 24).unwrap();
        let opt = opt_search(&g, 40, 1.3).unwrap();
        assert_eq!(base.exact_computations, 24);
        assert_matches_oracle(&g, &base, 24);
        assert_matches_oracle(&g, &opt, 40);
        // identical full rankings
        let bv: Vec<_> = base.entries.iter().map(|&(v, _)| v).collect();
        let ov: Vec<_> = opt.entries.iter().map(|&(v, _)| v).collect();
        assert_eq!(bv, ov);
    }

    #[test]
    fn random_graphs_match_oracle_and_prune() {
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        for &p in &[0.05, 0.2, 0.5] {
            for _ in 0..4 {
                let g = er_graph(40, p, &mut rng);
                for k in [1usize, 5, 20] {
                    let base = base_search(&g, k).unwrap();
                    assert_matches_oracle(&g, &base, k);
                    let mut counts = Vec::new();
                    let mut vertex_sets = Vec::new();
                    for theta in [1.0, 1.05, 1.3] {
                        let opt = opt_search(&g, k, theta).unwrap();
                        assert_matches_oracle(&g, &opt, k);
                        counts.push(opt.exact_computations);
                        let mut vs: Vec<_> =
                            opt.entries.iter().map(|&(v, _)| v).collect();
                        vs.sort_unstable();
                        vertex_sets.push(vs);
                    }
                    assert!(vertex_sets.windows(2).all(|w| w[0] == w[1]));
                    for &c in &counts {
                        assert!(c <= base.exact_computations);
                        assert!(base.exact_computations <= g.n());
                    }
                }
            }
        }
    }

    #[test]
    fn bound_trace_has_no_violations() {
        let mut rng = ChaCha8Rng::seed_from_u64(47);
        for _ in 0..5 {
            let g = er_graph(36, 0.25, &mut rng);
            let exact = oracle_scores(&g);
            let mut trace = BoundTrace::default();
            opt_search_traced(&g, 5, 1.05, Some(&mut trace)).unwrap();
            assert!(!trace.events.is_empty());
            assert_eq!(trace.violations(&g, &exact), 0);
        }
    }
}
