//! Independent oracles: brute-force ego-betweenness straight from the
//! definition (explicit ego network, exact rationals, BFS cross-check) and
//! exact betweenness for the ego-vs-full comparison.
//!
//! Nothing here shares code with the triangle-enumeration pipeline it
//! validates.

use std::collections::VecDeque;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{ToPrimitive, Zero};

use crate::graph::{Graph, Vertex};
use crate::{Error, Result};

/// Exact rational score with 128-bit numerator/denominator. Connector counts
/// stay below the maximum degree, so denominators stay small.
pub type Rational = Ratio<i128>;

/// The ego network of a center vertex: the subgraph induced by the center
/// and its neighbors.
#[derive(Debug, Clone)]
pub struct EgoNetwork {
    pub center: Vertex,
    /// Sorted members: N(center) ∪ {center}.
    pub members: Vec<Vertex>,
    /// Local adjacency over member positions.
    adj: Vec<Vec<usize>>,
}

impl EgoNetwork {
    pub fn build(g: &Graph, center: Vertex) -> EgoNetwork {
        let mut members: Vec<Vertex> = g.neighbors(center).to_vec();
        members.push(center);
        members.sort_unstable();
        let local = |v: Vertex| members.binary_search(&v).unwrap();
        let mut adj = vec![Vec::new(); members.len()];
        for (i, &u) in members.iter().enumerate() {
            for &v in g.neighbors(u) {
                if let Ok(j) = members.binary_search(&v) {
                    adj[i].push(j);
                }
            }
        }
        let _ = local;
        EgoNetwork {
            center,
            members,
            adj,
        }
    }

    pub fn member_count(&self) -> usize {
        self.members.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    fn local(&self, v: Vertex) -> usize {
        self.members.binary_search(&v).unwrap()
    }

    /// BFS from a member: distances and shortest-path counts inside the ego
    /// network.
    fn bfs(&self, src: usize) -> (Vec<i32>, Vec<u64>) {
        let n = self.members.len();
        let mut dist = vec![-1i32; n];
        let mut sigma = vec![0u64; n];
        dist[src] = 0;
        sigma[src] = 1;
        let mut queue = VecDeque::from([src]);
        while let Some(v) = queue.pop_front() {
            for &w in &self.adj[v] {
                if dist[w] < 0 {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
                if dist[w] == dist[v] + 1 {
                    sigma[w] += sigma[v];
                }
            }
        }
        (dist, sigma)
    }
}

/// Ego-betweenness of `p` evaluated directly from the definition: for every
/// non-adjacent neighbor pair, one over the number of connectors plus one.
pub fn ego_formula_score(g: &Graph, p: Vertex) -> Rational {
    let nbrs = g.neighbors(p);
    // group pairs by connector count: at most d distinct denominators
    let mut count_by_connectors: Vec<u64> = vec![0; nbrs.len() + 1];
    for (i, &a) in nbrs.iter().enumerate() {
        for &b in &nbrs[i + 1..] {
            if g.has_edge(a, b) {
                continue;
            }
            let c = nbrs
                .iter()
                .filter(|&&w| w != a && w != b && g.has_edge(w, a) && g.has_edge(w, b))
                .count();
            count_by_connectors[c] += 1;
        }
    }
    let mut score = Rational::zero();
    for (c, &cnt) in count_by_connectors.iter().enumerate() {
        if cnt > 0 {
            score += Rational::new(cnt as i128, c as i128 + 1);
        }
    }
    score
}

/// Ego-betweenness of `p` by explicit shortest-path counting: BFS inside the
/// ego network from every neighbor, then sum σ_uv(p)/σ_uv over pairs.
pub fn ego_bfs_score(g: &Graph, p: Vertex) -> Rational {
    let ego = EgoNetwork::build(g, p);
    let pl = ego.local(p);
    let (dist_p, sigma_p) = ego.bfs(pl);
    let locals: Vec<usize> = g.neighbors(p).iter().map(|&v| ego.local(v)).collect();
    let mut score = Rational::zero();
    for (i, &u) in locals.iter().enumerate() {
        let (dist_u, sigma_u) = ego.bfs(u);
        for &v in &locals[i + 1..] {
            let through_p = if dist_u[pl] + dist_p[v] == dist_u[v] {
                sigma_u[pl] * sigma_p[v]
            } else {
                0
            };
            if through_p > 0 {
                score += Rational::new(through_p as i128, sigma_u[v] as i128);
            }
        }
    }
    score
}

/// Brute-force ego-betweenness: evaluates the formula route and the BFS
/// route, asserts they agree exactly, and returns the exact rational plus
/// its float rendering.
pub fn brute_force_cb(g: &Graph, p: Vertex) -> (Rational, f64) {
    let formula = ego_formula_score(g, p);
    let bfs = ego_bfs_score(g, p);
    assert_eq!(
        formula, bfs,
        "formula and BFS ego-betweenness disagree for vertex {p}"
    );
    let float = formula.to_f64().expect("score fits in f64");
    (formula, float)
}

fn bfs_counts(g: &Graph, s: Vertex) -> (Vec<i32>, Vec<BigInt>) {
    let n = g.n();
    let mut dist = vec![-1i32; n];
    let mut sigma = vec![BigInt::zero(); n];
    dist[s as usize] = 0;
    sigma[s as usize] = BigInt::from(1);
    let mut queue = VecDeque::from([s]);
    while let Some(v) = queue.pop_front() {
        for &w in g.neighbors(v) {
            if dist[w as usize] < 0 {
                dist[w as usize] = dist[v as usize] + 1;
                queue.push_back(w);
            }
            if dist[w as usize] == dist[v as usize] + 1 {
                let add = sigma[v as usize].clone();
                sigma[w as usize] += add;
            }
        }
    }
    (dist, sigma)
}

/// Exact Brandes betweenness (unordered pairs, unweighted shortest paths).
pub fn brandes_betweenness_exact(g: &Graph) -> Vec<BigRational> {
    let n = g.n();
    let mut bc = vec![BigRational::zero(); n];
    for s in 0..n as Vertex {
        let mut stack: Vec<Vertex> = Vec::new();
        let mut preds: Vec<Vec<Vertex>> = vec![Vec::new(); n];
        let mut dist = vec![-1i32; n];
        let mut sigma = vec![BigInt::zero(); n];
        dist[s as usize] = 0;
        sigma[s as usize] = BigInt::from(1);
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            stack.push(v);
            for &w in g.neighbors(v) {
                if dist[w as usize] < 0 {
                    dist[w as usize] = dist[v as usize] + 1;
                    queue.push_back(w);
                }
                if dist[w as usize] == dist[v as usize] + 1 {
                    let add = sigma[v as usize].clone();
                    sigma[w as usize] += add;
                    preds[w as usize].push(v);
                }
            }
        }
        let mut delta = vec![BigRational::zero(); n];
        while let Some(w) = stack.pop() {
            let dw = delta[w as usize].clone();
            for &v in &preds[w as usize] {
                let ratio = BigRational::new(sigma[v as usize].clone(), sigma[w as usize].clone());
                delta[v as usize] += ratio * (BigRational::from(BigInt::from(1)) + dw.clone());
            }
            if w != s {
                bc[w as usize] += delta[w as usize].clone();
            }
        }
    }
    // every unordered pair was accumulated from both endpoints
    let two = BigRational::from(BigInt::from(2));
    for b in &mut bc {
        *b /= two.clone();
    }
    bc
}

/// Brandes betweenness in floating point (for large inputs where the exact
/// version is too slow).
pub fn brandes_betweenness(g: &Graph) -> Vec<f64> {
    let n = g.n();
    let mut bc = vec![0.0f64; n];
    for s in 0..n as Vertex {
        let mut stack: Vec<Vertex> = Vec::new();
        let mut preds: Vec<Vec<Vertex>> = vec![Vec::new(); n];
        let mut dist = vec![-1i32; n];
        let mut sigma = vec![0.0f64; n];
        dist[s as usize] = 0;
        sigma[s as usize] = 1.0;
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            stack.push(v);
            for &w in g.neighbors(v) {
                if dist[w as usize] < 0 {
                    dist[w as usize] = dist[v as usize] + 1;
                    queue.push_back(w);
                }
                if dist[w as usize] == dist[v as usize] + 1 {
                    sigma[w as usize] += sigma[v as usize];
                    preds[w as usize].push(v);
                }
            }
        }
        let mut delta = vec![0.0f64; n];
        while let Some(w) = stack.pop() {
            for &v in &preds[w as usize] {
                delta[v as usize] += sigma[v as usize] / sigma[w as usize] * (1.0 + delta[w as usize]);
            }
            if w != s {
                bc[w as usize] += delta[w as usize];
            }
        }
    }
    for b in &mut bc {
        *b *= 0.5;
    }
    bc
}

/// Independent all-pairs oracle for Brandes: BFS path counts from every
/// source, then per-pair per-vertex contributions σ_sv·σ_vt/σ_st.
pub fn naive_betweenness_exact(g: &Graph) -> Vec<BigRational> {
    let n = g.n();
    let per_source: Vec<(Vec<i32>, Vec<BigInt>)> =
        (0..n as Vertex).map(|s| bfs_counts(g, s)).collect();
    let mut bc = vec![BigRational::zero(); n];
    for s in 0..n {
        for t in (s + 1)..n {
            let (dist_s, sigma_s) = &per_source[s];
            let (dist_t, sigma_t) = &per_source[t];
            if dist_s[t] < 0 {
                continue;
            }
            for v in 0..n {
                if v == s || v == t || dist_s[v] < 0 || dist_t[v] < 0 {
                    continue;
                }
                if dist_s[v] + dist_t[v] == dist_s[t] {
                    bc[v] += BigRational::new(
                        &sigma_s[v] * &sigma_t[v],
                        sigma_s[t].clone(),
                    );
                }
            }
        }
    }
    bc
}

/// Overlap of the top-k sets of two rankings over the same vertex set,
/// tie-aware: boundary ties are resolved to maximize the overlap, so any
/// valid tie-respecting selection is honored.
pub fn topk_overlap(a: &[f64], b: &[f64], k: usize) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::InvalidArgument(format!(
            "rankings cover different vertex sets ({} vs {})",
            a.len(),
            b.len()
        )));
    }
    let n = a.len();
    if k == 0 || k > n {
        return Err(Error::InvalidArgument(format!(
            "k must be in 1..={n}, got {k}"
        )));
    }

    let split = |scores: &[f64]| -> (Vec<usize>, Vec<usize>, usize) {
        let mut idx: Vec<usize> = (0..n).collect();
        idx.sort_by(|&x, &y| scores[y].total_cmp(&scores[x]).then(x.cmp(&y)));
        let threshold = scores[idx[k - 1]];
        let must: Vec<usize> = idx
            .iter()
            .copied()
            .filter(|&v| scores[v] > threshold)
            .collect();
        let tied: Vec<usize> = (0..n).filter(|&v| scores[v] == threshold).collect();
        let slots = k - must.len();
        (must, tied, slots)
    };
    let (must_a, tie_a, mut slots_a) = split(a);
    let (must_b, tie_b, mut slots_b) = split(b);

    let contains = |set: &[usize], v: usize| set.contains(&v);
    let mut overlap = must_a.iter().filter(|&&v| contains(&must_b, v)).count();
    // fill free slots: single-sided gains first, then shared tie members
    let xa = tie_a
        .iter()
        .filter(|&&v| contains(&must_b, v))
        .count()
        .min(slots_a);
    overlap += xa;
    slots_a -= xa;
    let yb = tie_b
        .iter()
        .filter(|&&v| contains(&must_a, v))
        .count()
        .min(slots_b);
    overlap += yb;
    slots_b -= yb;
    let shared = tie_a
        .iter()
        .filter(|&&v| contains(&tie_b, v))
        .count()
        .min(slots_a)
        .min(slots_b);
    overlap += shared;

    Ok(overlap as f64 / k as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::demo_graph;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn ego_network_membership() {
        let g = demo_graph();
        let d = g.resolve(3).unwrap();
        let ego = EgoNetwork::build(&g, d);
        assert_eq!(ego.member_count(), 7);
        assert_eq!(ego.edge_count(), 13);
    }

    #[test]
    fn demo_center_is_14_thirds() {
        let g = demo_graph();
        let d = g.resolve(3).unwrap();
        let (exact, float) = brute_force_cb(&g, d);
        assert_eq!(exact, Rational::new(14, 3));
        assert!((float - 14.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn clique_centers_score_zero() {
        let mut edges = Vec::new();
        for i in 0..5 {
            for j in (i + 1)..5 {
                edges.push((i, j));
            }
        }
        let g = Graph::from_edges(5, &edges);
        for p in 0..5 {
            assert_eq!(brute_force_cb(&g, p).0, Rational::zero());
        }
    }

    #[test]
    fn star_center_scores_all_pairs() {
        let g = Graph::from_edges(6, &[(0, 1), (0, 2), (0, 3), (0, 4), (0, 5)]);
        assert_eq!(brute_force_cb(&g, 0).0, Rational::new(10, 1)); // C(5,2)
        assert_eq!(brute_force_cb(&g, 1).0, Rational::zero());
    }

    #[test]
    fn formula_and_bfs_agree_on_random_graphs() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let g = crate::gen::er_graph(28, 0.25, &mut rng);
            for p in 0..28 {
                assert_eq!(ego_formula_score(&g, p), ego_bfs_score(&g, p));
            }
        }
    }

    #[test]
    fn brandes_path_and_star() {
        let path = Graph::from_edges(3, &[(0, 1), (1, 2)]);
        let bc = brandes_betweenness(&path);
        assert_eq!(bc, vec![0.0, 1.0, 0.0]);

        let star = Graph::from_edges(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]);
        let bc = brandes_betweenness(&star);
        assert_eq!(bc[0], 6.0); // C(4,2)
        assert!(bc[1..].iter().all(|&x| x == 0.0));
    }

    #[test]
    fn brandes_matches_naive_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for trial in 0..8 {
            let n = 20 + trial * 10;
            let g = crate::gen::er_graph(n, 2.5 / n as f64, &mut rng);
            let brandes = brandes_betweenness_exact(&g);
            let naive = naive_betweenness_exact(&g);
            assert_eq!(brandes, naive, "n={n}");
        }
    }

    #[test]
    fn overlap_identical_and_disjoint() {
        let a = vec![5.0, 4.0, 3.0, 2.0, 1.0, 0.0];
        assert_eq!(topk_overlap(&a, &a, 3).unwrap(), 1.0);
        let b = vec![0.0, 1.0, 2.0, 3.0, 4.0, 5.0];
        assert_eq!(topk_overlap(&a, &b, 3).unwrap(), 0.0);
        assert!(topk_overlap(&a, &b, 7).is_err());
        assert!(topk_overlap(&a, &b, 0).is_err());
    }

    #[test]
    fn overlap_is_tie_aware() {
        // a's top-2 is forced {0} plus one of {1,2}; b's is {0,2}; a valid
        // tie choice for a is {0,2}, so the overlap is 1.0
        let a = vec![5.0, 3.0, 3.0, 1.0];
        let b = vec![5.0, 2.0, 4.0, 1.0];
        assert_eq!(topk_overlap(&a, &b, 2).unwrap(), 1.0);
    }
}
