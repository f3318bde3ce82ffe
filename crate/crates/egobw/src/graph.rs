//! Undirected simple graphs with dense internal vertex ids, plus the
//! degree-based total order and edge orientation that drive triangle
//! enumeration.
//!
//! Input graphs arrive as edge-list text (one `u v` pair per line, `#`
//! comments). Original ids are arbitrary non-negative 64-bit integers and are
//! remapped to dense `u32` internal ids in order of first appearance.

use std::collections::HashMap;
use std::io::BufRead;

use crate::{Error, Result};

/// Dense internal vertex id.
pub type Vertex = u32;

/// Undirected simple graph with sorted adjacency lists.
///
/// Self-loops and duplicate edges are dropped at load time (with counters);
/// after construction every neighbor list is strictly sorted by internal id
/// and adjacency is symmetric.
#[derive(Debug, Clone)]
pub struct Graph {
    adj: Vec<Vec<Vertex>>,
    orig: Vec<u64>,
    index: HashMap<u64, Vertex>,
    m: usize,
    self_loops_dropped: usize,
    duplicates_dropped: usize,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        // Load counters are a report about the input, not graph state.
        self.adj == other.adj && self.orig == other.orig
    }
}

impl Graph {
    /// Builds a graph over internal ids `0..n` (original id == internal id).
    ///
    /// Intended for generators and tests; self-loops and duplicates in
    /// `edges` are rejected by panic rather than dropped.
    pub fn from_edges(n: usize, edges: &[(Vertex, Vertex)]) -> Graph {
        let mut g = Graph {
            adj: vec![Vec::new(); n],
            orig: (0..n as u64).collect(),
            index: (0..n as u64).map(|i| (i, i as Vertex)).collect(),
            m: 0,
            self_loops_dropped: 0,
            duplicates_dropped: 0,
        };
        for &(u, v) in edges {
            g.insert_edge(u, v)
                .expect("from_edges: invalid or duplicate edge");
        }
        g
    }

    /// Parses edge-list text: two integer tokens per line, `#` starts a
    /// comment line, blank lines are ignored.
    ///
    /// Original ids are remapped densely in order of first appearance.
    /// A line `v v` registers the vertex and drops the self-loop, so
    /// isolated vertices survive a serialization round trip.
    pub fn parse(reader: impl BufRead) -> Result<Graph> {
        let mut adj: Vec<Vec<Vertex>> = Vec::new();
        let mut orig: Vec<u64> = Vec::new();
        let mut index: HashMap<u64, Vertex> = HashMap::new();
        let mut self_loops = 0usize;
        let mut duplicates = 0usize;
        let mut m = 0usize;

        let mut intern = |id: u64, adj: &mut Vec<Vec<Vertex>>, orig: &mut Vec<u64>| -> Vertex {
            *index.entry(id).or_insert_with(|| {
                let v = adj.len() as Vertex;
                adj.push(Vec::new());
                orig.push(id);
                v
            })
        };

        for (lineno, line) in reader.lines().enumerate() {
            let lineno = lineno + 1;
            let line = line.map_err(Error::Io)?;
            let text = line.trim();
            if text.is_empty() || text.starts_with('#') {
                continue;
            }
            let mut tokens = text.split_whitespace();
            let (a, b) = match (tokens.next(), tokens.next(), tokens.next()) {
                (Some(a), Some(b), None) => (a, b),
                _ => {
                    return Err(Error::Parse {
                        line: lineno,
                        msg: format!("expected two integer tokens, got {text:?}"),
                    })
                }
            };
            let parse = |tok: &str| -> Result<u64> {
                tok.parse::<u64>().map_err(|_| Error::Parse {
                    line: lineno,
                    msg: format!("invalid vertex id {tok:?}"),
                })
            };
            let (a, b) = (parse(a)?, parse(b)?);
            let u = intern(a, &mut adj, &mut orig);
            let v = intern(b, &mut adj, &mut orig);
            if u == v {
                self_loops += 1;
                continue;
            }
            if adj[u as usize].binary_search(&v).is_ok() {
                duplicates += 1;
                continue;
            }
            let pos = adj[u as usize].binary_search(&v).unwrap_err();
            adj[u as usize].insert(pos, v);
            let pos = adj[v as usize].binary_search(&u).unwrap_err();
            adj[v as usize].insert(pos, u);
            m += 1;
        }

        if adj.is_empty() {
            return Err(Error::EmptyGraph);
        }
        Ok(Graph {
            adj,
            orig,
            index,
            m,
            self_loops_dropped: self_loops,
            duplicates_dropped: duplicates,
        })
    }

    /// Parses an edge list held in a string.
    pub fn parse_str(text: &str) -> Result<Graph> {
        Graph::parse(text.as_bytes())
    }

    /// Loads an edge-list file.
    pub fn load(path: &std::path::Path) -> Result<Graph> {
        let file = std::fs::File::open(path)?;
        Graph::parse(std::io::BufReader::new(file))
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn degree(&self, u: Vertex) -> usize {
        self.adj[u as usize].len()
    }

    /// Neighbors of `u`, strictly sorted by internal id.
    pub fn neighbors(&self, u: Vertex) -> &[Vertex] {
        &self.adj[u as usize]
    }

    /// Adjacency test by binary search on the sorted neighbor list.
    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        let (a, b) = if self.degree(u) <= self.degree(v) {
            (u, v)
        } else {
            (v, u)
        };
        self.adj[a as usize].binary_search(&b).is_ok()
    }

    pub fn original_id(&self, u: Vertex) -> u64 {
        self.orig[u as usize]
    }

    /// Internal id for an original id, if the vertex exists.
    pub fn resolve(&self, original: u64) -> Option<Vertex> {
        self.index.get(&original).copied()
    }

    pub fn self_loops_dropped(&self) -> usize {
        self.self_loops_dropped
    }

    pub fn duplicates_dropped(&self) -> usize {
        self.duplicates_dropped
    }

    fn check_vertex(&self, u: Vertex) -> Result<()> {
        if (u as usize) < self.n() {
            Ok(())
        } else {
            Err(Error::InvalidVertex(u))
        }
    }

    /// Sorted list of common neighbors of `u` and `v` (works whether or not
    /// `(u, v)` is an edge).
    pub fn common_neighbors(&self, u: Vertex, v: Vertex) -> Result<Vec<Vertex>> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(Error::InvalidArgument(format!(
                "common_neighbors requires distinct vertices, got {u} twice"
            )));
        }
        Ok(intersect_sorted(self.neighbors(u), self.neighbors(v)))
    }

    /// Inserts the undirected edge `(u, v)`.
    pub fn insert_edge(&mut self, u: Vertex, v: Vertex) -> Result<()> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(Error::InvalidArgument(format!("self-loop ({u}, {u})")));
        }
        let pos_v = match self.adj[u as usize].binary_search(&v) {
            Ok(_) => return Err(Error::EdgeExists(u, v)),
            Err(pos) => pos,
        };
        self.adj[u as usize].insert(pos_v, v);
        let pos_u = self.adj[v as usize].binary_search(&u).unwrap_err();
        self.adj[v as usize].insert(pos_u, u);
        self.m += 1;
        Ok(())
    }

    /// Removes the undirected edge `(u, v)`.
    pub fn remove_edge(&mut self, u: Vertex, v: Vertex) -> Result<()> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        let pos_v = match self.adj[u as usize].binary_search(&v) {
            Ok(pos) => pos,
            Err(_) => return Err(Error::EdgeMissing(u, v)),
        };
        self.adj[u as usize].remove(pos_v);
        let pos_u = self.adj[v as usize].binary_search(&u).unwrap();
        self.adj[v as usize].remove(pos_u);
        self.m -= 1;
        Ok(())
    }

    /// Canonical serialization: one line per edge as `min max` over original
    /// ids, lines sorted lexicographically, LF endings. Isolated vertices are
    /// recorded as `v v` lines so reloading reproduces the vertex set.
    pub fn to_canonical_edge_list(&self) -> String {
        let mut lines: Vec<String> = Vec::with_capacity(self.m + 1);
        for u in 0..self.n() as Vertex {
            if self.degree(u) == 0 {
                let o = self.original_id(u);
                lines.push(format!("{o} {o}"));
                continue;
            }
            for &v in self.neighbors(u) {
                if u < v {
                    let (a, b) = (self.original_id(u), self.original_id(v));
                    let (a, b) = if a <= b { (a, b) } else { (b, a) };
                    lines.push(format!("{a} {b}"));
                }
            }
        }
        lines.sort();
        let mut out = lines.join("\n");
        out.push('\n');
        out
    }

    /// True iff `u` precedes `v` in the total order: higher degree first,
    /// ties broken toward the larger original id.
    pub fn precedes(&self, u: Vertex, v: Vertex) -> bool {
        let (du, dv) = (self.degree(u), self.degree(v));
        du > dv || (du == dv && self.original_id(u) > self.original_id(v))
    }
}

/// Two-pointer intersection of strictly sorted slices.
pub fn intersect_sorted(a: &[Vertex], b: &[Vertex]) -> Vec<Vertex> {
    let mut out = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

/// The total order on vertices: decreasing degree, ties broken toward the
/// larger original id. Determines the orientation and the canonical form of
/// neighbor-pair keys.
#[derive(Debug, Clone)]
pub struct DegreeOrder {
    rank: Vec<u32>,
    by_rank: Vec<Vertex>,
}

impl DegreeOrder {
    pub fn of(g: &Graph) -> DegreeOrder {
        let mut by_rank: Vec<Vertex> = (0..g.n() as Vertex).collect();
        by_rank.sort_by(|&a, &b| {
            g.degree(b)
                .cmp(&g.degree(a))
                .then(g.original_id(b).cmp(&g.original_id(a)))
        });
        let mut rank = vec![0u32; g.n()];
        for (pos, &v) in by_rank.iter().enumerate() {
            rank[v as usize] = pos as u32;
        }
        DegreeOrder { rank, by_rank }
    }

    pub fn n(&self) -> usize {
        self.rank.len()
    }

    /// Position of `u` in the total order (0 = first).
    pub fn rank(&self, u: Vertex) -> u32 {
        self.rank[u as usize]
    }

    /// Vertex at a given position.
    pub fn at(&self, pos: u32) -> Vertex {
        self.by_rank[pos as usize]
    }

    pub fn precedes(&self, u: Vertex, v: Vertex) -> bool {
        self.rank[u as usize] < self.rank[v as usize]
    }

    /// Packed 64-bit key for the unordered pair `{a, b}`: the earlier vertex
    /// in the order contributes the high half. Ascending key order is the
    /// canonical pair order used for deterministic score summation.
    pub fn pair_code(&self, a: Vertex, b: Vertex) -> u64 {
        debug_assert_ne!(a, b);
        let (ra, rb) = (self.rank[a as usize] as u64, self.rank[b as usize] as u64);
        let n = self.rank.len() as u64;
        if ra < rb {
            ra * n + rb
        } else {
            rb * n + ra
        }
    }

    /// Inverse of [`pair_code`](Self::pair_code); returns `(a, b)` with `a`
    /// preceding `b`.
    pub fn decode_pair(&self, code: u64) -> (Vertex, Vertex) {
        let n = self.rank.len() as u64;
        (
            self.by_rank[(code / n) as usize],
            self.by_rank[(code % n) as usize],
        )
    }
}

/// The oriented graph: each undirected edge points from the earlier endpoint
/// in the total order to the later one, so every triangle is enumerated
/// exactly once from its highest-ranked (first) vertex.
#[derive(Debug, Clone)]
pub struct OrderedGraph {
    pub order: DegreeOrder,
    out_adj: Vec<Vec<Vertex>>,
}

/// Builds the total order and edge orientation for `g`.
pub fn orient(g: &Graph) -> OrderedGraph {
    let order = DegreeOrder::of(g);
    let mut out_adj: Vec<Vec<Vertex>> = vec![Vec::new(); g.n()];
    for u in 0..g.n() as Vertex {
        for &v in g.neighbors(u) {
            if order.precedes(u, v) {
                out_adj[u as usize].push(v);
            }
        }
        // neighbors() is sorted by id, so out lists come out sorted too
    }
    OrderedGraph { order, out_adj }
}

impl OrderedGraph {
    /// Out-neighbors of `u` (successors in the total order), sorted by id.
    pub fn out_neighbors(&self, u: Vertex) -> &[Vertex] {
        &self.out_adj[u as usize]
    }

    pub fn out_degree_sum(&self) -> usize {
        self.out_adj.iter().map(Vec::len).sum()
    }
}

/// Reusable marker array with epoch-based clearing (the `B` array pattern:
/// mark a batch of vertices, run membership tests in O(1), clear in O(1)).
#[derive(Debug, Clone)]
pub struct Marker {
    stamp: Vec<u32>,
    epoch: u32,
}

impl Marker {
    pub fn new(n: usize) -> Marker {
        Marker {
            stamp: vec![0; n],
            epoch: 1,
        }
    }

    pub fn set(&mut self, v: Vertex) {
        self.stamp[v as usize] = self.epoch;
    }

    pub fn test(&self, v: Vertex) -> bool {
        self.stamp[v as usize] == self.epoch
    }

    pub fn clear(&mut self) {
        self.epoch = self.epoch.checked_add(1).unwrap_or_else(|| {
            self.stamp.fill(0);
            1
        });
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::demo_graph as fig1b;

    #[test]
    fn parse_path_graph() {
        let g = Graph::parse_str("0 1\n1 2").unwrap();
        assert_eq!(g.n(), 3);
        assert_eq!(g.m(), 2);
    }

    #[test]
    fn parse_drops_self_loops_and_duplicates() {
        let g = Graph::parse_str("0 0\n0 1\n0 1").unwrap();
        assert_eq!(g.n(), 2);
        assert_eq!(g.m(), 1);
        assert_eq!(g.self_loops_dropped(), 1);
        assert_eq!(g.duplicates_dropped(), 1);
    }

    #[test]
    fn parse_reversed_duplicate_dropped() {
        let g = Graph::parse_str("0 1\n1 0").unwrap();
        assert_eq!(g.m(), 1);
        assert_eq!(g.duplicates_dropped(), 1);
    }

    #[test]
    fn parse_fig1b_counts() {
        let g = fig1b();
        assert_eq!(g.n(), 7);
        assert_eq!(g.m(), 13);
        let sum: usize = (0..7).map(|u| g.degree(u)).sum();
        assert_eq!(sum, 2 * g.m());
    }

    #[test]
    fn parse_errors() {
        let err = Graph::parse_str("0 x").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
        let err = Graph::parse_str("# nothing\n\n").unwrap_err();
        assert!(matches!(err, Error::EmptyGraph));
        let err = Graph::parse_str("1 2 3").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
    }

    #[test]
    fn comments_and_blanks_ignored() {
        let g = Graph::parse_str("# header\n\n0 1\n# mid\n1 2\n").unwrap();
        assert_eq!(g.n(), 3);
        assert_eq!(g.m(), 2);
    }

    #[test]
    fn orient_triangle_covers_each_edge_once() {
        let g = Graph::from_edges(3, &[(0, 1), (0, 2), (1, 2)]);
        let og = orient(&g);
        assert_eq!(og.out_degree_sum(), 3);
        // all degrees equal, so larger id ranks earlier: 2, 1, 0
        assert_eq!(og.order.at(0), 2);
        assert_eq!(og.order.at(1), 1);
        assert_eq!(og.order.at(2), 0);
    }

    #[test]
    fn orient_star_forced_by_degrees() {
        let g = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]);
        let og = orient(&g);
        assert_eq!(og.out_neighbors(0), &[1, 2, 3]);
        for leaf in 1..4 {
            assert!(og.out_neighbors(leaf).is_empty());
        }
    }

    #[test]
    fn orient_fig1b_order() {
        let g = fig1b();
        let og = orient(&g);
        // d (deg 6) first, then c (deg 5), then the degree-3 group by
        // descending original id: i, h, g, b, a.
        let order: Vec<u64> = (0..7).map(|p| g.original_id(og.order.at(p))).collect();
        assert_eq!(order, vec![3, 2, 6, 5, 4, 1, 0]);
        assert_eq!(og.out_degree_sum(), g.m());
    }

    #[test]
    fn common_neighbors_fig1b() {
        let g = fig1b();
        let (c, i) = (g.resolve(2).unwrap(), g.resolve(6).unwrap());
        let got: Vec<u64> = g
            .common_neighbors(c, i)
            .unwrap()
            .into_iter()
            .map(|v| g.original_id(v))
            .collect();
        assert_eq!(got, vec![3, 4, 5]); // d, g, h
    }

    #[test]
    fn common_neighbors_edge_cases() {
        let path = Graph::parse_str("0 1\n1 2").unwrap();
        assert_eq!(path.common_neighbors(0, 2).unwrap(), vec![1]);
        let g = Graph::from_edges(3, &[]);
        assert!(g.common_neighbors(0, 2).unwrap().is_empty());
        assert!(g.common_neighbors(0, 9).is_err());
        assert!(g.common_neighbors(1, 1).is_err());
    }

    #[test]
    fn insert_and_remove_edges() {
        let mut g = Graph::from_edges(3, &[(0, 1)]);
        assert!(matches!(g.insert_edge(0, 1), Err(Error::EdgeExists(0, 1))));
        assert!(matches!(g.remove_edge(1, 2), Err(Error::EdgeMissing(1, 2))));
        g.insert_edge(1, 2).unwrap();
        assert_eq!(g.m(), 2);
        assert!(g.has_edge(2, 1));
        g.remove_edge(0, 1).unwrap();
        assert_eq!(g.m(), 1);
        assert!(!g.has_edge(0, 1));
    }

    #[test]
    fn canonical_round_trip_preserves_isolated_vertices() {
        let g = Graph::parse_str("5 5\n0 1\n1 2\n").unwrap();
        let text = g.to_canonical_edge_list();
        let g2 = Graph::parse_str(&text).unwrap();
        assert_eq!(g2.to_canonical_edge_list(), text);
        assert_eq!(g2.n(), g.n());
        assert_eq!(g2.m(), g.m());
    }

    #[test]
    fn marker_epochs() {
        let mut m = Marker::new(4);
        m.set(1);
        assert!(m.test(1));
        assert!(!m.test(2));
        m.clear();
        assert!(!m.test(1));
    }
}
