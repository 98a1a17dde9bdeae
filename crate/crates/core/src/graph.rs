//! Undirected simple graphs, the generator families used throughout the crate,
//! and breadth-first shortest-path machinery.
//!
//! Vertex ids are `0..vertex_count` and edge ids are indices into the edge
//! list. Adjacency lists are kept sorted by neighbour id so that every
//! traversal (and therefore every trace and table) is reproducible.

use std::collections::{HashSet, VecDeque};
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{Error, Result};

const UNREACHED: usize = usize::MAX;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    vertex_count: usize,
    edges: Vec<(usize, usize)>,
    /// `(neighbour, edge id)`, sorted by neighbour.
    adjacency: Vec<Vec<(usize, usize)>>,
}

/// A simple path. `vertices` has one more entry than `edges`; a path between
/// a vertex and itself has a single vertex and no edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Path {
    pub vertices: Vec<usize>,
    pub edges: Vec<usize>,
}

impl Path {
    pub fn trivial(v: usize) -> Self {
        Path {
            vertices: vec![v],
            edges: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn source(&self) -> usize {
        self.vertices[0]
    }

    pub fn target(&self) -> usize {
        *self.vertices.last().expect("path has at least one vertex")
    }
}

impl Graph {
    /// Builds a graph, rejecting self-loops, duplicate edges and out-of-range
    /// endpoints.
    pub fn new(vertex_count: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        let mut seen = HashSet::with_capacity(edges.len());
        for (id, &(u, v)) in edges.iter().enumerate() {
            if u >= vertex_count || v >= vertex_count {
                return Err(Error::InvalidGraph(format!(
                    "edge {id} ({u},{v}) has an endpoint outside 0..{vertex_count}"
                )));
            }
            if u == v {
                return Err(Error::InvalidGraph(format!(
                    "edge {id} is a self-loop at {u}"
                )));
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(Error::InvalidGraph(format!(
                    "edge {id} ({u},{v}) is a duplicate"
                )));
            }
        }
        Ok(Self::from_valid_edges(vertex_count, edges))
    }

    fn from_valid_edges(vertex_count: usize, edges: Vec<(usize, usize)>) -> Self {
        let mut adjacency = vec![Vec::new(); vertex_count];
        for (id, &(u, v)) in edges.iter().enumerate() {
            adjacency[u].push((v, id));
            adjacency[v].push((u, id));
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Graph {
            vertex_count,
            edges,
            adjacency,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge(&self, id: usize) -> (usize, usize) {
        self.edges[id]
    }

    /// Incident `(neighbour, edge id)` pairs in ascending neighbour order.
    pub fn neighbors(&self, v: usize) -> &[(usize, usize)] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    fn check_vertex(&self, v: usize) -> Result<()> {
        if v >= self.vertex_count {
            return Err(Error::InvalidParameter(format!(
                "vertex {v} outside 0..{}",
                self.vertex_count
            )));
        }
        Ok(())
    }

    /// Parses the edge-list text format: a `V E` header line, then `E` lines
    /// of `u v`. Blank lines are ignored. Edge ids follow line order.
    pub fn from_edge_list(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());

        let (header_line, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            message: "missing `V E` header".into(),
        })?;
        let (vertex_count, edge_count) = parse_pair(header_line, header)?;

        let mut edges = Vec::with_capacity(edge_count);
        let mut seen = HashSet::with_capacity(edge_count);
        for (line, text) in lines.by_ref().take(edge_count) {
            let (u, v) = parse_pair(line, text)?;
            let fail = |message: String| Err(Error::Parse { line, message });
            if u >= vertex_count || v >= vertex_count {
                return fail(format!("vertex out of range 0..{vertex_count}"));
            }
            if u == v {
                return fail(format!("self-loop at vertex {u}"));
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return fail(format!("duplicate edge {u} {v}"));
            }
            edges.push((u, v));
        }
        if edges.len() != edge_count {
            return Err(Error::Parse {
                line: header_line,
                message: format!("header declares {edge_count} edges, found {}", edges.len()),
            });
        }
        if let Some((line, _)) = lines.next() {
            return Err(Error::Parse {
                line,
                message: "unexpected line after the declared edges".into(),
            });
        }
        Ok(Self::from_valid_edges(vertex_count, edges))
    }

    /// Emits the edge-list text format read by [`Graph::from_edge_list`].
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        writeln!(out, "{} {}", self.vertex_count, self.edges.len()).unwrap();
        for &(u, v) in &self.edges {
            writeln!(out, "{u} {v}").unwrap();
        }
        out
    }

    /// Breadth-first distances from `source`, `None` for unreachable vertices.
    pub fn distances(&self, source: usize) -> Vec<Option<usize>> {
        self.bfs_distances(source)
            .into_iter()
            .map(|d| (d != UNREACHED).then_some(d))
            .collect()
    }

    fn bfs_distances(&self, source: usize) -> Vec<usize> {
        let mut dist = vec![UNREACHED; self.vertex_count];
        let mut queue = VecDeque::new();
        dist[source] = 0;
        queue.push_back(source);
        while let Some(x) = queue.pop_front() {
            for &(y, _) in &self.adjacency[x] {
                if dist[y] == UNREACHED {
                    dist[y] = dist[x] + 1;
                    queue.push_back(y);
                }
            }
        }
        dist
    }

    pub fn is_connected(&self) -> bool {
        self.vertex_count == 0 || self.bfs_distances(0).iter().all(|&d| d != UNREACHED)
    }

    /// Connected and acyclic.
    pub fn is_tree(&self) -> bool {
        self.vertex_count >= 1 && self.edges.len() + 1 == self.vertex_count && self.is_connected()
    }

    /// One shortest path from `u` to `v`: BFS from `u` expanding neighbours in
    /// ascending id, each vertex's parent being its first discoverer.
    pub fn shortest_path(&self, u: usize, v: usize) -> Result<Path> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Ok(Path::trivial(u));
        }
        let mut parent: Vec<Option<(usize, usize)>> = vec![None; self.vertex_count];
        let mut visited = vec![false; self.vertex_count];
        let mut queue = VecDeque::new();
        visited[u] = true;
        queue.push_back(u);
        'search: while let Some(x) = queue.pop_front() {
            for &(y, e) in &self.adjacency[x] {
                if !visited[y] {
                    visited[y] = true;
                    parent[y] = Some((x, e));
                    if y == v {
                        break 'search;
                    }
                    queue.push_back(y);
                }
            }
        }
        if !visited[v] {
            return Err(Error::NoPath { from: u, to: v });
        }
        let mut vertices = vec![v];
        let mut edges = Vec::new();
        let mut cur = v;
        while let Some((p, e)) = parent[cur] {
            vertices.push(p);
            edges.push(e);
            cur = p;
        }
        vertices.reverse();
        edges.reverse();
        Ok(Path { vertices, edges })
    }

    /// Every shortest `u`–`v` path in lexicographic order of vertex sequence.
    ///
    /// Fails with [`Error::ResultTooLarge`] once more than `cap` paths exist.
    pub fn all_shortest_paths(&self, u: usize, v: usize, cap: usize) -> Result<Vec<Path>> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        let to_target = self.bfs_distances(v);
        let (paths, truncated) = self.shortest_paths_toward(u, v, &to_target, cap)?;
        if truncated {
            return Err(Error::ResultTooLarge {
                from: u,
                to: v,
                cap,
            });
        }
        Ok(paths)
    }

    /// Enumerates shortest paths from `u` to `v` by descending the distance
    /// field `to_target` (BFS distances from `v`). Stops after `cap` paths and
    /// reports whether more existed.
    pub(crate) fn shortest_paths_toward(
        &self,
        u: usize,
        v: usize,
        to_target: &[usize],
        cap: usize,
    ) -> Result<(Vec<Path>, bool)> {
        if to_target[u] == UNREACHED {
            return Err(Error::NoPath { from: u, to: v });
        }
        let mut out = Vec::new();
        let mut vertices = vec![u];
        let mut edges = Vec::new();
        let truncated = self.descend(u, to_target, cap, &mut vertices, &mut edges, &mut out);
        Ok((out, truncated))
    }

    fn descend(
        &self,
        x: usize,
        to_target: &[usize],
        cap: usize,
        vertices: &mut Vec<usize>,
        edges: &mut Vec<usize>,
        out: &mut Vec<Path>,
    ) -> bool {
        if to_target[x] == 0 {
            if out.len() == cap {
                return true;
            }
            out.push(Path {
                vertices: vertices.clone(),
                edges: edges.clone(),
            });
            return false;
        }
        for &(y, e) in &self.adjacency[x] {
            if to_target[y] + 1 == to_target[x] {
                vertices.push(y);
                edges.push(e);
                let truncated = self.descend(y, to_target, cap, vertices, edges, out);
                vertices.pop();
                edges.pop();
                if truncated {
                    return true;
                }
            }
        }
        false
    }

    /// Number of shortest paths summed over all unordered pairs of distinct
    /// vertices. Exact; overflow is an error.
    pub fn count_shortest_paths(&self) -> Result<u128> {
        let n = self.vertex_count;
        let mut total: u128 = 0;
        let mut dist = vec![UNREACHED; n];
        let mut sigma = vec![0u128; n];
        let mut queue = VecDeque::with_capacity(n);
        for s in 0..n {
            dist.fill(UNREACHED);
            sigma.fill(0);
            dist[s] = 0;
            sigma[s] = 1;
            queue.push_back(s);
            while let Some(x) = queue.pop_front() {
                for &(y, _) in &self.adjacency[x] {
                    if dist[y] == UNREACHED {
                        dist[y] = dist[x] + 1;
                        queue.push_back(y);
                    }
                    if dist[y] == dist[x] + 1 {
                        sigma[y] = sigma[y].checked_add(sigma[x]).ok_or(Error::Overflow)?;
                    }
                }
            }
            for t in s + 1..n {
                if dist[t] == UNREACHED {
                    return Err(Error::Disconnected);
                }
                total = total.checked_add(sigma[t]).ok_or(Error::Overflow)?;
            }
        }
        Ok(total)
    }

    /// `⌈log₂(number of shortest paths)⌉`: the bits needed to tell every
    /// shortest path apart.
    pub fn theoretical_smallest_size(&self) -> Result<u32> {
        let count = self.count_shortest_paths()?;
        if count == 0 {
            return Err(Error::InvalidParameter(
                "graph has no shortest paths between distinct vertices".into(),
            ));
        }
        Ok(ceil_log2(count))
    }
}

fn parse_pair(line: usize, text: &str) -> Result<(usize, usize)> {
    let fail = || Error::Parse {
        line,
        message: format!("expected two non-negative integers, got `{text}`"),
    };
    let mut it = text.split_whitespace();
    let a = it.next().ok_or_else(fail)?.parse().map_err(|_| fail())?;
    let b = it.next().ok_or_else(fail)?.parse().map_err(|_| fail())?;
    if it.next().is_some() {
        return Err(fail());
    }
    Ok((a, b))
}

/// `⌈log₂ x⌉` for `x ≥ 1`.
pub fn ceil_log2(x: u128) -> u32 {
    assert!(x >= 1, "log of zero");
    if x == 1 {
        0
    } else {
        128 - (x - 1).leading_zeros()
    }
}

/// `C(n, 2)`, checked.
pub fn pairs(n: u128) -> Result<u128> {
    n.checked_mul(n.saturating_sub(1))
        .map(|p| p / 2)
        .ok_or(Error::Overflow)
}

/// Number of shortest paths in a star with `n` edges: every pair of vertices
/// has a unique path, so this is `C(n + 1, 2) = n + C(n, 2)`.
pub fn star_path_count(n: u64) -> Result<u128> {
    pairs(n as u128 + 1)
}

/// Star with center 0 and leaves `1..=n`; edge `i - 1` joins 0 and `i`.
pub fn make_star(n: usize) -> Result<Graph> {
    if n == 0 {
        return Err(Error::InvalidParameter(
            "a star needs at least one edge".into(),
        ));
    }
    Ok(Graph::from_valid_edges(
        n + 1,
        (1..=n).map(|i| (0, i)).collect(),
    ))
}

/// Complete graph on `0..n`, edges in lexicographic order of `(u, v)`, `u < v`.
pub fn make_complete(n: usize) -> Result<Graph> {
    if n == 0 {
        return Err(Error::InvalidParameter(
            "a complete graph needs at least one vertex".into(),
        ));
    }
    let edges = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect();
    Ok(Graph::from_valid_edges(n, edges))
}

/// A complete core on `0..n` where every core vertex carries `n - 1` pendant
/// leaves. Returns the graph and the core vertex set.
///
/// Core edges come first (as in [`make_complete`]); the leaves of core vertex
/// `c` are `n + c(n-1) .. n + (c+1)(n-1)`.
pub fn make_core_periphery(n: usize) -> Result<(Graph, Vec<usize>)> {
    if n < 2 {
        return Err(Error::InvalidParameter(
            "core-periphery graphs need n >= 2".into(),
        ));
    }
    let mut edges: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect();
    let mut leaf = n;
    for c in 0..n {
        for _ in 0..n - 1 {
            edges.push((c, leaf));
            leaf += 1;
        }
    }
    Ok((Graph::from_valid_edges(n * n, edges), (0..n).collect()))
}

/// Perfect binary tree of height `h` in heap order: root 0, children of `v`
/// are `2v + 1` and `2v + 2`, and edge `v - 1` joins `v` to its parent.
pub fn make_perfect_binary_tree(h: u32) -> Result<Graph> {
    if h == 0 {
        return Err(Error::InvalidParameter(
            "tree height must be at least 1".into(),
        ));
    }
    if h >= usize::BITS - 2 {
        return Err(Error::InvalidParameter(format!(
            "tree height {h} too large"
        )));
    }
    let n = (1usize << (h + 1)) - 1;
    Ok(Graph::from_valid_edges(
        n,
        (1..n).map(|v| ((v - 1) / 2, v)).collect(),
    ))
}

/// Path `0 - 1 - ... - (n-1)`.
pub fn make_path(n: usize) -> Result<Graph> {
    if n == 0 {
        return Err(Error::InvalidParameter(
            "a path needs at least one vertex".into(),
        ));
    }
    Ok(Graph::from_valid_edges(
        n,
        (1..n).map(|v| (v - 1, v)).collect(),
    ))
}

/// Cycle `0 - 1 - ... - (n-1) - 0`.
pub fn make_cycle(n: usize) -> Result<Graph> {
    if n < 3 {
        return Err(Error::InvalidParameter(
            "a cycle needs at least three vertices".into(),
        ));
    }
    let mut edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
    edges.push((n - 1, 0));
    Ok(Graph::from_valid_edges(n, edges))
}

/// Seeded random connected graph: a random recursive tree on `0..n` plus each
/// remaining vertex pair independently with probability `extra_edge_p`.
pub fn make_random_connected(n: usize, extra_edge_p: f64, seed: u64) -> Result<Graph> {
    if n == 0 {
        return Err(Error::InvalidParameter(
            "graph needs at least one vertex".into(),
        ));
    }
    if !(0.0..=1.0).contains(&extra_edge_p) {
        return Err(Error::InvalidParameter(format!(
            "edge probability {extra_edge_p} outside [0, 1]"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut present = HashSet::new();
    let mut edges = Vec::new();
    for v in 1..n {
        let u = rng.random_range(0..v);
        present.insert((u, v));
        edges.push((u, v));
    }
    for u in 0..n {
        for v in u + 1..n {
            if !present.contains(&(u, v)) && rng.random_bool(extra_edge_p) {
                edges.push((u, v));
            }
        }
    }
    Ok(Graph::from_valid_edges(n, edges))
}
