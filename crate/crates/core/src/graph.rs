//! Undirected simple graphs shared by every family in the crate.
//!
//! [`Graph`] stores a compressed adjacency array with sorted neighbor lists.
//! Families too large to materialize implement [`NeighborOracle`] instead, and
//! the traversal routines here accept either.

use std::collections::VecDeque;
use std::fmt::Write as _;

use crate::error::{Error, Result};

/// Sentinel distance for unreachable vertices in [`bfs_distances`].
pub const UNREACHABLE: u32 = u32::MAX;

/// Anything that can enumerate the neighbors of a dense vertex id.
pub trait NeighborOracle {
    fn vertex_count(&self) -> usize;
    fn for_each_neighbor<F: FnMut(usize)>(&self, v: usize, f: F);
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Graph {
    offsets: Vec<usize>,
    adj: Vec<u32>,
}

impl Graph {
    /// Builds a graph from an edge list. Duplicate edges are merged; self-loops
    /// and out-of-range endpoints are rejected.
    pub fn from_edges<I>(vertex_count: usize, edges: I) -> Result<Graph>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        if vertex_count > u32::MAX as usize {
            return Err(Error::Parameter(format!(
                "{vertex_count} vertices do not fit 32-bit ids"
            )));
        }
        let mut lists: Vec<Vec<u32>> = vec![Vec::new(); vertex_count];
        for (u, v) in edges {
            for &x in &[u, v] {
                if x >= vertex_count {
                    return Err(Error::InvalidVertex {
                        id: x,
                        count: vertex_count,
                    });
                }
            }
            if u == v {
                return Err(Error::InvalidInput(format!("self-loop at vertex {u}")));
            }
            lists[u].push(v as u32);
            lists[v].push(u as u32);
        }
        Ok(Self::from_lists(lists))
    }

    fn from_lists(mut lists: Vec<Vec<u32>>) -> Graph {
        let mut offsets = Vec::with_capacity(lists.len() + 1);
        let mut adj = Vec::new();
        offsets.push(0);
        for list in lists.iter_mut() {
            list.sort_unstable();
            list.dedup();
            adj.extend_from_slice(list);
            offsets.push(adj.len());
        }
        Graph { offsets, adj }
    }

    /// Builds a graph from any neighbor oracle (materialization).
    pub fn from_oracle<G: NeighborOracle>(oracle: &G) -> Result<Graph> {
        let n = oracle.vertex_count();
        let mut lists = vec![Vec::new(); n];
        for (v, list) in lists.iter_mut().enumerate() {
            oracle.for_each_neighbor(v, |w| list.push(w as u32));
        }
        for (v, list) in lists.iter().enumerate() {
            for &w in list {
                if w as usize == v {
                    return Err(Error::InvalidInput(format!("self-loop at vertex {v}")));
                }
            }
        }
        let g = Self::from_lists(lists);
        for v in 0..n {
            for &w in g.neighbors(v) {
                if !g.has_edge(w as usize, v) {
                    return Err(Error::InvalidInput(format!(
                        "oracle is not symmetric on edge {v}-{w}"
                    )));
                }
            }
        }
        Ok(g)
    }

    pub fn empty(n: usize) -> Graph {
        Self::from_lists(vec![Vec::new(); n])
    }

    pub fn complete(n: usize) -> Graph {
        let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
        Self::from_edges(n, edges).expect("complete graph edges are valid")
    }

    pub fn path(n: usize) -> Graph {
        Self::from_edges(n, (1..n).map(|v| (v - 1, v))).expect("path edges are valid")
    }

    pub fn cycle(n: usize) -> Graph {
        assert!(n >= 3, "cycles need at least three vertices");
        Self::from_edges(n, (0..n).map(|v| (v, (v + 1) % n))).expect("cycle edges are valid")
    }

    /// `rows × cols` grid graph, vertex `(r, c)` at id `r * cols + c`.
    pub fn grid(rows: usize, cols: usize) -> Graph {
        let mut edges = Vec::new();
        for r in 0..rows {
            for c in 0..cols {
                let v = r * cols + c;
                if c + 1 < cols {
                    edges.push((v, v + 1));
                }
                if r + 1 < rows {
                    edges.push((v, v + cols));
                }
            }
        }
        Self::from_edges(rows * cols, edges).expect("grid edges are valid")
    }

    pub fn vertex_count(&self) -> usize {
        self.offsets.len().saturating_sub(1)
    }

    pub fn edge_count(&self) -> usize {
        self.adj.len() / 2
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.adj[self.offsets[v]..self.offsets[v + 1]]
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.vertex_count() && self.neighbors(u).binary_search(&(v as u32)).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, in increasing order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.vertex_count()).flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .map(|&v| v as usize)
                .filter(move |&v| u < v)
                .map(move |v| (u, v))
        })
    }

    pub fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.vertex_count() {
            Ok(())
        } else {
            Err(Error::InvalidVertex {
                id: v,
                count: self.vertex_count(),
            })
        }
    }

    /// Subgraph induced by `vertices` (listed order becomes the new ids).
    /// Returns the subgraph together with the new-to-old id map.
    pub fn induced(&self, vertices: &[u32]) -> (Graph, Vec<u32>) {
        let mut index = vec![u32::MAX; self.vertex_count()];
        for (i, &v) in vertices.iter().enumerate() {
            index[v as usize] = i as u32;
        }
        let lists = vertices
            .iter()
            .map(|&v| {
                self.neighbors(v as usize)
                    .iter()
                    .filter_map(|&w| {
                        let j = index[w as usize];
                        (j != u32::MAX).then_some(j)
                    })
                    .collect()
            })
            .collect();
        (Self::from_lists(lists), vertices.to_vec())
    }

    /// Bitmask adjacency rows for graphs with at most 64 vertices.
    pub fn adjacency_masks(&self) -> Result<Vec<u64>> {
        if self.vertex_count() > 64 {
            return Err(Error::Capacity {
                what: "bitmask adjacency".into(),
                requested: self.vertex_count() as u128,
                cap: 64,
            });
        }
        Ok((0..self.vertex_count())
            .map(|v| {
                self.neighbors(v)
                    .iter()
                    .fold(0u64, |m, &w| m | (1u64 << w))
            })
            .collect())
    }

    pub fn is_connected(&self) -> bool {
        self.vertex_count() == 0 || components(self, &[]).len() == 1
    }
}

impl NeighborOracle for Graph {
    fn vertex_count(&self) -> usize {
        Graph::vertex_count(self)
    }

    fn for_each_neighbor<F: FnMut(usize)>(&self, v: usize, mut f: F) {
        for &w in self.neighbors(v) {
            f(w as usize);
        }
    }
}

/// Open neighborhood of a vertex set given bitmask adjacency rows.
pub fn mask_neighborhood(adj: &[u64], set: u64) -> u64 {
    let mut out = 0u64;
    let mut rest = set;
    while rest != 0 {
        let v = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        out |= adj[v];
    }
    out & !set
}

/// Connected components of the subgraph induced by `set`, ordered by lowest
/// vertex.
pub fn mask_components(adj: &[u64], set: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut rest = set;
    while rest != 0 {
        let mut comp = rest & rest.wrapping_neg();
        let mut frontier = comp;
        while frontier != 0 {
            let grown = mask_neighborhood(adj, frontier) & set & !comp;
            comp |= grown;
            frontier = grown;
        }
        out.push(comp);
        rest &= !comp;
    }
    out
}

/// Distances from `source`; unreachable vertices get [`UNREACHABLE`].
pub fn bfs_distances<G: NeighborOracle>(g: &G, source: usize) -> Vec<u32> {
    let mut dist = vec![UNREACHABLE; g.vertex_count()];
    let mut queue = VecDeque::new();
    dist[source] = 0;
    queue.push_back(source);
    while let Some(v) = queue.pop_front() {
        let d = dist[v] + 1;
        g.for_each_neighbor(v, |w| {
            if dist[w] == UNREACHABLE {
                dist[w] = d;
                queue.push_back(w);
            }
        });
    }
    dist
}

/// Shortest-path length between `u` and `v`; `None` when disconnected.
pub fn bfs_distance<G: NeighborOracle>(g: &G, u: usize, v: usize) -> Result<Option<usize>> {
    let n = g.vertex_count();
    for &x in &[u, v] {
        if x >= n {
            return Err(Error::InvalidVertex { id: x, count: n });
        }
    }
    if u == v {
        return Ok(Some(0));
    }
    let mut dist = vec![UNREACHABLE; n];
    let mut queue = VecDeque::new();
    dist[u] = 0;
    queue.push_back(u);
    while let Some(x) = queue.pop_front() {
        let d = dist[x] + 1;
        let mut hit = false;
        g.for_each_neighbor(x, |w| {
            if dist[w] == UNREACHABLE {
                dist[w] = d;
                hit |= w == v;
                queue.push_back(w);
            }
        });
        if hit {
            return Ok(Some(d as usize));
        }
    }
    Ok(None)
}

fn eccentricity<G: NeighborOracle>(g: &G, v: usize) -> Option<usize> {
    let dist = bfs_distances(g, v);
    let mut max = 0;
    for d in dist {
        if d == UNREACHABLE {
            return None;
        }
        max = max.max(d as usize);
    }
    Some(max)
}

/// All-pairs BFS diameter; `None` for a disconnected graph.
pub fn diameter<G: NeighborOracle + Sync>(g: &G) -> Option<usize> {
    let n = g.vertex_count();
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..n)
            .into_par_iter()
            .map(|v| eccentricity(g, v))
            .try_reduce(|| 0, |a, b| Some(a.max(b)))
    }
    #[cfg(not(feature = "parallel"))]
    {
        let mut best = 0;
        for v in 0..n {
            best = best.max(eccentricity(g, v)?);
        }
        Some(best)
    }
}

/// Vertex of minimum eccentricity (lowest id on ties); `None` if the graph is
/// empty or disconnected.
pub fn center<G: NeighborOracle>(g: &G) -> Option<usize> {
    let mut best: Option<(usize, usize)> = None;
    for v in 0..g.vertex_count() {
        let e = eccentricity(g, v)?;
        if best.is_none_or(|(be, _)| e < be) {
            best = Some((e, v));
        }
    }
    best.map(|(_, v)| v)
}

/// Connected components of `g` minus the vertices flagged in `removed`
/// (an empty slice removes nothing). Each component is sorted; components are
/// ordered by their smallest vertex.
pub fn components<G: NeighborOracle>(g: &G, removed: &[bool]) -> Vec<Vec<u32>> {
    let n = g.vertex_count();
    let blocked = |v: usize| removed.get(v).copied().unwrap_or(false);
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    let mut stack = Vec::new();
    for s in 0..n {
        if seen[s] || blocked(s) {
            continue;
        }
        seen[s] = true;
        stack.push(s);
        let mut comp = Vec::new();
        while let Some(v) = stack.pop() {
            comp.push(v as u32);
            g.for_each_neighbor(v, |w| {
                if !seen[w] && !blocked(w) {
                    seen[w] = true;
                    stack.push(w);
                }
            });
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

/// Renders the shared edge-list format: a `# vertices=V edges=E family=F`
/// header followed by one 1-indexed `u v` pair per line.
pub fn write_edge_list(g: &Graph, family: &str) -> String {
    let mut s = String::new();
    writeln!(
        s,
        "# vertices={} edges={} family={}",
        g.vertex_count(),
        g.edge_count(),
        family
    )
    .unwrap();
    for (u, v) in g.edges() {
        writeln!(s, "{} {}", u + 1, v + 1).unwrap();
    }
    s
}

/// Parses the edge-list format produced by [`write_edge_list`]. Returns the
/// graph and the family tag from the header.
pub fn parse_edge_list(text: &str) -> Result<(Graph, String)> {
    let mut vertices = None;
    let mut declared_edges = None;
    let mut family = String::new();
    let mut edges = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            for field in rest.split_whitespace() {
                if let Some((k, v)) = field.split_once('=') {
                    match k {
                        "vertices" => {
                            vertices = Some(v.parse::<usize>().map_err(|e| {
                                Error::Parse(format!("line {}: vertices: {e}", lineno + 1))
                            })?)
                        }
                        "edges" => {
                            declared_edges = Some(v.parse::<usize>().map_err(|e| {
                                Error::Parse(format!("line {}: edges: {e}", lineno + 1))
                            })?)
                        }
                        "family" => family = v.to_string(),
                        _ => {}
                    }
                }
            }
            continue;
        }
        let mut it = line.split_whitespace();
        let mut next = || -> Result<usize> {
            let tok = it
                .next()
                .ok_or_else(|| Error::Parse(format!("line {}: expected `u v`", lineno + 1)))?;
            let x: usize = tok
                .parse()
                .map_err(|e| Error::Parse(format!("line {}: {e}", lineno + 1)))?;
            if x == 0 {
                return Err(Error::Parse(format!(
                    "line {}: vertex ids are 1-indexed",
                    lineno + 1
                )));
            }
            Ok(x - 1)
        };
        let u = next()?;
        let v = next()?;
        edges.push((u, v));
    }
    let n = vertices.ok_or_else(|| Error::Parse("missing `# vertices=` header".into()))?;
    let g = Graph::from_edges(n, edges)?;
    if let Some(e) = declared_edges {
        if e != g.edge_count() {
            return Err(Error::Parse(format!(
                "header declares {e} edges but {} distinct edges were listed",
                g.edge_count()
            )));
        }
    }
    Ok((g, family))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn handshake_and_symmetry() {
        let g = Graph::from_edges(5, [(0, 1), (1, 2), (2, 0), (3, 4), (1, 0)]).unwrap();
        assert_eq!(g.edge_count(), 4);
        let deg_sum: usize = (0..5).map(|v| g.degree(v)).sum();
        assert_eq!(deg_sum, 2 * g.edge_count());
        for (u, v) in g.edges() {
            assert!(g.has_edge(v, u));
        }
    }

    #[test]
    fn rejects_self_loop_and_bad_ids() {
        assert!(Graph::from_edges(3, [(1, 1)]).is_err());
        assert!(matches!(
            Graph::from_edges(3, [(0, 3)]),
            Err(Error::InvalidVertex { id: 3, .. })
        ));
    }

    #[test]
    fn distances_and_diameter() {
        let p = Graph::path(5);
        assert_eq!(bfs_distance(&p, 0, 4).unwrap(), Some(4));
        assert_eq!(bfs_distance(&p, 2, 2).unwrap(), Some(0));
        assert_eq!(diameter(&p), Some(4));
        assert_eq!(center(&p), Some(2));
        let two = Graph::empty(2);
        assert_eq!(bfs_distance(&two, 0, 1).unwrap(), None);
        assert_eq!(diameter(&two), None);
        assert!(bfs_distance(&p, 0, 9).is_err());
    }

    #[test]
    fn components_respect_removal() {
        let c = Graph::cycle(6);
        let mut removed = vec![false; 6];
        removed[0] = true;
        removed[3] = true;
        let comps = components(&c, &removed);
        assert_eq!(comps, vec![vec![1, 2], vec![4, 5]]);
    }

    #[test]
    fn edge_list_round_trip() {
        let g = Graph::grid(2, 3);
        let text = write_edge_list(&g, "grid");
        assert!(text.starts_with("# vertices=6 edges=7 family=grid\n"));
        let (h, fam) = parse_edge_list(&text).unwrap();
        assert_eq!(h, g);
        assert_eq!(fam, "grid");
        assert!(parse_edge_list("# vertices=2 edges=1\n0 1\n").is_err());
        assert!(parse_edge_list("# vertices=2 edges=2\n1 2\n").is_err());
    }

    #[test]
    fn induced_subgraph_relabels() {
        let g = Graph::complete(4);
        let (h, map) = g.induced(&[3, 1]);
        assert_eq!(h.vertex_count(), 2);
        assert_eq!(h.edge_count(), 1);
        assert_eq!(map, vec![3, 1]);
    }
}
