//! Seeded single-point mutations of witnesses and graphs. Every mutation is
//! constructed so that the result is invalid; verifiers must reject all of them.

use rand::seq::IndexedRandom;
use rand::Rng;

use crate::decomposition::TreeDecomposition;
use crate::fractal::{MinorModel, SubdivisionWitness};
use crate::graph::Graph;
use crate::separators::Separation;

/// A mutated witness together with the graph it must be checked against.
#[derive(Clone, Debug)]
pub struct Mutant<T> {
    pub what: String,
    pub graph: Graph,
    pub witness: T,
}

fn with_edge(g: &Graph, u: usize, v: usize) -> Graph {
    Graph::from_edges(g.vertex_count(), g.edges().chain([(u, v)])).expect("endpoints exist")
}

fn without_edge(g: &Graph, u: usize, v: usize) -> Graph {
    let e = (u.min(v), u.max(v));
    Graph::from_edges(g.vertex_count(), g.edges().filter(|&x| x != e)).expect("subgraph")
}

/// Drops one edge's cover, adds one stray bag element, or adds one edge whose
/// endpoints share no bag.
pub fn decomposition_mutants<R: Rng>(
    g: &Graph,
    t: &TreeDecomposition,
    rng: &mut R,
    count: usize,
) -> Vec<Mutant<TreeDecomposition>> {
    let n = g.vertex_count();
    let edges: Vec<(usize, usize)> = g.edges().collect();
    let mut out = Vec::new();
    for _ in 0..count * 20 {
        if out.len() == count || n < 2 {
            break;
        }
        match rng.random_range(0..3) {
            0 if !edges.is_empty() => {
                let &(u, v) = edges.choose(rng).expect("nonempty");
                let mut m = t.clone();
                for bag in m.bags.iter_mut() {
                    if bag.contains(&(u as u32)) {
                        bag.retain(|&x| x != v as u32);
                    }
                }
                out.push(Mutant { what: format!("uncover {}-{}", u + 1, v + 1), graph: g.clone(), witness: m });
            }
            1 => {
                let b = rng.random_range(0..t.bags.len());
                let v = rng.random_range(0..n) as u32;
                let near = |i: usize| t.bags[i].contains(&v);
                let touches = near(b)
                    || t.parent[b].is_some_and(near)
                    || (0..t.bags.len()).any(|c| t.parent[c] == Some(b) && near(c));
                if touches {
                    continue;
                }
                let mut m = t.clone();
                m.bags[b].push(v);
                m.bags[b].sort_unstable();
                out.push(Mutant { what: format!("stray {} in bag {}", v + 1, b + 1), graph: g.clone(), witness: m });
            }
            _ => {
                let (u, v) = (rng.random_range(0..n), rng.random_range(0..n));
                let shared = t.bags.iter().any(|bag| bag.contains(&(u as u32)) && bag.contains(&(v as u32)));
                if u == v || shared {
                    continue;
                }
                out.push(Mutant {
                    what: format!("add edge {}-{}", u + 1, v + 1),
                    graph: with_edge(g, u, v),
                    witness: t.clone(),
                });
            }
        }
    }
    out
}

/// Reroutes one path through a non-neighbor, truncates a path, or deletes a
/// host edge used by a path.
pub fn subdivision_mutants<R: Rng>(
    g: &Graph,
    w: &SubdivisionWitness,
    rng: &mut R,
    count: usize,
) -> Vec<Mutant<SubdivisionWitness>> {
    let n = g.vertex_count();
    let mut out = Vec::new();
    for _ in 0..count * 20 {
        if out.len() == count || w.paths.is_empty() {
            break;
        }
        let i = rng.random_range(0..w.paths.len());
        let path = &w.paths[i];
        if path.len() < 2 {
            continue;
        }
        match rng.random_range(0..3) {
            0 if path.len() >= 3 => {
                let j = rng.random_range(1..path.len() - 1);
                let x = rng.random_range(0..n) as u32;
                if x == path[j] || g.has_edge(path[j - 1] as usize, x as usize) {
                    continue;
                }
                let mut m = w.clone();
                m.paths[i][j] = x;
                out.push(Mutant { what: format!("path {} via {}", i + 1, x + 1), graph: g.clone(), witness: m });
            }
            1 => {
                let mut m = w.clone();
                m.paths[i].pop();
                out.push(Mutant { what: format!("truncate path {}", i + 1), graph: g.clone(), witness: m });
            }
            _ => {
                let j = rng.random_range(1..path.len());
                let (a, b) = (path[j - 1] as usize, path[j] as usize);
                out.push(Mutant {
                    what: format!("delete edge {}-{}", a + 1, b + 1),
                    graph: without_edge(g, a, b),
                    witness: w.clone(),
                });
            }
        }
    }
    out
}

/// Moves a vertex so an edge crosses the sides, drops a vertex from the
/// partition, or adds an edge between the sides.
pub fn separation_mutants<R: Rng>(
    g: &Graph,
    s: &Separation,
    rng: &mut R,
    count: usize,
) -> Vec<Mutant<Separation>> {
    let mut side = vec![0u8; g.vertex_count()];
    for &v in &s.side_a {
        side[v as usize] = 1;
    }
    for &v in &s.side_b {
        side[v as usize] = 2;
    }
    let mut out = Vec::new();
    for _ in 0..count * 20 {
        if out.len() == count || s.side_a.is_empty() || s.side_b.is_empty() {
            break;
        }
        match rng.random_range(0..3) {
            0 => {
                // A separator vertex with a neighbor in B, moved into A.
                let &x = s.separator.choose(rng).unwrap_or(&u32::MAX);
                if x == u32::MAX || !g.neighbors(x as usize).iter().any(|&y| side[y as usize] == 2) {
                    continue;
                }
                let mut m = s.clone();
                m.separator.retain(|&v| v != x);
                m.side_a.push(x);
                m.side_a.sort_unstable();
                out.push(Mutant { what: format!("move {} into A", x + 1), graph: g.clone(), witness: m });
            }
            1 => {
                let mut m = s.clone();
                let v = m.side_a.swap_remove(rng.random_range(0..m.side_a.len()));
                m.side_a.sort_unstable();
                out.push(Mutant { what: format!("drop {}", v + 1), graph: g.clone(), witness: m });
            }
            _ => {
                let a = *s.side_a.choose(rng).expect("nonempty") as usize;
                let b = *s.side_b.choose(rng).expect("nonempty") as usize;
                out.push(Mutant {
                    what: format!("add edge {}-{}", a + 1, b + 1),
                    graph: with_edge(g, a, b),
                    witness: s.clone(),
                });
            }
        }
    }
    out
}

/// Copies one host vertex into a second branch set, or removes one edge
/// witness.
pub fn minor_mutants<R: Rng>(m: &MinorModel, rng: &mut R, count: usize) -> Vec<Mutant<MinorModel>> {
    let k = m.branch_sets.len();
    let mut out = Vec::new();
    for _ in 0..count * 20 {
        if out.len() == count || k < 2 {
            break;
        }
        let mut x = m.clone();
        if rng.random_bool(0.5) && !m.edge_witnesses.is_empty() {
            let e = x.edge_witnesses.remove(rng.random_range(0..m.edge_witnesses.len()));
            out.push(Mutant {
                what: format!("drop witness {}-{}", e.pattern_edge.0 + 1, e.pattern_edge.1 + 1),
                graph: m.host.clone(),
                witness: x,
            });
        } else {
            let (i, j) = (rng.random_range(0..k), rng.random_range(0..k));
            let Some(&v) = m.branch_sets[i].choose(rng) else { continue };
            if i == j {
                continue;
            }
            x.branch_sets[j].push(v);
            x.branch_sets[j].sort_unstable();
            out.push(Mutant {
                what: format!("share {} between sets {} and {}", v + 1, i + 1, j + 1),
                graph: m.host.clone(),
                witness: x,
            });
        }
    }
    out
}
