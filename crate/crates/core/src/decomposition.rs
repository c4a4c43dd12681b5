//! Tree decompositions: validation, the width-4 decomposition of `S_n`,
//! lifting through minor models, exact treewidth and the cops-and-robber
//! haven game for small graphs.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{check_cap, Error, Result};
use crate::fractal::{build_sierpinski_with_cap, verify_minor_model, Corner, MinorModel, SierpinskiGraph};
use crate::graph::{mask_components, mask_neighborhood, Graph};
use crate::state_space::DEFAULT_CAP;

/// Rooted tree of bags. `parent[i]` is `None` only for roots; a valid
/// decomposition has exactly one root.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TreeDecomposition {
    pub bags: Vec<Vec<u32>>,
    pub parent: Vec<Option<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DecompositionViolation {
    /// Parent links do not form a single rooted tree.
    NotATree(String),
    InvalidVertex { node: usize, vertex: u32 },
    MissingVertex(u32),
    EdgeNotCovered(u32, u32),
    BrokenSubtree(u32),
}

impl fmt::Display for DecompositionViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DecompositionViolation::NotATree(why) => write!(f, "not a tree: {why}"),
            DecompositionViolation::InvalidVertex { node, vertex } => write!(
                f,
                "bag {} names vertex {} which does not exist",
                node + 1,
                vertex + 1
            ),
            DecompositionViolation::MissingVertex(v) => write!(f, "vertex {} is in no bag", v + 1),
            DecompositionViolation::EdgeNotCovered(u, v) => {
                write!(f, "edge not covered: {}-{}", u + 1, v + 1)
            }
            DecompositionViolation::BrokenSubtree(v) => write!(
                f,
                "bags containing vertex {} do not form a connected subtree",
                v + 1
            ),
        }
    }
}

impl TreeDecomposition {
    pub fn new(bags: Vec<Vec<u32>>, parent: Vec<Option<usize>>) -> Self {
        let bags = bags
            .into_iter()
            .map(|mut b| {
                b.sort_unstable();
                b.dedup();
                b
            })
            .collect();
        TreeDecomposition { bags, parent }
    }

    /// A path of bags, each the parent of the next.
    pub fn path(bags: Vec<Vec<u32>>) -> Self {
        let parent = (0..bags.len()).map(|i| i.checked_sub(1)).collect();
        Self::new(bags, parent)
    }

    pub fn len(&self) -> usize {
        self.bags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bags.is_empty()
    }

    /// Largest bag size minus one; 0 when there are no bags.
    pub fn width(&self) -> usize {
        self.bags.iter().map(Vec::len).max().unwrap_or(1).saturating_sub(1)
    }

    fn tree_edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.parent
            .iter()
            .enumerate()
            .filter_map(|(i, p)| p.map(|p| (p, i)))
    }

    fn check_tree(&self) -> std::result::Result<(), String> {
        let n = self.bags.len();
        if self.parent.len() != n {
            return Err(format!("{} bags but {} parent links", n, self.parent.len()));
        }
        if n == 0 {
            return Ok(());
        }
        let roots = self.parent.iter().filter(|p| p.is_none()).count();
        if roots != 1 {
            return Err(format!("expected one root, found {roots}"));
        }
        for (i, p) in self.parent.iter().enumerate() {
            if let Some(p) = *p {
                if p >= n {
                    return Err(format!("bag {} has missing parent {}", i + 1, p + 1));
                }
            }
        }
        // Every node must reach the root without revisiting.
        let mut state = vec![0u8; n];
        for start in 0..n {
            let mut trail = Vec::new();
            let mut cur = start;
            loop {
                match state[cur] {
                    2 => break,
                    1 => return Err(format!("parent cycle through bag {}", cur + 1)),
                    _ => {}
                }
                state[cur] = 1;
                trail.push(cur);
                match self.parent[cur] {
                    Some(p) => cur = p,
                    None => break,
                }
            }
            for t in trail {
                state[t] = 2;
            }
        }
        Ok(())
    }

    /// JSON document `{nodes:[{id, bag, parent}], width}` with 1-indexed ids.
    pub fn to_json(&self) -> String {
        let doc = DecompositionDoc {
            nodes: self
                .bags
                .iter()
                .zip(&self.parent)
                .enumerate()
                .map(|(i, (bag, parent))| NodeDoc {
                    id: i + 1,
                    bag: bag.iter().map(|&v| v + 1).collect(),
                    parent: parent.map(|p| p + 1),
                })
                .collect(),
            width: self.width(),
        };
        serde_json::to_string_pretty(&doc).expect("decomposition serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: DecompositionDoc =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let mut slot = HashMap::new();
        for (i, node) in doc.nodes.iter().enumerate() {
            if slot.insert(node.id, i).is_some() {
                return Err(Error::Parse(format!("duplicate node id {}", node.id)));
            }
        }
        let mut bags = Vec::with_capacity(doc.nodes.len());
        let mut parent = Vec::with_capacity(doc.nodes.len());
        for node in &doc.nodes {
            let bag = node
                .bag
                .iter()
                .map(|&v| {
                    v.checked_sub(1)
                        .ok_or_else(|| Error::Parse("vertex ids are 1-indexed".into()))
                })
                .collect::<Result<Vec<_>>>()?;
            bags.push(bag);
            parent.push(match node.parent {
                None => None,
                Some(p) => Some(
                    *slot
                        .get(&p)
                        .ok_or_else(|| Error::Parse(format!("unknown parent id {p}")))?,
                ),
            });
        }
        Ok(Self::new(bags, parent))
    }

    /// PACE-style text: `s td <bags> <width+1> <V>`, one `b i v...` line per
    /// bag, then one `i j` line per tree edge.
    pub fn to_pace(&self, vertex_count: usize) -> String {
        let mut out = format!(
            "s td {} {} {}\n",
            self.bags.len(),
            self.bags.iter().map(Vec::len).max().unwrap_or(0),
            vertex_count
        );
        for (i, bag) in self.bags.iter().enumerate() {
            out.push_str(&format!("b {}", i + 1));
            for v in bag {
                out.push_str(&format!(" {}", v + 1));
            }
            out.push('\n');
        }
        for (p, c) in self.tree_edges() {
            out.push_str(&format!("{} {}\n", p + 1, c + 1));
        }
        out
    }

    /// Parses the PACE-style text form. Tree edges are rooted at bag 1.
    pub fn from_pace(text: &str) -> Result<Self> {
        let mut count = None;
        let mut bags: Vec<Option<Vec<u32>>> = Vec::new();
        let mut adjacency: Vec<Vec<usize>> = Vec::new();
        let parse_id = |tok: &str| -> Result<usize> {
            tok.parse::<usize>()
                .ok()
                .filter(|&x| x >= 1)
                .ok_or_else(|| Error::Parse(format!("bad id {tok:?}")))
        };
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('c') {
                continue;
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            match toks[0] {
                "s" => {
                    if toks.len() != 5 || toks[1] != "td" {
                        return Err(Error::Parse(format!("line {}: bad header", lineno + 1)));
                    }
                    let n = parse_id(toks[2]).or_else(|_| {
                        toks[2]
                            .parse::<usize>()
                            .map_err(|_| Error::Parse("bad bag count".into()))
                    })?;
                    count = Some(n);
                    bags = vec![None; n];
                    adjacency = vec![Vec::new(); n];
                }
                "b" => {
                    let n = count.ok_or_else(|| Error::Parse("bag before header".into()))?;
                    let id = parse_id(toks.get(1).copied().unwrap_or(""))?;
                    if id > n {
                        return Err(Error::Parse(format!("bag id {id} out of range")));
                    }
                    let bag = toks[2..]
                        .iter()
                        .map(|t| parse_id(t).map(|v| v as u32 - 1))
                        .collect::<Result<Vec<_>>>()?;
                    bags[id - 1] = Some(bag);
                }
                _ => {
                    let n = count.ok_or_else(|| Error::Parse("edge before header".into()))?;
                    if toks.len() != 2 {
                        return Err(Error::Parse(format!("line {}: bad tree edge", lineno + 1)));
                    }
                    let (a, b) = (parse_id(toks[0])?, parse_id(toks[1])?);
                    if a > n || b > n {
                        return Err(Error::Parse(format!("line {}: bag id out of range", lineno + 1)));
                    }
                    adjacency[a - 1].push(b - 1);
                    adjacency[b - 1].push(a - 1);
                }
            }
        }
        let n = count.ok_or_else(|| Error::Parse("missing header".into()))?;
        let bags = bags
            .into_iter()
            .enumerate()
            .map(|(i, b)| b.ok_or_else(|| Error::Parse(format!("bag {} missing", i + 1))))
            .collect::<Result<Vec<_>>>()?;
        let mut parent = vec![None; n];
        let mut seen = vec![false; n];
        if n > 0 {
            let mut stack = vec![0];
            seen[0] = true;
            while let Some(v) = stack.pop() {
                for &w in &adjacency[v] {
                    if !seen[w] {
                        seen[w] = true;
                        parent[w] = Some(v);
                        stack.push(w);
                    }
                }
            }
        }
        let edges: usize = adjacency.iter().map(Vec::len).sum::<usize>() / 2;
        if seen.iter().any(|s| !s) || edges + 1 != n.max(1) {
            return Err(Error::Parse("tree edges do not form a spanning tree".into()));
        }
        Ok(Self::new(bags, parent))
    }
}

#[derive(Serialize, Deserialize)]
struct NodeDoc {
    id: usize,
    bag: Vec<u32>,
    parent: Option<usize>,
}

#[derive(Serialize, Deserialize)]
struct DecompositionDoc {
    nodes: Vec<NodeDoc>,
    width: usize,
}

/// Returns the width if `t` is a tree decomposition of `g`, otherwise every
/// violation found.
pub fn validate(
    g: &Graph,
    t: &TreeDecomposition,
) -> std::result::Result<usize, Vec<DecompositionViolation>> {
    let mut violations = Vec::new();
    if let Err(why) = t.check_tree() {
        violations.push(DecompositionViolation::NotATree(why));
        return Err(violations);
    }
    let n = g.vertex_count();
    let mut holders: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (node, bag) in t.bags.iter().enumerate() {
        for &v in bag {
            if v as usize >= n {
                violations.push(DecompositionViolation::InvalidVertex { node, vertex: v });
            } else {
                holders[v as usize].push(node);
            }
        }
    }
    for (v, h) in holders.iter().enumerate() {
        if h.is_empty() {
            violations.push(DecompositionViolation::MissingVertex(v as u32));
        }
    }
    for (u, v) in g.edges() {
        let covered = holders[u]
            .iter()
            .any(|&node| t.bags[node].binary_search(&(v as u32)).is_ok());
        if !covered {
            violations.push(DecompositionViolation::EdgeNotCovered(u as u32, v as u32));
        }
    }
    // The holders of v form a subtree iff exactly one of them has its parent
    // outside the set.
    let mut contains = vec![false; t.bags.len()];
    for (v, h) in holders.iter().enumerate() {
        if h.is_empty() {
            continue;
        }
        for &node in h {
            contains[node] = true;
        }
        let tops = h
            .iter()
            .filter(|&&node| t.parent[node].is_none_or(|p| !contains[p]))
            .count();
        if tops != 1 {
            violations.push(DecompositionViolation::BrokenSubtree(v as u32));
        }
        for &node in h {
            contains[node] = false;
        }
    }
    if violations.is_empty() {
        Ok(t.width())
    } else {
        Err(violations)
    }
}

/// Number of bags produced by [`sierpinski_decomposition`] at level `n`.
pub fn sierpinski_bag_count(n: usize) -> u128 {
    if n == 0 {
        0
    } else {
        2 * 3u128.pow(n as u32 - 1) - 1
    }
}

/// Width-4 decomposition of `S_n` from triangular and trapezoidal bags.
///
/// The triangular bag of a level-`m` triangle holds its three corners and the
/// junctions next to its top corner; its children are the trapezoidal bag
/// (both lower junctions, the lower corners and the bottom junction) and the
/// triangular bag of the top sub-triangle. The trapezoid's children are the
/// triangular bags of the left and right sub-triangles.
pub fn sierpinski_decomposition(n: usize) -> Result<(SierpinskiGraph, TreeDecomposition)> {
    sierpinski_decomposition_with_cap(n, DEFAULT_CAP)
}

pub fn sierpinski_decomposition_with_cap(
    n: usize,
    cap: u128,
) -> Result<(SierpinskiGraph, TreeDecomposition)> {
    let s = build_sierpinski_with_cap(n, cap)?;
    let mut bags = Vec::new();
    let mut parent = Vec::new();
    let mut word = Vec::new();
    triangle_bags(&s, &mut word, n, None, &mut bags, &mut parent);
    let t = TreeDecomposition::new(bags, parent);
    Ok((s, t))
}

fn triangle_bags(
    s: &SierpinskiGraph,
    word: &mut Vec<Corner>,
    level: usize,
    up: Option<usize>,
    bags: &mut Vec<Vec<u32>>,
    parent: &mut Vec<Option<usize>>,
) {
    use Corner::*;
    let corner = |c: Corner| s.vertex(word, c).expect("corner exists");
    let (l, r, t) = (corner(Left), corner(Right), corner(Top));
    let me = bags.len();
    parent.push(up);
    if level == 1 {
        bags.push(vec![l, r, t]);
        return;
    }
    let junction = |a, b| s.junction(word, a, b).expect("junction exists");
    let (lt, rt, lr) = (junction(Left, Top), junction(Right, Top), junction(Left, Right));
    bags.push(vec![t, lt, rt, l, r]);
    let trapezoid = bags.len();
    bags.push(vec![lt, rt, l, lr, r]);
    parent.push(Some(me));
    for (child, up) in [(Left, trapezoid), (Right, trapezoid), (Top, me)] {
        word.push(child);
        triangle_bags(s, word, level - 1, Some(up), bags, parent);
        word.pop();
    }
}

/// Replaces host vertices by the pattern vertex owning them (dropping
/// unowned ones), then merges every bag equal to its parent's bag into it.
pub fn lift_through_minor(t: &TreeDecomposition, m: &MinorModel) -> Result<TreeDecomposition> {
    if let Err(v) = validate(&m.host, t) {
        return Err(Error::InvalidInput(format!(
            "decomposition does not validate on the host: {}",
            v[0]
        )));
    }
    let report = verify_minor_model(m);
    if !report.is_valid() {
        return Err(Error::InvalidInput(format!(
            "invalid minor model: {}",
            report.violations[0]
        )));
    }
    let owner = m.owner_map();
    let bags: Vec<Vec<u32>> = t
        .bags
        .iter()
        .map(|bag| {
            let mut out: Vec<u32> = bag.iter().filter_map(|&v| owner[v as usize]).collect();
            out.sort_unstable();
            out.dedup();
            out
        })
        .collect();
    // Merge into the nearest ancestor that survives.
    let len = bags.len();
    let mut keep = vec![true; len];
    let mut target: Vec<usize> = (0..len).collect();
    let order = topological(&t.parent);
    for &node in &order {
        if let Some(p) = t.parent[node] {
            let rep = target[p];
            if bags[node] == bags[rep] {
                keep[node] = false;
                target[node] = rep;
            }
        }
    }
    let mut new_id = vec![usize::MAX; len];
    let mut out_bags = Vec::new();
    for node in (0..len).filter(|&i| keep[i]) {
        new_id[node] = out_bags.len();
        out_bags.push(bags[node].clone());
    }
    let out_parent = (0..len)
        .filter(|&i| keep[i])
        .map(|node| t.parent[node].map(|p| new_id[target[p]]))
        .collect();
    Ok(TreeDecomposition::new(out_bags, out_parent))
}

/// Nodes ordered so every parent precedes its children.
fn topological(parent: &[Option<usize>]) -> Vec<usize> {
    let mut children = vec![Vec::new(); parent.len()];
    let mut order = Vec::with_capacity(parent.len());
    for (i, p) in parent.iter().enumerate() {
        match p {
            Some(p) => children[*p].push(i),
            None => order.push(i),
        }
    }
    let mut head = 0;
    while head < order.len() {
        let v = order[head];
        head += 1;
        order.extend(children[v].iter().copied());
    }
    order
}

/// Default vertex cap for [`exact_treewidth`].
pub const TREEWIDTH_CAP: usize = 25;

pub fn exact_treewidth(g: &Graph) -> Result<usize> {
    exact_treewidth_with_cap(g, TREEWIDTH_CAP)
}

/// Exact treewidth of a graph with at most `cap` (≤ 64) vertices; the empty
/// graph has treewidth 0.
///
/// Decides `tw ≤ k` for increasing `k` between a degeneracy lower bound and a
/// min-degree elimination upper bound. A connected set `C` can be eliminated
/// before its neighborhood iff `|N(C)| ≤ k` and, for some `v ∈ C`, every
/// component of `C − v` can; `v` plays the vertex of `C` eliminated last.
pub fn exact_treewidth_with_cap(g: &Graph, cap: usize) -> Result<usize> {
    let n = g.vertex_count();
    check_cap("exact treewidth", n as u128, cap.min(64) as u128)?;
    if n == 0 {
        return Ok(0);
    }
    let adj = g.adjacency_masks()?;
    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let lower = contraction_degeneracy(&adj, all);
    let upper = min_degree_width(&adj, all);
    // Deciding below the optimum is the expensive direction, so walk down
    // from the heuristic width and stop at the first refusal.
    for k in (lower..upper).rev() {
        if !Eliminator::new(&adj, k).graph_fits(all) {
            return Ok(k + 1);
        }
    }
    Ok(lower)
}

/// Decides `tw(g) ≤ k` for graphs with at most 64 vertices.
pub fn treewidth_at_most(g: &Graph, k: usize) -> Result<bool> {
    let n = g.vertex_count();
    check_cap("treewidth decision", n as u128, 64)?;
    if n == 0 {
        return Ok(true);
    }
    let adj = g.adjacency_masks()?;
    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    Ok(Eliminator::new(&adj, k).graph_fits(all))
}

/// Multiplicative hasher for bitmask keys.
#[derive(Default)]
struct MaskHasher(u64);

impl std::hash::Hasher for MaskHasher {
    fn finish(&self) -> u64 {
        self.0
    }

    fn write(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.0 = (self.0.rotate_left(5) ^ b as u64).wrapping_mul(0x51_7c_c1_b7_27_22_0a_95);
        }
    }

    fn write_u64(&mut self, x: u64) {
        self.0 = (x ^ (x >> 29)).wrapping_mul(0x9e37_79b9_7f4a_7c15);
    }
}

type MaskMap<V> = HashMap<u64, V, std::hash::BuildHasherDefault<MaskHasher>>;

struct Eliminator<'a> {
    adj: &'a [u64],
    k: usize,
    memo: MaskMap<bool>,
}

impl<'a> Eliminator<'a> {
    fn new(adj: &'a [u64], k: usize) -> Self {
        Eliminator {
            adj,
            k,
            memo: MaskMap::default(),
        }
    }

    fn graph_fits(&mut self, all: u64) -> bool {
        let mut rest = all;
        while rest != 0 {
            let comp = self.component(rest, rest & rest.wrapping_neg());
            if !self.fits(comp) {
                return false;
            }
            rest &= !comp;
        }
        true
    }

    fn component(&self, within: u64, seed: u64) -> u64 {
        let mut comp = seed;
        let mut frontier = seed;
        while frontier != 0 {
            let grown = mask_neighborhood(self.adj, frontier) & within & !comp;
            comp |= grown;
            frontier = grown;
        }
        comp
    }

    /// Whether the connected set `set` can be eliminated before its
    /// neighborhood with every elimination degree at most `k`.
    fn fits(&mut self, set: u64) -> bool {
        let boundary = mask_neighborhood(self.adj, set).count_ones() as usize;
        if boundary > self.k {
            return false;
        }
        if set.count_ones() as usize + boundary <= self.k + 1 {
            // Every vertex then has at most k neighbors in set ∪ N(set).
            return true;
        }
        if let Some(&known) = self.memo.get(&set) {
            return known;
        }
        let mut ok = false;
        let mut candidates = set;
        while candidates != 0 && !ok {
            let v = candidates & candidates.wrapping_neg();
            candidates &= candidates - 1;
            let inner = set & !v;
            // Cheap pass: every component must have a small enough boundary.
            let mut rest = inner;
            let mut viable = true;
            while rest != 0 {
                let comp = self.component(inner, rest & rest.wrapping_neg());
                if mask_neighborhood(self.adj, comp).count_ones() as usize > self.k
                    || self.memo.get(&comp) == Some(&false)
                {
                    viable = false;
                    break;
                }
                rest &= !comp;
            }
            if !viable {
                continue;
            }
            ok = true;
            let mut rest = inner;
            while rest != 0 {
                let comp = self.component(inner, rest & rest.wrapping_neg());
                if !self.fits(comp) {
                    ok = false;
                    break;
                }
                rest &= !comp;
            }
        }
        self.memo.insert(set, ok);
        ok
    }
}

/// Minor-min-width lower bound: repeatedly contract a minimum-degree vertex
/// into its minimum-degree neighbor.
fn contraction_degeneracy(adj: &[u64], all: u64) -> usize {
    let mut adj = adj.to_vec();
    let mut rest = all;
    let mut best = 0;
    while rest.count_ones() > 1 {
        let (v, d) = bits(rest)
            .map(|v| (v, (adj[v] & rest).count_ones() as usize))
            .min_by_key(|&(v, d)| (d, v))
            .expect("nonempty");
        best = best.max(d);
        rest &= !(1u64 << v);
        if d == 0 {
            continue;
        }
        let u = bits(adj[v] & rest)
            .min_by_key(|&u| ((adj[u] & rest).count_ones(), u))
            .expect("has a neighbor");
        let merged = adj[v] & rest & !(1u64 << u);
        adj[u] |= merged;
        for w in bits(merged) {
            adj[w] |= 1u64 << u;
        }
    }
    best.max(degeneracy(&adj, rest))
}

fn degeneracy(adj: &[u64], all: u64) -> usize {
    let mut rest = all;
    let mut best = 0;
    while rest != 0 {
        let (v, d) = bits(rest)
            .map(|v| (v, (adj[v] & rest).count_ones() as usize))
            .min_by_key(|&(v, d)| (d, v))
            .expect("nonempty");
        best = best.max(d);
        rest &= !(1u64 << v);
    }
    best
}

/// Width of the min-degree elimination ordering.
fn min_degree_width(adj: &[u64], all: u64) -> usize {
    let mut fill: Vec<u64> = adj.to_vec();
    let mut rest = all;
    let mut width = 0;
    while rest != 0 {
        let (v, d) = bits(rest)
            .map(|v| (v, (fill[v] & rest).count_ones() as usize))
            .min_by_key(|&(v, d)| (d, v))
            .expect("nonempty");
        width = width.max(d);
        let nb = fill[v] & rest & !(1u64 << v);
        for w in bits(nb) {
            fill[w] |= nb & !(1u64 << w);
        }
        rest &= !(1u64 << v);
    }
    width
}

fn bits(mut m: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let v = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(v)
        }
    })
}

pub const HAVEN_VERTEX_CAP: usize = 10;
pub const HAVEN_ORDER_CAP: usize = 6;

/// Outcome of the haven game of order `k`: `k − 1` cops against a robber
/// who sees the next cop placement before it lands.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HavenQuery {
    pub order: usize,
    pub robber_wins: bool,
    /// Game positions (cop set, robber component) examined.
    pub positions: usize,
    /// For a robber win: a starting component the robber can hold forever.
    pub escape_component: Option<Vec<u32>>,
}

/// Decides whether `g` has a haven of order `k`.
///
/// Positions are pairs (cop set `X` with `|X| < k`, component `R` of
/// `G − X`). Cops may lift a cop (the robber's component grows to the one of
/// `G − X'` containing it) or announce a new cop at `v`, after which the robber
/// picks any component of `R − v`. The cop-winning positions are computed as a
/// least fixed point.
pub fn haven_order_at_least(g: &Graph, k: usize) -> Result<HavenQuery> {
    let n = g.vertex_count();
    check_cap("haven game", n as u128, HAVEN_VERTEX_CAP as u128)?;
    if k > HAVEN_ORDER_CAP {
        return Err(Error::Capacity {
            what: "haven order".into(),
            requested: k as u128,
            cap: HAVEN_ORDER_CAP as u128,
        });
    }
    if k == 0 {
        return Err(Error::Parameter("haven order must be at least 1".into()));
    }
    let adj = g.adjacency_masks()?;
    let all = (1u64 << n) - 1;
    let cops = k - 1;
    let mut positions: Vec<(u64, u64)> = Vec::new();
    let mut cop_sets = Vec::new();
    for x in 0..=all {
        if (x.count_ones() as usize) <= cops {
            cop_sets.push(x);
            for r in mask_components(&adj, all & !x) {
                positions.push((x, r));
            }
        }
    }
    let index: HashMap<(u64, u64), usize> =
        positions.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let mut cop_win = vec![false; positions.len()];
    loop {
        let mut changed = false;
        for (i, &(x, r)) in positions.iter().enumerate() {
            if cop_win[i] {
                continue;
            }
            let mut wins = false;
            if (x.count_ones() as usize) < cops {
                for v in bits(all & !x) {
                    let y = x | (1u64 << v);
                    let outcomes = mask_components(&adj, r & !(1u64 << v));
                    if outcomes.iter().all(|&r2| cop_win[index[&(y, r2)]]) {
                        wins = true;
                        break;
                    }
                }
            }
            if !wins {
                for a in bits(x) {
                    let y = x & !(1u64 << a);
                    let grown = mask_components(&adj, all & !y)
                        .into_iter()
                        .find(|&c| c & r != 0)
                        .expect("robber component survives");
                    if cop_win[index[&(y, grown)]] {
                        wins = true;
                        break;
                    }
                }
            }
            if wins {
                cop_win[i] = true;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let escape = mask_components(&adj, all)
        .into_iter()
        .find(|&r| !cop_win[index[&(0, r)]]);
    Ok(HavenQuery {
        order: k,
        robber_wins: escape.is_some(),
        positions: positions.len(),
        escape_component: escape.map(|r| bits(r).map(|v| v as u32).collect()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fractal::{build_sierpinski, embed_hanoi_minor};

    /// Q-value subset DP over elimination orders; independent of the
    /// connected-set recursion.
    fn treewidth_by_subsets(g: &Graph) -> usize {
        let n = g.vertex_count();
        if n == 0 {
            return 0;
        }
        let adj = g.adjacency_masks().unwrap();
        let q = |s: u64, v: usize| -> usize {
            // vertices outside s ∪ {v} reachable from v through s
            let mut seen = 1u64 << v;
            let mut stack = vec![v];
            let mut count = 0;
            while let Some(x) = stack.pop() {
                for w in 0..n {
                    if adj[x] >> w & 1 == 1 && seen >> w & 1 == 0 {
                        seen |= 1 << w;
                        if s >> w & 1 == 1 {
                            stack.push(w);
                        } else {
                            count += 1;
                        }
                    }
                }
            }
            count
        };
        let full = (1usize << n) - 1;
        let mut tw = vec![usize::MAX; full + 1];
        tw[0] = 0;
        for s in 1..=full {
            let mut best = usize::MAX;
            for v in 0..n {
                if s >> v & 1 == 1 {
                    let rest = s & !(1 << v);
                    best = best.min(tw[rest].max(q(rest as u64, v)));
                }
            }
            tw[s] = best;
        }
        tw[full]
    }

    fn petersen() -> Graph {
        let mut e = Vec::new();
        for i in 0..5 {
            e.push((i, (i + 1) % 5));
            e.push((i, i + 5));
            e.push((i + 5, (i + 2) % 5 + 5));
        }
        Graph::from_edges(10, e).unwrap()
    }

    #[test]
    fn validate_examples() {
        let k4 = Graph::complete(4);
        let t = TreeDecomposition::path(vec![vec![0, 1, 2, 3]]);
        assert_eq!(validate(&k4, &t), Ok(3));
        let p4 = Graph::path(4);
        let t = TreeDecomposition::path(vec![vec![0, 1], vec![1, 2], vec![2, 3]]);
        assert_eq!(validate(&p4, &t), Ok(1));
        let t = TreeDecomposition::path(vec![vec![0, 1], vec![2, 3]]);
        assert_eq!(
            validate(&p4, &t),
            Err(vec![DecompositionViolation::EdgeNotCovered(1, 2)])
        );
    }

    #[test]
    fn validate_detects_broken_subtree_and_missing_vertex() {
        let p3 = Graph::path(3);
        let t = TreeDecomposition::path(vec![vec![0, 1], vec![1, 2], vec![0]]);
        assert_eq!(
            validate(&p3, &t),
            Err(vec![DecompositionViolation::BrokenSubtree(0)])
        );
        let t = TreeDecomposition::path(vec![vec![0, 1]]);
        let errs = validate(&p3, &t).unwrap_err();
        assert!(errs.contains(&DecompositionViolation::MissingVertex(2)));
        let t = TreeDecomposition::new(vec![vec![0], vec![1]], vec![Some(1), Some(0)]);
        assert!(matches!(
            validate(&p3, &t).unwrap_err()[0],
            DecompositionViolation::NotATree(_)
        ));
    }

    #[test]
    fn sierpinski_widths_and_counts() {
        let (s1, t1) = sierpinski_decomposition(1).unwrap();
        assert_eq!(t1.len(), 1);
        assert_eq!(validate(&s1.graph, &t1), Ok(2));
        for n in 2..=8 {
            let (s, t) = sierpinski_decomposition(n).unwrap();
            assert_eq!(validate(&s.graph, &t), Ok(4), "level {n}");
            assert_eq!(t.len() as u128, sierpinski_bag_count(n));
        }
    }

    #[test]
    fn json_and_pace_round_trip() {
        let (s, t) = sierpinski_decomposition(3).unwrap();
        let back = TreeDecomposition::from_json(&t.to_json()).unwrap();
        assert_eq!(back, t);
        let pace = t.to_pace(s.graph.vertex_count());
        assert!(pace.starts_with(&format!("s td {} 5 {}\n", t.len(), s.graph.vertex_count())));
        let back = TreeDecomposition::from_pace(&pace).unwrap();
        assert_eq!(validate(&s.graph, &back), Ok(4));
        assert_eq!(back.bags, t.bags);
        assert!(TreeDecomposition::from_pace("s td 2 2 3\nb 1 1 2\nb 2 2 3\n").is_err());
    }

    #[test]
    fn lifting_identity_and_collapse() {
        let (s, t) = sierpinski_decomposition(3).unwrap();
        let id = MinorModel::new(
            s.graph.clone(),
            s.graph.clone(),
            (0..s.graph.vertex_count() as u32).map(|v| vec![v]).collect(),
        );
        assert_eq!(lift_through_minor(&t, &id).unwrap(), t);
        let one = MinorModel::new(
            s.graph.clone(),
            Graph::empty(1),
            vec![(0..s.graph.vertex_count() as u32).collect()],
        );
        let lifted = lift_through_minor(&t, &one).unwrap();
        assert_eq!(lifted.len(), 1);
        assert_eq!(validate(&one.pattern, &lifted), Ok(0));
    }

    #[test]
    fn lifting_into_hanoi() {
        for n in 2..=4 {
            let (s, t) = sierpinski_decomposition(n + 1).unwrap();
            let m = embed_hanoi_minor(&s).unwrap();
            let lifted = lift_through_minor(&t, &m).unwrap();
            let w = validate(&m.pattern, &lifted).unwrap();
            assert!(w <= 4);
        }
    }

    #[test]
    fn treewidth_known_values() {
        assert_eq!(exact_treewidth(&Graph::complete(4)).unwrap(), 3);
        assert_eq!(exact_treewidth(&Graph::cycle(6)).unwrap(), 2);
        assert_eq!(exact_treewidth(&crate::fractal::octahedron()).unwrap(), 4);
        assert_eq!(exact_treewidth(&Graph::path(7)).unwrap(), 1);
        assert_eq!(exact_treewidth(&Graph::empty(3)).unwrap(), 0);
        assert_eq!(exact_treewidth(&Graph::grid(3, 6)).unwrap(), 3);
        assert_eq!(exact_treewidth(&Graph::grid(4, 4)).unwrap(), 4);
        assert_eq!(exact_treewidth(&petersen()).unwrap(), 4);
        for n in 1..=9 {
            assert_eq!(exact_treewidth(&Graph::complete(n)).unwrap(), n - 1);
        }
        assert!(matches!(
            exact_treewidth(&Graph::path(26)),
            Err(Error::Capacity { .. })
        ));
    }

    #[test]
    fn treewidth_matches_subset_dp() {
        let s3 = build_sierpinski(3).unwrap();
        let h2 = crate::state_space::build_hanoi(3, 2).unwrap();
        for g in [s3.graph.clone(), h2.graph.clone(), petersen(), Graph::grid(3, 4)] {
            assert_eq!(exact_treewidth(&g).unwrap(), treewidth_by_subsets(&g));
        }
        assert_eq!(exact_treewidth(&s3.graph).unwrap(), 3);
        assert_eq!(exact_treewidth(&h2.graph).unwrap(), 2);
    }

    #[test]
    fn haven_examples() {
        let k4 = Graph::complete(4);
        assert!(haven_order_at_least(&k4, 4).unwrap().robber_wins);
        assert!(!haven_order_at_least(&k4, 5).unwrap().robber_wins);
        let p5 = Graph::path(5);
        assert!(haven_order_at_least(&p5, 2).unwrap().robber_wins);
        assert!(!haven_order_at_least(&p5, 3).unwrap().robber_wins);
        assert!(haven_order_at_least(&Graph::path(11), 2).is_err());
        assert!(haven_order_at_least(&k4, 7).is_err());
    }
}
