//! Balanced separators of Hanoi graphs, the endgame probabilities of the
//! forbidden-state game, and brute-force oracles for small graphs.

use std::fmt;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{check_cap, Error, Result};
use crate::graph::{components, mask_components, mask_neighborhood, Graph};
use crate::state_space::{check_params, vertex_count, ImplicitHanoi, DEFAULT_CAP};

/// Balance parameter `c` of a c-separator.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Balance {
    Ratio(Ratio<u64>),
    /// `c = 1/√2`, compared exactly as `2·side² ≤ |V|²`.
    InvSqrt2,
}

impl Balance {
    pub fn ratio(num: u64, den: u64) -> Result<Balance> {
        if den == 0 || 2 * num < den || num >= den {
            return Err(Error::Parameter(format!(
                "balance {num}/{den} is outside [1/2, 1)"
            )));
        }
        Ok(Balance::Ratio(Ratio::new(num, den)))
    }

    /// Whether a side of `side` vertices is allowed in a graph of `total`.
    pub fn admits(&self, side: usize, total: usize) -> bool {
        let (side, total) = (side as u128, total as u128);
        match self {
            Balance::Ratio(c) => side * (*c.denom() as u128) <= (*c.numer() as u128) * total,
            Balance::InvSqrt2 => 2 * side * side <= total * total,
        }
    }

    pub fn value(&self) -> f64 {
        match self {
            Balance::Ratio(c) => *c.numer() as f64 / *c.denom() as f64,
            Balance::InvSqrt2 => std::f64::consts::FRAC_1_SQRT_2,
        }
    }
}

impl fmt::Display for Balance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Balance::Ratio(c) => write!(f, "{}/{}", c.numer(), c.denom()),
            Balance::InvSqrt2 => write!(f, "1/sqrt(2)"),
        }
    }
}

/// Separator `X` with sides `A`, `B` partitioning `V ∖ X`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Separation {
    pub separator: Vec<u32>,
    pub side_a: Vec<u32>,
    pub side_b: Vec<u32>,
    pub balance: Balance,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SeparationViolation {
    InvalidVertex(u32),
    /// A vertex is missing from, or repeated across, `X`, `A` and `B`.
    NotAPartition(u32),
    CrossingEdge(u32, u32),
    Unbalanced { side: usize, total: usize },
}

impl fmt::Display for SeparationViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SeparationViolation::InvalidVertex(v) => write!(f, "vertex {} does not exist", v + 1),
            SeparationViolation::NotAPartition(v) => {
                write!(f, "vertex {} is not in exactly one of X, A, B", v + 1)
            }
            SeparationViolation::CrossingEdge(a, b) => {
                write!(f, "edge {}-{} joins the two sides", a + 1, b + 1)
            }
            SeparationViolation::Unbalanced { side, total } => {
                write!(f, "side of {side} vertices is too large for {total} vertices")
            }
        }
    }
}

impl Separation {
    pub fn largest_side(&self) -> usize {
        self.side_a.len().max(self.side_b.len())
    }

    /// Checks the three c-separator conditions on `g`.
    pub fn check(&self, g: &Graph) -> Vec<SeparationViolation> {
        let n = g.vertex_count();
        let mut out = Vec::new();
        let mut part = vec![0u8; n];
        for (tag, set) in [(1u8, &self.separator), (2, &self.side_a), (3, &self.side_b)] {
            for &v in set.iter() {
                match part.get_mut(v as usize) {
                    None => out.push(SeparationViolation::InvalidVertex(v)),
                    Some(slot) if *slot != 0 => out.push(SeparationViolation::NotAPartition(v)),
                    Some(slot) => *slot = tag,
                }
            }
        }
        for (v, &tag) in part.iter().enumerate() {
            if tag == 0 {
                out.push(SeparationViolation::NotAPartition(v as u32));
            }
        }
        for (u, v) in g.edges() {
            if (part[u], part[v]) == (2, 3) || (part[u], part[v]) == (3, 2) {
                out.push(SeparationViolation::CrossingEdge(u as u32, v as u32));
            }
        }
        let side = self.largest_side();
        if !self.balance.admits(side, n) {
            out.push(SeparationViolation::Unbalanced { side, total: n });
        }
        out
    }
}

impl std::str::FromStr for Balance {
    type Err = Error;

    /// Accepts `num/den` or `1/sqrt(2)`.
    fn from_str(s: &str) -> Result<Balance> {
        let s = s.trim();
        if s == "1/sqrt(2)" || s == "1/sqrt2" {
            return Ok(Balance::InvSqrt2);
        }
        let (a, b) = s
            .split_once('/')
            .ok_or_else(|| Error::Parse(format!("balance `{s}` is not num/den")))?;
        let parse = |t: &str| {
            t.trim()
                .parse::<u64>()
                .map_err(|e| Error::Parse(format!("balance `{s}`: {e}")))
        };
        Balance::ratio(parse(a)?, parse(b)?)
    }
}

/// On-disk separator: 1-indexed `X`, optional sides and the balance.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SeparatorFile {
    pub balance: String,
    pub separator: Vec<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub side_a: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub side_b: Option<Vec<u32>>,
}

fn to_zero(v: &[u32]) -> Result<Vec<u32>> {
    v.iter()
        .map(|&x| x.checked_sub(1).ok_or_else(|| Error::Parse("vertex ids are 1-indexed".into())))
        .collect()
}

impl Separation {
    pub fn to_json(&self) -> String {
        let one = |v: &[u32]| v.iter().map(|x| x + 1).collect::<Vec<u32>>();
        let doc = SeparatorFile {
            balance: self.balance.to_string(),
            separator: one(&self.separator),
            side_a: Some(one(&self.side_a)),
            side_b: Some(one(&self.side_b)),
        };
        serde_json::to_string_pretty(&doc).expect("separation serializes")
    }
}

impl SeparatorFile {
    pub fn from_json(text: &str) -> Result<SeparatorFile> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    /// Checks the file against `g`. Given sides are checked as stated;
    /// otherwise sides are packed from the components of `G − X`.
    pub fn verify(&self, g: &Graph) -> Result<std::result::Result<Separation, Vec<SeparationViolation>>> {
        let balance: Balance = self.balance.parse()?;
        let separator = to_zero(&self.separator)?;
        match (&self.side_a, &self.side_b) {
            (Some(a), Some(b)) => {
                let sep = Separation { separator, side_a: to_zero(a)?, side_b: to_zero(b)?, balance };
                let bad = sep.check(g);
                Ok(if bad.is_empty() { Ok(sep) } else { Err(bad) })
            }
            (None, None) => Ok(verify_c_separator(g, &separator, balance)),
            _ => Err(Error::Parse("give both sides or neither".into())),
        }
    }
}

/// Splits sized items into two bins, largest first, each into the currently
/// smaller bin. Returns the item indices of each bin, bin A no larger than B.
fn greedy_split(sizes: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let mut order: Vec<usize> = (0..sizes.len()).collect();
    order.sort_by_key(|&i| (std::cmp::Reverse(sizes[i]), i));
    let (mut a, mut b) = (Vec::new(), Vec::new());
    let (mut sa, mut sb) = (0usize, 0usize);
    for i in order {
        if sa <= sb {
            a.push(i);
            sa += sizes[i];
        } else {
            b.push(i);
            sb += sizes[i];
        }
    }
    if sa > sb {
        (b, a)
    } else {
        (a, b)
    }
}

/// Packs the components of `G ∖ X` into two sides (largest-first greedy) and
/// checks the balance. On failure returns the offending violations.
pub fn verify_c_separator(
    g: &Graph,
    separator: &[u32],
    balance: Balance,
) -> std::result::Result<Separation, Vec<SeparationViolation>> {
    let n = g.vertex_count();
    let mut removed = vec![false; n];
    let mut bad = Vec::new();
    for &v in separator {
        match removed.get_mut(v as usize) {
            None => bad.push(SeparationViolation::InvalidVertex(v)),
            Some(slot) if *slot => bad.push(SeparationViolation::NotAPartition(v)),
            Some(slot) => *slot = true,
        }
    }
    if !bad.is_empty() {
        return Err(bad);
    }
    let comps = components(g, &removed);
    let sizes: Vec<usize> = comps.iter().map(Vec::len).collect();
    let (ia, ib) = greedy_split(&sizes);
    let gather = |idx: &[usize]| {
        let mut out: Vec<u32> = idx.iter().flat_map(|&i| comps[i].iter().copied()).collect();
        out.sort_unstable();
        out
    };
    let mut x = separator.to_vec();
    x.sort_unstable();
    let sep = Separation {
        separator: x,
        side_a: gather(&ia),
        side_b: gather(&ib),
        balance,
    };
    let violations = sep.check(g);
    if violations.is_empty() {
        Ok(sep)
    } else {
        Err(violations)
    }
}

/// Local level separator of `H_p^n`: one endpoint of every edge that moves the
/// largest disk. For `p = 3` the edge between copies `i` and `i + 1 (mod 3)`
/// loses its endpoint in copy `i + 1`, so each copy loses the same number of
/// vertices; for larger `p` the edge between `i < j` loses its endpoint in `i`.
pub fn hanoi_level_separator(p: usize, n: usize) -> Result<Vec<u32>> {
    check_params(p, n)?;
    check_cap("Hanoi level separator", vertex_count(p, n), DEFAULT_CAP)?;
    let h = ImplicitHanoi::new(p, n)?;
    let block = (p as u64).pow(n as u32 - 1);
    let mut out = Vec::new();
    for v in 0..(p as u64) * block {
        let i = (v / block) as usize;
        let mut keep = false;
        h.for_each_move(v, |w, disk| {
            if disk != n - 1 {
                return;
            }
            let j = (w / block) as usize;
            let (lo, hi) = (i.min(j), i.max(j));
            let owner = if p == 3 {
                if hi == (lo + 1) % 3 { hi } else { lo }
            } else {
                lo
            };
            keep |= owner == i;
        });
        if keep {
            out.push(v as u32);
        }
    }
    Ok(out)
}

/// Balance used by [`recursive_separator`]: `2/3` for three pegs and
/// `(⌈p/2⌉ + 1)/p` otherwise.
pub fn recursive_balance(p: usize) -> Balance {
    if p == 3 {
        Balance::Ratio(Ratio::new(2, 3))
    } else {
        Balance::Ratio(Ratio::new((p as u64).div_ceil(2) + 1, p as u64))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SeparatorNodeKind {
    /// A single recursive copy.
    Copy,
    /// Several recursive copies already disconnected from one another.
    Group,
    Leaf,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeparatorNode {
    pub kind: SeparatorNodeKind,
    /// `i` when the largest copy in the node is a copy of `H_p^(n−i+1)`.
    pub level: usize,
    pub parent: Option<usize>,
    pub vertices: Vec<u32>,
    /// Present for non-leaf nodes; a separation of the induced subgraph on
    /// `vertices`, in global ids.
    pub separation: Option<Separation>,
    pub children: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecursiveSeparatorTree {
    pub p: usize,
    pub n: usize,
    pub nodes: Vec<SeparatorNode>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeparatorNodeViolation {
    pub node: usize,
    pub message: String,
}

impl RecursiveSeparatorTree {
    /// Largest separator at each level `1..=n` (index `i − 1`).
    pub fn level_sizes(&self) -> Vec<usize> {
        let mut out = vec![0; self.n];
        for node in &self.nodes {
            if let Some(s) = &node.separation {
                out[node.level - 1] = out[node.level - 1].max(s.separator.len());
            }
        }
        out
    }

    /// Separator bound `C(p,2)(p−2)^(n−i)` at each level.
    pub fn level_bounds(&self) -> Vec<u128> {
        let pairs = (self.p * (self.p - 1) / 2) as u128;
        (1..=self.n)
            .map(|i| pairs * ((self.p - 2) as u128).pow((self.n - i) as u32))
            .collect()
    }

    /// Verifies every node twice: the stored separation through
    /// [`Separation::check`] on the induced subgraph, and its separator
    /// through [`verify_c_separator`]. Also checks leaves and the
    /// parent/child vertex sets.
    pub fn verify(&self, g: &Graph) -> Vec<SeparatorNodeViolation> {
        let mut out = Vec::new();
        let mut push = |node: usize, message: String| out.push(SeparatorNodeViolation { node, message });
        for (id, node) in self.nodes.iter().enumerate() {
            match &node.separation {
                None => {
                    if node.vertices.len() > 1 {
                        push(id, format!("leaf holds {} vertices", node.vertices.len()));
                    }
                }
                Some(sep) => {
                    let (sub, map) = g.induced(&node.vertices);
                    let local = |set: &[u32]| -> Option<Vec<u32>> {
                        set.iter()
                            .map(|v| map.binary_search(v).ok().map(|i| i as u32))
                            .collect()
                    };
                    let (Some(x), Some(a), Some(b)) =
                        (local(&sep.separator), local(&sep.side_a), local(&sep.side_b))
                    else {
                        push(id, "separation names vertices outside the node".into());
                        continue;
                    };
                    let stored = Separation {
                        separator: x.clone(),
                        side_a: a,
                        side_b: b,
                        balance: sep.balance,
                    };
                    for v in stored.check(&sub) {
                        push(id, v.to_string());
                    }
                    if let Err(vs) = verify_c_separator(&sub, &x, sep.balance) {
                        for v in vs {
                            push(id, format!("independent check: {v}"));
                        }
                    }
                    let mut child_vertices: Vec<u32> = node
                        .children
                        .iter()
                        .flat_map(|&c| self.nodes[c].vertices.iter().copied())
                        .collect();
                    child_vertices.sort_unstable();
                    let mut sides: Vec<u32> = sep.side_a.iter().chain(&sep.side_b).copied().collect();
                    sides.sort_unstable();
                    if child_vertices != sides {
                        push(id, "children do not cover the two sides".into());
                    }
                }
            }
        }
        out
    }

    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct NodeDoc<'a> {
            id: usize,
            kind: SeparatorNodeKind,
            level: usize,
            parent: Option<usize>,
            vertices: Vec<u32>,
            separator: Vec<u32>,
            children: Vec<usize>,
            balance: Option<String>,
            #[serde(skip)]
            _marker: std::marker::PhantomData<&'a ()>,
        }
        #[derive(Serialize)]
        struct Doc<'a> {
            p: usize,
            n: usize,
            level_sizes: Vec<usize>,
            nodes: Vec<NodeDoc<'a>>,
        }
        let doc = Doc {
            p: self.p,
            n: self.n,
            level_sizes: self.level_sizes(),
            nodes: self
                .nodes
                .iter()
                .enumerate()
                .map(|(i, node)| NodeDoc {
                    id: i + 1,
                    kind: node.kind,
                    level: node.level,
                    parent: node.parent.map(|p| p + 1),
                    vertices: node.vertices.iter().map(|v| v + 1).collect(),
                    separator: node
                        .separation
                        .as_ref()
                        .map(|s| s.separator.iter().map(|v| v + 1).collect())
                        .unwrap_or_default(),
                    children: node.children.iter().map(|c| c + 1).collect(),
                    balance: node.separation.as_ref().map(|s| s.balance.to_string()),
                    _marker: std::marker::PhantomData,
                })
                .collect(),
        };
        serde_json::to_string(&doc).expect("separator tree serializes")
    }
}

/// Recursive balanced separator of `H_p^n` built from level separators.
///
/// Every node holds pairwise disconnected pieces, each the surviving part of
/// a recursive copy. The pieces are split into two sides largest-first; while
/// that split is unbalanced the largest piece is replaced by its sub-copies
/// after removing its level separator (restricted to surviving vertices).
pub fn recursive_separator(p: usize, n: usize) -> Result<RecursiveSeparatorTree> {
    check_params(p, n)?;
    let total = vertex_count(p, n);
    check_cap("recursive separator", total, DEFAULT_CAP)?;
    let mut builder = TreeBuilder {
        p,
        n,
        balance: recursive_balance(p),
        alive: vec![true; total as usize],
        level_seps: (0..=n)
            .map(|m| if m == 0 { Ok(Vec::new()) } else { hanoi_level_separator(p, m) })
            .collect::<Result<_>>()?,
        nodes: Vec::new(),
    };
    builder.node(vec![Piece { start: 0, m: n }], None);
    Ok(RecursiveSeparatorTree {
        p,
        n,
        nodes: builder.nodes,
    })
}

/// Copy of `H_p^m` occupying indices `start..start + p^m`.
#[derive(Clone, Copy, Debug)]
struct Piece {
    start: usize,
    m: usize,
}

struct TreeBuilder {
    p: usize,
    n: usize,
    balance: Balance,
    alive: Vec<bool>,
    level_seps: Vec<Vec<u32>>,
    nodes: Vec<SeparatorNode>,
}

impl TreeBuilder {
    fn alive_in(&self, piece: Piece) -> Vec<u32> {
        let size = self.p.pow(piece.m as u32);
        (piece.start..piece.start + size)
            .filter(|&v| self.alive[v])
            .map(|v| v as u32)
            .collect()
    }

    fn alive_count(&self, piece: Piece) -> usize {
        let size = self.p.pow(piece.m as u32);
        self.alive[piece.start..piece.start + size].iter().filter(|&&a| a).count()
    }

    fn node(&mut self, pieces: Vec<Piece>, parent: Option<usize>) -> usize {
        let mut vertices: Vec<u32> = pieces.iter().flat_map(|&pc| self.alive_in(pc)).collect();
        vertices.sort_unstable();
        let top = pieces.iter().map(|pc| pc.m).max().unwrap_or(0);
        let level = self.n - top + 1;
        let kind = if pieces.len() == 1 {
            SeparatorNodeKind::Copy
        } else {
            SeparatorNodeKind::Group
        };
        if vertices.len() <= 1 {
            return self.nodes_push(SeparatorNode {
                kind: SeparatorNodeKind::Leaf,
                level,
                parent,
                vertices,
                separation: None,
                children: Vec::new(),
            });
        }
        let total = vertices.len();
        let mut pieces = pieces;
        let mut separator = Vec::new();
        let (sa, sb) = loop {
            pieces.retain(|&pc| self.alive_count(pc) > 0);
            let sizes: Vec<usize> = pieces.iter().map(|&pc| self.alive_count(pc)).collect();
            let (ia, ib) = greedy_split(&sizes);
            let side = |idx: &[usize]| idx.iter().map(|&i| sizes[i]).sum::<usize>();
            if pieces.is_empty() {
                break (Vec::new(), Vec::new());
            }
            if self.balance.admits(side(&ia), total)
                && self.balance.admits(side(&ib), total)
            {
                let pick = |idx: &[usize]| idx.iter().map(|&i| pieces[i]).collect::<Vec<_>>();
                break (pick(&ia), pick(&ib));
            }
            // Refine the largest piece; a piece of one vertex never needs it
            // because singletons always balance once two pieces exist.
            let big = (0..pieces.len())
                .max_by_key(|&i| (sizes[i], std::cmp::Reverse(i)))
                .expect("nonempty");
            let Piece { start, m } = pieces.swap_remove(big);
            for &x in &self.level_seps[m] {
                let v = start + x as usize;
                if self.alive[v] {
                    self.alive[v] = false;
                    separator.push(v as u32);
                }
            }
            let block = self.p.pow(m as u32 - 1);
            pieces.extend((0..self.p).map(|j| Piece { start: start + j * block, m: m - 1 }));
        };
        separator.sort_unstable();
        let gather = |this: &Self, side: &[Piece]| {
            let mut out: Vec<u32> = side.iter().flat_map(|&pc| this.alive_in(pc)).collect();
            out.sort_unstable();
            out
        };
        let separation = Separation {
            side_a: gather(self, &sa),
            side_b: gather(self, &sb),
            separator,
            balance: self.balance,
        };
        let id = self.nodes_push(SeparatorNode {
            kind,
            level,
            parent,
            vertices,
            separation: Some(separation),
            children: Vec::new(),
        });
        let children = [sa, sb]
            .into_iter()
            .filter(|side| !side.is_empty())
            .map(|side| self.node(side, Some(id)))
            .collect();
        self.nodes[id].children = children;
        id
    }

    fn nodes_push(&mut self, node: SeparatorNode) -> usize {
        self.nodes.push(node);
        self.nodes.len() - 1
    }
}

/// How the two endpoints of the game are drawn.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DrawModel {
    /// Two independent uniform draws from all of `V`.
    #[default]
    WithReplacement,
    /// Two distinct vertices drawn uniformly from `V`.
    WithoutReplacement,
}

/// Outcome of forbidding `removed` before two endpoints are drawn.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FairnessReport {
    pub removed: Vec<u32>,
    /// Component sizes of `G ∖ X`, largest first.
    pub component_sizes: Vec<usize>,
    /// Probability that both endpoints survive and are connected.
    pub probability: Ratio<u128>,
    /// Whether the probability is at most one half.
    pub passes: bool,
}

impl FairnessReport {
    pub fn probability_f64(&self) -> f64 {
        *self.probability.numer() as f64 / *self.probability.denom() as f64
    }

    pub fn to_json(&self) -> String {
        serde_json::json!({
            "removed": self.removed.iter().map(|v| v + 1).collect::<Vec<_>>(),
            "component_sizes": self.component_sizes,
            "probability_num": self.probability.numer().to_string(),
            "probability_den": self.probability.denom().to_string(),
            "probability": format!("{:.6}", self.probability_f64()),
            "passes": self.passes,
        })
        .to_string()
    }
}

pub fn connection_probability(g: &Graph, removed: &[u32]) -> Result<FairnessReport> {
    connection_probability_with(g, removed, DrawModel::WithReplacement)
}

pub fn connection_probability_with(
    g: &Graph,
    removed: &[u32],
    model: DrawModel,
) -> Result<FairnessReport> {
    let n = g.vertex_count();
    let mut mask = vec![false; n];
    for &v in removed {
        g.check_vertex(v as usize)?;
        mask[v as usize] = true;
    }
    let mut sizes: Vec<usize> = components(g, &mask).iter().map(Vec::len).collect();
    sizes.sort_unstable_by(|a, b| b.cmp(a));
    let probability = probability_from_sizes(&sizes, n, model);
    let mut removed: Vec<u32> = removed.to_vec();
    removed.sort_unstable();
    removed.dedup();
    Ok(FairnessReport {
        removed,
        component_sizes: sizes,
        passes: probability <= Ratio::new(1, 2),
        probability,
    })
}

fn probability_from_sizes(sizes: &[usize], n: usize, model: DrawModel) -> Ratio<u128> {
    if n == 0 {
        return Ratio::new(0, 1);
    }
    let n = n as u128;
    match model {
        DrawModel::WithReplacement => {
            let hits: u128 = sizes.iter().map(|&s| (s as u128) * (s as u128)).sum();
            Ratio::new(hits, n * n)
        }
        DrawModel::WithoutReplacement => {
            if n < 2 {
                return Ratio::new(0, 1);
            }
            let hits: u128 = sizes
                .iter()
                .map(|&s| (s as u128) * (s as u128).saturating_sub(1))
                .sum();
            Ratio::new(hits, n * (n - 1))
        }
    }
}

/// Forbidden-state choices for the three-peg endgame.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EndgameStrategy {
    /// The two states with the largest disk on peg 1 and all other disks
    /// together on peg 2 or on peg 3.
    TwoState,
    /// The three-peg level separator: one state per boundary edge, oriented
    /// cyclically.
    ThreeState,
}

/// States with the largest `k` disks on `peg` and the remaining disks all on
/// one other peg (0-indexed pegs).
pub fn two_state_removal(n: usize, peg: usize, k: usize) -> Result<Vec<u32>> {
    check_params(3, n)?;
    if peg >= 3 || k == 0 || k > n {
        return Err(Error::Parameter(format!(
            "need peg < 3 and 1 ≤ k ≤ n, got peg {peg}, k {k}"
        )));
    }
    let mut out = Vec::new();
    for other in (0..3).filter(|&q| q != peg) {
        let mut index = 0u64;
        for disk in (0..n).rev() {
            let on = if disk >= n - k { peg } else { other };
            index = index * 3 + on as u64;
        }
        out.push(index as u32);
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

pub fn endgame_removal(strategy: EndgameStrategy, n: usize) -> Result<Vec<u32>> {
    match strategy {
        EndgameStrategy::TwoState => two_state_removal(n, 0, 1),
        EndgameStrategy::ThreeState => hanoi_level_separator(3, n),
    }
}

/// CSV `n,removed,probability_num,probability_den,probability` for the
/// endgame strategy on `H_3^n` over `ns`.
pub fn fairness_csv(strategy: EndgameStrategy, ns: &[usize], model: DrawModel) -> Result<String> {
    let mut out = String::from("n,removed,probability_num,probability_den,probability\n");
    for &n in ns {
        let g = crate::state_space::build_hanoi(3, n)?.graph;
        let removed = endgame_removal(strategy, n)?;
        let report = connection_probability_with(&g, &removed, model)?;
        out.push_str(&format!(
            "{},{},{},{},{:.6}\n",
            n,
            report.removed.len(),
            report.probability.numer(),
            report.probability.denom(),
            report.probability_f64()
        ));
    }
    Ok(out)
}

pub const BRUTE_FORCE_CAP: usize = 16;
pub const RECURSIVE_BRUTE_FORCE_CAP: usize = 12;

fn lex_subsets(n: usize, size: usize) -> impl Iterator<Item = u64> {
    // Combinations of `size` elements from 0..n in lexicographic order of
    // the sorted element lists.
    let mut idx: Vec<usize> = (0..size).collect();
    let mut done = size > n;
    std::iter::from_fn(move || {
        if done {
            return None;
        }
        let mask = idx.iter().fold(0u64, |m, &i| m | 1 << i);
        // advance
        let mut i = size;
        loop {
            if i == 0 {
                done = true;
                break;
            }
            i -= 1;
            if idx[i] < n - size + i {
                idx[i] += 1;
                for j in i + 1..size {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
        Some(mask)
    })
}

/// Lexicographically least `size`-subset of `0..n` satisfying `pred`.
/// Deterministic whether or not the search runs in parallel.
fn first_subset(n: usize, size: usize, pred: impl Fn(u64) -> bool + Sync) -> Option<u64> {
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        let all: Vec<u64> = lex_subsets(n, size).collect();
        all.par_iter().copied().find_first(|&x| pred(x))
    }
    #[cfg(not(feature = "parallel"))]
    {
        lex_subsets(n, size).find(|&x| pred(x))
    }
}

fn mask_vertices(mask: u64) -> Vec<u32> {
    (0..64).filter(|&v| mask >> v & 1 == 1).collect()
}

/// Minimum number of forbidden vertices leaving connection probability at
/// most one half, with the lexicographically least witness of that size.
pub fn brute_force_f(g: &Graph) -> Result<(usize, Vec<u32>)> {
    let n = g.vertex_count();
    check_cap("brute-force f", n as u128, BRUTE_FORCE_CAP as u128)?;
    let adj = g.adjacency_masks()?;
    let all = (1u64 << n) - 1;
    for size in 0..=n {
        let found = first_subset(n, size, |x| {
            let hits: usize = mask_components(&adj, all & !x)
                .iter()
                .map(|c| (c.count_ones() as usize).pow(2))
                .sum();
            2 * hits <= n * n
        });
        if let Some(x) = found {
            return Ok((size, mask_vertices(x)));
        }
    }
    unreachable!("removing every vertex leaves probability 0")
}

/// Whether component sizes can be split into two sides each admitted by
/// `balance` relative to `total` (exact subset-sum).
fn splittable(sizes: &[usize], total: usize, balance: Balance) -> bool {
    let sum: usize = sizes.iter().sum();
    let mut reach = vec![false; sum + 1];
    reach[0] = true;
    for &s in sizes {
        for t in (s..=sum).rev() {
            if reach[t - s] {
                reach[t] = true;
            }
        }
    }
    (0..=sum).any(|a| reach[a] && balance.admits(a, total) && balance.admits(sum - a, total))
}

/// Minimum size of a c-separator, with the lexicographically least witness.
/// Sides may be any union of components of `G ∖ X`.
pub fn brute_force_r(g: &Graph, balance: Balance) -> Result<(usize, Vec<u32>)> {
    let n = g.vertex_count();
    check_cap("brute-force r", n as u128, BRUTE_FORCE_CAP as u128)?;
    let adj = g.adjacency_masks()?;
    let all = (1u64 << n) - 1;
    for size in 0..=n {
        let found = first_subset(n, size, |x| {
            let sizes: Vec<usize> = mask_components(&adj, all & !x)
                .iter()
                .map(|c| c.count_ones() as usize)
                .collect();
            splittable(&sizes, n, balance)
        });
        if let Some(x) = found {
            return Ok((size, mask_vertices(x)));
        }
    }
    unreachable!("X = V is always a separator")
}

/// Minimum order of a recursive c-separator: the least, over c-separations
/// `(X, A, B)` of `G`, of `max(|X|, s(A), s(B))`, with `s = 0` on at most one
/// vertex.
pub fn brute_force_s(g: &Graph, balance: Balance) -> Result<usize> {
    let n = g.vertex_count();
    check_cap("brute-force s", n as u128, RECURSIVE_BRUTE_FORCE_CAP as u128)?;
    let adj = g.adjacency_masks()?;
    let all = (1usize << n) - 1;
    let mut memo = vec![u8::MAX; all + 1];
    Ok(s_rec(&adj, all as u64, balance, &mut memo) as usize)
}

fn s_rec(adj: &[u64], set: u64, balance: Balance, memo: &mut [u8]) -> u8 {
    if set.count_ones() <= 1 {
        return 0;
    }
    if memo[set as usize] != u8::MAX {
        return memo[set as usize];
    }
    let total = set.count_ones() as usize;
    let mut best = total as u8;
    // Enumerate X ⊆ set by increasing size; |X| ≥ best cannot improve.
    let members = mask_vertices(set);
    for size in 0..total {
        if size as u8 >= best {
            break;
        }
        for pick in lex_subsets(total, size) {
            let x = bits_of(pick).fold(0u64, |m, i| m | 1 << members[i]);
            let comps = mask_components(adj, set & !x);
            let k = comps.len();
            // Fix the first component on side A to halve the enumeration.
            for assign in 0..(1u64 << k.saturating_sub(1)) {
                let mut a = 0u64;
                let mut b = 0u64;
                for (i, &c) in comps.iter().enumerate() {
                    if i > 0 && assign >> (i - 1) & 1 == 1 {
                        b |= c;
                    } else {
                        a |= c;
                    }
                }
                if !balance.admits(a.count_ones() as usize, total)
                    || !balance.admits(b.count_ones() as usize, total)
                {
                    continue;
                }
                let sa = s_rec(adj, a, balance, memo);
                if sa.max(size as u8) >= best {
                    continue;
                }
                let sb = s_rec(adj, b, balance, memo);
                best = best.min(sa.max(sb).max(size as u8));
            }
        }
    }
    memo[set as usize] = best;
    best
}

fn bits_of(mut m: u64) -> impl Iterator<Item = usize> {
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

pub const EXPANSION_CAP: usize = 20;

/// Minimum of `|∂S| / |S|` over nonempty `S` with `|S| ≤ |V|/2`, where `∂S`
/// is the set of neighbors of `S` outside `S`.
pub fn vertex_expansion(g: &Graph) -> Result<Ratio<u64>> {
    let n = g.vertex_count();
    check_cap("vertex expansion", n as u128, EXPANSION_CAP as u128)?;
    if n < 2 {
        return Err(Error::Parameter(
            "vertex expansion needs at least two vertices".into(),
        ));
    }
    let adj = g.adjacency_masks()?;
    let mut best: Option<Ratio<u64>> = None;
    for s in 1u64..(1 << n) {
        let size = s.count_ones() as u64;
        if 2 * size > n as u64 {
            continue;
        }
        let r = Ratio::new(mask_neighborhood(&adj, s).count_ones() as u64, size);
        if best.is_none_or(|b| r < b) {
            best = Some(r);
        }
    }
    Ok(best.expect("some set qualifies"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state_space::{build_hanoi, inter_copy_edge_formula};

    fn half() -> Balance {
        Balance::ratio(1, 2).unwrap()
    }

    #[test]
    fn balance_bounds() {
        assert!(Balance::ratio(1, 3).is_err());
        assert!(Balance::ratio(1, 1).is_err());
        assert!(Balance::InvSqrt2.admits(2, 3));
        assert!(!Balance::InvSqrt2.admits(3, 4));
        assert!(Balance::InvSqrt2.admits(7, 10));
        assert!(!Balance::InvSqrt2.admits(8, 11));
    }

    #[test]
    fn c_separator_examples() {
        let p4 = Graph::path(4);
        let s = verify_c_separator(&p4, &[1], half()).unwrap();
        assert_eq!(s.largest_side(), 2);
        let k4 = Graph::complete(4);
        assert!(matches!(
            verify_c_separator(&k4, &[], half()).unwrap_err()[0],
            SeparationViolation::Unbalanced { side: 4, total: 4 }
        ));
        let h = build_hanoi(3, 2).unwrap();
        let x = hanoi_level_separator(3, 2).unwrap();
        assert_eq!(x.len(), 3);
        let s = verify_c_separator(&h.graph, &x, Balance::ratio(2, 3).unwrap()).unwrap();
        assert_eq!(s.side_a.len() + s.side_b.len(), 6);
    }

    #[test]
    fn separation_check_flags_crossing_edge() {
        let p3 = Graph::path(3);
        let s = Separation {
            separator: vec![],
            side_a: vec![0],
            side_b: vec![1, 2],
            balance: Balance::ratio(2, 3).unwrap(),
        };
        assert_eq!(s.check(&p3), vec![SeparationViolation::CrossingEdge(0, 1)]);
    }

    #[test]
    fn level_separator_sizes() {
        for (p, n) in [(3, 1), (3, 2), (3, 4), (4, 1), (4, 3), (5, 3), (6, 2)] {
            let g = build_hanoi(p, n).unwrap().graph;
            let x = hanoi_level_separator(p, n).unwrap();
            assert!(x.len() as u128 <= inter_copy_edge_formula(p, n));
            let mut removed = vec![false; g.vertex_count()];
            for &v in &x {
                removed[v as usize] = true;
            }
            let comps = components(&g, &removed);
            let block = p.pow(n as u32 - 1) as u32;
            for c in &comps {
                assert!(c.iter().all(|&v| v / block == c[0] / block), "component spans copies");
            }
            if n > 1 {
                assert!(comps.len() >= p);
            }
        }
        // one removal per copy for three pegs
        let x = hanoi_level_separator(3, 3).unwrap();
        let mut per_copy = [0; 3];
        for v in x {
            per_copy[(v / 9) as usize] += 1;
        }
        assert_eq!(per_copy, [1, 1, 1]);
    }

    #[test]
    fn recursive_separator_small() {
        for (p, n) in [(3, 1), (3, 3), (4, 2), (4, 3), (5, 2)] {
            let g = build_hanoi(p, n).unwrap().graph;
            let t = recursive_separator(p, n).unwrap();
            assert_eq!(t.verify(&g), vec![], "p={p} n={n}");
            for (size, bound) in t.level_sizes().iter().zip(t.level_bounds()) {
                assert!(*size as u128 <= bound);
            }
        }
        let t = recursive_separator(3, 3).unwrap();
        assert!(t.level_sizes()[0] <= 3 && t.level_sizes()[1] <= 3);
        let t = recursive_separator(4, 2).unwrap();
        assert!(t.level_sizes()[0] <= 12);
    }

    #[test]
    fn endgame_probabilities() {
        let g = build_hanoi(3, 3).unwrap().graph;
        let two = connection_probability(&g, &endgame_removal(EndgameStrategy::TwoState, 3).unwrap()).unwrap();
        assert_eq!(two.probability, Ratio::new(373, 729));
        assert_eq!(two.component_sizes, vec![18, 7]);
        let three = connection_probability(&g, &endgame_removal(EndgameStrategy::ThreeState, 3).unwrap()).unwrap();
        assert_eq!(three.probability, Ratio::new(192, 729));
        assert!(three.passes && !two.passes);
        let none = connection_probability(&g, &[]).unwrap();
        assert_eq!(none.probability, Ratio::new(1, 1));
    }

    #[test]
    fn without_replacement_variant() {
        let g = Graph::path(2);
        let r = connection_probability_with(&g, &[], DrawModel::WithoutReplacement).unwrap();
        assert_eq!(r.probability, Ratio::new(1, 1));
        let r = connection_probability_with(&g, &[0], DrawModel::WithoutReplacement).unwrap();
        assert_eq!(r.probability, Ratio::new(0, 1));
    }

    #[test]
    fn fairness_csv_shape() {
        let csv = fairness_csv(EndgameStrategy::TwoState, &[3, 4], DrawModel::WithReplacement).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[1], "3,2,373,729,0.511660");
        assert_eq!(lines.len(), 3);
    }

    #[test]
    fn brute_force_examples() {
        assert_eq!(brute_force_f(&Graph::path(2)).unwrap(), (1, vec![0]));
        assert_eq!(brute_force_f(&Graph::complete(4)).unwrap().0, 2);
        assert_eq!(brute_force_r(&Graph::path(4), Balance::InvSqrt2).unwrap(), (1, vec![1]));
        assert_eq!(brute_force_r(&Graph::complete(4), Balance::InvSqrt2).unwrap().0, 2);
        assert_eq!(brute_force_s(&Graph::path(1), Balance::InvSqrt2).unwrap(), 0);
        assert_eq!(brute_force_s(&Graph::empty(2), Balance::InvSqrt2).unwrap(), 0);
        assert_eq!(brute_force_s(&Graph::path(2), Balance::InvSqrt2).unwrap(), 1);
    }

    #[test]
    fn lex_subsets_order() {
        let all: Vec<u64> = lex_subsets(4, 2).collect();
        assert_eq!(all, vec![0b0011, 0b0101, 0b1001, 0b0110, 0b1010, 0b1100]);
        assert_eq!(lex_subsets(3, 0).collect::<Vec<_>>(), vec![0]);
        assert_eq!(lex_subsets(2, 3).count(), 0);
    }

    #[test]
    fn expansion_examples() {
        assert_eq!(vertex_expansion(&Graph::complete(4)).unwrap(), Ratio::new(1, 1));
        assert_eq!(vertex_expansion(&Graph::cycle(6)).unwrap(), Ratio::new(2, 3));
        assert!(vertex_expansion(&Graph::empty(1)).is_err());
    }
}
