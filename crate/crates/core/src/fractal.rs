//! Sierpiński triangle graphs `S_n` and their minor relationships with the
//! three-peg Hanoi graphs.
//!
//! Vertices of `S_n` are named by canonical path addresses. A smallest triangle
//! is addressed by a word over {L, R, T} of length `n − 1`; one of its corners
//! is that word plus a corner tag. Corners shared between triangles are
//! canonicalized to either an outer corner of `S_n` or a junction of some
//! ancestor triangle, so identified corners get one id without a union-find
//! pass.
//!
//! Orientation convention: left, right and top correspond to pegs 2, 3 and 1.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{check_cap, Error, Result};
use crate::graph::{bfs_distances, center, components, Graph, UNREACHABLE};
use crate::state_space::{build_hanoi_with_cap, Configuration, DEFAULT_CAP};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Corner {
    Left,
    Right,
    Top,
}

impl Corner {
    pub const ALL: [Corner; 3] = [Corner::Left, Corner::Right, Corner::Top];

    /// Cyclic successor: left → right → top → left.
    pub fn next(self) -> Corner {
        match self {
            Corner::Left => Corner::Right,
            Corner::Right => Corner::Top,
            Corner::Top => Corner::Left,
        }
    }

    fn letter(self) -> char {
        match self {
            Corner::Left => 'L',
            Corner::Right => 'R',
            Corner::Top => 'T',
        }
    }

    fn unit_position(self) -> (f64, f64) {
        match self {
            Corner::Left => (0.0, 0.0),
            Corner::Right => (1.0, 0.0),
            Corner::Top => (0.5, 3f64.sqrt() / 2.0),
        }
    }
}

/// Canonical identity of a vertex of `S_n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VertexKey {
    Outer(Corner),
    /// The vertex shared by children `pair.0` and `pair.1` of the triangle
    /// addressed by `parent`.
    Junction {
        parent: Vec<Corner>,
        pair: (Corner, Corner),
    },
}

impl VertexKey {
    /// Canonical key of corner `corner` of the triangle addressed by `word`.
    pub fn canonical(word: &[Corner], corner: Corner) -> VertexKey {
        let mut end = word.len();
        while end > 0 && word[end - 1] == corner {
            end -= 1;
        }
        if end == 0 {
            return VertexKey::Outer(corner);
        }
        let child = word[end - 1];
        let pair = if child < corner {
            (child, corner)
        } else {
            (corner, child)
        };
        VertexKey::Junction {
            parent: word[..end - 1].to_vec(),
            pair,
        }
    }
}

impl fmt::Display for VertexKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VertexKey::Outer(c) => write!(f, "{}", c.letter().to_ascii_lowercase()),
            VertexKey::Junction { parent, pair } => {
                for c in parent {
                    write!(f, "{}", c.letter())?;
                }
                write!(
                    f,
                    ":{}{}",
                    pair.0.letter().to_ascii_lowercase(),
                    pair.1.letter().to_ascii_lowercase()
                )
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct SierpinskiGraph {
    level: usize,
    pub graph: Graph,
    keys: Vec<VertexKey>,
    index: HashMap<VertexKey, u32>,
    positions: Vec<(f64, f64)>,
}

pub fn vertex_count(level: usize) -> u128 {
    (3u128.pow(level as u32) + 3) / 2
}

pub fn build_sierpinski(level: usize) -> Result<SierpinskiGraph> {
    build_sierpinski_with_cap(level, DEFAULT_CAP)
}

pub fn build_sierpinski_with_cap(level: usize, cap: u128) -> Result<SierpinskiGraph> {
    if level == 0 {
        return Err(Error::Parameter("Sierpinski level must be at least 1".into()));
    }
    check_cap("Sierpinski graph", vertex_count(level), cap)?;
    let depth = level - 1;
    let triangles = 3usize.pow(depth as u32);
    let mut keys = Vec::new();
    let mut index = HashMap::new();
    let mut positions = Vec::new();
    let mut edges = Vec::with_capacity(3 * triangles);
    let mut word = vec![Corner::Left; depth];
    for t in 0..triangles {
        let mut rest = t;
        for slot in word.iter_mut().rev() {
            *slot = Corner::ALL[rest % 3];
            rest /= 3;
        }
        let (mut ox, mut oy, mut scale) = (0.0, 0.0, 1.0);
        for &c in &word {
            scale /= 2.0;
            let (ux, uy) = c.unit_position();
            ox += scale * ux;
            oy += scale * uy;
        }
        let mut ids = [0u32; 3];
        for (slot, corner) in ids.iter_mut().zip(Corner::ALL) {
            let key = VertexKey::canonical(&word, corner);
            let next = keys.len() as u32;
            *slot = *index.entry(key.clone()).or_insert_with(|| {
                keys.push(key);
                let (ux, uy) = corner.unit_position();
                positions.push((ox + scale * ux, oy + scale * uy));
                next
            });
        }
        edges.push((ids[0] as usize, ids[1] as usize));
        edges.push((ids[1] as usize, ids[2] as usize));
        edges.push((ids[0] as usize, ids[2] as usize));
    }
    let graph = Graph::from_edges(keys.len(), edges)?;
    Ok(SierpinskiGraph {
        level,
        graph,
        keys,
        index,
        positions,
    })
}

impl SierpinskiGraph {
    pub fn level(&self) -> usize {
        self.level
    }

    pub fn key(&self, v: usize) -> &VertexKey {
        &self.keys[v]
    }

    /// Planar coordinates inside the unit equilateral triangle.
    pub fn position(&self, v: usize) -> (f64, f64) {
        self.positions[v]
    }

    pub fn corner(&self, c: Corner) -> u32 {
        self.index[&VertexKey::Outer(c)]
    }

    /// Corner `corner` of the triangle addressed by `word`.
    pub fn vertex(&self, word: &[Corner], corner: Corner) -> Option<u32> {
        if word.len() >= self.level {
            return None;
        }
        self.index.get(&VertexKey::canonical(word, corner)).copied()
    }

    /// Vertex shared by children `a` and `b` of the triangle at `parent`.
    pub fn junction(&self, parent: &[Corner], a: Corner, b: Corner) -> Option<u32> {
        if a == b {
            return None;
        }
        let mut word = parent.to_vec();
        word.push(a);
        self.vertex(&word, b)
    }
}

/// A host-to-pattern minor model: disjoint connected branch sets, one per
/// pattern vertex, with a witnessing host edge for every pattern edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinorModel {
    pub host: Graph,
    pub pattern: Graph,
    pub branch_sets: Vec<Vec<u32>>,
    pub edge_witnesses: Vec<EdgeWitness>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeWitness {
    pub pattern_edge: (u32, u32),
    pub host_edge: (u32, u32),
}

impl MinorModel {
    /// Sorts branch sets and fills in the first host edge found between the
    /// branch sets of each pattern edge. Pattern edges without one are left
    /// unwitnessed for [`verify_minor_model`] to report.
    pub fn new(host: Graph, pattern: Graph, mut branch_sets: Vec<Vec<u32>>) -> MinorModel {
        for set in branch_sets.iter_mut() {
            set.sort_unstable();
            set.dedup();
        }
        let mut owner = vec![u32::MAX; host.vertex_count()];
        for (p, set) in branch_sets.iter().enumerate() {
            for &v in set {
                if (v as usize) < owner.len() && owner[v as usize] == u32::MAX {
                    owner[v as usize] = p as u32;
                }
            }
        }
        let mut edge_witnesses = Vec::new();
        for (a, b) in pattern.edges() {
            let found = branch_sets.get(a).and_then(|set| {
                set.iter().find_map(|&x| {
                    if x as usize >= host.vertex_count() {
                        return None;
                    }
                    host.neighbors(x as usize)
                        .iter()
                        .find(|&&y| owner[y as usize] == b as u32)
                        .map(|&y| (x, y))
                })
            });
            if let Some(host_edge) = found {
                edge_witnesses.push(EdgeWitness {
                    pattern_edge: (a as u32, b as u32),
                    host_edge,
                });
            }
        }
        MinorModel {
            host,
            pattern,
            branch_sets,
            edge_witnesses,
        }
    }

    /// Pattern vertex owning each host vertex, if any.
    pub fn owner_map(&self) -> Vec<Option<u32>> {
        let mut owner = vec![None; self.host.vertex_count()];
        for (p, set) in self.branch_sets.iter().enumerate() {
            for &v in set {
                if let Some(slot) = owner.get_mut(v as usize) {
                    slot.get_or_insert(p as u32);
                }
            }
        }
        owner
    }
}

#[derive(Serialize, Deserialize)]
struct PatternDoc {
    vertices: usize,
    edges: Vec<(u32, u32)>,
}

#[derive(Serialize, Deserialize)]
struct MinorDoc {
    pattern: PatternDoc,
    branch_sets: Vec<Vec<u32>>,
    edge_witnesses: Vec<EdgeWitness>,
}

fn one_based(v: u32) -> u32 {
    v + 1
}

fn zero_based(v: u32) -> Result<u32> {
    v.checked_sub(1)
        .ok_or_else(|| Error::Parse("vertex ids are 1-indexed".into()))
}

impl MinorModel {
    /// JSON document with 1-indexed ids. The host graph is not embedded.
    pub fn to_json(&self) -> String {
        let doc = MinorDoc {
            pattern: PatternDoc {
                vertices: self.pattern.vertex_count(),
                edges: self
                    .pattern
                    .edges()
                    .map(|(a, b)| (a as u32 + 1, b as u32 + 1))
                    .collect(),
            },
            branch_sets: self
                .branch_sets
                .iter()
                .map(|s| s.iter().copied().map(one_based).collect())
                .collect(),
            edge_witnesses: self
                .edge_witnesses
                .iter()
                .map(|w| EdgeWitness {
                    pattern_edge: (w.pattern_edge.0 + 1, w.pattern_edge.1 + 1),
                    host_edge: (w.host_edge.0 + 1, w.host_edge.1 + 1),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&doc).expect("minor model serializes")
    }

    pub fn from_json(host: Graph, text: &str) -> Result<MinorModel> {
        let doc: MinorDoc = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let edges = doc
            .pattern
            .edges
            .iter()
            .map(|&(a, b)| Ok((zero_based(a)? as usize, zero_based(b)? as usize)))
            .collect::<Result<Vec<_>>>()?;
        let pattern = Graph::from_edges(doc.pattern.vertices, edges)?;
        let branch_sets = doc
            .branch_sets
            .iter()
            .map(|s| s.iter().map(|&v| zero_based(v)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let edge_witnesses = doc
            .edge_witnesses
            .iter()
            .map(|w| {
                Ok(EdgeWitness {
                    pattern_edge: (zero_based(w.pattern_edge.0)?, zero_based(w.pattern_edge.1)?),
                    host_edge: (zero_based(w.host_edge.0)?, zero_based(w.host_edge.1)?),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(MinorModel {
            host,
            pattern,
            branch_sets,
            edge_witnesses,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MinorViolation {
    BranchSetCount { expected: usize, found: usize },
    InvalidHostVertex { pattern_vertex: u32, vertex: u32 },
    EmptyBranchSet { pattern_vertex: u32 },
    SharedVertex { vertex: u32, first: u32, second: u32 },
    DisconnectedBranchSet { pattern_vertex: u32 },
    MissingWitness { pattern_edge: (u32, u32) },
    BadWitness { pattern_edge: (u32, u32), host_edge: (u32, u32) },
}

impl fmt::Display for MinorViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MinorViolation::BranchSetCount { expected, found } => {
                write!(f, "expected {expected} branch sets, found {found}")
            }
            MinorViolation::InvalidHostVertex {
                pattern_vertex,
                vertex,
            } => write!(
                f,
                "branch set {} names host vertex {} which does not exist",
                pattern_vertex + 1,
                vertex + 1
            ),
            MinorViolation::EmptyBranchSet { pattern_vertex } => {
                write!(f, "branch set {} is empty", pattern_vertex + 1)
            }
            MinorViolation::SharedVertex {
                vertex,
                first,
                second,
            } => write!(
                f,
                "host vertex {} is shared by branch sets {} and {}",
                vertex + 1,
                first + 1,
                second + 1
            ),
            MinorViolation::DisconnectedBranchSet { pattern_vertex } => {
                write!(f, "branch set {} is disconnected", pattern_vertex + 1)
            }
            MinorViolation::MissingWitness { pattern_edge } => write!(
                f,
                "no host edge witnesses pattern edge {}-{}",
                pattern_edge.0 + 1,
                pattern_edge.1 + 1
            ),
            MinorViolation::BadWitness {
                pattern_edge,
                host_edge,
            } => write!(
                f,
                "host edge {}-{} does not witness pattern edge {}-{}",
                host_edge.0 + 1,
                host_edge.1 + 1,
                pattern_edge.0 + 1,
                pattern_edge.1 + 1
            ),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MinorReport {
    pub violations: Vec<MinorViolation>,
}

impl MinorReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks disjointness, connectivity and edge witnesses of a minor model.
pub fn verify_minor_model(m: &MinorModel) -> MinorReport {
    let mut violations = Vec::new();
    let host_n = m.host.vertex_count();
    if m.branch_sets.len() != m.pattern.vertex_count() {
        violations.push(MinorViolation::BranchSetCount {
            expected: m.pattern.vertex_count(),
            found: m.branch_sets.len(),
        });
    }
    let mut owner: Vec<Option<u32>> = vec![None; host_n];
    for (p, set) in m.branch_sets.iter().enumerate() {
        let p = p as u32;
        if set.is_empty() {
            violations.push(MinorViolation::EmptyBranchSet { pattern_vertex: p });
            continue;
        }
        let mut valid = Vec::with_capacity(set.len());
        for &v in set {
            if v as usize >= host_n {
                violations.push(MinorViolation::InvalidHostVertex {
                    pattern_vertex: p,
                    vertex: v,
                });
                continue;
            }
            match owner[v as usize] {
                Some(q) if q != p => violations.push(MinorViolation::SharedVertex {
                    vertex: v,
                    first: q,
                    second: p,
                }),
                _ => owner[v as usize] = Some(p),
            }
            valid.push(v);
        }
        if !valid.is_empty() {
            let (sub, _) = m.host.induced(&valid);
            if components(&sub, &[]).len() != 1 {
                violations.push(MinorViolation::DisconnectedBranchSet { pattern_vertex: p });
            }
        }
    }
    let in_set = |p: u32, v: u32| {
        m.branch_sets
            .get(p as usize)
            .is_some_and(|s| s.contains(&v))
    };
    for (a, b) in m.pattern.edges() {
        let (a, b) = (a as u32, b as u32);
        let witness = m
            .edge_witnesses
            .iter()
            .find(|w| w.pattern_edge == (a, b) || w.pattern_edge == (b, a));
        match witness {
            None => violations.push(MinorViolation::MissingWitness {
                pattern_edge: (a, b),
            }),
            Some(w) => {
                let (x, y) = w.host_edge;
                let (pa, pb) = w.pattern_edge;
                let ok = (x as usize) < host_n
                    && m.host.has_edge(x as usize, y as usize)
                    && ((in_set(pa, x) && in_set(pb, y)) || (in_set(pa, y) && in_set(pb, x)));
                if !ok {
                    violations.push(MinorViolation::BadWitness {
                        pattern_edge: (a, b),
                        host_edge: (x, y),
                    });
                }
            }
        }
    }
    MinorReport { violations }
}

/// Pegs (0-indexed) to corners for the top level: peg 1 → top, peg 2 → left,
/// peg 3 → right.
const TOP_ORIENTATION: [Corner; 3] = [Corner::Top, Corner::Left, Corner::Right];

/// Orientation of the copy holding the largest disk on `peg`: the two other
/// pegs trade corners.
fn child_orientation(sigma: [Corner; 3], peg: usize) -> [Corner; 3] {
    let mut out = sigma;
    let (j, k) = match peg {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    };
    out.swap(j, k);
    out
}

/// Sierpiński corner address (smallest-triangle word plus corner) of a
/// three-peg configuration, matching largest-disk copies to sub-triangles.
pub fn configuration_address(cfg: &Configuration) -> (Vec<Corner>, Corner) {
    let n = cfg.disks();
    let mut sigma = TOP_ORIENTATION;
    let mut word = Vec::with_capacity(n - 1);
    for disk in (1..n).rev() {
        let peg = cfg.peg_of(disk);
        word.push(sigma[peg]);
        sigma = child_orientation(sigma, peg);
    }
    (word, sigma[cfg.peg_of(0)])
}

/// Contracts every edge of `H_3^n` that moves a disk other than the smallest
/// (the boundary edges of every recursive copy), yielding `S_n`.
///
/// The quotient is checked against `S_n` by recursive corner matching: each
/// Hanoi vertex is sent to its Sierpiński corner address, contracted pairs must
/// land on the same vertex, and the image edges must be exactly `E(S_n)`.
/// The returned model has `H_3^n` as host and `S_n` as pattern.
pub fn contract_boundary_edges(h: &Graph) -> Result<(SierpinskiGraph, MinorModel)> {
    let count = h.vertex_count();
    let mut n = 0usize;
    let mut size = 1usize;
    while size < count {
        size *= 3;
        n += 1;
    }
    if n == 0 || size != count {
        return Err(Error::InvalidInput(format!(
            "{count} vertices is not a power of three"
        )));
    }
    let reference = build_hanoi_with_cap(3, n, DEFAULT_CAP)?;
    if reference.graph != *h {
        return Err(Error::InvalidInput(format!(
            "graph is not H_3^{n} under the configuration-index labeling"
        )));
    }
    let s = build_sierpinski(n)?;

    let mut parent: Vec<usize> = (0..count).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for (u, v) in h.edges() {
        if reference.moved_disk(u, v) > 0 {
            let (a, b) = (find(&mut parent, u), find(&mut parent, v));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }

    let mut image = vec![0u32; count];
    for (v, slot) in image.iter_mut().enumerate() {
        let cfg = Configuration::from_index(3, n, v as u64);
        let (word, corner) = configuration_address(&cfg);
        *slot = s
            .vertex(&word, corner)
            .ok_or_else(|| Error::InvalidInput(format!("no Sierpinski vertex for {cfg}")))?;
    }
    let mut class_image: HashMap<usize, u32> = HashMap::new();
    let mut image_class: HashMap<u32, usize> = HashMap::new();
    for v in 0..count {
        let root = find(&mut parent, v);
        if *class_image.entry(root).or_insert(image[v]) != image[v]
            || *image_class.entry(image[v]).or_insert(root) != root
        {
            return Err(Error::InvalidInput(
                "contracted classes do not match Sierpinski corners".into(),
            ));
        }
    }
    if image_class.len() != s.graph.vertex_count() {
        return Err(Error::InvalidInput(
            "contraction does not cover every Sierpinski vertex".into(),
        ));
    }
    let mut quotient_edges: Vec<(u32, u32)> = h
        .edges()
        .filter_map(|(u, v)| {
            let (a, b) = (image[u], image[v]);
            (a != b).then_some((a.min(b), a.max(b)))
        })
        .collect();
    quotient_edges.sort_unstable();
    quotient_edges.dedup();
    let target: Vec<(u32, u32)> = s
        .graph
        .edges()
        .map(|(u, v)| (u as u32, v as u32))
        .collect();
    if quotient_edges != target {
        return Err(Error::InvalidInput(
            "contracted graph differs from S_n".into(),
        ));
    }

    let mut branch_sets = vec![Vec::new(); s.graph.vertex_count()];
    for (v, &img) in image.iter().enumerate() {
        branch_sets[img as usize].push(v as u32);
    }
    let model = MinorModel::new(h.clone(), s.graph.clone(), branch_sets);
    Ok((s, model))
}

/// Builds an `H_3^(level−1)` minor model inside `S_level`.
///
/// Inductively, the model of `H_3^m` in a level-`m+1` triangle leaves the three
/// outer corners unused and keeps outer corner `σ(j)` adjacent to the branch
/// set of perfect state `j`. The three junctions of the triangle then join the
/// matching perfect states of adjacent child models; each junction is added to
/// exactly one of the two branch sets it joins.
pub fn embed_hanoi_minor(s: &SierpinskiGraph) -> Result<MinorModel> {
    if s.level() < 2 {
        return Err(Error::Parameter(
            "an H_3 minor needs a Sierpinski level of at least 2".into(),
        ));
    }
    let disks = s.level() - 1;
    let pattern = build_hanoi_with_cap(3, disks, DEFAULT_CAP)?.graph;
    let mut prefix = Vec::new();
    let branch_sets = embed_rec(s, &mut prefix, TOP_ORIENTATION, disks);
    Ok(MinorModel::new(s.graph.clone(), pattern, branch_sets))
}

fn embed_rec(
    s: &SierpinskiGraph,
    prefix: &mut Vec<Corner>,
    sigma: [Corner; 3],
    disks: usize,
) -> Vec<Vec<u32>> {
    if disks == 1 {
        return (0..3)
            .map(|peg| {
                let c = sigma[peg];
                vec![s.junction(prefix, c, c.next()).expect("junction exists")]
            })
            .collect();
    }
    let block = 3usize.pow(disks as u32 - 1);
    let mut sets = vec![Vec::new(); 3 * block];
    for peg in 0..3 {
        prefix.push(sigma[peg]);
        let sub = embed_rec(s, prefix, child_orientation(sigma, peg), disks - 1);
        prefix.pop();
        for (idx, set) in sub.into_iter().enumerate() {
            sets[idx + peg * block] = set;
        }
    }
    let ones: usize = (0..disks - 1).map(|i| 3usize.pow(i as u32)).sum();
    for (i, k, j) in [(0, 1, 2), (0, 2, 1), (1, 2, 0)] {
        let v = s
            .junction(prefix, sigma[i], sigma[k])
            .expect("junction exists");
        sets[j * ones + i * block].push(v);
    }
    sets
}

/// Octahedron vertices 0..6 with opposite pairs (0,1), (2,3), (4,5); the
/// twelve edges in lexicographic order.
pub fn octahedron_edges() -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for a in 0..6 {
        for b in a + 1..6 {
            if b != (a ^ 1) {
                out.push((a, b));
            }
        }
    }
    out
}

pub fn octahedron() -> Graph {
    Graph::from_edges(6, octahedron_edges()).expect("octahedron edges are valid")
}

/// Octahedron subdivision: six branch vertices and one host path per
/// octahedron edge (in [`octahedron_edges`] order), endpoints included.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubdivisionWitness {
    pub branch: Vec<u32>,
    pub paths: Vec<Vec<u32>>,
}

impl SubdivisionWitness {
    /// JSON document with 1-indexed ids.
    pub fn to_json(&self) -> String {
        let doc = SubdivisionWitness {
            branch: self.branch.iter().copied().map(one_based).collect(),
            paths: self
                .paths
                .iter()
                .map(|p| p.iter().copied().map(one_based).collect())
                .collect(),
        };
        serde_json::to_string_pretty(&doc).expect("witness serializes")
    }

    pub fn from_json(text: &str) -> Result<SubdivisionWitness> {
        let doc: SubdivisionWitness =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Ok(SubdivisionWitness {
            branch: doc.branch.into_iter().map(zero_based).collect::<Result<_>>()?,
            paths: doc
                .paths
                .into_iter()
                .map(|p| p.into_iter().map(zero_based).collect::<Result<_>>())
                .collect::<Result<_>>()?,
        })
    }
}

/// Witness shipped for `S_5`, found by [`find_octahedron_subdivision`].
pub const S5_OCTAHEDRON_JSON: &str = include_str!("../data/s5_octahedron.json");

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SubdivisionViolation {
    Shape(String),
    InvalidVertex(u32),
    RepeatedBranchVertex(u32),
    WrongEndpoints { path: usize },
    NotAnEdge { path: usize, from: u32, to: u32 },
    BranchVertexInside { path: usize, vertex: u32 },
    SharedInternalVertex { vertex: u32, first: usize, second: usize },
}

impl fmt::Display for SubdivisionViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SubdivisionViolation::Shape(s) => write!(f, "{s}"),
            SubdivisionViolation::InvalidVertex(v) => write!(f, "vertex {} does not exist", v + 1),
            SubdivisionViolation::RepeatedBranchVertex(v) => {
                write!(f, "branch vertex {} listed twice", v + 1)
            }
            SubdivisionViolation::WrongEndpoints { path } => {
                write!(f, "path {} does not join its octahedron edge's branch vertices", path + 1)
            }
            SubdivisionViolation::NotAnEdge { path, from, to } => write!(
                f,
                "path {} steps {}-{} along a non-edge",
                path + 1,
                from + 1,
                to + 1
            ),
            SubdivisionViolation::BranchVertexInside { path, vertex } => write!(
                f,
                "path {} passes through branch vertex {}",
                path + 1,
                vertex + 1
            ),
            SubdivisionViolation::SharedInternalVertex {
                vertex,
                first,
                second,
            } => write!(
                f,
                "vertex {} is internal to paths {} and {}",
                vertex + 1,
                first + 1,
                second + 1
            ),
        }
    }
}

/// Exact check of an octahedron subdivision witness.
pub fn verify_subdivision(g: &Graph, w: &SubdivisionWitness) -> Vec<SubdivisionViolation> {
    let mut out = Vec::new();
    let n = g.vertex_count();
    let edges = octahedron_edges();
    if w.branch.len() != 6 || w.paths.len() != edges.len() {
        out.push(SubdivisionViolation::Shape(format!(
            "expected 6 branch vertices and 12 paths, found {} and {}",
            w.branch.len(),
            w.paths.len()
        )));
        return out;
    }
    for (i, &b) in w.branch.iter().enumerate() {
        if b as usize >= n {
            out.push(SubdivisionViolation::InvalidVertex(b));
        }
        if w.branch[..i].contains(&b) {
            out.push(SubdivisionViolation::RepeatedBranchVertex(b));
        }
    }
    if !out.is_empty() {
        return out;
    }
    let mut internal_owner: HashMap<u32, usize> = HashMap::new();
    for (k, (path, &(a, b))) in w.paths.iter().zip(&edges).enumerate() {
        let (x, y) = (w.branch[a], w.branch[b]);
        let ends_ok = path.len() >= 2
            && ((path[0] == x && path[path.len() - 1] == y)
                || (path[0] == y && path[path.len() - 1] == x));
        if !ends_ok {
            out.push(SubdivisionViolation::WrongEndpoints { path: k });
        }
        if let Some(&bad) = path.iter().find(|&&v| v as usize >= n) {
            out.push(SubdivisionViolation::InvalidVertex(bad));
            continue;
        }
        for step in path.windows(2) {
            if !g.has_edge(step[0] as usize, step[1] as usize) {
                out.push(SubdivisionViolation::NotAnEdge {
                    path: k,
                    from: step[0],
                    to: step[1],
                });
            }
        }
        if path.len() > 2 {
            for &v in &path[1..path.len() - 1] {
                if w.branch.contains(&v) {
                    out.push(SubdivisionViolation::BranchVertexInside { path: k, vertex: v });
                } else if let Some(&first) = internal_owner.get(&v) {
                    out.push(SubdivisionViolation::SharedInternalVertex {
                        vertex: v,
                        first,
                        second: k,
                    });
                } else {
                    internal_owner.insert(v, k);
                }
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SubdivisionSearch {
    Found(SubdivisionWitness),
    /// The search space was exhausted without a witness.
    NotFound,
    /// The step budget ran out first.
    Timeout,
}

/// Default step budget for [`find_octahedron_subdivision`].
pub const DEFAULT_SEARCH_BUDGET: u64 = 200_000_000;

/// Best-effort deterministic search for an octahedron subdivision.
///
/// Branch vertices are drawn from vertices of degree at least 4, ordered by
/// distance from the graph center. For each candidate set and each choice of
/// opposite pairs the twelve paths are routed by backtracking over simple
/// paths, shortest first. A `NotFound` result is exhaustive.
pub fn find_octahedron_subdivision(g: &Graph, budget: u64) -> SubdivisionSearch {
    let mut search = Finder::new(g, budget);
    search.run()
}

/// Routes the twelve octahedron paths for fixed branch vertices, where
/// `branch[2i]` and `branch[2i + 1]` are opposite. Returns `None` when no
/// routing exists or the budget runs out.
pub fn route_octahedron(g: &Graph, branch: [u32; 6], budget: u64) -> Option<SubdivisionWitness> {
    if branch.iter().any(|&b| b as usize >= g.vertex_count()) {
        return None;
    }
    let mut finder = Finder::new(g, budget);
    finder.try_matching(&branch, u64::MAX)
}

struct Finder<'a> {
    g: &'a Graph,
    budget: u64,
    /// Steps left for the current branch-set attempt in the heuristic phase.
    attempt_left: u64,
    used: Vec<bool>,
    is_branch: Vec<bool>,
    exhausted_budget: bool,
}

fn pairs(set: &[u32]) -> impl Iterator<Item = (u32, u32)> + '_ {
    (0..set.len()).flat_map(move |i| (i + 1..set.len()).map(move |j| (set[i], set[j])))
}

fn collect_sets(
    pool: &[u32],
    chosen: &mut Vec<u32>,
    from: usize,
    out: &mut std::collections::BTreeSet<[u32; 6]>,
) {
    if chosen.len() == 6 {
        let mut set: [u32; 6] = chosen.as_slice().try_into().expect("six vertices");
        set.sort_unstable();
        out.insert(set);
        return;
    }
    for i in from..pool.len() {
        chosen.push(pool[i]);
        collect_sets(pool, chosen, i + 1, out);
        chosen.pop();
    }
}

/// Per-attempt step cap used while trying compact candidate sets.
const ATTEMPT_CAP: u64 = 20_000;

impl<'a> Finder<'a> {
    fn new(g: &'a Graph, budget: u64) -> Self {
        Finder {
            g,
            budget,
            attempt_left: u64::MAX,
            used: vec![false; g.vertex_count()],
            is_branch: vec![false; g.vertex_count()],
            exhausted_budget: false,
        }
    }

    fn tick(&mut self) -> bool {
        if self.budget == 0 {
            self.exhausted_budget = true;
            return false;
        }
        if self.attempt_left == 0 {
            return false;
        }
        self.budget -= 1;
        self.attempt_left -= 1;
        true
    }

    fn run(&mut self) -> SubdivisionSearch {
        let g = self.g;
        let origin = center(g).unwrap_or(0);
        let dist = if g.vertex_count() > 0 {
            bfs_distances(g, origin)
        } else {
            Vec::new()
        };
        let mut cands: Vec<u32> = (0..g.vertex_count() as u32)
            .filter(|&v| g.degree(v as usize) >= 4)
            .collect();
        cands.sort_by_key(|&v| (dist[v as usize], v));
        if cands.len() < 6 {
            return SubdivisionSearch::NotFound;
        }
        // Heuristic phase: 6-sets inside radius-2 balls, densest first, each
        // attempt capped.
        let mut compact = std::collections::BTreeSet::new();
        for &v in &cands {
            let around = bfs_distances(g, v as usize);
            let pool: Vec<u32> = cands
                .iter()
                .copied()
                .filter(|&w| w != v && around[w as usize] <= 2)
                .collect();
            let mut chosen = vec![v];
            collect_sets(&pool, &mut chosen, 0, &mut compact);
        }
        let mut ranked: Vec<([u32; 6], usize, u32)> = compact
            .into_iter()
            .map(|set: [u32; 6]| {
                let inner = pairs(&set).filter(|&(x, y)| g.has_edge(x as usize, y as usize)).count();
                let spread = set.iter().map(|&x| dist[x as usize]).sum();
                (set, inner, spread)
            })
            .collect();
        ranked.sort_by_key(|&(set, inner, spread)| (std::cmp::Reverse(inner), spread, set));
        for (set, _, _) in ranked {
            if let Some(w) = self.try_set(&set, ATTEMPT_CAP) {
                return SubdivisionSearch::Found(w);
            }
            if self.exhausted_budget {
                return SubdivisionSearch::Timeout;
            }
        }
        // Exhaustive phase: grow the candidate pool; every 6-set containing the
        // newest candidate is tried once, so the union over pool sizes covers
        // every 6-set.
        for newest in 5..cands.len() {
            let mut chosen = vec![cands[newest]];
            if let Some(w) = self.choose(&cands[..newest], &mut chosen, 0, u64::MAX) {
                return SubdivisionSearch::Found(w);
            }
            if self.exhausted_budget {
                return SubdivisionSearch::Timeout;
            }
        }
        SubdivisionSearch::NotFound
    }

    fn choose(
        &mut self,
        pool: &[u32],
        chosen: &mut Vec<u32>,
        from: usize,
        cap: u64,
    ) -> Option<SubdivisionWitness> {
        if chosen.len() == 6 {
            return self.try_set(chosen, cap);
        }
        for i in from..pool.len() {
            if !self.tick() {
                return None;
            }
            chosen.push(pool[i]);
            let found = self.choose(pool, chosen, i + 1, cap);
            chosen.pop();
            if found.is_some() || self.exhausted_budget {
                return found;
            }
        }
        None
    }

    fn try_set(&mut self, set: &[u32], cap: u64) -> Option<SubdivisionWitness> {
        // 15 perfect matchings of the six chosen vertices into opposite pairs.
        let mut matchings = Vec::new();
        let rest: Vec<usize> = (1..6).collect();
        for &m0 in &rest {
            let r1: Vec<usize> = rest.iter().copied().filter(|&x| x != m0).collect();
            let a = r1[0];
            for &m1 in &r1[1..] {
                let r2: Vec<usize> = r1[1..].iter().copied().filter(|&x| x != m1).collect();
                matchings.push([0, m0, a, m1, r2[0], r2[1]]);
            }
        }
        // Prefer matchings whose opposite pairs are not host edges.
        matchings.sort_by_key(|m| {
            (0..3)
                .filter(|&i| self.g.has_edge(set[m[2 * i]] as usize, set[m[2 * i + 1]] as usize))
                .count()
        });
        for order in matchings {
            let branch: Vec<u32> = order.iter().map(|&i| set[i]).collect();
            let found = self.try_matching(&branch, cap);
            if found.is_some() || self.exhausted_budget {
                return found;
            }
        }
        None
    }

    fn try_matching(&mut self, branch: &[u32], cap: u64) -> Option<SubdivisionWitness> {
        for &b in branch {
            self.is_branch[b as usize] = true;
        }
        let mut edges: Vec<(usize, usize)> = octahedron_edges();
        let d: Vec<Vec<u32>> = branch
            .iter()
            .map(|&b| bfs_distances(self.g, b as usize))
            .collect();
        edges.sort_by_key(|&(a, b)| (d[a][branch[b] as usize], a, b));
        let mut paths = vec![Vec::new(); edges.len()];
        self.attempt_left = cap;
        let ok = self.route(branch, &edges, 0, &mut paths);
        for &b in branch {
            self.is_branch[b as usize] = false;
        }
        self.attempt_left = u64::MAX;
        if !ok {
            return None;
        }
        let mut ordered = Vec::with_capacity(12);
        for e in &octahedron_edges() {
            let k = edges.iter().position(|x| x == e).expect("same edge set");
            ordered.push(std::mem::take(&mut paths[k]));
        }
        Some(SubdivisionWitness {
            branch: branch.to_vec(),
            paths: ordered,
        })
    }

    fn capacity_ok(&self, branch: &[u32], edges: &[(usize, usize)], k: usize) -> bool {
        let mut need = [0usize; 6];
        for &(a, b) in &edges[k..] {
            need[a] += 1;
            need[b] += 1;
        }
        for (i, &b) in branch.iter().enumerate() {
            if need[i] == 0 {
                continue;
            }
            let free = self
                .g
                .neighbors(b as usize)
                .iter()
                .filter(|&&w| !self.used[w as usize])
                .count();
            if free < need[i] {
                return false;
            }
        }
        true
    }

    fn route(
        &mut self,
        branch: &[u32],
        edges: &[(usize, usize)],
        k: usize,
        paths: &mut [Vec<u32>],
    ) -> bool {
        if k == edges.len() {
            return true;
        }
        if !self.capacity_ok(branch, edges, k) {
            return false;
        }
        let (a, b) = edges[k];
        let (s, t) = (branch[a] as usize, branch[b] as usize);
        // Distances to t through free, non-branch vertices.
        let n = self.g.vertex_count();
        let mut dist = vec![UNREACHABLE; n];
        dist[t] = 0;
        let mut queue = std::collections::VecDeque::from([t]);
        while let Some(v) = queue.pop_front() {
            if v != t && self.is_branch[v] {
                continue;
            }
            for &w in self.g.neighbors(v) {
                let w = w as usize;
                if dist[w] == UNREACHABLE && !self.used[w] && (!self.is_branch[w] || w == s) {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        if dist[s] == UNREACHABLE {
            return false;
        }
        let shortest = dist[s] as usize;
        let longest = n.min(shortest + 2 * n);
        let mut path = vec![s as u32];
        let mut limit = shortest;
        while limit <= longest {
            if self.extend(branch, edges, k, paths, &mut path, &dist, t, limit) {
                return true;
            }
            if self.exhausted_budget {
                return false;
            }
            limit += 1;
        }
        false
    }

    /// Enumerates paths of length exactly `limit` from the end of `path` to `t`.
    #[allow(clippy::too_many_arguments)]
    fn extend(
        &mut self,
        branch: &[u32],
        edges: &[(usize, usize)],
        k: usize,
        paths: &mut [Vec<u32>],
        path: &mut Vec<u32>,
        dist: &[u32],
        t: usize,
        limit: usize,
    ) -> bool {
        if !self.tick() {
            return false;
        }
        let v = *path.last().expect("nonempty path") as usize;
        let remaining = limit - (path.len() - 1);
        if v == t {
            if remaining != 0 {
                return false;
            }
            paths[k] = path.clone();
            return self.route(branch, edges, k + 1, paths);
        }
        if remaining == 0 {
            return false;
        }
        for i in 0..self.g.degree(v) {
            let w = self.g.neighbors(v)[i] as usize;
            if w == t {
                if remaining != 1 {
                    continue;
                }
            } else if self.used[w]
                || self.is_branch[w]
                || dist[w] == UNREACHABLE
                || dist[w] as usize > remaining - 1
            {
                continue;
            }
            if w != t {
                self.used[w] = true;
            }
            path.push(w as u32);
            let done = self.extend(branch, edges, k, paths, path, dist, t, limit);
            path.pop();
            if w != t {
                self.used[w] = false;
            }
            if done || self.exhausted_budget {
                return done;
            }
        }
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::diameter;
    use crate::state_space::build_hanoi;

    #[test]
    fn small_levels() {
        let s1 = build_sierpinski(1).unwrap();
        assert_eq!((s1.graph.vertex_count(), s1.graph.edge_count()), (3, 3));
        let s2 = build_sierpinski(2).unwrap();
        assert_eq!((s2.graph.vertex_count(), s2.graph.edge_count()), (6, 9));
        let s4 = build_sierpinski(4).unwrap();
        assert_eq!(s4.graph.vertex_count(), 42);
        assert!(build_sierpinski(0).is_err());
    }

    #[test]
    fn counts_and_degrees() {
        let mut prev = 3usize;
        for level in 1..=7 {
            let s = build_sierpinski(level).unwrap();
            let n = s.graph.vertex_count();
            assert_eq!(n as u128, vertex_count(level));
            if level > 1 {
                assert_eq!(n, 3 * prev - 3);
            }
            prev = n;
            assert_eq!(s.graph.edge_count(), 3usize.pow(level as u32));
            let corners: Vec<u32> = Corner::ALL.iter().map(|&c| s.corner(c)).collect();
            for v in 0..n {
                let want = if corners.contains(&(v as u32)) { 2 } else { 4 };
                assert_eq!(s.graph.degree(v), want, "level {level} vertex {}", s.key(v));
            }
        }
    }

    #[test]
    fn canonical_keys_identify_shared_corners() {
        let s = build_sierpinski(3).unwrap();
        use Corner::*;
        assert_eq!(s.vertex(&[Left, Right], Right), s.vertex(&[Right, Left], Left));
        assert_eq!(s.vertex(&[Left, Top], Top), s.vertex(&[Top, Left], Left));
        assert_eq!(s.vertex(&[Top, Top], Top), Some(s.corner(Top)));
        assert_eq!(s.junction(&[], Left, Right), s.vertex(&[Left, Right], Right));
        assert_eq!(s.key(s.corner(Left) as usize).to_string(), "l");
        assert_eq!(
            s.key(s.junction(&[Top], Left, Right).unwrap() as usize)
                .to_string(),
            "T:lr"
        );
    }

    #[test]
    fn outer_corner_distance() {
        let s = build_sierpinski(5).unwrap();
        assert_eq!(diameter(&s.graph), Some(16));
    }

    #[test]
    fn contraction_small_cases() {
        let h1 = build_hanoi(3, 1).unwrap();
        let (s1, m1) = contract_boundary_edges(&h1.graph).unwrap();
        assert_eq!(s1.graph.vertex_count(), 3);
        assert!(m1.branch_sets.iter().all(|b| b.len() == 1));
        assert!(verify_minor_model(&m1).is_valid());

        let h2 = build_hanoi(3, 2).unwrap();
        let (s2, m2) = contract_boundary_edges(&h2.graph).unwrap();
        assert_eq!(s2.graph.vertex_count(), 6);
        assert_eq!(m2.branch_sets.iter().filter(|b| b.len() == 2).count(), 3);
        assert!(verify_minor_model(&m2).is_valid());

        let h5 = build_hanoi(3, 5).unwrap();
        let (s5, m5) = contract_boundary_edges(&h5.graph).unwrap();
        assert_eq!(s5.graph.vertex_count(), 123);
        assert!(m5.branch_sets.iter().all(|b| !b.is_empty() && b.len() <= 2));
        assert!(verify_minor_model(&m5).is_valid());
    }

    #[test]
    fn contraction_rejects_other_graphs() {
        assert!(contract_boundary_edges(&Graph::complete(4)).is_err());
        assert!(contract_boundary_edges(&Graph::cycle(9)).is_err());
    }

    #[test]
    fn hanoi_minor_models_verify() {
        let s2 = build_sierpinski(2).unwrap();
        let m = embed_hanoi_minor(&s2).unwrap();
        assert_eq!(m.pattern.vertex_count(), 3);
        assert!(verify_minor_model(&m).is_valid());
        let s3 = build_sierpinski(3).unwrap();
        let m = embed_hanoi_minor(&s3).unwrap();
        assert_eq!(m.branch_sets.len(), 9);
        assert!(verify_minor_model(&m).is_valid());
        for level in 4..=6 {
            let s = build_sierpinski(level).unwrap();
            let m = embed_hanoi_minor(&s).unwrap();
            let report = verify_minor_model(&m);
            assert!(report.is_valid(), "level {level}: {:?}", report.violations);
            // outer corners stay unused
            let owner = m.owner_map();
            for c in Corner::ALL {
                assert!(owner[s.corner(c) as usize].is_none());
            }
        }
        assert!(embed_hanoi_minor(&build_sierpinski(1).unwrap()).is_err());
    }

    #[test]
    fn verifier_reports_overlap_and_disconnection() {
        let host = Graph::path(4);
        let pattern = Graph::path(2);
        let m = MinorModel::new(host.clone(), pattern.clone(), vec![vec![0, 1], vec![1, 2]]);
        let r = verify_minor_model(&m);
        assert!(r.violations.contains(&MinorViolation::SharedVertex {
            vertex: 1,
            first: 0,
            second: 1
        }));
        let m = MinorModel::new(host, pattern, vec![vec![0, 2], vec![1]]);
        let r = verify_minor_model(&m);
        assert!(r
            .violations
            .contains(&MinorViolation::DisconnectedBranchSet { pattern_vertex: 0 }));
    }

    #[test]
    fn minor_model_json_round_trip() {
        let s = build_sierpinski(4).unwrap();
        let m = embed_hanoi_minor(&s).unwrap();
        let back = MinorModel::from_json(s.graph.clone(), &m.to_json()).unwrap();
        assert_eq!(back, m);
        assert!(MinorModel::from_json(s.graph.clone(), "{").is_err());
    }

    #[test]
    fn shipped_s5_witness_verifies() {
        let s = build_sierpinski(5).unwrap();
        let w = SubdivisionWitness::from_json(S5_OCTAHEDRON_JSON).unwrap();
        assert!(verify_subdivision(&s.graph, &w).is_empty());
        assert_eq!(SubdivisionWitness::from_json(&w.to_json()).unwrap(), w);
    }

    #[test]
    fn verifier_rejects_shared_internal_vertex() {
        let s = build_sierpinski(5).unwrap();
        let mut w = SubdivisionWitness::from_json(S5_OCTAHEDRON_JSON).unwrap();
        let long = (0..12).max_by_key(|&k| w.paths[k].len()).unwrap();
        let other = (0..12).find(|&k| k != long && w.paths[k].len() > 2)
            .unwrap();
        let stolen = w.paths[other][1];
        w.paths[long].insert(1, stolen);
        let violations = verify_subdivision(&s.graph, &w);
        assert!(violations
            .iter()
            .any(|v| matches!(v, SubdivisionViolation::SharedInternalVertex { .. })));
    }

    #[test]
    fn finder_succeeds_on_s5() {
        let s = build_sierpinski(5).unwrap();
        match find_octahedron_subdivision(&s.graph, DEFAULT_SEARCH_BUDGET) {
            SubdivisionSearch::Found(w) => assert!(verify_subdivision(&s.graph, &w).is_empty()),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn octahedron_shape() {
        let o = octahedron();
        assert_eq!(o.edge_count(), 12);
        assert!((0..6).all(|v| o.degree(v) == 4));
    }

    #[test]
    fn s2_has_no_octahedron() {
        let s2 = build_sierpinski(2).unwrap();
        assert_eq!(
            find_octahedron_subdivision(&s2.graph, DEFAULT_SEARCH_BUDGET),
            SubdivisionSearch::NotFound
        );
    }

    #[test]
    fn octahedron_is_its_own_subdivision() {
        let o = octahedron();
        match find_octahedron_subdivision(&o, 1_000_000) {
            SubdivisionSearch::Found(w) => assert!(verify_subdivision(&o, &w).is_empty()),
            other => panic!("{other:?}"),
        }
    }
}
