//! Pegsets: sets of configurations obtained by freezing chosen disks onto
//! chosen pegs, the regular-pegset intersection graph `I_p^n`, and the
//! four-peg generalization `G_4^n`.
//!
//! Disks and pegs are 0-indexed in the API and 1-indexed in JSON, labels and
//! `Display`, matching [`Configuration`].

use std::collections::{HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{check_cap, Error, Result};
use crate::graph::Graph;
use crate::state_space::{check_params, vertex_count, Configuration, DEFAULT_CAP};

/// Cap on the number of pegsets in an enumerated family.
pub const PEGSET_CAP: u128 = 1 << 16;

/// Walk length bound `PATH_KAPPA · n` met by [`pegset_path`]: at most `p − 3`
/// preamble steps plus four steps per disk that changes its frozen peg.
pub const PATH_KAPPA: usize = 5;

/// Freeze map `ρ`: each disk is frozen onto a peg or left unfrozen. Frozen
/// pegs are stored separately so that a peg may be frozen with no disks.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pegset {
    p: u8,
    frozen: u64,
    rho: Vec<Option<u8>>,
}

impl Pegset {
    /// Builds a pegset from `(peg, disks)` pairs, 0-indexed. Every listed peg
    /// is frozen, even with an empty disk list.
    pub fn new(p: usize, n: usize, frozen: &[(usize, Vec<usize>)]) -> Result<Pegset> {
        check_params(p, n)?;
        let mut rho = vec![None; n];
        let mut mask = 0u64;
        for (peg, disks) in frozen {
            if *peg >= p {
                return Err(Error::Parameter(format!("peg {} outside 1..={p}", peg + 1)));
            }
            if mask >> peg & 1 == 1 {
                return Err(Error::Parameter(format!("peg {} listed twice", peg + 1)));
            }
            mask |= 1 << peg;
            for &d in disks {
                match rho.get_mut(d) {
                    None => {
                        return Err(Error::Parameter(format!("disk {} outside 1..={n}", d + 1)))
                    }
                    Some(Some(_)) => {
                        return Err(Error::Parameter(format!("disk {} frozen twice", d + 1)))
                    }
                    Some(slot) => *slot = Some(*peg as u8),
                }
            }
        }
        Ok(Pegset {
            p: p as u8,
            frozen: mask,
            rho,
        })
    }

    pub fn pegs(&self) -> usize {
        self.p as usize
    }

    pub fn disks(&self) -> usize {
        self.rho.len()
    }

    pub fn rho(&self, disk: usize) -> Option<usize> {
        self.rho[disk].map(usize::from)
    }

    pub fn is_frozen_peg(&self, peg: usize) -> bool {
        self.frozen >> peg & 1 == 1
    }

    pub fn frozen_pegs(&self) -> Vec<usize> {
        (0..self.pegs()).filter(|&q| self.is_frozen_peg(q)).collect()
    }

    pub fn free_pegs(&self) -> Vec<usize> {
        (0..self.pegs()).filter(|&q| !self.is_frozen_peg(q)).collect()
    }

    pub fn frozen_disks(&self) -> Vec<usize> {
        (0..self.disks()).filter(|&d| self.rho[d].is_some()).collect()
    }

    pub fn unfrozen_disks(&self) -> Vec<usize> {
        (0..self.disks()).filter(|&d| self.rho[d].is_none()).collect()
    }

    pub fn disks_on(&self, peg: usize) -> Vec<usize> {
        (0..self.disks())
            .filter(|&d| self.rho(d) == Some(peg))
            .collect()
    }

    /// Frozen disks sit on their pegs and no unfrozen disk sits on a frozen peg.
    pub fn contains(&self, cfg: &Configuration) -> bool {
        cfg.pegs() == self.pegs()
            && cfg.disks() == self.disks()
            && (0..self.disks()).all(|d| match self.rho(d) {
                Some(q) => cfg.peg_of(d) == q,
                None => !self.is_frozen_peg(cfg.peg_of(d)),
            })
    }

    /// Freezes exactly `p − 3` pegs, each holding `⌊(n−1)/(p−2)⌋ ≥ 1` disks.
    pub fn is_regular(&self) -> bool {
        let (p, n) = (self.pegs(), self.disks());
        let k = (n - 1) / (p - 2);
        let frozen = self.frozen_pegs();
        k >= 1 && frozen.len() == p - 3 && frozen.iter().all(|&q| self.disks_on(q).len() == k)
    }

    /// Index map from `H_r^m` onto the members, where `r` counts free pegs and
    /// `m` unfrozen disks: unfrozen disk `j` (ascending) goes to the free peg
    /// named by digit `j`. Edges correspond to edges, so the members induce a
    /// copy of `H_r^m`.
    pub fn free_embedding(&self) -> Result<Vec<u64>> {
        let free = self.free_pegs();
        let loose = self.unfrozen_disks();
        let count = (free.len() as u128).pow(loose.len() as u32);
        check_cap("pegset members", count, DEFAULT_CAP)?;
        let p = self.pegs() as u64;
        let mut base = vec![0u64; self.disks()];
        let mut weight = vec![0u64; self.disks()];
        let mut w = 1u64;
        for d in 0..self.disks() {
            weight[d] = w;
            if let Some(q) = self.rho(d) {
                base[d] = q as u64;
            }
            w *= p;
        }
        let fixed: u64 = (0..self.disks())
            .filter(|&d| self.rho[d].is_some())
            .map(|d| base[d] * weight[d])
            .sum();
        let r = free.len() as u64;
        Ok((0..count as u64)
            .map(|mut idx| {
                let mut v = fixed;
                for &d in &loose {
                    v += free[(idx % r.max(1)) as usize] as u64 * weight[d];
                    idx /= r.max(1);
                }
                v
            })
            .collect())
    }

    /// Member configuration indices, ascending.
    pub fn members(&self) -> Result<Vec<u64>> {
        let mut out = self.free_embedding()?;
        out.sort_unstable();
        Ok(out)
    }

    /// `φ_{i,j}`: exchanges the freeze values of disks `i` and `j`.
    pub fn swap_disks(&self, i: usize, j: usize) -> Result<Pegset> {
        let n = self.disks();
        if i >= n || j >= n {
            return Err(Error::Parameter(format!(
                "disks {} and {} must lie in 1..={n}",
                i + 1,
                j + 1
            )));
        }
        let mut out = self.clone();
        out.rho.swap(i, j);
        Ok(out)
    }

    /// Renames peg `q` to `perm[q]`.
    pub fn relabel_pegs(&self, perm: &[usize]) -> Result<Pegset> {
        let p = self.pegs();
        let mut seen = vec![false; p];
        if perm.len() != p || perm.iter().any(|&q| q >= p || std::mem::replace(&mut seen[q], true)) {
            return Err(Error::Parameter(format!("not a permutation of {p} pegs")));
        }
        let mut frozen = 0u64;
        for q in self.frozen_pegs() {
            frozen |= 1 << perm[q];
        }
        Ok(Pegset {
            p: self.p,
            frozen,
            rho: self.rho.iter().map(|r| r.map(|q| perm[q as usize] as u8)).collect(),
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_doc()).expect("pegset serializes")
    }

    fn to_doc(&self) -> PegsetDoc {
        PegsetDoc {
            n: self.disks(),
            p: self.pegs(),
            frozen: self
                .frozen_pegs()
                .into_iter()
                .map(|q| FrozenDoc {
                    peg: q + 1,
                    disks: self.disks_on(q).into_iter().map(|d| d + 1).collect(),
                })
                .collect(),
        }
    }

    pub fn from_json(text: &str) -> Result<Pegset> {
        let doc: PegsetDoc = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let mut frozen = Vec::new();
        for f in doc.frozen {
            if f.peg == 0 || f.disks.contains(&0) {
                return Err(Error::Parse("pegs and disks are 1-indexed".into()));
            }
            frozen.push((f.peg - 1, f.disks.iter().map(|d| d - 1).collect()));
        }
        Pegset::new(doc.p, doc.n, &frozen)
    }
}

#[derive(Serialize, Deserialize)]
struct PegsetDoc {
    n: usize,
    p: usize,
    frozen: Vec<FrozenDoc>,
}

#[derive(Serialize, Deserialize)]
struct FrozenDoc {
    peg: usize,
    disks: Vec<usize>,
}

impl fmt::Display for Pegset {
    /// `peg[disks]` per frozen peg, 1-indexed, e.g. `2[1 3] 4[]`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for q in self.frozen_pegs() {
            if !first {
                write!(f, " ")?;
            }
            first = false;
            let disks: Vec<String> = self.disks_on(q).iter().map(|d| (d + 1).to_string()).collect();
            write!(f, "{}[{}]", q + 1, disks.join(" "))?;
        }
        if first {
            write!(f, "-")?;
        }
        Ok(())
    }
}

/// Disks frozen per peg in a regular pegset, `(n−1)/(p−2)`. Requires
/// `n ≡ 1 (mod p−2)` and `n ≥ p − 1`.
pub fn regular_freeze_size(p: usize, n: usize) -> Result<usize> {
    check_params(p, n)?;
    if p < 4 {
        return Err(Error::Unsupported(
            "regular pegsets need at least 4 pegs".into(),
        ));
    }
    if !(n - 1).is_multiple_of(p - 2) {
        return Err(Error::Unsupported(format!(
            "regular pegsets need n ≡ 1 (mod {}), got n = {n}",
            p - 2
        )));
    }
    if n < p - 1 {
        return Err(Error::Unsupported(format!(
            "regular pegsets need n ≥ {} so that frozen pegs hold a disk",
            p - 1
        )));
    }
    Ok((n - 1) / (p - 2))
}

fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    (0..k.min(n - k)).fold(1u128, |acc, i| acc * (n - i) / (i + 1))
}

fn factorial(n: u128) -> u128 {
    (1..=n).product()
}

/// `C(p, 3) · n! / ((k!)^(p−3) · (k+1)!)`: choices of frozen pegs times
/// ordered splits of the disks into `p − 3` frozen groups of `k` and one free
/// group of `k + 1`.
pub fn regular_pegset_count(p: usize, n: usize) -> Result<u128> {
    let k = regular_freeze_size(p, n)? as u128;
    if n > 34 {
        return Err(Error::Unsupported("count exceeds 128-bit range".into()));
    }
    let (p, n) = (p as u128, n as u128);
    let split = factorial(n) / (factorial(k).pow((p - 3) as u32) * factorial(k + 1));
    Ok(binomial(p, 3) * split)
}

/// `k`-subsets of `items` in lexicographic order.
fn combinations(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(items: &[usize], k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            if items.len() - i < k - cur.len() {
                break;
            }
            cur.push(items[i]);
            rec(items, k, i + 1, cur, out);
            cur.pop();
        }
    }
    rec(items, k, 0, &mut cur, &mut out);
    out
}

/// All regular pegsets, ordered by frozen-peg list then by per-peg disk lists.
pub fn enumerate_regular_pegsets(p: usize, n: usize) -> Result<Vec<Pegset>> {
    let k = regular_freeze_size(p, n)?;
    check_cap("regular pegsets", regular_pegset_count(p, n)?, PEGSET_CAP)?;
    let pegs: Vec<usize> = (0..p).collect();
    let mut out = Vec::new();
    for q in combinations(&pegs, p - 3) {
        let mut frozen: Vec<(usize, Vec<usize>)> = Vec::new();
        assign(&q, k, &(0..n).collect::<Vec<_>>(), &mut frozen, &mut |frozen| {
            out.push(Pegset::new(p, n, frozen).expect("valid regular pegset"));
        });
    }
    Ok(out)
}

fn assign(
    pegs: &[usize],
    k: usize,
    pool: &[usize],
    frozen: &mut Vec<(usize, Vec<usize>)>,
    emit: &mut impl FnMut(&[(usize, Vec<usize>)]),
) {
    let Some((&peg, rest)) = pegs.split_first() else {
        emit(frozen);
        return;
    };
    for group in combinations(pool, k) {
        let left: Vec<usize> = pool.iter().copied().filter(|d| !group.contains(d)).collect();
        frozen.push((peg, group));
        assign(rest, k, &left, frozen, emit);
        frozen.pop();
    }
}

fn check_regular_pair(u: &Pegset, v: &Pegset) -> Result<()> {
    if u.pegs() != v.pegs() || u.disks() != v.disks() {
        return Err(Error::Dimension(format!(
            "pegsets over ({}, {}) and ({}, {})",
            u.pegs(),
            u.disks(),
            v.pegs(),
            v.disks()
        )));
    }
    for w in [u, v] {
        if !w.is_regular() {
            return Err(Error::InvalidInput(format!("pegset {w} is not regular")));
        }
    }
    Ok(())
}

/// Adjacency in `I_p^n` from freeze data alone: shared frozen disks agree,
/// each pegset freezes exactly one peg the other leaves free, and a disk
/// frozen by only one of them sits on a peg the other leaves free.
pub fn regular_adjacent(u: &Pegset, v: &Pegset) -> Result<bool> {
    check_regular_pair(u, v)?;
    let only_u = (u.frozen & !v.frozen).count_ones();
    let only_v = (v.frozen & !u.frozen).count_ones();
    if only_u != 1 || only_v != 1 {
        return Ok(false);
    }
    for d in 0..u.disks() {
        let ok = match (u.rho(d), v.rho(d)) {
            (Some(a), Some(b)) => a == b,
            (Some(a), None) => !v.is_frozen_peg(a),
            (None, Some(b)) => !u.is_frozen_peg(b),
            (None, None) => true,
        };
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A configuration in both pegsets, built disk by disk, if one exists.
pub fn shared_configuration(u: &Pegset, v: &Pegset) -> Option<Configuration> {
    if u.pegs() != v.pegs() || u.disks() != v.disks() {
        return None;
    }
    let banned = u.frozen | v.frozen;
    let spare = (0..u.pegs()).find(|&q| banned >> q & 1 == 0);
    let mut pegs = Vec::with_capacity(u.disks());
    for d in 0..u.disks() {
        let q = match (u.rho(d), v.rho(d)) {
            (Some(a), Some(b)) => (a == b).then_some(a)?,
            (Some(a), None) => (!v.is_frozen_peg(a)).then_some(a)?,
            (None, Some(b)) => (!u.is_frozen_peg(b)).then_some(b)?,
            (None, None) => spare?,
        };
        pegs.push(q as u8);
    }
    let cfg = Configuration::from_zero_based(u.pegs(), pegs).ok()?;
    debug_assert!(u.contains(&cfg) && v.contains(&cfg));
    Some(cfg)
}

/// Brute-force intersection test: scans the members of `u` for one in `v`.
pub fn members_intersect(u: &Pegset, v: &Pegset) -> Result<bool> {
    let (p, n) = (u.pegs(), u.disks());
    Ok(u
        .free_embedding()?
        .into_iter()
        .any(|i| v.contains(&Configuration::from_index(p, n, i))))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PegsetFamily {
    /// `I_p^n`: regular pegsets, adjacent when they share a configuration.
    Regular,
    /// `G_4^n`: one frozen peg with at most `⌊(n−1)/2⌋` disks; adjacent when
    /// the frozen pegs differ and the frozen disk sets are disjoint.
    G4,
}

#[derive(Clone, Debug)]
pub struct PegsetGraph {
    pub family: PegsetFamily,
    pub p: usize,
    pub n: usize,
    pub pegsets: Vec<Pegset>,
    pub graph: Graph,
    index: HashMap<Pegset, usize>,
}

impl PegsetGraph {
    fn new(family: PegsetFamily, p: usize, n: usize, pegsets: Vec<Pegset>, adjacent: impl Fn(&Pegset, &Pegset) -> bool + Sync) -> Result<PegsetGraph> {
        let count = pegsets.len();
        let row = |i: usize| -> Vec<(usize, usize)> {
            (i + 1..count)
                .filter(|&j| adjacent(&pegsets[i], &pegsets[j]))
                .map(|j| (i, j))
                .collect()
        };
        #[cfg(feature = "parallel")]
        let edges: Vec<(usize, usize)> = {
            use rayon::prelude::*;
            (0..count).into_par_iter().flat_map_iter(row).collect()
        };
        #[cfg(not(feature = "parallel"))]
        let edges: Vec<(usize, usize)> = (0..count).flat_map(row).collect();
        let graph = Graph::from_edges(count, edges)?;
        let index = pegsets.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
        Ok(PegsetGraph {
            family,
            p,
            n,
            pegsets,
            graph,
            index,
        })
    }

    pub fn index_of(&self, pegset: &Pegset) -> Option<usize> {
        self.index.get(pegset).copied()
    }

    pub fn family_name(&self) -> String {
        match self.family {
            PegsetFamily::Regular => format!("I_{}^{}", self.p, self.n),
            PegsetFamily::G4 => format!("G_4^{}", self.n),
        }
    }

    /// `id,pegset` CSV with 1-indexed ids.
    pub fn label_csv(&self) -> String {
        let mut out = String::from("id,pegset\n");
        for (i, s) in self.pegsets.iter().enumerate() {
            out.push_str(&format!("{},{}\n", i + 1, s));
        }
        out
    }

    /// `f({cfg})`: ids of the family pegsets containing `cfg`.
    pub fn pegsets_containing(&self, cfg: &Configuration) -> Vec<usize> {
        (0..self.pegsets.len())
            .filter(|&i| self.pegsets[i].contains(cfg))
            .collect()
    }

    /// `f(X)` for a set of configuration indices.
    pub fn pegsets_meeting(&self, configs: &[u64]) -> Vec<usize> {
        let cfgs: Vec<Configuration> = configs
            .iter()
            .map(|&i| Configuration::from_index(self.p, self.n, i))
            .collect();
        (0..self.pegsets.len())
            .filter(|&i| cfgs.iter().any(|c| self.pegsets[i].contains(c)))
            .collect()
    }

    /// `g(ids)`: union of the members, as sorted configuration indices.
    pub fn configurations_of(&self, ids: &[usize]) -> Result<Vec<u64>> {
        let mut out = Vec::new();
        for &i in ids {
            let s = self.pegsets.get(i).ok_or(Error::InvalidVertex {
                id: i,
                count: self.pegsets.len(),
            })?;
            out.extend(s.free_embedding()?);
        }
        out.sort_unstable();
        out.dedup();
        Ok(out)
    }

    /// Largest `|f({cfg})|` over every configuration of `H_p^n`.
    pub fn max_pegsets_per_configuration(&self) -> Result<usize> {
        check_cap("configuration sweep", vertex_count(self.p, self.n), DEFAULT_CAP)?;
        let mut hits = vec![0usize; vertex_count(self.p, self.n) as usize];
        for s in &self.pegsets {
            for i in s.free_embedding()? {
                hits[i as usize] += 1;
            }
        }
        Ok(hits.into_iter().max().unwrap_or(0))
    }

    /// Vertex permutation induced by `φ_{i,j}`.
    pub fn swap_permutation(&self, i: usize, j: usize) -> Result<Vec<usize>> {
        self.permutation(|s| s.swap_disks(i, j))
    }

    /// Vertex permutation induced by renaming pegs.
    pub fn peg_permutation(&self, perm: &[usize]) -> Result<Vec<usize>> {
        self.permutation(|s| s.relabel_pegs(perm))
    }

    fn permutation(&self, map: impl Fn(&Pegset) -> Result<Pegset>) -> Result<Vec<usize>> {
        self.pegsets
            .iter()
            .map(|s| {
                let image = map(s)?;
                self.index_of(&image).ok_or_else(|| {
                    Error::InvalidInput(format!("image {image} of {s} leaves the family"))
                })
            })
            .collect()
    }

    /// Orbit of vertex `start` under every disk swap and peg transposition.
    pub fn orbit(&self, start: usize) -> Result<Vec<usize>> {
        self.graph.check_vertex(start)?;
        let mut gens = Vec::new();
        for i in 0..self.n {
            for j in i + 1..self.n {
                gens.push(self.swap_permutation(i, j)?);
            }
        }
        for a in 0..self.p {
            for b in a + 1..self.p {
                let mut perm: Vec<usize> = (0..self.p).collect();
                perm.swap(a, b);
                gens.push(self.peg_permutation(&perm)?);
            }
        }
        let mut seen = vec![false; self.pegsets.len()];
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            for g in &gens {
                if !std::mem::replace(&mut seen[g[v]], true) {
                    queue.push_back(g[v]);
                }
            }
        }
        Ok((0..seen.len()).filter(|&v| seen[v]).collect())
    }
}

/// Whether `perm` is a bijection mapping edges onto edges.
pub fn is_automorphism(g: &Graph, perm: &[usize]) -> bool {
    let n = g.vertex_count();
    let mut seen = vec![false; n];
    if perm.len() != n || perm.iter().any(|&v| v >= n || std::mem::replace(&mut seen[v], true)) {
        return false;
    }
    g.edges().all(|(u, v)| g.has_edge(perm[u], perm[v]))
}

/// The pegset intersection graph `I_p^n`.
pub fn build_intersection_graph(p: usize, n: usize) -> Result<PegsetGraph> {
    let pegsets = enumerate_regular_pegsets(p, n)?;
    PegsetGraph::new(PegsetFamily::Regular, p, n, pegsets, |u, v| {
        regular_adjacent(u, v).expect("regular pair")
    })
}

/// Vertex count of `G_4^n`: `4 · Σ_{k ≤ ⌊(n−1)/2⌋} C(n, k)`.
pub fn g4_vertex_count(n: usize) -> u128 {
    4 * (0..=(n.saturating_sub(1) / 2) as u128)
        .map(|k| binomial(n as u128, k))
        .sum::<u128>()
}

/// `G_4^n`, ordered by frozen peg, then frozen-set size, then lexicographically.
pub fn build_g4(n: usize) -> Result<PegsetGraph> {
    check_params(4, n)?;
    if n < 3 {
        return Err(Error::Parameter(format!("G_4^n needs n ≥ 3, got {n}")));
    }
    check_cap("G_4^n pegsets", g4_vertex_count(n), PEGSET_CAP)?;
    let disks: Vec<usize> = (0..n).collect();
    let mut pegsets = Vec::new();
    for peg in 0..4 {
        for k in 0..=(n - 1) / 2 {
            for set in combinations(&disks, k) {
                pegsets.push(Pegset::new(4, n, &[(peg, set)])?);
            }
        }
    }
    PegsetGraph::new(PegsetFamily::G4, 4, n, pegsets, |u, v| {
        u.frozen != v.frozen && (0..n).all(|d| u.rho(d).is_none() || v.rho(d).is_none())
    })
}

/// Walk from `u` to `v` in `I_p^n` (excluding `u`), through pegsets that are
/// consecutively adjacent.
///
/// Mismatched frozen pegs are exchanged one at a time first. Then each frozen
/// peg, in increasing order, has its disk set corrected one disk at a time:
/// a wanted disk that is free is swapped in through an auxiliary free peg (two
/// steps); a wanted disk frozen on another peg is first released through an
/// auxiliary peg (two more steps). Ties go to the lowest disk and peg.
pub fn pegset_path(u: &Pegset, v: &Pegset) -> Result<Vec<Pegset>> {
    check_regular_pair(u, v)?;
    let k = regular_freeze_size(u.pegs(), u.disks())?;
    let mut walk = Vec::new();
    let mut cur = u.clone();

    let step = |cur: &Pegset, release: usize, freeze: usize, disks: &[usize]| -> Pegset {
        let mut next = cur.clone();
        for r in next.rho.iter_mut() {
            if *r == Some(release as u8) {
                *r = None;
            }
        }
        for &d in disks {
            debug_assert!(next.rho[d].is_none());
            next.rho[d] = Some(freeze as u8);
        }
        next.frozen = next.frozen & !(1 << release) | 1 << freeze;
        next
    };

    // Align the frozen peg sets.
    loop {
        let extra = (cur.frozen & !v.frozen).trailing_zeros() as usize;
        let missing = (v.frozen & !cur.frozen).trailing_zeros() as usize;
        if extra >= 64 {
            break;
        }
        let loose = cur.unfrozen_disks();
        let wanted = v.disks_on(missing);
        let mut pick: Vec<usize> = loose.iter().copied().filter(|d| wanted.contains(d)).collect();
        pick.extend(loose.iter().copied().filter(|d| !wanted.contains(d)));
        pick.truncate(k);
        pick.sort_unstable();
        cur = step(&cur, extra, missing, &pick);
        walk.push(cur.clone());
    }

    for q in v.frozen_pegs() {
        loop {
            let have = cur.disks_on(q);
            let want = v.disks_on(q);
            let Some(&d) = want.iter().find(|d| !have.contains(d)) else {
                break;
            };
            let aux = cur.free_pegs()[0];
            if let Some(s) = cur.rho(d) {
                // Release `d` from peg `s`, keeping the lowest free disk back.
                let old = cur.disks_on(s);
                let loose = cur.unfrozen_disks();
                let keep = loose[0];
                cur = step(&cur, s, aux, &loose[1..]);
                walk.push(cur.clone());
                let mut group: Vec<usize> = old.into_iter().filter(|&x| x != d).collect();
                group.push(keep);
                group.sort_unstable();
                cur = step(&cur, aux, s, &group);
                walk.push(cur.clone());
                continue;
            }
            // `d` is free: swap it in for the lowest unwanted disk on `q`.
            let out = *have.iter().find(|x| !want.contains(x)).expect("sizes match");
            let parked: Vec<usize> = cur.unfrozen_disks().into_iter().filter(|&x| x != d).collect();
            cur = step(&cur, q, aux, &parked);
            walk.push(cur.clone());
            let mut group: Vec<usize> = have.into_iter().filter(|&x| x != out).collect();
            group.push(d);
            group.sort_unstable();
            cur = step(&cur, aux, q, &group);
            walk.push(cur.clone());
        }
    }
    if cur != *v {
        return Err(Error::InvalidInput(format!(
            "pegset walk ended at {cur}, not {v}"
        )));
    }
    Ok(walk)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state_space::{build_hanoi, build_hanoi_with_cap};

    fn brute_members(s: &Pegset) -> Vec<u64> {
        let (p, n) = (s.pegs(), s.disks());
        (0..vertex_count(p, n) as u64)
            .filter(|&i| s.contains(&Configuration::from_index(p, n, i)))
            .collect()
    }

    #[test]
    fn members_match_definition() {
        let s = Pegset::new(4, 3, &[(0, vec![0])]).unwrap();
        let m = s.members().unwrap();
        assert_eq!(m.len(), 9);
        assert_eq!(m, brute_members(&s));
        let h = build_hanoi(4, 3).unwrap().graph;
        let ids: Vec<u32> = m.iter().map(|&v| v as u32).collect();
        assert!(h.induced(&ids).0.is_connected());
        let all = Pegset::new(4, 3, &[]).unwrap();
        assert_eq!(all.members().unwrap().len(), 64);
        let empty_peg = Pegset::new(4, 3, &[(2, vec![])]).unwrap();
        assert_eq!(empty_peg.members().unwrap(), brute_members(&empty_peg));
    }

    #[test]
    fn members_induce_three_peg_hanoi() {
        for (p, n) in [(4, 3), (4, 5), (5, 4)] {
            let h = build_hanoi(p, n).unwrap().graph;
            for s in enumerate_regular_pegsets(p, n).unwrap().iter().step_by(7) {
                let map = s.free_embedding().unwrap();
                let small = build_hanoi(3, s.unfrozen_disks().len()).unwrap().graph;
                assert_eq!(map.len(), small.vertex_count());
                let ids: Vec<u32> = map.iter().map(|&v| v as u32).collect();
                let (sub, _) = h.induced(&ids);
                assert_eq!(sub.edge_count(), small.edge_count());
                for (a, b) in small.edges() {
                    assert!(sub.has_edge(a, b));
                }
            }
        }
    }

    #[test]
    fn regular_counts() {
        for (p, n, want) in [(4, 3, 12), (4, 5, 40), (5, 4, 120), (4, 7, 140), (6, 5, 20 * 5 * 4 * 3)] {
            let all = enumerate_regular_pegsets(p, n).unwrap();
            assert_eq!(all.len() as u128, want, "p={p} n={n}");
            assert_eq!(regular_pegset_count(p, n).unwrap(), want);
            assert!(all.iter().all(Pegset::is_regular));
            let mut sorted = all.clone();
            sorted.sort();
            sorted.dedup();
            assert_eq!(sorted.len(), all.len());
        }
        assert!(matches!(enumerate_regular_pegsets(4, 4), Err(Error::Unsupported(_))));
        assert!(matches!(enumerate_regular_pegsets(5, 1), Err(Error::Unsupported(_))));
        assert!(enumerate_regular_pegsets(3, 3).is_err());
    }

    #[test]
    fn adjacency_examples() {
        let ps = |peg: usize, disk: usize| Pegset::new(4, 3, &[(peg, vec![disk])]).unwrap();
        assert!(regular_adjacent(&ps(0, 0), &ps(1, 1)).unwrap());
        assert!(!regular_adjacent(&ps(0, 0), &ps(1, 0)).unwrap());
        assert!(!regular_adjacent(&ps(0, 0), &ps(0, 1)).unwrap());
        let irregular = Pegset::new(4, 3, &[]).unwrap();
        assert!(regular_adjacent(&irregular, &ps(0, 0)).is_err());
    }

    #[test]
    fn adjacency_matches_intersection() {
        for (p, n) in [(4, 3), (4, 5)] {
            let all = enumerate_regular_pegsets(p, n).unwrap();
            for (i, u) in all.iter().enumerate() {
                for v in &all[i + 1..] {
                    let rule = regular_adjacent(u, v).unwrap();
                    assert_eq!(rule, members_intersect(u, v).unwrap(), "{u} / {v}");
                    let shared = shared_configuration(u, v);
                    assert_eq!(shared.is_some(), rule);
                    if let Some(c) = shared {
                        assert!(u.contains(&c) && v.contains(&c));
                    }
                }
            }
        }
    }

    #[test]
    fn one_disk_per_peg_breaks_peg_count_condition() {
        // With one disk per frozen peg, two pegsets can freeze four different
        // pegs between them and still share a configuration.
        let all = enumerate_regular_pegsets(5, 4).unwrap();
        let mut extra = 0;
        for (i, u) in all.iter().enumerate() {
            for v in &all[i + 1..] {
                let rule = regular_adjacent(u, v).unwrap();
                let truth = members_intersect(u, v).unwrap();
                assert!(!rule || truth);
                if truth && !rule {
                    assert_eq!((u.frozen & v.frozen), 0);
                    extra += 1;
                }
            }
        }
        assert_eq!(extra, 360);
    }

    #[test]
    fn adjacency_matches_intersection_sampled() {
        let all = enumerate_regular_pegsets(5, 7).unwrap();
        for u in all.iter().step_by(97) {
            for v in &all {
                assert_eq!(regular_adjacent(u, v).unwrap(), u != v && members_intersect(u, v).unwrap());
            }
        }
    }

    #[test]
    fn intersection_graph_shape() {
        let g = build_intersection_graph(4, 3).unwrap();
        assert_eq!(g.graph.vertex_count(), 12);
        assert_eq!(g.graph.edge_count(), 36);
        assert!(g.graph.is_connected());
        let g = build_intersection_graph(4, 5).unwrap();
        assert_eq!(g.graph.vertex_count(), 40);
        assert!(g.graph.is_connected());
        assert!(g.label_csv().starts_with("id,pegset\n1,1[1 2]\n"));
    }

    #[test]
    fn swaps_are_automorphisms() {
        let g = build_intersection_graph(4, 3).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let perm = g.swap_permutation(i, j).unwrap();
                assert!(is_automorphism(&g.graph, &perm));
                for v in 0..perm.len() {
                    assert_eq!(perm[perm[v]], v);
                }
            }
        }
        assert!(g.swap_permutation(0, 3).is_err());
        let g = build_intersection_graph(4, 5).unwrap();
        assert_eq!(g.orbit(0).unwrap().len(), 40);
        assert!(!is_automorphism(&g.graph, &[0; 40]));
    }

    #[test]
    fn g4_structure() {
        let g = build_g4(3).unwrap();
        assert_eq!(g.graph.vertex_count(), 16);
        assert_eq!(g4_vertex_count(3), 16);
        assert_eq!(build_g4(5).unwrap().graph.vertex_count(), 64);
        let reg = build_intersection_graph(4, 3).unwrap();
        for (a, b) in reg.graph.edges() {
            let (x, y) = (g.index_of(&reg.pegsets[a]).unwrap(), g.index_of(&reg.pegsets[b]).unwrap());
            assert!(g.graph.has_edge(x, y));
        }
        let mut cross = 0;
        for (i, u) in reg.pegsets.iter().enumerate() {
            for (j, v) in reg.pegsets.iter().enumerate() {
                let (x, y) = (g.index_of(u).unwrap(), g.index_of(v).unwrap());
                assert_eq!(g.graph.has_edge(x, y), reg.graph.has_edge(i, j));
                cross += g.graph.has_edge(x, y) as usize;
            }
        }
        assert_eq!(cross, 2 * reg.graph.edge_count());
        for (a, b) in g.graph.edges() {
            let c = shared_configuration(&g.pegsets[a], &g.pegsets[b]).unwrap();
            assert!(g.pegsets[a].contains(&c) && g.pegsets[b].contains(&c));
        }
        assert!(build_g4(2).is_err());
    }

    #[test]
    fn paths_are_valid() {
        for (p, n) in [(4, 3), (4, 5), (5, 4), (6, 5)] {
            let g = build_intersection_graph(p, n).unwrap();
            let dist: Vec<Vec<u32>> = (0..g.pegsets.len())
                .map(|s| crate::graph::bfs_distances(&g.graph, s))
                .collect();
            for (i, u) in g.pegsets.iter().enumerate() {
                for (j, v) in g.pegsets.iter().enumerate() {
                    let walk = pegset_path(u, v).unwrap();
                    assert!(walk.len() <= PATH_KAPPA * n);
                    assert!(walk.len() >= dist[i][j] as usize);
                    let mut prev = u;
                    for w in &walk {
                        assert!(regular_adjacent(prev, w).unwrap(), "{prev} -> {w}");
                        prev = w;
                    }
                    assert_eq!(prev, v);
                    if i == j {
                        assert!(walk.is_empty());
                    }
                    if g.graph.has_edge(i, j) {
                        assert_eq!(walk.len(), 1);
                    }
                }
            }
        }
    }

    #[test]
    fn mapping_bounds() {
        let g = build_intersection_graph(4, 5).unwrap();
        assert_eq!(g.max_pegsets_per_configuration().unwrap(), 2);
        let perfect = Configuration::from_index(4, 3, 0);
        let small = build_intersection_graph(4, 3).unwrap();
        let f = small.pegsets_containing(&perfect);
        assert!(f.len() <= 2);
        assert_eq!(build_g4(5).unwrap().max_pegsets_per_configuration().unwrap(), 4);
        // Four single-disk pegs give C(4,2) regular pegsets in H_5^4.
        assert_eq!(build_intersection_graph(5, 4).unwrap().max_pegsets_per_configuration().unwrap(), 6);
        let h = build_hanoi_with_cap(4, 5, 1 << 12).unwrap();
        for v in (0..h.graph.vertex_count()).step_by(37) {
            let cfg = h.configuration(v);
            let f = g.pegsets_containing(&cfg);
            let back = g.configurations_of(&f).unwrap();
            assert!(f.is_empty() || back.contains(&(v as u64)));
            assert_eq!(g.pegsets_meeting(&[v as u64]), f);
        }
    }

    #[test]
    fn json_round_trip() {
        let s = Pegset::new(5, 4, &[(1, vec![0]), (4, vec![3])]).unwrap();
        let text = s.to_json();
        assert_eq!(text, r#"{"n":4,"p":5,"frozen":[{"peg":2,"disks":[1]},{"peg":5,"disks":[4]}]}"#);
        assert_eq!(Pegset::from_json(&text).unwrap(), s);
        assert_eq!(s.to_string(), "2[1] 5[4]");
        assert!(Pegset::from_json(r#"{"n":4,"p":5,"frozen":[{"peg":0,"disks":[]}]}"#).is_err());
        assert!(Pegset::new(4, 3, &[(0, vec![0]), (1, vec![0])]).is_err());
    }
}
