//! Kneser graphs, disjoint-subset graphs, tensor products and subset-family
//! experiments. Subsets are bitmasks over a ground set of at most 63 elements;
//! element `i` is bit `i` (rendered 1-indexed).

use std::collections::HashMap;

use num_rational::Ratio;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{check_cap, Error, Result};
use crate::graph::Graph;
use crate::pegsets::{build_g4, PegsetGraph};
use crate::state_space::DEFAULT_CAP;

/// Cap on materialized edges for subset graphs and products.
pub const EDGE_CAP: u128 = 1 << 25;

pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k) as u128;
    (0..k).fold(1u128, |acc, i| acc * (n as u128 - i) / (i + 1))
}

fn check_ground(n: usize) -> Result<()> {
    if n == 0 || n > 63 {
        return Err(Error::Parameter(format!(
            "ground set size must be in 1..=63, got {n}"
        )));
    }
    Ok(())
}

/// All `k`-subsets of `[n]` in increasing mask order.
pub fn k_subsets(n: usize, k: usize) -> Vec<u64> {
    if k > n {
        return Vec::new();
    }
    if k == 0 {
        return vec![0];
    }
    let mut out = Vec::new();
    let mut m: u64 = (1u64 << k) - 1;
    let limit = 1u64 << n;
    while m < limit {
        out.push(m);
        // Gosper's hack: next mask with the same popcount.
        let c = m & m.wrapping_neg();
        let r = m + c;
        m = (((r ^ m) >> 2) / c) | r;
    }
    out
}

/// Graph on subsets of `[n]`, adjacent when disjoint.
#[derive(Clone, Debug)]
pub struct SubsetGraph {
    pub n: usize,
    /// Vertex masks, ordered by size then by mask value.
    pub masks: Vec<u64>,
    pub graph: Graph,
    index: HashMap<u64, usize>,
}

impl SubsetGraph {
    fn build(n: usize, masks: Vec<u64>) -> Result<SubsetGraph> {
        let index: HashMap<u64, usize> = masks.iter().enumerate().map(|(i, &m)| (m, i)).collect();
        let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        let mut edges = Vec::new();
        for (i, &u) in masks.iter().enumerate() {
            let free = full & !u;
            // Enumerate submasks of the complement.
            let mut t = free;
            loop {
                if let Some(&j) = index.get(&t) {
                    if j > i {
                        edges.push((i, j));
                    }
                }
                if t == 0 {
                    break;
                }
                t = (t - 1) & free;
            }
        }
        let graph = Graph::from_edges(masks.len(), edges)?;
        Ok(SubsetGraph {
            n,
            masks,
            graph,
            index,
        })
    }

    pub fn index_of(&self, mask: u64) -> Option<usize> {
        self.index.get(&mask).copied()
    }

    /// Vertex ids of the `k`-element subsets.
    pub fn slice(&self, k: usize) -> Vec<u32> {
        (0..self.masks.len())
            .filter(|&i| self.masks[i].count_ones() as usize == k)
            .map(|i| i as u32)
            .collect()
    }

    /// `id,subset` CSV with 1-indexed ids and elements, e.g. `3,{1 4}`.
    pub fn label_csv(&self) -> String {
        let mut out = String::from("id,subset\n");
        for (i, &m) in self.masks.iter().enumerate() {
            out.push_str(&format!("{},{}\n", i + 1, render_subset(m)));
        }
        out
    }
}

pub fn render_subset(mask: u64) -> String {
    let items: Vec<String> = (0..64)
        .filter(|&i| mask >> i & 1 == 1)
        .map(|i| (i + 1).to_string())
        .collect();
    format!("{{{}}}", items.join(" "))
}

/// Kneser graph `Kn(n, k)`.
pub fn build_kneser(n: usize, k: usize) -> Result<SubsetGraph> {
    check_ground(n)?;
    if k > n {
        return Err(Error::Parameter(format!("need k ≤ n, got k = {k}, n = {n}")));
    }
    let v = binomial(n as u64, k as u64);
    check_cap("Kneser graph", v, DEFAULT_CAP)?;
    check_cap("Kneser graph edges", v * binomial((n - k) as u64, k as u64) / 2, EDGE_CAP)?;
    SubsetGraph::build(n, k_subsets(n, k))
}

/// `⌈(k−1)/(n−2k)⌉ + 1`, the diameter of `Kn(n, k)` for `1 ≤ k ≤ (n−1)/2`.
pub fn kneser_diameter_formula(n: usize, k: usize) -> Result<usize> {
    if k == 0 || 2 * k + 1 > n {
        return Err(Error::Parameter(format!(
            "diameter formula needs 1 ≤ k ≤ (n−1)/2, got n = {n}, k = {k}"
        )));
    }
    Ok((k - 1).div_ceil(n - 2 * k) + 1)
}

pub fn ds_vertex_count(n: usize, r: usize) -> u128 {
    (0..=r.min(n)).map(|k| binomial(n as u64, k as u64)).sum()
}

/// Edges of `Ds(n, r)`: unordered disjoint pairs of distinct subsets.
pub fn ds_edge_count(n: usize, r: usize) -> u128 {
    let ordered: u128 = (0..=r.min(n))
        .map(|s| {
            let c = binomial(n as u64, s as u64);
            let partners: u128 = (0..=r.min(n - s)).map(|t| binomial((n - s) as u64, t as u64)).sum();
            c * partners
        })
        .sum();
    // The empty set is disjoint from itself but is not a loop.
    (ordered - 1) / 2
}

/// Disjoint-subset graph `Ds(n, r)`: subsets of size at most `r` including
/// the empty set, adjacent when disjoint and distinct.
pub fn build_ds(n: usize, r: usize) -> Result<SubsetGraph> {
    check_ground(n)?;
    check_cap("disjoint-subset graph", ds_vertex_count(n, r), DEFAULT_CAP)?;
    check_cap("disjoint-subset graph edges", ds_edge_count(n, r), EDGE_CAP)?;
    let masks: Vec<u64> = (0..=r.min(n)).flat_map(|k| k_subsets(n, k)).collect();
    SubsetGraph::build(n, masks)
}

/// `Ds(n) = Ds(n, (n−1)/2)` for odd `n`.
pub fn build_ds_default(n: usize) -> Result<SubsetGraph> {
    if n.is_multiple_of(2) {
        return Err(Error::Parameter(format!("Ds(n) needs odd n, got {n}")));
    }
    build_ds(n, (n - 1) / 2)
}

/// Tensor product `G × H`; vertex `(g, h)` has id `g·|V(H)| + h`.
#[derive(Clone, Debug)]
pub struct ProductGraph {
    pub left: usize,
    pub right: usize,
    pub graph: Graph,
}

impl ProductGraph {
    pub fn pair(&self, v: usize) -> (usize, usize) {
        (v / self.right, v % self.right)
    }

    pub fn vertex(&self, g: usize, h: usize) -> usize {
        g * self.right + h
    }
}

/// `(g, h) ~ (g', h')` iff `g ~ g'` in `G` and `h ~ h'` in `H`.
pub fn tensor_product(g: &Graph, h: &Graph) -> Result<ProductGraph> {
    let (a, b) = (g.vertex_count(), h.vertex_count());
    check_cap("tensor product", (a as u128) * (b as u128), DEFAULT_CAP)?;
    check_cap(
        "tensor product edges",
        2 * g.edge_count() as u128 * h.edge_count() as u128,
        EDGE_CAP,
    )?;
    let mut edges = Vec::with_capacity(2 * g.edge_count() * h.edge_count());
    for (g1, g2) in g.edges() {
        for (h1, h2) in h.edges() {
            edges.push((g1 * b + h1, g2 * b + h2));
            edges.push((g1 * b + h2, g2 * b + h1));
        }
    }
    Ok(ProductGraph {
        left: a,
        right: b,
        graph: Graph::from_edges(a * b, edges)?,
    })
}

/// Comparison of `G_4^n` with `Ds(n) × K_4` under the map
/// `(frozen peg q, frozen disks S) ↦ (S, q)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct G4IsomorphismReport {
    pub n: usize,
    pub g4_vertices: usize,
    pub product_vertices: usize,
    pub g4_edges: usize,
    pub product_edges: usize,
    /// Pairs adjacent in `G_4^n` only, as `G_4^n` ids.
    pub only_in_g4: Vec<(usize, usize)>,
    /// Pairs adjacent in the product only, as `G_4^n` ids.
    pub only_in_product: Vec<(usize, usize)>,
}

impl G4IsomorphismReport {
    pub fn is_isomorphism(&self) -> bool {
        self.g4_vertices == self.product_vertices
            && self.only_in_g4.is_empty()
            && self.only_in_product.is_empty()
    }

    /// Whether every disagreement joins two pegsets with empty frozen sets.
    pub fn only_empty_set_pairs(&self, g4: &PegsetGraph) -> bool {
        self.only_in_g4
            .iter()
            .chain(&self.only_in_product)
            .all(|&(a, b)| g4.pegsets[a].frozen_disks().is_empty() && g4.pegsets[b].frozen_disks().is_empty())
    }

    /// Disagreements left after dropping the empty-set pegsets.
    pub fn nonempty_disagreements(&self, g4: &PegsetGraph) -> usize {
        self.only_in_g4
            .iter()
            .chain(&self.only_in_product)
            .filter(|&&(a, b)| {
                !g4.pegsets[a].frozen_disks().is_empty() || !g4.pegsets[b].frozen_disks().is_empty()
            })
            .count()
    }
}

pub fn check_g4_isomorphism(n: usize) -> Result<G4IsomorphismReport> {
    let g4 = build_g4(n)?;
    let ds = build_ds_default(n)?;
    let product = tensor_product(&ds.graph, &Graph::complete(4))?;
    let map: Vec<usize> = g4
        .pegsets
        .iter()
        .map(|s| {
            let q = s.frozen_pegs()[0];
            let mask = s.disks_on(q).iter().fold(0u64, |m, &d| m | 1 << d);
            product.vertex(ds.index_of(mask).expect("frozen set is a Ds vertex"), q)
        })
        .collect();
    let mut only_in_g4 = Vec::new();
    let mut only_in_product = Vec::new();
    let count = g4.pegsets.len();
    for a in 0..count {
        for b in a + 1..count {
            match (g4.graph.has_edge(a, b), product.graph.has_edge(map[a], map[b])) {
                (true, false) => only_in_g4.push((a, b)),
                (false, true) => only_in_product.push((a, b)),
                _ => {}
            }
        }
    }
    Ok(G4IsomorphismReport {
        n,
        g4_vertices: count,
        product_vertices: product.graph.vertex_count(),
        g4_edges: g4.graph.edge_count(),
        product_edges: product.graph.edge_count(),
        only_in_g4,
        only_in_product,
    })
}

/// All `l`-subsets contained in some member of `family`, ascending.
pub fn shadow(family: &[u64], l: usize) -> Vec<u64> {
    let mut out = Vec::new();
    for &f in family {
        // Submasks of `f` with popcount `l`.
        let mut t = f;
        loop {
            if t.count_ones() as usize == l {
                out.push(t);
            }
            if t == 0 {
                break;
            }
            t = (t - 1) & f;
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// Outcome of one Kruskal–Katona check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KkCheck {
    pub family_size: usize,
    /// Largest `m ≥ k` with `C(m, k) ≤ |F|`, or 0 for an empty family.
    pub m: u64,
    pub shadow_size: usize,
    pub bound: u128,
    pub holds: bool,
}

/// Checks `|∂_l F| ≥ C(m, l)` for the largest `m` with `C(m, k) ≤ |F|`.
pub fn kk_check(family: &[u64], k: usize, l: usize) -> Result<KkCheck> {
    if l == 0 || l >= k {
        return Err(Error::Parameter(format!("need 1 ≤ l < k, got k = {k}, l = {l}")));
    }
    if let Some(&bad) = family.iter().find(|f| f.count_ones() as usize != k) {
        return Err(Error::InvalidInput(format!(
            "{} is not a {k}-subset",
            render_subset(bad)
        )));
    }
    let mut distinct = family.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    let size = distinct.len() as u128;
    let mut m = k as u64;
    while binomial(m + 1, k as u64) <= size {
        m += 1;
    }
    if size == 0 {
        // The statement needs m ≥ k; an empty family carries no bound.
        m = 0;
    }
    let shadow_size = shadow(&distinct, l).len();
    let bound = binomial(m, l as u64);
    Ok(KkCheck {
        family_size: distinct.len(),
        m,
        shadow_size,
        bound,
        holds: shadow_size as u128 >= bound,
    })
}

/// `size` distinct random `k`-subsets of `[n]`.
pub fn random_family<R: Rng>(rng: &mut R, n: usize, k: usize, size: usize) -> Vec<u64> {
    let all = k_subsets(n, k);
    let size = size.min(all.len());
    let mut out: Vec<u64> = sample(rng, all.len(), size).into_iter().map(|i| all[i]).collect();
    out.sort_unstable();
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct KkTrial {
    pub trial: usize,
    pub n: usize,
    pub k: usize,
    pub l: usize,
    pub check: KkCheck,
}

/// Seeded random shadow checks: ground size in `3..=max_n`, `2 ≤ k ≤ n`,
/// `1 ≤ l < k`, and up to 400 distinct `k`-sets per family.
pub fn kk_trials(trials: usize, max_n: usize, seed: u64) -> Result<Vec<KkTrial>> {
    if !(3..=12).contains(&max_n) {
        return Err(Error::Parameter(format!("ground size must be in 3..=12, got {max_n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..trials)
        .map(|trial| {
            let n = rng.random_range(3..=max_n);
            let k = rng.random_range(2..=n);
            let l = rng.random_range(1..k);
            let size = rng.random_range(1..=binomial(n as u64, k as u64).min(400) as usize);
            let family = random_family(&mut rng, n, k, size);
            Ok(KkTrial { trial, n, k, l, check: kk_check(&family, k, l)? })
        })
        .collect()
}

pub fn kk_trials_csv(trials: &[KkTrial]) -> String {
    let mut out = String::from("trial,n,k,l,family_size,shadow_size,bound,holds\n");
    for t in trials {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            t.trial, t.n, t.k, t.l, t.check.family_size, t.check.shadow_size, t.check.bound, t.check.holds
        ));
    }
    out
}

/// Fraction of `Ds(n)` in slices `k ≥ n/2 − ε√n`, with `ε = 1/(2√(1−β))`.
/// The cut is decided exactly: slice `k` counts iff `(n − 2k)²(1 − β) ≤ n`.
pub fn central_mass_fraction(n: usize, beta: Ratio<u64>) -> Result<Ratio<u128>> {
    if n.is_multiple_of(2) || n > 63 {
        return Err(Error::Parameter(format!("need odd n ≤ 63, got {n}")));
    }
    if beta <= Ratio::new(1, 2) || beta >= Ratio::from_integer(1) {
        return Err(Error::Parameter(format!("need 1/2 < β < 1, got {beta}")));
    }
    let rest = Ratio::from_integer(1u64) - beta;
    let (num, den) = (*rest.numer() as u128, *rest.denom() as u128);
    let top = (n - 1) / 2;
    let mass: u128 = (0..=top)
        .filter(|&k| {
            let gap = (n - 2 * k) as u128;
            gap * gap * num <= n as u128 * den
        })
        .map(|k| binomial(n as u64, k as u64))
        .sum();
    Ok(Ratio::new(mass, 1u128 << (n - 1)))
}

/// Smallest odd `n ≤ 63` from which the fraction stays at least `β` up to 63.
pub fn central_mass_threshold(beta: Ratio<u64>) -> Result<Option<usize>> {
    let target = Ratio::new(*beta.numer() as u128, *beta.denom() as u128);
    let mut threshold = None;
    for n in (1..64).step_by(2).rev() {
        if central_mass_fraction(n, beta)? >= target {
            threshold = Some(n);
        } else {
            break;
        }
    }
    Ok(threshold)
}

/// An edge between `a_k` (all `k`-subsets) and `a_l` (all `l`-subsets):
/// disjoint members. Both families must exceed half their slice in `[n]`.
pub fn slice_cross_edge(a_k: &[u64], a_l: &[u64], n: usize) -> Result<Option<(u64, u64)>> {
    check_ground(n)?;
    let size = |a: &[u64]| -> Result<usize> {
        let k = a.first().map_or(0, |m| m.count_ones() as usize);
        if a.iter().any(|m| m.count_ones() as usize != k || m >> n != 0) {
            return Err(Error::InvalidInput("family mixes sizes or leaves [n]".into()));
        }
        Ok(k)
    };
    let (k, l) = (size(a_k)?, size(a_l)?);
    for (a, s) in [(a_k, k), (a_l, l)] {
        let mut d = a.to_vec();
        d.sort_unstable();
        d.dedup();
        if a.is_empty() || 2 * d.len() as u128 <= binomial(n as u64, s as u64) {
            return Err(Error::InvalidInput(format!(
                "family of {}-subsets has density at most one half",
                s
            )));
        }
    }
    if !(l < k && 2 * k < n) {
        return Err(Error::InvalidInput(format!(
            "need l < k ≤ (n−1)/2, got k = {k}, l = {l}, n = {n}"
        )));
    }
    let lookup: std::collections::HashSet<u64> = a_l.iter().copied().collect();
    let full = (1u64 << n) - 1;
    for &u in a_k {
        let free = full & !u;
        for w in shadow(&[free], l) {
            if lookup.contains(&w) {
                return Ok(Some((u, w)));
            }
        }
    }
    Ok(None)
}

/// One randomized run of [`slice_cross_edge`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SliceTrial {
    pub trial: usize,
    pub seed: u64,
    pub k: usize,
    pub l: usize,
    pub found_edge: bool,
}

/// Random families of density just above one half in the top `⌊√n⌋`
/// slices of `Ds(n)`. Trial `t` uses seed `seed + t`.
pub fn slice_experiment(n: usize, trials: usize, seed: u64) -> Result<Vec<SliceTrial>> {
    if n.is_multiple_of(2) || n < 5 {
        return Err(Error::Parameter(format!("need odd n ≥ 5, got {n}")));
    }
    check_cap("slice experiment", binomial(n as u64, (n / 2) as u64), DEFAULT_CAP)?;
    let top = (n - 1) / 2;
    let band = (n as f64).sqrt().floor() as usize;
    let low = top.saturating_sub(band).max(1);
    let run = |t: usize| -> Result<SliceTrial> {
        let s = seed.wrapping_add(t as u64);
        let mut rng = ChaCha8Rng::seed_from_u64(s);
        let k = rng.random_range(low + 1..=top);
        let l = rng.random_range(low..k);
        let pick = |rng: &mut ChaCha8Rng, size: usize| {
            let total = binomial(n as u64, size as u64) as usize;
            let count = total / 2 + 1 + rng.random_range(0..=(total - total / 2 - 1) / 4);
            random_family(rng, n, size, count)
        };
        let a_k = pick(&mut rng, k);
        let a_l = pick(&mut rng, l);
        Ok(SliceTrial {
            trial: t,
            seed: s,
            k,
            l,
            found_edge: slice_cross_edge(&a_k, &a_l, n)?.is_some(),
        })
    };
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..trials).into_par_iter().map(run).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..trials).map(run).collect()
    }
}

/// CSV `trial,seed,k,l,found_edge`.
pub fn slice_experiment_csv(trials: &[SliceTrial]) -> String {
    let mut out = String::from("trial,seed,k,l,found_edge\n");
    for t in trials {
        out.push_str(&format!("{},{},{},{},{}\n", t.trial, t.seed, t.k, t.l, t.found_edge));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::diameter;

    #[test]
    fn gosper_enumeration() {
        assert_eq!(k_subsets(4, 2), vec![0b0011, 0b0101, 0b0110, 0b1001, 0b1010, 0b1100]);
        assert_eq!(k_subsets(3, 0), vec![0]);
        assert_eq!(k_subsets(5, 5), vec![0b11111]);
        for n in 1..=10 {
            for k in 0..=n {
                assert_eq!(k_subsets(n, k).len() as u128, binomial(n as u64, k as u64));
            }
        }
    }

    #[test]
    fn kneser_examples() {
        let p = build_kneser(5, 2).unwrap();
        assert_eq!((p.graph.vertex_count(), p.graph.edge_count()), (10, 15));
        assert_eq!(diameter(&p.graph), Some(2));
        let k = build_kneser(6, 1).unwrap();
        assert_eq!(k.graph.edge_count(), 15);
        let g = build_kneser(7, 3).unwrap();
        assert_eq!(diameter(&g.graph), Some(kneser_diameter_formula(7, 3).unwrap()));
        assert_eq!(kneser_diameter_formula(7, 3).unwrap(), 3);
        assert!(kneser_diameter_formula(6, 3).is_err());
    }

    #[test]
    fn ds_examples() {
        let ds = build_ds_default(7).unwrap();
        assert_eq!(ds.graph.vertex_count(), 64);
        assert_eq!(ds.graph.edge_count() as u128, ds_edge_count(7, 3));
        let small = build_ds(3, 1).unwrap();
        assert_eq!(small.graph.edge_count(), 6);
        assert!(build_ds_default(6).is_err());
        for k in 0..=3 {
            let slice = ds.slice(k);
            let (sub, _) = ds.graph.induced(&slice);
            let kn = build_kneser(7, k).unwrap();
            assert_eq!(sub.edge_count(), kn.graph.edge_count());
            for (a, b) in kn.graph.edges() {
                assert!(sub.has_edge(a, b));
            }
        }
        for n in (1..=25).step_by(2) {
            assert_eq!(ds_vertex_count(n, (n - 1) / 2), 1u128 << (n - 1));
        }
        assert!(ds.label_csv().starts_with("id,subset\n1,{}\n2,{1}\n"));
    }

    #[test]
    fn tensor_examples() {
        let c6 = tensor_product(&Graph::complete(2), &Graph::complete(3)).unwrap();
        assert_eq!(c6.graph.edge_count(), 6);
        assert!(c6.graph.is_connected());
        assert!((0..6).all(|v| c6.graph.degree(v) == 2));
        let none = tensor_product(&Graph::cycle(5), &Graph::complete(1)).unwrap();
        assert_eq!(none.graph.edge_count(), 0);
        let g = Graph::path(4);
        let h = Graph::cycle(3);
        let gh = tensor_product(&g, &h).unwrap();
        let hg = tensor_product(&h, &g).unwrap();
        assert_eq!(gh.graph.edge_count(), 2 * g.edge_count() * h.edge_count());
        for (a, b) in gh.graph.edges() {
            let ((g1, h1), (g2, h2)) = (gh.pair(a), gh.pair(b));
            assert!(hg.graph.has_edge(hg.vertex(h1, g1), hg.vertex(h2, g2)));
        }
    }

    #[test]
    fn g4_against_product() {
        let report = check_g4_isomorphism(5).unwrap();
        let g4 = build_g4(5).unwrap();
        assert_eq!(report.g4_vertices, report.product_vertices);
        assert!(!report.is_isomorphism());
        assert!(report.only_in_product.is_empty());
        // The four empty-set pegsets form a K_4 that the loopless product lacks.
        assert_eq!(report.only_in_g4.len(), 6);
        assert!(report.only_empty_set_pairs(&g4));
        assert_eq!(report.nonempty_disagreements(&g4), 0);
        assert_eq!(report.g4_edges, report.product_edges + 6);
    }

    #[test]
    fn shadows() {
        let all_pairs = k_subsets(4, 2);
        let c = kk_check(&all_pairs, 2, 1).unwrap();
        assert_eq!((c.shadow_size, c.m, c.holds), (4, 4, true));
        let one = kk_check(&[0b111], 3, 2).unwrap();
        assert_eq!((one.shadow_size, one.bound), (3, 3));
        assert!(kk_check(&[0b11], 2, 2).is_err());
        assert!(kk_check(&[0b111], 2, 1).is_err());
        assert_eq!(shadow(&[0b1011], 2), vec![0b0011, 0b1001, 0b1010]);
        let empty = kk_check(&[], 3, 1).unwrap();
        assert!(empty.holds && empty.bound == 0);
    }

    #[test]
    fn random_kk() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let n = rng.random_range(3..=10);
            let k = rng.random_range(2..=n);
            let l = rng.random_range(1..k);
            let size = rng.random_range(1..=binomial(n as u64, k as u64) as usize);
            let f = random_family(&mut rng, n, k, size);
            assert!(kk_check(&f, k, l).unwrap().holds);
        }
    }

    #[test]
    fn central_mass() {
        let beta = Ratio::new(3, 4);
        let v = central_mass_fraction(41, beta).unwrap();
        assert!(v >= Ratio::new(3, 4));
        // When the band covers every slice the fraction is exactly one.
        assert_eq!(central_mass_fraction(3, Ratio::new(99, 100)).unwrap(), Ratio::from_integer(1));
        let a = central_mass_fraction(21, Ratio::new(3, 5)).unwrap();
        let b = central_mass_fraction(21, Ratio::new(9, 10)).unwrap();
        assert!(a <= b);
        assert!(central_mass_fraction(4, beta).is_err());
        assert!(central_mass_fraction(5, Ratio::new(1, 2)).is_err());
        assert!(central_mass_threshold(beta).unwrap().is_some());
    }

    #[test]
    fn slice_edges() {
        let a_k = k_subsets(9, 4);
        let a_l = k_subsets(9, 3);
        assert!(slice_cross_edge(&a_k, &a_l, 9).unwrap().is_some());
        let half = &a_k[..a_k.len() / 2];
        assert!(slice_cross_edge(half, &a_l, 9).is_err());
        let trials = slice_experiment(11, 40, 1).unwrap();
        assert_eq!(trials.len(), 40);
        assert!(trials.iter().all(|t| t.l < t.k && t.k <= 5));
        assert_eq!(slice_experiment(11, 40, 1).unwrap(), trials);
        assert!(slice_experiment_csv(&trials).starts_with("trial,seed,k,l,found_edge\n0,1,"));
    }
}
