//! Acceptance checks 1–17, shared by the test suite and the `acceptance` CLI
//! command. Each check recomputes its expected values through a route
//! independent of the code under test where one exists.

use std::collections::HashSet;
use std::time::Instant;

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::decomposition::{
    exact_treewidth, haven_order_at_least, lift_through_minor, sierpinski_decomposition, validate,
};
use crate::error::{Error, Result};
use crate::fractal::{
    build_sierpinski, contract_boundary_edges, embed_hanoi_minor, octahedron, verify_minor_model,
    verify_subdivision, SubdivisionWitness, S5_OCTAHEDRON_JSON,
};
use crate::graph::{bfs_distances, diameter, Graph};
use crate::pegsets::{
    build_g4, build_intersection_graph, enumerate_regular_pegsets, is_automorphism,
    members_intersect, pegset_path, regular_adjacent, PATH_KAPPA,
};
use crate::separators::{
    brute_force_f, brute_force_r, brute_force_s, connection_probability, endgame_removal,
    recursive_separator, Balance, EndgameStrategy,
};
use crate::setfamilies::{
    binomial, build_kneser, central_mass_fraction, central_mass_threshold, kk_trials,
    kneser_diameter_formula, tensor_product,
};
use crate::state_space::{build_hanoi, perfect_states};

/// Bound on `diameter(I_4^n) / n` for `n ∈ {5, 7, 9}`.
pub const PEGSET_DIAMETER_PER_DISK: Ratio<usize> = Ratio::new_raw(3, 5);

/// Odd `n` at which the central-mass check runs (`β = 3/4`).
pub const CENTRAL_MASS_N: usize = 41;

/// Seed for every randomized check.
pub const DEFAULT_SEED: u64 = 0x5eed;

pub const CRITERIA: [(u8, &str); 17] = [
    (1, "Hanoi vertex and edge counts"),
    (2, "three-peg diameter"),
    (3, "Sierpinski decomposition width"),
    (4, "octahedron subdivision witness"),
    (5, "Hanoi width-4 pipeline"),
    (6, "recursive separator"),
    (7, "endgame probabilities"),
    (8, "r <= f <= 3s sandwich"),
    (9, "pegset adjacency rule"),
    (10, "pegset counts and symmetry"),
    (11, "pegset paths and diameter"),
    (12, "Kneser diameter"),
    (13, "Kruskal-Katona shadows"),
    (14, "tensor product treewidth"),
    (15, "haven game and treewidth"),
    (16, "pegsets per configuration"),
    (17, "central binomial mass"),
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Scale {
    #[default]
    Full,
    /// Reduced ranges for smoke runs.
    Quick,
}

#[derive(Clone, Debug, Serialize)]
pub struct Options {
    #[serde(skip)]
    pub scale: Scale,
    pub seed: u64,
    /// Replaces the shipped octahedron witness (JSON text) in criterion 4.
    #[serde(skip)]
    pub witness: Option<String>,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            scale: Scale::Full,
            seed: DEFAULT_SEED,
            witness: None,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CriterionResult {
    pub id: u8,
    pub title: String,
    pub passed: bool,
    pub detail: String,
    pub elapsed_ms: u128,
}

/// Runs one criterion. Errors raised inside a check count as failures.
pub fn run_criterion(id: u8, opts: &Options) -> Result<CriterionResult> {
    let title = CRITERIA
        .iter()
        .find(|c| c.0 == id)
        .ok_or_else(|| Error::Parameter(format!("no criterion {id}")))?
        .1;
    let start = Instant::now();
    let outcome = match id {
        1 => hanoi_counts(opts),
        2 => three_peg_diameter(opts),
        3 => sierpinski_width(opts),
        4 => octahedron_witness(opts),
        5 => hanoi_pipeline(opts),
        6 => separator_levels(opts),
        7 => endgame(),
        8 => sandwich(opts),
        9 => adjacency_rule(opts),
        10 => pegset_counts(),
        11 => pegset_paths(opts),
        12 => kneser_diameters(opts),
        13 => kruskal_katona(opts),
        14 => tensor_treewidth(opts),
        15 => haven_treewidth(opts),
        16 => mapping_bounds(),
        _ => central_mass(),
    };
    let (passed, detail) = match outcome {
        Ok(c) => (c.failures.is_empty(), c.render()),
        Err(e) => (false, format!("error: {e}")),
    };
    Ok(CriterionResult {
        id,
        title: title.to_string(),
        passed,
        detail,
        elapsed_ms: start.elapsed().as_millis(),
    })
}

pub fn run_all(opts: &Options) -> Vec<CriterionResult> {
    CRITERIA
        .iter()
        .map(|&(id, _)| run_criterion(id, opts).expect("known criterion"))
        .collect()
}

/// Accumulates checked facts and failures for one criterion.
#[derive(Default)]
struct Check {
    checked: usize,
    notes: Vec<String>,
    failures: Vec<String>,
}

impl Check {
    fn expect(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok && self.failures.len() < 20 {
            self.failures.push(what());
        } else if !ok {
            self.failures.push(String::new());
        }
    }

    fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    fn render(&self) -> String {
        let mut out = format!("{} checks", self.checked);
        if !self.notes.is_empty() {
            out.push_str("; ");
            out.push_str(&self.notes.join("; "));
        }
        if !self.failures.is_empty() {
            let shown: Vec<&str> = self.failures.iter().filter(|f| !f.is_empty()).map(String::as_str).collect();
            out.push_str(&format!("; {} failed: {}", self.failures.len(), shown.join(" | ")));
        }
        out
    }
}

fn quick(opts: &Options) -> bool {
    opts.scale == Scale::Quick
}

fn hanoi_counts(opts: &Options) -> Result<Check> {
    let mut c = Check::default();
    let limit: u64 = if quick(opts) { 4096 } else { 65536 };
    for p in [3u64, 4, 5] {
        let mut n = 1u32;
        while p.pow(n) <= limit {
            let h = build_hanoi(p as usize, n as usize)?;
            let v = p.pow(n);
            let e = p * (p - 1) / 2 * (v - (p - 2).pow(n)) / 2;
            c.expect(h.graph.vertex_count() as u64 == v, || format!("|V(H_{p}^{n})|"));
            c.expect(h.graph.edge_count() as u64 == e, || {
                format!("|E(H_{p}^{n})| = {} != {e}", h.graph.edge_count())
            });
            n += 1;
        }
    }
    Ok(c)
}

fn three_peg_diameter(opts: &Options) -> Result<Check> {
    let mut c = Check::default();
    let top = if quick(opts) { 8 } else { 12 };
    for n in 1..=top {
        let h = build_hanoi(3, n)?;
        let perfect = perfect_states(3, n)?;
        for &a in &perfect {
            let dist = bfs_distances(&h.graph, a as usize);
            for &b in perfect.iter().filter(|&&b| b != a) {
                let want = (1u32 << n) - 1;
                c.expect(dist[b as usize] == want, || {
                    format!("n={n}: distance {} != {want}", dist[b as usize])
                });
            }
        }
    }
    Ok(c)
}

fn sierpinski_width(opts: &Options) -> Result<Check> {
    let mut c = Check::default();
    let top = if quick(opts) { 6 } else { 8 };
    for n in 3..=top {
        let (s, t) = sierpinski_decomposition(n)?;
        match validate(&s.graph, &t) {
            Ok(w) => c.expect(w == 4, || format!("S_{n} width {w}")),
            Err(v) => c.expect(false, || format!("S_{n}: {}", v[0])),
        }
    }
    Ok(c)
}

fn octahedron_witness(opts: &Options) -> Result<Check> {
    let mut c = Check::default();
    let s5 = build_sierpinski(5)?;
    let w = SubdivisionWitness::from_json(opts.witness.as_deref().unwrap_or(S5_OCTAHEDRON_JSON))?;
    let violations = verify_subdivision(&s5.graph, &w);
    c.expect(violations.is_empty(), || {
        format!("witness: {}", violations.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(", "))
    });
    c.expect(w.branch.len() == 6 && w.paths.len() == 12, || "witness shape".into());
    let tw = exact_treewidth(&octahedron())?;
    c.expect(tw == 4, || format!("octahedron treewidth {tw}"));
    Ok(c)
}

fn hanoi_pipeline(opts: &Options) -> Result<Check> {
    let mut c = Check::default();
    let (lift_top, contract_top) = if quick(opts) { (4, 5) } else { (6, 7) };
    for n in 1..=lift_top {
        let (s, t) = sierpinski_decomposition(n + 1)?;
        let model = embed_hanoi_minor(&s)?;
        c.expect(verify_minor_model(&model).is_valid(), || format!("minor model for H_3^{n}"));
        let lifted = lift_through_minor(&t, &model)?;
        let h = build_hanoi(3, n)?;
        match validate(&h.graph, &lifted) {
            Ok(w) => c.expect(w <= 4, || format!("H_3^{n} lifted width {w}")),
            Err(v) => c.expect(false, || format!("H_3^{n} lifted: {}", v[0])),
        }
    }
    for n in 1..=contract_top {
        let h = build_hanoi(3, n)?;
        let (s, model) = contract_boundary_edges(&h.graph)?;
        c.expect(verify_minor_model(&model).is_valid(), || format!("contraction model n={n}"));
        let reference = build_sierpinski(n)?;
        let same = s.graph.vertex_count() == reference.graph.vertex_count()
            && s.graph.edge_count() == reference.graph.edge_count()
            && reference.graph.edges().all(|(a, b)| s.graph.has_edge(a, b));
        c.expect(same, || format!("contracted H_3^{n} differs from S_{n}"));
    }
    Ok(c)
}

fn separator_levels(opts: &Options) -> Result<Check> {
    let mut c = Check::default();
    let cases: Vec<(usize, usize)> = if quick(opts) {
        (1..=5).map(|n| (4, n)).chain((1..=4).map(|n| (5, n))).collect()
    } else {
        (1..=7).map(|n| (4, n)).chain((1..=6).map(|n| (5, n))).collect()
    };
    for (p, n) in cases {
        let g = build_hanoi(p, n)?.graph;
        let tree = recursive_separator(p, n)?;
        let bad = tree.verify(&g);
        c.expect(bad.is_empty(), || {
            format!("(p={p}, n={n}) node {}: {}", bad[0].node + 1, bad[0].message)
        });
        let pairs = (p * (p - 1) / 2) as u128;
        for (i, &size) in tree.level_sizes().iter().enumerate() {
            let bound = pairs * ((p - 2) as u128).pow((n - 1 - i) as u32);
            c.expect(size as u128 <= bound, || {
                format!("(p={p}, n={n}) level {}: {size} > {bound}", i + 1)
            });
        }
    }
    Ok(c)
}

fn endgame() -> Result<Check> {
    let mut c = Check::default();
    let g3 = build_hanoi(3, 3)?.graph;
    let g8 = build_hanoi(3, 8)?.graph;
    for (strategy, exact, limit) in [
        (EndgameStrategy::TwoState, Ratio::new(373u128, 729), 5.0 / 9.0),
        (EndgameStrategy::ThreeState, Ratio::new(192u128, 729), 1.0 / 3.0),
    ] {
        let r3 = connection_probability(&g3, &endgame_removal(strategy, 3)?)?;
        c.expect(r3.probability == exact, || format!("{strategy:?} n=3: {}", r3.probability));
        let r8 = connection_probability(&g8, &endgame_removal(strategy, 8)?)?;
        let v = r8.probability_f64();
        c.note(format!("{strategy:?} n=8: {v:.6}"));
        c.expect((v - limit).abs() <= 0.01, || format!("{strategy:?} n=8: {v:.6}"));
    }
    Ok(c)
}

/// Named graphs with at most 12 vertices.
pub fn small_graph_corpus() -> Result<Vec<(String, Graph)>> {
    let mut out: Vec<(String, Graph)> = Vec::new();
    for n in 2..=6 {
        out.push((format!("P{n}"), Graph::path(n)));
    }
    for n in 3..=8 {
        out.push((format!("C{n}"), Graph::cycle(n)));
    }
    for n in 2..=6 {
        out.push((format!("K{n}"), Graph::complete(n)));
    }
    out.push(("star5".into(), Graph::from_edges(5, (1..5).map(|v| (0, v)))?));
    out.push((
        "K2,3".into(),
        Graph::from_edges(5, [(0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (1, 4)])?,
    ));
    out.push((
        "wheel6".into(),
        Graph::from_edges(6, (1..6).flat_map(|v| [(0, v), (v, v % 5 + 1)]))?,
    ));
    out.push((
        "cube".into(),
        Graph::from_edges(8, (0..8usize).flat_map(|v| (0..3).map(move |b| (v, v ^ 1 << b))).filter(|&(a, b)| a < b))?,
    ));
    out.push(("grid2x3".into(), Graph::grid(2, 3)));
    out.push(("grid3x3".into(), Graph::grid(3, 3)));
    out.push(("grid3x4".into(), Graph::grid(3, 4)));
    out.push(("octahedron".into(), octahedron()));
    out.push(("petersen".into(), build_kneser(5, 2)?.graph));
    out.push(("H_3^2".into(), build_hanoi(3, 2)?.graph));
    out.push(("H_4^1".into(), build_hanoi(4, 1)?.graph));
    out.push(("S_2".into(), build_sierpinski(2)?.graph));
    out.push(("two-triangles".into(), Graph::from_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])?));
    Ok(out)
}

fn sandwich(opts: &Options) -> Result<Check> {
    let mut c = Check::default();
    let limit = if quick(opts) { 9 } else { 12 };
    let corpus: Vec<(String, Graph)> = small_graph_corpus()?
        .into_iter()
        .filter(|(_, g)| g.vertex_count() <= limit)
        .collect();
    c.note(format!("{} graphs", corpus.len()));
    let run = |(name, g): &(String, Graph)| -> Result<(String, usize, usize, usize)> {
        let b = Balance::InvSqrt2;
        Ok((name.clone(), brute_force_r(g, b)?.0, brute_force_f(g)?.0, brute_force_s(g, b)?))
    };
    #[cfg(feature = "parallel")]
    let rows: Vec<Result<_>> = {
        use rayon::prelude::*;
        corpus.par_iter().map(run).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let rows: Vec<Result<_>> = corpus.iter().map(run).collect();
    for row in rows {
        let (name, r, f, s) = row?;
        if name == "H_3^2" {
            c.note(format!("H_3^2: r={r} f={f} s={s}"));
        }
        c.expect(r <= f && f <= 3 * s, || format!("{name}: r={r} f={f} s={s}"));
    }
    Ok(c)
}

fn adjacency_rule(opts: &Options) -> Result<Check> {
    let mut c = Check::default();
    let cases: &[(usize, usize)] = if quick(opts) { &[(4, 3), (5, 4)] } else { &[(4, 3), (4, 5), (5, 4)] };
    for &(p, n) in cases {
        let all = enumerate_regular_pegsets(p, n)?;
        let mut disagree = 0usize;
        let mut example = None;
        for (i, u) in all.iter().enumerate() {
            for v in &all[i + 1..] {
                let rule = regular_adjacent(u, v)?;
                let truth = members_intersect(u, v)?;
                if rule != truth {
                    disagree += 1;
                    example.get_or_insert_with(|| format!("{u} / {v}: rule {rule}, intersect {truth}"));
                }
            }
        }
        c.note(format!("I_{p}^{n}: {} pairs, {disagree} disagreements", all.len() * (all.len() - 1) / 2));
        c.expect(disagree == 0, || format!("I_{p}^{n}: {}", example.unwrap_or_default()));
    }
    Ok(c)
}

/// `C(p, p−3)` frozen-peg choices times ordered disk splits, as a product of
/// binomials.
fn direct_regular_count(p: usize, n: usize) -> u128 {
    let k = (n - 1) / (p - 2);
    let mut left = n as u64;
    let mut splits = 1u128;
    for _ in 0..p - 3 {
        splits *= binomial(left, k as u64);
        left -= k as u64;
    }
    binomial(p as u64, (p - 3) as u64) * splits
}

fn pegset_counts() -> Result<Check> {
    let mut c = Check::default();
    for (p, n) in [(4, 3), (4, 5), (4, 7), (4, 9), (5, 4), (5, 7), (6, 5), (7, 6)] {
        let got = enumerate_regular_pegsets(p, n)?.len() as u128;
        let want = direct_regular_count(p, n);
        c.expect(got == want, || format!("|V(I_{p}^{n})| = {got} != {want}"));
    }
    let g = build_intersection_graph(4, 5)?;
    for i in 0..5 {
        for j in i + 1..5 {
            let perm = g.swap_permutation(i, j)?;
            c.expect(is_automorphism(&g.graph, &perm), || format!("swap {}-{}", i + 1, j + 1));
            c.expect((0..perm.len()).all(|v| perm[perm[v]] == v), || format!("swap {}-{} involution", i + 1, j + 1));
        }
    }
    let orbit = g.orbit(0)?;
    c.expect(orbit.len() == g.pegsets.len(), || format!("orbit covers {} of {}", orbit.len(), g.pegsets.len()));
    Ok(c)
}

fn pegset_paths(opts: &Options) -> Result<Check> {
    let mut c = Check::default();
    let pairs = if quick(opts) { 50 } else { 200 };
    let mut ratios = Vec::new();
    for n in [5usize, 7, 9] {
        let g = build_intersection_graph(4, n)?;
        let count = g.pegsets.len();
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ n as u64);
        for _ in 0..pairs {
            let (a, b) = (rng.random_range(0..count), rng.random_range(0..count));
            let walk = pegset_path(&g.pegsets[a], &g.pegsets[b])?;
            let dist = bfs_distances(&g.graph, a)[b] as usize;
            let mut prev = &g.pegsets[a];
            let mut valid = true;
            for w in &walk {
                valid &= regular_adjacent(prev, w)?;
                prev = w;
            }
            valid &= prev == &g.pegsets[b];
            c.expect(valid, || format!("n={n}: walk {a}->{b} invalid"));
            c.expect(walk.len() <= PATH_KAPPA * n && walk.len() >= dist, || {
                format!("n={n}: length {} vs distance {dist}", walk.len())
            });
        }
        let d = diameter(&g.graph).ok_or_else(|| Error::InvalidInput(format!("I_4^{n} disconnected")))?;
        ratios.push(format!("diam(I_4^{n})={d}"));
        c.expect(Ratio::new(d, n) <= PEGSET_DIAMETER_PER_DISK, || format!("diam(I_4^{n}) = {d}"));
    }
    c.note(ratios.join(", "));
    Ok(c)
}

fn kneser_diameters(opts: &Options) -> Result<Check> {
    let mut c = Check::default();
    let top = if quick(opts) { 10 } else { 12 };
    for n in 3..=top {
        for k in 1..=(n - 1) / 2 {
            let g = build_kneser(n, k)?;
            let d = diameter(&g.graph);
            let want = kneser_diameter_formula(n, k)?;
            c.expect(d == Some(want), || format!("Kn({n},{k}): {d:?} != {want}"));
        }
    }
    Ok(c)
}

fn kruskal_katona(opts: &Options) -> Result<Check> {
    let mut c = Check::default();
    let trials = if quick(opts) { 200 } else { 1000 };
    for t in kk_trials(trials, 12, opts.seed)? {
        c.expect(t.check.holds, || {
            format!("trial {}: n={} k={} l={} |F|={}", t.trial, t.n, t.k, t.l, t.check.family_size)
        });
    }
    Ok(c)
}

/// Connected graphs on `1..=max` vertices, one per isomorphism class.
pub fn connected_graphs(max: usize) -> Vec<Graph> {
    fn perms(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in perms(n - 1) {
            for i in 0..n {
                let mut q = p.clone();
                q.insert(i, n - 1);
                out.push(q);
            }
        }
        out
    }
    let mut out = Vec::new();
    for n in 1..=max {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
        let ps = perms(n);
        let mut seen = HashSet::new();
        for mask in 0u32..(1 << pairs.len()) {
            let edges: Vec<(usize, usize)> = pairs
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &e)| e)
                .collect();
            let canon = ps
                .iter()
                .map(|p| {
                    let mut e: Vec<(usize, usize)> = edges
                        .iter()
                        .map(|&(a, b)| (p[a].min(p[b]), p[a].max(p[b])))
                        .collect();
                    e.sort_unstable();
                    e
                })
                .min()
                .expect("at least one permutation");
            if !seen.insert(canon) {
                continue;
            }
            let g = Graph::from_edges(n, edges).expect("valid edges");
            if g.is_connected() {
                out.push(g);
            }
        }
    }
    out
}

fn tensor_treewidth(opts: &Options) -> Result<Check> {
    let mut c = Check::default();
    let max = if quick(opts) { 4 } else { 5 };
    let graphs = connected_graphs(max);
    let factors = [("K3", Graph::complete(3)), ("K4", Graph::complete(4)), ("C5", Graph::cycle(5))];
    let jobs: Vec<(usize, usize)> = (0..graphs.len()).flat_map(|g| (0..3).map(move |h| (g, h))).collect();
    let run = |&(gi, hi): &(usize, usize)| -> Result<(usize, usize, usize, usize)> {
        let g = &graphs[gi];
        let product = tensor_product(g, &factors[hi].1)?;
        Ok((gi, hi, exact_treewidth(g)?, exact_treewidth(&product.graph)?))
    };
    #[cfg(feature = "parallel")]
    let rows: Vec<Result<_>> = {
        use rayon::prelude::*;
        jobs.par_iter().map(run).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let rows: Vec<Result<_>> = jobs.iter().map(run).collect();
    c.note(format!("{} graphs x 3 factors", graphs.len()));
    for row in rows {
        let (gi, hi, tg, tp) = row?;
        c.expect(tp >= tg, || {
            format!("graph #{gi} x {}: tw {tp} < {tg}", factors[hi].0)
        });
    }
    Ok(c)
}

fn haven_treewidth(opts: &Options) -> Result<Check> {
    let mut c = Check::default();
    let limit = if quick(opts) { 8 } else { 10 };
    for (name, g) in small_graph_corpus()?.into_iter().filter(|(_, g)| g.vertex_count() <= limit) {
        let tw = exact_treewidth(&g)?;
        for k in 1..=6 {
            let robber = haven_order_at_least(&g, k)?.robber_wins;
            c.expect(robber == (tw + 1 >= k), || format!("{name} k={k}: robber {robber}, tw {tw}"));
        }
    }
    Ok(c)
}

fn mapping_bounds() -> Result<Check> {
    let mut c = Check::default();
    for (p, n) in [(4, 5), (5, 4)] {
        let g = build_intersection_graph(p, n)?;
        let most = g.max_pegsets_per_configuration()?;
        c.note(format!("I_{p}^{n}: {most}"));
        c.expect(most <= p - 2, || format!("H_{p}^{n}: a configuration lies in {most} > {} regular pegsets", p - 2));
    }
    let g4 = build_g4(5)?;
    let most = g4.max_pegsets_per_configuration()?;
    c.note(format!("G_4^5: {most}"));
    c.expect(most <= 4, || format!("G_4^5: {most} > 4"));
    Ok(c)
}

fn central_mass() -> Result<Check> {
    let mut c = Check::default();
    let beta = Ratio::new(3u64, 4);
    let v = central_mass_fraction(CENTRAL_MASS_N, beta)?;
    let value = *v.numer() as f64 / *v.denom() as f64;
    c.note(format!("n={CENTRAL_MASS_N}: {value:.6}"));
    c.expect(v >= Ratio::new(3, 4), || format!("fraction {value:.6} < 0.75"));
    if let Some(t) = central_mass_threshold(beta)? {
        c.note(format!("holds for every odd n in {t}..=63"));
        c.expect(t <= CENTRAL_MASS_N, || format!("threshold {t} above {CENTRAL_MASS_N}"));
    } else {
        c.expect(false, || "no threshold up to 63".into());
    }
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_shape() {
        let corpus = small_graph_corpus().unwrap();
        assert!(corpus.len() >= 20);
        assert!(corpus.iter().all(|(_, g)| g.vertex_count() <= 12));
        assert!(corpus.iter().filter(|(_, g)| g.vertex_count() <= 10).count() >= 20);
        let names: Vec<&str> = corpus.iter().map(|(n, _)| n.as_str()).collect();
        for want in ["H_3^2", "S_2", "petersen"] {
            assert!(names.contains(&want));
        }
    }

    #[test]
    fn graph_classes() {
        let counts: Vec<usize> = (1..=5)
            .map(|n| connected_graphs(n).iter().filter(|g| g.vertex_count() == n).count())
            .collect();
        assert_eq!(counts, vec![1, 1, 2, 6, 21]);
    }

    #[test]
    fn direct_counts() {
        assert_eq!(direct_regular_count(4, 3), 12);
        assert_eq!(direct_regular_count(5, 4), 120);
    }

    #[test]
    fn unknown_criterion() {
        assert!(run_criterion(0, &Options::default()).is_err());
        assert!(run_criterion(18, &Options::default()).is_err());
    }
}
