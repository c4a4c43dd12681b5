//! Towers-of-Hanoi configurations and the Hanoi graph `H_p^n`.
//!
//! A configuration assigns each of `n` disks (numbered from the smallest) to
//! one of `p` pegs. Vertex ids are mixed-radix encodings: disk `i` contributes
//! `peg_i * p^i`, so the largest disk is the most significant digit and the
//! `p` top-level copies of `H_p^(n-1)` occupy contiguous id blocks.
//!
//! Pegs and disks are 0-indexed inside the crate and 1-indexed in every
//! rendered form ([`Configuration`]'s `Display`, label CSV).

use std::fmt;

use crate::error::{check_cap, Error, Result};
use crate::graph::{Graph, NeighborOracle};

/// Default materialization cap, in vertices.
pub const DEFAULT_CAP: u128 = 1 << 20;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Configuration {
    p: u8,
    pegs: Vec<u8>,
}

impl Configuration {
    /// From 1-indexed pegs, smallest disk first.
    pub fn new(p: usize, pegs: &[usize]) -> Result<Configuration> {
        check_params(p, pegs.len())?;
        let mut zero = Vec::with_capacity(pegs.len());
        for (disk, &peg) in pegs.iter().enumerate() {
            if peg == 0 || peg > p {
                return Err(Error::Parameter(format!(
                    "disk {} sits on peg {peg}, outside 1..={p}",
                    disk + 1
                )));
            }
            zero.push((peg - 1) as u8);
        }
        Ok(Configuration { p: p as u8, pegs: zero })
    }

    /// From 0-indexed pegs, smallest disk first.
    pub fn from_zero_based(p: usize, pegs: Vec<u8>) -> Result<Configuration> {
        check_params(p, pegs.len())?;
        if let Some(&bad) = pegs.iter().find(|&&q| q as usize >= p) {
            return Err(Error::Parameter(format!("peg index {bad} outside 0..{p}")));
        }
        Ok(Configuration { p: p as u8, pegs })
    }

    pub fn from_index(p: usize, n: usize, mut index: u64) -> Configuration {
        let mut pegs = Vec::with_capacity(n);
        for _ in 0..n {
            pegs.push((index % p as u64) as u8);
            index /= p as u64;
        }
        Configuration { p: p as u8, pegs }
    }

    pub fn index(&self) -> u64 {
        self.pegs
            .iter()
            .rev()
            .fold(0u64, |acc, &q| acc * self.p as u64 + q as u64)
    }

    pub fn pegs(&self) -> usize {
        self.p as usize
    }

    pub fn disks(&self) -> usize {
        self.pegs.len()
    }

    /// 0-indexed peg of 0-indexed disk.
    pub fn peg_of(&self, disk: usize) -> usize {
        self.pegs[disk] as usize
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.pegs
    }

    /// Smallest disk on each peg, if any.
    pub fn top_disks(&self) -> Vec<Option<usize>> {
        let mut top = vec![None; self.p as usize];
        for (disk, &q) in self.pegs.iter().enumerate() {
            let slot = &mut top[q as usize];
            if slot.is_none() {
                *slot = Some(disk);
            }
        }
        top
    }
}

impl fmt::Display for Configuration {
    /// Comma-free digit string of 1-indexed pegs, smallest disk first.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &q in &self.pegs {
            let c = char::from_digit(q as u32 + 1, 36).expect("peg count below 36");
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

pub(crate) fn check_params(p: usize, n: usize) -> Result<()> {
    if p < 3 {
        return Err(Error::Parameter(format!("need at least 3 pegs, got {p}")));
    }
    if p > 35 {
        return Err(Error::Parameter(format!("at most 35 pegs supported, got {p}")));
    }
    if n == 0 {
        return Err(Error::Parameter("need at least one disk".into()));
    }
    Ok(())
}

/// Whether one legal move turns `a` into `b`: exactly one disk changes peg and
/// it is the smallest disk on both its source and its target peg.
pub fn is_compatible(a: &Configuration, b: &Configuration) -> Result<bool> {
    if a.p != b.p || a.pegs.len() != b.pegs.len() {
        return Err(Error::Dimension(format!(
            "configurations for (p={}, n={}) and (p={}, n={})",
            a.p,
            a.pegs.len(),
            b.p,
            b.pegs.len()
        )));
    }
    let mut moved = None;
    for (i, (&x, &y)) in a.pegs.iter().zip(&b.pegs).enumerate() {
        if x != y {
            if moved.is_some() {
                return Ok(false);
            }
            moved = Some(i);
        }
    }
    let Some(i) = moved else { return Ok(false) };
    let (from, to) = (a.pegs[i], b.pegs[i]);
    Ok(a.pegs[..i].iter().all(|&q| q != from && q != to))
}

pub fn vertex_count(p: usize, n: usize) -> u128 {
    (p as u128).pow(n as u32)
}

/// `½·C(p,2)·(p^n − (p−2)^n)`.
pub fn edge_count_formula(p: usize, n: usize) -> u128 {
    let p128 = p as u128;
    let pairs = p128 * (p128 - 1) / 2;
    pairs * (p128.pow(n as u32) - (p128 - 2).pow(n as u32)) / 2
}

/// Number of edges moving the largest disk: `C(p,2)·(p−2)^(n−1)`.
pub fn inter_copy_edge_formula(p: usize, n: usize) -> u128 {
    let p128 = p as u128;
    p128 * (p128 - 1) / 2 * (p128 - 2).pow(n as u32 - 1)
}

/// `H_p^n` served through its neighbor function, without materializing.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ImplicitHanoi {
    p: usize,
    n: usize,
    powers: [u64; 64],
}

impl ImplicitHanoi {
    pub fn new(p: usize, n: usize) -> Result<ImplicitHanoi> {
        check_params(p, n)?;
        check_cap("implicit Hanoi graph", vertex_count(p, n), u64::MAX as u128)?;
        let mut powers = [0u64; 64];
        let mut acc = 1u64;
        for slot in powers.iter_mut().take(n) {
            *slot = acc;
            acc = acc.wrapping_mul(p as u64);
        }
        Ok(ImplicitHanoi { p, n, powers })
    }

    pub fn pegs(&self) -> usize {
        self.p
    }

    pub fn disks(&self) -> usize {
        self.n
    }

    /// Calls `f(neighbor, moved_disk)` for every legal move out of `index`.
    pub fn for_each_move<F: FnMut(u64, usize)>(&self, index: u64, mut f: F) {
        let mut top = [usize::MAX; 36];
        let mut rest = index;
        for disk in 0..self.n {
            let q = (rest % self.p as u64) as usize;
            rest /= self.p as u64;
            if top[q] == usize::MAX {
                top[q] = disk;
            }
        }
        for from in 0..self.p {
            let d = top[from];
            if d == usize::MAX {
                continue;
            }
            for to in 0..self.p {
                if to != from && top[to] > d {
                    let w = index + to as u64 * self.powers[d] - from as u64 * self.powers[d];
                    f(w, d);
                }
            }
        }
    }
}

impl NeighborOracle for ImplicitHanoi {
    fn vertex_count(&self) -> usize {
        vertex_count(self.p, self.n) as usize
    }

    fn for_each_neighbor<F: FnMut(usize)>(&self, v: usize, mut f: F) {
        self.for_each_move(v as u64, |w, _| f(w as usize));
    }
}

/// A materialized Hanoi graph; vertex ids are configuration indices.
#[derive(Clone, Debug)]
pub struct HanoiGraph {
    pub p: usize,
    pub n: usize,
    pub graph: Graph,
}

impl HanoiGraph {
    pub fn configuration(&self, v: usize) -> Configuration {
        Configuration::from_index(self.p, self.n, v as u64)
    }

    /// Index of the disk moved along edge `(u, v)`.
    pub fn moved_disk(&self, u: usize, v: usize) -> usize {
        let (mut a, mut b) = (u as u64, v as u64);
        let mut disk = 0;
        while a % self.p as u64 == b % self.p as u64 {
            a /= self.p as u64;
            b /= self.p as u64;
            disk += 1;
        }
        disk
    }

    /// `id,configuration` CSV with 1-indexed ids and pegs.
    pub fn label_csv(&self) -> String {
        let mut out = String::from("id,configuration\n");
        for v in 0..self.graph.vertex_count() {
            out.push_str(&format!("{},{}\n", v + 1, self.configuration(v)));
        }
        out
    }
}

pub fn build_hanoi(p: usize, n: usize) -> Result<HanoiGraph> {
    build_hanoi_with_cap(p, n, DEFAULT_CAP)
}

pub fn build_hanoi_with_cap(p: usize, n: usize, cap: u128) -> Result<HanoiGraph> {
    check_params(p, n)?;
    check_cap("Hanoi graph", vertex_count(p, n), cap)?;
    let oracle = ImplicitHanoi::new(p, n)?;
    let graph = Graph::from_oracle(&oracle)?;
    Ok(HanoiGraph { p, n, graph })
}

/// Configurations where the largest disk is alone on its peg and some peg is
/// empty, i.e. the largest disk can move.
pub fn boundary_vertices(p: usize, n: usize) -> Result<Vec<u32>> {
    check_params(p, n)?;
    check_cap("Hanoi graph", vertex_count(p, n), DEFAULT_CAP)?;
    let mut out = Vec::new();
    for idx in 0..vertex_count(p, n) as u64 {
        let cfg = Configuration::from_index(p, n, idx);
        let big = cfg.peg_of(n - 1);
        let mut counts = vec![0usize; p];
        for &q in cfg.as_slice() {
            counts[q as usize] += 1;
        }
        if counts[big] == 1 && counts.contains(&0) {
            out.push(idx as u32);
        }
    }
    Ok(out)
}

/// The `p` constant configurations.
pub fn perfect_states(p: usize, n: usize) -> Result<Vec<u32>> {
    check_params(p, n)?;
    check_cap("Hanoi graph", vertex_count(p, n), DEFAULT_CAP)?;
    let ones: u64 = (0..n).map(|i| (p as u64).pow(i as u32)).sum();
    Ok((0..p as u64).map(|q| (q * ones) as u32).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{bfs_distance, diameter};

    /// Independent legal-move oracle: simulate the stacks and try every move.
    fn stack_move_oracle(a: &Configuration, b: &Configuration) -> bool {
        let p = a.pegs();
        let mut stacks: Vec<Vec<usize>> = vec![Vec::new(); p];
        for disk in (0..a.disks()).rev() {
            stacks[a.peg_of(disk)].push(disk);
        }
        for from in 0..p {
            for to in 0..p {
                if from == to {
                    continue;
                }
                let Some(&d) = stacks[from].last() else { continue };
                if stacks[to].last().is_some_and(|&t| t < d) {
                    continue;
                }
                let mut pegs = a.as_slice().to_vec();
                pegs[d] = to as u8;
                if pegs == b.as_slice() {
                    return true;
                }
            }
        }
        false
    }

    fn cfg(p: usize, pegs: &[usize]) -> Configuration {
        Configuration::new(p, pegs).unwrap()
    }

    #[test]
    fn compatibility_examples() {
        assert!(is_compatible(&cfg(3, &[1, 1]), &cfg(3, &[2, 1])).unwrap());
        assert!(!is_compatible(&cfg(3, &[1, 1]), &cfg(3, &[1, 2])).unwrap());
        assert!(is_compatible(&cfg(3, &[2, 1]), &cfg(3, &[3, 1])).unwrap());
        assert!(stack_move_oracle(&cfg(3, &[2, 1]), &cfg(3, &[3, 1])));
        assert!(matches!(
            is_compatible(&cfg(3, &[1, 1]), &cfg(4, &[1, 1])),
            Err(Error::Dimension(_))
        ));
        assert!(is_compatible(&cfg(3, &[1]), &cfg(3, &[1, 1])).is_err());
    }

    #[test]
    fn compatibility_matches_stack_oracle() {
        for (p, n) in [(3, 5), (4, 3), (5, 2)] {
            let total = vertex_count(p, n) as u64;
            for i in 0..total {
                let a = Configuration::from_index(p, n, i);
                for j in 0..total {
                    let b = Configuration::from_index(p, n, j);
                    assert_eq!(
                        is_compatible(&a, &b).unwrap(),
                        stack_move_oracle(&a, &b),
                        "{a} vs {b}"
                    );
                }
            }
        }
    }

    #[test]
    fn index_round_trip_and_display() {
        let c = cfg(4, &[2, 4, 1]);
        assert_eq!(c.to_string(), "241");
        assert_eq!(Configuration::from_index(4, 3, c.index()), c);
        assert!(Configuration::new(3, &[0]).is_err());
        assert!(Configuration::new(2, &[1]).is_err());
    }

    /// Counts compatible pairs by brute force over all configuration pairs.
    fn brute_edge_count(p: usize, n: usize) -> usize {
        let total = vertex_count(p, n) as u64;
        let mut count = 0;
        for i in 0..total {
            for j in i + 1..total {
                let a = Configuration::from_index(p, n, i);
                let b = Configuration::from_index(p, n, j);
                if stack_move_oracle(&a, &b) {
                    count += 1;
                }
            }
        }
        count
    }

    #[test]
    fn small_hanoi_counts() {
        let k3 = build_hanoi(3, 1).unwrap();
        assert_eq!((k3.graph.vertex_count(), k3.graph.edge_count()), (3, 3));
        let h32 = build_hanoi(3, 2).unwrap();
        assert_eq!((h32.graph.vertex_count(), h32.graph.edge_count()), (9, 12));
        assert_eq!(brute_edge_count(3, 2), 12);
        let h42 = build_hanoi(4, 2).unwrap();
        assert_eq!((h42.graph.vertex_count(), h42.graph.edge_count()), (16, 36));
        assert_eq!(brute_edge_count(4, 2), 36);
    }

    #[test]
    fn counts_match_formula_and_degrees_bounded() {
        for p in 3..=5usize {
            let mut n = 1;
            while vertex_count(p, n) <= 1 << 12 {
                let h = build_hanoi(p, n).unwrap();
                assert_eq!(h.graph.edge_count() as u128, edge_count_formula(p, n));
                assert!(h.graph.is_connected());
                for v in 0..h.graph.vertex_count() {
                    let d = h.graph.degree(v);
                    assert!(d >= p - 1 && d <= p * (p - 1) / 2, "degree {d}");
                }
                n += 1;
            }
        }
    }

    #[test]
    fn cap_is_enforced() {
        assert!(matches!(
            build_hanoi_with_cap(3, 5, 100),
            Err(Error::Capacity { requested: 243, .. })
        ));
    }

    #[test]
    fn boundary_vertices_examples() {
        assert_eq!(boundary_vertices(3, 2).unwrap().len(), 6);
        assert_eq!(boundary_vertices(3, 1).unwrap().len(), 3);
        // brute: largest disk alone and some empty peg
        let h = build_hanoi(4, 3).unwrap();
        let inter: Vec<_> = h
            .graph
            .edges()
            .filter(|&(u, v)| h.moved_disk(u, v) == 2)
            .collect();
        assert_eq!(inter.len(), 24);
        assert_eq!(inter_copy_edge_formula(4, 3), 24);
        let boundary = boundary_vertices(4, 3).unwrap();
        for &(u, v) in &inter {
            assert!(boundary.binary_search(&(u as u32)).is_ok());
            assert!(boundary.binary_search(&(v as u32)).is_ok());
        }
        // every boundary vertex has an inter-copy edge
        for &b in &boundary {
            assert!(inter.iter().any(|&(u, v)| u == b as usize || v == b as usize));
        }
    }

    #[test]
    fn perfect_states_and_degrees() {
        let ps = perfect_states(3, 4).unwrap();
        let shown: Vec<String> = ps
            .iter()
            .map(|&v| Configuration::from_index(3, 4, v as u64).to_string())
            .collect();
        assert_eq!(shown, ["1111", "2222", "3333"]);
        assert_eq!(perfect_states(5, 1).unwrap(), vec![0, 1, 2, 3, 4]);
        let h = build_hanoi(4, 3).unwrap();
        for v in perfect_states(4, 3).unwrap() {
            assert_eq!(h.graph.degree(v as usize), 3);
        }
    }

    #[test]
    fn three_peg_distances() {
        let h = build_hanoi(3, 5).unwrap();
        let ps = perfect_states(3, 5).unwrap();
        assert_eq!(
            bfs_distance(&h.graph, ps[0] as usize, ps[2] as usize).unwrap(),
            Some(31)
        );
        assert_eq!(bfs_distance(&h.graph, 7, 7).unwrap(), Some(0));
        assert_eq!(diameter(&build_hanoi(3, 3).unwrap().graph), Some(7));
        let implicit = ImplicitHanoi::new(3, 7).unwrap();
        let last = implicit.vertex_count() - 1;
        assert_eq!(bfs_distance(&implicit, 0, last).unwrap(), Some(127));
    }

    #[test]
    fn label_csv_format() {
        let h = build_hanoi(3, 2).unwrap();
        let csv = h.label_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("id,configuration"));
        assert_eq!(lines.next(), Some("1,11"));
        assert_eq!(lines.next(), Some("2,21"));
    }
}
