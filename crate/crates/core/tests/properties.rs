use hanoi_core::decomposition::{sierpinski_decomposition, TreeDecomposition};
use hanoi_core::graph::{parse_edge_list, write_edge_list, Graph};
use hanoi_core::pegsets::{enumerate_regular_pegsets, Pegset};
use hanoi_core::separators::{
    connection_probability, connection_probability_with, hanoi_level_separator, verify_c_separator,
    Balance, DrawModel, SeparatorFile,
};
use hanoi_core::setfamilies::{binomial, build_kneser, kk_check, random_family, tensor_product};
use hanoi_core::state_space::{build_hanoi, edge_count_formula, Configuration};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn small_graph() -> impl Strategy<Value = Graph> {
    (2usize..9).prop_flat_map(|n| {
        proptest::collection::vec((0..n, 0..n), 0..20).prop_map(move |pairs| {
            Graph::from_edges(n, pairs.into_iter().filter(|(a, b)| a != b)).unwrap()
        })
    })
}

proptest! {
    #[test]
    fn removing_more_never_helps(g in small_graph(), picks in proptest::collection::vec(any::<bool>(), 9), extra in 0usize..9) {
        let n = g.vertex_count();
        let x: Vec<u32> = (0..n).filter(|&v| picks[v]).map(|v| v as u32).collect();
        let mut y = x.clone();
        y.push((extra % n) as u32);
        for model in [DrawModel::WithReplacement, DrawModel::WithoutReplacement] {
            let px = connection_probability_with(&g, &x, model).unwrap().probability;
            let py = connection_probability_with(&g, &y, model).unwrap().probability;
            prop_assert!(py <= px);
        }
    }

    #[test]
    fn tensor_edges(a in small_graph(), b in small_graph()) {
        let p = tensor_product(&a, &b).unwrap();
        prop_assert_eq!(p.graph.vertex_count(), a.vertex_count() * b.vertex_count());
        prop_assert_eq!(p.graph.edge_count(), 2 * a.edge_count() * b.edge_count());
        for (u, v) in p.graph.edges() {
            let ((a1, b1), (a2, b2)) = (p.pair(u), p.pair(v));
            prop_assert!(a.has_edge(a1, a2) && b.has_edge(b1, b2));
        }
    }

    #[test]
    fn edge_list_roundtrip(g in small_graph()) {
        let (h, family) = parse_edge_list(&write_edge_list(&g, "x")).unwrap();
        prop_assert_eq!(family, "x");
        prop_assert_eq!(h, g);
    }

    #[test]
    fn hanoi_counts(p in 3usize..7, n in 1usize..5) {
        let h = build_hanoi(p, n).unwrap();
        prop_assert_eq!(h.graph.edge_count() as u128, edge_count_formula(p, n));
    }

    #[test]
    fn configuration_index_roundtrip(p in 3usize..8, n in 1usize..8, seed in any::<u64>()) {
        let index = seed % (p as u64).pow(n as u32);
        let c = Configuration::from_index(p, n, index);
        prop_assert_eq!(c.index(), index);
        prop_assert_eq!(c.disks(), n);
    }

    #[test]
    fn kneser_regular(n in 3usize..10, k in 1usize..5) {
        prop_assume!(2 * k < n);
        let g = build_kneser(n, k).unwrap();
        prop_assert_eq!(g.graph.vertex_count() as u128, binomial(n as u64, k as u64));
        let d = binomial((n - k) as u64, k as u64) as usize;
        prop_assert!((0..g.graph.vertex_count()).all(|v| g.graph.degree(v) == d));
    }

    #[test]
    fn shadows_meet_bound(n in 3usize..10, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = 2 + (seed as usize % (n - 1));
        let l = 1 + (seed as usize / 7) % (k - 1);
        let size = 1 + (seed as usize / 11) % binomial(n as u64, k as u64) as usize;
        let family = random_family(&mut rng, n, k, size);
        prop_assert!(kk_check(&family, k, l).unwrap().holds);
    }

    #[test]
    fn balance_admits_monotone(num in 1u64..20, den in 2u64..21, side in 0usize..50, total in 1usize..50) {
        prop_assume!(2 * num >= den && num < den);
        let b = Balance::ratio(num, den).unwrap();
        if b.admits(side + 1, total) {
            prop_assert!(b.admits(side, total));
        }
        prop_assert_eq!(Balance::InvSqrt2.admits(side, total), 2 * side * side <= total * total);
    }
}

#[test]
fn decomposition_formats_roundtrip() {
    for n in 1..=4 {
        let (s, t) = sierpinski_decomposition(n).unwrap();
        assert_eq!(TreeDecomposition::from_json(&t.to_json()).unwrap(), t);
        assert_eq!(TreeDecomposition::from_pace(&t.to_pace(s.graph.vertex_count())).unwrap(), t);
    }
}

#[test]
fn separator_file_roundtrip() {
    let g = build_hanoi(3, 3).unwrap().graph;
    let x = hanoi_level_separator(3, 3).unwrap();
    let sep = verify_c_separator(&g, &x, Balance::ratio(2, 3).unwrap()).unwrap();
    let file = SeparatorFile::from_json(&sep.to_json()).unwrap();
    assert_eq!(file.verify(&g).unwrap().unwrap(), sep);
    let bare = SeparatorFile { side_a: None, side_b: None, ..file.clone() };
    assert!(bare.verify(&g).unwrap().is_ok());
    assert!(SeparatorFile { balance: "1/sqrt(2)".into(), ..file }.verify(&g).is_ok());
}

#[test]
fn pegset_json_roundtrip() {
    for (p, n) in [(4, 5), (5, 4), (6, 5)] {
        for u in enumerate_regular_pegsets(p, n).unwrap().iter().step_by(7) {
            assert_eq!(&Pegset::from_json(&u.to_json()).unwrap(), u);
        }
    }
}

#[test]
fn nothing_removed_is_certain() {
    let g = build_hanoi(3, 3).unwrap().graph;
    let r = connection_probability(&g, &[]).unwrap();
    assert_eq!(r.probability, num_rational::Ratio::new(1, 1));
}
