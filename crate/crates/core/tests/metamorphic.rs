//! Every verifier must reject every fuzzer mutation of a valid witness.

use hanoi_core::decomposition::{sierpinski_decomposition, validate};
use hanoi_core::fractal::{
    build_sierpinski, embed_hanoi_minor, verify_minor_model, verify_subdivision,
    SubdivisionWitness, S5_OCTAHEDRON_JSON,
};
use hanoi_core::fuzz::{
    decomposition_mutants, minor_mutants, separation_mutants, subdivision_mutants,
};
use hanoi_core::separators::{hanoi_level_separator, recursive_balance, verify_c_separator};
use hanoi_core::state_space::build_hanoi;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn decompositions() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for n in 2..=4 {
        let (s, t) = sierpinski_decomposition(n).unwrap();
        assert!(validate(&s.graph, &t).is_ok());
        let mutants = decomposition_mutants(&s.graph, &t, &mut rng, 150);
        assert!(mutants.len() >= 100);
        for m in mutants {
            assert!(validate(&m.graph, &m.witness).is_err(), "accepted: {}", m.what);
        }
    }
}

#[test]
fn subdivisions() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let s5 = build_sierpinski(5).unwrap();
    let w = SubdivisionWitness::from_json(S5_OCTAHEDRON_JSON).unwrap();
    let mutants = subdivision_mutants(&s5.graph, &w, &mut rng, 200);
    assert_eq!(mutants.len(), 200);
    for m in mutants {
        assert!(!verify_subdivision(&m.graph, &m.witness).is_empty(), "accepted: {}", m.what);
    }
}

#[test]
fn separations() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for (p, n) in [(3, 4), (4, 3), (5, 3)] {
        let g = build_hanoi(p, n).unwrap().graph;
        let x = hanoi_level_separator(p, n).unwrap();
        let sep = verify_c_separator(&g, &x, recursive_balance(p)).unwrap();
        let mutants = separation_mutants(&g, &sep, &mut rng, 100);
        assert_eq!(mutants.len(), 100);
        for m in mutants {
            assert!(!m.witness.check(&m.graph).is_empty(), "accepted: {}", m.what);
        }
    }
}

#[test]
fn minors() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for level in 2..=4 {
        let model = embed_hanoi_minor(&build_sierpinski(level).unwrap()).unwrap();
        assert!(verify_minor_model(&model).is_valid());
        let mutants = minor_mutants(&model, &mut rng, 100);
        assert_eq!(mutants.len(), 100);
        for m in mutants {
            assert!(!verify_minor_model(&m.witness).is_valid(), "accepted: {}", m.what);
        }
    }
}
