//! One test per acceptance criterion.

use hanoi_core::acceptance::{run_criterion, Options};

fn check(id: u8) {
    let r = run_criterion(id, &Options::default()).unwrap();
    println!("[{}] {} ({} ms): {}", r.id, r.title, r.elapsed_ms, r.detail);
    assert!(r.passed, "criterion {id} failed: {}", r.detail);
}

#[test]
fn c01_hanoi_counts() { check(1) }
#[test]
fn c02_three_peg_diameter() { check(2) }
#[test]
fn c03_sierpinski_width() { check(3) }
#[test]
fn c04_octahedron_witness() { check(4) }
#[test]
fn c05_hanoi_pipeline() { check(5) }
#[test]
fn c06_recursive_separator() { check(6) }
#[test]
fn c07_endgame_probabilities() { check(7) }
#[test]
fn c08_sandwich() { check(8) }
#[test]
fn c09_adjacency_rule() { check(9) }
#[test]
fn c10_pegset_counts() { check(10) }
#[test]
fn c11_pegset_paths() { check(11) }
#[test]
fn c12_kneser_diameter() { check(12) }
#[test]
fn c13_kruskal_katona() { check(13) }
#[test]
fn c14_tensor_treewidth() { check(14) }
#[test]
fn c15_haven_treewidth() { check(15) }
#[test]
fn c16_pegsets_per_configuration() { check(16) }
#[test]
fn c17_central_mass() { check(17) }
