//! Searches `S_5` for an octahedron subdivision and prints the witness JSON.
use hanoi_core::fractal::*;

fn main() {
    let s = build_sierpinski(5).unwrap();
    match find_octahedron_subdivision(&s.graph, DEFAULT_SEARCH_BUDGET) {
        SubdivisionSearch::Found(w) => println!("{}", w.to_json()),
        other => eprintln!("{other:?}"),
    }
}
