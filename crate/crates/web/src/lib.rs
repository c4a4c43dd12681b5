//! Browser demo: a three-peg board with forbidden states, a Sierpinski view
//! with the octahedron witness overlay, and the endgame fairness curve.
//!
//! The `*_json` functions are plain Rust so they can be tested natively; the
//! exported wrappers only convert errors for JavaScript.

use hanoi_core::fractal::{build_sierpinski, SubdivisionWitness, S5_OCTAHEDRON_JSON};
use hanoi_core::separators::{connection_probability, endgame_removal, EndgameStrategy};
use hanoi_core::state_space::{build_hanoi, Configuration};
use hanoi_core::{Error, Result};
use serde_json::json;
use wasm_bindgen::prelude::*;

pub const MAX_BOARD_DISKS: usize = 7;
pub const MAX_SIERPINSKI_LEVEL: usize = 7;
pub const MAX_CURVE_DISKS: usize = 10;

fn check(what: &str, value: usize, max: usize) -> Result<()> {
    if value == 0 || value > max {
        return Err(Error::Parameter(format!("{what} must be in 1..={max}, got {value}")));
    }
    Ok(())
}

/// Disk `i` shifts the state toward its peg's corner by `2^i`, so the largest
/// disk picks the outer triangle.
fn board_position(c: &Configuration) -> (f64, f64) {
    const CORNERS: [(f64, f64); 3] = [(0.0, 0.0), (1.0, 0.0), (0.5, 0.866_025_403_784_438_6)];
    let scale = ((1u64 << c.disks()) - 1) as f64;
    let (mut x, mut y) = (0.0, 0.0);
    for (i, &peg) in c.as_slice().iter().enumerate() {
        let w = (1u64 << i) as f64 / scale.max(1.0);
        x += CORNERS[peg as usize].0 * w;
        y += CORNERS[peg as usize].1 * w;
    }
    (x, y)
}

pub fn hanoi_board_json(disks: usize) -> Result<String> {
    check("disks", disks, MAX_BOARD_DISKS)?;
    let h = build_hanoi(3, disks)?;
    let n = h.graph.vertex_count();
    let configs: Vec<Configuration> = (0..n).map(|v| h.configuration(v)).collect();
    let positions: Vec<[f64; 2]> = configs.iter().map(|c| {
        let (x, y) = board_position(c);
        [x, y]
    }).collect();
    // Pegs of the largest disk first, 1-indexed.
    let labels: Vec<String> = configs
        .iter()
        .map(|c| c.as_slice().iter().rev().map(|p| (p + 1).to_string()).collect::<Vec<_>>().join(""))
        .collect();
    let edges: Vec<[usize; 2]> = h.graph.edges().map(|(u, v)| [u, v]).collect();
    Ok(json!({
        "disks": disks,
        "positions": positions,
        "labels": labels,
        "edges": edges,
        "presets": {
            "two_state": endgame_removal(EndgameStrategy::TwoState, disks)?,
            "three_state": endgame_removal(EndgameStrategy::ThreeState, disks)?,
        },
    })
    .to_string())
}

/// Connection probability after removing 0-indexed `removed` from `H_3^disks`.
pub fn board_probability_json(disks: usize, removed: &[u32]) -> Result<String> {
    check("disks", disks, MAX_BOARD_DISKS)?;
    let h = build_hanoi(3, disks)?;
    Ok(connection_probability(&h.graph, removed)?.to_json())
}

/// Positions and edges of `S_level`; at level 5 the octahedron witness is
/// attached (0-indexed) when `overlay` is set.
pub fn sierpinski_view_json(level: usize, overlay: bool) -> Result<String> {
    check("level", level, MAX_SIERPINSKI_LEVEL)?;
    let s = build_sierpinski(level)?;
    let positions: Vec<[f64; 2]> = (0..s.graph.vertex_count())
        .map(|v| {
            let (x, y) = s.position(v);
            [x, y]
        })
        .collect();
    let edges: Vec<[usize; 2]> = s.graph.edges().map(|(u, v)| [u, v]).collect();
    let witness = if overlay && level == 5 {
        let w = SubdivisionWitness::from_json(S5_OCTAHEDRON_JSON)?;
        json!({ "branch": w.branch, "paths": w.paths })
    } else {
        serde_json::Value::Null
    };
    Ok(json!({ "level": level, "positions": positions, "edges": edges, "witness": witness }).to_string())
}

/// Two-state and three-state endgame probabilities for `1..=max_disks`.
pub fn fairness_curve_json(max_disks: usize) -> Result<String> {
    check("max_disks", max_disks, MAX_CURVE_DISKS)?;
    let mut points = Vec::new();
    for n in 1..=max_disks {
        let g = build_hanoi(3, n)?.graph;
        let mut row = json!({ "n": n });
        for (key, strategy) in [("two_state", EndgameStrategy::TwoState), ("three_state", EndgameStrategy::ThreeState)] {
            let r = connection_probability(&g, &endgame_removal(strategy, n)?)?;
            row[key] = json!({
                "num": r.probability.numer().to_string(),
                "den": r.probability.denom().to_string(),
                "value": r.probability_f64(),
            });
        }
        points.push(row);
    }
    Ok(json!({ "points": points, "limits": { "two_state": 5.0 / 9.0, "three_state": 1.0 / 3.0 } }).to_string())
}

fn js(r: Result<String>) -> std::result::Result<String, JsValue> {
    r.map_err(|e| JsValue::from_str(&e.to_string()))
}

#[wasm_bindgen]
pub fn hanoi_board(disks: usize) -> std::result::Result<String, JsValue> {
    js(hanoi_board_json(disks))
}

#[wasm_bindgen]
pub fn board_probability(disks: usize, removed: Vec<u32>) -> std::result::Result<String, JsValue> {
    js(board_probability_json(disks, &removed))
}

#[wasm_bindgen]
pub fn sierpinski_view(level: usize, overlay: bool) -> std::result::Result<String, JsValue> {
    js(sierpinski_view_json(level, overlay))
}

#[wasm_bindgen]
pub fn fairness_curve(max_disks: usize) -> std::result::Result<String, JsValue> {
    js(fairness_curve_json(max_disks))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn board_corners() {
        let h = build_hanoi(3, 3).unwrap();
        let pos = |v: usize| board_position(&h.configuration(v));
        assert_eq!(pos(0), (0.0, 0.0));
        let all_on_second = Configuration::from_zero_based(3, vec![1, 1, 1]).unwrap();
        assert!((board_position(&all_on_second).0 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn bounds() {
        assert!(hanoi_board_json(0).is_err());
        assert!(hanoi_board_json(MAX_BOARD_DISKS + 1).is_err());
        assert!(sierpinski_view_json(MAX_SIERPINSKI_LEVEL + 1, false).is_err());
        assert!(fairness_curve_json(MAX_CURVE_DISKS + 1).is_err());
    }
}
