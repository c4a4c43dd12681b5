use hanoi_web::{board_probability_json, fairness_curve_json, hanoi_board_json, sierpinski_view_json};
use serde_json::Value;

fn parse(s: String) -> Value {
    serde_json::from_str(&s).unwrap()
}

#[test]
fn board_matches_graph() {
    let b = parse(hanoi_board_json(3).unwrap());
    assert_eq!(b["positions"].as_array().unwrap().len(), 27);
    assert_eq!(b["edges"].as_array().unwrap().len(), 39);
    assert_eq!(b["labels"][0], "111");
    assert_eq!(b["presets"]["two_state"].as_array().unwrap().len(), 2);
}

#[test]
fn preset_probabilities() {
    let b = parse(hanoi_board_json(3).unwrap());
    let removed: Vec<u32> = b["presets"]["two_state"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_u64().unwrap() as u32)
        .collect();
    let r = parse(board_probability_json(3, &removed).unwrap());
    assert_eq!(r["probability_num"], "373");
    assert_eq!(r["probability_den"], "729");
    assert!(board_probability_json(3, &[27]).is_err());
}

#[test]
fn witness_overlay_only_at_level_five() {
    let v = parse(sierpinski_view_json(5, true).unwrap());
    assert_eq!(v["witness"]["branch"].as_array().unwrap().len(), 6);
    assert_eq!(v["witness"]["paths"].as_array().unwrap().len(), 12);
    assert!(parse(sierpinski_view_json(4, true).unwrap())["witness"].is_null());
    assert!(parse(sierpinski_view_json(5, false).unwrap())["witness"].is_null());
}

#[test]
fn curve_approaches_limits() {
    let c = parse(fairness_curve_json(8).unwrap());
    let last = &c["points"][7];
    let two = last["two_state"]["value"].as_f64().unwrap();
    let three = last["three_state"]["value"].as_f64().unwrap();
    assert!((two - 5.0 / 9.0).abs() < 0.01);
    assert!((three - 1.0 / 3.0).abs() < 0.01);
    assert_eq!(c["points"][2]["three_state"]["num"], "64");
}
