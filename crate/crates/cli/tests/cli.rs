use std::process::Command;

use serde_json::{json, Value};
use torsor::exact::ideal::{Ideal, IdealJson};
use torsor::support::{StableSet, StableSetJson};

fn torsor(args: &[&str]) -> (Value, i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_torsor")).args(args).output().expect("binary runs");
    let text = String::from_utf8(out.stdout).unwrap();
    let value = serde_json::from_str(&text).unwrap_or(Value::Null);
    (value, out.status.code().unwrap(), text)
}

fn ok(args: &[&str]) -> Value {
    let (v, code, text) = torsor(args);
    assert_eq!(code, 0, "{args:?}: {text}");
    v
}

#[test]
fn local_cohomology_of_z6() {
    let v = ok(&["localcoh", "--ring", "Z/6", "--ideal", "2", "--module", "self"]);
    let h = v["H"].as_array().unwrap();
    assert_eq!(h.len(), 2);
    assert_eq!(h[0]["i"], 0);
    assert_eq!(h[0]["invariant_factors"], json!([2]));
    assert_eq!(h[1]["i"], 1);
    assert_eq!(h[1]["invariant_factors"], json!([]));
}

#[test]
fn routes_agree_through_the_cli() {
    for ring in ["Z/4", "Z/12"] {
        let cech = ok(&["localcoh", "--ring", ring, "--ideal", "2", "--module", "self"]);
        let ext = ok(&["localcoh", "--ring", ring, "--ideal", "2", "--module", "self", "--route", "ext"]);
        assert_eq!(cech, ext, "{ring}");
    }
}

#[test]
fn graded_slices() {
    let v = ok(&[
        "localcoh", "--ring", "Q[x,y]", "--ideal", "x", "--ideal", "y", "--module", "self", "--window", "-2,0",
        "--degree", "2",
    ]);
    assert_eq!(v["H"][0]["dims"]["(-1,-1)"], 1);
    assert_eq!(v["H"][0]["dims"].as_object().unwrap().len(), 4);
}

#[test]
fn gamma_of_a_polynomial_quotient() {
    let v = ok(&["gamma", "--ring", "Q[x,y]", "--ideal", "x", "--module", "quot xy"]);
    assert_eq!(v["generators"], json!(["y"]));
    assert_eq!(v["ambient"], "quot xy");
}

#[test]
fn gamma_by_ideal_and_by_support_agree() {
    let a = ok(&["gamma", "--ring", "Z/12", "--ideal", "2", "--module", "self"]);
    let b = ok(&["gamma", "--ring", "Z/12", "--stable-set", "{(2)}", "--module", "self"]);
    assert_eq!(a["elements"], b["elements"]);
    assert_eq!(a["elements"].as_array().unwrap().len(), 4);
}

#[test]
fn classification_of_z30() {
    let v = ok(&["idem", "classify", "--ring", "Z/30"]);
    let classes = v["classes"].as_array().unwrap();
    assert_eq!(classes.len(), 8);
    let supports: Vec<&Value> = classes.iter().map(|c| &c["support"]).collect();
    for (i, a) in supports.iter().enumerate() {
        assert!(supports[i + 1..].iter().all(|b| a != b));
    }
    assert_eq!(v["order_matches_supports"], true);
    assert_eq!(v["pairwise_distinct"], true);
}

#[test]
fn idempotent_checks() {
    let v = ok(&["idem", "check", "--ring", "Z/6", "--ideal", "2"]);
    assert_eq!(v["report"]["idempotent"], true);
    assert_eq!(v["support"]["data"], json!(["(2)"]));
    let v = ok(&["idem", "leq", "--ring", "Z/30", "--lower", "{(2)}", "--upper", "{(2),(3)}"]);
    assert_eq!(v["leq"], true);
    let v = ok(&["idem", "leq", "--ring", "Z/30", "--lower", "{(5)}", "--upper", "{(2),(3)}"]);
    assert_eq!(v["leq"], false);
}

#[test]
fn continuity_of_the_projection() {
    let v = ok(&[
        "idem", "continuity", "--ring", "Z/6", "--target", "Z/3", "--map", "1", "--stable-set", "{(3)}",
        "--target-set", "all",
    ]);
    assert_eq!(v["continuous"], true);
    let v = ok(&[
        "idem", "continuity", "--ring", "Z/6", "--target", "Z/3", "--map", "1", "--stable-set", "{(2)}",
        "--target-set", "all",
    ]);
    assert_eq!(v["consistent"], true);
    assert_eq!(v["continuous"], false);
}

#[test]
fn output_is_byte_identical() {
    let args = ["idem", "classify", "--ring", "Z/12"];
    assert_eq!(torsor(&args).2, torsor(&args).2);
    let args = ["groebner", "--ring", "Q[x,y]", "--ideal", "x^2-y", "--ideal", "x*y"];
    assert_eq!(torsor(&args).2, torsor(&args).2);
}

#[test]
fn emitted_objects_reparse() {
    let v = ok(&["ideal", "intersection", "--ring", "Q[x,y]", "--ideal", "x", "--other", "y"]);
    let j: IdealJson = serde_json::from_value(v["result"].clone()).unwrap();
    assert_eq!(j.gens, vec!["x*y"]);
    let i = Ideal::from_json(&j).unwrap();
    assert_eq!(i.to_json(), j);

    let v = ok(&["sos", "meet", "--ring", "Z/30", "--stable-set", "{(2),(3)}", "--stable-set", "{(3),(5)}"]);
    let j: StableSetJson = serde_json::from_value(v["meet"].clone()).unwrap();
    assert_eq!(StableSet::from_json(&j).unwrap().to_json(), j);
    assert_eq!(j.data, vec!["(3)"]);
}

#[test]
fn support_verbs() {
    let v = ok(&["sos", "support", "--ring", "Z/6", "--module", "quot 2"]);
    assert_eq!(v["support"]["data"], json!(["(2)"]));
    let v = ok(&["sos", "base", "--ring", "Z/30", "--ideal", "6"]);
    assert_eq!(v["stable_set"]["data"], json!(["(2)", "(3)"]));
    assert_eq!(v["round_trip"], true);
    let v = ok(&["sos", "inverse-image", "--ring", "Q[x]", "--target", "Q[x,y]", "--map", "x*y", "--stable-set", "x"]);
    assert_eq!(v["inverse_image"]["data"], json!(["x*y"]));
}

#[test]
fn exit_codes() {
    let (v, code, _) = torsor(&["groebner", "--ring", "Z/6", "--ideal", "2"]);
    assert_eq!(code, 1);
    assert_eq!(v["error"]["code"], "unsupported-backend");
    let (v, code, _) = torsor(&["localcoh", "--ring", "Q[x]", "--ideal", "x", "--module", "self"]);
    assert_eq!(code, 1);
    assert_eq!(v["error"]["code"], "window-required");
    let (v, code, _) = torsor(&["gamma", "--ring", "Z/6", "--ideal", "7q", "--module", "self"]);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["code"], "invalid-input");
    let (_, code, _) = torsor(&["frobnicate"]);
    assert_eq!(code, 2);
}

#[test]
fn suite_runs_one_criterion() {
    let v = ok(&["suite", "--criterion", "4"]);
    assert_eq!(v["passed"], true);
    assert_eq!(v["criteria"][0]["id"], 4);
}
