use assert_cmd::Command;
use serde_json::{json, Value as Json};

const FIXTURES: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures");

fn run(args: &[&str], stdin: Option<&str>) -> (Json, i32) {
    let mut cmd = Command::cargo_bin("pencil").unwrap();
    cmd.args(args);
    if let Some(s) = stdin {
        cmd.write_stdin(s);
    }
    let out = cmd.output().unwrap();
    let body = serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("not JSON ({e}): {}", String::from_utf8_lossy(&out.stdout)));
    (body, out.status.code().unwrap())
}

fn fixture(name: &str) -> String {
    format!("{FIXTURES}/{name}")
}

#[test]
fn covariants_of_x4_plus_y4() {
    let (v, code) = run(&["covariants", "--input", &fixture("x4y4.json")], None);
    assert_eq!(code, 0);
    assert_eq!(v["schema"], "covariants/v1");
    assert_eq!(v["H"], json!(["0", "0", "144", "0", "0"]));
    assert_eq!(v["F6"], json!(["0", "32", "0", "0", "0", "-32", "0"]));
    assert_eq!(v["disc"], "256");
}

#[test]
fn zero_quartic_has_zero_covariants() {
    let (v, code) = run(&["covariants"], Some(r#"{"quartic":["0","0","0","0","0"]}"#));
    assert_eq!(code, 0);
    assert!(v["H"].as_array().unwrap().iter().all(|c| c == "0"));
    assert!(v["F6"].as_array().unwrap().iter().all(|c| c == "0"));
    assert_eq!((v["I"].clone(), v["J"].clone(), v["disc"].clone()), (json!("0"), json!("0"), json!("0")));
}

#[test]
fn input_errors_exit_with_two() {
    let (v, code) = run(&["covariants"], Some(r#"{"quartic":["1/0","0","0","0","1"]}"#));
    assert_eq!(code, 2);
    assert_eq!(v["schema"], "error/v1");
    assert_eq!(v["error"], "ParseError");
    assert_eq!(v["position"], 2);

    let (v, code) = run(&["pair"], Some("{\"n\": 3,\n  \"A\": ["));
    assert_eq!(code, 2);
    assert_eq!(v["error"], "ParseError");

    let (v, code) = run(&["pair"], Some(r#"{"n":2,"A":[[1,2],[3,4]],"B":[[1,0],[0,1]]}"#));
    assert_eq!(code, 2);
    assert_eq!(v["error"], "NotSymmetric");
}

#[test]
fn pair_of_diagonal_pencil() {
    let (v, code) = run(&["pair", "--input", &fixture("diag123.json")], None);
    assert_eq!(code, 0);
    assert_eq!(v["schema"], "pair/v1");
    assert_eq!(v["C3"], json!({ "xyz": "-16" }));
    assert_eq!(v["C3_decomposable"], true);
    assert_eq!(v["det_form"], json!(["6", "-11", "6", "-1"]));
}

#[test]
fn pair_of_embedded_quartic() {
    let (embedded, code) = run(&["embed", "--input", &fixture("x4y4.json")], None);
    assert_eq!(code, 0);
    assert_eq!(embedded["schema"], "embed/v1");
    let (v, _) = run(&["pair"], Some(&embedded.to_string()));
    assert_eq!(v["g_B"], json!([["0", "0", "0"], ["0", "1", "0"], ["0", "0", "0"]]));
    assert_eq!(v["disc"], "256");
}

#[test]
fn pair_with_four_variables_marks_ternary_fields() {
    let (v, code) = run(&["pair", "--input", &fixture("diag4.json")], None);
    assert_eq!(code, 0);
    assert_eq!(v["C3"]["error"], "DimensionError");
    assert_eq!(v["det_form"].as_array().unwrap().len(), 5);
    assert!(v["g_A"].is_array() && v["g_B"].is_array());
}

#[test]
fn verify_sweeps_pass() {
    for kind in ["mt", "mt2", "disc", "syzygy"] {
        let (v, code) = run(&["verify", kind, "--count", "200", "--box=-20:20", "--seed", "7"], None);
        assert_eq!(code, 0, "{kind}");
        assert_eq!(v["schema"], "verify/v1");
        assert_eq!(v["checked"], 200);
        assert_eq!(v["failures"], json!([]));
    }
}

#[test]
fn empty_sweep() {
    let (v, code) = run(&["verify", "mt", "--count", "0"], None);
    assert_eq!(code, 0);
    assert_eq!(v["checked"], 0);
    assert_eq!(v["failures"], json!([]));
}

#[test]
fn mt3_grid_reports_witnesses() {
    let (v, code) = run(&["verify", "mt3", "--box=-1:1"], None);
    assert_eq!(code, 0);
    assert_eq!(v["failures"], json!([]));
    let w = v["witnesses"].as_array().unwrap();
    let unresolved = v["unresolved"].as_array().unwrap();
    assert!(!w.is_empty());
    assert!(w.iter().all(|x| x["scale"] == "8"));
    assert_eq!(w.len() + unresolved.len() + 9, v["checked"].as_u64().unwrap() as usize);
}

#[test]
fn decide_verdicts() {
    let (v, code) = run(&["decide", "--input", &fixture("diag123.json")], None);
    assert_eq!(code, 0);
    assert_eq!(v["verdict"], "yes");
    assert_eq!(v["witness"]["exact"], true);

    let (v, _) = run(&["decide", "--input", &fixture("repeated.json")], None);
    assert_eq!(v["verdict"], "degenerate");

    let (v, _) = run(&["decide", "--input", &fixture("sqrt2.json")], None);
    assert_eq!(v["verdict"], "no");
}

#[test]
fn diagonalize_over_quadratic_field() {
    let (v, code) = run(&["diagonalize", "--input", &fixture("sqrt2.json")], None);
    assert_eq!(code, 0);
    assert_eq!(v["schema"], "diagonalize/v1");
    assert_eq!(v["exact"], true);
    assert_eq!(v["field"], json!(["t^2-2"]));
}

#[test]
fn diagonalize_degenerate_pencil_is_a_math_error() {
    let (v, code) = run(&["diagonalize", "--input", &fixture("repeated.json")], None);
    assert_eq!(code, 3);
    assert_eq!(v["schema"], "error/v1");
}

#[test]
fn output_is_deterministic() {
    let args = ["diagonalize", "--input", &fixture("sqrt2.json"), "--seed", "99"];
    let (a, _) = run(&args, None);
    let (b, _) = run(&args, None);
    assert_eq!(a, b);
    let (c, _) = run(&args[..3], None);
    assert_eq!(a, c);
}

#[test]
fn calibrate_matches_committed_constants() {
    let (v, code) = run(&["calibrate"], None);
    assert_eq!(code, 0);
    let committed: Json =
        serde_json::from_str(include_str!(concat!(env!("CARGO_MANIFEST_DIR"), "/../core/fixtures/constants.json"))).unwrap();
    assert_eq!(v, committed);
    let (other, _) = run(&["calibrate", "--seed", "12345"], None);
    assert_eq!(other, committed);
}

#[test]
fn emitted_rationals_parse_back() {
    let (v, _) = run(&["covariants"], Some(r#"{"quartic":["1/3","-2/7","5","0","-9/4"]}"#));
    let h = json!({ "quartic": [v["H"][0], v["H"][1], v["H"][2], v["H"][3], v["H"][4]] });
    let (back, code) = run(&["covariants"], Some(&h.to_string()));
    assert_eq!(code, 0);
    assert_eq!(back["quartic"], h["quartic"]);
}
