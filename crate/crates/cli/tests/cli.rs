use std::process::{Command, Output};

use qtchar_core::characters::fundamental_character;
use qtchar_core::format::{parse_poly, poly_from_json};
use qtchar_core::{Basis, Config, HeightFunction, LieType, SignConvention};
use serde_json::Value;

fn qtchar(args: &[&str]) -> Output {
    qtchar_env(args, None)
}

fn qtchar_env(args: &[&str], sign: Option<&str>) -> Output {
    let mut c = Command::new(env!("CARGO_BIN_EXE_qtchar"));
    c.args(args).env_remove("QTCHAR_SIGN");
    if let Some(s) = sign {
        c.env("QTCHAR_SIGN", s);
    }
    c.output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

fn d4() -> Config {
    let l: LieType = "D4".parse().unwrap();
    Config::new(l, HeightFunction::new(l, vec![1, 0, 1, 1]).unwrap(), SignConvention::Flipped).unwrap()
}

#[test]
fn chars_d4_fundamental_text() {
    let args = ["chars", "--type", "D4", "--node", "2", "--r", "-6", "--format", "text"];
    let o = qtchar(&args);
    assert_eq!(o.status.code(), Some(0));
    let p = parse_poly(stdout(&o).trim(), None).unwrap();
    assert_eq!(p.len(), 28);
    assert_eq!(p, fundamental_character(&d4(), 2, -6).unwrap().poly);
    assert_eq!(qtchar(&args).stdout, o.stdout);
}

#[test]
fn chars_small_examples() {
    let o = qtchar(&["chars", "--type", "A1", "--node", "1", "--r", "-2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(parse_poly(stdout(&o).trim(), None).unwrap(), parse_poly("Y_{1,-2} + Y_{1,0}^{-1}", None).unwrap());

    let o = qtchar(&["chars", "--type", "A2", "--node", "1", "--r", "-4", "--truncated"]);
    let want = parse_poly("Y_{1,-4} + Y_{1,-2}^{-1} Y_{2,-3} + Y_{2,-1}^{-1}", None).unwrap();
    assert_eq!(parse_poly(stdout(&o).trim(), None).unwrap().specialize_t1(), want.specialize_t1());
}

#[test]
fn chars_json_round_trips() {
    let o = qtchar(&["chars", "--type", "D4", "--node", "2", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["monomials"], 28);
    assert_eq!(v["sum_at_t1"], "29");
    assert_eq!(v["module"]["r"], -6);
    assert_eq!(v["xi"], serde_json::json!([1, 0, 1, 1]));
    let (b, p) = poly_from_json(&v["poly"]).unwrap();
    assert_eq!(b, Basis::Y);
    assert_eq!(p, fundamental_character(&d4(), 2, -6).unwrap().poly);

    let z = json(&qtchar(&["chars", "--type", "A1", "--node", "1", "--basis", "z", "--format", "json"]));
    assert_eq!(z["poly"]["basis"], "z");
    assert_eq!(poly_from_json(&z["poly"]).unwrap().1.len(), 2);

    let latex = qtchar(&["chars", "--type", "A1", "--node", "1", "--format", "latex"]);
    assert_eq!(parse_poly(stdout(&latex).trim(), None).unwrap().len(), 2);
}

#[test]
fn tsystem_reports_and_exit_codes() {
    let o = qtchar(&["tsystem", "--type", "A1", "--node", "1", "--k", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("holds"));
    assert!(text.contains("alpha = -1 (expected -1)"));
    assert!(text.contains("gamma = 0 (expected 0)"));

    let o = qtchar(&["tsystem", "--type", "D4", "--node", "2", "--k", "2", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["holds"], true);
    assert_eq!(v["exponents_match"], true);

    let o = qtchar(&["tsystem", "--type", "D4", "--node", "2", "--k", "1", "--r", "-6", "--depth", "-2"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("requires r_floor <="));
}

#[test]
fn sign_override_changes_the_calibration() {
    let args = ["tsystem", "--type", "A1", "--node", "1", "--k", "1", "--format", "json"];
    let flipped = qtchar_env(&args, Some("flipped"));
    assert_eq!(flipped.status.code(), Some(0));
    assert_eq!(json(&flipped)["sign"], "flipped");
    let printed = qtchar_env(&args, Some("printed"));
    assert_eq!(printed.status.code(), Some(4));
    let v = json(&printed);
    assert_eq!(v["sign"], "printed");
    assert_eq!(v["alpha_half"], 2);
    assert_eq!(qtchar_env(&args, Some("sideways")).status.code(), Some(2));
}

#[test]
fn invalid_flags_exit_2() {
    assert_eq!(qtchar(&["chars", "--type", "X4", "--node", "1"]).status.code(), Some(2));
    assert_eq!(qtchar(&["chars", "--type", "A2", "--node", "7"]).status.code(), Some(2));
    assert_eq!(qtchar(&["chars", "--type", "A2"]).status.code(), Some(2));
    assert_eq!(qtchar(&["chars", "--type", "A2", "--node", "1", "--xi", "0,0"]).status.code(), Some(2));
    assert_eq!(qtchar(&["trace", "--type", "D4", "--sequence", "T2"]).status.code(), Some(2));
    assert_eq!(qtchar(&["serve"]).status.code(), Some(2));
    assert_eq!(qtchar(&["chars", "--type", "A2", "--node", "1", "--r", "-3"]).status.code(), Some(0));
    let bad = qtchar(&["chars", "--type", "A2", "--node", "1", "--r", "-3", "--xi", "0,1"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn trace_d4_s2() {
    let args = ["trace", "--type", "D4", "--sequence", "S2", "--basis", "z", "--format", "json"];
    let o = qtchar(&args);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(qtchar(&args).stdout, o.stdout);
    let v = json(&o);
    let steps = v["steps"].as_array().unwrap();
    assert_eq!(steps.len(), 15);
    let poly = |k: usize| poly_from_json(&steps[k]["poly"]).unwrap().1;
    assert_eq!(poly(9).len(), 14);
    let s11 = poly(10);
    assert_eq!(s11.terms().map(|(_, c)| c.terms().len()).sum::<usize>(), 92);
    assert_eq!(steps[14]["degree"], "0");
    assert_eq!(steps[0]["degree"], "e1+e3+e4");
    assert!(steps[0]["quiver"]["arrows"].as_array().unwrap().len() > 10);
    let want =
        parse_poly("z_{2,-2} z_{2,0}^{-1} f_1 f_3 f_4 + z_{1,-1} z_{2,0}^{-1} z_{3,-1} z_{4,-1} f_2", None).unwrap();
    assert_eq!(poly(0), want);

    let text = stdout(&qtchar(&["trace", "--type", "D4", "--sequence", "S2"]));
    assert!(text.starts_with("S_2 on D4 xi=(1,0,1,1) basis z: 15 steps"));
    assert_eq!(text.lines().filter(|l| l.starts_with("[step")).count(), 15);
    let latex = stdout(&qtchar(&["trace", "--type", "D4", "--sequence", "S2", "--format", "latex"]));
    assert!(latex.lines().next().unwrap().starts_with("z_{2,0}^{(1)} = "));
    assert_eq!(latex.lines().count(), 15);
}

#[test]
fn cartan_tables() {
    let v = json(&qtchar(&["cartan", "--type", "A1", "--degree", "7", "--format", "json"]));
    assert_eq!(v["ctilde"][0][0], serde_json::json!([0, 1, 0, -1, 0, 1, 0, -1]));
    let t = stdout(&qtchar(&["cartan", "--type", "A2", "--degree", "14"]));
    assert!(t.contains("(1,1): 1 0 0 0 -1 0 1 0 0 0 -1 0 1 0"));
    assert!(t.contains("(1,2): 0 1 0 -1 0 0 0 1 0 -1 0 0 0 1"));
}
