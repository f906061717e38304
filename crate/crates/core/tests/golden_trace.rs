mod common;

use common::golden::load;
use qtchar_core::format::parse_poly;
use qtchar_core::oplus::{multidegree, trace, Trace};
use qtchar_core::{Basis, Config, HeightFunction, LieType, QTPoly, SignConvention, Vertex};

fn d4() -> Config {
    let lie: LieType = "D4".parse().unwrap();
    Config::new(lie, HeightFunction::new(lie, vec![1, 0, 1, 1]).unwrap(), SignConvention::Flipped).unwrap()
}

fn run() -> Trace {
    trace(&d4(), 2, Basis::Z).unwrap()
}

fn describe_difference(got: &QTPoly, want: &QTPoly) -> String {
    let diff = got - want;
    format!("got - expected = {}", diff.to_latex())
}

#[test]
fn d4_node2_sequence_visits_the_printed_vertices() {
    let t = run();
    let expected = [
        (2, 0),
        (2, -2),
        (2, -4),
        (1, -1),
        (1, -3),
        (3, -1),
        (3, -3),
        (4, -1),
        (4, -3),
        (2, 0),
        (2, -2),
        (1, -1),
        (3, -1),
        (4, -1),
        (2, 0),
    ];
    let got: Vec<(usize, i32)> = t.sequence.steps.iter().map(|v| (v.node, v.r)).collect();
    assert_eq!(got, expected);
}

#[test]
fn d4_node2_z_variables_match_transcription() {
    let t = run();
    let cfg = d4();
    for e in load() {
        let s = &t.steps[e.step - 1];
        assert_eq!((s.vertex, s.pass), (e.vertex, e.pass), "step {}", e.step);
        let want = parse_poly(&e.z, Some(&cfg.xi)).unwrap();
        assert!(s.poly == want, "step {}: {}", e.step, describe_difference(&s.poly, &want));
    }
}

#[test]
fn d4_node2_y_forms_match_transcription() {
    let t = run();
    for e in load() {
        let s = &t.steps[e.step - 1];
        let want = parse_poly(&e.y, None).unwrap();
        let got = s.y_form.as_ref().unwrap();
        assert!(*got == want, "step {}: {}", e.step, describe_difference(got, &want));
        let f = parse_poly(&e.frozen, None).unwrap();
        let d = multidegree(d4().lie, &f).unwrap();
        assert_eq!(s.degree.as_ref().unwrap(), &d, "step {}", e.step);
        assert_eq!(s.degree.as_ref().unwrap().to_string(), e.degree, "step {}", e.step);
    }
}

#[test]
fn d4_node2_multidegrees() {
    let t = run();
    let expected = [
        "e1+e3+e4", "e1+e3+e4", "e1+e3+e4", "e3+e4", "e3+e4", "e1+e4", "e1+e4", "e1+e3", "e1+e3", "e1+e3+e4",
        "e1+e3+e4", "e1", "e3", "e4", "0",
    ];
    let got: Vec<String> = t.steps.iter().map(|s| s.degree.as_ref().unwrap().to_string()).collect();
    assert_eq!(got, expected);
}

#[test]
fn d4_node2_term_counts() {
    let t = run();
    let s = &t.steps[10];
    assert_eq!((s.vertex, s.pass), (Vertex::new(2, -2), 2));
    assert_eq!(s.poly.len(), 81);
    let expanded: usize = s.poly.terms().map(|(_, c)| c.terms().len()).sum();
    assert_eq!(expanded, 92);
    assert_eq!(s.poly.eval_coefficients_at_one(), 92.into());
    assert_eq!(t.steps[9].poly.len(), 14);
    let last = &t.steps[14];
    assert_eq!(last.poly.len(), 28);
    assert_eq!(last.poly.eval_coefficients_at_one(), 29.into());
}
