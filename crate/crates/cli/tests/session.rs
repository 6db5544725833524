use germ_cli::session::{Object, SessionError};
use germ_cli::parse_session;
use proptest::prelude::*;

const MINIMAL: &str = "field Q\njet 3\nsource vars: x ideal: ()\ntarget vars: u ideal: ()\nmap f = (x^2)";

const RICH: &str = "\
# comments and blank lines are ignored
field Q
extend Q[a]/(a^2-2)
jet 4
source vars: x, y ideal: ()
target vars: u ideal: ()

filtration F = chain[(x, y); (x^2, x*y, y^2)]
map f = (x^2 + y^3)
aut W = (x - 1/2*x^2 + a*x*y^3, y)
aut P = (u + u^2)
vf X = x^2 d/dx + 1/3*y^2 d/dy
vf V = u^2 d/du + x^3 d/dy
contact C = (u + x*u)
";

#[test]
fn minimal_session_has_one_map() {
    let s = parse_session(MINIMAL).unwrap();
    assert_eq!(s.objects.len(), 1);
    let f = s.get("f").unwrap();
    assert!(matches!(f.object, Object::Map(_)));
    assert!(!f.over_top);
}

#[test]
fn unbalanced_parenthesis_is_a_syntax_error() {
    let e = parse_session("map f = (x^2").unwrap_err();
    assert!(matches!(e, SessionError::Syntax { .. }), "{e}");
    assert_eq!(e.line(), 1);
    assert!(e.to_string().contains("unbalanced parenthesis"), "{e}");
}

#[test]
fn reducible_modulus_is_a_semantic_error() {
    let e = parse_session("field F3[b]/(b^2-1)").unwrap_err();
    assert!(matches!(e, SessionError::Semantic { .. }), "{e}");
    assert!(e.to_string().contains("reducible"), "{e}");
}

#[test]
fn errors_carry_the_offending_line() {
    let text = format!("{MINIMAL}\nmap g = (x^2 + z)");
    let e = parse_session(&text).unwrap_err();
    assert_eq!(e.line(), 6, "{e}");
    let e = parse_session("field Q\njet 3\nmap f = (x)").unwrap_err();
    assert_eq!(e.line(), 3, "{e}");
}

#[test]
fn sides_and_extension_use_are_inferred() {
    let s = parse_session(RICH).unwrap();
    assert!(s.get("W").unwrap().over_top);
    assert!(!s.get("f").unwrap().over_top);
    let kinds: Vec<&str> = s.objects.iter().map(|o| o.object.kind()).collect();
    assert_eq!(kinds, ["filtration", "map", "aut", "aut", "vf", "vf", "contact"]);
    match &s.get("V").unwrap().object {
        Object::Vf(v) => assert!(v.left.is_some() && v.right.is_some()),
        o => panic!("V parsed as {}", o.kind()),
    }
}

#[test]
fn emit_round_trips_fixed_sessions() {
    for text in [MINIMAL, RICH] {
        let s = parse_session(text).unwrap();
        let emitted = s.emit();
        let again = parse_session(&emitted).unwrap();
        assert_eq!(s, again);
        assert_eq!(emitted, again.emit());
    }
}

fn poly(coeffs: &[i8], monos: &[&str]) -> String {
    let terms: Vec<String> = coeffs
        .iter()
        .zip(monos)
        .filter(|(c, _)| **c != 0)
        .map(|(c, m)| format!("({c})*{m}"))
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn emit_round_trips_random_sessions(
        field in prop::sample::select(vec!["Q", "F5", "F9"]),
        order in 2u32..=4,
        fc in prop::collection::vec(-3i8..=3, 5),
        wc in prop::collection::vec(-3i8..=3, 3),
    ) {
        let monos = ["x", "y", "x^2", "x*y", "y^3"];
        let text = format!(
            "field {field}\njet {order}\nsource vars: x, y ideal: ()\ntarget vars: u, v ideal: ()\n\
             map f = ({}, {})\naut W = (x + {}, y)\nvf X = {} d/dx\n",
            poly(&fc, &monos),
            poly(&fc[2..], &monos[2..]),
            poly(&wc, &monos[2..]),
            poly(&wc, &monos[2..]),
        );
        let s = parse_session(&text).unwrap();
        let again = parse_session(&s.emit()).unwrap();
        prop_assert_eq!(&s, &again);
    }
}
