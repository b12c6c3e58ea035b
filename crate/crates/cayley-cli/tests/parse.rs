use proptest::prelude::*;

use cayley::schur::{Base, BundleExpr, Preset};
use cayley_cli::error::ParseError;
use cayley_cli::parse::{parse, parse_collection, to_bundle, to_complex};

fn base() -> impl Strategy<Value = Base> {
    prop_oneof![Just(Base::U), Just(Base::UDual), Just(Base::Q), Just(Base::UPerp)]
}

fn leaf() -> impl Strategy<Value = BundleExpr> {
    let b = || base().prop_map(|b| Box::new(BundleExpr::Base(b)));
    prop_oneof![
        Just(BundleExpr::Structure),
        base().prop_map(BundleExpr::Base),
        (proptest::collection::vec(-3i64..=3, 1..=3), b()).prop_map(|(mut w, b)| {
            w.sort_unstable_by(|x, y| y.cmp(x));
            BundleExpr::Schur(w, b)
        }),
        (0u32..=4, b()).prop_map(|(i, b)| BundleExpr::Wedge(i, b)),
        (0u32..=3, b()).prop_map(|(i, b)| BundleExpr::Sym(i, b)),
        prop_oneof![Just(Preset::R), Just(Preset::K), Just(Preset::E10), Just(Preset::E16)].prop_map(BundleExpr::Preset),
    ]
}

fn expr() -> impl Strategy<Value = BundleExpr> {
    leaf().prop_recursive(3, 16, 3, |inner| {
        prop_oneof![
            proptest::collection::vec(inner.clone(), 2..=3).prop_map(BundleExpr::Sum),
            proptest::collection::vec(inner.clone(), 2..=3).prop_map(BundleExpr::Tensor),
            (inner.clone(), -4i64..=4).prop_map(|(x, t)| BundleExpr::Twist(Box::new(x), t)),
            (inner, -4i64..=4).prop_map(|(x, m)| BundleExpr::Shift(Box::new(x), m)),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn printing_round_trips(e in expr()) {
        let text = e.to_string();
        prop_assert_eq!(parse(&text).map_err(|x| x.to_string()), Ok(e), "{}", text);
    }

    #[test]
    fn whitespace_is_insignificant(e in expr()) {
        let text = e.to_string();
        let spaced = text.replace('+', "  +  ").replace('(', " ( ");
        prop_assert_eq!(parse(&spaced).ok(), Some(e));
    }
}

#[test]
fn u_star_is_greedy() {
    assert_eq!(parse("U*").unwrap(), BundleExpr::Base(Base::UDual));
    assert_eq!(parse("U * Q").unwrap(), BundleExpr::Tensor(vec![BundleExpr::Base(Base::U), BundleExpr::Base(Base::Q)]));
    // U*Q reads as U* followed by junk
    assert!(matches!(parse("U*Q"), Err(ParseError::Syntax { pos: 2, .. })));
}

#[test]
fn errors_carry_positions() {
    assert!(matches!(parse(""), Err(ParseError::Syntax { pos: 0, .. })));
    assert!(matches!(parse("O +"), Err(ParseError::Syntax { pos: 3, .. })));
    assert!(matches!(parse("S{1,2}U"), Err(ParseError::NotDominant { pos: 2, .. })));
    assert!(matches!(parse("W2 X"), Err(ParseError::Syntax { pos: 3, .. })));
    assert!(matches!(parse("O(1"), Err(ParseError::Syntax { pos: 3, .. })));
    assert!(matches!(parse("O)"), Err(ParseError::Syntax { pos: 1, .. })));
}

#[test]
fn shifts_only_on_complexes() {
    assert!(matches!(to_bundle(&parse("O[1]").unwrap()), Err(ParseError::ShiftNotAllowed { .. })));
    assert!(to_complex(&parse("O[1]").unwrap()).is_ok());
    assert!(matches!(to_complex(&parse("R + O").unwrap()), Err(ParseError::Unsupported(_))));
    assert!(to_complex(&parse("R(1)[-2]").unwrap()).is_ok());
}

#[test]
fn exterior_powers_take_a_base() {
    assert!(to_bundle(&parse("W2 (U*)").unwrap()).is_ok());
    assert!(to_bundle(&parse("W2 U(1)").unwrap()).is_ok());
    assert!(parse("W2 (U * Q)").is_err());
}

#[test]
fn collection_files() {
    let c = parse_collection("# two blocks\nO\nU*\n--- block\nO(1)\n").unwrap();
    assert_eq!(c.objects.len(), 3);
    assert_eq!(c.blocks, Some(vec![2, 1]));
    let plain = parse_collection("O\nU*").unwrap();
    assert_eq!(plain.blocks, None);
    match parse_collection("O\n\nS{0,1}U\n") {
        Err(ParseError::Line { line, inner }) => {
            assert_eq!(line, 3);
            assert!(matches!(*inner, ParseError::NotDominant { .. }));
        }
        other => panic!("{other:?}"),
    }
}
