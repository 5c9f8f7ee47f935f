mod common;

use common::exprgen::{arb_expr, interpret, same, DOMAIN_ERRORS, GOLDEN, SYNTAX_ERRORS};
use heatgraph::expr::{parse, BinOp, Expr};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig { cases: 1000, ..ProptestConfig::default() })]

    #[test]
    fn print_parse_round_trip(e in arb_expr()) {
        let printed = e.to_string();
        let parsed = parse(&printed).unwrap();
        prop_assert_eq!(&parsed, &e);
        prop_assert_eq!(parse(&parsed.to_string()).unwrap(), parsed);
    }

    #[test]
    fn eval_matches_interpreter(e in arb_expr(), r in -4i64..8) {
        let src = e.to_string();
        let oracle = interpret(&src, r as f64);
        match (e.eval(r), oracle) {
            (Ok(a), Some(b)) => prop_assert!(same(a, b), "{src} at r={r}: {a} vs {b}"),
            (Err(_), None) => {}
            (a, b) => prop_assert!(false, "{src} at r={r}: {a:?} vs {b:?}"),
        }
    }
}

#[test]
fn golden_vectors() {
    for (src, r, want) in GOLDEN {
        let got = parse(src).unwrap().eval(r).unwrap();
        assert!((got - want).abs() <= 1e-15 * want.abs().max(1.0), "{src} at r={r}: {got} vs {want}");
        assert_eq!(interpret(src, r as f64), Some(got), "oracle disagrees on {src}");
    }
    for (src, r) in DOMAIN_ERRORS {
        let err = parse(src).unwrap().eval(r).unwrap_err();
        assert!(!err.node.is_empty(), "{src}");
    }
    for src in SYNTAX_ERRORS {
        assert!(parse(src).is_err(), "{src} should not parse");
    }
}

#[test]
fn example_shapes() {
    assert_eq!(parse("2^-r").unwrap(), Expr::bin(BinOp::Pow, Expr::num(2.0), Expr::negated(Expr::Var)));
    assert_eq!(
        parse("1/(r*r)").unwrap(),
        Expr::bin(BinOp::Div, Expr::num(1.0), Expr::bin(BinOp::Mul, Expr::Var, Expr::Var))
    );
    let err = parse("(1").unwrap_err();
    assert_eq!(err.offset, 2);
    assert!(!err.expected.is_empty());
}
