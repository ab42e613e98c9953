mod common;

use std::sync::Arc;

use common::{prop_from_mask, signature};
use proptest::prelude::*;
use tgl::{Expr, LogicError, ParseError, Proposition, Signature};

fn arb_expr(r: usize) -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        (0..r).prop_map(Expr::Var),
        Just(Expr::True),
        Just(Expr::False),
    ];
    leaf.prop_recursive(5, 40, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Expr::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::and(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| Expr::or(a, b)),
        ]
    })
}

fn arb_sig_expr() -> impl Strategy<Value = (Arc<Signature>, Expr)> {
    (1usize..=4).prop_flat_map(|r| (Just(signature(r)), arb_expr(r)))
}

fn arb_triple() -> impl Strategy<Value = (Proposition, Proposition, Proposition)> {
    (1usize..=4).prop_flat_map(|r| {
        let sig = signature(r);
        let full = (1u64 << (1 << r)) - 1;
        (any::<u64>(), any::<u64>(), any::<u64>()).prop_map(move |(x, y, z)| {
            (
                prop_from_mask(x & full, &sig),
                prop_from_mask(y & full, &sig),
                prop_from_mask(z & full, &sig),
            )
        })
    })
}

/// Truth value of `e` under the assignment encoded by `atom`, computed
/// without the library.
fn truth(e: &Expr, atom: usize) -> bool {
    match e {
        Expr::Var(j) => atom >> j & 1 == 1,
        Expr::True => true,
        Expr::False => false,
        Expr::Not(a) => !truth(a, atom),
        Expr::And(a, b) => truth(a, atom) && truth(b, atom),
        Expr::Or(a, b) => truth(a, atom) || truth(b, atom),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn atom_set_matches_truth_table((sig, e) in arb_sig_expr()) {
        let p = Proposition::from_expr(e.clone(), &sig).unwrap();
        for atom in 0..sig.atom_count() {
            prop_assert_eq!(p.atoms().contains(atom), truth(&e, atom));
        }
    }

    #[test]
    fn entailment_matches_truth_table(
        (sig, e1, e2) in (1usize..=4).prop_flat_map(|r| (Just(signature(r)), arb_expr(r), arb_expr(r)))
    ) {
        let p = Proposition::from_expr(e1.clone(), &sig).unwrap();
        let q = Proposition::from_expr(e2.clone(), &sig).unwrap();
        let brute = (0..sig.atom_count()).all(|a| !truth(&e1, a) || truth(&e2, a));
        prop_assert_eq!(p.entails(&q).unwrap(), brute);
    }

    #[test]
    fn print_then_parse_round_trips((sig, e) in arb_sig_expr()) {
        let p = Proposition::from_expr(e, &sig).unwrap();
        let text = p.to_string();
        let back = Proposition::parse(&text, &sig).unwrap();
        prop_assert!(back.equivalent(&p).unwrap(), "{} reparsed differently", text);
        prop_assert_eq!(back.to_string(), text);
    }

    #[test]
    fn de_morgan((p, q, _) in arb_triple()) {
        let lhs = p.conjoin(&q).unwrap().negate();
        let rhs = p.negate().disjoin(&q.negate()).unwrap();
        prop_assert!(lhs.equivalent(&rhs).unwrap());
        let lhs = p.disjoin(&q).unwrap().negate();
        let rhs = p.negate().conjoin(&q.negate()).unwrap();
        prop_assert!(lhs.equivalent(&rhs).unwrap());
    }

    #[test]
    fn distributivity((p, q, s) in arb_triple()) {
        let lhs = p.conjoin(&q.disjoin(&s).unwrap()).unwrap();
        let rhs = p.conjoin(&q).unwrap().disjoin(&p.conjoin(&s).unwrap()).unwrap();
        prop_assert!(lhs.equivalent(&rhs).unwrap());
        let lhs = p.disjoin(&q.conjoin(&s).unwrap()).unwrap();
        let rhs = p.disjoin(&q).unwrap().conjoin(&p.disjoin(&s).unwrap()).unwrap();
        prop_assert!(lhs.equivalent(&rhs).unwrap());
    }

    #[test]
    fn entailment_is_a_partial_order((p, q, s) in arb_triple()) {
        prop_assert!(p.entails(&p).unwrap());
        if p.entails(&q).unwrap() && q.entails(&s).unwrap() {
            prop_assert!(p.entails(&s).unwrap());
        }
        if p.entails(&q).unwrap() && q.entails(&p).unwrap() {
            prop_assert!(p.equivalent(&q).unwrap());
        }
        let pq = p.conjoin(&q).unwrap();
        prop_assert!(pq.entails(&p).unwrap());
        prop_assert!(p.entails(&p.disjoin(&q).unwrap()).unwrap());
    }

    #[test]
    fn double_negation_and_contradiction((p, _, _) in arb_triple()) {
        prop_assert!(p.negate().negate().equivalent(&p).unwrap());
        prop_assert!(!p.conjoin(&p.negate()).unwrap().is_satisfiable());
        prop_assert!(p.disjoin(&p.negate()).unwrap().is_tautology());
    }
}

#[test]
fn parse_examples() {
    let sig = signature(2);
    assert!(Proposition::parse("true", &sig).unwrap().is_tautology());
    assert!(!Proposition::parse("a & ~a", &sig).unwrap().is_satisfiable());
    let a_or_b = Proposition::parse("a | b", &sig).unwrap();
    // atoms by index: bit 0 is `a`, bit 1 is `b`
    assert_eq!(a_or_b.atoms().iter().collect::<Vec<_>>(), vec![1, 2, 3]);
    let a = Proposition::parse("a", &sig).unwrap();
    assert!(!a_or_b.entails(&a).unwrap());
    assert!(Proposition::parse("a & b", &sig).unwrap().entails(&a).unwrap());
    assert!(Proposition::bottom(&sig).entails(&a).unwrap());
}

#[test]
fn sugar_connectives() {
    let sig = signature(2);
    let p = |t| Proposition::parse(t, &sig).unwrap();
    assert_eq!(p("a -> b"), p("~a | b"));
    assert_eq!(p("a <-> b"), p("(a -> b) & (b -> a)"));
    assert_eq!(p("a & b | ~a # trailing comment"), p("(a & b) | ~a"));
}

#[test]
fn disjunction_of_all_atoms_is_true() {
    let sig = signature(3);
    let all = (0..sig.atom_count())
        .map(|i| Proposition::atom(&sig, i).unwrap())
        .reduce(|x, y| x.disjoin(&y).unwrap())
        .unwrap();
    assert!(all.is_tautology());
}

#[test]
fn parse_errors_are_located() {
    let sig = signature(2);
    match Proposition::parse("a & (b |", &sig) {
        Err(LogicError::Parse(ParseError::Syntax { pos, .. })) => assert_eq!(pos.column, 9),
        other => panic!("unexpected {other:?}"),
    }
    match Proposition::parse("a & zz", &sig) {
        Err(LogicError::Parse(ParseError::UnknownIdentifier { name, .. })) => assert_eq!(name, "zz"),
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn signature_limits() {
    let names: Vec<String> = (0..25).map(|i| format!("p{i}")).collect();
    assert!(matches!(Signature::new(names), Err(LogicError::TooManyPrimitives(25))));
    assert!(Signature::new(["a", "a"]).is_err());
    let other = signature(3);
    let a2 = Proposition::parse("a", &signature(2)).unwrap();
    let a3 = Proposition::parse("a", &other).unwrap();
    assert!(matches!(a2.entails(&a3), Err(LogicError::SignatureMismatch)));
}
