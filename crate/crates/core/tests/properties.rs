mod common;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;
use qdeform::expr::{adjoint, parse, print_canonical, OperatorExpr};
use qdeform::fock::{Backend, FockRep};
use qdeform::opalg::{normal_order, AlgebraFamily, FamilyKind};
use qdeform::qnum::{basic_number, BasicKind};
use qdeform::scalar::{LaurentPoly, RationalFunction, ScalarValue};

use common::{any_tree, family_kind, operator_expr};

const Q_GRID: [f64; 5] = [0.3, 0.5, 0.9, 1.1, 2.0];

fn laurent() -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec((-4i64..=4, -6i64..=6, 1i64..=4), 0..4).prop_map(|terms| {
        LaurentPoly::from_terms(
            terms
                .into_iter()
                .map(|(e, n, d)| (e, BigRational::new(n.into(), d.into()))),
        )
    })
}

fn ratfunc() -> impl Strategy<Value = RationalFunction> {
    (laurent(), laurent()).prop_filter_map("zero denominator", |(n, d)| RationalFunction::new(n, d).ok())
}

/// Sums of at most two radical monomials with small constant or `q`-linear radicands.
fn scalar() -> impl Strategy<Value = ScalarValue> {
    let radicand = prop_oneof![
        (1i64..=7).prop_map(RationalFunction::from_int),
        Just(RationalFunction::q_pow(1)),
        Just(RationalFunction::from_poly(LaurentPoly::from_terms([
            (0, BigRational::from_integer(1.into())),
            (2, BigRational::from_integer(1.into())),
        ]))),
    ];
    let monomial = (ratfunc(), prop::option::of(radicand))
        .prop_map(|(c, r)| match r {
            Some(r) => &ScalarValue::from_ratfunc(c) * &ScalarValue::sqrt_of(&r),
            None => ScalarValue::from_ratfunc(c),
        });
    prop::collection::vec(monomial, 1..=2)
        .prop_map(|ms| ms.iter().fold(ScalarValue::zero(), |acc, m| &acc + m))
}

fn q_value() -> impl Strategy<Value = f64> {
    prop_oneof![0.05f64..0.95, 1.05f64..2.0]
}

fn close(x: Complex64, y: Complex64, rel: f64) -> bool {
    (x - y).norm() <= rel * x.norm().max(y.norm()).max(1e-300)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn scalar_evaluation_is_multiplicative(x in scalar(), y in scalar(), q in q_value()) {
        let (ex, ey) = (x.eval(q), y.eval(q));
        prop_assume!(ex.is_ok() && ey.is_ok());
        let lhs = (&x * &y).eval(q).unwrap();
        let rhs = ex.unwrap() * ey.unwrap();
        prop_assert!(close(lhs, rhs, 1e-12) || (lhs - rhs).norm() < 1e-12, "{lhs} vs {rhs}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn reduction_is_idempotent(r in ratfunc()) {
        let once = r.reduced();
        prop_assert_eq!(once.reduced(), once);
    }

    #[test]
    fn square_roots_recombine(x in ratfunc(), y in ratfunc()) {
        let (sx, sy) = (ScalarValue::sqrt_of(&x), ScalarValue::sqrt_of(&y));
        let prod = &(&(&sx * &sy) * &sx) * &sy;
        let want = &ScalarValue::from_ratfunc(x) * &ScalarValue::from_ratfunc(y);
        prop_assert_eq!(prod, want);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn print_then_parse_round_trips(t in any_tree()) {
        let text = print_canonical(&t);
        let back = parse(&text);
        prop_assert!(back.is_ok(), "{text}: {back:?}");
        prop_assert_eq!(back.unwrap(), t, "{}", text);
    }

    #[test]
    fn adjoint_is_an_involution(t in any_tree()) {
        prop_assert_eq!(adjoint(&adjoint(&t)), t);
    }

    #[test]
    fn parser_never_panics(bytes in prop::collection::vec(any::<u8>(), 0..=1024)) {
        let text = String::from_utf8_lossy(&bytes);
        if let Err(e) = parse(&text) {
            prop_assert!(!e.to_string().is_empty());
        }
    }

    #[test]
    fn parser_never_panics_on_grammar_soup(
        tokens in prop::collection::vec(
            prop::sample::select(vec!["a", "ad", "b", "bd", "N", "q", "F", "sqrt", "adj", "(", ")", "[", "]",
                "{", "}", ",", "+", "-", "*", "/", "^", "1", "2", "0.5", "-1", " "]),
            0..200,
        )
    ) {
        let text: String = tokens.concat();
        let _ = parse(&text);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn normal_form_matches_direct_matrix(kind in family_kind(), e in operator_expr()) {
        let family = AlgebraFamily::new(kind);
        let nf = normal_order(&e, &family).unwrap();
        let rep = FockRep::new(&family, 0.7, 12, Backend::Numeric).unwrap();
        let table = rep.residual(&e, &nf.to_expr()).unwrap();
        prop_assert!(table.max_interior < 1e-9, "{}: {} -> {}", print_canonical(&e), table.max_interior, nf);
    }

    #[test]
    fn normal_ordering_is_idempotent(kind in family_kind(), e in operator_expr()) {
        let family = AlgebraFamily::new(kind);
        let nf = normal_order(&e, &family).unwrap();
        prop_assert_eq!(normal_order(&nf.to_expr(), &family).unwrap(), nf);
    }

    #[test]
    fn self_commutator_vanishes(kind in family_kind(), e in operator_expr()) {
        let family = AlgebraFamily::new(kind);
        let nf = normal_order(&OperatorExpr::commutator(e.clone(), e), &family).unwrap();
        prop_assert!(nf.is_empty(), "{}", nf);
    }

    #[test]
    fn exact_and_numeric_backends_agree(kind in family_kind(), e in operator_expr(), qi in 0usize..5) {
        let family = AlgebraFamily::new(kind);
        let q = Q_GRID[qi];
        let num = FockRep::new(&family, q, 8, Backend::Numeric).unwrap().eval_expr(&e);
        let exact = FockRep::new(&family, q, 8, Backend::Exact).unwrap().eval_expr(&e);
        match (num, exact) {
            (Ok(num), Ok(exact)) => {
                let (num, exact) = (num.to_complex(), exact.to_complex());
                let size = num.size();
                let scale = (0..size)
                    .flat_map(|i| (0..size).map(move |j| (i, j)))
                    .filter_map(|(i, j)| exact.get(i, j).map(|z| z.norm()))
                    .fold(1.0f64, f64::max);
                for i in 0..size {
                    for j in 0..size {
                        let (x, y) = (num.get(i, j).copied(), exact.get(i, j).copied());
                        prop_assert_eq!(x.is_some(), y.is_some());
                        if let (Some(x), Some(y)) = (x, y) {
                            prop_assert!((x - y).norm() <= 1e-12 * scale, "({i},{j}) {x} vs {y}");
                        }
                    }
                }
            }
            (Err(_), Err(_)) => {}
            (n, x) => prop_assert!(false, "backends disagree on failure: {n:?} / {x:?}"),
        }
    }
}

#[test]
fn basic_number_recurrences() {
    let q = ScalarValue::q();
    for n in 0..=40 {
        let b = |k| basic_number(BasicKind::Boson, k).unwrap();
        let f = |k| basic_number(BasicKind::Fermion, k).unwrap();
        let q_neg_n = ScalarValue::q_pow(-n);
        assert_eq!(b(n + 1), &q_neg_n + &(&q * &b(n)), "boson n={n}");
        assert_eq!(f(n + 1), &q_neg_n - &(&q * &f(n)), "fermion n={n}");
        assert_eq!(b(n).invert_q(), b(n));
    }
    let f2 = basic_number(BasicKind::Fermion, 2).unwrap();
    assert_ne!(f2.invert_q(), f2);
}

#[test]
fn fermionic_basic_number_signs() {
    for q in [0.1, 0.3, 0.5, 0.7, 0.9, 0.99] {
        for n in 0..=40 {
            let v = basic_number(BasicKind::Fermion, n).unwrap().eval(q).unwrap().re;
            assert!(v >= 0.0, "[{n}]F at q={q} is {v}");
        }
    }
    for q in [1.01, 1.1, 2.0] {
        assert!(basic_number(BasicKind::Fermion, 2).unwrap().eval(q).unwrap().re < 0.0);
    }
}

fn text(s: &str) -> OperatorExpr {
    parse(s).unwrap()
}

#[test]
fn raised_product_is_shifted_spectrum() {
    for kind in FamilyKind::ALL {
        let family = AlgebraFamily::new(kind);
        for q in Q_GRID {
            let rep = FockRep::new(&family, q, 16, Backend::Numeric).unwrap();
            let m = rep.eval_expr(&text("a*ad")).unwrap();
            let last = if family.max_level.is_some() { 1 } else { 15 };
            for n in 0..last {
                let want = family.lower_spectrum.eval_numeric(n as i64 + 1, q).unwrap();
                let got = m.entry(n, n).unwrap();
                assert!((got - want).norm() < 1e-12 * want.norm().max(1.0), "{kind} q={q} n={n}");
            }
        }
    }
}

#[test]
fn number_operator_commutators() {
    for kind in FamilyKind::ALL {
        let family = AlgebraFamily::new(kind);
        for q in Q_GRID {
            let rep = FockRep::new(&family, q, 16, Backend::Numeric).unwrap();
            for (lhs, rhs) in [("[N, a]", "-a"), ("[N, ad]", "ad")] {
                let t = rep.residual(&text(lhs), &text(rhs)).unwrap();
                assert!(t.max_interior < 1e-12, "{kind} q={q} {lhs}");
            }
        }
    }
}

#[test]
fn deformed_diagonals() {
    for q in Q_GRID {
        for (kind, pairs) in [
            (FamilyKind::QBoson, [("ad*a", "[N]"), ("a*ad", "[N+1]")]),
            (FamilyKind::QFermion, [("bd*b", "[N]F"), ("b*bd", "[N+1]F")]),
        ] {
            let rep = FockRep::new(&AlgebraFamily::new(kind), q, 16, Backend::Exact).unwrap();
            for (lhs, rhs) in pairs {
                let t = rep.residual(&text(lhs), &text(rhs)).unwrap();
                assert!(t.max_interior.is_zero(), "{kind} q={q} {lhs}");
            }
        }
    }
}

#[test]
fn q_fermion_above_one_is_not_hermitian() {
    let rep = FockRep::new(&AlgebraFamily::q_fermion(), 1.5, 4, Backend::Numeric).unwrap();
    assert!(!rep.is_hermitian());
    let z = rep.lowering().entry(1, 2).unwrap();
    assert!(z.re.abs() < 1e-15 && z.im != 0.0, "{z}");
    assert!(FockRep::new(&AlgebraFamily::q_fermion(), 0.5, 4, Backend::Numeric).unwrap().is_hermitian());
}
