#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use proptest::prelude::*;
use qdeform::expr::{Ladder, OperatorExpr};
use qdeform::opalg::{DiagonalFunction, FamilyKind};
use qdeform::qnum::BasicKind;

pub fn family_kind() -> impl Strategy<Value = FamilyKind> {
    prop::sample::select(FamilyKind::ALL.to_vec())
}

/// Functions of `N` that print as a single atom.
pub fn diag_atom() -> impl Strategy<Value = DiagonalFunction> {
    let half = |n: i64| Rational64::new(n, 2);
    prop_oneof![
        Just(DiagonalFunction::n()),
        (-3i64..=3, -4i64..=4).prop_map(move |(c, d)| DiagonalFunction::q_pow(half(c), half(d))),
        (-2i64..=2).prop_map(|k| DiagonalFunction::sign().shift(k)),
        (prop::bool::ANY, -2i64..=3).prop_map(|(f, k)| {
            let kind = if f { BasicKind::Fermion } else { BasicKind::Boson };
            DiagonalFunction::basic(kind, k)
        }),
    ]
}

/// Non-negative literals with terminating decimal expansions.
pub fn number() -> impl Strategy<Value = OperatorExpr> {
    (0i64..400, prop::sample::select(vec![1i64, 2, 4, 5, 10, 100]))
        .prop_map(|(n, d)| OperatorExpr::Number(BigRational::new(BigInt::from(n), BigInt::from(d))))
}

/// Arbitrary trees over the whole grammar, used for printing and adjoint laws.
pub fn any_tree() -> impl Strategy<Value = OperatorExpr> {
    let leaf = prop_oneof![
        prop::sample::select(vec![Ladder::A, Ladder::B]).prop_map(OperatorExpr::Lower),
        prop::sample::select(vec![Ladder::A, Ladder::B]).prop_map(OperatorExpr::Raise),
        diag_atom().prop_map(OperatorExpr::diag),
        number(),
    ];
    leaf.prop_recursive(6, 48, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| OperatorExpr::sum(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| OperatorExpr::diff(a, b)),
            inner.clone().prop_map(OperatorExpr::neg),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| OperatorExpr::product(a, b)),
            (inner.clone(), -3i64..=3, prop::sample::select(vec![1i64, 1, 2, 3]))
                .prop_map(|(a, n, d)| OperatorExpr::pow(a, Rational64::new(n, d))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| OperatorExpr::commutator(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| OperatorExpr::anticommutator(a, b)),
            inner.clone().prop_map(|a| OperatorExpr::Sqrt(Box::new(a))),
            inner.prop_map(|a| OperatorExpr::Adjoint(Box::new(a))),
        ]
    })
}

/// Well-defined operator expressions of depth at most 6 in a single ladder
/// pair: diagonal parts are regular and non-negative where square roots are
/// taken, and powers are non-negative integers.
pub fn operator_expr() -> impl Strategy<Value = OperatorExpr> {
    let regular = prop_oneof![
        Just(DiagonalFunction::n()),
        Just(DiagonalFunction::q_pow_n()),
        Just(DiagonalFunction::q_pow(Rational64::from_integer(-1), Rational64::from_integer(1))),
        Just(DiagonalFunction::sign()),
        Just(DiagonalFunction::basic(BasicKind::Boson, 0)),
        Just(DiagonalFunction::basic(BasicKind::Fermion, 1)),
    ];
    let leaf = prop_oneof![
        3 => Just(OperatorExpr::a()),
        3 => Just(OperatorExpr::ad()),
        2 => regular.prop_map(OperatorExpr::diag),
        1 => (0i64..5).prop_map(OperatorExpr::int),
        1 => Just(OperatorExpr::Sqrt(Box::new(OperatorExpr::diag(DiagonalFunction::basic(BasicKind::Boson, 1))))),
    ];
    leaf.prop_recursive(5, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| OperatorExpr::sum(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| OperatorExpr::diff(a, b)),
            inner.clone().prop_map(OperatorExpr::neg),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| OperatorExpr::product(a, b)),
            (inner.clone(), 0i64..=2).prop_map(|(a, k)| OperatorExpr::pow(a, Rational64::from_integer(k))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| OperatorExpr::commutator(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| OperatorExpr::anticommutator(a, b)),
            inner.prop_map(|a| OperatorExpr::Adjoint(Box::new(a))),
        ]
    })
}
