//! Diagonal functions of the number operator, oscillator families and the
//! normal-ordering engine.

mod diag;
mod family;
mod normal;

pub use diag::DiagonalFunction;
pub use family::{AlgebraFamily, FamilyKind};
pub use normal::{nf_compare, nf_equal, normal_order, NfComparison, NormalForm, ZERO_PROBE_LEVELS};


use num_rational::Rational64;

use crate::qnum::BasicKind;

/// Functions of `N` for which `f(N) a = a f(N-1)` is checked, with the
/// first level at which each is defined.
pub fn commutation_catalogue() -> Vec<(&'static str, DiagonalFunction, i64)> {
    use DiagonalFunction as D;
    let int = Rational64::from_integer;
    let n_plus_1 = D::n().shift(1);
    vec![
        ("N", D::n(), 0),
        ("N^2", D::pow(D::n(), int(2)), 0),
        ("1/N", D::pow(D::n(), int(-1)), 1),
        ("q^N", D::q_pow_n(), 0),
        ("q^-N", D::q_pow(int(-1), int(0)), 0),
        ("(-1)^N*q^N", D::mul(D::sign(), D::q_pow_n()), 0),
        ("[N]", D::basic(BasicKind::Boson, 0), 0),
        ("[N]^(1/2)", D::pow(D::basic(BasicKind::Boson, 0), Rational64::new(1, 2)), 0),
        ("[N]F", D::basic(BasicKind::Fermion, 0), 0),
        ("(N+1)/[N+1]", D::div(n_plus_1.clone(), D::basic(BasicKind::Boson, 1)), 0),
        ("(N+1)/[N+1]F", D::div(n_plus_1, D::basic(BasicKind::Fermion, 1)), 0),
    ]
}
