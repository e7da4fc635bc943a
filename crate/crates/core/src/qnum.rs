//! Bosonic and fermionic basic numbers, their factorials and `q → 1` limits.

use std::fmt;

use num_rational::BigRational;
use num_traits::One;

use crate::error::{Error, Result};
use crate::scalar::{LaurentPoly, RationalFunction, ScalarValue};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BasicKind {
    /// `[x] = (q^x - q^-x) / (q - q^-1)`
    Boson,
    /// `[x]^F = (q^-x - (-1)^x q^x) / (q + q^-1)`
    Fermion,
}

impl fmt::Display for BasicKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BasicKind::Boson => "boson",
            BasicKind::Fermion => "fermion",
        })
    }
}

/// Basic number at a non-negative integer.
pub fn basic_number(kind: BasicKind, n: i64) -> Result<ScalarValue> {
    if n < 0 {
        return Err(Error::Domain(format!(
            "basic number needs a non-negative integer, got {n}"
        )));
    }
    Ok(basic_number_signed(kind, n))
}

/// Basic number at any integer, by the same closed form. Negative arguments
/// show up when diagonal functions are shifted below the vacuum.
pub fn basic_number_signed(kind: BasicKind, n: i64) -> ScalarValue {
    let (num, den) = match kind {
        BasicKind::Boson => (
            &LaurentPoly::q_pow(n) - &LaurentPoly::q_pow(-n),
            &LaurentPoly::q() - &LaurentPoly::q_pow(-1),
        ),
        BasicKind::Fermion => {
            let sign = if n.rem_euclid(2) == 0 { 1 } else { -1 };
            (
                &LaurentPoly::q_pow(-n) - &LaurentPoly::q_pow(n).scale(&BigRational::from_integer(sign.into())),
                &LaurentPoly::q() + &LaurentPoly::q_pow(-1),
            )
        }
    };
    // The denominator is never the zero polynomial.
    ScalarValue::from_ratfunc(RationalFunction::new(num, den).expect("non-zero denominator"))
}

/// `[n]! = [n][n-1]…[1]`, with `[0]! = 1`.
pub fn basic_factorial(kind: BasicKind, n: i64) -> Result<ScalarValue> {
    if n < 0 {
        return Err(Error::Domain(format!(
            "basic factorial needs a non-negative integer, got {n}"
        )));
    }
    let mut acc = ScalarValue::one();
    for k in 1..=n {
        acc = &acc * &basic_number_signed(kind, k);
    }
    Ok(acc)
}

/// Exact `q → 1` limit: `n` for bosons, `n mod 2` for fermions.
pub fn limit_q1(kind: BasicKind, n: i64) -> BigRational {
    // The reduced form has no pole at q = 1, so the limit is a plain evaluation.
    basic_number_signed(kind, n)
        .as_ratfunc()
        .expect("basic numbers are rational in q")
        .eval_exact(&BigRational::one())
        .expect("basic numbers have no pole at q = 1")
}

/// Bosonic basic number at a real argument, evaluated numerically. At
/// `q = 1` the removable singularity is filled with its limit `x`.
pub fn basic_number_real(x: f64, q: f64) -> Result<f64> {
    if !(q > 0.0) {
        return Err(Error::Domain(format!("q must be positive, got {q}")));
    }
    if q == 1.0 {
        return Ok(x);
    }
    Ok((q.powf(x) - q.powf(-x)) / (q - q.recip()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use BasicKind::*;

    fn q() -> ScalarValue {
        ScalarValue::q()
    }

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-12 * (1.0 + b.abs())
    }

    #[test]
    fn small_values() {
        assert!(basic_number(Boson, 0).unwrap().is_zero());
        assert!(basic_number(Boson, 1).unwrap().is_one());
        assert!(basic_number(Fermion, 1).unwrap().is_one());
        assert!(basic_number(Fermion, 0).unwrap().is_zero());
        let b2 = basic_number(Boson, 2).unwrap();
        assert!(close(b2.eval(2.0).unwrap().re, 2.5));
        let f2 = basic_number(Fermion, 2).unwrap();
        assert_eq!(f2, &ScalarValue::q_pow(-1) - &q());
        assert!(close(f2.eval(0.5).unwrap().re, 1.5));
    }

    #[test]
    fn reduced_forms_are_laurent() {
        for n in 0..=40 {
            for kind in [Boson, Fermion] {
                let v = basic_number(kind, n).unwrap();
                assert!(v.as_ratfunc().unwrap().is_laurent(), "{kind} {n}");
            }
        }
    }

    #[test]
    fn negative_argument_rejected() {
        assert!(matches!(basic_number(Boson, -1), Err(Error::Domain(_))));
        assert!(matches!(basic_factorial(Fermion, -3), Err(Error::Domain(_))));
    }

    #[test]
    fn factorials() {
        assert!(basic_factorial(Boson, 0).unwrap().is_one());
        assert!(basic_factorial(Fermion, 0).unwrap().is_one());
        assert!(close(basic_factorial(Boson, 3).unwrap().eval(1.0).unwrap().re, 6.0));
        assert!(close(basic_factorial(Fermion, 2).unwrap().eval(0.5).unwrap().re, 1.5));
    }

    #[test]
    fn limits() {
        assert_eq!(limit_q1(Boson, 5), BigRational::from_integer(5.into()));
        assert_eq!(limit_q1(Fermion, 4), BigRational::from_integer(0.into()));
        assert_eq!(limit_q1(Fermion, 7), BigRational::from_integer(1.into()));
        for n in 0..=20 {
            for kind in [Boson, Fermion] {
                let exact = basic_number(kind, n).unwrap().eval(1.0).unwrap().re;
                assert!(close(exact, crate::scalar::rational_to_f64(&limit_q1(kind, n))));
            }
        }
    }

    #[test]
    fn recurrences() {
        for n in 0..=40 {
            let b = basic_number(Boson, n).unwrap();
            let b1 = basic_number(Boson, n + 1).unwrap();
            assert_eq!(b1, &ScalarValue::q_pow(-n) + &(&q() * &b), "boson n={n}");
            let f = basic_number(Fermion, n).unwrap();
            let f1 = basic_number(Fermion, n + 1).unwrap();
            assert_eq!(f1, &ScalarValue::q_pow(-n) - &(&q() * &f), "fermion n={n}");
        }
    }

    #[test]
    fn inversion_symmetry() {
        for n in 0..=40 {
            let b = basic_number(Boson, n).unwrap();
            assert_eq!(b.invert_q(), b);
        }
        let f2 = basic_number(Fermion, 2).unwrap();
        assert_ne!(f2.invert_q(), f2);
    }

    #[test]
    fn fermionic_sign() {
        for &qv in &[0.1, 0.3, 0.5, 0.7, 0.9, 0.99] {
            for n in 0..=40 {
                let v = basic_number(Fermion, n).unwrap().eval(qv).unwrap().re;
                assert!(v >= 0.0, "q={qv} n={n} -> {v}");
            }
        }
        assert!(basic_number(Fermion, 2).unwrap().eval(1.5).unwrap().re < 0.0);
    }

    #[test]
    fn real_argument() {
        assert!(close(basic_number_real(2.0, 2.0).unwrap(), 2.5));
        assert_eq!(basic_number_real(2.5, 1.0).unwrap(), 2.5);
        assert!(basic_number_real(1.0, 0.0).is_err());
    }
}
