//! Functions of the number operator `N`.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use num_rational::Rational64;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::qnum::{basic_number_signed, BasicKind};
use crate::scalar::{RationalFunction, ScalarValue};

/// Expression tree for a diagonal operator `f(N)`.
///
/// Every atom carries its own integer shift, so `shift(f, m)` rewrites only
/// the leaves and `shift(shift(f, m), -m)` restores the original tree.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum DiagonalFunction {
    Const(ScalarValue),
    /// `N + shift`
    Num { shift: i64 },
    /// `q^(coeff·N + offset)`
    QPow { coeff: Rational64, offset: Rational64 },
    /// `(-1)^(N + shift)`
    Sign { shift: i64 },
    /// `[N + shift]` or `[N + shift]^F`
    Basic { kind: BasicKind, shift: i64 },
    /// Tabulated values `f(0), f(1), …`, read at `N + shift`.
    Table { values: Arc<Vec<ScalarValue>>, shift: i64 },
    Sum(Vec<DiagonalFunction>),
    Product(Vec<DiagonalFunction>),
    Quotient(Box<DiagonalFunction>, Box<DiagonalFunction>),
    Pow(Box<DiagonalFunction>, Rational64),
}

use DiagonalFunction as D;

impl DiagonalFunction {
    pub fn one() -> Self {
        D::Const(ScalarValue::one())
    }

    pub fn zero() -> Self {
        D::Const(ScalarValue::zero())
    }

    pub fn constant(s: ScalarValue) -> Self {
        D::Const(s)
    }

    pub fn int(c: i64) -> Self {
        D::Const(ScalarValue::from_int(c))
    }

    /// The number operator `N`.
    pub fn n() -> Self {
        D::Num { shift: 0 }
    }

    /// `q^(c·N + d)`
    pub fn q_pow(coeff: Rational64, offset: Rational64) -> Self {
        D::QPow { coeff, offset }
    }

    pub fn q_pow_n() -> Self {
        Self::q_pow(Rational64::one(), Rational64::zero())
    }

    pub fn sign() -> Self {
        D::Sign { shift: 0 }
    }

    pub fn basic(kind: BasicKind, shift: i64) -> Self {
        D::Basic { kind, shift }
    }

    pub fn table(values: Vec<ScalarValue>) -> Self {
        D::Table {
            values: Arc::new(values),
            shift: 0,
        }
    }

    pub fn is_one(&self) -> bool {
        matches!(self, D::Const(c) if c.is_one())
    }

    pub fn is_const_zero(&self) -> bool {
        matches!(self, D::Const(c) if c.is_zero())
    }

    pub fn mul(a: Self, b: Self) -> Self {
        match (a, b) {
            (x, y) if x.is_one() => y,
            (x, y) if y.is_one() => x,
            (D::Const(x), D::Const(y)) => D::Const(&x * &y),
            (x, y) => {
                let mut factors = match x {
                    D::Product(v) => v,
                    other => vec![other],
                };
                let incoming = match y {
                    D::Product(v) => v,
                    other => vec![other],
                };
                for f in incoming {
                    push_factor(&mut factors, f);
                }
                match factors.len() {
                    0 => Self::one(),
                    1 => factors.pop().unwrap(),
                    _ => D::Product(factors),
                }
            }
        }
    }

    pub fn add(a: Self, b: Self) -> Self {
        match (a, b) {
            (x, y) if x.is_const_zero() => y,
            (x, y) if y.is_const_zero() => x,
            (D::Const(x), D::Const(y)) => D::Const(&x + &y),
            (x, y) => {
                let mut terms = match x {
                    D::Sum(v) => v,
                    other => vec![other],
                };
                match y {
                    D::Sum(v) => terms.extend(v),
                    other => terms.push(other),
                }
                D::Sum(terms)
            }
        }
    }

    pub fn neg(a: Self) -> Self {
        match a {
            D::Const(c) => D::Const(-&c),
            other => Self::mul(D::int(-1), other),
        }
    }

    pub fn sub(a: Self, b: Self) -> Self {
        Self::add(a, Self::neg(b))
    }

    pub fn div(a: Self, b: Self) -> Self {
        if b.is_one() {
            return a;
        }
        D::Quotient(Box::new(a), Box::new(b))
    }

    pub fn pow(a: Self, r: Rational64) -> Self {
        if r.is_one() {
            return a;
        }
        if r.is_zero() {
            return Self::one();
        }
        if let D::Const(c) = &a {
            if r.is_integer() {
                if let Ok(v) = c.pow(*r.numer()) {
                    return D::Const(v);
                }
            }
        }
        D::Pow(Box::new(a), r)
    }

    /// `f(N + m)`.
    pub fn shift(&self, m: i64) -> Self {
        if m == 0 {
            return self.clone();
        }
        match self {
            D::Const(c) => D::Const(c.clone()),
            D::Num { shift } => D::Num { shift: shift + m },
            D::QPow { coeff, offset } => D::QPow {
                coeff: *coeff,
                offset: offset + coeff * m,
            },
            D::Sign { shift } => D::Sign { shift: shift + m },
            D::Basic { kind, shift } => D::Basic {
                kind: *kind,
                shift: shift + m,
            },
            D::Table { values, shift } => D::Table {
                values: values.clone(),
                shift: shift + m,
            },
            D::Sum(v) => D::Sum(v.iter().map(|f| f.shift(m)).collect()),
            D::Product(v) => D::Product(v.iter().map(|f| f.shift(m)).collect()),
            D::Quotient(a, b) => D::Quotient(Box::new(a.shift(m)), Box::new(b.shift(m))),
            D::Pow(a, r) => D::Pow(Box::new(a.shift(m)), *r),
        }
    }

    /// Exact value at the integer level `n`.
    pub fn eval(&self, n: i64) -> Result<ScalarValue> {
        match self {
            D::Const(c) => Ok(c.clone()),
            D::Num { shift } => Ok(ScalarValue::from_int(n + shift)),
            D::QPow { coeff, offset } => q_power_exact(coeff * n + offset),
            D::Sign { shift } => Ok(ScalarValue::from_int(sign_of(n + shift))),
            D::Basic { kind, shift } => Ok(basic_number_signed(*kind, n + shift)),
            D::Table { values, shift } => {
                let idx = n + shift;
                usize::try_from(idx)
                    .ok()
                    .and_then(|i| values.get(i))
                    .cloned()
                    .ok_or_else(|| Error::Singular {
                        level: n,
                        what: format!("table index {idx} outside 0..{}", values.len()),
                    })
            }
            D::Sum(v) => {
                let mut acc = ScalarValue::zero();
                for f in v {
                    acc = &acc + &f.eval(n)?;
                }
                Ok(acc)
            }
            D::Product(v) => {
                // A factor that is exactly zero annihilates the product even
                // where another factor is undefined (e.g. a|0> = 0 times a
                // weight evaluated below the vacuum).
                let vals: Vec<Result<ScalarValue>> = v.iter().map(|f| f.eval(n)).collect();
                if vals.iter().any(|r| matches!(r, Ok(x) if x.is_zero())) {
                    return Ok(ScalarValue::zero());
                }
                let mut acc = ScalarValue::one();
                for r in vals {
                    acc = &acc * &r?;
                }
                Ok(acc)
            }
            D::Quotient(a, b) => {
                let den = b.eval(n)?;
                if den.is_zero() {
                    return Err(Error::Singular {
                        level: n,
                        what: format!("{self}"),
                    });
                }
                Ok(&a.eval(n)? * &den.inv()?)
            }
            D::Pow(a, r) => {
                let base = a.eval(n)?;
                if base.is_zero() && *r.numer() < 0 {
                    return Err(Error::Singular {
                        level: n,
                        what: format!("{self}"),
                    });
                }
                base.pow_ratio(*r.numer(), *r.denom())
            }
        }
    }

    /// Floating-point value at level `n` and deformation `q`, computed
    /// without going through the exact field.
    pub fn eval_numeric(&self, n: i64, q: f64) -> Result<Complex64> {
        let re = |x: f64| Ok(Complex64::new(x, 0.0));
        match self {
            D::Const(c) => c.eval(q),
            D::Num { shift } => re((n + shift) as f64),
            D::QPow { coeff, offset } => {
                let e = coeff * n + offset;
                re(q.powf(*e.numer() as f64 / *e.denom() as f64))
            }
            D::Sign { shift } => re(sign_of(n + shift) as f64),
            D::Basic { kind, shift } => re(basic_numeric(*kind, n + shift, q)),
            D::Table { .. } => self.eval(n)?.eval(q),
            D::Sum(v) => v.iter().map(|f| f.eval_numeric(n, q)).sum(),
            D::Product(v) => {
                let vals: Vec<Result<Complex64>> =
                    v.iter().map(|f| f.eval_numeric(n, q)).collect();
                if vals.iter().any(|r| matches!(r, Ok(x) if *x == Complex64::zero())) {
                    return Ok(Complex64::zero());
                }
                vals.into_iter().product()
            }
            D::Quotient(a, b) => {
                let den = b.eval_numeric(n, q)?;
                if den == Complex64::zero() {
                    return Err(Error::Singular {
                        level: n,
                        what: format!("{self}"),
                    });
                }
                Ok(a.eval_numeric(n, q)? / den)
            }
            D::Pow(a, r) => {
                let base = a.eval_numeric(n, q)?;
                let (p, d) = (*r.numer(), *r.denom());
                if base == Complex64::zero() && p < 0 {
                    return Err(Error::Singular {
                        level: n,
                        what: format!("{self}"),
                    });
                }
                let root = match d {
                    1 => base,
                    2 => base.sqrt(),
                    _ => return Err(Error::Unsupported(format!("exponent {r}"))),
                };
                Ok(root.powi(p as i32))
            }
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, prec: u8) -> fmt::Result {
        // 0: sum level, 1: product level, 2: power operand
        let (own, body) = match self {
            D::Const(c) => {
                let s = c.to_string();
                let simple = c.as_rational().is_some_and(|r| r.is_integer() && r >= num_rational::BigRational::zero())
                    || c.as_ratfunc().is_some_and(|r| r.is_laurent() && r.numerator().len() == 1 && r.numerator().lowest_coeff().is_some_and(|x| x.is_one()));
                (if simple { 3 } else { 0 }, s)
            }
            D::Num { shift: 0 } => (3, "N".to_string()),
            D::Num { shift } => (0, format!("N{}", signed(*shift))),
            D::QPow { coeff, offset } => (3, crate::expr::fmt_q_atom(*coeff, *offset)),
            D::Sign { shift: 0 } => (3, "(-1)^N".to_string()),
            D::Sign { shift } => (3, format!("(-1)^(N{})", signed(*shift))),
            D::Basic { kind, shift } => {
                let inner = if *shift == 0 {
                    "N".to_string()
                } else {
                    format!("N{}", signed(*shift))
                };
                let suffix = if *kind == BasicKind::Fermion { "F" } else { "" };
                (3, format!("[{inner}]{suffix}"))
            }
            D::Table { shift, .. } => {
                let arg = if *shift == 0 {
                    "N".to_string()
                } else {
                    format!("N{}", signed(*shift))
                };
                (3, format!("table({arg})"))
            }
            D::Sum(v) => {
                let mut s = String::new();
                for (i, t) in v.iter().enumerate() {
                    if i > 0 {
                        s.push_str(" + ");
                    }
                    s.push_str(&format!("{}", Prec(t, 1)));
                }
                (0, s)
            }
            D::Product(v) => {
                let parts: Vec<String> = v.iter().map(|t| format!("{}", Prec(t, 2))).collect();
                (1, parts.join("*"))
            }
            D::Quotient(a, b) => (1, format!("{} / {}", Prec(a, 1), Prec(b, 2))),
            D::Pow(a, r) => {
                let e = if r.is_integer() {
                    format!("{}", r.numer())
                } else {
                    format!("({}/{})", r.numer(), r.denom())
                };
                (2, format!("{}^{e}", Prec(a, 3)))
            }
        };
        if own < prec {
            write!(f, "({body})")
        } else {
            f.write_str(&body)
        }
    }
}

struct Prec<'a>(&'a DiagonalFunction, u8);

impl fmt::Display for Prec<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt_prec(f, self.1)
    }
}

impl fmt::Display for DiagonalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

fn signed(k: i64) -> String {
    if k < 0 {
        format!("-{}", -k)
    } else {
        format!("+{k}")
    }
}

fn push_factor(factors: &mut Vec<DiagonalFunction>, f: DiagonalFunction) {
    if f.is_one() {
        return;
    }
    if let Some(last) = factors.last_mut() {
        let (lb, le) = base_and_exp(last);
        let (fb, fe) = base_and_exp(&f);
        if lb == fb && !(le + fe).is_zero() {
            let base = lb.clone();
            let merged = DiagonalFunction::pow(base, le + fe);
            *last = merged;
            if last.is_one() {
                factors.pop();
            }
            return;
        }
        if let (D::Const(a), D::Const(b)) = (&*last, &f) {
            *last = D::Const(a * b);
            return;
        }
    }
    factors.push(f);
}

fn base_and_exp(f: &DiagonalFunction) -> (&DiagonalFunction, Rational64) {
    match f {
        D::Pow(b, r) => (b, *r),
        other => (other, Rational64::one()),
    }
}

fn sign_of(k: i64) -> i64 {
    if k.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

fn q_power_exact(e: Rational64) -> Result<ScalarValue> {
    match *e.denom() {
        1 => Ok(ScalarValue::q_pow(*e.numer())),
        2 => {
            let whole = (*e.numer() - 1).div_euclid(2);
            Ok(&ScalarValue::q_pow(whole) * &ScalarValue::sqrt_of(&RationalFunction::q_pow(1)))
        }
        _ => Err(Error::Unsupported(format!("q^({e}) is outside the square-root extension"))),
    }
}

/// Basic numbers in floating point, via the finite sums that avoid the
/// `q = 1` cancellation in the closed form.
pub(crate) fn basic_numeric(kind: BasicKind, m: i64, q: f64) -> f64 {
    match kind {
        BasicKind::Boson => {
            if m < 0 {
                return -basic_numeric(kind, -m, q);
            }
            (0..m).map(|k| q.powi((m - 1 - 2 * k) as i32)).sum()
        }
        BasicKind::Fermion => {
            let s = sign_of(m) as f64;
            (q.powi(-m as i32) - s * q.powi(m as i32)) / (q + q.recip())
        }
    }
}
