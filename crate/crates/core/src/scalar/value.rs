//! Scalars of the form `Σ r_i · Π √s_ij` with `r_i`, `s_ij` rational functions of `q`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::laurent::LaurentPoly;
use super::ratfunc::RationalFunction;
use crate::error::{Error, Result};

/// Sorted set of distinct canonical radicands; the product of their square roots.
type Radical = Vec<RationalFunction>;

/// Exact scalar: a sum of rational functions each multiplied by a product of
/// formal square roots.
///
/// A radicand appearing twice in a product is promoted into the rational
/// coefficient (`√x·√x = x`). Radicands are canonicalised (even powers of
/// `q` and square rational content pulled out) so equal values built along
/// different routes compare equal.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ScalarValue {
    terms: BTreeMap<Radical, RationalFunction>,
}

impl ScalarValue {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_ratfunc(RationalFunction::one())
    }

    pub fn from_int(c: i64) -> Self {
        Self::from_ratfunc(RationalFunction::from_int(c))
    }

    pub fn from_rational(c: BigRational) -> Self {
        Self::from_ratfunc(RationalFunction::from_rational(c))
    }

    pub fn from_ratio(n: i64, d: i64) -> Self {
        Self::from_rational(BigRational::new(n.into(), d.into()))
    }

    pub fn q() -> Self {
        Self::q_pow(1)
    }

    pub fn q_pow(k: i64) -> Self {
        Self::from_ratfunc(RationalFunction::q_pow(k))
    }

    pub fn from_poly(p: LaurentPoly) -> Self {
        Self::from_ratfunc(RationalFunction::from_poly(p))
    }

    pub fn from_ratfunc(r: RationalFunction) -> Self {
        let mut terms = BTreeMap::new();
        if !r.is_zero() {
            terms.insert(Vec::new(), r);
        }
        Self { terms }
    }

    /// The formal square root `√x` of a rational function.
    pub fn sqrt_of(x: &RationalFunction) -> Self {
        if x.is_zero() {
            return Self::zero();
        }
        let (pre, radicand) = split_sqrt(x);
        let mut terms = BTreeMap::new();
        terms.insert(radicand.into_iter().collect(), pre);
        Self { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&Vec::new()).is_some_and(RationalFunction::is_one)
    }

    /// The value as a plain rational function, if it carries no square roots.
    pub fn as_ratfunc(&self) -> Option<RationalFunction> {
        match self.terms.len() {
            0 => Some(RationalFunction::zero()),
            1 => self.terms.get(&Vec::new()).cloned(),
            _ => None,
        }
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        self.as_ratfunc().and_then(|r| r.as_constant())
    }

    pub fn has_radicals(&self) -> bool {
        self.terms.keys().any(|k| !k.is_empty())
    }

    /// `(rational part, sqrt factors)` when the value is a single product term.
    pub fn as_monomial(&self) -> Option<(&RationalFunction, &[RationalFunction])> {
        if self.terms.len() == 1 {
            let (k, v) = self.terms.iter().next().unwrap();
            Some((v, k.as_slice()))
        } else {
            None
        }
    }

    fn insert_term(&mut self, radical: Radical, coeff: RationalFunction) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.get_mut(&radical) {
            Some(slot) => {
                *slot = &*slot + &coeff;
                if slot.is_zero() {
                    self.terms.remove(&radical);
                }
            }
            None => {
                self.terms.insert(radical, coeff);
            }
        }
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let Some((coeff, radical)) = self.as_monomial() {
            // 1/(c·Π√s) = Π√s / (c·Π s)
            let mut denom = coeff.clone();
            for s in radical {
                denom = &denom * s;
            }
            let mut terms = BTreeMap::new();
            terms.insert(radical.to_vec(), denom.inv()?);
            return Ok(Self { terms });
        }
        // Rationalise by multiplying with conjugates, one radicand at a time.
        let radicands: Vec<RationalFunction> = {
            let mut all: Vec<_> = self.terms.keys().flatten().cloned().collect();
            all.sort();
            all.dedup();
            all
        };
        let mut cur = self.clone();
        let mut mult = Self::one();
        for s in &radicands {
            let conj = cur.flip_sign_of(s);
            mult = &mult * &conj;
            cur = &cur * &conj;
        }
        let denom = cur
            .as_ratfunc()
            .ok_or_else(|| Error::Unsupported("could not rationalise denominator".into()))?;
        if denom.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(&mult * &Self::from_ratfunc(denom.inv()?))
    }

    fn flip_sign_of(&self, s: &RationalFunction) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(k, v)| {
                if k.contains(s) {
                    (k.clone(), -v)
                } else {
                    (k.clone(), v.clone())
                }
            })
            .collect();
        Self { terms }
    }

    pub fn pow(&self, n: i64) -> Result<Self> {
        let base = if n < 0 { self.inv()? } else { self.clone() };
        let mut acc = Self::one();
        for _ in 0..n.unsigned_abs() {
            acc = &acc * &base;
        }
        Ok(acc)
    }

    /// Principal square root. Only defined for values without radicals.
    pub fn sqrt(&self) -> Result<Self> {
        match self.as_ratfunc() {
            Some(r) => Ok(Self::sqrt_of(&r)),
            None => Err(Error::Unsupported(format!(
                "square root of a value that already carries square roots: {self}"
            ))),
        }
    }

    /// `self^(p/d)` for `d ∈ {1, 2}`.
    pub fn pow_ratio(&self, p: i64, d: i64) -> Result<Self> {
        match d {
            1 => self.pow(p),
            2 => self.sqrt()?.pow(p),
            _ => Err(Error::Unsupported(format!("exponent {p}/{d}"))),
        }
    }

    /// Exact value at a positive rational `q`: a rational combination of
    /// square roots of integers.
    pub fn at_q(&self, q: &BigRational) -> Result<Self> {
        if !q.is_positive() {
            return Err(Error::Domain(format!("q must be positive, got {q}")));
        }
        let mut acc = Self::zero();
        for (radical, coeff) in &self.terms {
            let mut t = Self::from_rational(coeff.eval_exact(q)?);
            for s in radical {
                t = &t * &Self::sqrt_of(&RationalFunction::from_rational(s.eval_exact(q)?));
            }
            acc = &acc + &t;
        }
        Ok(acc)
    }

    /// Numeric value at `q`; square roots use the principal complex branch.
    pub fn eval(&self, q: f64) -> Result<Complex64> {
        if !(q > 0.0) {
            return Err(Error::Domain(format!("q must be positive, got {q}")));
        }
        let mut acc = Complex64::zero();
        for (radical, coeff) in &self.terms {
            let mut t = Complex64::new(coeff.eval(q)?, 0.0);
            for s in radical {
                t *= Complex64::new(s.eval(q)?, 0.0).sqrt();
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Substitutes `q → q^{-1}` throughout.
    pub fn invert_q(&self) -> Self {
        let mut out = Self::zero();
        for (radical, coeff) in &self.terms {
            let mut term = Self::from_ratfunc(coeff.invert_q());
            for s in radical {
                term = &term * &Self::sqrt_of(&s.invert_q());
            }
            out = &out + &term;
        }
        out
    }
}

/// Splits `√x` into `prefactor · √radicand` with a canonical radicand
/// (`None` when the radicand is one).
fn split_sqrt(x: &RationalFunction) -> (RationalFunction, Option<RationalFunction>) {
    let low = x.numerator().min_exp().unwrap_or(0);
    let k = low.div_euclid(2);
    let y = x * &RationalFunction::q_pow(-2 * k);
    let c = y.numerator().lowest_coeff().cloned().unwrap_or_else(BigRational::one).abs();
    let s = square_part(&c);
    let radicand = y.scale(&(&s * &s).recip());
    let pre = RationalFunction::q_pow(k).scale(&s);
    if radicand.is_one() {
        (pre, None)
    } else {
        (pre, Some(radicand))
    }
}

/// Largest `s` (up to a trial-division bound) with `c = s²·m`, `m` integer.
fn square_part(c: &BigRational) -> BigRational {
    // √(a/b) = √(ab)/b
    let m = c.numer() * c.denom();
    let (s, _) = integer_square_part(&m);
    BigRational::new(s, c.denom().clone())
}

fn integer_square_part(m: &BigInt) -> (BigInt, BigInt) {
    let mut rest = m.clone();
    let mut s = BigInt::one();
    let mut p = 2u32;
    while p <= 1000 {
        let pp = BigInt::from(p * p);
        while (&rest % &pp).is_zero() {
            rest /= &pp;
            s *= p;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    let r = rest.sqrt();
    if &r * &r == rest {
        s *= r;
        rest = BigInt::one();
    }
    (s, rest)
}

fn merge_radicals(a: &[RationalFunction], b: &[RationalFunction]) -> (RationalFunction, Radical) {
    let mut promoted = RationalFunction::one();
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        match (a.get(i), b.get(j)) {
            (Some(x), Some(y)) if x == y => {
                promoted = &promoted * x;
                i += 1;
                j += 1;
            }
            (Some(x), Some(y)) if x < y => {
                out.push(x.clone());
                i += 1;
            }
            (Some(_), Some(y)) => {
                out.push(y.clone());
                j += 1;
            }
            (Some(x), None) => {
                out.push(x.clone());
                i += 1;
            }
            (None, Some(y)) => {
                out.push(y.clone());
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    // Constant radicands are signed squarefree integers; fold them into one.
    let (consts, mut out): (Vec<_>, Vec<_>) = out.into_iter().partition(|r| r.as_constant().is_some());
    if consts.len() > 1 {
        let mut m = BigInt::one();
        let mut negatives = 0;
        for c in &consts {
            let c = c.as_constant().unwrap().to_integer();
            if c.is_negative() {
                negatives += 1;
            }
            m *= c.abs();
        }
        let (s, rest) = integer_square_part(&m);
        // principal branch: √(-x)·√(-y) = -√(xy)
        let mut factor = BigRational::from_integer(s);
        if negatives / 2 % 2 == 1 {
            factor = -factor;
        }
        promoted = promoted.scale(&factor);
        let rest = if negatives % 2 == 1 { -rest } else { rest };
        if !rest.is_one() {
            out.push(RationalFunction::from_rational(BigRational::from_integer(rest)));
            out.sort();
        }
    } else {
        out.extend(consts);
        out.sort();
    }
    (promoted, out)
}

impl Add for &ScalarValue {
    type Output = ScalarValue;
    fn add(self, rhs: &ScalarValue) -> ScalarValue {
        let mut out = self.clone();
        for (k, v) in &rhs.terms {
            out.insert_term(k.clone(), v.clone());
        }
        out
    }
}

impl Sub for &ScalarValue {
    type Output = ScalarValue;
    fn sub(self, rhs: &ScalarValue) -> ScalarValue {
        let mut out = self.clone();
        for (k, v) in &rhs.terms {
            out.insert_term(k.clone(), -v);
        }
        out
    }
}

impl Mul for &ScalarValue {
    type Output = ScalarValue;
    fn mul(self, rhs: &ScalarValue) -> ScalarValue {
        let mut out = ScalarValue::zero();
        for (k1, v1) in &self.terms {
            for (k2, v2) in &rhs.terms {
                let (promoted, radical) = merge_radicals(k1, k2);
                let coeff = &(v1 * v2) * &promoted;
                out.insert_term(radical, coeff);
            }
        }
        out
    }
}

impl Neg for &ScalarValue {
    type Output = ScalarValue;
    fn neg(self) -> ScalarValue {
        ScalarValue {
            terms: self.terms.iter().map(|(k, v)| (k.clone(), -v)).collect(),
        }
    }
}

impl Add for ScalarValue {
    type Output = ScalarValue;
    fn add(self, rhs: ScalarValue) -> ScalarValue {
        &self + &rhs
    }
}

impl Sub for ScalarValue {
    type Output = ScalarValue;
    fn sub(self, rhs: ScalarValue) -> ScalarValue {
        &self - &rhs
    }
}

impl Mul for ScalarValue {
    type Output = ScalarValue;
    fn mul(self, rhs: ScalarValue) -> ScalarValue {
        &self * &rhs
    }
}

impl Neg for ScalarValue {
    type Output = ScalarValue;
    fn neg(self) -> ScalarValue {
        -&self
    }
}

impl From<RationalFunction> for ScalarValue {
    fn from(r: RationalFunction) -> Self {
        Self::from_ratfunc(r)
    }
}

impl From<i64> for ScalarValue {
    fn from(c: i64) -> Self {
        Self::from_int(c)
    }
}

impl fmt::Display for ScalarValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (radical, coeff)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            if radical.is_empty() {
                write!(f, "{coeff}")?;
                continue;
            }
            let roots: Vec<String> = radical.iter().map(|s| format!("sqrt({s})")).collect();
            if coeff.is_one() {
                f.write_str(&roots.join("*"))?;
            } else if coeff.is_laurent() && coeff.numerator().len() == 1 {
                write!(f, "{coeff}*{}", roots.join("*"))?;
            } else {
                write!(f, "({coeff})*{}", roots.join("*"))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn basic2() -> RationalFunction {
        RationalFunction::from_poly(&LaurentPoly::q() + &LaurentPoly::q_pow(-1))
    }

    #[test]
    fn sqrt_promotion() {
        let s = ScalarValue::sqrt_of(&basic2());
        let p = &s * &s;
        assert!(!p.has_radicals());
        assert_eq!(p, ScalarValue::from_ratfunc(basic2()));
    }

    #[test]
    fn canonical_radicands() {
        // √(4x) = 2√x and √(q^2 x) = q√x
        let x = basic2();
        let four_x = ScalarValue::sqrt_of(&x.scale(&BigRational::from_integer(4.into())));
        let two_root = &ScalarValue::from_int(2) * &ScalarValue::sqrt_of(&x);
        assert_eq!(four_x, two_root);
        let q2x = ScalarValue::sqrt_of(&(&x * &RationalFunction::q_pow(2)));
        assert_eq!(q2x, &ScalarValue::q() * &ScalarValue::sqrt_of(&x));
        // √(12) = 2√3
        let twelve = ScalarValue::sqrt_of(&RationalFunction::from_int(12));
        let want = &ScalarValue::from_int(2) * &ScalarValue::sqrt_of(&RationalFunction::from_int(3));
        assert_eq!(twelve, want);
    }

    #[test]
    fn inverse_of_radical_sum() {
        let x = &ScalarValue::one() + &ScalarValue::sqrt_of(&RationalFunction::from_int(2));
        let inv = x.inv().unwrap();
        assert!((&x * &inv).is_one());
        let y = &ScalarValue::sqrt_of(&basic2()) + &ScalarValue::sqrt_of(&RationalFunction::q_pow(1));
        let inv = y.inv().unwrap();
        assert!((&y * &inv).is_one());
    }

    #[test]
    fn inverse_of_zero_fails() {
        assert_eq!(ScalarValue::zero().inv(), Err(Error::DivisionByZero));
    }

    #[test]
    fn negative_radicand_is_imaginary() {
        // √(q^-1 - q) at q = 2 is i·√1.5
        let f = RationalFunction::from_poly(&LaurentPoly::q_pow(-1) - &LaurentPoly::q());
        let v = ScalarValue::sqrt_of(&f).eval(2.0).unwrap();
        assert!(v.re.abs() < 1e-15);
        assert!((v.im - 1.5f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn constant_radicals_fold() {
        let r = |n: i64| RationalFunction::from_int(n);
        let s6 = ScalarValue::sqrt_of(&r(6));
        let s2s3 = &ScalarValue::sqrt_of(&r(2)) * &ScalarValue::sqrt_of(&r(3));
        assert_eq!(s6, s2s3);
        let s2s6 = &ScalarValue::sqrt_of(&r(2)) * &s6;
        assert_eq!(s2s6, &ScalarValue::from_int(2) * &ScalarValue::sqrt_of(&r(3)));
        let neg = &ScalarValue::sqrt_of(&r(-2)) * &ScalarValue::sqrt_of(&r(-3));
        assert_eq!(neg, -&s6);
    }

    #[test]
    fn exact_value_at_rational_q() {
        let half = BigRational::new(1.into(), 2.into());
        let x = ScalarValue::sqrt_of(&RationalFunction::from_poly(&LaurentPoly::q_pow(-1) + &LaurentPoly::q()));
        // sqrt(2 + 1/2) = sqrt(10)/2
        let want = &ScalarValue::from_ratio(1, 2) * &ScalarValue::sqrt_of(&RationalFunction::from_int(10));
        assert_eq!(x.at_q(&half).unwrap(), want);
    }

}
