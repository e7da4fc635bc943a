//! Sparse Laurent polynomials in `q` with exact rational coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// A finite sum `Σ c_k q^k` over integer exponents `k`.
///
/// Zero coefficients are never stored, so structural equality is value
/// equality.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LaurentPoly {
    terms: BTreeMap<i64, BigRational>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    /// The deformation parameter `q` itself.
    pub fn q() -> Self {
        Self::monomial(BigRational::one(), 1)
    }

    pub fn constant(c: BigRational) -> Self {
        Self::monomial(c, 0)
    }

    pub fn from_int(c: i64) -> Self {
        Self::constant(BigRational::from_integer(BigInt::from(c)))
    }

    pub fn monomial(c: BigRational, exp: i64) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        Self { terms }
    }

    /// `q^exp` with unit coefficient.
    pub fn q_pow(exp: i64) -> Self {
        Self::monomial(BigRational::one(), exp)
    }

    pub fn from_terms<I: IntoIterator<Item = (i64, BigRational)>>(iter: I) -> Self {
        let mut p = Self::zero();
        for (e, c) in iter {
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, exp: i64, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(exp).or_insert_with(BigRational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&exp);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0).is_some_and(One::is_one)
    }

    /// Returns the constant if the polynomial has no non-zero powers of `q`.
    pub fn as_constant(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => self.terms.get(&0).cloned(),
            _ => None,
        }
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i64, &BigRational)> + '_ {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    pub fn lowest_coeff(&self) -> Option<&BigRational> {
        self.terms.values().next()
    }

    /// Multiplies by `q^k`.
    pub fn shift(&self, k: i64) -> Self {
        Self {
            terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect(),
        }
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        if s.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(e, c)| (*e, c * s)).collect(),
        }
    }

    /// Substitutes `q → q^{-1}`.
    pub fn invert_q(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(e, c)| (-e, c.clone())).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    pub fn eval(&self, q: f64) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| rational_to_f64(c) * powi(q, *e))
            .sum()
    }

    /// Exact value at a rational `q ≠ 0`.
    pub fn eval_exact(&self, q: &BigRational) -> BigRational {
        self.terms
            .iter()
            .map(|(e, c)| c * num_traits::pow::Pow::pow(q, *e as i32))
            .fold(BigRational::zero(), |acc, t| acc + t)
    }

    /// Sum of absolute term magnitudes at `q`; the scale against which a
    /// cancellation to zero is judged.
    pub fn magnitude_scale(&self, q: f64) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| rational_to_f64(c).abs() * powi(q, *e))
            .sum()
    }

    /// Dense ascending coefficients of `self · q^{-min_exp}`, paired with
    /// `min_exp`. The zero polynomial maps to an empty vector.
    pub(crate) fn to_dense(&self) -> (i64, Vec<BigRational>) {
        let Some(lo) = self.min_exp() else {
            return (0, Vec::new());
        };
        let hi = self.max_exp().unwrap_or(lo);
        let mut v = vec![BigRational::zero(); (hi - lo + 1) as usize];
        for (e, c) in &self.terms {
            v[(e - lo) as usize] = c.clone();
        }
        (lo, v)
    }

    pub(crate) fn from_dense(shift: i64, coeffs: &[BigRational]) -> Self {
        Self::from_terms(
            coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| (shift + i as i64, c.clone())),
        )
    }
}

fn powi(q: f64, e: i64) -> f64 {
    match i32::try_from(e) {
        Ok(e) => q.powi(e),
        Err(_) => q.powf(e as f64),
    }
}

pub(crate) fn rational_to_f64(r: &BigRational) -> f64 {
    if let (Some(n), Some(d)) = (r.numer().to_f64(), r.denom().to_f64()) {
        if n.is_finite() && d.is_finite() {
            return n / d;
        }
    }
    // Very large numerator or denominator: scale through the bit lengths.
    let shift = r.numer().bits().max(r.denom().bits()) as i64 - 500;
    let n = scaled_f64(r.numer(), shift);
    let d = scaled_f64(r.denom(), shift);
    n / d
}

fn scaled_f64(x: &BigInt, shift: i64) -> f64 {
    if shift <= 0 {
        return x.to_f64().unwrap_or(f64::NAN);
    }
    (x >> (shift as usize)).to_f64().unwrap_or(f64::NAN)
}

/// Writes a rational in the form the expression grammar reads back.
pub(crate) fn fmt_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            let power = match *e {
                0 => None,
                1 => Some("q".to_string()),
                e => Some(format!("q^{e}")),
            };
            match (abs.is_one(), power) {
                (true, Some(p)) => f.write_str(&p)?,
                (_, None) => f.write_str(&fmt_rational(&abs))?,
                (false, Some(p)) => write!(f, "{}*{}", fmt_rational(&abs), p)?,
            }
        }
        Ok(())
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, -c.clone());
        }
        out
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c.clone())).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for LaurentPoly {
            type Output = LaurentPoly;
            fn $m(self, rhs: LaurentPoly) -> LaurentPoly {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

// Dense polynomial helpers (ascending coefficients, no trailing zeros).

fn trim(v: &mut Vec<BigRational>) {
    while v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
}

/// Quotient and remainder of dense polynomials over the rationals.
pub(crate) fn poly_divrem(
    num: &[BigRational],
    den: &[BigRational],
) -> (Vec<BigRational>, Vec<BigRational>) {
    let mut rem: Vec<BigRational> = num.to_vec();
    trim(&mut rem);
    let mut d = den.to_vec();
    trim(&mut d);
    assert!(!d.is_empty(), "polynomial division by zero");
    if rem.len() < d.len() {
        return (Vec::new(), rem);
    }
    let lead = d.last().unwrap().clone();
    let mut quot = vec![BigRational::zero(); rem.len() - d.len() + 1];
    while rem.len() >= d.len() {
        let shift = rem.len() - d.len();
        let factor = rem.last().unwrap() / &lead;
        for (i, c) in d.iter().enumerate() {
            let t = c * &factor;
            rem[shift + i] -= t;
        }
        quot[shift] = factor;
        rem.pop();
        trim(&mut rem);
    }
    trim(&mut quot);
    (quot, rem)
}

/// Monic greatest common divisor of two dense polynomials.
pub(crate) fn poly_gcd(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let (_, r) = poly_divrem(&x, &y);
        x = y;
        y = make_monic(r);
    }
    make_monic(x)
}

fn make_monic(mut v: Vec<BigRational>) -> Vec<BigRational> {
    trim(&mut v);
    if let Some(lead) = v.last().cloned() {
        if !lead.is_one() {
            for c in v.iter_mut() {
                *c = &*c / &lead;
            }
        }
    }
    v
}
