//! Reduced rational functions of `q` over the rationals.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::laurent::{poly_divrem, poly_gcd, LaurentPoly};
use crate::error::{Error, Result};

/// `numerator / denominator`, always stored reduced.
///
/// Normal form: the numerator and denominator share no non-unit factor, the
/// denominator's lowest exponent is zero and its lowest coefficient is one.
/// Units `c·q^k` are carried entirely by the numerator, so two equal
/// functions have identical representations.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RationalFunction {
    num: LaurentPoly,
    den: LaurentPoly,
}

impl RationalFunction {
    pub fn new(num: LaurentPoly, den: LaurentPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::reduce(num, den))
    }

    pub fn zero() -> Self {
        Self::from_poly(LaurentPoly::zero())
    }

    pub fn one() -> Self {
        Self::from_poly(LaurentPoly::one())
    }

    pub fn from_int(c: i64) -> Self {
        Self::from_poly(LaurentPoly::from_int(c))
    }

    pub fn from_rational(c: BigRational) -> Self {
        Self::from_poly(LaurentPoly::constant(c))
    }

    pub fn q_pow(k: i64) -> Self {
        Self::from_poly(LaurentPoly::q_pow(k))
    }

    pub fn from_poly(num: LaurentPoly) -> Self {
        Self {
            num,
            den: LaurentPoly::one(),
        }
    }

    pub fn numerator(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn denominator(&self) -> &LaurentPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// True when the denominator is one, i.e. a Laurent polynomial.
    pub fn is_laurent(&self) -> bool {
        self.den.is_one()
    }

    pub fn as_constant(&self) -> Option<BigRational> {
        if self.den.is_one() {
            self.num.as_constant()
        } else {
            None
        }
    }

    fn reduce(num: LaurentPoly, den: LaurentPoly) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let (sn, mut pn) = num.to_dense();
        let (sd, mut pd) = den.to_dense();
        if pd.len() > 1 && pn.len() > 1 {
            let g = poly_gcd(&pn, &pd);
            if g.len() > 1 {
                pn = poly_divrem(&pn, &g).0;
                pd = poly_divrem(&pd, &g).0;
            }
        }
        let lead = pd[0].clone();
        if !lead.is_one() {
            for c in pn.iter_mut().chain(pd.iter_mut()) {
                *c = &*c / &lead;
            }
        }
        Self {
            num: LaurentPoly::from_dense(sn - sd, &pn),
            den: LaurentPoly::from_dense(0, &pd),
        }
    }

    /// Re-runs reduction; the identity on already reduced values.
    pub fn reduced(&self) -> Self {
        Self::reduce(self.num.clone(), self.den.clone())
    }

    pub fn inv(&self) -> Result<Self> {
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn pow(&self, n: i64) -> Result<Self> {
        let base = if n < 0 { self.inv()? } else { self.clone() };
        let e = n.unsigned_abs() as u32;
        Ok(Self {
            num: base.num.pow(e),
            den: base.den.pow(e),
        }
        .reduced())
    }

    /// Substitutes `q → q^{-1}`.
    pub fn invert_q(&self) -> Self {
        Self::reduce(self.num.invert_q(), self.den.invert_q())
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        if s.is_zero() {
            return Self::zero();
        }
        Self {
            num: self.num.scale(s),
            den: self.den.clone(),
        }
    }

    pub fn eval(&self, q: f64) -> Result<f64> {
        let d = self.den.eval(q);
        let scale = self.den.magnitude_scale(q);
        if !d.is_finite() || d.abs() <= 1e-14 * scale {
            return Err(Error::Pole {
                factor: self.den.to_string(),
                q,
            });
        }
        Ok(self.num.eval(q) / d)
    }

    /// Exact value at a positive rational `q`.
    pub fn eval_exact(&self, q: &BigRational) -> Result<BigRational> {
        let d = self.den.eval_exact(q);
        if d.is_zero() {
            return Err(Error::Pole {
                factor: self.den.to_string(),
                q: super::rational_to_f64(q),
            });
        }
        Ok(self.num.eval_exact(q) / d)
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            let num = if self.num.len() > 1 {
                format!("({})", self.num)
            } else {
                self.num.to_string()
            };
            let den = if self.den.len() > 1 {
                format!("({})", self.den)
            } else {
                self.den.to_string()
            };
            write!(f, "{num}/{den}")
        }
    }
}

impl Add for &RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: &RationalFunction) -> RationalFunction {
        if self.den == rhs.den {
            if self.den.is_one() {
                return RationalFunction::from_poly(&self.num + &rhs.num);
            }
            return RationalFunction::reduce(&self.num + &rhs.num, self.den.clone());
        }
        RationalFunction::reduce(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
    }
}

impl Sub for &RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: &RationalFunction) -> RationalFunction {
        self + &(-rhs)
    }
}

impl Mul for &RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: &RationalFunction) -> RationalFunction {
        if self.is_zero() || rhs.is_zero() {
            return RationalFunction::zero();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return RationalFunction::from_poly(&self.num * &rhs.num);
        }
        RationalFunction::reduce(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Zero for RationalFunction {
    fn zero() -> Self {
        RationalFunction::zero()
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl Add for RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: Self) -> Self {
        &self + &rhs
    }
}
