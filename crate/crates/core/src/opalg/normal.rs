//! Normal ordering into the canonical shape `Σ a†ʲ g(N) aᵏ`.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::Rational64;
use num_traits::Zero;

use super::{AlgebraFamily, DiagonalFunction};
use crate::error::{Error, Result};
use crate::expr::OperatorExpr;

/// Levels probed when discarding terms that vanish identically.
pub const ZERO_PROBE_LEVELS: i64 = 24;

/// `Σ a†ʲ g_{jk}(N) aᵏ`, keyed by `(j, k)`.
///
/// Forms produced by [`normal_order`] have `j = 0` or `k = 0` on every key:
/// an adjacent `a†…a` pair is always contracted through `a†a = Φ₋(N)`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct NormalForm {
    terms: BTreeMap<(usize, usize), DiagonalFunction>,
}

#[derive(Clone, Copy)]
enum Letter {
    Raise,
    Lower,
}

impl NormalForm {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn identity() -> Self {
        Self::diagonal(DiagonalFunction::one())
    }

    pub fn diagonal(f: DiagonalFunction) -> Self {
        Self::term(0, 0, f)
    }

    pub fn term(j: usize, k: usize, g: DiagonalFunction) -> Self {
        let mut terms = BTreeMap::new();
        if !g.is_const_zero() {
            terms.insert((j, k), g);
        }
        Self { terms }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(usize, usize), &DiagonalFunction)> {
        self.terms.iter()
    }

    pub fn get(&self, j: usize, k: usize) -> Option<&DiagonalFunction> {
        self.terms.get(&(j, k))
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    /// The diagonal part, if the form has no ladder operators at all.
    pub fn as_diagonal(&self) -> Option<DiagonalFunction> {
        match self.terms.len() {
            0 => Some(DiagonalFunction::zero()),
            1 => self.terms.get(&(0, 0)).cloned(),
            _ => None,
        }
    }

    fn add_term(&mut self, key: (usize, usize), g: DiagonalFunction) {
        if g.is_const_zero() {
            return;
        }
        let merged = match self.terms.remove(&key) {
            Some(old) => DiagonalFunction::add(old, g),
            None => g,
        };
        if !merged.is_const_zero() {
            self.terms.insert(key, merged);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, g) in &other.terms {
            out.add_term(*k, g.clone());
        }
        out
    }

    pub fn scale(&self, c: DiagonalFunction) -> Self {
        let mut out = Self::zero();
        for (k, g) in &self.terms {
            out.add_term(*k, DiagonalFunction::mul(c.clone(), g.clone()));
        }
        out
    }

    pub fn neg(&self) -> Self {
        let mut out = Self::zero();
        for (k, g) in &self.terms {
            out.add_term(*k, DiagonalFunction::neg(g.clone()));
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Product `self · other` in the given family.
    pub fn mul(&self, other: &Self, family: &AlgebraFamily) -> Self {
        let mut out = Self::zero();
        for (&(j, k), g) in &self.terms {
            for (&key, h) in &other.terms {
                // Apply the word a†ʲ g aᵏ to (key, h) from the right.
                let mut cur = (key.0, key.1, h.clone());
                for _ in 0..k {
                    cur = apply_letter(Letter::Lower, cur, family);
                }
                cur = apply_diag(g, cur);
                for _ in 0..j {
                    cur = apply_letter(Letter::Raise, cur, family);
                }
                let (a, b, d) = contract(cur.0, cur.1, cur.2, family);
                if let Some(m) = family.max_level {
                    if a > m || b > m {
                        continue;
                    }
                }
                out.add_term((a, b), d);
            }
        }
        out
    }

    /// Drops terms whose diagonal evaluates to exactly zero on every level
    /// `0..=levels` where it is defined.
    pub fn prune(&self, levels: i64) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|(_, g)| !vanishes(g, levels))
            .map(|(k, g)| (*k, g.clone()))
            .collect();
        Self { terms }
    }

    /// The equivalent expression tree `Σ ad^j * g * a^k`.
    pub fn to_expr(&self) -> OperatorExpr {
        let mut terms = self.terms.iter().map(|(&(j, k), g)| {
            let mut factors = Vec::new();
            factors.extend(std::iter::repeat_n(OperatorExpr::ad(), j));
            if !g.is_one() || (j == 0 && k == 0) {
                factors.push(OperatorExpr::diag(g.clone()));
            }
            factors.extend(std::iter::repeat_n(OperatorExpr::a(), k));
            OperatorExpr::product_of(factors)
        });
        match terms.next() {
            None => OperatorExpr::int(0),
            Some(first) => terms.fold(first, OperatorExpr::sum),
        }
    }
}

fn vanishes(g: &DiagonalFunction, levels: i64) -> bool {
    let mut any_defined = false;
    for n in 0..=levels {
        match g.eval(n) {
            Ok(v) if !v.is_zero() => return false,
            Ok(_) => any_defined = true,
            Err(_) => {}
        }
    }
    any_defined
}

/// `D · (a†ʲ g aᵏ) = a†ʲ D(N+j) g aᵏ`
fn apply_diag(d: &DiagonalFunction, (j, k, g): (usize, usize, DiagonalFunction)) -> (usize, usize, DiagonalFunction) {
    (j, k, DiagonalFunction::mul(d.shift(j as i64), g))
}

fn apply_letter(
    letter: Letter,
    (j, k, g): (usize, usize, DiagonalFunction),
    family: &AlgebraFamily,
) -> (usize, usize, DiagonalFunction) {
    match letter {
        Letter::Raise => contract(j + 1, k, g, family),
        Letter::Lower if j == 0 => (0, k + 1, g.shift(1)),
        // a a†ʲ g = Φ₊(N) a†^{j-1} g = a†^{j-1} Φ₊(N+j-1) g
        Letter::Lower => (
            j - 1,
            k,
            DiagonalFunction::mul(family.upper_spectrum.shift(j as i64 - 1), g),
        ),
    }
}

/// Contracts `a† g a → g(N-1) Φ₋(N)` until one side is exhausted.
fn contract(
    mut j: usize,
    mut k: usize,
    mut g: DiagonalFunction,
    family: &AlgebraFamily,
) -> (usize, usize, DiagonalFunction) {
    while j > 0 && k > 0 {
        g = DiagonalFunction::mul(g.shift(-1), family.lower_spectrum.clone());
        j -= 1;
        k -= 1;
    }
    (j, k, g)
}

/// Rewrites `expr` into canonical form using the family's structure
/// functions and `f(N) a = a f(N-1)`.
pub fn normal_order(expr: &OperatorExpr, family: &AlgebraFamily) -> Result<NormalForm> {
    if expr.ladders().len() > 1 {
        return Err(Error::MixedLadders);
    }
    Ok(order_rec(expr, family)?.prune(ZERO_PROBE_LEVELS))
}

fn order_rec(expr: &OperatorExpr, family: &AlgebraFamily) -> Result<NormalForm> {
    use OperatorExpr as E;
    Ok(match expr {
        E::Lower(_) => NormalForm::term(0, 1, DiagonalFunction::one()),
        E::Raise(_) => NormalForm::term(1, 0, DiagonalFunction::one()),
        E::Diag(f) => NormalForm::diagonal(f.clone()),
        E::Number(r) => NormalForm::diagonal(DiagonalFunction::constant(crate::scalar::ScalarValue::from_rational(r.clone()))),
        E::Sum(a, b) => order_rec(a, family)?.add(&order_rec(b, family)?),
        E::Diff(a, b) => order_rec(a, family)?.sub(&order_rec(b, family)?),
        E::Neg(a) => order_rec(a, family)?.neg(),
        E::Product(a, b) => order_rec(a, family)?.mul(&order_rec(b, family)?, family),
        E::Pow(a, r) => {
            let base = order_rec(a, family)?;
            power(&base, *r, family)?
        }
        E::Sqrt(a) => power(&order_rec(a, family)?, Rational64::new(1, 2), family)?,
        E::Commutator(a, b) => {
            let (x, y) = (order_rec(a, family)?, order_rec(b, family)?);
            x.mul(&y, family).sub(&y.mul(&x, family))
        }
        E::Anticommutator(a, b) => {
            let (x, y) = (order_rec(a, family)?, order_rec(b, family)?);
            x.mul(&y, family).add(&y.mul(&x, family))
        }
        E::Adjoint(a) => order_rec(&a.adjoint(), family)?,
    })
}

fn power(base: &NormalForm, r: Rational64, family: &AlgebraFamily) -> Result<NormalForm> {
    if r.is_integer() && *r.numer() >= 0 {
        let mut acc = NormalForm::identity();
        for _ in 0..*r.numer() {
            acc = acc.mul(base, family);
        }
        return Ok(acc);
    }
    match base.prune(ZERO_PROBE_LEVELS).as_diagonal() {
        Some(d) => {
            if d.is_const_zero() && r < Rational64::zero() {
                return Err(Error::DivisionByZero);
            }
            Ok(NormalForm::diagonal(DiagonalFunction::pow(d, r)))
        }
        None => Err(Error::Unsupported(format!(
            "power {r} of an operator that is not a function of N"
        ))),
    }
}

/// Outcome of comparing two normal forms level by level.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct NfComparison {
    /// `(j, k, n)` triples where both sides are defined and differ.
    pub mismatches: Vec<(usize, usize, i64)>,
    /// `(j, k, n)` triples skipped because a side is undefined there.
    pub skipped: Vec<(usize, usize, i64)>,
}

impl NfComparison {
    pub fn is_equal(&self) -> bool {
        self.mismatches.is_empty()
    }
}

pub fn nf_compare(x: &NormalForm, y: &NormalForm, levels: i64) -> NfComparison {
    let zero = DiagonalFunction::zero();
    let mut keys: Vec<(usize, usize)> = x.terms.keys().chain(y.terms.keys()).copied().collect();
    keys.sort();
    keys.dedup();
    let mut out = NfComparison::default();
    for (j, k) in keys {
        let f = x.terms.get(&(j, k)).unwrap_or(&zero);
        let g = y.terms.get(&(j, k)).unwrap_or(&zero);
        for n in 0..=levels {
            match (f.eval(n), g.eval(n)) {
                (Ok(a), Ok(b)) => {
                    if a != b {
                        out.mismatches.push((j, k, n));
                    }
                }
                _ => out.skipped.push((j, k, n)),
            }
        }
    }
    out
}

/// True iff every diagonal agrees exactly at every level `0..=levels` where
/// both sides are defined.
pub fn nf_equal(x: &NormalForm, y: &NormalForm, levels: i64) -> bool {
    nf_compare(x, y, levels).is_equal()
}

impl fmt::Display for NormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::expr::print_canonical(&self.to_expr()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;
    use crate::qnum::BasicKind;

    fn nf(text: &str, fam: &AlgebraFamily) -> NormalForm {
        normal_order(&parse(text).unwrap(), fam).unwrap()
    }

    #[test]
    fn q_boson_examples() {
        let fam = AlgebraFamily::q_boson();
        let boson = |k| DiagonalFunction::basic(BasicKind::Boson, k);
        assert!(nf_equal(&nf("a*ad", &fam), &NormalForm::diagonal(boson(1)), 20));
        assert_eq!(nf("a*ad", &fam), NormalForm::diagonal(boson(1)));
        let sq = NormalForm::diagonal(DiagonalFunction::pow(boson(0), Rational64::from_integer(2)));
        assert!(nf_equal(&nf("ad*a*ad*a", &fam), &sq, 20));
        assert!(nf_equal(&nf("a*a*ad", &fam), &NormalForm::term(0, 1, boson(2)), 20));
    }

    #[test]
    fn q_fermion_relation() {
        let fam = AlgebraFamily::q_fermion();
        let want = NormalForm::diagonal(DiagonalFunction::q_pow(Rational64::from_integer(-1), Rational64::zero()));
        let got = nf("b*bd + q*bd*b", &fam);
        assert!(nf_equal(&got, &want, 20));
        assert_eq!(got.len(), 1);
    }

    #[test]
    fn rearranged_anticommutator() {
        let fam = AlgebraFamily::q_fermion();
        let got = nf("{b, bd}", &fam);
        let want = nf("q^-N + (1 - q)*[N]F", &fam);
        assert!(nf_equal(&got, &want, 20));
    }

    #[test]
    fn boson_vs_fermion_basic_differ() {
        let fam = AlgebraFamily::q_boson();
        assert!(nf_equal(&nf("[N]", &fam), &nf("[N]", &fam), 5));
        assert!(!nf_equal(&nf("[N]", &fam), &nf("[N]F", &fam), 2));
    }

    #[test]
    fn self_commutator_is_empty() {
        let fam = AlgebraFamily::q_fermion();
        for text in ["[a, a]", "[ad, ad]", "[[N+1]F^(1/2)*a, [N+1]F^(1/2)*a]", "[a*ad + q^N*a, a*ad + q^N*a]"] {
            assert!(nf(text, &fam).is_empty(), "{text}");
        }
    }

    #[test]
    fn idempotent_on_canonical_forms() {
        let fam = AlgebraFamily::q_boson();
        for text in ["a*a*ad*ad + ad*[N]*a", "ad*ad*a + q*a*a*ad", "{a, ad}*q^N/2"] {
            let once = nf(text, &fam);
            let twice = normal_order(&once.to_expr(), &fam).unwrap();
            assert_eq!(once, twice, "{text}");
        }
    }

    #[test]
    fn mixed_ladders_rejected() {
        let fam = AlgebraFamily::q_boson();
        assert_eq!(normal_order(&parse("a*bd").unwrap(), &fam), Err(Error::MixedLadders));
    }

    #[test]
    fn standard_fermion_square_vanishes() {
        let fam = AlgebraFamily::standard_fermion();
        assert!(nf("b*b", &fam).is_empty());
        assert!(nf("bd*bd", &fam).is_empty());
        assert!(nf_equal(&nf("{b, bd}", &fam), &NormalForm::identity(), 10));
    }

    #[test]
    fn non_diagonal_fractional_power_rejected() {
        let fam = AlgebraFamily::q_boson();
        assert!(matches!(
            normal_order(&parse("sqrt(a)").unwrap(), &fam),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn rendering() {
        let f = NormalForm::term(1, 1, DiagonalFunction::basic(BasicKind::Boson, 1));
        assert_eq!(f.to_string(), "ad*[N+1]*a");
    }
}
