//! Truncated Fock-space representations on levels `0..=D`.
//!
//! Truncation sets `a†|D⟩ = 0`, so identities involving `aa†` fail at the
//! top levels by construction. Residual tables split levels into an
//! interior, where an identity can hold exactly, and a boundary.

mod matrix;
mod residual;

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::expr::OperatorExpr;
use crate::opalg::{AlgebraFamily, DiagonalFunction, NormalForm};
use crate::scalar::ScalarValue;

pub use matrix::{Entry, Matrix, QPoint};
pub use residual::{LevelResidual, ResidualTable};

pub const MAX_DIM: usize = 512;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Exact,
    Numeric,
}

impl Backend {
    pub fn name(self) -> &'static str {
        match self {
            Backend::Exact => "exact",
            Backend::Numeric => "numeric",
        }
    }
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Backend {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "exact" => Ok(Backend::Exact),
            "numeric" => Ok(Backend::Numeric),
            _ => Err(Error::Config(format!("unknown backend `{s}` (expected exact or numeric)"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum FockMatrix {
    Exact(Matrix<ScalarValue>),
    Numeric(Matrix<Complex64>),
}

impl FockMatrix {
    pub fn size(&self) -> usize {
        match self {
            FockMatrix::Exact(m) => m.size(),
            FockMatrix::Numeric(m) => m.size(),
        }
    }

    /// Entry as a complex number; `None` where singular.
    pub fn entry(&self, i: usize, j: usize) -> Option<Complex64> {
        match self {
            FockMatrix::Exact(m) => m.get(i, j).map(Entry::to_complex),
            FockMatrix::Numeric(m) => m.get(i, j).copied(),
        }
    }

    /// Exact entry, for matrices from the exact backend.
    pub fn exact_entry(&self, i: usize, j: usize) -> Option<&ScalarValue> {
        match self {
            FockMatrix::Exact(m) => m.get(i, j),
            FockMatrix::Numeric(_) => None,
        }
    }

    /// True if entry `(i, j)` is exactly zero (numeric: bitwise zero).
    pub fn is_zero_at(&self, i: usize, j: usize) -> bool {
        match self {
            FockMatrix::Exact(m) => m.get(i, j).is_some_and(|v| v.is_zero()),
            FockMatrix::Numeric(m) => m.get(i, j).is_some_and(Entry::is_zero),
        }
    }

    pub fn to_complex(&self) -> Matrix<Complex64> {
        match self {
            FockMatrix::Exact(m) => m.to_complex(),
            FockMatrix::Numeric(m) => m.clone(),
        }
    }

    pub fn column_norm(&self, j: usize) -> Option<f64> {
        match self {
            FockMatrix::Exact(m) => m.column_norm(j),
            FockMatrix::Numeric(m) => m.column_norm(j),
        }
    }

    /// First singular entry, reported by column (the level it acts on).
    pub fn first_singular(&self) -> Option<(usize, usize)> {
        let n = self.size();
        (0..n)
            .flat_map(|j| (0..n).map(move |i| (i, j)))
            .find(|&(i, j)| self.entry(i, j).is_none())
    }
}

#[derive(Clone, Debug)]
struct Ladders<T> {
    lower: Matrix<T>,
    raise: Matrix<T>,
}

#[derive(Clone, Debug)]
enum Inner {
    Exact(Ladders<ScalarValue>),
    Numeric(Ladders<Complex64>),
}

/// Matrix representation of one family at one `q`, truncated to levels
/// `0..=D`. Immutable once built.
#[derive(Clone, Debug)]
pub struct FockRep {
    family: AlgebraFamily,
    q: QPoint,
    dim: usize,
    backend: Backend,
    hermitian: bool,
    inner: Inner,
}

/// `(a†)ⁿ|0⟩`, normalised by `√(Φ₋(1)…Φ₋(n))` unless that product vanishes.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    pub amplitudes: Vec<Complex64>,
    pub zero_norm: bool,
}

fn ladders<T: Entry>(family: &AlgebraFamily, q: &QPoint, dim: usize) -> Result<Ladders<T>> {
    let size = dim + 1;
    let mut lower = Matrix::<T>::zeros(size);
    for n in 1..size {
        let phi = T::diag_value(&family.lower_spectrum, n as i64, q)?.ok_or_else(|| Error::Singular {
            level: n as i64,
            what: family.lower_spectrum.to_string(),
        })?;
        lower.set(n - 1, n, Some(phi.pow_ratio(1, 2)?));
    }
    let raise = lower.transpose();
    Ok(Ladders { lower, raise })
}

impl FockRep {
    /// Builds the representation on levels `0..=dim`. Families that are
    /// themselves truncated (the standard fermion) force `dim` to their top level.
    pub fn new(family: &AlgebraFamily, q: f64, dim: usize, backend: Backend) -> Result<Self> {
        let q = QPoint::new(q)?;
        if !(1..=MAX_DIM).contains(&dim) {
            return Err(Error::Config(format!("dimension must be in 1..={MAX_DIM}, got {dim}")));
        }
        let dim = family.max_level.unwrap_or(dim);
        let inner = match backend {
            Backend::Exact => Inner::Exact(ladders(family, &q, dim)?),
            Backend::Numeric => Inner::Numeric(ladders(family, &q, dim)?),
        };
        let lower = match &inner {
            Inner::Exact(l) => l.lower.to_complex(),
            Inner::Numeric(l) => l.lower.clone(),
        };
        let hermitian = (0..=dim).all(|i| {
            (0..=dim).all(|j| lower.get(i, j).is_some_and(|v| v.im == 0.0 && v.re >= 0.0))
        });
        Ok(Self {
            family: family.clone(),
            q,
            dim,
            backend,
            hermitian,
            inner,
        })
    }

    pub fn family(&self) -> &AlgebraFamily {
        &self.family
    }

    pub fn q(&self) -> f64 {
        self.q.value
    }

    /// Highest level `D`; matrices are `(D+1) × (D+1)`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn backend(&self) -> Backend {
        self.backend
    }

    /// False when some ladder entry is imaginary (a negative spectrum value).
    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    pub fn lowering(&self) -> FockMatrix {
        match &self.inner {
            Inner::Exact(l) => FockMatrix::Exact(l.lower.clone()),
            Inner::Numeric(l) => FockMatrix::Numeric(l.lower.clone()),
        }
    }

    pub fn raising(&self) -> FockMatrix {
        match &self.inner {
            Inner::Exact(l) => FockMatrix::Exact(l.raise.clone()),
            Inner::Numeric(l) => FockMatrix::Numeric(l.raise.clone()),
        }
    }

    /// Matrix of `expr`, keeping singular entries marked instead of failing.
    pub fn eval_masked(&self, expr: &OperatorExpr) -> Result<FockMatrix> {
        if expr.ladders().len() > 1 {
            return Err(Error::MixedLadders);
        }
        Ok(match &self.inner {
            Inner::Exact(l) => FockMatrix::Exact(eval_in(expr, l, &self.q, self.dim)?),
            Inner::Numeric(l) => FockMatrix::Numeric(eval_in(expr, l, &self.q, self.dim)?),
        })
    }

    /// Matrix of `expr`; fails if any entry depends on a singular diagonal value.
    pub fn eval_expr(&self, expr: &OperatorExpr) -> Result<FockMatrix> {
        let m = self.eval_masked(expr)?;
        if let Some((_, j)) = m.first_singular() {
            return Err(Error::Singular {
                level: j as i64,
                what: crate::expr::print_canonical(expr),
            });
        }
        Ok(m)
    }

    pub fn eval_normal(&self, nf: &NormalForm) -> Result<FockMatrix> {
        self.eval_expr(&nf.to_expr())
    }

    /// Per-level comparison of two expressions. Levels above
    /// `D − max(R, 1)`, with `R` the larger raising degree, form the boundary;
    /// an algebra that is itself truncated at `D` has no boundary.
    pub fn residual(&self, lhs: &OperatorExpr, rhs: &OperatorExpr) -> Result<ResidualTable> {
        let l = self.eval_masked(lhs)?;
        let r = self.eval_masked(rhs)?;
        let depth = lhs.raising_degree().max(rhs.raising_degree()).max(1);
        let last_interior = if self.family.max_level == Some(self.dim) {
            self.dim
        } else {
            self.dim.saturating_sub(depth)
        };
        let diff = match (&l, &r) {
            (FockMatrix::Exact(a), FockMatrix::Exact(b)) => a.sub(b).to_complex(),
            _ => l.to_complex().sub(&r.to_complex()),
        };
        Ok(ResidualTable::compare(&l.to_complex(), &r.to_complex(), &diff, last_interior))
    }

    /// `(a†)ⁿ|0⟩ / √(Φ₋(1)…Φ₋(n))`; the unnormalised vector with
    /// `zero_norm` set when the product vanishes.
    pub fn build_state(&self, n: usize) -> Result<StateVector> {
        if n > self.dim {
            return Err(Error::Config(format!("level {n} exceeds dimension {}", self.dim)));
        }
        match &self.inner {
            Inner::Exact(l) => state_in(l, &self.family.lower_spectrum, &self.q, n),
            Inner::Numeric(l) => state_in(l, &self.family.lower_spectrum, &self.q, n),
        }
    }
}

fn state_in<T: Entry>(l: &Ladders<T>, spectrum: &DiagonalFunction, q: &QPoint, n: usize) -> Result<StateVector> {
    let size = l.lower.size();
    let mut v: Vec<T> = (0..size).map(|i| if i == 0 { T::one() } else { T::zero() }).collect();
    let mut norm2 = T::one();
    for k in 1..=n {
        let mut next = vec![T::zero(); size];
        for (i, slot) in next.iter_mut().enumerate() {
            for (j, x) in v.iter().enumerate() {
                if let Some(m) = l.raise.get(i, j) {
                    if !m.is_zero() && !x.is_zero() {
                        *slot = slot.add(&m.mul(x));
                    }
                }
            }
        }
        v = next;
        let phi = T::diag_value(spectrum, k as i64, q)?.ok_or_else(|| Error::Singular {
            level: k as i64,
            what: spectrum.to_string(),
        })?;
        norm2 = norm2.mul(&phi);
    }
    if norm2.is_zero() {
        return Ok(StateVector {
            amplitudes: v.iter().map(Entry::to_complex).collect(),
            zero_norm: true,
        });
    }
    let inv = norm2.pow_ratio(-1, 2)?;
    Ok(StateVector {
        amplitudes: v.iter().map(|x| x.mul(&inv).to_complex()).collect(),
        zero_norm: false,
    })
}

fn eval_in<T: Entry>(expr: &OperatorExpr, l: &Ladders<T>, q: &QPoint, dim: usize) -> Result<Matrix<T>> {
    use OperatorExpr as E;
    let size = dim + 1;
    let rec = |e: &OperatorExpr| eval_in(e, l, q, dim);
    Ok(match expr {
        E::Lower(_) => l.lower.clone(),
        E::Raise(_) => l.raise.clone(),
        E::Diag(f) => {
            let mut values = Vec::with_capacity(size);
            for n in 0..size {
                values.push(T::diag_value(f, n as i64, q)?);
            }
            Matrix::diagonal(values)
        }
        E::Number(r) => {
            let c = T::from_scalar(&ScalarValue::from_rational(r.clone()), q)?;
            Matrix::diagonal(vec![Some(c); size])
        }
        E::Sum(a, b) => rec(a)?.add(&rec(b)?),
        E::Diff(a, b) => rec(a)?.sub(&rec(b)?),
        E::Neg(a) => rec(a)?.neg(),
        E::Product(a, b) => rec(a)?.matmul(&rec(b)?),
        E::Commutator(a, b) => {
            let (x, y) = (rec(a)?, rec(b)?);
            x.matmul(&y).sub(&y.matmul(&x))
        }
        E::Anticommutator(a, b) => {
            let (x, y) = (rec(a)?, rec(b)?);
            x.matmul(&y).add(&y.matmul(&x))
        }
        E::Pow(a, r) => {
            let m = rec(a)?;
            let (p, d) = (*r.numer(), *r.denom());
            if d == 1 && p >= 0 {
                let mut acc = Matrix::diagonal(vec![Some(T::one()); size]);
                for _ in 0..p {
                    acc = acc.matmul(&m);
                }
                acc
            } else {
                m.diag_pow(p, d)?.ok_or_else(|| {
                    Error::Unsupported(format!("power {r} of a non-diagonal operator"))
                })?
            }
        }
        E::Sqrt(a) => rec(a)?
            .diag_pow(1, 2)?
            .ok_or_else(|| Error::Unsupported("square root of a non-diagonal operator".into()))?,
        E::Adjoint(a) => rec(&a.adjoint())?,
    })
}
