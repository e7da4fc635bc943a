use num_complex::Complex64;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::opalg::DiagonalFunction;
use crate::scalar::ScalarValue;

/// A deformation parameter known both as a float and as the exact decimal
/// rational it was written as.
#[derive(Clone, Debug, PartialEq)]
pub struct QPoint {
    pub value: f64,
    pub exact: BigRational,
}

impl QPoint {
    pub fn new(q: f64) -> Result<Self> {
        if !(q > 0.0) || !q.is_finite() {
            return Err(Error::Domain(format!("q must be positive and finite, got {q}")));
        }
        Ok(Self {
            value: q,
            exact: decimal_to_rational(&q.to_string()),
        })
    }
}

// f64 Display never uses exponent notation, so a plain decimal parse suffices.
fn decimal_to_rational(s: &str) -> BigRational {
    let (int, frac) = s.split_once('.').unwrap_or((s, ""));
    let digits: num_bigint::BigInt = format!("{int}{frac}").parse().expect("decimal digits");
    let den = num_traits::pow(num_bigint::BigInt::from(10), frac.len());
    BigRational::new(digits, den)
}

/// Scalar type a Fock matrix can hold.
pub trait Entry: Clone + std::fmt::Debug + PartialEq + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn pow_ratio(&self, p: i64, d: i64) -> Result<Self>;
    fn to_complex(&self) -> Complex64;
    /// Value of `f` at level `n`; `None` where `f` is singular.
    fn diag_value(f: &DiagonalFunction, n: i64, q: &QPoint) -> Result<Option<Self>>;
    fn from_scalar(s: &ScalarValue, q: &QPoint) -> Result<Self>;

    fn magnitude(&self) -> f64 {
        self.to_complex().norm()
    }
}

fn singular_to_none<T>(r: Result<T>) -> Result<Option<T>> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(Error::Singular { .. } | Error::Pole { .. } | Error::DivisionByZero) => Ok(None),
        Err(e) => Err(e),
    }
}

impl Entry for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }

    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }

    fn is_zero(&self) -> bool {
        *self == Complex64::new(0.0, 0.0)
    }

    fn add(&self, other: &Self) -> Self {
        self + other
    }

    fn mul(&self, other: &Self) -> Self {
        self * other
    }

    fn neg(&self) -> Self {
        -self
    }

    fn pow_ratio(&self, p: i64, d: i64) -> Result<Self> {
        if Entry::is_zero(self) && p < 0 {
            return Err(Error::DivisionByZero);
        }
        let root = match d {
            1 => *self,
            2 => self.sqrt(),
            _ => return Err(Error::Unsupported(format!("exponent {p}/{d}"))),
        };
        Ok(root.powi(p as i32))
    }

    fn to_complex(&self) -> Complex64 {
        *self
    }

    fn diag_value(f: &DiagonalFunction, n: i64, q: &QPoint) -> Result<Option<Self>> {
        Ok(singular_to_none(f.eval_numeric(n, q.value))?.filter(|v| v.is_finite()))
    }

    fn from_scalar(s: &ScalarValue, q: &QPoint) -> Result<Self> {
        s.eval(q.value)
    }
}

/// Exact entries: the scalar evaluated at the rational `q`, so only square
/// roots of integers remain.
impl Entry for ScalarValue {
    fn zero() -> Self {
        ScalarValue::zero()
    }

    fn one() -> Self {
        ScalarValue::one()
    }

    fn is_zero(&self) -> bool {
        ScalarValue::is_zero(self)
    }

    fn add(&self, other: &Self) -> Self {
        self + other
    }

    fn mul(&self, other: &Self) -> Self {
        self * other
    }

    fn neg(&self) -> Self {
        -self
    }

    fn pow_ratio(&self, p: i64, d: i64) -> Result<Self> {
        ScalarValue::pow_ratio(self, p, d)
    }

    fn to_complex(&self) -> Complex64 {
        self.eval(1.0).unwrap_or(Complex64::new(f64::NAN, f64::NAN))
    }

    fn diag_value(f: &DiagonalFunction, n: i64, q: &QPoint) -> Result<Option<Self>> {
        match singular_to_none(f.eval(n))? {
            Some(v) => singular_to_none(v.at_q(&q.exact)),
            None => Ok(None),
        }
    }

    fn from_scalar(s: &ScalarValue, q: &QPoint) -> Result<Self> {
        s.at_q(&q.exact)
    }
}

/// Dense square matrix over levels `0..=D`. `None` marks an entry that
/// depends on a singular diagonal value.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<T> {
    size: usize,
    cells: Vec<Option<T>>,
}

impl<T: Entry> Matrix<T> {
    pub fn zeros(size: usize) -> Self {
        Self {
            size,
            cells: vec![Some(T::zero()); size * size],
        }
    }

    pub fn diagonal(values: Vec<Option<T>>) -> Self {
        let mut m = Self::zeros(values.len());
        for (i, v) in values.into_iter().enumerate() {
            m.cells[i * m.size + i] = v;
        }
        m
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// Entry in row `i`, column `j`; `None` if singular.
    pub fn get(&self, i: usize, j: usize) -> Option<&T> {
        self.cells[i * self.size + j].as_ref()
    }

    pub(crate) fn set(&mut self, i: usize, j: usize, v: Option<T>) {
        self.cells[i * self.size + j] = v;
    }

    fn zip(&self, other: &Self, f: impl Fn(&T, &T) -> T) -> Self {
        let cells = self
            .cells
            .iter()
            .zip(&other.cells)
            .map(|(a, b)| match (a, b) {
                (Some(a), Some(b)) => Some(f(a, b)),
                _ => None,
            })
            .collect();
        Self { size: self.size, cells }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a.add(b))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a.add(&b.neg()))
    }

    pub fn neg(&self) -> Self {
        let cells = self.cells.iter().map(|c| c.as_ref().map(T::neg)).collect();
        Self { size: self.size, cells }
    }

    pub fn scale(&self, s: &T) -> Self {
        let cells = self.cells.iter().map(|c| c.as_ref().map(|x| s.mul(x))).collect();
        Self { size: self.size, cells }
    }

    /// Matrix product. Exact zeros are skipped, so a singular entry only
    /// spreads where it meets a nonzero partner.
    pub fn matmul(&self, other: &Self) -> Self {
        let n = self.size;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = &self.cells[i * n + k];
                if matches!(a, Some(x) if x.is_zero()) {
                    continue;
                }
                for j in 0..n {
                    let b = &other.cells[k * n + j];
                    if matches!(b, Some(y) if y.is_zero()) {
                        continue;
                    }
                    let slot = &mut out.cells[i * n + j];
                    *slot = match (slot.take(), a, b) {
                        (Some(acc), Some(x), Some(y)) => Some(acc.add(&x.mul(y))),
                        _ => None,
                    };
                }
            }
        }
        out
    }

    /// Diagonal matrices only: entrywise power.
    pub fn diag_pow(&self, p: i64, d: i64) -> Result<Option<Self>> {
        if !self.is_diagonal() {
            return Ok(None);
        }
        let mut values = Vec::with_capacity(self.size);
        for i in 0..self.size {
            values.push(match self.get(i, i) {
                Some(v) => match v.pow_ratio(p, d) {
                    Ok(x) => Some(x),
                    Err(Error::DivisionByZero) => None,
                    Err(e) => return Err(e),
                },
                None => None,
            });
        }
        Ok(Some(Self::diagonal(values)))
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.size).all(|i| {
            (0..self.size).all(|j| i == j || matches!(self.get(i, j), Some(v) if v.is_zero()))
        })
    }

    pub fn transpose(&self) -> Self {
        let n = self.size;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.cells[j * n + i] = self.cells[i * n + j].clone();
            }
        }
        out
    }

    pub fn to_complex(&self) -> Matrix<Complex64> {
        Matrix {
            size: self.size,
            cells: self.cells.iter().map(|c| c.as_ref().map(T::to_complex)).collect(),
        }
    }

    /// `max_i |m_ij|` over column `j`; `None` if the column has a singular entry.
    pub fn column_max(&self, j: usize) -> Option<f64> {
        (0..self.size).try_fold(0.0f64, |acc, i| self.get(i, j).map(|v| acc.max(v.magnitude())))
    }

    /// Euclidean norm of column `j`, i.e. `‖M|j⟩‖`.
    pub fn column_norm(&self, j: usize) -> Option<f64> {
        (0..self.size)
            .try_fold(0.0f64, |acc, i| self.get(i, j).map(|v| acc + v.magnitude().powi(2)))
            .map(f64::sqrt)
    }
}
