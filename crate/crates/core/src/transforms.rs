//! Diagonal-weight transformations `A = f(N)^e·a`, `A† = a†·f(N)^e`, their
//! target relations, and a recurrence solver for the weight.

use std::fmt;

use num_rational::Rational64;

use crate::error::{Error, Result};
use crate::expr::OperatorExpr;
use crate::fock::{Backend, FockRep, ResidualTable};
use crate::opalg::{normal_order, AlgebraFamily, DiagonalFunction, NormalForm};
use crate::qnum::BasicKind;
use crate::scalar::ScalarValue;

/// `A·A† − λ·A†·A = g(N)`; `λ = −1` is an anticommutator.
#[derive(Clone, Debug, PartialEq)]
pub struct TargetRelation {
    pub lambda: ScalarValue,
    pub g: DiagonalFunction,
}

impl TargetRelation {
    pub fn new(lambda: ScalarValue, g: DiagonalFunction) -> Self {
        Self { lambda, g }
    }

    /// `AA† − A†A = 1`
    pub fn boson() -> Self {
        Self::new(ScalarValue::one(), DiagonalFunction::one())
    }

    /// `AA† + A†A = 1`
    pub fn fermion() -> Self {
        Self::new(ScalarValue::from_int(-1), DiagonalFunction::one())
    }

    /// The relation a family's own ladder operators satisfy.
    pub fn of_family(family: &AlgebraFamily) -> Self {
        Self::new(family.lambda.clone(), family.relation_rhs.clone())
    }

    /// `(lhs, rhs)` expressions for operators `lower`, `raise`.
    pub fn expressions(&self, lower: &OperatorExpr, raise: &OperatorExpr) -> (OperatorExpr, OperatorExpr) {
        let lhs = OperatorExpr::diff(
            OperatorExpr::product(lower.clone(), raise.clone()),
            OperatorExpr::product_of([
                OperatorExpr::diag(DiagonalFunction::constant(self.lambda.clone())),
                raise.clone(),
                lower.clone(),
            ]),
        );
        (lhs, OperatorExpr::diag(self.g.clone()))
    }
}

impl fmt::Display for TargetRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "A*Ad - ({})*Ad*A = {}", self.lambda, self.g)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Transform {
    pub name: String,
    /// The squared weight `f`.
    pub weight: DiagonalFunction,
    /// Power of `f` carried by each ladder operator; `1/2` except for the
    /// uncorrected transmutation.
    pub exponent: Rational64,
    pub family: AlgebraFamily,
    pub target: TargetRelation,
}

pub const CATALOGUE: [&str; 5] = [
    "q2_scaling",
    "boson_undeform",
    "fermion_undeform",
    "transmutation",
    "transmutation_as_printed",
];

impl Transform {
    pub fn new(
        name: &str,
        weight: DiagonalFunction,
        family: AlgebraFamily,
        target: TargetRelation,
    ) -> Self {
        Self {
            name: name.to_string(),
            weight,
            exponent: Rational64::new(1, 2),
            family,
            target,
        }
    }

    pub fn named(name: &str) -> Result<Self> {
        use DiagonalFunction as D;
        let n1 = D::n().shift(1);
        let q_boson = AlgebraFamily::q_boson;
        let q_fermion = AlgebraFamily::q_fermion;
        Ok(match name {
            "q2_scaling" => Self::new(
                name,
                D::q_pow_n(),
                q_boson(),
                TargetRelation::new(ScalarValue::q_pow(2), D::one()),
            ),
            "boson_undeform" => Self::new(
                name,
                D::div(n1, D::basic(BasicKind::Boson, 1)),
                q_boson(),
                TargetRelation::boson(),
            ),
            "fermion_undeform" => Self::new(
                name,
                D::div(D::one(), D::mul(D::int(2), D::basic(BasicKind::Fermion, 1))),
                q_fermion(),
                TargetRelation::fermion(),
            ),
            "transmutation" => Self::new(
                name,
                D::div(n1, D::basic(BasicKind::Fermion, 1)),
                q_fermion(),
                TargetRelation::boson(),
            ),
            "transmutation_as_printed" => Self {
                exponent: Rational64::from_integer(1),
                ..Self::named("transmutation")?
            }
            .renamed(name),
            _ => {
                return Err(Error::Config(format!(
                    "unknown transform `{name}` (expected one of {})",
                    CATALOGUE.join(", ")
                )))
            }
        })
    }

    pub fn catalogue() -> Vec<Self> {
        CATALOGUE.iter().map(|n| Self::named(n).expect("catalogue name")).collect()
    }

    /// A transform whose weight is a table produced by [`solve_structure_function`].
    pub fn from_table(name: &str, family: AlgebraFamily, values: Vec<ScalarValue>, target: TargetRelation) -> Self {
        Self::new(name, DiagonalFunction::table(values), family, target)
    }

    fn renamed(mut self, name: &str) -> Self {
        self.name = name.to_string();
        self
    }

    fn carried_weight(&self) -> DiagonalFunction {
        DiagonalFunction::pow(self.weight.clone(), self.exponent)
    }

    /// `f(N)^e·a`
    pub fn lowered(&self) -> OperatorExpr {
        OperatorExpr::product(OperatorExpr::diag(self.carried_weight()), OperatorExpr::a())
    }

    /// `a†·f(N)^e`
    pub fn raised(&self) -> OperatorExpr {
        OperatorExpr::product(OperatorExpr::ad(), OperatorExpr::diag(self.carried_weight()))
    }

    /// Normal forms of `A†A` and `AA†`.
    pub fn apply(&self) -> Result<(NormalForm, NormalForm)> {
        let (a, ad) = (self.lowered(), self.raised());
        Ok((
            normal_order(&OperatorExpr::product(ad.clone(), a.clone()), &self.family)?,
            normal_order(&OperatorExpr::product(a, ad), &self.family)?,
        ))
    }

    /// Exact per-level values of `AA† − λA†A` for levels `0..=levels`.
    pub fn relation_values(&self, rel: &TargetRelation, levels: usize) -> Result<Vec<ScalarValue>> {
        let (lower, raise) = self.apply()?;
        let (lower, raise) = (diagonal_part(&lower)?, diagonal_part(&raise)?);
        (0..=levels as i64)
            .map(|n| Ok(&raise.eval(n)? - &(&rel.lambda * &lower.eval(n)?)))
            .collect()
    }

    /// Exact per-level defect `AA† − λA†A − g` for levels `0..=levels`.
    pub fn relation_defects(&self, rel: &TargetRelation, levels: usize) -> Result<Vec<ScalarValue>> {
        self.relation_values(rel, levels)?
            .into_iter()
            .enumerate()
            .map(|(n, v)| Ok(&v - &rel.g.eval(n as i64)?))
            .collect()
    }

    /// Residual table of the relation on the truncated Fock space.
    pub fn check_relation(&self, rel: &TargetRelation, q: f64, dim: usize, backend: Backend) -> Result<ResidualTable> {
        let rep = FockRep::new(&self.family, q, dim, backend)?;
        let (lhs, rhs) = rel.expressions(&self.lowered(), &self.raised());
        rep.residual(&lhs, &rhs)
    }

    /// `(n, ‖A²|n⟩‖)` for `n = 2..=D`.
    pub fn pauli_check(&self, q: f64, dim: usize, backend: Backend) -> Result<Vec<(usize, f64)>> {
        if dim < 2 {
            return Err(Error::Config(format!("Pauli check needs dimension at least 2, got {dim}")));
        }
        let rep = FockRep::new(&self.family, q, dim, backend)?;
        let sq = rep.eval_expr(&OperatorExpr::product(self.lowered(), self.lowered()))?;
        Ok((2..=rep.dim())
            .map(|n| (n, sq.column_norm(n).unwrap_or(f64::NAN)))
            .collect())
    }
}

fn diagonal_part(nf: &NormalForm) -> Result<DiagonalFunction> {
    nf.as_diagonal()
        .ok_or_else(|| Error::Unsupported(format!("expected a diagonal normal form, got {nf}")))
}

/// Tabulates the weight `f` with `Φ₊(n) f(n) − λ Φ₋(n) f(n−1) = g(n)` on
/// levels `0..=levels`, exactly in `q`. `Φ₋(0) = 0` fixes `f(0)`.
pub fn solve_structure_function(
    family: &AlgebraFamily,
    rel: &TargetRelation,
    levels: usize,
) -> Result<Vec<ScalarValue>> {
    let mut out: Vec<ScalarValue> = Vec::with_capacity(levels + 1);
    for n in 0..=levels as i64 {
        let up = family.upper_spectrum.eval(n)?;
        if up.is_zero() {
            return Err(Error::Singular {
                level: n,
                what: family.upper_spectrum.to_string(),
            });
        }
        let mut rhs = rel.g.eval(n)?;
        if let Some(prev) = out.last() {
            rhs = &rhs + &(&(&rel.lambda * prev) * &family.lower_spectrum.eval(n)?);
        }
        out.push(&rhs * &up.inv()?);
    }
    Ok(out)
}
