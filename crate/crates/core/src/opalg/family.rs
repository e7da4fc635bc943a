use std::fmt;
use std::str::FromStr;

use num_rational::Rational64;

use super::DiagonalFunction;
use crate::error::Error;
use crate::qnum::BasicKind;
use crate::scalar::ScalarValue;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FamilyKind {
    StandardBoson,
    StandardFermion,
    QBoson,
    QFermion,
}

impl FamilyKind {
    pub const ALL: [FamilyKind; 4] = [
        FamilyKind::StandardBoson,
        FamilyKind::StandardFermion,
        FamilyKind::QBoson,
        FamilyKind::QFermion,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FamilyKind::StandardBoson => "boson",
            FamilyKind::StandardFermion => "fermion",
            FamilyKind::QBoson => "qboson",
            FamilyKind::QFermion => "qfermion",
        }
    }
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FamilyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let key: String = s
            .chars()
            .filter(|c| !matches!(c, '-' | '_' | ' '))
            .collect::<String>()
            .to_ascii_lowercase();
        match key.as_str() {
            "boson" | "standardboson" => Ok(FamilyKind::StandardBoson),
            "fermion" | "standardfermion" => Ok(FamilyKind::StandardFermion),
            "qboson" => Ok(FamilyKind::QBoson),
            "qfermion" => Ok(FamilyKind::QFermion),
            _ => Err(Error::Config(format!(
                "unknown family `{s}` (expected boson, fermion, qboson or qfermion)"
            ))),
        }
    }
}

/// A single-mode oscillator algebra, characterised by its structure
/// functions: `a†a = Φ₋(N)`, `aa† = Φ₊(N) = Φ₋(N+1)`, and the defining
/// relation `aa† − λ·a†a = g(N)`.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraFamily {
    pub kind: FamilyKind,
    pub lower_spectrum: DiagonalFunction,
    pub upper_spectrum: DiagonalFunction,
    pub lambda: ScalarValue,
    pub relation_rhs: DiagonalFunction,
    /// Highest occupied level, if the algebra itself truncates the space.
    pub max_level: Option<usize>,
}

impl AlgebraFamily {
    pub fn new(kind: FamilyKind) -> Self {
        let (lower, lambda, g, max_level) = match kind {
            FamilyKind::StandardBoson => (DiagonalFunction::n(), ScalarValue::one(), DiagonalFunction::one(), None),
            FamilyKind::StandardFermion => (
                // (1 - (-1)^N) / 2: the occupation 0/1 continued periodically
                DiagonalFunction::mul(
                    DiagonalFunction::constant(ScalarValue::from_ratio(1, 2)),
                    DiagonalFunction::sub(DiagonalFunction::one(), DiagonalFunction::sign()),
                ),
                ScalarValue::from_int(-1),
                DiagonalFunction::one(),
                Some(1),
            ),
            FamilyKind::QBoson => (
                DiagonalFunction::basic(BasicKind::Boson, 0),
                ScalarValue::q(),
                DiagonalFunction::q_pow(Rational64::from_integer(-1), Rational64::from_integer(0)),
                None,
            ),
            FamilyKind::QFermion => (
                DiagonalFunction::basic(BasicKind::Fermion, 0),
                -&ScalarValue::q(),
                DiagonalFunction::q_pow(Rational64::from_integer(-1), Rational64::from_integer(0)),
                None,
            ),
        };
        Self {
            kind,
            upper_spectrum: lower.shift(1),
            lower_spectrum: lower,
            lambda,
            relation_rhs: g,
            max_level,
        }
    }

    pub fn standard_boson() -> Self {
        Self::new(FamilyKind::StandardBoson)
    }

    pub fn standard_fermion() -> Self {
        Self::new(FamilyKind::StandardFermion)
    }

    pub fn q_boson() -> Self {
        Self::new(FamilyKind::QBoson)
    }

    pub fn q_fermion() -> Self {
        Self::new(FamilyKind::QFermion)
    }

    pub fn name(&self) -> &'static str {
        self.kind.name()
    }

    pub fn is_fermionic(&self) -> bool {
        matches!(self.kind, FamilyKind::StandardFermion | FamilyKind::QFermion)
    }

    pub fn is_deformed(&self) -> bool {
        matches!(self.kind, FamilyKind::QBoson | FamilyKind::QFermion)
    }
}
