use num_rational::{BigRational, Rational64};

use crate::opalg::DiagonalFunction;

/// Spelling of the ladder pair: `a`/`ad` or `b`/`bd`. Both denote the ladder
/// operators of whichever family the expression is evaluated in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Ladder {
    A,
    B,
}

impl Ladder {
    pub fn lower_name(self) -> &'static str {
        match self {
            Ladder::A => "a",
            Ladder::B => "b",
        }
    }

    pub fn raise_name(self) -> &'static str {
        match self {
            Ladder::A => "ad",
            Ladder::B => "bd",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum OperatorExpr {
    Lower(Ladder),
    Raise(Ladder),
    /// A function of the number operator.
    Diag(DiagonalFunction),
    /// Non-negative numeric literal.
    Number(BigRational),
    Sum(Box<OperatorExpr>, Box<OperatorExpr>),
    Diff(Box<OperatorExpr>, Box<OperatorExpr>),
    Neg(Box<OperatorExpr>),
    Product(Box<OperatorExpr>, Box<OperatorExpr>),
    Pow(Box<OperatorExpr>, Rational64),
    Commutator(Box<OperatorExpr>, Box<OperatorExpr>),
    Anticommutator(Box<OperatorExpr>, Box<OperatorExpr>),
    Sqrt(Box<OperatorExpr>),
    Adjoint(Box<OperatorExpr>),
}

use OperatorExpr as E;

impl OperatorExpr {
    pub fn a() -> Self {
        E::Lower(Ladder::A)
    }

    pub fn ad() -> Self {
        E::Raise(Ladder::A)
    }

    pub fn diag(f: DiagonalFunction) -> Self {
        E::Diag(f)
    }

    pub fn int(c: i64) -> Self {
        E::Number(BigRational::from_integer(c.into()))
    }

    pub fn sum(a: Self, b: Self) -> Self {
        E::Sum(Box::new(a), Box::new(b))
    }

    pub fn diff(a: Self, b: Self) -> Self {
        E::Diff(Box::new(a), Box::new(b))
    }

    pub fn neg(a: Self) -> Self {
        E::Neg(Box::new(a))
    }

    pub fn product(a: Self, b: Self) -> Self {
        E::Product(Box::new(a), Box::new(b))
    }

    /// Left-associated product of all factors; the identity for an empty list.
    pub fn product_of<I: IntoIterator<Item = Self>>(factors: I) -> Self {
        factors
            .into_iter()
            .reduce(Self::product)
            .unwrap_or_else(|| Self::int(1))
    }

    pub fn pow(a: Self, r: Rational64) -> Self {
        E::Pow(Box::new(a), r)
    }

    pub fn commutator(a: Self, b: Self) -> Self {
        E::Commutator(Box::new(a), Box::new(b))
    }

    pub fn anticommutator(a: Self, b: Self) -> Self {
        E::Anticommutator(Box::new(a), Box::new(b))
    }

    /// Hermitian adjoint for real `q > 0`: ladder operators swap, products
    /// reverse and functions of `N` are fixed. An involution on trees.
    pub fn adjoint(&self) -> Self {
        match self {
            E::Lower(l) => E::Raise(*l),
            E::Raise(l) => E::Lower(*l),
            E::Diag(_) | E::Number(_) => self.clone(),
            E::Sum(a, b) => Self::sum(a.adjoint(), b.adjoint()),
            E::Diff(a, b) => Self::diff(a.adjoint(), b.adjoint()),
            E::Neg(a) => Self::neg(a.adjoint()),
            E::Product(a, b) => Self::product(b.adjoint(), a.adjoint()),
            E::Pow(a, r) => Self::pow(a.adjoint(), *r),
            E::Commutator(a, b) => Self::commutator(b.adjoint(), a.adjoint()),
            E::Anticommutator(a, b) => Self::anticommutator(b.adjoint(), a.adjoint()),
            E::Sqrt(a) => E::Sqrt(Box::new(a.adjoint())),
            // (x†)† = x, so the adjoint of Adjoint(x) is Adjoint(x†).
            E::Adjoint(a) => E::Adjoint(Box::new(a.adjoint())),
        }
    }

    /// Ladder spellings used anywhere in the tree.
    pub fn ladders(&self) -> Vec<Ladder> {
        let mut out = Vec::new();
        self.collect_ladders(&mut out);
        out.sort();
        out.dedup();
        out
    }

    fn collect_ladders(&self, out: &mut Vec<Ladder>) {
        match self {
            E::Lower(l) | E::Raise(l) => out.push(*l),
            E::Diag(_) | E::Number(_) => {}
            E::Neg(a) | E::Pow(a, _) | E::Sqrt(a) | E::Adjoint(a) => a.collect_ladders(out),
            E::Sum(a, b)
            | E::Diff(a, b)
            | E::Product(a, b)
            | E::Commutator(a, b)
            | E::Anticommutator(a, b) => {
                a.collect_ladders(out);
                b.collect_ladders(out);
            }
        }
    }

    /// Upper bound on the number of raising operators applied along any
    /// operator word of the expression; sets how many top Fock levels a
    /// truncated representation can get wrong.
    pub fn raising_degree(&self) -> usize {
        self.degrees().0
    }

    /// (raising, lowering) degree bounds.
    fn degrees(&self) -> (usize, usize) {
        match self {
            E::Lower(_) => (0, 1),
            E::Raise(_) => (1, 0),
            E::Diag(_) | E::Number(_) => (0, 0),
            E::Neg(a) | E::Sqrt(a) => a.degrees(),
            E::Adjoint(a) => {
                let (r, l) = a.degrees();
                (l, r)
            }
            E::Pow(a, r) => {
                let (x, y) = a.degrees();
                let k = if r.is_integer() { r.numer().unsigned_abs() as usize } else { 1 };
                (x * k.max(1), y * k.max(1))
            }
            E::Sum(a, b) | E::Diff(a, b) => {
                let (x1, y1) = a.degrees();
                let (x2, y2) = b.degrees();
                (x1.max(x2), y1.max(y2))
            }
            E::Product(a, b) | E::Commutator(a, b) | E::Anticommutator(a, b) => {
                let (x1, y1) = a.degrees();
                let (x2, y2) = b.degrees();
                (x1 + x2, y1 + y2)
            }
        }
    }
}
