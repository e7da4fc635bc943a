use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Signed, Zero};

use super::ast::OperatorExpr;
use crate::opalg::DiagonalFunction;

// Binding strengths, loosest first.
const SUM: u8 = 0;
const PRODUCT: u8 = 1;
const UNARY: u8 = 2;
const POWER: u8 = 3;
const ATOM: u8 = 4;

/// Deterministic rendering that [`super::parse`] reads back to the same tree.
pub fn print_canonical(expr: &OperatorExpr) -> String {
    let mut out = String::new();
    write_expr(expr, SUM, &mut out);
    out
}

fn write_expr(expr: &OperatorExpr, min: u8, out: &mut String) {
    use OperatorExpr as E;
    let own = match expr {
        E::Sum(..) | E::Diff(..) => SUM,
        E::Product(..) => PRODUCT,
        E::Neg(_) => UNARY,
        E::Pow(..) => POWER,
        E::Diag(f) if !is_atomic_diag(f) => SUM,
        _ => ATOM,
    };
    let paren = own < min;
    if paren {
        out.push('(');
    }
    match expr {
        E::Lower(l) => out.push_str(l.lower_name()),
        E::Raise(l) => out.push_str(l.raise_name()),
        E::Diag(f) => out.push_str(&f.to_string()),
        E::Number(r) => out.push_str(&fmt_decimal(r)),
        E::Sum(a, b) => {
            write_expr(a, SUM, out);
            out.push_str(" + ");
            write_expr(b, PRODUCT, out);
        }
        E::Diff(a, b) => {
            write_expr(a, SUM, out);
            out.push_str(" - ");
            write_expr(b, PRODUCT, out);
        }
        E::Neg(a) => {
            out.push('-');
            write_expr(a, UNARY, out);
        }
        E::Product(a, b) => {
            write_expr(a, PRODUCT, out);
            out.push('*');
            write_expr(b, UNARY, out);
        }
        E::Pow(a, r) => {
            // a bare `q` would absorb the exponent into the atom
            if matches!(&**a, E::Diag(f) if f.to_string() == "q") {
                write_expr(a, ATOM + 1, out);
            } else {
                write_expr(a, POWER, out);
            }
            out.push('^');
            out.push_str(&fmt_exponent(*r));
        }
        E::Commutator(a, b) => {
            out.push('[');
            write_expr(a, SUM, out);
            out.push_str(", ");
            write_expr(b, SUM, out);
            out.push(']');
        }
        E::Anticommutator(a, b) => {
            out.push('{');
            write_expr(a, SUM, out);
            out.push_str(", ");
            write_expr(b, SUM, out);
            out.push('}');
        }
        E::Sqrt(a) => {
            out.push_str("sqrt(");
            write_expr(a, SUM, out);
            out.push(')');
        }
        E::Adjoint(a) => {
            out.push_str("adj(");
            write_expr(a, SUM, out);
            out.push(')');
        }
    }
    if paren {
        out.push(')');
    }
}

fn is_atomic_diag(f: &DiagonalFunction) -> bool {
    use DiagonalFunction as D;
    match f {
        D::Num { shift } => *shift == 0,
        D::QPow { .. } | D::Sign { .. } | D::Basic { .. } | D::Table { .. } => true,
        _ => false,
    }
}

fn fmt_exponent(r: Rational64) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("({}/{})", r.numer(), r.denom())
    }
}

fn fmt_ratio(r: Rational64) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Renders `q^(c·N + d)` in the shortest form the grammar accepts.
pub fn fmt_q_atom(c: Rational64, d: Rational64) -> String {
    let half = Rational64::new(1, 2);
    if c.is_zero() {
        if d.is_one() {
            return "q".to_string();
        }
        if d.is_integer() {
            return format!("q^{}", d.numer());
        }
        return format!("q^({})", fmt_ratio(d));
    }
    if d.is_zero() {
        if c.is_one() {
            return "q^N".to_string();
        }
        if c == -Rational64::one() {
            return "q^-N".to_string();
        }
        if c == half {
            return "q^N/2".to_string();
        }
        if c == -half {
            return "q^-N/2".to_string();
        }
    }
    let mut s = String::from("q^(");
    if c.is_one() {
        s.push('N');
    } else if c == -Rational64::one() {
        s.push_str("-N");
    } else {
        s.push_str(&format!("{}*N", fmt_ratio(c)));
    }
    if !d.is_zero() {
        if d > Rational64::zero() {
            s.push('+');
        }
        s.push_str(&fmt_ratio(d));
    }
    s.push(')');
    s
}

/// Exact decimal rendering of a non-negative literal; falls back to a
/// parenthesised quotient when the expansion does not terminate.
fn fmt_decimal(r: &BigRational) -> String {
    if r.is_integer() {
        return r.numer().to_string();
    }
    let mut den = r.denom().clone();
    let mut digits = 0usize;
    let two = BigInt::from(2);
    let five = BigInt::from(5);
    let mut twos = 0usize;
    let mut fives = 0usize;
    while den.is_even() {
        den /= &two;
        twos += 1;
    }
    while (&den % &five).is_zero() {
        den /= &five;
        fives += 1;
    }
    if !den.is_one() {
        return format!("({}/{})", r.numer(), r.denom());
    }
    digits += twos.max(fives);
    let scaled = r * BigRational::from_integer(num_traits::pow(BigInt::from(10), digits));
    let n = scaled.to_integer();
    let neg = n.is_negative();
    let s = n.abs().to_string();
    let s = format!("{:0>width$}", s, width = digits + 1);
    let (int, frac) = s.split_at(s.len() - digits);
    format!("{}{int}.{frac}", if neg { "-" } else { "" })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;

    #[test]
    fn renders_fixed_forms() {
        assert_eq!(print_canonical(&OperatorExpr::product(OperatorExpr::a(), OperatorExpr::ad())), "a*ad");
        for text in ["a*ad - q*ad*a", "q^-1 - q", "{b, bd}", "[N+1]F^(1/2)*b", "-a*-ad", "(a + ad)^2", "(q)^0", "q^2^3"] {
            let e = parse(text).unwrap();
            assert_eq!(print_canonical(&e), text);
        }
    }

    #[test]
    fn decimal_literals() {
        assert_eq!(fmt_decimal(&BigRational::new(1.into(), 4.into())), "0.25");
        assert_eq!(fmt_decimal(&BigRational::new(5.into(), 2.into())), "2.5");
        assert_eq!(fmt_decimal(&BigRational::new(1.into(), 3.into())), "(1/3)");
    }

    #[test]
    fn q_atoms() {
        let r = Rational64::new;
        assert_eq!(fmt_q_atom(r(0, 1), r(1, 1)), "q");
        assert_eq!(fmt_q_atom(r(0, 1), r(-1, 1)), "q^-1");
        assert_eq!(fmt_q_atom(r(1, 2), r(0, 1)), "q^N/2");
        assert_eq!(fmt_q_atom(r(1, 1), r(-1, 1)), "q^(N-1)");
        assert_eq!(fmt_q_atom(r(2, 1), r(1, 2)), "q^(2*N+1/2)");
    }
}
