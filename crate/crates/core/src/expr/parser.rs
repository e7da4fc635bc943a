//! Recursive-descent parser for operator expressions.
//!
//! ```text
//! expr     := term (('+' | '-') term)*
//! term     := unary (('*' | '/') unary)*
//! unary    := '-' unary | power
//! power    := atom ('^' ('-'? integer | '(' rational ')'))*
//! atom     := 'a' | 'ad' | 'b' | 'bd' | 'N' | 'q' ('^' qexp)? | '(-1)^' signexp
//!           | '[' 'N' (('+'|'-') integer)? ']' 'F'? | number | '(' expr ')'
//!           | '[' expr ',' expr ']' | '{' expr ',' expr '}'
//!           | 'sqrt' '(' expr ')' | 'adj' '(' expr ')'
//! qexp     := '-'? integer | '-'? 'N' ('/' integer)? | '(' linear ')'
//! signexp  := 'N' | '(' 'N' ('+'|'-') integer ')'
//! linear   := a signed sum of `rational`, `rational*N`, `N` and `N/integer`
//! ```
//!
//! A trailing `†` on a ladder symbol is read as `d`.

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Zero};

use super::ast::{Ladder, OperatorExpr};
use crate::error::{Error, Result};
use crate::opalg::DiagonalFunction;
use crate::qnum::BasicKind;

const MAX_DEPTH: usize = 128;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Num(String),
    Sym(char),
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Num(s) => format!("number `{s}`"),
            Tok::Sym(c) => format!("`{c}`"),
            Tok::Eof => "end of input".to_string(),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>> {
    let mut out = Vec::new();
    let mut chars = text.char_indices().peekable();
    while let Some(&(pos, c)) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
        } else if c.is_ascii_alphabetic() {
            let mut s = String::new();
            while let Some(&(_, c)) = chars.peek() {
                if c.is_ascii_alphabetic() {
                    s.push(c);
                    chars.next();
                } else if c == '†' {
                    s.push('d');
                    chars.next();
                } else {
                    break;
                }
            }
            out.push((pos, Tok::Ident(s)));
        } else if c.is_ascii_digit() {
            let mut s = String::new();
            let mut seen_dot = false;
            while let Some(&(_, c)) = chars.peek() {
                if c.is_ascii_digit() {
                    s.push(c);
                    chars.next();
                } else if c == '.' && !seen_dot {
                    seen_dot = true;
                    s.push(c);
                    chars.next();
                } else {
                    break;
                }
            }
            if s.ends_with('.') {
                return Err(Error::Syntax {
                    offset: pos + s.len(),
                    expected: vec!["digit".into()],
                    found: "end of number".into(),
                });
            }
            out.push((pos, Tok::Num(s)));
        } else if "+-*/^()[]{},".contains(c) {
            out.push((pos, Tok::Sym(c)));
            chars.next();
        } else {
            return Err(Error::Syntax {
                offset: pos,
                expected: vec!["operator, identifier or number".into()],
                found: format!("`{c}`"),
            });
        }
    }
    out.push((text.len(), Tok::Eof));
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    depth: usize,
}

/// Parses an operator expression.
pub fn parse(text: &str) -> Result<OperatorExpr> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
        depth: 0,
    };
    let e = p.expr()?;
    p.expect_eof()?;
    Ok(e)
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].1
    }

    fn peek_at(&self, k: usize) -> &Tok {
        let i = (self.pos + k).min(self.toks.len() - 1);
        &self.toks[i].1
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].1.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn is_sym(&self, c: char) -> bool {
        *self.peek() == Tok::Sym(c)
    }

    fn is_ident(&self, s: &str) -> bool {
        matches!(self.peek(), Tok::Ident(x) if x == s)
    }

    fn err<T>(&self, expected: &[&str]) -> Result<T> {
        Err(Error::Syntax {
            offset: self.offset(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: self.peek().describe(),
        })
    }

    fn expect_sym(&mut self, c: char) -> Result<()> {
        if self.is_sym(c) {
            self.bump();
            Ok(())
        } else {
            self.err(&[&format!("`{c}`")])
        }
    }

    fn expect_ident(&mut self, s: &str) -> Result<()> {
        if self.is_ident(s) {
            self.bump();
            Ok(())
        } else {
            self.err(&[&format!("`{s}`")])
        }
    }

    fn expect_eof(&mut self) -> Result<()> {
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            self.err(&["`+`", "`-`", "`*`", "`/`", "`^`", "end of input"])
        }
    }

    fn enter(&mut self) -> Result<()> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(Error::Syntax {
                offset: self.offset(),
                expected: vec![format!("at most {MAX_DEPTH} nested levels")],
                found: "deeper nesting".into(),
            });
        }
        Ok(())
    }

    fn expr(&mut self) -> Result<OperatorExpr> {
        self.enter()?;
        let mut lhs = self.term()?;
        loop {
            if self.is_sym('+') {
                self.bump();
                lhs = OperatorExpr::sum(lhs, self.term()?);
            } else if self.is_sym('-') {
                self.bump();
                lhs = OperatorExpr::diff(lhs, self.term()?);
            } else {
                break;
            }
        }
        self.depth -= 1;
        Ok(lhs)
    }

    fn term(&mut self) -> Result<OperatorExpr> {
        let mut lhs = self.unary()?;
        loop {
            if self.is_sym('*') {
                self.bump();
                lhs = OperatorExpr::product(lhs, self.unary()?);
            } else if self.is_sym('/') {
                self.bump();
                let rhs = self.unary()?;
                lhs = OperatorExpr::product(lhs, OperatorExpr::pow(rhs, Rational64::from_integer(-1)));
            } else {
                break;
            }
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<OperatorExpr> {
        if self.is_sym('-') {
            self.enter()?;
            self.bump();
            let inner = self.unary()?;
            self.depth -= 1;
            return Ok(OperatorExpr::neg(inner));
        }
        self.power()
    }

    fn power(&mut self) -> Result<OperatorExpr> {
        let mut base = self.atom()?;
        while self.is_sym('^') {
            self.bump();
            let r = if self.is_sym('(') {
                self.bump();
                let r = self.rational()?;
                self.expect_sym(')')?;
                r
            } else {
                Rational64::from_integer(self.signed_integer()?)
            };
            base = OperatorExpr::pow(base, r);
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<i64> {
        match self.peek().clone() {
            Tok::Num(s) if !s.contains('.') => match s.parse::<i64>() {
                Ok(v) if v <= i32::MAX as i64 => {
                    self.bump();
                    Ok(v)
                }
                _ => self.err(&["integer that fits in 32 bits"]),
            },
            _ => self.err(&["integer"]),
        }
    }

    fn signed_integer(&mut self) -> Result<i64> {
        if self.is_sym('-') {
            self.bump();
            Ok(-self.integer()?)
        } else {
            self.integer()
        }
    }

    fn rational(&mut self) -> Result<Rational64> {
        let n = self.signed_integer()?;
        if self.is_sym('/') {
            self.bump();
            let d = self.integer()?;
            if d == 0 {
                return self.err(&["non-zero denominator"]);
            }
            Ok(Rational64::new(n, d))
        } else {
            Ok(Rational64::from_integer(n))
        }
    }

    fn atom(&mut self) -> Result<OperatorExpr> {
        let offset = self.offset();
        match self.peek().clone() {
            Tok::Ident(name) => {
                self.bump();
                match name.as_str() {
                    "a" => Ok(OperatorExpr::Lower(Ladder::A)),
                    "ad" => Ok(OperatorExpr::Raise(Ladder::A)),
                    "b" => Ok(OperatorExpr::Lower(Ladder::B)),
                    "bd" => Ok(OperatorExpr::Raise(Ladder::B)),
                    "N" => Ok(OperatorExpr::diag(DiagonalFunction::n())),
                    "q" => self.q_atom(),
                    "sqrt" | "adj" => {
                        self.expect_sym('(')?;
                        let inner = self.expr()?;
                        self.expect_sym(')')?;
                        Ok(if name == "sqrt" {
                            OperatorExpr::Sqrt(Box::new(inner))
                        } else {
                            OperatorExpr::Adjoint(Box::new(inner))
                        })
                    }
                    _ => Err(Error::UnknownIdentifier { offset, name }),
                }
            }
            Tok::Num(s) => {
                self.bump();
                Ok(OperatorExpr::Number(parse_decimal(&s)))
            }
            Tok::Sym('(') => {
                if self.at_sign_atom() {
                    return self.sign_atom();
                }
                self.bump();
                let inner = self.expr()?;
                self.expect_sym(')')?;
                Ok(inner)
            }
            Tok::Sym('[') => {
                if let Some(shift) = self.basic_lookahead() {
                    // '[' 'N' (sign int)? ']'
                    let consumed = if shift.is_some() { 5 } else { 3 };
                    for _ in 0..consumed {
                        self.bump();
                    }
                    let kind = if self.is_ident("F") {
                        self.bump();
                        BasicKind::Fermion
                    } else {
                        BasicKind::Boson
                    };
                    return Ok(OperatorExpr::diag(DiagonalFunction::basic(kind, shift.unwrap_or(0))));
                }
                self.bump();
                let x = self.expr()?;
                self.expect_sym(',')?;
                let y = self.expr()?;
                self.expect_sym(']')?;
                Ok(OperatorExpr::commutator(x, y))
            }
            Tok::Sym('{') => {
                self.bump();
                let x = self.expr()?;
                self.expect_sym(',')?;
                let y = self.expr()?;
                self.expect_sym('}')?;
                Ok(OperatorExpr::anticommutator(x, y))
            }
            _ => self.err(&[
                "`a`", "`ad`", "`b`", "`bd`", "`N`", "`q`", "number", "`(`", "`[`", "`{`", "`sqrt`",
                "`adj`",
            ]),
        }
    }

    /// Recognises `[N]`, `[N+k]` and `[N-k]`; returns the shift wrapped so
    /// that `Some(None)` means no explicit shift.
    fn basic_lookahead(&self) -> Option<Option<i64>> {
        if *self.peek_at(1) != Tok::Ident("N".into()) {
            return None;
        }
        match self.peek_at(2) {
            Tok::Sym(']') => Some(None),
            Tok::Sym(c @ ('+' | '-')) => {
                let sign = if *c == '-' { -1 } else { 1 };
                match (self.peek_at(3), self.peek_at(4)) {
                    (Tok::Num(s), Tok::Sym(']')) if !s.contains('.') => {
                        s.parse::<i64>().ok().filter(|v| *v <= i32::MAX as i64).map(|v| Some(sign * v))
                    }
                    _ => None,
                }
            }
            _ => None,
        }
    }

    fn at_sign_atom(&self) -> bool {
        self.peek_at(1) == &Tok::Sym('-')
            && self.peek_at(2) == &Tok::Num("1".into())
            && self.peek_at(3) == &Tok::Sym(')')
            && self.peek_at(4) == &Tok::Sym('^')
            && (self.peek_at(5) == &Tok::Ident("N".into())
                || (self.peek_at(5) == &Tok::Sym('(') && self.peek_at(6) == &Tok::Ident("N".into())))
    }

    fn sign_atom(&mut self) -> Result<OperatorExpr> {
        for _ in 0..5 {
            self.bump();
        }
        if self.is_ident("N") {
            self.bump();
            return Ok(OperatorExpr::diag(DiagonalFunction::sign()));
        }
        self.expect_sym('(')?;
        self.expect_ident("N")?;
        let sign = if self.is_sym('+') {
            1
        } else if self.is_sym('-') {
            -1
        } else {
            return self.err(&["`+`", "`-`"]);
        };
        self.bump();
        let k = self.integer()?;
        self.expect_sym(')')?;
        Ok(OperatorExpr::diag(DiagonalFunction::sign().shift(sign * k)))
    }

    fn q_atom(&mut self) -> Result<OperatorExpr> {
        let one = Rational64::one();
        let zero = Rational64::zero();
        if !self.is_sym('^') {
            return Ok(OperatorExpr::diag(DiagonalFunction::q_pow(zero, one)));
        }
        self.bump();
        let (c, d) = if self.is_sym('(') {
            self.bump();
            let lin = self.linear()?;
            self.expect_sym(')')?;
            lin
        } else {
            let neg = if self.is_sym('-') {
                self.bump();
                true
            } else {
                false
            };
            let s = if neg { -one } else { one };
            if self.is_ident("N") {
                self.bump();
                let mut c = s;
                if self.is_sym('/') && matches!(self.peek_at(1), Tok::Num(_)) {
                    self.bump();
                    let den = self.integer()?;
                    if den == 0 {
                        return self.err(&["non-zero denominator"]);
                    }
                    c /= Rational64::from_integer(den);
                }
                (c, zero)
            } else {
                (zero, s * Rational64::from_integer(self.integer()?))
            }
        };
        Ok(OperatorExpr::diag(DiagonalFunction::q_pow(c, d)))
    }

    /// Linear form `c·N + d` inside a parenthesised q-exponent.
    fn linear(&mut self) -> Result<(Rational64, Rational64)> {
        let mut c = Rational64::zero();
        let mut d = Rational64::zero();
        let mut first = true;
        loop {
            let sign = if self.is_sym('+') && !first {
                self.bump();
                Rational64::one()
            } else if self.is_sym('-') {
                self.bump();
                -Rational64::one()
            } else if first {
                Rational64::one()
            } else {
                break;
            };
            first = false;
            if self.is_ident("N") {
                self.bump();
                let mut k = sign;
                if self.is_sym('/') {
                    self.bump();
                    let den = self.integer()?;
                    if den == 0 {
                        return self.err(&["non-zero denominator"]);
                    }
                    k /= Rational64::from_integer(den);
                }
                c += k;
                continue;
            }
            let n = self.integer()?;
            let mut r = Rational64::from_integer(n);
            if self.is_sym('/') {
                self.bump();
                let den = self.integer()?;
                if den == 0 {
                    return self.err(&["non-zero denominator"]);
                }
                r /= Rational64::from_integer(den);
            }
            if self.is_sym('*') {
                self.bump();
                self.expect_ident("N")?;
                c += sign * r;
            } else {
                d += sign * r;
            }
        }
        Ok((c, d))
    }
}

fn parse_decimal(s: &str) -> BigRational {
    match s.split_once('.') {
        None => BigRational::from_integer(s.parse::<BigInt>().unwrap_or_default()),
        Some((int, frac)) => {
            let digits = format!("{int}{frac}");
            let n: BigInt = digits.parse().unwrap_or_default();
            let d = num_traits::pow(BigInt::from(10), frac.len());
            BigRational::new(n, d)
        }
    }
}
