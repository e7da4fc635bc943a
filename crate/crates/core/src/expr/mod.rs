//! Operator expressions: the tree, its parser and canonical printer.

mod ast;
mod parser;
mod printer;

pub use ast::{Ladder, OperatorExpr};
pub use parser::parse;
pub use printer::{fmt_q_atom, print_canonical};

/// Hermitian adjoint of an expression tree.
pub fn adjoint(expr: &OperatorExpr) -> OperatorExpr {
    expr.adjoint()
}
