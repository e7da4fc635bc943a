//! Exact and numeric operator calculus for q-deformed boson and fermion
//! oscillators.
//!
//! The crate is layered bottom-up:
//!
//! * [`scalar`]: rational functions of `q` with formal square roots,
//! * [`qnum`]: bosonic and fermionic basic numbers,
//! * [`opalg`]: diagonal functions of `N`, oscillator families and the
//!   normal-ordering engine,
//! * [`expr`]: the operator expression language,
//! * [`fock`]: truncated Fock-space matrices and residual tables,
//! * [`transforms`]: diagonal-weight transformations between algebras,
//! * [`claims`]: the identity registry, batch runner and report emitters,
//! * [`cli`]: the command-line front end.

// Negated float comparisons keep NaN on the failing side.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// Algebra methods such as `NormalForm::mul` need the family, so they are not operator traits.
#![allow(clippy::should_implement_trait)]

pub mod claims;
pub mod cli;
pub mod error;
pub mod expr;
pub mod fock;
pub mod opalg;
pub mod qnum;
pub mod scalar;
pub mod transforms;

pub use error::{Error, Result};
