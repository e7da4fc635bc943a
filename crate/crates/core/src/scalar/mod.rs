//! Exact scalars over the field of rational functions in `q`, extended by
//! formal square roots, with numeric evaluation at concrete `q`.

mod laurent;
mod ratfunc;
mod value;

pub use laurent::LaurentPoly;
pub use ratfunc::RationalFunction;
pub use value::ScalarValue;

pub(crate) use laurent::rational_to_f64;
