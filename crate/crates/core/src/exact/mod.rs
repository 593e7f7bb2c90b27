//! Exact scalars, ternary forms and dense matrices over Q.

pub mod form;
pub mod gcd;
pub mod matrix;
pub mod modp;
pub mod parse;
pub mod roots;

pub use form::{conic_is_irreducible, det_forms, dim_forms, linearly_independent, monomial_index, monomials, mult_map, span_rank, Form};
pub use gcd::{divides, exact_quotient, form_gcd, gcd_all, UPoly};
pub use matrix::{rref_rows, Matrix, Rref};
pub use parse::{parse_form, parse_rational};
pub use roots::{primitive_integer_vector, rational_roots, simplest_between};

pub type Rational = num_rational::BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}
