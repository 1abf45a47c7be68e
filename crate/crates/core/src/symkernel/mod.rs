//! Exact symbolic ring: shifted or jet-indexed even variables, Grassmann odd
//! generators, rational coefficients.

pub mod calculus;
pub mod expr;
mod gcd;
pub mod monomial;
pub mod parse;
pub mod poly;
pub mod var;

pub type Rational = num_rational::BigRational;

pub use calculus::{
    fields, functional_canonical_form, is_total_difference, jet_partial, prolong,
    total_x_derivative, total_x_derivative_n, variational_derivative, Target,
};
pub use expr::{Expr, Frac};
pub use gcd::{div_exact, gcd};
pub use monomial::Monomial;
pub use parse::parse_poly;
pub use poly::Poly;
pub use var::{Field, Mode, Odd, Slot, Var};
