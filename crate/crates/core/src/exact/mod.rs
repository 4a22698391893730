//! Exact scalar, polynomial and matrix arithmetic.
//!
//! Scalars are arbitrary-precision rationals kept in lowest terms with a
//! positive denominator (the representation `num_rational` maintains on
//! construction), so structural equality is value equality.

mod matrix;
mod poly;
mod scalar;

pub use matrix::ExactMatrix;
pub use poly::{interpolate, ExactPolynomial};
pub use scalar::{
    big, binomial, double_factorial, factorial, falling, gamma_ratio_int, parse_rational, rat,
    ratio, rising, to_f64, to_fraction_string, ExactScalar,
};
