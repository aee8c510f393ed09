//! Exact arithmetic over the Gaussian rationals: scalars, polynomials, rational
//! functions, truncated Laurent series, divisors and matrices.

pub mod divisor;
pub mod gaussian;
pub mod matrix;
mod modular;
pub mod parse;
pub mod poly;
pub mod ratfun;
pub mod roots;
pub mod series;

pub use divisor::{divisor_of, Divisor, Point};
pub use gaussian::{rat, rat_to_f64, GaussianRational, GQ};
pub use matrix::MeroMatrix;
pub use parse::{parse_gq, parse_point, parse_poly, parse_rational, parse_rf};
pub use poly::Poly;
pub use ratfun::{RationalFunction, RF};
pub use roots::{gaussian_roots, gq_sqrt, rat_sqrt, RootSet};
pub use series::{series_expand, LaurentSeries};

/// Order of vanishing of `f` at `p`; see [`RationalFunction::valuation_at`].
pub fn valuation_at(f: &RF, p: &Point) -> crate::error::Result<i64> {
    f.valuation_at(p)
}
