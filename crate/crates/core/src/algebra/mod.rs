//! Exact algebraic building blocks shared by the rest of the crate.

pub mod laurent;
pub mod pipower;
pub mod poly;
pub mod ratfun;
pub mod scalar;
pub mod series;
pub mod special;

pub use laurent::LaurentPolynomial;
pub use pipower::PiPower;
pub use poly::Poly;
pub use ratfun::RationalFunction1;
pub use scalar::{format_rational, int, parse_rational, rat, rat_pow, FromRational, Ring, Scalar};
pub use series::{series_from_rational_factors, SeriesFactor, TruncatedSeries};
