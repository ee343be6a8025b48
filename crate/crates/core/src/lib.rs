//! Exact local factors, multiplicities and normalizing constants for the
//! doubling integral representation of the standard L-function on
//! GSp(2n) x GL(1), together with independent numerical oracles.
//!
//! The algebra is generic over the coefficient type through [`Scalar`]; the
//! aliases below fix the exact instantiation used throughout.

pub mod algebra;
pub mod arch;
pub mod error;
pub mod hecke;
pub mod ktype;
pub mod lfactors;
pub mod oracles;
pub mod symplectic;
pub mod verify;

pub use algebra::{LaurentPolynomial, PiPower, Poly, RationalFunction1, Ring, Scalar, TruncatedSeries};
pub use error::{Error, Result};

/// Arbitrary-precision rational number, always in lowest terms.
pub type Rational = num_rational::BigRational;
/// Arbitrary-precision integer.
pub type Integer = num_bigint::BigInt;

pub type QLaurent = LaurentPolynomial<Rational>;
pub type QPoly = Poly<Rational>;
pub type QRatFun = RationalFunction1<Rational>;
pub type QSeries = TruncatedSeries<Rational>;
pub type QLaurentSeries = TruncatedSeries<QLaurent>;
pub type QMatrix = symplectic::Matrix<Rational>;
pub type FMatrix = symplectic::Matrix<f64>;
pub type F32Matrix = symplectic::Matrix<f32>;
pub type FRatFun = RationalFunction1<f64>;
