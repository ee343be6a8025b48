//! Power series in one variable `Y`, truncated at a fixed degree.

use std::ops::{Add, Mul};

use super::scalar::Ring;
use crate::error::{Error, Result};

/// `c_0 + c_1 Y + ... + c_D Y^D`, always exactly `D + 1` coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedSeries<C> {
    coeffs: Vec<C>,
}

impl<C: Ring> TruncatedSeries<C> {
    /// Pads or truncates `coeffs` to length `degree + 1`.
    pub fn from_coeffs(mut coeffs: Vec<C>, degree: usize) -> Self {
        coeffs.resize(degree + 1, C::zero());
        TruncatedSeries { coeffs }
    }

    pub fn one(degree: usize) -> Self {
        Self::from_coeffs(vec![C::one()], degree)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn coeff(&self, d: usize) -> &C {
        &self.coeffs[d]
    }

    pub fn into_coeffs(self) -> Vec<C> {
        self.coeffs
    }

    pub fn map<D: Ring>(&self, f: impl Fn(&C) -> D) -> TruncatedSeries<D> {
        TruncatedSeries { coeffs: self.coeffs.iter().map(f).collect() }
    }

    /// Multiplicative inverse; needs an invertible constant term.
    pub fn inverse(&self) -> Option<Self> {
        let inv0 = self.coeffs[0].try_inverse()?;
        let d = self.degree();
        let mut out: Vec<C> = Vec::with_capacity(d + 1);
        out.push(inv0.clone());
        for k in 1..=d {
            let mut acc = C::zero();
            for j in 1..=k {
                let a = &self.coeffs[j];
                if a.is_zero() {
                    continue;
                }
                acc = acc + a.clone() * out[k - j].clone();
            }
            out.push(-(inv0.clone() * acc));
        }
        Some(TruncatedSeries { coeffs: out })
    }

    /// Sum of `c_d * y^d` for a scalar-valued series.
    pub fn eval(&self, y: &C) -> C {
        let mut acc = C::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * y.clone() + c.clone();
        }
        acc
    }
}

impl<'a, C: Ring> Mul<&'a TruncatedSeries<C>> for &'a TruncatedSeries<C> {
    type Output = TruncatedSeries<C>;
    fn mul(self, rhs: &TruncatedSeries<C>) -> TruncatedSeries<C> {
        let d = self.degree().min(rhs.degree());
        let mut out = vec![C::zero(); d + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(d + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate().take(d + 1 - i) {
                if b.is_zero() {
                    continue;
                }
                let t = a.clone() * b.clone();
                out[i + j] = std::mem::replace(&mut out[i + j], C::zero()) + t;
            }
        }
        TruncatedSeries { coeffs: out }
    }
}

impl<C: Ring> Add for TruncatedSeries<C> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let d = self.degree().min(rhs.degree());
        let coeffs = self
            .coeffs
            .into_iter()
            .zip(rhs.coeffs)
            .take(d + 1)
            .map(|(a, b)| a + b)
            .collect();
        TruncatedSeries { coeffs }
    }
}

/// One factor `numerator(Y) / denominator(Y)` with polynomial coefficients
/// listed from the constant term upwards.
#[derive(Clone, Debug, PartialEq)]
pub struct SeriesFactor<C> {
    pub numerator: Vec<C>,
    pub denominator: Vec<C>,
}

impl<C: Ring> SeriesFactor<C> {
    pub fn new(numerator: Vec<C>, denominator: Vec<C>) -> Self {
        SeriesFactor { numerator, denominator }
    }

    /// `1 / (1 - a Y)`.
    pub fn geometric(a: C) -> Self {
        SeriesFactor::new(vec![C::one()], vec![C::one(), -a])
    }

    /// `(1 - a Y^k)` as a polynomial factor.
    pub fn binomial(a: C, k: usize) -> Self {
        let mut num = vec![C::zero(); k + 1];
        num[0] = C::one();
        num[k] = -a;
        SeriesFactor::new(num, vec![C::one()])
    }
}

/// Expands `prod numerator_i / denominator_i` to degree `degree`.
///
/// Fails with [`Error::SingularFactor`] when some denominator has a constant
/// term without inverse in the coefficient ring.
pub fn series_from_rational_factors<C: Ring>(
    factors: &[SeriesFactor<C>],
    degree: usize,
) -> Result<TruncatedSeries<C>> {
    let mut acc = TruncatedSeries::one(degree);
    for (index, f) in factors.iter().enumerate() {
        let den = TruncatedSeries::from_coeffs(f.denominator.clone(), degree);
        let inv = den.inverse().ok_or(Error::SingularFactor { index })?;
        let num = TruncatedSeries::from_coeffs(f.numerator.clone(), degree);
        acc = &acc * &num;
        acc = &acc * &inv;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::scalar::int;
    use crate::Rational;

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn geometric_series() {
        let s = series_from_rational_factors(&[SeriesFactor::geometric(int(1))], 3).unwrap();
        assert_eq!(s.coeffs(), ints(&[1, 1, 1, 1]).as_slice());
    }

    #[test]
    fn cancellation() {
        let f = SeriesFactor::new(ints(&[1, -1]), ints(&[1, -1]));
        let s = series_from_rational_factors(&[f], 2).unwrap();
        assert_eq!(s.coeffs(), ints(&[1, 0, 0]).as_slice());
    }

    #[test]
    fn long_division_q2() {
        // (1 + 2Y) / (1 - 4Y)
        let f = SeriesFactor::new(ints(&[1, 2]), ints(&[1, -4]));
        let s = series_from_rational_factors(&[f], 2).unwrap();
        assert_eq!(s.coeffs(), ints(&[1, 6, 24]).as_slice());
    }

    #[test]
    fn singular_constant_term() {
        let f = SeriesFactor::new(ints(&[1]), ints(&[0, 1]));
        let err = series_from_rational_factors(&[SeriesFactor::geometric(int(2)), f], 4).unwrap_err();
        assert_eq!(err, Error::SingularFactor { index: 1 });
    }

    #[test]
    fn evaluation_is_horner() {
        let s = TruncatedSeries::from_coeffs(ints(&[1, 2, 3]), 2);
        assert_eq!(s.eval(&int(2)), int(17));
    }
}
