//! Univariate rational functions kept in lowest terms with a monic denominator.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::poly::Poly;
use super::scalar::Scalar;
use crate::error::{Error, Result};

/// `numerator / denominator`, reduced, with monic nonzero denominator. Because
/// the representation is canonical, `==` is equality of functions.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalFunction1<T> {
    num: Poly<T>,
    den: Poly<T>,
}

impl<T: Scalar> RationalFunction1<T> {
    /// Builds and normalizes `num / den`.
    pub fn new(num: Poly<T>, den: Poly<T>) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(Self::normalize(num, den))
    }

    fn normalize(num: Poly<T>, den: Poly<T>) -> Self {
        if num.is_zero() {
            return RationalFunction1 { num, den: Poly::one() };
        }
        if !T::EXACT {
            // Euclid's algorithm is meaningless under rounding, so float
            // instances are only made monic.
            return Self::scale_monic(num, den);
        }
        let g = num.gcd(&den);
        let (num, r1) = num.divrem(&g);
        let (den, r2) = den.divrem(&g);
        debug_assert!(r1.is_zero() && r2.is_zero());
        Self::scale_monic(num, den)
    }

    fn scale_monic(num: Poly<T>, den: Poly<T>) -> Self {
        let inv = T::one() / den.leading().cloned().expect("nonzero denominator");
        RationalFunction1 { num: num.scale(&inv), den: den.scale(&inv) }
    }

    pub fn from_poly(p: Poly<T>) -> Self {
        RationalFunction1 { num: p, den: Poly::one() }
    }

    pub fn constant(c: T) -> Self {
        Self::from_poly(Poly::constant(c))
    }

    /// `1 / (x - root)`.
    pub fn simple_pole(root: T) -> Self {
        Self::normalize(Poly::one(), Poly::linear_root(root))
    }

    /// `(x - a) / (x - b)`.
    pub fn linear_ratio(a: T, b: T) -> Self {
        Self::normalize(Poly::linear_root(a), Poly::linear_root(b))
    }

    pub fn numerator(&self) -> &Poly<T> {
        &self.num
    }

    pub fn denominator(&self) -> &Poly<T> {
        &self.den
    }

    /// Exact value at `x`; errors if `x` is a pole.
    pub fn eval(&self, x: &T) -> Result<T> {
        let d = self.den.eval(x);
        if d.is_zero() {
            return Err(Error::Pole(format!("denominator vanishes at {x:?}")));
        }
        Ok(self.num.eval(x) / d)
    }

    pub fn recip(&self) -> Result<Self> {
        Self::new(self.den.clone(), self.num.clone())
    }

    /// `f(a*x + b)` with `a != 0`.
    pub fn compose_affine(&self, a: &T, b: &T) -> Self {
        assert!(!a.is_zero(), "affine substitution with zero slope");
        Self::normalize(self.num.compose_affine(a, b), self.den.compose_affine(a, b))
    }

    pub fn powi(&self, e: u32) -> Self {
        (0..e).fold(Self::one(), |acc, _| &acc * self)
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U + Copy) -> RationalFunction1<U> {
        RationalFunction1::normalize(self.num.map(f), self.den.map(f))
    }
}

impl<T: Scalar> Zero for RationalFunction1<T> {
    fn zero() -> Self {
        Self::from_poly(Poly::zero())
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl<T: Scalar> One for RationalFunction1<T> {
    fn one() -> Self {
        Self::from_poly(Poly::one())
    }
}

impl<'a, T: Scalar> Mul<&'a RationalFunction1<T>> for &'a RationalFunction1<T> {
    type Output = RationalFunction1<T>;
    fn mul(self, rhs: &RationalFunction1<T>) -> RationalFunction1<T> {
        RationalFunction1::normalize(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl<T: Scalar> Mul for RationalFunction1<T> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        &self * &rhs
    }
}

impl<'a, T: Scalar> Add<&'a RationalFunction1<T>> for &'a RationalFunction1<T> {
    type Output = RationalFunction1<T>;
    fn add(self, rhs: &RationalFunction1<T>) -> RationalFunction1<T> {
        let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        RationalFunction1::normalize(num, &self.den * &rhs.den)
    }
}

impl<T: Scalar> Add for RationalFunction1<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        &self + &rhs
    }
}

impl<T: Scalar> Neg for RationalFunction1<T> {
    type Output = Self;
    fn neg(self) -> Self {
        RationalFunction1 { num: -self.num, den: self.den }
    }
}

impl<T: Scalar> Sub for RationalFunction1<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        &self + &(-rhs)
    }
}

impl<T: Scalar> Div for RationalFunction1<T> {
    type Output = Result<Self>;
    fn div(self, rhs: Self) -> Result<Self> {
        Ok(&self * &rhs.recip()?)
    }
}

impl<T: Scalar + fmt::Display> fmt::Display for RationalFunction1<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] / [{}]", self.num, self.den)
    }
}
