//! Sparse multivariate Laurent polynomials.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::scalar::Ring;

/// Exponent vector with trailing zeros stripped, so that the same monomial
/// has one key regardless of the declared variable count.
pub type Exponent = Vec<i32>;

fn trim(mut e: Exponent) -> Exponent {
    while e.last() == Some(&0) {
        e.pop();
    }
    e
}

fn add_exponents(a: &[i32], b: &[i32]) -> Exponent {
    let len = a.len().max(b.len());
    let v = (0..len)
        .map(|i| a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0))
        .collect();
    trim(v)
}

/// Laurent polynomial in `X_1..X_n` with coefficients in `T`.
///
/// Zero coefficients are never stored.
#[derive(Clone, Debug)]
pub struct LaurentPolynomial<T> {
    nvars: usize,
    terms: BTreeMap<Exponent, T>,
}

impl<T: Ring> LaurentPolynomial<T> {
    pub fn zero_in(nvars: usize) -> Self {
        LaurentPolynomial { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: T) -> Self {
        Self::monomial(nvars, &[], c)
    }

    pub fn monomial(nvars: usize, exponent: &[i32], c: T) -> Self {
        assert!(exponent.len() <= nvars || exponent.iter().skip(nvars).all(|&e| e == 0));
        let mut p = Self::zero_in(nvars);
        if !c.is_zero() {
            p.terms.insert(trim(exponent.to_vec()), c);
        }
        p
    }

    /// The variable `X_{i+1}` raised to `power`.
    pub fn var(nvars: usize, i: usize, power: i32) -> Self {
        let mut e = vec![0; nvars];
        e[i] = power;
        Self::monomial(nvars, &e, T::one())
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of the monomial with the given exponent.
    pub fn coeff(&self, exponent: &[i32]) -> T {
        self.terms.get(&trim(exponent.to_vec())).cloned().unwrap_or_else(T::zero)
    }

    /// Iterates `(exponent padded to nvars, coefficient)`.
    pub fn terms(&self) -> impl Iterator<Item = (Exponent, &T)> + '_ {
        self.terms.iter().map(move |(e, c)| {
            let mut full = e.clone();
            full.resize(self.nvars.max(e.len()), 0);
            (full, c)
        })
    }

    fn insert_add(&mut self, e: Exponent, c: T) {
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&e) {
            Some(old) => {
                let s = old + c;
                if !s.is_zero() {
                    self.terms.insert(e, s);
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn scale(&self, c: &T) -> Self {
        if c.is_zero() {
            return Self::zero_in(self.nvars);
        }
        let terms = self
            .terms
            .iter()
            .filter_map(|(e, v)| {
                let p = v.clone() * c.clone();
                (!p.is_zero()).then(|| (e.clone(), p))
            })
            .collect();
        LaurentPolynomial { nvars: self.nvars, terms }
    }

    /// Apply a transformation to every exponent vector (padded to nvars).
    pub fn map_exponents(&self, f: impl Fn(&mut Vec<i32>)) -> Self {
        let mut out = Self::zero_in(self.nvars);
        for (mut e, c) in self.terms() {
            f(&mut e);
            out.insert_add(trim(e), c.clone());
        }
        out
    }

    /// Substitutes `X_i -> X_{perm[i]}`.
    pub fn permute_vars(&self, perm: &[usize]) -> Self {
        let n = self.nvars.max(perm.len());
        self.map_exponents(|e| {
            let mut out = vec![0; n];
            for (i, &p) in perm.iter().enumerate() {
                out[p] = e.get(i).copied().unwrap_or(0);
            }
            *e = out;
        })
    }

    /// Substitutes `X_i -> X_i^{-1}`.
    pub fn invert_var(&self, i: usize) -> Self {
        self.map_exponents(|e| {
            if let Some(k) = e.get_mut(i) {
                *k = -*k;
            }
        })
    }

    /// Evaluates at a point, mapping each coefficient through `coeff`.
    /// Returns `None` if a negative power of a non-unit is required.
    pub fn eval_with<U: Ring>(&self, point: &[U], coeff: impl Fn(&T) -> U) -> Option<U> {
        assert!(point.len() >= self.nvars, "evaluation point has too few coordinates");
        let inverses: Vec<Option<U>> = point.iter().map(|x| x.try_inverse()).collect();
        let mut acc = U::zero();
        for (e, c) in self.terms.iter() {
            let mut term = coeff(c);
            for (i, &k) in e.iter().enumerate() {
                let base = if k >= 0 { point[i].clone() } else { inverses[i].clone()? };
                term = term * num_traits::pow(base, k.unsigned_abs() as usize);
            }
            acc = acc + term;
        }
        Some(acc)
    }

    pub fn eval(&self, point: &[T]) -> Option<T> {
        self.eval_with(point, |c| c.clone())
    }

    /// Total degree range `(min, max)` of the exponents of variable `i`.
    pub fn degree_range(&self, i: usize) -> Option<(i32, i32)> {
        let it = self.terms.keys().map(|e| e.get(i).copied().unwrap_or(0));
        let v: Vec<i32> = it.collect();
        Some((*v.iter().min()?, *v.iter().max()?))
    }
}

impl<T: Ring> PartialEq for LaurentPolynomial<T> {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}

impl<T: Ring> Add for LaurentPolynomial<T> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        self.nvars = self.nvars.max(rhs.nvars);
        for (e, c) in rhs.terms {
            self.insert_add(e, c);
        }
        self
    }
}

impl<T: Ring> Neg for LaurentPolynomial<T> {
    type Output = Self;
    fn neg(self) -> Self {
        let terms = self.terms.into_iter().map(|(e, c)| (e, -c)).collect();
        LaurentPolynomial { nvars: self.nvars, terms }
    }
}

impl<T: Ring> Sub for LaurentPolynomial<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<'a, T: Ring> Mul<&'a LaurentPolynomial<T>> for &'a LaurentPolynomial<T> {
    type Output = LaurentPolynomial<T>;
    fn mul(self, rhs: &LaurentPolynomial<T>) -> LaurentPolynomial<T> {
        let mut out = LaurentPolynomial::zero_in(self.nvars.max(rhs.nvars));
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                out.insert_add(add_exponents(ea, eb), ca.clone() * cb.clone());
            }
        }
        out
    }
}

impl<T: Ring> Mul for LaurentPolynomial<T> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        &self * &rhs
    }
}

impl<T: Ring> Zero for LaurentPolynomial<T> {
    fn zero() -> Self {
        Self::zero_in(0)
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl<T: Ring> One for LaurentPolynomial<T> {
    fn one() -> Self {
        Self::constant(0, T::one())
    }
}

impl<T: Ring> Ring for LaurentPolynomial<T> {
    /// Units are the monomials with unit coefficient.
    fn try_inverse(&self) -> Option<Self> {
        if self.terms.len() != 1 {
            return None;
        }
        let (e, c) = self.terms.iter().next()?;
        let inv = c.try_inverse()?;
        let neg: Vec<i32> = e.iter().map(|k| -k).collect();
        Some(Self::monomial(self.nvars.max(e.len()), &neg, inv))
    }
}

impl<T: Ring + fmt::Display> fmt::Display for LaurentPolynomial<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})")?;
            for (i, k) in e.iter().enumerate() {
                match k {
                    0 => {}
                    1 => write!(f, "*X{}", i + 1)?,
                    k => write!(f, "*X{}^{}", i + 1, k)?,
                }
            }
        }
        Ok(())
    }
}
