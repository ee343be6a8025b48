//! Exact factorials, binomials and Bernoulli numbers.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::Rational;

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    (0..k).fold(BigInt::one(), |acc, i| acc * (n - i) / (i + 1))
}

/// Bernoulli numbers `B_0..B_m` with `B_1 = -1/2`.
pub fn bernoulli_table(m: usize) -> Vec<Rational> {
    let mut b: Vec<Rational> = Vec::with_capacity(m + 1);
    b.push(Rational::one());
    for j in 1..=m {
        let mut acc = Rational::zero();
        for (i, bi) in b.iter().enumerate() {
            acc += Rational::from_integer(binomial(j as u64 + 1, i as u64)) * bi;
        }
        b.push(-acc / Rational::from_integer(BigInt::from(j + 1)));
    }
    b
}

pub fn bernoulli(m: usize) -> Rational {
    bernoulli_table(m).pop().expect("nonempty table")
}
