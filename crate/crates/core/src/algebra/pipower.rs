//! Constants of the form `q * pi^e` with `q` rational.

use std::fmt;
use std::ops::{Div, Mul, Neg};

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::scalar::{format_rational, serde_rational, Scalar};

/// `coeff * pi^pi_exp`. Zero is stored canonically with exponent 0.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "RawPiPower")]
pub struct PiPower {
    #[serde(with = "serde_rational")]
    coeff: BigRational,
    pi_exp: i64,
}

#[derive(Deserialize)]
struct RawPiPower {
    #[serde(with = "serde_rational")]
    coeff: BigRational,
    pi_exp: i64,
}

impl From<RawPiPower> for PiPower {
    fn from(raw: RawPiPower) -> Self {
        PiPower::new(raw.coeff, raw.pi_exp)
    }
}

impl PiPower {
    pub fn new(coeff: BigRational, pi_exp: i64) -> Self {
        if coeff.is_zero() {
            Self::zero()
        } else {
            PiPower { coeff, pi_exp }
        }
    }

    pub fn rational(coeff: BigRational) -> Self {
        Self::new(coeff, 0)
    }

    pub fn pi() -> Self {
        Self::new(BigRational::one(), 1)
    }

    pub fn zero() -> Self {
        PiPower { coeff: BigRational::zero(), pi_exp: 0 }
    }

    pub fn one() -> Self {
        Self::rational(BigRational::one())
    }

    pub fn coeff(&self) -> &BigRational {
        &self.coeff
    }

    pub fn pi_exp(&self) -> i64 {
        self.pi_exp
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero()
    }

    /// The rational value, if no power of pi remains.
    pub fn as_rational(&self) -> Option<&BigRational> {
        (self.pi_exp == 0).then_some(&self.coeff)
    }

    pub fn powi(&self, e: i64) -> Self {
        let c = super::scalar::rat_pow(&self.coeff, e);
        Self::new(c, self.pi_exp * e)
    }

    pub fn recip(&self) -> Self {
        assert!(!self.is_zero(), "reciprocal of zero PiPower");
        PiPower { coeff: self.coeff.recip(), pi_exp: -self.pi_exp }
    }

    pub fn to_f64(&self) -> f64 {
        Scalar::to_f64(&self.coeff) * std::f64::consts::PI.powi(self.pi_exp as i32)
    }

    pub fn is_positive(&self) -> bool {
        self.coeff.is_positive()
    }
}

impl Mul for PiPower {
    type Output = PiPower;
    fn mul(self, rhs: PiPower) -> PiPower {
        PiPower::new(self.coeff * rhs.coeff, self.pi_exp + rhs.pi_exp)
    }
}

impl<'a> Mul<&'a PiPower> for &'a PiPower {
    type Output = PiPower;
    fn mul(self, rhs: &PiPower) -> PiPower {
        PiPower::new(&self.coeff * &rhs.coeff, self.pi_exp + rhs.pi_exp)
    }
}

impl Mul<BigRational> for PiPower {
    type Output = PiPower;
    fn mul(self, rhs: BigRational) -> PiPower {
        PiPower::new(self.coeff * rhs, self.pi_exp)
    }
}

impl Div for PiPower {
    type Output = PiPower;
    fn div(self, rhs: PiPower) -> PiPower {
        self * rhs.recip()
    }
}

impl Neg for PiPower {
    type Output = PiPower;
    fn neg(self) -> PiPower {
        PiPower::new(-self.coeff, self.pi_exp)
    }
}

impl fmt::Display for PiPower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.pi_exp {
            0 => write!(f, "{}", format_rational(&self.coeff)),
            1 => write!(f, "{}*pi", format_rational(&self.coeff)),
            e => write!(f, "{}*pi^{}", format_rational(&self.coeff), e),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::scalar::{int, rat};

    #[test]
    fn products_add_exponents() {
        let a = PiPower::new(rat(2, 3), 2);
        let b = PiPower::new(rat(9, 4), -5);
        let c = a.clone() * b;
        assert_eq!(c, PiPower::new(rat(3, 2), -3));
        assert_eq!(c / a, PiPower::new(rat(9, 4), -5));
    }

    #[test]
    fn zero_is_canonical() {
        let z = PiPower::new(int(0), 7);
        assert_eq!(z, PiPower::zero());
        assert_eq!(z.pi_exp(), 0);
        assert_eq!(PiPower::pi() * PiPower::zero(), PiPower::zero());
    }

    #[test]
    fn json_shape() {
        let v = serde_json::to_value(PiPower::new(rat(1, 3), 1)).unwrap();
        assert_eq!(v, serde_json::json!({"coeff": "1/3", "pi_exp": 1}));
        let back: PiPower = serde_json::from_value(v).unwrap();
        assert_eq!(back, PiPower::new(rat(1, 3), 1));
    }
}
