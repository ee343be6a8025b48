//! Satake images of Cartan cells, Cartan-cell volumes and the unramified
//! local zeta integral, as exact truncated series in `Y`.
//!
//! The generating function is
//! `(1-Y)/(1-q^n Y) · Π_i (1-q^{2i}Y²) / ((1-X_i q^n Y)(1-X_i^{-1} q^n Y))`.

use std::fmt;

use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::scalar::{format_rational, int, rat_pow, serde_rational, serde_rational_vec, Scalar};
use crate::algebra::{series_from_rational_factors, Ring, SeriesFactor, TruncatedSeries};
use crate::error::{Error, Result};
use crate::{QLaurent, QSeries, Rational};

/// Unramified data at one place: Satake parameters `α_i`, residue field
/// size `q` and the value `χ(ϖ)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SatakeData {
    pub n: usize,
    pub q: u64,
    #[serde(with = "serde_rational_vec")]
    pub alphas: Vec<Rational>,
    #[serde(with = "serde_rational", default = "Rational::one")]
    pub chi: Rational,
}

impl SatakeData {
    pub fn new(q: u64, alphas: Vec<Rational>, chi: Rational) -> Result<Self> {
        if q < 2 {
            return Err(Error::InvalidParameter(format!("q must be at least 2, got {q}")));
        }
        if alphas.iter().any(Zero::is_zero) {
            return Err(Error::InvalidParameter("Satake parameters must be nonzero".into()));
        }
        Ok(SatakeData { n: alphas.len(), q, alphas, chi })
    }

    /// Parameters `α_i = q^i` of the trivial representation.
    pub fn trivial(n: usize, q: u64) -> Result<Self> {
        let qq = int(q as i64);
        Self::new(q, (1..=n as i64).map(|i| rat_pow(&qq, i)).collect(), Rational::one())
    }

    pub fn q_rational(&self) -> Rational {
        int(self.q as i64)
    }
}

/// The complex parameter `s` (real and rational here).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvaluationPoint {
    #[serde(with = "serde_rational")]
    pub s: Rational,
}

impl EvaluationPoint {
    pub fn new(s: Rational) -> Self {
        EvaluationPoint { s }
    }
}

/// A value that is exact when the inputs allow it.
#[derive(Clone, Debug, PartialEq)]
pub enum Number {
    Exact(Rational),
    Approx(f64),
}

impl Number {
    pub fn to_f64(&self) -> f64 {
        match self {
            Number::Exact(q) => Scalar::to_f64(q),
            Number::Approx(x) => *x,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Number::Exact(_))
    }

    pub fn as_exact(&self) -> Option<&Rational> {
        match self {
            Number::Exact(q) => Some(q),
            Number::Approx(_) => None,
        }
    }
}

impl fmt::Display for Number {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Number::Exact(q) => write!(f, "{}", format_rational(q)),
            Number::Approx(x) => write!(f, "{x:.15e}"),
        }
    }
}

impl Serialize for Number {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Number::Exact(q) => s.serialize_str(&format_rational(q)),
            Number::Approx(x) => s.serialize_f64(*x),
        }
    }
}

/// The factor list of the generating function with coefficients in a ring
/// `C`, given `q` and the parameters `X_i`, `X_i^{-1}` as ring elements.
fn generating_factors<C: Ring>(n: usize, q: &C, xs: &[(C, C)]) -> Vec<SeriesFactor<C>> {
    let qn = num_traits::pow(q.clone(), n);
    let one = C::one();
    let mut f = vec![SeriesFactor::new(vec![one.clone(), -one.clone()], vec![one, -qn.clone()])];
    for (i, (x, xinv)) in xs.iter().enumerate() {
        let q2i = num_traits::pow(q.clone(), 2 * (i + 1));
        f.push(SeriesFactor::binomial(q2i, 2));
        f.push(SeriesFactor::geometric(x.clone() * qn.clone()));
        f.push(SeriesFactor::geometric(xinv.clone() * qn.clone()));
    }
    f
}

/// Expansion in `Y` with coefficients Laurent polynomials in `X_1..X_n`,
/// for a given coefficient `q` (possibly itself a variable).
pub fn rationality_series_in(n: usize, q: &QLaurent, degree: usize) -> Result<TruncatedSeries<QLaurent>> {
    let xs: Vec<(QLaurent, QLaurent)> =
        (0..n).map(|i| (QLaurent::var(n, i, 1), QLaurent::var(n, i, -1))).collect();
    series_from_rational_factors(&generating_factors(n, q, &xs), degree)
}

/// Expansion in `Y` for numeric `q`.
pub fn rationality_series(n: usize, q: u64, degree: usize) -> Result<TruncatedSeries<QLaurent>> {
    rationality_series_in(n, &QLaurent::constant(n, int(q as i64)), degree)
}

/// Same expansion with `q` kept as the extra variable `X_{n+1}`.
pub fn rationality_series_symbolic_q(n: usize, degree: usize) -> Result<TruncatedSeries<QLaurent>> {
    rationality_series_in(n, &QLaurent::var(n + 1, n, 1), degree)
}

/// Rational series obtained by substituting `X_i = x_i` before expanding.
pub fn rationality_series_at(q: u64, xs: &[Rational], degree: usize) -> Result<QSeries> {
    let pairs: Vec<(Rational, Rational)> = xs
        .iter()
        .map(|x| {
            let inv = x.try_inverse().ok_or_else(|| Error::InvalidParameter("zero parameter".into()))?;
            Ok((x.clone(), inv))
        })
        .collect::<Result<_>>()?;
    series_from_rational_factors(&generating_factors(xs.len(), &int(q as i64), &pairs), degree)
}

/// Volumes of the Cartan cells grouped by total degree: the generating
/// function at `X_i = q^i`.
pub fn cartan_volume_series(n: usize, q: u64, degree: usize) -> Result<QSeries> {
    if q < 2 {
        return Err(Error::InvalidParameter(format!("q must be at least 2, got {q}")));
    }
    let qq = int(q as i64);
    let xs: Vec<Rational> = (1..=n as i64).map(|i| rat_pow(&qq, i)).collect();
    rationality_series_at(q, &xs, degree)
}

/// The simplified form `Π_i (1+q^i Y)/(1-q^{n+i} Y)` of the volume series.
pub fn cartan_volume_product(n: usize, q: u64, degree: usize) -> Result<QSeries> {
    let qq = int(q as i64);
    let factors: Vec<SeriesFactor<Rational>> = (1..=n as i64)
        .map(|i| {
            SeriesFactor::new(
                vec![Rational::one(), rat_pow(&qq, i)],
                vec![Rational::one(), -rat_pow(&qq, n as i64 + i)],
            )
        })
        .collect();
    series_from_rational_factors(&factors, degree)
}

/// `q^{-E}`, exact when `E` is an integer.
fn q_power(q: u64, e: &Rational) -> Number {
    if e.is_integer() {
        let k = e.to_integer().to_i64().expect("exponent fits in i64");
        Number::Exact(rat_pow(&int(q as i64), -k))
    } else {
        Number::Approx((-(Scalar::to_f64(e)) * (q as f64).ln()).exp())
    }
}

/// `E = (2n+1)(s+1/2)` and `c = χ(ϖ) q^{-E}`.
pub fn zeta_variable(sd: &SatakeData, s: &EvaluationPoint) -> Number {
    let e = int(2 * sd.n as i64 + 1) * (s.s.clone() + Rational::new(1.into(), 2.into()));
    match q_power(sd.q, &e) {
        Number::Exact(x) => Number::Exact(x * sd.chi.clone()),
        Number::Approx(x) => Number::Approx(x * Scalar::to_f64(&sd.chi)),
    }
}

/// Partial sum of the zeta series with a bound on the omitted tail.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ZetaSeriesValue {
    pub value: Number,
    pub tail_bound: f64,
    pub degree: usize,
}

fn binom_f64(n: u64, k: u64) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// `Σ_{d<=D} c^d S_d(α)` with `c = χ(ϖ) q^{-(2n+1)(s+1/2)}`.
pub fn unramified_zeta_series(sd: &SatakeData, s: &EvaluationPoint, degree: usize) -> Result<ZetaSeriesValue> {
    let c = zeta_variable(sd, s);
    let coeffs = rationality_series_at(sd.q, &sd.alphas, degree)?;
    let n = sd.n as u64;

    // Coefficient growth: |a_d| <= S_N · C(d+2n, 2n) · R^d.
    let qf = sd.q as f64;
    let s_n = 2.0 * (1..=n).map(|i| 1.0 + qf.powi(2 * i as i32)).product::<f64>();
    let amax = sd
        .alphas
        .iter()
        .map(|a| {
            let x = Scalar::to_f64(&a.abs());
            x.max(1.0 / x)
        })
        .fold(1.0f64, f64::max);
    let r = qf.powi(n as i32) * amax;
    let x = r * c.to_f64().abs();
    let d1 = degree as u64 + 1;
    let ratio = (d1 + 2 * n + 1) as f64 / (d1 + 1) as f64 * x;
    let mut tail = if x == 0.0 {
        0.0
    } else if ratio < 1.0 {
        s_n * binom_f64(d1 + 2 * n, 2 * n) * x.powi(d1 as i32) / (1.0 - ratio)
    } else {
        return Err(Error::Divergent(format!(
            "tail bound is infinite: |c|·R = {x:.3e} too large for degree {degree}"
        )));
    };

    let value = match &c {
        Number::Exact(cq) => {
            let mut acc = Rational::zero();
            for a in coeffs.coeffs().iter().rev() {
                acc = acc * cq.clone() + a.clone();
            }
            Number::Exact(acc)
        }
        Number::Approx(cf) => {
            let mut acc = 0.0f64;
            let mut abs_sum = 0.0f64;
            let mut p = 1.0f64;
            for a in coeffs.coeffs() {
                let t = Scalar::to_f64(a) * p;
                acc += t;
                abs_sum += t.abs();
                p *= cf;
            }
            tail += 4.0 * (degree as f64 + 2.0) * f64::EPSILON * abs_sum;
            Number::Approx(acc)
        }
    };
    Ok(ZetaSeriesValue { value, tail_bound: tail, degree })
}

/// The closed form
/// `L((2n+1)s+1/2, π⊠χ) / (L((2n+1)(s+1/2), χ) Π_i L((2n+1)(2s+1)-2i, χ²))`.
pub fn unramified_zeta_closed(sd: &SatakeData, s: &EvaluationPoint) -> Result<Number> {
    let c = zeta_variable(sd, s);
    let q = sd.q_rational();
    let n = sd.n;
    let qn = rat_pow(&q, n as i64);
    let pole = |what: String| Error::Pole(format!("{what} has a pole at s = {}", format_rational(&s.s)));
    match c {
        Number::Exact(c) => {
            let one = Rational::one();
            let l_chi = one.clone() - c.clone();
            if l_chi.is_zero() {
                return Err(pole("L((2n+1)(s+1/2), χ)".into()));
            }
            let mut num = l_chi;
            for i in 1..=n {
                let f = one.clone() - rat_pow(&q, 2 * i as i64) * c.clone() * c.clone();
                if f.is_zero() {
                    return Err(pole(format!("L((2n+1)(2s+1)-{}, χ²)", 2 * i)));
                }
                num = num * f;
            }
            let u = qn * c;
            let mut den = one.clone() - u.clone();
            for a in &sd.alphas {
                den = den * (one.clone() - a.clone() * u.clone()) * (one.clone() - u.clone() / a.clone());
            }
            if den.is_zero() {
                return Err(pole("L((2n+1)s+1/2, π⊠χ)".into()));
            }
            Ok(Number::Exact(num / den))
        }
        Number::Approx(c) => {
            let qf = sd.q as f64;
            let l_chi = 1.0 - c;
            if l_chi == 0.0 {
                return Err(pole("L((2n+1)(s+1/2), χ)".into()));
            }
            let mut num = l_chi;
            for i in 1..=n {
                num *= 1.0 - qf.powi(2 * i as i32) * c * c;
            }
            let u = qf.powi(n as i32) * c;
            let mut den = 1.0 - u;
            for a in &sd.alphas {
                let a = Scalar::to_f64(a);
                den *= (1.0 - a * u) * (1.0 - u / a);
            }
            if den == 0.0 {
                return Err(pole("L((2n+1)s+1/2, π⊠χ)".into()));
            }
            Ok(Number::Approx(num / den))
        }
    }
}

/// Coefficients of a Laurent polynomial as `"e1,e2,..." -> "num/den"`.
pub fn laurent_to_json(p: &QLaurent) -> serde_json::Value {
    let map: serde_json::Map<String, serde_json::Value> = p
        .terms()
        .map(|(e, c)| {
            let key = e.iter().map(|k| k.to_string()).collect::<Vec<_>>().join(",");
            (key, serde_json::Value::String(format_rational(c)))
        })
        .collect();
    serde_json::Value::Object(map)
}

/// Invariance of a Laurent polynomial under the Weyl group of type `C_n`.
pub fn is_weyl_invariant(p: &QLaurent, n: usize) -> bool {
    let perms = crate::ktype::signed_permutations(n);
    perms.iter().all(|(perm, _)| &p.permute_vars(perm) == p) && (0..n).all(|i| &p.invert_var(i) == p)
}

/// Whether every coefficient is a positive integer.
pub fn all_positive_integers(s: &QSeries) -> bool {
    s.coeffs().iter().all(|c| c.is_integer() && c.is_positive())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::scalar::rat;

    #[test]
    fn low_degree_coefficients_n1() {
        let s = rationality_series_symbolic_q(1, 2).unwrap();
        assert_eq!(s.coeff(0), &QLaurent::one());
        // q(1 + X + X^{-1}) - 1 with q = X_2
        let q = QLaurent::var(2, 1, 1);
        let x = QLaurent::var(2, 0, 1);
        let xi = QLaurent::var(2, 0, -1);
        let want = &q * &(QLaurent::one() + x + xi) - QLaurent::one();
        assert_eq!(s.coeff(1), &want);
        let num = rationality_series(1, 2, 1).unwrap();
        assert_eq!(num.coeff(1).eval(&[int(2)]).unwrap(), int(6));
    }

    #[test]
    fn volumes_n1() {
        let s = cartan_volume_series(1, 2, 3).unwrap();
        assert_eq!(s.coeffs(), &[int(1), int(6), int(24), int(96)]);
        assert_eq!(s, cartan_volume_product(1, 2, 3).unwrap());
        let s2 = cartan_volume_series(2, 2, 1).unwrap();
        assert_eq!(s2.coeff(0), &int(1));
        let at = rationality_series(2, 2, 1).unwrap().coeff(1).eval(&[int(2), int(4)]).unwrap();
        assert_eq!(s2.coeff(1), &at);
    }

    #[test]
    fn zeta_depth_zero_is_one() {
        let sd = SatakeData::new(2, vec![int(1)], int(1)).unwrap();
        let v = unramified_zeta_series(&sd, &EvaluationPoint::new(rat(3, 2)), 0).unwrap();
        assert_eq!(v.value, Number::Exact(int(1)));
    }

    #[test]
    fn zeta_exact_case() {
        let sd = SatakeData::new(2, vec![int(1)], int(1)).unwrap();
        let s = EvaluationPoint::new(rat(3, 2));
        assert_eq!(zeta_variable(&sd, &s), Number::Exact(rat(1, 64)));
        let closed = unramified_zeta_closed(&sd, &s).unwrap();
        let series = unramified_zeta_series(&sd, &s, 30).unwrap();
        let diff = (closed.to_f64() - series.value.to_f64()).abs();
        assert!(diff <= series.tail_bound && diff < 1e-6, "{diff} vs {}", series.tail_bound);
        // (1-c)(1-4c^2) / (1-2c)^3 at c = 1/64
        let c = rat(1, 64);
        let one = Rational::one();
        let want = (one.clone() - c.clone()) * (one.clone() - int(4) * c.clone() * c.clone())
            / num_traits::pow(one - int(2) * c, 3);
        assert_eq!(closed, Number::Exact(want));
    }

    #[test]
    fn zeta_float_case_n2() {
        let sd = SatakeData::new(3, vec![rat(1, 2), int(3)], int(1)).unwrap();
        let s = EvaluationPoint::new(int(2));
        let closed = unramified_zeta_closed(&sd, &s).unwrap();
        assert!(!closed.is_exact());
        let series = unramified_zeta_series(&sd, &s, 20).unwrap();
        assert!((closed.to_f64() - series.value.to_f64()).abs() <= series.tail_bound);
    }

    #[test]
    fn zero_character_value() {
        let sd = SatakeData::new(5, vec![int(2)], int(0)).unwrap();
        let s = EvaluationPoint::new(rat(1, 2));
        assert_eq!(unramified_zeta_series(&sd, &s, 5).unwrap().value, Number::Exact(int(1)));
        assert_eq!(unramified_zeta_closed(&sd, &s).unwrap(), Number::Exact(int(1)));
    }

    #[test]
    fn divergence_detected() {
        let sd = SatakeData::new(2, vec![int(1)], int(1)).unwrap();
        let s = EvaluationPoint::new(int(-1));
        assert!(matches!(unramified_zeta_series(&sd, &s, 10), Err(Error::Divergent(_))));
    }

    #[test]
    fn closed_form_pole_is_named() {
        // c = q^{-3(s+1/2)} = 1/8 at s = 1/2, q = 2; q^n c α = 1 for α = 4.
        let sd = SatakeData::new(2, vec![int(4)], int(1)).unwrap();
        let err = unramified_zeta_closed(&sd, &EvaluationPoint::new(rat(1, 2))).unwrap_err();
        assert!(err.to_string().contains("π⊠χ"), "{err}");
    }
}
