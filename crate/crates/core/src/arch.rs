//! Archimedean factors of the zeta integral for holomorphic discrete series
//! of `Sp(2n, R)`, and the normalizing constant of the classical pullback
//! identity.
//!
//! Rational functions are in `z = (2n+1)s - 1/2`, except the β ratios which
//! are in `t = (n+1/2)s + 1/4 = (z+1)/2`. Powers of 2 with symbolic exponent
//! are carried as the affine exponent `a*z + b` or `a*s + b`.

use num_traits::{One, Zero};
use serde::Serialize;

use crate::algebra::scalar::{format_rational, int, rat, rat_pow};
use crate::algebra::special::{bernoulli, factorial};
use crate::algebra::PiPower;
use crate::error::{Error, Result};
use crate::ktype::{ktype_to_hc, HCParameter, KTypeVector};
use crate::lfactors::principal_congruence_volume;
use crate::{QRatFun, Rational};

/// Validated archimedean data: a K-type `k` with `k_n > n` and entries of
/// one parity, and the Harish-Chandra parameter it determines.
#[derive(Clone, Debug, PartialEq)]
pub struct ArchContext {
    pub n: usize,
    pub kvec: KTypeVector,
    pub lambda: HCParameter,
}

impl ArchContext {
    pub fn new(kvec: KTypeVector) -> Result<Self> {
        let n = kvec.n();
        let kn = *kvec.as_slice().last().unwrap();
        if kn <= n as i64 {
            return Err(Error::InvalidParameter(format!("need k_n > n, got k_n = {kn}, n = {n}")));
        }
        if !kvec.same_parity() {
            return Err(Error::Parity(format!("entries of {kvec} differ in parity")));
        }
        let lambda = ktype_to_hc(&kvec)?;
        Ok(ArchContext { n, kvec, lambda })
    }

    pub fn scalar(n: usize, k: i64) -> Result<Self> {
        Self::new(KTypeVector::scalar(n, k))
    }

    /// `k = k_1`.
    pub fn k(&self) -> i64 {
        self.kvec.as_slice()[0]
    }

    pub fn k_j(&self, j: usize) -> i64 {
        self.kvec.as_slice()[j - 1]
    }

    /// `i^{nk}` as an exponent mod 4.
    pub fn phase(&self) -> u8 {
        ((self.n as i64 * self.k()).rem_euclid(4)) as u8
    }
}

/// A rational times a power of π times a power of `i`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExactConstant {
    pub value: PiPower,
    pub phase: u8,
}

impl ExactConstant {
    pub fn new(value: PiPower, phase: u8) -> Self {
        ExactConstant { value, phase: phase % 4 }
    }

    /// `(re, im)` as floats.
    pub fn to_complex(&self) -> (f64, f64) {
        let v = self.value.to_f64();
        match self.phase {
            0 => (v, 0.0),
            1 => (0.0, v),
            2 => (-v, 0.0),
            _ => (0.0, -v),
        }
    }
}

fn prod_factorials(n: usize) -> Rational {
    Rational::from_integer((1..=n as u64).map(|m| factorial(m - 1)).product())
}

/// `Π_{m=1}^n (m-1)!`.
pub fn factorial_product(n: usize) -> Rational {
    prod_factorials(n)
}

/// `γ_n(z) = Π_{m=1}^n (m-1)! Π_{j=1}^m 1/(z - m - 1 + 2j)`.
pub fn gamma_n(n: usize) -> QRatFun {
    let mut f = QRatFun::constant(prod_factorials(n));
    for m in 1..=n as i64 {
        for j in 1..=m {
            f = &f * &QRatFun::simple_pole(int(m + 1 - 2 * j));
        }
    }
    f
}

/// `β(ℓ_j, s) / β(k-j, s)` as a rational function of `t`:
/// `Π_{i=0}^{m-1} (t - ℓ_j/2 - m + i) / (t + ℓ_j/2 + m - 1 - i)` with
/// `m = (k - k_j)/2` and `k_j = ℓ_j + j`.
pub fn beta_ratio(l_j: i64, k: i64, j: usize) -> Result<QRatFun> {
    let diff = k - (l_j + j as i64);
    if diff < 0 || diff % 2 != 0 {
        return Err(Error::Parity(format!("k - k_j = {diff} must be even and nonnegative")));
    }
    let m = diff / 2;
    let half_l = rat(l_j, 2);
    let mut f = QRatFun::one();
    for i in 0..m {
        let zero = half_l.clone() + int(m - i);
        let pole = -(half_l.clone() + int(m - 1 - i));
        f = &f * &QRatFun::linear_ratio(zero, pole);
    }
    Ok(f)
}

/// `A_k(z)` split as `2^{two_exp_z * z + two_exp_const}` times a rational
/// function of `z`.
#[derive(Clone, Debug, PartialEq)]
pub struct AkFunction {
    pub n: usize,
    pub two_exp_z: Rational,
    pub two_exp_const: Rational,
    pub rational: QRatFun,
}

impl AkFunction {
    /// Rational part and the exponent of 2 at `z`.
    pub fn eval_parts(&self, z: &Rational) -> Result<(Rational, Rational)> {
        let r = self.rational.eval(z)?;
        Ok((r, self.two_exp_z.clone() * z.clone() + self.two_exp_const.clone()))
    }

    /// Exact value at integer `z`.
    pub fn eval_integer(&self, z: i64) -> Result<Rational> {
        let (r, e) = self.eval_parts(&int(z))?;
        debug_assert!(e.is_integer());
        let e = e.to_integer();
        let e: i64 = e.try_into().map_err(|_| Error::OutOfRange("exponent too large".into()))?;
        Ok(r * rat_pow(&int(2), e))
    }
}

/// `A_k(z) = 2^{-n(z-1)} Π_j Π_{i=1}^j 1/(z+k-1-j+2i)
///   · Π_j Π_{i=0}^{(k-k_j)/2-1} (z-(k-1-j-2i))/(z+(k-1-j-2i))`.
pub fn a_k(ctx: &ArchContext) -> AkFunction {
    let n = ctx.n as i64;
    let k = ctx.k();
    let mut f = QRatFun::one();
    for j in 1..=n {
        for i in 1..=j {
            f = &f * &QRatFun::simple_pole(int(-(k - 1 - j + 2 * i)));
        }
    }
    for j in 1..=n {
        let m = (k - ctx.k_j(j as usize)) / 2;
        for i in 0..m {
            let c = k - 1 - j - 2 * i;
            f = &f * &QRatFun::linear_ratio(int(c), int(-c));
        }
    }
    AkFunction { n: ctx.n, two_exp_z: int(-n), two_exp_const: int(n), rational: f }
}

/// The β-ratio route: `γ_n(z+k)/Π(m-1)! · Π_j β(ℓ_j,s)/β(k-j,s)` with
/// `t = (z+1)/2` substituted into each ratio.
pub fn composed_route(ctx: &ArchContext) -> Result<QRatFun> {
    let k = ctx.k();
    let gamma_shift = gamma_n(ctx.n).compose_affine(&int(1), &int(k));
    let mut f = &gamma_shift * &QRatFun::constant(prod_factorials(ctx.n).recip());
    for (idx, &l) in ctx.lambda.as_slice().iter().enumerate() {
        let ratio = beta_ratio(l, k, idx + 1)?;
        f = &f * &ratio.compose_affine(&rat(1, 2), &rat(1, 2));
    }
    Ok(f)
}

/// Exact value of the zeta integral for the scalar K-type:
/// phase `i^{nk}`, π-power part, and the power `2^{two_exp}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BValue {
    pub constant: ExactConstant,
    #[serde(serialize_with = "ser_rat")]
    pub two_exp: Rational,
}

fn ser_rat<S: serde::Serializer>(q: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(q))
}

impl BValue {
    pub fn to_complex(&self) -> (f64, f64) {
        let (re, im) = self.constant.to_complex();
        let t = 2f64.powf(crate::Scalar::to_f64(&self.two_exp));
        (re * t, im * t)
    }
}

/// `B_λ(s)` for `λ = (k-1, ..., k-n)`:
/// `π^{n(n+1)/2}/Π(m-1)! · i^{nk} · 2^{-n(2n+1)s+3n/2} · γ_n((2n+1)s - 1/2 + k)`.
pub fn b_lambda_scalar(n: usize, k: i64, s: &Rational) -> Result<BValue> {
    if k <= n as i64 {
        return Err(Error::InvalidParameter(format!("need k > n, got k = {k}, n = {n}")));
    }
    let nn = n as i64;
    let arg = int(2 * nn + 1) * s.clone() - rat(1, 2) + int(k);
    let g = gamma_n(n).eval(&arg)?;
    let value = PiPower::new(g / prod_factorials(n), nn * (nn + 1) / 2);
    let phase = ((nn * k).rem_euclid(4)) as u8;
    let two_exp = -int(nn * (2 * nn + 1)) * s.clone() + rat(3 * nn, 2);
    Ok(BValue { constant: ExactConstant::new(value, phase), two_exp })
}

/// `C_k(s)` kept symbolic: the prefactor, the 2-power in `s`, `γ_n` in the
/// argument `(2n+1)s - 1/2 + k`, and the list of `m` for the factors
/// `β(m, s)` in the denominator.
#[derive(Clone, Debug, PartialEq)]
pub struct CkExpression {
    pub n: usize,
    pub k: i64,
    pub prefactor: PiPower,
    pub two_exp_s: Rational,
    pub two_exp_const: Rational,
    pub gamma: QRatFun,
    pub beta_denominators: Vec<i64>,
}

pub fn c_k_function(n: usize, k: i64) -> Result<CkExpression> {
    if k <= n as i64 {
        return Err(Error::InvalidParameter(format!("need k > n, got k = {k}, n = {n}")));
    }
    let nn = n as i64;
    Ok(CkExpression {
        n,
        k,
        prefactor: PiPower::new(prod_factorials(n).recip(), nn * (nn + 1) / 2),
        two_exp_s: -int(nn * (2 * nn + 1)),
        two_exp_const: rat(3 * nn, 2),
        gamma: gamma_n(n),
        beta_denominators: (1..=nn).map(|j| k - j).collect(),
    })
}

/// `B_λ(s) = i^{nk} (Π_j β(ℓ_j, s)) C_k(s)` after replacing each
/// `β(ℓ_j,s)/β(k-j,s)` by its rational expression: phase, π-power,
/// 2-power in `z`, and a rational function of `z`.
#[derive(Clone, Debug, PartialEq)]
pub struct BGeneral {
    pub phase: u8,
    pub pi_power: PiPower,
    pub two_exp_z: Rational,
    pub two_exp_const: Rational,
    pub rational: QRatFun,
}

pub fn b_lambda_general(ctx: &ArchContext) -> Result<BGeneral> {
    let ck = c_k_function(ctx.n, ctx.k())?;
    let nn = ctx.n as i64;
    // γ_n((2n+1)s - 1/2 + k) = γ_n(z + k).
    let gamma_z = ck.gamma.compose_affine(&int(1), &int(ck.k));
    let mut rational = gamma_z;
    for (idx, &l) in ctx.lambda.as_slice().iter().enumerate() {
        // Pair β(ℓ_j, s) with the denominator β(k - j, s) of C_k.
        debug_assert_eq!(ck.beta_denominators[idx], ck.k - (idx as i64 + 1));
        let ratio = beta_ratio(l, ck.k, idx + 1)?;
        rational = &rational * &ratio.compose_affine(&rat(1, 2), &rat(1, 2));
    }
    // 2^{a s + b} with s = (z + 1/2)/(2n+1).
    let denom = int(2 * nn + 1);
    let two_exp_z = ck.two_exp_s.clone() / denom.clone();
    let two_exp_const = ck.two_exp_const + ck.two_exp_s / denom * rat(1, 2);
    // Move the factorial product into the rational part.
    let pi_power = PiPower::new(Rational::one(), ck.prefactor.pi_exp());
    let rational = &rational * &QRatFun::constant(ck.prefactor.coeff().clone());
    Ok(BGeneral { phase: ctx.phase(), pi_power, two_exp_z, two_exp_const, rational })
}

/// The right-hand side `i^{nk} π^{n(n+1)/2} A_k(z)` in the same shape.
pub fn b_lambda_via_a_k(ctx: &ArchContext) -> BGeneral {
    let a = a_k(ctx);
    let nn = ctx.n as i64;
    BGeneral {
        phase: ctx.phase(),
        pi_power: PiPower::new(Rational::one(), nn * (nn + 1) / 2),
        two_exp_z: a.two_exp_z,
        two_exp_const: a.two_exp_const,
        rational: a.rational,
    }
}

impl BGeneral {
    /// Value at rational `s` as phase, π-power part and 2-exponent.
    pub fn eval_s(&self, s: &Rational, n: usize) -> Result<BValue> {
        let z = int(2 * n as i64 + 1) * s.clone() - rat(1, 2);
        let r = self.rational.eval(&z)?;
        Ok(BValue {
            constant: ExactConstant::new(self.pi_power.clone() * r, self.phase),
            two_exp: self.two_exp_z.clone() * z + self.two_exp_const.clone(),
        })
    }
}

/// `α_n = (4π)^{n(n+1)/2} / Π_{m=1}^n (m-1)!`.
pub fn alpha_n(n: usize) -> PiPower {
    let e = (n * (n + 1) / 2) as i64;
    PiPower::new(rat_pow(&int(4), e) / prod_factorials(n), e)
}

/// `ζ(2k) = (-1)^{k+1} B_{2k} (2π)^{2k} / (2 (2k)!)`.
pub fn zeta_even(k: usize) -> PiPower {
    let b = bernoulli(2 * k);
    let sign = if k % 2 == 1 { int(1) } else { int(-1) };
    let coeff = sign * b * rat_pow(&int(2), 2 * k as i64)
        / (int(2) * Rational::from_integer(factorial(2 * k as u64)));
    PiPower::new(coeff, 2 * k as i64)
}

/// `vol(Sp_{2n}(Z) \ Sp_{2n}(R)) = 2 Π_{k=1}^n π^{-k} (k-1)! ζ(2k)`.
pub fn siegel_volume(n: usize) -> PiPower {
    let mut v = PiPower::rational(int(2));
    for k in 1..=n {
        let term = PiPower::new(Rational::from_integer(factorial(k as u64 - 1)), -(k as i64)) * zeta_even(k);
        v = v * term;
    }
    v
}

/// Critical points `1 <= r <= k_n - n` with `r ≡ k_n - n (mod 2)`.
pub fn is_critical(ctx: &ArchContext, r: i64) -> bool {
    let top = ctx.k_j(ctx.n) - ctx.n as i64;
    r >= 1 && r <= top && (top - r) % 2 == 0
}

pub fn critical_points(ctx: &ArchContext) -> Vec<i64> {
    let top = ctx.k_j(ctx.n) - ctx.n as i64;
    (1..=top).filter(|r| (top - r) % 2 == 0).collect()
}

/// Level `N` as a list of `(p, m_p)`.
pub type Factorization = Vec<(u64, u32)>;

/// `c_{k,r,n,N} = Π_{p|N} vol(Γ(p^{m_p})) · π^{n(n+1)/2} / vol · A_k(r-1)`,
/// using the default Siegel volume.
pub fn c_krn_n(kvec: &KTypeVector, r: i64, level: &Factorization) -> Result<Rational> {
    c_krn_n_with_volume(kvec, r, level, &siegel_volume(kvec.n()))
}

/// As [`c_krn_n`] with an explicit value for the volume of
/// `Sp_{2n}(Z) \ Sp_{2n}(R)`.
pub fn c_krn_n_with_volume(
    kvec: &KTypeVector,
    r: i64,
    level: &Factorization,
    volume: &PiPower,
) -> Result<Rational> {
    let ctx = ArchContext::new(kvec.clone())?;
    if !is_critical(&ctx, r) {
        return Err(Error::OutOfRange(format!(
            "r = {r} is not critical: need 1 <= r <= {} with matching parity",
            ctx.k_j(ctx.n) - ctx.n as i64
        )));
    }
    if volume.is_zero() {
        return Err(Error::InvalidParameter("volume must be nonzero".into()));
    }
    let nn = ctx.n as i64;
    let mut c = PiPower::new(Rational::one(), nn * (nn + 1) / 2) / volume.clone();
    for &(p, m) in level {
        c = c * principal_congruence_volume(ctx.n, p, m)?;
    }
    let a = a_k(&ctx).eval_integer(r - 1)?;
    let c = c * a;
    let Some(q) = c.as_rational() else {
        return Err(Error::IdentityViolation(format!("π-power did not cancel: {c}")));
    };
    if q.is_zero() {
        return Err(Error::IdentityViolation("constant vanished".into()));
    }
    Ok(q.clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kt(v: &[i64]) -> KTypeVector {
        KTypeVector::new(v.to_vec()).unwrap()
    }

    #[test]
    fn gamma_examples() {
        assert_eq!(gamma_n(1), QRatFun::simple_pole(int(0)));
        let g2 = &(&QRatFun::simple_pole(int(0)) * &QRatFun::simple_pole(int(1))) * &QRatFun::simple_pole(int(-1));
        assert_eq!(gamma_n(2), g2);
        assert_eq!(gamma_n(2).eval(&int(5)).unwrap(), rat(1, 120));
    }

    #[test]
    fn beta_ratio_examples() {
        assert_eq!(beta_ratio(9, 10, 1).unwrap(), QRatFun::one());
        assert_eq!(beta_ratio(1, 5, 2).unwrap(), QRatFun::linear_ratio(rat(3, 2), rat(-1, 2)));
        assert!(beta_ratio(2, 5, 2).is_err());
    }

    #[test]
    fn a_k_examples() {
        let a1 = a_k(&ArchContext::scalar(1, 6).unwrap());
        assert_eq!(a1.rational, QRatFun::simple_pole(int(-6)));
        assert_eq!((a1.two_exp_z.clone(), a1.two_exp_const.clone()), (int(-1), int(1)));
        let a = a_k(&ArchContext::scalar(2, 10).unwrap());
        assert_eq!(a.rational.eval(&int(7)).unwrap(), rat(1, 4896));
        assert_eq!(a.eval_integer(7).unwrap(), rat(1, 20054016));
    }

    #[test]
    fn b_scalar_examples() {
        let b = b_lambda_scalar(1, 2, &rat(1, 2)).unwrap();
        assert_eq!(b.constant.phase, 2);
        assert_eq!(b.constant.value, PiPower::new(rat(1, 3), 1));
        assert_eq!(b.two_exp, int(0));
        let (re, im) = b.to_complex();
        assert!((re + std::f64::consts::PI / 3.0).abs() < 1e-15 && im == 0.0);
        assert!(matches!(b_lambda_scalar(1, 2, &rat(-1, 2)), Err(Error::Pole(_))));
        assert!(b_lambda_scalar(2, 10, &rat(1, 2)).is_ok());
    }

    #[test]
    fn routes_agree_for_4_1() {
        let ctx = ArchContext::new(kt(&[5, 3])).unwrap();
        assert_eq!(b_lambda_general(&ctx).unwrap(), b_lambda_via_a_k(&ctx));
        assert_eq!(composed_route(&ctx).unwrap(), a_k(&ctx).rational);
    }

    #[test]
    fn scalar_general_matches_scalar_value() {
        let ctx = ArchContext::scalar(2, 10).unwrap();
        let s = rat(1, 2);
        let general = b_lambda_general(&ctx).unwrap().eval_s(&s, 2).unwrap();
        assert_eq!(general, b_lambda_scalar(2, 10, &s).unwrap());
    }

    #[test]
    fn alpha_and_volume() {
        assert_eq!(alpha_n(1), PiPower::new(int(4), 1));
        assert_eq!(alpha_n(2), PiPower::new(int(64), 3));
        assert_eq!(alpha_n(3), PiPower::new(rat(4096, 2), 6));
        assert_eq!(siegel_volume(1), PiPower::new(rat(1, 3), 1));
        assert_eq!(siegel_volume(2), PiPower::new(rat(1, 270), 3));
        assert_eq!(siegel_volume(3).pi_exp(), 6);
        assert_eq!(zeta_even(1), PiPower::new(rat(1, 6), 2));
    }

    #[test]
    fn c_constant_examples() {
        let k = kt(&[10, 10]);
        assert_eq!(c_krn_n(&k, 8, &vec![]).unwrap(), rat(270, 20054016));
        assert_eq!(c_krn_n(&k, 8, &vec![(2, 1)]).unwrap(), rat(270, 20054016) / int(720));
        assert!(c_krn_n(&k, 7, &vec![]).is_err());
        assert!(c_krn_n(&k, 10, &vec![]).is_err());
    }
}
