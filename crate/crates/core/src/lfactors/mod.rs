//! Local L-factors, Dirichlet L-values and congruence-subgroup volumes.

pub mod character;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

pub use character::{
    factorize, gauss_sum, is_prime, primes_up_to, unit_group_generators, CharacterInfo, DirichletCharacter,
};

use crate::algebra::scalar::{int, rat_pow, Scalar};
use crate::algebra::special::bernoulli_table;
use crate::algebra::PiPower;
use crate::arch::{c_krn_n_with_volume, siegel_volume, Factorization};
use crate::error::{Error, Result};
use crate::hecke::SatakeData;
use crate::ktype::KTypeVector;
use crate::{QPoly, QRatFun, Rational};

/// An Euler factor `1 / P(T)` in `T = q^{-s}`, with `P(0) = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalLFactor {
    pub q: u64,
    pub denominator: QPoly,
}

impl LocalLFactor {
    pub fn degree(&self) -> usize {
        self.denominator.degree().unwrap_or(0)
    }

    /// The factor as a canonical rational function of `T`.
    pub fn as_ratfun(&self) -> QRatFun {
        QRatFun::new(QPoly::one(), self.denominator.clone()).expect("nonzero denominator")
    }

    pub fn eval_t(&self, t: &Rational) -> Result<Rational> {
        let d = self.denominator.eval(t);
        if d.is_zero() {
            return Err(Error::Pole(format!("local L-factor at q = {} has a pole", self.q)));
        }
        Ok(d.recip())
    }

    /// Exact value at integer `s`.
    pub fn eval_s(&self, s: i64) -> Result<Rational> {
        self.eval_t(&rat_pow(&int(self.q as i64), -s))
    }
}

/// `1 / ((1 - χT) Π_i (1 - χα_i T)(1 - χα_i^{-1} T))`.
pub fn standard_lfactor(sd: &SatakeData) -> LocalLFactor {
    let one = Rational::one();
    let lin = |a: Rational| QPoly::new(vec![one.clone(), -a]);
    let mut d = lin(sd.chi.clone());
    for a in &sd.alphas {
        d = &d * &lin(sd.chi.clone() * a.clone());
        d = &d * &lin(sd.chi.clone() / a.clone());
    }
    LocalLFactor { q: sd.q, denominator: d }
}

/// `1 / (1 - χ(ϖ) T)`.
pub fn abelian_lfactor(q: u64, chi: Rational) -> LocalLFactor {
    LocalLFactor { q, denominator: QPoly::new(vec![Rational::one(), -chi]) }
}

/// A complex value with a bound on its absolute error.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LValue {
    pub re: f64,
    pub im: f64,
    pub error_bound: f64,
}

impl LValue {
    pub fn new(v: Complex64, error_bound: f64) -> Self {
        LValue { re: v.re, im: v.im, error_bound }
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }
}

/// How to evaluate `L(s, χ)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "method")]
pub enum LMethod {
    /// Euler product over primes `p <= primes_up_to`.
    EulerTruncated { primes_up_to: u64 },
    /// Hurwitz zeta decomposition with `terms` summed terms before the
    /// Euler-Maclaurin tail.
    Hurwitz { terms: usize },
}

impl Default for LMethod {
    fn default() -> Self {
        LMethod::Hurwitz { terms: 32 }
    }
}

const EM_CORRECTIONS: usize = 12;

/// `ζ(s, x)` for real `s > 1`, `x > 0`, with an error bound of twice the
/// first omitted Euler-Maclaurin term.
pub fn hurwitz_zeta(s: f64, x: f64, terms: usize) -> (f64, f64) {
    let bern = bernoulli_table(2 * EM_CORRECTIONS + 2);
    let mut sum = 0.0;
    for k in 0..terms {
        sum += (x + k as f64).powf(-s);
    }
    let y = x + terms as f64;
    sum += y.powf(1.0 - s) / (s - 1.0) + 0.5 * y.powf(-s);
    let mut rising = s; // s (s+1) ... (s + 2j - 2)
    let mut fact = 2.0; // (2j)!
    let mut omitted = 0.0;
    for j in 1..=EM_CORRECTIONS + 1 {
        let term = bern[2 * j].to_f64() / fact * rising * y.powf(-s - 2.0 * j as f64 + 1.0);
        if j <= EM_CORRECTIONS {
            sum += term;
        } else {
            omitted = term.abs();
        }
        rising *= (s + 2.0 * j as f64 - 1.0) * (s + 2.0 * j as f64);
        fact *= (2 * j + 1) as f64 * (2 * j + 2) as f64;
    }
    (sum, 2.0 * omitted + 4.0 * f64::EPSILON * (terms as f64 + 2.0) * sum.abs())
}

/// `L(s, χ)` for real `s > 1`.
pub fn dirichlet_lvalue(chi: &DirichletCharacter, s: f64, method: LMethod) -> Result<LValue> {
    if !(s > 1.0) {
        return Err(Error::OutOfRange(format!("L-values need s > 1, got {s}")));
    }
    match method {
        LMethod::EulerTruncated { primes_up_to: bound } => {
            let mut prod = Complex64::new(1.0, 0.0);
            let primes = primes_up_to(bound);
            for &p in &primes {
                let c = chi.value(p as i64);
                prod /= Complex64::new(1.0, 0.0) - c * (p as f64).powf(-s);
            }
            let pf = bound.max(1) as f64;
            let delta = pf.powf(1.0 - s) / ((s - 1.0) * (1.0 - (pf + 1.0).powf(-s)));
            let rounding = 4.0 * f64::EPSILON * (primes.len() as f64 + 1.0) * prod.norm();
            Ok(LValue::new(prod, prod.norm() * delta.exp_m1() + rounding))
        }
        LMethod::Hurwitz { terms } => {
            let n = chi.modulus();
            let nf = n as f64;
            let mut sum = Complex64::new(0.0, 0.0);
            let mut err = 0.0;
            for a in 1..=n {
                let c = chi.value(a as i64);
                if c.norm() == 0.0 {
                    continue;
                }
                let (z, e) = hurwitz_zeta(s, a as f64 / nf, terms);
                sum += c * z;
                err += e;
            }
            let scale = nf.powf(-s);
            Ok(LValue::new(sum * scale, err * scale + 4.0 * f64::EPSILON * (sum * scale).norm()))
        }
    }
}

/// `L(s, χ) Π_{p ∈ omit} (1 - χ(p) p^{-s})`.
pub fn partial_l_omit(chi: &DirichletCharacter, s: f64, omit: &[u64], method: LMethod) -> Result<LValue> {
    let full = dirichlet_lvalue(chi, s, method)?;
    let mut f = Complex64::new(1.0, 0.0);
    for &p in omit {
        if !is_prime(p) {
            return Err(Error::InvalidParameter(format!("{p} is not prime")));
        }
        f *= Complex64::new(1.0, 0.0) - chi.value(p as i64) * (p as f64).powf(-s);
    }
    let v = full.value() * f;
    Ok(LValue::new(v, full.error_bound * f.norm() + 4.0 * f64::EPSILON * v.norm()))
}

/// `|Sp_{2n}(Z/p^m)| = p^{(m-1)n(2n+1)} p^{n²} Π_{i=1}^n (p^{2i} - 1)`.
pub fn sp_order_mod(n: usize, p: u64, m: u32) -> Result<BigInt> {
    if !is_prime(p) {
        return Err(Error::InvalidParameter(format!("{p} is not prime")));
    }
    if m == 0 {
        return Err(Error::InvalidParameter("exponent m must be at least 1".into()));
    }
    let pb = BigInt::from(p);
    let nn = n as u32;
    let mut order = num_traits::pow(pb.clone(), ((m - 1) * nn * (2 * nn + 1) + nn * nn) as usize);
    for i in 1..=nn {
        order *= num_traits::pow(pb.clone(), 2 * i as usize) - 1;
    }
    Ok(order)
}

/// Volume of the principal congruence subgroup of level `p^m` when
/// `Sp_{2n}(Z_p)` has volume one.
pub fn principal_congruence_volume(n: usize, p: u64, m: u32) -> Result<Rational> {
    Ok(Rational::from_integer(sp_order_mod(n, p, m)?).recip())
}

/// Brute-force count of `g ∈ M_{2n}(F_p)` with `ᵗg J g = J`.
pub fn sp_order_brute_force(n: usize, p: u64) -> u64 {
    let size = 2 * n;
    let cells = size * size;
    let total = (p as u128).pow(cells as u32);
    let j = |a: usize, b: usize| -> i64 {
        if b == a + n && a < n {
            1
        } else if a == b + n && b < n {
            -1
        } else {
            0
        }
    };
    let pi = p as i64;
    let mut count = 0u64;
    let mut g = vec![0i64; cells];
    for idx in 0..total {
        let mut rest = idx;
        for c in g.iter_mut() {
            *c = (rest % p as u128) as i64;
            rest /= p as u128;
        }
        // ᵗgJg: column pairs (a, b) must satisfy ω(g_a, g_b) = J_ab.
        let ok = (0..size).all(|a| {
            (a + 1..size).all(|b| {
                let mut w = 0i64;
                for i in 0..n {
                    w += g[i * size + a] * g[(i + n) * size + b] - g[(i + n) * size + a] * g[i * size + b];
                }
                (w - j(a, b)).rem_euclid(pi) == 0
            })
        });
        if ok {
            count += 1;
        }
    }
    count
}

/// Inputs of the assembly of `C_N(π, χ, r)` for `n = 2`.
#[derive(Clone, Debug)]
pub struct CnInput {
    pub kvec: KTypeVector,
    pub r: i64,
    /// Satake data at the primes `p ∤ N`, `p <= prime_bound`.
    pub satake_table: BTreeMap<u64, SatakeData>,
    pub chi: DirichletCharacter,
    pub level: Factorization,
    pub prime_bound: u64,
    pub method: LMethod,
    /// Overrides the volume of `Sp_4(Z) \ Sp_4(R)`.
    pub siegel_volume: Option<PiPower>,
}

/// `C_N = (-1)^k π^{2r+4-2k} c_{k,r,2,N} L^N(r, π⊠χ) /
/// (L^N(r+2, χ) L^N(2r, χ²) L^N(2r+2, χ²))`.
#[derive(Clone, Debug, Serialize)]
pub struct CnValue {
    pub prefactor: PiPower,
    #[serde(serialize_with = "crate::algebra::scalar::serde_rational::serialize")]
    pub c_krn: Rational,
    pub numerator: LValue,
    pub denominators: [LValue; 3],
    pub value: LValue,
}

pub fn c_n_assembly(input: &CnInput) -> Result<CnValue> {
    let n = input.kvec.n();
    if n != 2 {
        return Err(Error::InvalidParameter(format!("assembly is for n = 2, got n = {n}")));
    }
    let r = input.r;
    if r <= 2 {
        return Err(Error::OutOfRange(format!("r = {r} is outside the range of absolute convergence")));
    }
    let level_n: u64 = input.level.iter().map(|&(p, m)| p.pow(m)).product();
    if level_n % input.chi.modulus() != 0 {
        return Err(Error::InvalidParameter(format!(
            "character modulus {} does not divide N = {level_n}",
            input.chi.modulus()
        )));
    }
    let bad: Vec<u64> = input.level.iter().map(|&(p, _)| p).collect();
    let volume = input.siegel_volume.clone().unwrap_or_else(|| siegel_volume(2));
    let c_krn = c_krn_n_with_volume(&input.kvec, r, &input.level, &volume)?;
    let k = input.kvec.as_slice()[0];
    let sign = if k % 2 == 0 { int(1) } else { int(-1) };
    let prefactor = PiPower::new(sign, 2 * r + 4 - 2 * k);

    // Finite Euler product over the supplied primes.
    let mut num = Complex64::new(1.0, 0.0);
    let mut num_terms = 0usize;
    for p in primes_up_to(input.prime_bound) {
        if bad.contains(&p) {
            continue;
        }
        let sd = input
            .satake_table
            .get(&p)
            .ok_or_else(|| Error::InvalidParameter(format!("no Satake data supplied for p = {p}")))?;
        if sd.q != p || sd.n != 2 {
            return Err(Error::InvalidParameter(format!("Satake data for p = {p} has q = {}, n = {}", sd.q, sd.n)));
        }
        let t = (p as f64).powf(-(r as f64));
        let c = input.chi.value(p as i64);
        let one = Complex64::new(1.0, 0.0);
        let mut d = one - c * t;
        for a in &sd.alphas {
            let a = a.to_f64();
            d *= (one - c * a * t) * (one - c * t / a);
        }
        num /= d;
        num_terms += 1;
    }
    let numerator = LValue::new(num, 8.0 * f64::EPSILON * (num_terms as f64 + 1.0) * num.norm());

    let chi2 = input.chi.square();
    let rf = r as f64;
    let denominators = [
        partial_l_omit(&input.chi, rf + 2.0, &bad, input.method)?,
        partial_l_omit(&chi2, 2.0 * rf, &bad, input.method)?,
        partial_l_omit(&chi2, 2.0 * rf + 2.0, &bad, input.method)?,
    ];
    let den: Complex64 = denominators.iter().map(LValue::value).product();
    let scalar = prefactor.to_f64() * c_krn.to_f64();
    let v = num * scalar / den;

    let mut growth = 1.0 + numerator.error_bound / num.norm().max(f64::MIN_POSITIVE);
    for d in &denominators {
        let delta = d.error_bound / d.value().norm();
        if delta >= 1.0 {
            return Err(Error::Divergent("denominator L-value not resolved by its error bound".into()));
        }
        growth /= 1.0 - delta;
    }
    let error_bound = v.norm() * (growth - 1.0) + 8.0 * f64::EPSILON * v.norm();
    Ok(CnValue { prefactor, c_krn, numerator, denominators, value: LValue::new(v, error_bound) })
}

impl CnValue {
    pub fn value_f64(&self) -> f64 {
        self.value.re
    }
}

/// The integer `p^m` for a factorization entry.
pub fn level_value(level: &Factorization) -> u64 {
    level.iter().map(|&(p, m)| p.pow(m)).product()
}

/// `N` as `(p, m_p)` pairs.
pub fn level_factorization(n: u64) -> Factorization {
    factorize(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::scalar::rat;
    use std::f64::consts::PI;

    #[test]
    fn standard_factor_examples() {
        let one = Rational::one();
        let sd = SatakeData::new(2, vec![one.clone()], one.clone()).unwrap();
        let f = standard_lfactor(&sd);
        assert_eq!(f.denominator, QPoly::new(vec![int(1), int(-3), int(3), int(-1)]));
        let a = rat(2, 3);
        let sd = SatakeData::new(7, vec![a.clone()], one.clone()).unwrap();
        let want = &(&QPoly::new(vec![one.clone(), -one.clone()]) * &QPoly::new(vec![one.clone(), -a.clone()]))
            * &QPoly::new(vec![one.clone(), -a.recip()]);
        assert_eq!(standard_lfactor(&sd).denominator, want);
        let sd = SatakeData::new(5, vec![int(2), int(3)], one).unwrap();
        let f = standard_lfactor(&sd);
        assert_eq!(f.degree(), 5);
        let t = rat(1, 25);
        let mut d = Rational::one() - t.clone();
        for a in [int(2), int(3)] {
            d = d * (Rational::one() - a.clone() * t.clone()) * (Rational::one() - t.clone() / a);
        }
        assert_eq!(f.eval_s(2).unwrap(), d.recip());
    }

    #[test]
    fn zeta_two() {
        let chi = DirichletCharacter::trivial(1);
        let v = dirichlet_lvalue(&chi, 2.0, LMethod::Hurwitz { terms: 20 }).unwrap();
        assert!((v.re - PI * PI / 6.0).abs() < 1e-8);
        assert!(v.error_bound < 1e-8);
        assert!(dirichlet_lvalue(&DirichletCharacter::new(4, vec![1]).unwrap(), 1.0, LMethod::default()).is_err());
    }

    #[test]
    fn methods_agree_mod_3() {
        let chi = DirichletCharacter::new(3, vec![1]).unwrap();
        let e = dirichlet_lvalue(&chi, 2.0, LMethod::EulerTruncated { primes_up_to: 10_000 }).unwrap();
        let h = dirichlet_lvalue(&chi, 2.0, LMethod::Hurwitz { terms: 20 }).unwrap();
        assert!((e.value() - h.value()).norm() <= e.error_bound + h.error_bound);
    }

    #[test]
    fn omitting_primes() {
        let chi = DirichletCharacter::trivial(1);
        let m = LMethod::default();
        let full = dirichlet_lvalue(&chi, 2.0, m).unwrap();
        assert_eq!(partial_l_omit(&chi, 2.0, &[], m).unwrap().value(), full.value());
        let v = partial_l_omit(&chi, 2.0, &[2], m).unwrap();
        assert!((v.re - PI * PI / 6.0 * 0.75).abs() < 1e-10);
        let v = partial_l_omit(&chi, 4.0, &[2, 3], m).unwrap();
        let z4 = PI.powi(4) / 90.0;
        assert!((v.re - z4 * (1.0 - 1.0 / 16.0) * (1.0 - 1.0 / 81.0)).abs() < 1e-10);
    }

    #[test]
    fn group_orders() {
        assert_eq!(sp_order_mod(1, 2, 1).unwrap(), BigInt::from(6));
        assert_eq!(principal_congruence_volume(1, 2, 1).unwrap(), rat(1, 6));
        assert_eq!(sp_order_mod(2, 2, 1).unwrap(), BigInt::from(720));
        assert_eq!(sp_order_mod(1, 2, 2).unwrap(), BigInt::from(48));
        assert_eq!(sp_order_brute_force(1, 2), 6);
        assert_eq!(sp_order_brute_force(1, 3), 24);
    }

    fn toy_input(r: i64, bound: u64) -> CnInput {
        let table = primes_up_to(bound)
            .into_iter()
            .map(|p| (p, SatakeData::trivial(2, p).unwrap()))
            .collect();
        CnInput {
            kvec: KTypeVector::new(vec![10, 10]).unwrap(),
            r,
            satake_table: table,
            chi: DirichletCharacter::trivial(1),
            level: vec![],
            prime_bound: bound,
            method: LMethod::default(),
            siegel_volume: None,
        }
    }

    #[test]
    fn assembly_empty_table() {
        let v = c_n_assembly(&toy_input(8, 1)).unwrap();
        assert_eq!(v.numerator.re, 1.0);
        let z = |s: f64| dirichlet_lvalue(&DirichletCharacter::trivial(1), s, LMethod::default()).unwrap().re;
        let want = PI.powi(20 - 20) * (270.0 / 20054016.0) / (z(10.0) * z(16.0) * z(18.0));
        assert!((v.value.re - want).abs() <= v.value.error_bound + 1e-15 * want.abs());
    }

    #[test]
    fn assembly_toy_table() {
        let v = c_n_assembly(&toy_input(8, 10)).unwrap();
        let mut num = 1.0;
        for p in [2.0f64, 3.0, 5.0, 7.0] {
            for shift in [-2.0, -1.0, 0.0, 1.0, 2.0] {
                num /= 1.0 - p.powf(-(8.0 + shift));
            }
        }
        assert!((v.numerator.re - num).abs() < 1e-13);
        assert!(c_n_assembly(&toy_input(2, 10)).is_err());
        let mut missing = toy_input(8, 10);
        missing.satake_table.remove(&5);
        assert!(c_n_assembly(&missing).is_err());
    }
}
