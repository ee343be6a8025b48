//! Floating-point checks of the exact archimedean formulas.
//!
//! Each oracle maps its integral to a finite domain and evaluates it with
//! the method chosen in [`QuadratureConfig`]. The exact values they are
//! compared against live in [`crate::arch`].

pub mod quadrature;

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};
use statrs::function::gamma::{gamma, ln_gamma};

use crate::error::{Error, Result};
use quadrature::{adaptive, adaptive_2d, stratified_mc, tensor_gk, Estimate};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum QuadratureMethod {
    Adaptive,
    TensorProduct,
    MonteCarlo,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    pub method: QuadratureMethod,
    /// Evaluation budget: panels for the deterministic rules, samples for
    /// Monte Carlo.
    pub budget: u64,
    pub seed: u64,
    /// Upper cutoff replacing infinity where a truncated domain is used.
    pub cutoff: f64,
    pub tolerance: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig { method: QuadratureMethod::Adaptive, budget: 4000, seed: 7, cutoff: 1e3, tolerance: 1e-10 }
    }
}

impl QuadratureConfig {
    pub fn adaptive(tolerance: f64) -> Self {
        QuadratureConfig { tolerance, ..Default::default() }
    }

    pub fn monte_carlo(budget: u64, seed: u64) -> Self {
        QuadratureConfig { method: QuadratureMethod::MonteCarlo, budget, seed, ..Default::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.budget == 0 {
            return Err(Error::InvalidParameter("quadrature budget must be positive".into()));
        }
        if !(self.cutoff > 1.0) {
            return Err(Error::InvalidParameter(format!("cutoff R = {} must exceed 1", self.cutoff)));
        }
        if !(self.tolerance >= 0.0) {
            return Err(Error::InvalidParameter("tolerance must be nonnegative".into()));
        }
        Ok(())
    }

    fn max_panels(&self) -> usize {
        self.budget.clamp(16, 1 << 20) as usize
    }

    /// Panels per axis for the tensor rule, keeping the total near budget.
    fn tensor_panels(&self, dims: u32) -> usize {
        let per_axis = (self.budget as f64).powf(1.0 / dims as f64) / 15.0;
        (per_axis.floor() as usize).max(1)
    }

    fn tol(&self) -> f64 {
        self.tolerance.max(1e-14)
    }
}

fn integrate_1d<G: Fn(f64) -> f64 + Sync>(f: &G, a: f64, b: f64, cfg: &QuadratureConfig) -> Estimate<f64> {
    match cfg.method {
        QuadratureMethod::Adaptive => adaptive(f, a, b, cfg.tol() * 1e-3, cfg.tol(), cfg.max_panels()),
        QuadratureMethod::TensorProduct => tensor_gk(&|p: &[f64]| f(p[0]), &[(a, b)], cfg.tensor_panels(1)),
        QuadratureMethod::MonteCarlo => {
            let e = stratified_mc(&|p: &[f64]| f(a + (b - a) * p[0]), 1, cfg.budget, cfg.seed);
            Estimate { value: e.value * (b - a), error: e.error * (b - a).abs(), evaluations: e.evaluations }
        }
    }
}

fn integrate_2d<G: Fn(f64, f64) -> f64 + Sync>(
    f: &G,
    x: (f64, f64),
    y: (f64, f64),
    cfg: &QuadratureConfig,
) -> Estimate<f64> {
    match cfg.method {
        QuadratureMethod::Adaptive => adaptive_2d(f, x, y, cfg.tol(), cfg.max_panels()),
        QuadratureMethod::TensorProduct => tensor_gk(&|p: &[f64]| f(p[0], p[1]), &[x, y], cfg.tensor_panels(2)),
        QuadratureMethod::MonteCarlo => {
            let (wx, wy) = (x.1 - x.0, y.1 - y.0);
            let e = stratified_mc(&|p: &[f64]| f(x.0 + wx * p[0], y.0 + wy * p[1]), 2, cfg.budget, cfg.seed);
            let area = (wx * wy).abs();
            Estimate { value: e.value * area, error: e.error * area, evaluations: e.evaluations }
        }
    }
}

/// `∫_{t_1 > ... > t_n > 1} Π_{i<j}(t_i² - t_j²) (Π t_j)^{-z-n} dt` for
/// `n ∈ {1, 2}`, computed in the variables `u_j = 1/t_j`.
pub fn quad_selberg(n: usize, z: f64, cfg: &QuadratureConfig) -> Result<Estimate<f64>> {
    cfg.validate()?;
    if z <= (n + 1) as f64 {
        return Err(Error::Divergent(format!("quadrature needs z > {}, got z = {z}", n + 1)));
    }
    match n {
        1 => Ok(integrate_1d(&|u: f64| u.powf(z - 1.0), 0.0, 1.0, cfg)),
        // u_1 = v w, u_2 = v on the unit square; Jacobian v.
        2 => Ok(integrate_2d(
            &|v: f64, w: f64| v.powf(2.0 * z - 1.0) * (1.0 - w * w) * w.powf(z - 2.0),
            (0.0, 1.0),
            (0.0, 1.0),
            cfg,
        )),
        _ => Err(Error::InvalidParameter(format!("quadrature is implemented for n = 1, 2, got {n}"))),
    }
}

/// The same integral over `t_1 < R` in the original variables. Used to
/// check that the truncation error shrinks as `R` grows.
pub fn selberg_truncated(n: usize, z: f64, cutoff: f64, tol: f64) -> Result<f64> {
    if cutoff <= 1.0 {
        return Err(Error::InvalidParameter(format!("cutoff R = {cutoff} must exceed 1")));
    }
    match n {
        1 => Ok(adaptive(&|t: f64| t.powf(-z - 1.0), 1.0, cutoff, tol, tol, 4000).value),
        2 => {
            let f = |t1: f64, w: f64| {
                // t_2 = 1 + w (t_1 - 1), dt_2 = (t_1 - 1) dw
                let t2 = 1.0 + w * (t1 - 1.0);
                (t1 * t1 - t2 * t2) * (t1 * t2).powf(-z - 2.0) * (t1 - 1.0)
            };
            Ok(adaptive_2d(&f, (1.0, cutoff), (0.0, 1.0), tol, 4000).value)
        }
        _ => Err(Error::InvalidParameter(format!("quadrature is implemented for n = 1, 2, got {n}"))),
    }
}

/// `B(x, y) = ∫_0^∞ a^{x-1} (a+1)^{-x-y} da` with `a = tan²θ`.
pub fn quad_beta(x: f64, y: f64, cfg: &QuadratureConfig) -> Result<Estimate<f64>> {
    cfg.validate()?;
    if !(x > 0.0 && y > 0.0) {
        return Err(Error::OutOfRange(format!("beta integral needs x, y > 0, got ({x}, {y})")));
    }
    let f = |th: f64| {
        let (s, c) = th.sin_cos();
        if s <= 0.0 || c <= 0.0 {
            return 0.0;
        }
        2.0 * s.powf(2.0 * x - 1.0) * c.powf(2.0 * y - 1.0)
    };
    Ok(integrate_1d(&f, 0.0, FRAC_PI_2, cfg))
}

pub fn beta_reference(x: f64, y: f64) -> f64 {
    (ln_gamma(x) + ln_gamma(y) - ln_gamma(x + y)).exp()
}

fn ln_cosh(a: f64) -> f64 {
    a + (-2.0 * a).exp().ln_1p() - std::f64::consts::LN_2
}

fn ln_sinh_2a(a: f64) -> f64 {
    2.0 * a + (-(-4.0 * a).exp()).ln_1p() - std::f64::consts::LN_2
}

/// Integrate `exp(g(a))` over `a ∈ (0, ∞)` through `a = tan θ`.
fn half_line<G: Fn(f64) -> f64 + Sync>(log_integrand: &G, cfg: &QuadratureConfig) -> Estimate<f64> {
    let f = |th: f64| {
        if th <= 0.0 || th >= FRAC_PI_2 {
            return 0.0;
        }
        let a = th.tan();
        (log_integrand(a) + (1.0 + a * a).ln()).exp()
    };
    integrate_1d(&f, 0.0, FRAC_PI_2, cfg)
}

/// `|B_λ(s)|` for `n = 1` and scalar weight `k` as a KAK integral:
/// `4π ∫_0^∞ sinh(2a) (2 cosh a)^{-3(s+1/2)} cosh(a)^{-k} da`.
pub fn kak_zeta_n1(k: i64, s: f64, cfg: &QuadratureConfig) -> Result<Estimate<f64>> {
    cfg.validate()?;
    if k < 2 {
        return Err(Error::InvalidParameter(format!("need k >= 2, got {k}")));
    }
    if 3.0 * s - 0.5 + k as f64 <= 2.0 {
        return Err(Error::Divergent(format!("KAK integral needs 3s - 1/2 + k > 2, got s = {s}, k = {k}")));
    }
    let e = 3.0 * (s + 0.5);
    let g = |a: f64| ln_sinh_2a(a) - e * (std::f64::consts::LN_2 + ln_cosh(a)) - k as f64 * ln_cosh(a);
    let est = half_line(&g, cfg);
    Ok(Estimate { value: 4.0 * PI * est.value, error: 4.0 * PI * est.error, evaluations: est.evaluations })
}

/// Three evaluations of `∫ F(g) dg` for `F(g) = 2^{2k} / |a + d + i(c - b)|^{2k}`
/// on `Sp_2(R)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MeasureReport {
    pub k: i64,
    pub classical: Estimate<f64>,
    pub kak: Estimate<f64>,
    pub iwasawa: Estimate<f64>,
    /// `8π / (2k - 2)`.
    pub closed_form: f64,
}

impl MeasureReport {
    pub fn routes(&self) -> [(&'static str, Estimate<f64>); 3] {
        [("classical", self.classical), ("kak", self.kak), ("iwasawa", self.iwasawa)]
    }
}

fn tan_map(u: f64) -> Option<(f64, f64)> {
    if u <= 0.0 || u >= FRAC_PI_2 {
        return None;
    }
    let t = u.tan();
    Some((t, 1.0 + t * t))
}

pub fn measure_consistency_n1(k: i64, cfg: &QuadratureConfig) -> Result<MeasureReport> {
    cfg.validate()?;
    if k < 2 {
        return Err(Error::InvalidParameter(format!("need k >= 2, got {k}")));
    }
    let kf = k as f64;
    let two_2k = 2f64.powf(2.0 * kf);

    // Upper half plane with dx dy / y²; f(x + iy) = 2^{2k} y^k / ((1+y)² + x²)^k.
    // x >= 0 by symmetry, x = tan φ, y = tan ψ.
    let classical_f = |phi: f64, psi: f64| match (tan_map(phi), tan_map(psi)) {
        (Some((x, jx)), Some((y, jy))) => {
            2.0 * two_2k * (y.ln() * (kf - 2.0) - kf * ((1.0 + y) * (1.0 + y) + x * x).ln()).exp() * jx * jy
        }
        _ => 0.0,
    };
    let classical = integrate_2d(&classical_f, (0.0, FRAC_PI_2), (0.0, FRAC_PI_2), cfg);

    // α_1 ∫ sinh(2a) F(exp H) da with F(diag(e^a, e^-a)) = cosh(a)^{-2k}.
    let g = |a: f64| ln_sinh_2a(a) - 2.0 * kf * ln_cosh(a);
    let kak_inner = half_line(&g, cfg);
    let kak = Estimate {
        value: 4.0 * PI * kak_inner.value,
        error: 4.0 * PI * kak_inner.error,
        evaluations: kak_inner.evaluations,
    };

    // 2 ∫ da/a ∫ dx F(diag(a, 1/a) n(x)), |a + 1/a - i a x|² = (a + 1/a)² + a² x².
    let iwasawa_f = |psi: f64, phi: f64| match (tan_map(psi), tan_map(phi)) {
        (Some((a, ja)), Some((x, jx))) => {
            let b = a + 1.0 / a;
            2.0 * 2.0 * two_2k * (-kf * (b * b + a * a * x * x).ln()).exp() / a * ja * jx
        }
        _ => 0.0,
    };
    let iwasawa = integrate_2d(&iwasawa_f, (0.0, FRAC_PI_2), (0.0, FRAC_PI_2), cfg);

    Ok(MeasureReport { k, classical, kak, iwasawa, closed_form: 8.0 * PI / (2.0 * kf - 2.0) })
}

/// `∫_H y^λ (1+y+ix)^{-σ} (1+y-ix)^{-τ} y^{-2} dx dy` for real parameters.
pub fn neretin_n1(lambda: f64, sigma: f64, tau: f64, cfg: &QuadratureConfig) -> Result<Estimate<f64>> {
    cfg.validate()?;
    if !(lambda > 1.0) || !(sigma + tau - lambda > 0.0) || !(sigma > 0.0) || !(tau > 0.0) {
        return Err(Error::Divergent(format!(
            "needs λ > 1, σ, τ > 0 and σ + τ - λ > 0, got ({lambda}, {sigma}, {tau})"
        )));
    }
    // The imaginary part is odd in x, so integrate the real part over x >= 0.
    let f = |phi: f64, psi: f64| match (tan_map(phi), tan_map(psi)) {
        (Some((x, jx)), Some((y, jy))) => {
            let re = 1.0 + y;
            let r2 = re * re + x * x;
            let arg = x.atan2(re);
            let log_mod = (lambda - 2.0) * y.ln() - 0.5 * (sigma + tau) * r2.ln();
            2.0 * log_mod.exp() * ((tau - sigma) * arg).cos() * jx * jy
        }
        _ => 0.0,
    };
    Ok(integrate_2d(&f, (0.0, FRAC_PI_2), (0.0, FRAC_PI_2), cfg))
}

/// `2^{2-σ-τ} π Γ(λ-1) Γ(σ+τ-λ) / (Γ(σ) Γ(τ))`.
pub fn neretin_reference(lambda: f64, sigma: f64, tau: f64) -> f64 {
    2f64.powf(2.0 - sigma - tau) * PI * gamma(lambda - 1.0) * gamma(sigma + tau - lambda) / (gamma(sigma) * gamma(tau))
}
