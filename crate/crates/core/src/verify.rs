//! Runs the numerical oracles and a handful of exact identities and
//! collects the outcomes into a serializable report.

use std::f64::consts::PI;
use std::str::FromStr;

use serde::Serialize;

use crate::algebra::{int, rat, Scalar};
use crate::arch::{a_k, b_lambda_scalar, composed_route, ArchContext};
use crate::error::{Error, Result};
use crate::hecke::{unramified_zeta_closed, unramified_zeta_series, EvaluationPoint, SatakeData};
use crate::ktype::{blattner_multiplicity, parity_valid_parameters, KTypeVector};
use crate::lfactors::{gauss_sum, sp_order_brute_force, sp_order_mod, DirichletCharacter};
use crate::oracles::quadrature::Estimate;
use crate::oracles::{
    beta_reference, kak_zeta_n1, measure_consistency_n1, neretin_n1, neretin_reference, quad_beta, quad_selberg,
    QuadratureConfig,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    All,
    Selberg,
    Beta,
    Kak,
    Measure,
    Neretin,
    Exact,
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "all" => Suite::All,
            "selberg" => Suite::Selberg,
            "beta" => Suite::Beta,
            "kak" => Suite::Kak,
            "measure" => Suite::Measure,
            "neretin" => Suite::Neretin,
            "exact" => Suite::Exact,
            other => return Err(Error::Parse(format!("unknown suite '{other}'"))),
        })
    }
}

/// Monte Carlo sample budget used by the Selberg check.
pub const MC_BUDGET: u64 = 10_000_000;
pub const ADAPTIVE_TOLERANCE: f64 = 1e-6;
pub const MC_TOLERANCE: f64 = 1e-4;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub suite: &'static str,
    pub name: String,
    pub estimate: f64,
    pub error_bound: f64,
    pub reference: f64,
    pub relative_difference: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl Check {
    /// A numerical comparison passes when the relative difference is
    /// strictly below the tolerance, so a zero tolerance always fails.
    fn numeric(suite: &'static str, name: String, est: Estimate<f64>, reference: f64, tolerance: f64) -> Self {
        let rel = (est.value - reference).abs() / reference.abs().max(f64::MIN_POSITIVE);
        Check {
            suite,
            name,
            estimate: est.value,
            error_bound: est.error,
            reference,
            relative_difference: rel,
            tolerance,
            passed: rel < tolerance,
        }
    }

    /// An exact identity: passes iff it holds, independent of tolerance.
    fn exact(suite: &'static str, name: String, holds: bool, value: f64) -> Self {
        Check {
            suite,
            name,
            estimate: value,
            error_bound: 0.0,
            reference: value,
            relative_difference: if holds { 0.0 } else { f64::INFINITY },
            tolerance: 0.0,
            passed: holds,
        }
    }

    fn failed(suite: &'static str, name: String, err: &Error) -> Self {
        Check {
            suite,
            name: format!("{name}: {err}"),
            estimate: f64::NAN,
            error_bound: f64::NAN,
            reference: f64::NAN,
            relative_difference: f64::INFINITY,
            tolerance: 0.0,
            passed: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    pub suite: Suite,
    pub seed: u64,
    pub checks: Vec<Check>,
    pub passed: bool,
}

pub struct VerifyOptions {
    pub seed: u64,
    /// Overrides every per-check tolerance.
    pub tolerance: Option<f64>,
    pub mc_budget: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { seed: 7, tolerance: None, mc_budget: MC_BUDGET }
    }
}

fn push(checks: &mut Vec<Check>, suite: &'static str, name: String, r: Result<Check>) {
    match r {
        Ok(c) => checks.push(c),
        Err(e) => checks.push(Check::failed(suite, name, &e)),
    }
}

pub fn run(suite: Suite, opts: &VerifyOptions) -> VerifyReport {
    let tol = |default: f64| opts.tolerance.unwrap_or(default);
    let adaptive = QuadratureConfig::adaptive(1e-11);
    let mut checks = Vec::new();
    let wants = |s: Suite| suite == Suite::All || suite == s;

    if wants(Suite::Selberg) {
        push(&mut checks, "selberg", "n=1 z=4 adaptive".into(), {
            quad_selberg(1, 4.0, &adaptive)
                .map(|e| Check::numeric("selberg", "n=1 z=4 adaptive".into(), e, 0.25, tol(ADAPTIVE_TOLERANCE)))
        });
        push(&mut checks, "selberg", "n=2 z=5 adaptive".into(), {
            quad_selberg(2, 5.0, &adaptive).map(|e| {
                Check::numeric("selberg", "n=2 z=5 adaptive".into(), e, 1.0 / 120.0, tol(ADAPTIVE_TOLERANCE))
            })
        });
        let mc = QuadratureConfig::monte_carlo(opts.mc_budget, opts.seed);
        push(&mut checks, "selberg", "n=2 z=5 monte carlo".into(), {
            quad_selberg(2, 5.0, &mc)
                .map(|e| Check::numeric("selberg", "n=2 z=5 monte carlo".into(), e, 1.0 / 120.0, tol(MC_TOLERANCE)))
        });
    }
    if wants(Suite::Beta) {
        for (x, y) in [(1.0, 1.0), (2.0, 3.0), (0.5, 0.5), (2.5, 1.5)] {
            let name = format!("B({x}, {y})");
            let r = quad_beta(x, y, &adaptive)
                .map(|e| Check::numeric("beta", name.clone(), e, beta_reference(x, y), tol(ADAPTIVE_TOLERANCE)));
            push(&mut checks, "beta", name, r);
        }
    }
    if wants(Suite::Kak) {
        for (k, s) in [(4i64, rat(1, 2)), (2, rat(3, 2)), (6, int(1))] {
            let name = format!("k={k} s={s}");
            let r = (|| {
                let (re, im) = b_lambda_scalar(1, k, &s)?.to_complex();
                let e = kak_zeta_n1(k, s.to_f64(), &adaptive)?;
                Ok(Check::numeric("kak", name.clone(), e, re.hypot(im), tol(ADAPTIVE_TOLERANCE)))
            })();
            push(&mut checks, "kak", name, r);
        }
    }
    if wants(Suite::Measure) {
        for k in [2i64, 3, 4] {
            match measure_consistency_n1(k, &adaptive) {
                Ok(report) => {
                    for (route, e) in report.routes() {
                        checks.push(Check::numeric(
                            "measure",
                            format!("k={k} {route}"),
                            e,
                            report.closed_form,
                            tol(MC_TOLERANCE),
                        ));
                    }
                }
                Err(e) => checks.push(Check::failed("measure", format!("k={k}"), &e)),
            }
        }
    }
    if wants(Suite::Neretin) {
        for (l, s, t) in [(2.0, 2.0, 2.0), (3.0, 3.0, 3.0), (2.5, 2.0, 3.0)] {
            let name = format!("λ={l} σ={s} τ={t}");
            let r = neretin_n1(l, s, t, &adaptive).map(|e| {
                Check::numeric("neretin", name.clone(), e, neretin_reference(l, s, t), tol(ADAPTIVE_TOLERANCE))
            });
            push(&mut checks, "neretin", name, r);
        }
        // λ = σ = τ = k reproduces the measure integral up to 2^{2k}.
        let k = 3.0;
        let name = "λ=σ=τ=3 vs 8π/(2k-2)".to_string();
        let r = neretin_n1(k, k, k, &adaptive).map(|e| {
            let scaled = Estimate { value: e.value * 2f64.powf(2.0 * k), error: e.error * 2f64.powf(2.0 * k), ..e };
            Check::numeric("neretin", name.clone(), scaled, 8.0 * PI / (2.0 * k - 2.0), tol(ADAPTIVE_TOLERANCE))
        });
        push(&mut checks, "neretin", name, r);
    }
    if wants(Suite::Exact) {
        exact_checks(&mut checks, opts.seed);
    }

    let passed = !checks.is_empty() && checks.iter().all(|c| c.passed);
    VerifyReport { suite, seed: opts.seed, checks, passed }
}

fn exact_checks(checks: &mut Vec<Check>, seed: u64) {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    for i in 0..4 {
        let n = 1 + i % 2;
        let q = [2u64, 3, 5][rng.random_range(0..3)];
        let alphas = (0..n).map(|_| rat(rng.random_range(1..=4), rng.random_range(1..=4))).collect();
        let name = format!("zeta series vs closed form #{i} (n={n}, q={q})");
        let r = (|| {
            let sd = SatakeData::new(q, alphas, int(1))?;
            let s = EvaluationPoint::new(int(2));
            let series = unramified_zeta_series(&sd, &s, 24)?;
            let closed = unramified_zeta_closed(&sd, &s)?;
            let diff = (series.value.to_f64() - closed.to_f64()).abs();
            let ok = diff <= series.tail_bound && diff <= 1e-6 * closed.to_f64().abs();
            Ok(Check::exact("exact", name.clone(), ok, closed.to_f64()))
        })();
        push(checks, "exact", name, r);
    }
    for n in 1..=3 {
        for lambda in parity_valid_parameters(n, 8) {
            let k = lambda.as_slice()[0] + 1;
            let name = format!("blattner λ={:?}", lambda.as_slice());
            let r = blattner_multiplicity(&lambda, &KTypeVector::scalar(n, k + 2))
                .map(|m| Check::exact("exact", name.clone(), m == 1, m as f64));
            push(checks, "exact", name, r);
        }
    }
    for kvec in [vec![5, 3], vec![6, 6, 4], vec![7, 5]] {
        let name = format!("dual route k={kvec:?}");
        let r = (|| {
            let ctx = ArchContext::new(KTypeVector::new(kvec.clone())?)?;
            let ok = composed_route(&ctx)? == a_k(&ctx).rational;
            Ok(Check::exact("exact", name.clone(), ok, 0.0))
        })();
        push(checks, "exact", name, r);
    }
    for (n, p, want) in [(1usize, 2u64, 6u64), (1, 3, 24), (2, 2, 720)] {
        let name = format!("|Sp_{}(F_{p})|", 2 * n);
        let r = sp_order_mod(n, p, 1).map(|o| {
            let ok = o == want.into() && sp_order_brute_force(n, p) == want;
            Check::exact("exact", name.clone(), ok, want as f64)
        });
        push(checks, "exact", name, r);
    }
    for modulus in [4u64, 5, 7, 8] {
        for chi in DirichletCharacter::all(modulus) {
            if !chi.is_primitive() {
                continue;
            }
            let g = gauss_sum(&chi);
            let name = format!("|G(χ)|² = {modulus} for χ = {:?}", chi.images());
            let ok = (g.norm_sqr() - modulus as f64).abs() < 1e-10;
            checks.push(Check::exact("exact", name, ok, g.norm_sqr()));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quick_suites_pass() {
        let opts = VerifyOptions { mc_budget: 40_000, ..Default::default() };
        for suite in [Suite::Beta, Suite::Kak, Suite::Measure, Suite::Neretin, Suite::Exact] {
            let r = run(suite, &opts);
            for c in &r.checks {
                assert!(c.passed, "{c:?}");
            }
        }
    }

    #[test]
    fn zero_tolerance_fails() {
        let opts = VerifyOptions { tolerance: Some(0.0), ..Default::default() };
        assert!(!run(Suite::Beta, &opts).passed);
    }

    #[test]
    fn suite_names() {
        assert_eq!("measure".parse::<Suite>().unwrap(), Suite::Measure);
        assert!("bogus".parse::<Suite>().is_err());
    }
}
