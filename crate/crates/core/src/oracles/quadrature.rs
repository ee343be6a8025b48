//! Adaptive Gauss-Kronrod and stratified Monte Carlo integration.

use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// An estimate together with an error estimate and the number of
/// integrand evaluations spent.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct Estimate<F> {
    pub value: F,
    pub error: F,
    pub evaluations: u64,
}

fn c<F: Float>(x: f64) -> F {
    F::from(x).expect("representable constant")
}

/// One GK15 panel. The integrand returns a value together with an inherited
/// error (nonzero for nested integrals); the inherited part is integrated
/// with the Kronrod weights and added to the panel error.
fn gk15<F: Float, G: Fn(F) -> (F, F)>(f: &G, a: F, b: F) -> (F, F) {
    let half = (b - a) * c(0.5);
    let mid = (a + b) * c(0.5);
    let (fc, ec) = f(mid);
    let mut kron = fc * c(WGK[7]);
    let mut gauss = fc * c(WG[3]);
    let mut inherited = ec * c(WGK[7]);
    for i in 0..7 {
        let dx = half * c(XGK[i]);
        let (f1, e1) = f(mid - dx);
        let (f2, e2) = f(mid + dx);
        kron = kron + (f1 + f2) * c(WGK[i]);
        inherited = inherited + (e1 + e2) * c(WGK[i]);
        if i % 2 == 1 {
            gauss = gauss + (f1 + f2) * c(WG[i / 2]);
        }
    }
    let h = half.abs();
    let rounding = c::<F>(50.0) * F::epsilon() * (kron * half).abs();
    (kron * half, (kron - gauss).abs() * h + inherited * h + rounding)
}

/// Globally adaptive GK15 on `[a, b]` with a bound on the number of panels.
pub fn adaptive_with_error<F: Float, G: Fn(F) -> (F, F)>(
    f: &G,
    a: F,
    b: F,
    abs_tol: F,
    rel_tol: F,
    max_panels: usize,
) -> Estimate<F> {
    let (v, e) = gk15(f, a, b);
    let mut panels = vec![(a, b, v, e)];
    let mut evaluations = 15u64;
    loop {
        let total: F = panels.iter().fold(F::zero(), |s, p| s + p.2);
        let err: F = panels.iter().fold(F::zero(), |s, p| s + p.3);
        if err <= abs_tol.max(rel_tol * total.abs()) || panels.len() >= max_panels {
            return Estimate { value: total, error: err, evaluations };
        }
        let worst = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.partial_cmp(&y.1 .3).unwrap_or(std::cmp::Ordering::Equal))
            .map(|(i, _)| i)
            .expect("nonempty");
        let (lo, hi, _, _) = panels.swap_remove(worst);
        let mid = (lo + hi) * c(0.5);
        if mid <= lo || mid >= hi {
            // Interval cannot be split further in this precision.
            let total: F = panels.iter().fold(F::zero(), |s, p| s + p.2);
            let err: F = panels.iter().fold(F::zero(), |s, p| s + p.3);
            return Estimate { value: total, error: err, evaluations };
        }
        let (v1, e1) = gk15(f, lo, mid);
        let (v2, e2) = gk15(f, mid, hi);
        evaluations += 30;
        panels.push((lo, mid, v1, e1));
        panels.push((mid, hi, v2, e2));
    }
}

pub fn adaptive<F: Float, G: Fn(F) -> F>(f: &G, a: F, b: F, abs_tol: F, rel_tol: F, max_panels: usize) -> Estimate<F> {
    adaptive_with_error(&|x| (f(x), F::zero()), a, b, abs_tol, rel_tol, max_panels)
}

/// Nested adaptive integration over `[a0, b0] x [a1, b1]`.
pub fn adaptive_2d<G: Fn(f64, f64) -> f64 + Sync>(
    f: &G,
    (a0, b0): (f64, f64),
    (a1, b1): (f64, f64),
    tol: f64,
    max_panels: usize,
) -> Estimate<f64> {
    let inner_evals = std::cell::Cell::new(0u64);
    let outer = |x: f64| {
        let inner = adaptive(&|y| f(x, y), a1, b1, tol * 1e-2, tol * 1e-2, max_panels);
        inner_evals.set(inner_evals.get() + inner.evaluations);
        (inner.value, inner.error)
    };
    let est = adaptive_with_error(&outer, a0, b0, tol * 1e-3, tol, max_panels);
    Estimate { value: est.value, error: est.error, evaluations: inner_evals.get() }
}

/// Composite GK15 with a fixed number of equal panels per axis. The error
/// estimate compares against the rule with half as many panels.
pub fn tensor_gk<G: Fn(&[f64]) -> f64>(f: &G, bounds: &[(f64, f64)], panels: usize) -> Estimate<f64> {
    let (value, evaluations) = tensor_rule(f, bounds, panels);
    let coarse = if panels > 1 { tensor_rule(f, bounds, panels / 2).0 } else { value };
    Estimate { value, error: (value - coarse).abs(), evaluations }
}

fn tensor_rule<G: Fn(&[f64]) -> f64>(f: &G, bounds: &[(f64, f64)], panels: usize) -> (f64, u64) {
    let axes: Vec<Vec<(f64, f64)>> = bounds
        .iter()
        .map(|&(a, b)| {
            let width = (b - a) / panels as f64;
            let half = width / 2.0;
            let mut axis = Vec::with_capacity(15 * panels);
            for p in 0..panels {
                let mid = a + (p as f64 + 0.5) * width;
                axis.push((mid, WGK[7] * half));
                for i in 0..7 {
                    axis.push((mid - half * XGK[i], WGK[i] * half));
                    axis.push((mid + half * XGK[i], WGK[i] * half));
                }
            }
            axis
        })
        .collect();
    let dims = bounds.len();
    let per_axis = axes[0].len();
    let total = per_axis.pow(dims as u32);
    let mut acc = 0.0;
    let mut point = vec![0.0; dims];
    for mut idx in 0..total {
        let mut w = 1.0;
        for d in 0..dims {
            let (x, wx) = axes[d][idx % per_axis];
            idx /= per_axis;
            point[d] = x;
            w *= wx;
        }
        acc += w * f(&point);
    }
    (acc, total as u64)
}

/// Jittered stratified Monte Carlo on the unit cube `[0,1]^dims`
/// (`dims` = 1 or 2) with about `budget` samples, one per stratum.
///
/// Rows of strata are processed in shards; shard `i` draws from the ChaCha
/// stream `i` of the given seed, and shard results are reduced in index
/// order, so the estimate is bit-identical for a fixed seed.
pub fn stratified_mc<G: Fn(&[f64]) -> f64 + Sync>(f: &G, dims: usize, budget: u64, seed: u64) -> Estimate<f64> {
    assert!(dims == 1 || dims == 2, "stratified sampling supports one or two dimensions");
    let side = if dims == 1 { budget.max(2) } else { ((budget as f64).sqrt().floor() as u64).max(2) };
    let rows = if dims == 1 { 1 } else { side };
    let cells = if dims == 1 { side } else { side * side };
    let cell_weight = 1.0 / cells as f64;
    let h = 1.0 / side as f64;
    const SHARDS: u64 = 64;
    let shard_rows = rows.div_ceil(SHARDS).max(1);
    let shards: Vec<(f64, f64)> = (0..SHARDS)
        .into_par_iter()
        .map(|shard| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(shard);
            let mut sum = 0.0;
            let mut var = 0.0;
            let start = shard * shard_rows;
            let end = ((shard + 1) * shard_rows).min(rows);
            let mut point = vec![0.0; dims];
            for row in start..end {
                let mut prev: Option<f64> = None;
                for col in 0..side {
                    point[0] = (col as f64 + rng.random::<f64>()) * h;
                    if dims == 2 {
                        point[1] = (row as f64 + rng.random::<f64>()) * h;
                    }
                    let v = f(&point) * cell_weight;
                    sum += v;
                    match prev.take() {
                        None => prev = Some(v),
                        Some(p) => var += (v - p) * (v - p) / 2.0,
                    }
                }
            }
            (sum, var)
        })
        .collect();
    let (mut sum, mut var) = (0.0, 0.0);
    for (s, v) in shards {
        sum += s;
        var += v;
    }
    Estimate { value: sum, error: 3.0 * var.sqrt() + 1e-15 * sum.abs(), evaluations: cells }
}
