//! Acceptance checks. Run with `cargo test --test acceptance`; prints one
//! PASS/FAIL line per criterion and exits nonzero if any fails.

use std::collections::BTreeSet;
use std::f64::consts::PI;
use std::time::{Duration, Instant};

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use pullback_core::algebra::{int, rat, rat_pow, PiPower};
use pullback_core::arch::{a_k, alpha_n, c_krn_n, composed_route, critical_points, siegel_volume, ArchContext};
use pullback_core::hecke::{cartan_volume_series, unramified_zeta_closed, unramified_zeta_series, EvaluationPoint, SatakeData};
use pullback_core::ktype::{blattner_multiplicity, parity_valid_parameters, q_count, q_count_naive, KTypeVector};
use pullback_core::lfactors::{gauss_sum, sp_order_brute_force, sp_order_mod, DirichletCharacter};
use pullback_core::oracles::{measure_consistency_n1, quad_selberg, QuadratureConfig};
use pullback_core::symplectic::{
    embed_doubling, conjugate_into_parabolic, q_matrix, random_radical_element, random_symplectic_with, random_unimodular,
    CosetCase, Matrix, SymplecticMatrix,
};
use pullback_core::Rational;

type Outcome = std::result::Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: Duration, what: &str) -> std::result::Result<(), String> {
    ensure(elapsed < limit, || format!("{what} took {elapsed:?}, limit {limit:?}"))
}

fn c01_zeta_identity() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(20240601);
    let mut worst = 0.0f64;
    for i in 0..20 {
        let n = 1 + i % 2;
        let q = [2u64, 3, 5][rng.random_range(0..3)];
        let alphas: Vec<Rational> = (0..n)
            .map(|_| rat(rng.random_range(1..=9) * if rng.random_bool(0.5) { 1 } else { -1 }, rng.random_range(1..=9)))
            .collect();
        let chi = if rng.random_bool(0.5) { int(1) } else { int(-1) };
        let s = if i % 4 < 2 { rat(3, 2) } else { int(2) };
        let sd = SatakeData::new(q, alphas.clone(), chi).map_err(|e| e.to_string())?;
        let point = EvaluationPoint::new(s.clone());
        let series = unramified_zeta_series(&sd, &point, 24).map_err(|e| format!("tuple {i}: {e}"))?;
        let closed = unramified_zeta_closed(&sd, &point).map_err(|e| format!("tuple {i}: {e}"))?;
        let (a, b) = (series.value.to_f64(), closed.to_f64());
        let diff = (a - b).abs();
        ensure(diff <= series.tail_bound, || {
            format!("tuple {i} (n={n}, q={q}, s={s}, α={alphas:?}): |Δ| = {diff:e} > tail bound {:e}", series.tail_bound)
        })?;
        ensure(diff <= 1e-6 * b.abs(), || format!("tuple {i}: relative difference {:e}", diff / b.abs()))?;
        worst = worst.max(diff / b.abs());
    }
    within(start.elapsed(), Duration::from_secs(10), "20 tuples")?;
    Ok(format!("20 tuples, worst relative difference {worst:.2e}, {:?}", start.elapsed()))
}

/// Cyclic subgroups of order q² in (Z/q²)², i.e. lattices L ⊂ Z_q² with
/// Z_q²/L ≅ Z/q², enumerated from their generators.
fn cyclic_index_q2_lattices(q: u64) -> usize {
    let m = q * q;
    let mut subgroups = BTreeSet::new();
    for a in 0..m {
        for b in 0..m {
            let generated: BTreeSet<(u64, u64)> = (0..m).map(|t| (t * a % m, t * b % m)).collect();
            if generated.len() as u64 == m {
                subgroups.insert(generated);
            }
        }
    }
    subgroups.len()
}

fn c02_cartan_volumes() -> Outcome {
    for q in [2u64, 3] {
        let series = cartan_volume_series(1, q, 6).map_err(|e| e.to_string())?;
        for e in 1..=6i64 {
            let want = rat_pow(&int(q as i64), 2 * e - 1) * int(q as i64 + 1);
            ensure(*series.coeff(e as usize) == want, || {
                format!("q={q}, e={e}: coefficient {} != {want}", series.coeff(e as usize))
            })?;
        }
        let brute = cyclic_index_q2_lattices(q);
        ensure(int(brute as i64) == *series.coeff(1), || format!("q={q}: brute force {brute} vs {}", series.coeff(1)))?;
    }
    Ok("q^{2e-1}(q+1) for e <= 6, q in {2,3}; e=1 cell: 6 and 12 by enumeration".into())
}

fn c03_blattner() -> Outcome {
    let mut cases = 0;
    for n in 1..=4 {
        for lambda in parity_valid_parameters(n, 12) {
            let k = lambda.as_slice()[0] + 1;
            for m in [0, 2, 4] {
                let mult = blattner_multiplicity(&lambda, &KTypeVector::scalar(n, k + m)).map_err(|e| e.to_string())?;
                ensure(mult == 1, || format!("λ={:?}, m={m}: multiplicity {mult}", lambda.as_slice()))?;
                cases += 1;
            }
        }
    }
    let mut q_cases = 0;
    for n in 1..=3usize {
        let total = 13usize.pow(n as u32);
        for idx in 0..total {
            let mut rest = idx;
            let mu: Vec<i64> = (0..n)
                .map(|_| {
                    let c = (rest % 13) as i64 - 2;
                    rest /= 13;
                    c
                })
                .collect();
            let (dp, naive) = (q_count(&mu, n), q_count_naive(&mu, n));
            ensure(dp == naive, || format!("Q({mu:?}): dp {dp} vs naive {naive}"))?;
            q_cases += 1;
        }
    }
    Ok(format!("{cases} multiplicities equal 1; Q dp = naive on {q_cases} weights"))
}

fn k_vectors(n: usize, max_k1: i64) -> Vec<Vec<i64>> {
    fn rec(n: usize, prefix: &mut Vec<i64>, lo: i64, out: &mut Vec<Vec<i64>>) {
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        let prev = *prefix.last().expect("nonempty prefix");
        let mut k = prev;
        while k > lo {
            prefix.push(k);
            rec(n, prefix, lo, out);
            prefix.pop();
            k -= 2;
        }
    }
    let mut out = Vec::new();
    for k1 in (n as i64 + 1)..=max_k1 {
        let mut prefix = vec![k1];
        rec(n, &mut prefix, n as i64, &mut out);
    }
    out
}

fn c04_dual_route() -> Outcome {
    let mut count = 0;
    for n in 1..=3 {
        for kvec in k_vectors(n, 12) {
            let ctx = ArchContext::new(KTypeVector::new(kvec.clone()).map_err(|e| e.to_string())?)
                .map_err(|e| e.to_string())?;
            let composed = composed_route(&ctx).map_err(|e| e.to_string())?;
            let direct = a_k(&ctx).rational;
            ensure(composed == direct, || format!("k={kvec:?}: {composed} != {direct}"))?;
            count += 1;
        }
    }
    Ok(format!("{count} k-vectors, exact equality"))
}

fn grid_n2() -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    for k1 in 6..=14 {
        for k2 in (6..=k1).filter(|k2| (k1 - k2) % 2 == 0) {
            out.push(vec![k1, k2]);
        }
    }
    out
}

fn c05_ak_nonzero() -> Outcome {
    let mut count = 0;
    for kvec in grid_n2() {
        let ctx = ArchContext::new(KTypeVector::new(kvec.clone()).map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?;
        let a = a_k(&ctx);
        for t in 0..=(kvec[1] - 2) {
            let v = a.eval_integer(t).map_err(|e| format!("k={kvec:?}, t={t}: {e}"))?;
            ensure(!v.is_zero(), || format!("k={kvec:?}, t={t}: A_k vanishes"))?;
            count += 1;
        }
    }
    Ok(format!("{count} values finite, nonzero and rational"))
}

fn c06_selberg() -> Outcome {
    let start = Instant::now();
    let mc = QuadratureConfig::monte_carlo(10_000_000, 7);
    let e2 = quad_selberg(2, 5.0, &mc).map_err(|e| e.to_string())?;
    let rel2 = (e2.value - 1.0 / 120.0).abs() * 120.0;
    ensure(rel2 <= 1e-4, || format!("n=2: {} (relative {rel2:e})", e2.value))?;
    let e1 = quad_selberg(1, 4.0, &QuadratureConfig::adaptive(1e-10)).map_err(|e| e.to_string())?;
    let rel1 = (e1.value - 0.25).abs() * 4.0;
    ensure(rel1 <= 1e-6, || format!("n=1: {} (relative {rel1:e})", e1.value))?;
    within(start.elapsed(), Duration::from_secs(60), "selberg oracle")?;
    Ok(format!("n=2 MC relative {rel2:.1e} (± {:.1e}); n=1 relative {rel1:.1e}; {:?}", e2.error * 120.0, start.elapsed()))
}

fn c07_measure() -> Outcome {
    ensure(alpha_n(1) == PiPower::new(int(4), 1), || format!("α_1 = {}", alpha_n(1)))?;
    let r = measure_consistency_n1(2, &QuadratureConfig::adaptive(1e-10)).map_err(|e| e.to_string())?;
    let mut line = String::new();
    for (name, e) in r.routes() {
        let rel = (e.value - 4.0 * PI).abs() / (4.0 * PI);
        ensure(rel <= 1e-4, || format!("{name}: {} (relative {rel:e})", e.value))?;
        line.push_str(&format!("{name} {rel:.1e} "));
    }
    Ok(format!("all routes 4π: {}", line.trim_end()))
}

fn c08_group_orders() -> Outcome {
    let start = Instant::now();
    for (n, p, want) in [(1usize, 2u64, 6u64), (1, 3, 24), (2, 2, 720)] {
        let formula = sp_order_mod(n, p, 1).map_err(|e| e.to_string())?;
        let brute = sp_order_brute_force(n, p);
        ensure(formula == want.into() && brute == want, || {
            format!("(n,p)=({n},{p}): formula {formula}, brute force {brute}, expected {want}")
        })?;
    }
    within(start.elapsed(), Duration::from_secs(5), "brute force")?;
    Ok(format!("6, 24, 720 by formula and enumeration, {:?}", start.elapsed()))
}

fn c09_gauss_sums() -> Outcome {
    let mut count = 0;
    for modulus in 1..=50u64 {
        for chi in DirichletCharacter::all(modulus) {
            if !chi.is_primitive() {
                continue;
            }
            let g = gauss_sum(&chi);
            ensure((g.norm_sqr() - modulus as f64).abs() <= 1e-10, || {
                format!("χ mod {modulus} {:?}: |G|² = {}", chi.images(), g.norm_sqr())
            })?;
            count += 1;
        }
    }
    let chi4 = DirichletCharacter::new(4, vec![1]).map_err(|e| e.to_string())?;
    let g4 = gauss_sum(&chi4);
    ensure((g4 - num_complex::Complex64::new(0.0, 2.0)).norm() <= 1e-10, || format!("G(χ_4) = {g4}"))?;
    let chi5 = DirichletCharacter::new(5, vec![2]).map_err(|e| e.to_string())?;
    let g5 = gauss_sum(&chi5);
    ensure((g5 - num_complex::Complex64::new(5f64.sqrt(), 0.0)).norm() <= 1e-10, || format!("G(χ_5) = {g5}"))?;
    Ok(format!("{count} primitive characters; G(χ_4) = 2i, G(χ_5) = √5"))
}

fn c10_constants() -> Outcome {
    let mut count = 0;
    for kvec in grid_n2() {
        let kt = KTypeVector::new(kvec.clone()).map_err(|e| e.to_string())?;
        let ctx = ArchContext::new(kt.clone()).map_err(|e| e.to_string())?;
        for level in [vec![], vec![(2u64, 1u32)]] {
            for r in critical_points(&ctx) {
                let c = c_krn_n(&kt, r, &level).map_err(|e| format!("k={kvec:?}, r={r}: {e}"))?;
                ensure(!c.is_zero(), || format!("k={kvec:?}, r={r}: zero"))?;
                count += 1;
            }
        }
    }
    let kt = KTypeVector::new(vec![10, 10]).map_err(|e| e.to_string())?;
    let got = c_krn_n(&kt, 8, &vec![]).map_err(|e| e.to_string())?;
    let want = int(270) * rat_pow(&int(2), -12) / int(4896);
    ensure(got == want, || format!("c(10,10; 8) = {got}, expected {want}"))?;
    // Composition: π³ / vol · A_k(7).
    let ctx = ArchContext::new(kt).map_err(|e| e.to_string())?;
    let composed = PiPower::new(Rational::one(), 3) / siegel_volume(2)
        * a_k(&ctx).eval_integer(7).map_err(|e| e.to_string())?;
    ensure(composed.as_rational() == Some(&want), || format!("composition gives {composed}"))?;
    Ok(format!("{count} constants rational and nonzero; c((10,10), 8, 1) = {want}"))
}

fn c11_conjugation() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2202);
    let mut counts = [0usize; 3];
    let nonzero = |rng: &mut ChaCha8Rng| {
        let v: i64 = rng.random_range(1..=3);
        if rng.random_bool(0.5) { v } else { -v }
    };
    while counts[0] < 100 {
        let n = rng.random_range(1..=3);
        let r = rng.random_range(0..n);
        let k = n - r;
        let gl = |rng: &mut ChaCha8Rng| {
            let diag: Vec<Rational> = (0..k).map(|_| int(nonzero(rng))).collect();
            &random_unimodular::<Rational>(rng, k) * &Matrix::diag(&diag)
        };
        let (g1, g2) = (gl(&mut rng), gl(&mut rng));
        let case = CosetCase::LeviPair {
            g1,
            n1: random_radical_element(&mut rng, n, r),
            g2,
            n2: random_radical_element(&mut rng, n, r),
        };
        conjugate_into_parabolic(n, r, &case).map_err(|e| format!("levi pair n={n} r={r}: {e}"))?;
        counts[0] += 1;
    }
    while counts[1] < 100 {
        let n = rng.random_range(2..=3);
        let r = rng.random_range(1..n);
        let x1 = random_symplectic_with::<Rational>(&mut rng, r, 6);
        conjugate_into_parabolic(n, r, &CosetCase::Sp2rDiagonal { x1 }).map_err(|e| format!("sp2r n={n} r={r}: {e}"))?;
        counts[1] += 1;
    }
    while counts[2] < 100 {
        let n = rng.random_range(1..=3);
        let g = random_symplectic_with::<Rational>(&mut rng, n, 6);
        // Scale to a similitude with multiplier μ.
        let mu = int(nonzero(&mut rng));
        let mut d = vec![Rational::one(); n];
        d.extend(std::iter::repeat_n(mu, n));
        let sim = SymplecticMatrix::new(Matrix::diag(&d)).map_err(|e| e.to_string())?;
        let g = g.mul(&sim);
        conjugate_into_parabolic(n, n, &CosetCase::FullDiagonal { g }).map_err(|e| format!("full n={n}: {e}"))?;
        counts[2] += 1;
    }
    for n in 1..=3 {
        for r in 0..=n {
            let q = q_matrix::<Rational>(n, r).map_err(|e| e.to_string())?;
            ensure(q.is_sp(), || format!("Q_{r} (n={n}) is not symplectic"))?;
        }
    }
    // The doubling embedding itself stays in GSp.
    let a = SymplecticMatrix::<Rational>::j(2);
    embed_doubling(&a, &a).map_err(|e| e.to_string())?;
    Ok(format!("{} + {} + {} conjugates in the Siegel parabolic with expected d; Q_r symplectic", counts[0], counts[1], counts[2]))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("1 zeta series vs closed form", c01_zeta_identity),
        ("2 Cartan cell volumes", c02_cartan_volumes),
        ("3 scalar K-type multiplicity one", c03_blattner),
        ("4 archimedean dual route", c04_dual_route),
        ("5 A_k nonvanishing", c05_ak_nonzero),
        ("6 Selberg integral oracle", c06_selberg),
        ("7 Haar measure constants", c07_measure),
        ("8 finite symplectic group orders", c08_group_orders),
        ("9 Gauss sums", c09_gauss_sums),
        ("10 normalizing constants", c10_constants),
        ("11 doubling conjugation", c11_conjugation),
    ];
    let mut failures = 0;
    for (name, check) in criteria {
        match std::panic::catch_unwind(check) {
            Ok(Ok(detail)) => println!("PASS criterion {name}: {detail}"),
            Ok(Err(detail)) => {
                failures += 1;
                println!("FAIL criterion {name}: {detail}");
            }
            Err(_) => {
                failures += 1;
                println!("FAIL criterion {name}: panicked");
            }
        }
    }
    println!("acceptance: {} passed, {failures} failed", 11 - failures);
    if failures > 0 {
        std::process::exit(1);
    }
}
