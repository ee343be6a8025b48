use num_traits::{One, Zero};
use proptest::prelude::*;

use pullback_core::algebra::{int, rat};
use pullback_core::hecke::{
    all_positive_integers, cartan_volume_product, cartan_volume_series, is_weyl_invariant, rationality_series,
    unramified_zeta_closed, unramified_zeta_series, EvaluationPoint, SatakeData,
};
use pullback_core::ktype::{blattner_terms, parity_valid_parameters, KTypeVector};
use pullback_core::lfactors::{dirichlet_lvalue, standard_lfactor, DirichletCharacter, LMethod};
use pullback_core::Rational;

fn nonzero_rat() -> impl Strategy<Value = Rational> {
    (1i64..=9, 1i64..=9, any::<bool>()).prop_map(|(n, d, neg)| rat(if neg { -n } else { n }, d))
}

#[test]
fn rationality_series_is_weyl_invariant() {
    for (n, depth) in [(1usize, 8usize), (2, 8), (3, 4)] {
        for q in [2u64, 3] {
            let s = rationality_series(n, q, depth).unwrap();
            for (d, c) in s.coeffs().iter().enumerate() {
                assert!(is_weyl_invariant(c, n), "n={n} q={q} degree {d}");
            }
        }
    }
}

#[test]
fn volume_coefficients_are_positive_integers() {
    for n in 1..=3 {
        for q in [2u64, 3, 5] {
            let s = cartan_volume_series(n, q, 8).unwrap();
            assert!(all_positive_integers(&s), "n={n} q={q}");
            assert_eq!(s, cartan_volume_product(n, q, 8).unwrap());
        }
    }
}

#[test]
fn scalar_terms_with_moved_first_index_vanish() {
    for n in 1..=4 {
        for lambda in parity_valid_parameters(n, 9) {
            let k = lambda.as_slice()[0] + 1;
            for t in blattner_terms(&lambda, &KTypeVector::scalar(n, k)).unwrap() {
                if t.sigma_inv[0] != 0 {
                    assert_eq!(t.q, 0, "λ={:?} σ⁻¹={:?}", lambda.as_slice(), t.sigma_inv);
                }
            }
        }
    }
}

#[test]
fn hurwitz_and_euler_agree() {
    for modulus in 1..=12u64 {
        for chi in DirichletCharacter::all(modulus) {
            for s in [2.0, 3.0, 4.0] {
                let h = dirichlet_lvalue(&chi, s, LMethod::Hurwitz { terms: 24 }).unwrap();
                let e = dirichlet_lvalue(&chi, s, LMethod::EulerTruncated { primes_up_to: 2000 }).unwrap();
                let gap = (h.value() - e.value()).norm();
                assert!(gap <= h.error_bound + e.error_bound, "N={modulus} {:?} s={s}: {gap:e}", chi.images());
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn zeta_series_within_tail_and_shrinking(
        n in 1usize..=2,
        q in prop::sample::select(vec![2u64, 3, 5]),
        alphas in prop::collection::vec(nonzero_rat(), 2),
        two_s in 3i64..=5,
    ) {
        let sd = SatakeData::new(q, alphas[..n].to_vec(), int(1)).unwrap();
        let s = EvaluationPoint::new(rat(two_s, 2));
        let closed = unramified_zeta_closed(&sd, &s).unwrap().to_f64();
        let mut last = f64::INFINITY;
        for depth in [8usize, 16, 24] {
            let series = unramified_zeta_series(&sd, &s, depth).unwrap();
            let diff = (series.value.to_f64() - closed).abs();
            prop_assert!(diff <= series.tail_bound, "D={depth}: {diff:e} > {:e}", series.tail_bound);
            // Above the rounding floor the bound must shrink with D.
            prop_assert!(series.tail_bound <= last.max(1e-12 * closed.abs()));
            last = series.tail_bound;
        }
    }

    #[test]
    fn standard_factor_invariant_under_inversion(q in 2u64..20, alphas in prop::collection::vec(nonzero_rat(), 1..=3), chi in prop::sample::select(vec![1i64, -1])) {
        let sd = SatakeData::new(q, alphas.clone(), int(chi)).unwrap();
        let inv: Vec<Rational> = alphas.iter().map(|a| Rational::one() / a).collect();
        let sd_inv = SatakeData::new(q, inv, int(chi)).unwrap();
        let f = standard_lfactor(&sd);
        prop_assert_eq!(&f.denominator, &standard_lfactor(&sd_inv).denominator);
        prop_assert_eq!(f.degree(), 2 * alphas.len() + 1);
        prop_assert!(f.denominator.coeffs()[0] == Rational::one());
        prop_assert!(!f.denominator.is_zero());
    }
}
