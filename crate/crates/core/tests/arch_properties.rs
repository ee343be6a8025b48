use proptest::prelude::*;

use pullback_core::algebra::{int, rat, PiPower};
use pullback_core::arch::{
    a_k, b_lambda_general, b_lambda_scalar, b_lambda_via_a_k, c_krn_n_with_volume, critical_points, factorial_product,
    gamma_n, siegel_volume, ArchContext,
};
use pullback_core::ktype::KTypeVector;
use pullback_core::QRatFun;

fn kvec_strategy() -> impl Strategy<Value = Vec<i64>> {
    (1usize..=3)
        .prop_flat_map(|n| (Just(n), (n as i64 + 1)..=12, prop::collection::vec(0i64..=3, n)))
        .prop_map(|(n, k1, drops)| {
            let mut v = vec![k1];
            for d in drops.into_iter().take(n - 1) {
                let next = (v[v.len() - 1] - 2 * d).max(n as i64 + 1 + (k1 - n as i64 - 1) % 2);
                v.push(next);
            }
            v
        })
}

#[test]
fn scalar_product_matches_gamma() {
    for n in 1..=4usize {
        for k in (n as i64 + 1)..=(n as i64 + 6) {
            let ctx = ArchContext::scalar(n, k).unwrap();
            let want = &gamma_n(n).compose_affine(&int(1), &int(k)) * &QRatFun::constant(factorial_product(n).recip());
            assert_eq!(a_k(&ctx).rational, want, "n={n} k={k}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn general_formula_matches_a_k_route(kvec in kvec_strategy(), two_s in 1i64..=8) {
        let ctx = ArchContext::new(KTypeVector::new(kvec.clone()).unwrap()).unwrap();
        let s = rat(two_s, 2);
        let n = ctx.n;
        let direct = b_lambda_general(&ctx).unwrap().eval_s(&s, n);
        let via = b_lambda_via_a_k(&ctx).eval_s(&s, n);
        match (direct, via) {
            (Ok(a), Ok(b)) => prop_assert_eq!(a, b),
            (Err(_), Err(_)) => {}
            (a, b) => prop_assert!(false, "k={:?}: {:?} vs {:?}", kvec, a, b),
        }
    }

    #[test]
    fn scalar_general_agrees_with_scalar_formula(n in 1usize..=3, extra in 1i64..=6, two_s in 1i64..=8) {
        let k = n as i64 + extra;
        let ctx = ArchContext::scalar(n, k).unwrap();
        let s = rat(two_s, 2);
        if let (Ok(a), Ok(b)) = (b_lambda_general(&ctx).unwrap().eval_s(&s, n), b_lambda_scalar(n, k, &s)) {
            prop_assert_eq!(a, b);
        }
    }

    #[test]
    fn constants_carry_no_pi(k1 in 6i64..=14, gap in 0i64..=4, level in prop::sample::select(vec![vec![], vec![(2u64, 1u32)], vec![(3, 1)], vec![(2, 2), (5, 1)]])) {
        let k2 = (k1 - 2 * gap).max(6 + (k1 % 2));
        let kt = KTypeVector::new(vec![k1, k2]).unwrap();
        let ctx = ArchContext::new(kt.clone()).unwrap();
        for r in critical_points(&ctx) {
            let c = c_krn_n_with_volume(&kt, r, &level, &siegel_volume(2)).unwrap();
            prop_assert!(c != int(0));
            // A volume with a stray π power must be rejected.
            prop_assert!(c_krn_n_with_volume(&kt, r, &level, &PiPower::new(int(1), 2)).is_err());
        }
    }
}
