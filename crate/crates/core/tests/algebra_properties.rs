use num_traits::{One, Zero};
use proptest::prelude::*;

use pullback_core::algebra::{int, rat, series_from_rational_factors, PiPower, SeriesFactor};
use pullback_core::{QPoly, QRatFun, Rational};

fn small_rat() -> impl Strategy<Value = Rational> {
    (-9i64..=9, 1i64..=6).prop_map(|(n, d)| rat(n, d))
}

fn factor() -> impl Strategy<Value = SeriesFactor<Rational>> {
    (prop::collection::vec(small_rat(), 0..3), prop::collection::vec(small_rat(), 0..3)).prop_map(|(mut num, mut den)| {
        num.insert(0, Rational::one());
        den.insert(0, Rational::one());
        SeriesFactor::new(num, den)
    })
}

fn poly() -> impl Strategy<Value = QPoly> {
    prop::collection::vec(small_rat(), 1..4).prop_map(QPoly::new)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn expansion_is_multiplicative(fs in prop::collection::vec(factor(), 1..4), degree in 0usize..10) {
        let joint = series_from_rational_factors(&fs, degree).unwrap();
        let mut prod = series_from_rational_factors::<Rational>(&[], degree).unwrap();
        for f in &fs {
            let single = series_from_rational_factors(std::slice::from_ref(f), degree).unwrap();
            prod = &prod * &single;
        }
        prop_assert_eq!(joint, prod);
    }

    #[test]
    fn pi_power_products(a in small_rat(), e in -5i64..5, b in small_rat(), f in -5i64..5) {
        let p = PiPower::new(a.clone(), e) * PiPower::new(b.clone(), f);
        let ab = a * b;
        if ab.is_zero() {
            prop_assert!(p.is_zero());
        } else {
            prop_assert_eq!(p.coeff(), &ab);
            prop_assert_eq!(p.pi_exp(), e + f);
        }
    }

    #[test]
    fn normalization_idempotent(num in poly(), den in poly(), x in small_rat()) {
        prop_assume!(!den.is_zero());
        let f = QRatFun::new(num.clone(), den.clone()).unwrap();
        let again = QRatFun::new(f.numerator().clone(), f.denominator().clone()).unwrap();
        prop_assert_eq!(&f, &again);
        let d = den.eval(&x);
        if !d.is_zero() {
            prop_assert_eq!(f.eval(&x).unwrap(), num.eval(&x) / d);
        }
    }

    #[test]
    fn ratfun_field_laws(a in poly(), b in poly(), c in poly()) {
        prop_assume!(!b.is_zero() && !c.is_zero());
        let f = QRatFun::new(a, b.clone()).unwrap();
        let g = QRatFun::new(b, c).unwrap();
        prop_assert_eq!(&(&f * &g) * &g.recip().unwrap(), f.clone());
        prop_assert_eq!((f.clone() + g.clone()) - g, f);
    }
}

#[test]
fn float_instances_agree_with_exact() {
    let exact = QRatFun::new(QPoly::new(vec![int(1), int(2)]), QPoly::new(vec![int(3), int(0), int(1)])).unwrap();
    let float = exact.map(|q| pullback_core::Scalar::to_f64(q));
    for x in [-2i64, 0, 1, 5] {
        let e = pullback_core::Scalar::to_f64(&exact.eval(&int(x)).unwrap());
        assert!((float.eval(&(x as f64)).unwrap() - e).abs() < 1e-12);
    }
}
