use mellin_pw::fourier::laplace_fourier;
use mellin_pw::funcmodel::bump;
use mellin_pw::homdist::hm_analytic;
use mellin_pw::mellin::mellin_eval;
use mellin_pw::pwcheck::{
    default_heights, default_tempered_grid, exp_type_fit, support_estimate, tempered_growth_check, GrowthModel,
    DEFAULT_R,
};
use mellin_pw::{Complex64, Result};
use proptest::prelude::*;

fn mellin_type(r0: f64, r1: f64) -> f64 {
    let u = bump(r0, r1).unwrap();
    let h = |s: Complex64| mellin_eval(&u, s, 1e-10).map(|v| v.value);
    exp_type_fit(&h, GrowthModel::MellinEntire, &DEFAULT_R, &default_heights()).unwrap().a
}

#[test]
fn larger_support_has_larger_type() {
    let nested = [(0.8, 1.3), (0.6, 1.3), (0.6, 2.0), (0.4, 2.0), (0.3, 3.5)];
    let types: Vec<f64> = nested.iter().map(|(a, b)| mellin_type(*a, *b)).collect();
    assert!(types.windows(2).all(|w| w[1] >= w[0]), "{types:?}");
}

#[test]
fn larger_support_has_larger_fourier_type() {
    let mut last = 0.0;
    for (r0, r1) in [(0.2, 0.5), (0.2, 1.0), (0.1, 2.0)] {
        let u = bump(r0, r1).unwrap();
        let h = |z: Complex64| laplace_fourier(&u, z, 1e-10).map(|v| v.value);
        let r = exp_type_fit(&h, GrowthModel::FourierEntire, &DEFAULT_R, &default_heights()).unwrap();
        assert!(r.a >= last, "{r:?}");
        last = r.a;
    }
}

#[test]
fn boundary_order_of_hm() {
    let grid = default_tempered_grid();
    for m in 0..=3 {
        let h = hm_analytic(m);
        let r = tempered_growth_check(&|z| Ok(h(z)), &grid).unwrap();
        assert_eq!(r.n, Some(m as u32 + 1));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10))]

    #[test]
    fn support_estimate_contains_support(r0 in 0.2..0.8f64, r1 in 1.2..4.0f64) {
        let u = bump(r0, r1).unwrap();
        let h = |s: Complex64| mellin_eval(&u, s, 1e-10).map(|v| v.value);
        let r = exp_type_fit(&h, GrowthModel::MellinEntire, &DEFAULT_R, &default_heights()).unwrap();
        let s = support_estimate(&r).unwrap();
        prop_assert!(s.low <= s.high);
        prop_assert!(s.low <= r0 && s.high >= r1, "[{}, {}] vs [{}, {}]", s.low, s.high, r0, r1);
    }

    #[test]
    fn type_ignores_unimodular_factors(theta in 0.0..std::f64::consts::TAU, r0 in 0.3..0.9f64, r1 in 1.1..3.0f64) {
        let u = bump(r0, r1).unwrap();
        let w = Complex64::from_polar(1.0, theta);
        let h = |s: Complex64| -> Result<Complex64> { Ok(mellin_eval(&u, s, 1e-10)?.value) };
        let g = |s: Complex64| -> Result<Complex64> { Ok(w * h(s)?) };
        let a = exp_type_fit(&h, GrowthModel::MellinEntire, &DEFAULT_R, &default_heights()).unwrap();
        let b = exp_type_fit(&g, GrowthModel::MellinEntire, &DEFAULT_R, &default_heights()).unwrap();
        prop_assert!((a.a - b.a).abs() < 1e-9 && (a.m - b.m).abs() < 1e-9);
        prop_assert!((a.c - b.c).abs() < 1e-9 * a.c && a.verdict == b.verdict);
    }
}
