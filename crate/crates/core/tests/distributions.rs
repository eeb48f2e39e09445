use mellin_pw::homdist::{
    fourier_hom, inv_fourier_boundary, log_defect, pair_hom, pair_plus_with_order, regularization_order, residue_pair,
    scaling_check, split_boundary, BoundaryPowerTerm, BoundarySign, HomTerm, Side, TestFn,
};
use mellin_pw::specfun::{digamma, gamma};
use mellin_pw::Complex64;
use proptest::prelude::*;

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm().max(1e-300)
}

/// Exponents away from the negative integers.
fn regular_a() -> impl Strategy<Value = Complex64> {
    (-4.5..3.0f64, -2.0..2.0f64)
        .prop_map(|(x, y)| Complex64::new(x, y))
        .prop_filter("off the negative integers", |a| {
            a.re >= -0.95 || (a.re - a.re.round()).abs() > 0.05 || a.im.abs() > 0.05
        })
}

fn side() -> impl Strategy<Value = Side> {
    prop_oneof![Just(Side::Plus), Just(Side::Minus)]
}

/// `∫_0^∞ x^a e^{-x²/w²} dx = w^{a+1} Γ((a+1)/2) / 2`, continued in `a`.
fn gaussian_moment(a: Complex64, w: f64) -> Complex64 {
    (c(w.ln()) * (a + 1.0)).exp() * gamma((a + 1.0) / 2.0) / 2.0
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn pairing_continues_the_gaussian_moment(a in regular_a(), sd in side(), w in 0.5..2.0f64) {
        let phi = TestFn::gaussian(0.0, w, 8);
        let v = pair_hom(&HomTerm::new(sd, a, 0, c(1.0)), &phi, 1e-12).unwrap().value;
        prop_assert!(rel(v, gaussian_moment(a, w)) < 1e-8, "{} vs {}", v, gaussian_moment(a, w));
    }

    #[test]
    fn log_pairing_is_the_a_derivative(a in regular_a(), w in 0.5..2.0f64) {
        let phi = TestFn::gaussian(0.0, w, 8);
        let v = pair_hom(&HomTerm::new(Side::Plus, a, 1, c(1.0)), &phi, 1e-12).unwrap().value;
        let expect = gaussian_moment(a, w) * (w.ln() + digamma((a + 1.0) / 2.0) / 2.0);
        prop_assert!((v - expect).norm() < 1e-7 * (1.0 + expect.norm()), "{} vs {}", v, expect);
    }

    #[test]
    fn regularization_order_does_not_matter(a in regular_a(), center in -1.0..1.0f64) {
        let phi = TestFn::gaussian(center, 1.0, 10);
        let k = regularization_order(a);
        let x = pair_plus_with_order(a, k, &phi, 1e-12).unwrap().value;
        let y = pair_plus_with_order(a, k + 1, &phi, 1e-12).unwrap().value;
        prop_assert!((x - y).norm() < 1e-8 * (1.0 + x.norm()), "{} vs {}", x, y);
    }

    #[test]
    fn scaling_law(a in regular_a(), sd in side(), lambda in 0.3..3.0f64, center in -1.0..1.0f64) {
        let phi = TestFn::gaussian(center, 1.0, 8);
        let r = scaling_check(&HomTerm::new(sd, a, 0, c(1.0)), &phi, lambda, 1e-12).unwrap();
        prop_assert!(r.rel_err < 1e-8, "{:?}", r);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn fourier_is_homogeneous(a in regular_a(), sd in side(), xi in 0.1..10.0f64, neg in any::<bool>(), lambda in 0.1..10.0f64) {
        let b = fourier_hom(sd, a).unwrap();
        let xi = if neg { -xi } else { xi };
        let lhs = b.eval(lambda * xi).norm();
        let rhs = lambda.powf((-a - 1.0).re) * b.eval(xi).norm();
        prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.max(1e-300));
    }

    #[test]
    fn inverse_undoes_fourier(a in regular_a(), sd in side()) {
        let f = fourier_hom(sd, a).unwrap();
        let g = inv_fourier_boundary(f.sign, f.a);
        prop_assert_eq!(g.side, sd);
        prop_assert!((g.a - a).norm() < 1e-14);
        prop_assert!((g.coeff * f.coeff - 1.0).norm() < 1e-12);
    }

    #[test]
    fn split_recombines_pointwise(re in -4.0..3.0f64, im in -2.0..2.0f64, int in any::<bool>(), m in 0usize..3, plus in any::<bool>(), xi in 0.05..20.0f64, neg in any::<bool>()) {
        let a = if int { c(re.round()) } else { Complex64::new(re, im) };
        let m = if a.im == 0.0 && a.re < 0.0 && a.re.fract() == 0.0 { 0 } else { m };
        let sign = if plus { BoundarySign::PlusI0 } else { BoundarySign::MinusI0 };
        let b = BoundaryPowerTerm::new(sign, a, m, Complex64::new(0.7, -0.2));
        let combo = split_boundary(&b).unwrap();
        let xi = if neg { -xi } else { xi };
        prop_assert!(rel(combo.eval_power(xi), b.eval(xi)) < 1e-12);
    }
}

#[test]
fn residues_are_circle_means() {
    let phi = TestFn::gaussian(0.3, 1.0, 12);
    for k in 1..=4usize {
        for sd in [Side::Plus, Side::Minus] {
            let n = 16;
            let mut mean = c(0.0);
            for j in 0..n {
                let e = Complex64::from_polar(0.1, 2.0 * std::f64::consts::PI * (j as f64 + 0.5) / n as f64);
                let a = -(k as f64) + e;
                mean += e * pair_hom(&HomTerm::new(sd, a, 0, c(1.0)), &phi, 1e-13).unwrap().value;
            }
            mean /= n as f64;
            let r = residue_pair(k, sd, &phi).unwrap();
            assert!((mean - r).norm() < 1e-9 * (1.0 + r.norm()), "k = {k}, {sd:?}: {mean} vs {r}");
        }
    }
}

#[test]
fn finite_parts_have_log_defect() {
    let phi = TestFn::gaussian(0.4, 1.2, 8);
    for k in 1..=3 {
        for lambda in [0.5, 2.0, 3.0] {
            let r = log_defect(k, &phi, lambda, 1e-12).unwrap();
            assert!(r.rel_err < 1e-8, "k = {k}, λ = {lambda}: {r:?}");
        }
    }
}
