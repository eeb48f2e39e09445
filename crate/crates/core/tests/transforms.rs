use mellin_pw::fourier::{geometric_grid, laplace_fourier, tail_coefficients, tail_fit, HalfPlaneSamples};
use mellin_pw::funcmodel::{bump, gauss_pow, power_exp, FunctionModel};
use mellin_pw::mellin::{inverse_mellin, mellin_eval, mellin_via_fourier, mult_convolution};
use mellin_pw::singexp::line_decay_exponent;
use mellin_pw::{Complex64, Result};
use proptest::prelude::*;

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm().max(1e-300)
}

/// `|∂_y f - i ∂_x f|` by central differences of step `h` at `z`.
fn cauchy_riemann<F: Fn(Complex64) -> Complex64>(f: F, z: Complex64, h: f64) -> f64 {
    let dx = (f(z + h) - f(z - h)) / (2.0 * h);
    let dy = (f(z + I * h) - f(z - I * h)) / (2.0 * h);
    (dy - I * dx).norm()
}

#[test]
fn mellin_satisfies_cauchy_riemann_at_second_order() {
    let u = gauss_pow(c(0.5)).unwrap();
    let f = |s: Complex64| mellin_eval(&u, s, 1e-14).unwrap().value;
    let s0 = Complex64::new(1.3, 0.7);
    let (r1, r2) = (cauchy_riemann(f, s0, 0.1), cauchy_riemann(f, s0, 0.05));
    assert!((r1 / r2 - 4.0).abs() < 0.3, "{r1} {r2}");
}

#[test]
fn laplace_fourier_satisfies_cauchy_riemann_at_second_order() {
    let u = power_exp(c(0.5)).unwrap();
    let f = |z: Complex64| laplace_fourier(&u, z, 1e-14).unwrap().value;
    let z0 = Complex64::new(0.8, -0.6);
    let (r1, r2) = (cauchy_riemann(f, z0, 0.1), cauchy_riemann(f, z0, 0.05));
    assert!((r1 / r2 - 4.0).abs() < 0.3, "{r1} {r2}");
}

#[test]
fn mellin_decays_rapidly_on_lines() {
    for u in [power_exp(c(0.0)).unwrap(), gauss_pow(c(0.0)).unwrap(), bump(0.5, 2.0).unwrap()] {
        let h = |s: Complex64| mellin_eval(&u, s, 1e-13).map(|e| e.value);
        let near = line_decay_exponent(&h, 1.0, &[5.0, 10.0, 20.0, 40.0]).unwrap();
        let far = line_decay_exponent(&h, 1.0, &[40.0, 80.0, 160.0, 320.0]).unwrap();
        assert!(far >= 4.0 && far > near, "{}: {near} then {far}", u.name);
    }
}

#[test]
fn derivative_is_transform_of_minus_i_x_u() {
    let u = power_exp(c(0.5)).unwrap();
    let xu = u.times_power(c(1.0));
    for z in [Complex64::new(0.5, -0.1), Complex64::new(-2.0, -0.5), Complex64::new(5.0, -1e-3)] {
        let h = 1e-3;
        let f = |w: Complex64| laplace_fourier(&u, w, 1e-14).unwrap().value;
        let d = (f(z + h) - f(z - h)) / (2.0 * h);
        let g = -I * laplace_fourier(&xu, z, 1e-14).unwrap().value;
        assert!(rel(d, g) < 1e-6, "{z}: {d} vs {g}");
    }
}

#[test]
fn schwartz_transform_is_a_symbol_of_order_minus_one() {
    let u = gauss_pow(c(0.0)).unwrap();
    let mut worst: f64 = 0.0;
    for xi in [-400.0, -100.0, -20.0, -5.0, 0.0, 5.0, 20.0, 100.0, 400.0] {
        for eta in [1e-3, 0.1, 1.0, 10.0] {
            let z = Complex64::new(xi, -eta);
            let v = laplace_fourier(&u, z, 1e-13).unwrap().value.norm();
            let bracket = (1.0 + z.norm_sqr()).sqrt();
            worst = worst.max(v * bracket);
        }
    }
    // |h| <ζ> stays bounded, so the order is at most -1
    assert!(worst < 1.0, "{worst}");
}

#[test]
fn fitted_tails_match_closed_forms() {
    let models = [power_exp(c(0.0)).unwrap(), power_exp(c(0.5)).unwrap(), gauss_pow(c(-0.5)).unwrap()];
    let grid = geometric_grid(10.0, 1000.0, 40);
    for u in &models {
        let s = HalfPlaneSamples::ray(u, &grid, 1e-13).unwrap();
        let fit = tail_fit(&s, &u.zero.spec(), 3).unwrap();
        let closed = tail_coefficients(u, 3).unwrap();
        for j in 0..3 {
            assert!((fit.expansion.exponents[j] - closed.exponents[j]).norm() < 1e-12);
            let r = rel(fit.expansion.leading(j), closed.leading(j));
            assert!(r < 1e-3, "{} term {j}: {r}", u.name);
        }
    }
}

#[test]
fn differentiated_tail_matches_fit_of_derivative() {
    let u = power_exp(c(0.5)).unwrap();
    let xu = u.times_power(c(1.0));
    let grid = geometric_grid(10.0, 1000.0, 40);
    let points: Vec<Complex64> = grid.iter().map(|x| c(*x)).collect();
    let s = HalfPlaneSamples::sample(|z: Complex64| -> Result<Complex64> { Ok(-I * laplace_fourier(&xu, z, 1e-13)?.value) }, &points).unwrap();
    let fit = tail_fit(&s, &xu.zero.spec(), 3).unwrap();
    let closed = tail_coefficients(&u, 3).unwrap().derivative();
    // the third term is two decades below the second at the inner edge
    for (j, tol) in [1e-3, 1e-3, 1e-2].into_iter().enumerate() {
        assert!((fit.expansion.exponents[j] - closed.exponents[j]).norm() < 1e-12);
        let r = rel(fit.expansion.leading(j), closed.leading(j));
        assert!(r < tol, "term {j}: {r}");
    }
}

fn half_power_model(half: bool) -> FunctionModel {
    power_exp(c(if half { 0.5 } else { 0.0 })).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn fourier_route_agrees_with_direct_route(half in any::<bool>(), cc in 0.1..3.0f64, eta in -15.0..15.0f64) {
        let u = half_power_model(half);
        let a = mellin_via_fourier(&u, cc, eta).unwrap().value;
        let b = mellin_eval(&u, Complex64::new(cc, eta), 1e-13).unwrap().value;
        prop_assert!((a - b).norm() <= 1e-8 * (1.0 + b.norm()), "{} vs {}", a, b);
    }

    #[test]
    fn convolution_is_multiplicative(r0 in 0.3..1.0f64, w0 in 0.3..2.0f64, r1 in 0.3..1.0f64, w1 in 0.3..2.0f64, sre in -1.0..2.0f64, sim in -4.0..4.0f64) {
        let (u, v) = (bump(r0, r0 + w0).unwrap(), bump(r1, r1 + w1).unwrap());
        let w = mult_convolution(&u, &v).unwrap();
        let s = Complex64::new(sre, sim);
        let lhs = mellin_eval(&w, s, 1e-10).unwrap().value;
        let rhs = mellin_eval(&u, s, 1e-12).unwrap().value * mellin_eval(&v, s, 1e-12).unwrap().value;
        prop_assert!(rel(lhs, rhs) < 1e-6, "{} vs {}", lhs, rhs);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn inversion_recovers_the_function(half in any::<bool>(), frac in 0.05..0.95f64, t in 0.5..2.0f64) {
        let u = half_power_model(half);
        let lo = if half { -0.5 } else { 0.0 };
        let cc = lo + frac * (3.0 - lo);
        let h = |s: Complex64| mellin_eval(&u, s, 1e-13).map(|e| e.value).unwrap_or(Complex64::new(f64::NAN, 0.0));
        let v = inverse_mellin(h, cc, t, 20.0, 1e-9).unwrap().value;
        prop_assert!(rel(v, u.eval(t)) < 1e-8, "{} vs {}", v, u.eval(t));
    }
}
