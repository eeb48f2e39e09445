//! The acceptance suite: sixteen numerical criteria, each checked against
//! an independent route (closed form, direct quadrature or a second
//! algorithm) at a fixed tolerance.

use std::cell::RefCell;
use std::f64::consts::{E, PI};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fourier::{damped_power_transform, geometric_grid, laplace_fourier, symmetry_split, tail_fit, HalfPlaneSamples};
use crate::funcmodel::{bump, gauss_pow, monomial_log, power_exp, Endpoint, Expansion, FunctionModel, FundamentalStrip};
use crate::homdist::{
    default_etas, fourier_hom, hm_analytic, hm_product, hm_product_reference, inv_fourier_boundary, log_defect, pair_combo,
    pair_hom, product_boundary, richardson, scaling_check, HomTerm, Side, TestFn,
};
use crate::mellin::{inverse_mellin, mellin_continue_auto, mellin_eval, mult_convolution, rule_check, Rule};
use crate::pwcheck::{default_heights, default_tempered_grid, exp_type_fit, support_estimate, tempered_growth_check, GrowthModel, DEFAULT_R};
use crate::quad::{adaptive_gl, circle_points, de_integrate, Interval, QuadOptions};
use crate::singexp::{converse_map, direct_map, laurent_extract};
use crate::specfun::{factorial, gamma, sqrt_2pi};

const I: Complex64 = Complex64::new(0.0, 1.0);

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm().max(1e-300)
}

/// Run settings shared by all criteria.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct VerifyOptions {
    /// Seed of the random cases; criterion `k` draws from `seed + k`.
    pub seed: u64,
    /// Upper bound on the working quadrature tolerance. Each criterion
    /// works at the smaller of this and its own default.
    pub tol: f64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { seed: 20_240_601, tol: 1e-6 }
    }
}

impl VerifyOptions {
    fn rng(&self, id: usize) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed.wrapping_add(id as u64))
    }

    fn work(&self, default: f64) -> f64 {
        self.tol.min(default)
    }
}

/// Outcome of one criterion.
#[derive(Clone, Debug, Serialize)]
pub struct CriterionReport {
    pub id: usize,
    pub name: &'static str,
    /// Worst observed deviation, in the units of `tolerance`.
    pub measured: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub detail: String,
    /// Set when the reference itself is known to be wrong, so that a
    /// failure is the expected honest outcome.
    pub known_defect: Option<&'static str>,
}

impl CriterionReport {
    fn new(id: usize, measured: f64, tolerance: f64, detail: String) -> Self {
        CriterionReport {
            id,
            name: NAMES[id - 1],
            measured,
            tolerance,
            pass: measured <= tolerance,
            detail,
            known_defect: None,
        }
    }

    fn error(id: usize, tolerance: f64, e: Error) -> Self {
        CriterionReport {
            id,
            name: NAMES[id - 1],
            measured: f64::INFINITY,
            tolerance,
            pass: false,
            detail: format!("error: {e}"),
            known_defect: None,
        }
    }

    /// One status line.
    pub fn line(&self) -> String {
        let status = match (self.pass, self.known_defect) {
            (true, _) => "PASS",
            (false, Some(_)) => "FAIL (known defect)",
            (false, None) => "FAIL",
        };
        format!(
            "[{status}] {:>2} {:<28} measured {:.3e} tol {:.1e}  {}",
            self.id, self.name, self.measured, self.tolerance, self.detail
        )
    }
}

pub const NAMES: [&str; 16] = [
    "gamma identity",
    "rule table",
    "cut-off pole law",
    "singular round trip",
    "inversion round trip",
    "homogeneous fourier",
    "inverse coefficient",
    "tail expansion",
    "symmetry condition",
    "support recovery",
    "scaling law",
    "residue",
    "analyticity",
    "convolution",
    "boundary product",
    "tempered growth",
];

/// Run criterion `id` in `1..=16`.
pub fn run_criterion(id: usize, opts: &VerifyOptions) -> Result<CriterionReport> {
    let r = match id {
        1 => gamma_identity(opts),
        2 => rule_table(opts),
        3 => cutoff_poles(opts),
        4 => singular_round_trip(opts),
        5 => inversion_round_trip(opts),
        6 => homogeneous_fourier(opts),
        7 => inverse_coefficient(opts),
        8 => tail_expansion(opts),
        9 => symmetry_condition(opts),
        10 => support_recovery(opts),
        11 => scaling_law(opts),
        12 => residue(opts),
        13 => analyticity(opts),
        14 => convolution(opts),
        15 => boundary_product(opts),
        16 => tempered_growth(opts),
        _ => return Err(Error::InvalidParameter(format!("no criterion {id}"))),
    };
    Ok(r)
}

/// Run all sixteen criteria in order.
pub fn run_all(opts: &VerifyOptions) -> Vec<CriterionReport> {
    (1..=16).map(|id| run_criterion(id, opts).expect("valid id")).collect()
}

fn guard(id: usize, tol: f64, f: impl FnOnce() -> Result<CriterionReport>) -> CriterionReport {
    f().unwrap_or_else(|e| CriterionReport::error(id, tol, e))
}

fn gamma_identity(opts: &VerifyOptions) -> CriterionReport {
    const TOL: f64 = 1e-8;
    guard(1, TOL, || {
        let u = power_exp(c(0.0))?;
        let mut worst: f64 = 0.0;
        for re in [0.5, 1.0, 1.5, 2.0, 3.0] {
            for im in [0.0, 1.0, -1.0, 5.0, -5.0] {
                let s = Complex64::new(re, im);
                let m = mellin_eval(&u, s, opts.work(1e-12))?;
                worst = worst.max(rel(m.value, gamma(s)));
            }
        }
        Ok(CriterionReport::new(1, worst, TOL, "25 points".into()))
    })
}

fn uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    rng.gen_range(lo..hi)
}

/// A random point inside `strip`, kept a quarter away from finite edges.
fn point_in(rng: &mut ChaCha8Rng, strip: FundamentalStrip) -> Complex64 {
    let lo = strip.alpha + 0.25;
    let hi = strip.beta - 0.25;
    let (lo, hi) = match (lo.is_finite(), hi.is_finite()) {
        (true, true) => (lo, hi.min(lo + 3.0)),
        (true, false) => (lo, lo + 3.0),
        (false, true) => (hi - 3.0, hi),
        (false, false) => (-2.0, 1.0),
    };
    let re = if hi > lo { uniform(rng, lo, hi) } else { 0.5 * (strip.alpha + strip.beta) };
    Complex64::new(re, uniform(rng, -3.0, 3.0))
}

fn random_model(rng: &mut ChaCha8Rng) -> Result<FunctionModel> {
    let d = Complex64::new(uniform(rng, 0.0, 1.5), uniform(rng, -0.5, 0.5));
    match rng.gen_range(0..3) {
        0 => power_exp(d),
        1 => gauss_pow(d),
        _ => {
            let r0 = uniform(rng, 0.2, 1.0);
            bump(r0, r0 + uniform(rng, 0.3, 2.0))
        }
    }
}

fn smooth_model(rng: &mut ChaCha8Rng) -> Result<FunctionModel> {
    if rng.gen_bool(0.5) {
        power_exp(c(0.0))
    } else {
        let r0 = uniform(rng, 0.2, 1.0);
        bump(r0, r0 + uniform(rng, 0.3, 2.0))
    }
}

fn rule_table(opts: &VerifyOptions) -> CriterionReport {
    const TOL: f64 = 1e-6;
    const CASES: usize = 20;
    guard(2, TOL, || {
        let mut rng = opts.rng(2);
        let tol = opts.work(1e-11);
        let mut worst: f64 = 0.0;
        let mut per_rule = Vec::new();
        for r in 0..9 {
            let mut rule_worst: f64 = 0.0;
            for _ in 0..CASES {
                let u = if r == 2 || r == 4 { smooth_model(&mut rng)? } else { random_model(&mut rng)? };
                let rule = match r {
                    0 => Rule::TimesPower(Complex64::new(uniform(&mut rng, -0.3, 0.8), uniform(&mut rng, -1.0, 1.0))),
                    1 => Rule::PowerArgument(uniform(&mut rng, 0.5, 2.0)),
                    2 => Rule::Derivative,
                    3 => Rule::TimesLog,
                    4 => Rule::Euler,
                    5 => Rule::Antiderivative,
                    6 => Rule::Heaviside {
                        complement: rng.gen_bool(0.5),
                    },
                    7 => Rule::HeavisideMonomial {
                        d: Complex64::new(uniform(&mut rng, -1.0, 2.0), uniform(&mut rng, -1.0, 1.0)),
                        k: rng.gen_range(0..4),
                    },
                    _ => Rule::ComplementMonomial {
                        d: Complex64::new(uniform(&mut rng, -1.0, 2.0), uniform(&mut rng, -1.0, 1.0)),
                        k: rng.gen_range(0..4),
                    },
                };
                let s = point_in(&mut rng, rule.strip(u.fundamental_strip()));
                let rep = match rule_check(rule, &u, s, tol) {
                    Ok(r) => r,
                    Err(e) => {
                        let what = format!("rule ({}) on {} at s = {s:.4}: {e}", rule.label(), u.name);
                        return Ok(CriterionReport::new(2, f64::INFINITY, TOL, what));
                    }
                };
                rule_worst = rule_worst.max(rep.rel_err);
            }
            per_rule.push(format!("{:.1e}", rule_worst));
            worst = worst.max(rule_worst);
        }
        Ok(CriterionReport::new(2, worst, TOL, format!("per rule [{}]", per_rule.join(" "))))
    })
}

fn cutoff_poles(opts: &VerifyOptions) -> CriterionReport {
    const TOL: f64 = 1e-6;
    guard(3, TOL, || {
        let mut worst: f64 = 0.0;
        for d in [0.0, 1.0, 1.5] {
            for k in 0..=2usize {
                let u = monomial_log(c(d), k)?;
                let h = |s: Complex64| mellin_continue_auto(&u, s, opts.work(1e-12)).map(|e| e.value);
                let data = laurent_extract(&h, c(-d), k + 1, 0.25)?;
                let expected = if k % 2 == 0 { 1.0 } else { -1.0 } * factorial(k);
                worst = worst.max((data.principal[k] - expected).norm());
            }
        }
        Ok(CriterionReport::new(3, worst, TOL, "9 (d, k) pairs".into()))
    })
}

fn random_expansion(rng: &mut ChaCha8Rng) -> Result<Expansion> {
    let at = if rng.gen_bool(0.5) { Endpoint::Zero } else { Endpoint::Infinity };
    let n = rng.gen_range(1..=8);
    let mut re = uniform(rng, -3.0, 1.0);
    let mut exponents = Vec::with_capacity(n);
    let mut coeffs = Vec::with_capacity(n);
    for _ in 0..n {
        exponents.push(Complex64::new(re, uniform(rng, -2.0, 2.0)));
        let m = rng.gen_range(0..=3);
        let mut row: Vec<Complex64> =
            (0..=m).map(|_| Complex64::new(uniform(rng, -2.0, 2.0), uniform(rng, -2.0, 2.0))).collect();
        if row[m].norm() < 0.1 {
            row[m] += 1.0;
        }
        coeffs.push(row);
        re += uniform(rng, 0.1, 1.0);
    }
    let rem = re + 0.5;
    if at == Endpoint::Infinity {
        exponents.iter_mut().for_each(|p| *p = -*p);
        Expansion::new(at, exponents, coeffs, -rem)
    } else {
        Expansion::new(at, exponents, coeffs, rem)
    }
}

fn singular_round_trip(opts: &VerifyOptions) -> CriterionReport {
    const TOL: f64 = 1e-12;
    guard(4, TOL, || {
        let mut rng = opts.rng(4);
        let mut worst: f64 = 0.0;
        for _ in 0..200 {
            let e = random_expansion(&mut rng)?;
            let back = converse_map(&direct_map(&e), e.at)?;
            if back.exponents.len() != e.exponents.len() || back.remainder_exp != e.remainder_exp {
                return Ok(CriterionReport::new(4, f64::INFINITY, TOL, format!("shape mismatch on {e:?}")));
            }
            for (j, p) in e.exponents.iter().enumerate() {
                worst = worst.max((back.exponents[j] - p).norm());
                if back.coeffs[j].len() != e.coeffs[j].len() {
                    return Ok(CriterionReport::new(4, f64::INFINITY, TOL, "log degree mismatch".into()));
                }
                for (a, b) in e.coeffs[j].iter().zip(&back.coeffs[j]) {
                    worst = worst.max((a - b).norm() / a.norm().max(1.0));
                }
            }
        }
        Ok(CriterionReport::new(4, worst, TOL, "200 expansions".into()))
    })
}

fn inversion_round_trip(opts: &VerifyOptions) -> CriterionReport {
    const TOL: f64 = 1e-6;
    guard(5, TOL, || {
        let mut worst: f64 = 0.0;
        let cases: [(Complex64, fn(f64) -> f64); 2] = [(c(0.0), |t| (-t).exp()), (c(0.5), |t| t.sqrt() * (-t).exp())];
        for (shift, exact) in cases {
            for t in [0.5, 1.0, 2.0] {
                let v = inverse_mellin(|s| gamma(s + shift), 1.0, t, 200.0, opts.work(1e-10))?.value;
                worst = worst.max(rel(v, c(exact(t))));
            }
        }
        Ok(CriterionReport::new(5, worst, TOL, "2 functions x 3 points, c = 1, A = 200".into()))
    })
}

fn homogeneous_fourier(opts: &VerifyOptions) -> CriterionReport {
    const TOL: f64 = 1e-5;
    const ETA: f64 = 1e-3;
    guard(6, TOL, || {
        let mut worst: f64 = 0.0;
        let tol = opts.work(1e-11);
        for a in [c(0.3), c(1.7), Complex64::new(0.5, 0.25)] {
            {
                let side = Side::Plus;
                let closed = fourier_hom(side, a)?;
                for xi in [1.0, -1.0, 4.0, -4.0] {
                    let vals = [ETA, ETA / 2.0, ETA / 4.0]
                        .iter()
                        .map(|&eta| damped_power_transform(side, a, xi, eta, tol).map(|e| e.value))
                        .collect::<Result<Vec<_>>>()?;
                    let lim = richardson(&vals, 1)?.value;
                    worst = worst.max(rel(lim, closed.eval(xi)));
                }
            }
        }
        Ok(CriterionReport::new(6, worst, TOL, "3 exponents x 4 points".into()))
    })
}

fn inverse_coefficient(opts: &VerifyOptions) -> CriterionReport {
    const TOL: f64 = 1e-12;
    guard(7, TOL, || {
        let mut rng = opts.rng(7);
        let mut worst: f64 = 0.0;
        let mut done = 0;
        while done < 100 {
            let a = Complex64::new(uniform(&mut rng, -4.0, 4.0), uniform(&mut rng, -2.0, 2.0));
            if a.im.abs() < 1e-3 && (a.re - a.re.round()).abs() < 1e-3 && a.re < 0.0 {
                continue;
            }
            let side = if rng.gen_bool(0.5) { Side::Plus } else { Side::Minus };
            let f = fourier_hom(side, a)?;
            let g = inv_fourier_boundary(f.sign, f.a);
            if g.side != side || (g.a - a).norm() > 1e-14 * (1.0 + a.norm()) {
                return Ok(CriterionReport::new(7, f64::INFINITY, TOL, format!("exponent or side lost at a = {a}")));
            }
            worst = worst.max((g.coeff * f.coeff - 1.0).norm());
            done += 1;
        }
        Ok(CriterionReport::new(7, worst, TOL, "100 exponents".into()))
    })
}

fn tail_expansion(opts: &VerifyOptions) -> CriterionReport {
    const TOL: f64 = 1e-3;
    guard(8, TOL, || {
        let u = power_exp(c(0.0))?;
        let s = HalfPlaneSamples::ray(&u, &geometric_grid(10.0, 1000.0, 40), opts.work(1e-13))?;
        let fit = tail_fit(&s, &u.zero.spec(), 4)?;
        let mut worst: f64 = 0.0;
        for j in 0..4 {
            // u^(j)(0) = (-1)^j
            let dj = if j % 2 == 0 { 1.0 } else { -1.0 };
            let expected = I.powi(-(j as i32) - 1) * dj / sqrt_2pi();
            worst = worst.max(rel(fit.expansion.leading(j), expected));
        }
        Ok(CriterionReport::new(8, worst, TOL, "c_0..c_3 from 40 samples on [10, 1000]".into()))
    })
}

fn symmetry_condition(opts: &VerifyOptions) -> CriterionReport {
    const TOL: f64 = 1e-3;
    guard(9, TOL, || {
        let u = power_exp(c(0.5))?;
        let grid = geometric_grid(10.0, 1000.0, 40);
        let neg: Vec<f64> = grid.iter().map(|x| -x).collect();
        let spec = u.zero.spec();
        let tol = opts.work(1e-13);
        let plus = tail_fit(&HalfPlaneSamples::ray(&u, &grid, tol)?, &spec, 3)?;
        let minus = tail_fit(&HalfPlaneSamples::ray(&u, &neg, tol)?, &spec, 3)?;
        let (cp, cm) = (plus.expansion.leading(0), minus.expansion.leading(0));
        let law = (I * 1.5 * PI).exp() * cp;
        let measured = rel(cm, law);
        let predicted = symmetry_split(&plus.expansion)?[0].1;
        Ok(CriterionReport::new(
            9,
            measured,
            TOL,
            format!("c+ = {cp:.6}, c- = {cm:.6}, split predicts {predicted:.6}"),
        ))
    })
}

fn support_recovery(_opts: &VerifyOptions) -> CriterionReport {
    const TOL: f64 = 0.1;
    guard(10, TOL, || {
        let u = bump(1.0 / E, E)?;
        let h = |s: Complex64| mellin_eval(&u, s, 1e-10).map(|v| v.value);
        let r = exp_type_fit(&h, GrowthModel::MellinEntire, &DEFAULT_R, &default_heights())?;
        let s = support_estimate(&r)?;
        let contains = s.low <= 1.0 / E && s.high >= E;
        let measured = if contains { (r.a - 1.0).abs() } else { f64::INFINITY };
        Ok(CriterionReport::new(
            10,
            measured,
            TOL,
            format!("a = {:.4}, support estimate [{:.4}, {:.4}]", r.a, s.low, s.high),
        ))
    })
}

fn scaling_law(opts: &VerifyOptions) -> CriterionReport {
    const TOL: f64 = 1e-8;
    const SLOPE_TOL: f64 = 1e-6;
    guard(11, TOL, || {
        let mut rng = opts.rng(11);
        let tol = opts.work(1e-12);
        let phi = TestFn::gaussian(0.3, 1.0, 6);
        let mut worst: f64 = 0.0;
        let mut oracle: f64 = 0.0;
        let mut done = 0;
        while done < 50 {
            let a = Complex64::new(uniform(&mut rng, -3.5, 2.0), uniform(&mut rng, -1.0, 1.0));
            if a.im.abs() < 0.1 && (a.re - a.re.round()).abs() < 0.1 && a.re < -0.5 {
                continue;
            }
            let lambda = uniform(&mut rng, 0.3, 3.0);
            let side = if rng.gen_bool(0.5) { Side::Plus } else { Side::Minus };
            let t = HomTerm::new(side, a, 0, c(1.0));
            worst = worst.max(scaling_check(&t, &phi, lambda, tol)?.rel_err);
            if a.re > -1.0 {
                oracle = oracle.max(brute_force_scaling(&t, &phi, lambda, tol)?);
            }
            done += 1;
        }
        let mut slope: f64 = 0.0;
        for lambda in [0.25, 0.6, 1.7, 4.0] {
            slope = slope.max(log_defect(1, &phi, lambda, tol)?.rel_err);
        }
        let measured = if slope <= SLOPE_TOL { worst.max(oracle) } else { f64::INFINITY };
        Ok(CriterionReport::new(
            11,
            measured,
            TOL,
            format!("pairing {worst:.1e}, quadrature oracle {oracle:.1e}, log slope {slope:.1e} (tol {SLOPE_TOL:.0e})"),
        ))
    })
}

/// Direct quadrature of `∫ |x|^a φ(λx)` on the side of `t`, compared with
/// `λ^(-a-1)` times the unscaled integral and with the regularized pairing.
fn brute_force_scaling(t: &HomTerm, phi: &TestFn, lambda: f64, tol: f64) -> Result<f64> {
    let sign = match t.side {
        Side::Plus => 1.0,
        Side::Minus => -1.0,
    };
    let a = t.a;
    let integral = |l: f64| {
        de_integrate(
            |x: f64| (a * x.ln()).exp() * phi.eval(sign * l * x),
            Interval::UpperInfinite(0.0),
            QuadOptions::with_tol(tol),
        )
        .map(|e| e.value)
    };
    let scaled = integral(lambda)?;
    let base = integral(1.0)?;
    let law = base * (-(a + 1.0) * lambda.ln()).exp();
    let paired = pair_hom(t, phi, tol)?.value;
    Ok(rel(scaled, law).max(rel(paired, base)))
}

fn residue(opts: &VerifyOptions) -> CriterionReport {
    const TOL: f64 = 1e-6;
    guard(12, TOL, || {
        let phi = TestFn::gaussian(0.4, 1.0, 6);
        let target = phi.eval(0.0);
        let tol = opts.work(1e-12);
        let mut means = Vec::new();
        let mut spread = Vec::new();
        for radius in [1e-1, 1e-2, 1e-3] {
            let mut sum = Complex64::new(0.0, 0.0);
            let mut far: f64 = 0.0;
            let n = 32;
            for (a, _) in circle_points(c(-1.0), radius, n) {
                let v = (a + 1.0) * pair_hom(&HomTerm::new(Side::Plus, a, 0, c(1.0)), &phi, tol)?.value;
                far = far.max((v - target).norm());
                sum += v;
            }
            means.push((sum / n as f64 - target).norm());
            spread.push(far);
        }
        let shrinking = spread.windows(2).all(|w| w[1] < w[0]);
        let measured = if shrinking { means.iter().cloned().fold(0.0, f64::max) } else { f64::INFINITY };
        Ok(CriterionReport::new(
            12,
            measured,
            TOL,
            format!("pointwise distance {:.1e} -> {:.1e} -> {:.1e}", spread[0], spread[1], spread[2]),
        ))
    })
}

fn analyticity(opts: &VerifyOptions) -> CriterionReport {
    const TOL: f64 = 1e-8;
    guard(13, TOL, || {
        let u = power_exp(c(0.0))?;
        let tol = opts.work(1e-13);
        let corners = [
            Complex64::new(-2.0, -2.0),
            Complex64::new(2.0, -2.0),
            Complex64::new(2.0, -0.5),
            Complex64::new(-2.0, -0.5),
        ];
        let fail = RefCell::new(None);
        let mut total = Complex64::new(0.0, 0.0);
        for k in 0..4 {
            let (z0, z1) = (corners[k], corners[(k + 1) % 4]);
            let dz = z1 - z0;
            let f = |t: f64| match laplace_fourier(&u, z0 + dz * t, tol) {
                Ok(e) => e.value * dz,
                Err(e) => {
                    fail.borrow_mut().get_or_insert(e);
                    Complex64::new(0.0, 0.0)
                }
            };
            total += adaptive_gl(f, &[0.0, 0.5, 1.0], 1e-12)?.value;
        }
        if let Some(e) = fail.into_inner() {
            return Err(e);
        }
        Ok(CriterionReport::new(13, total.norm(), TOL, "rectangle [-2, 2] x [-2i, -0.5i]".into()))
    })
}

fn convolution(opts: &VerifyOptions) -> CriterionReport {
    const TOL: f64 = 1e-6;
    guard(14, TOL, || {
        let mut rng = opts.rng(14);
        let tol = opts.work(1e-11);
        let mut worst: f64 = 0.0;
        for _ in 0..20 {
            let r0 = uniform(&mut rng, 0.2, 1.0);
            let u = bump(r0, r0 + uniform(&mut rng, 0.3, 2.0))?;
            let r0 = uniform(&mut rng, 0.2, 1.0);
            let v = bump(r0, r0 + uniform(&mut rng, 0.3, 2.0))?;
            let s = Complex64::new(uniform(&mut rng, -1.0, 2.0), uniform(&mut rng, -3.0, 3.0));
            let w = mult_convolution(&u, &v)?;
            let lhs = mellin_eval(&w, s, tol)?.value;
            let rhs = mellin_eval(&u, s, tol)?.value * mellin_eval(&v, s, tol)?.value;
            worst = worst.max(rel(lhs, rhs));
        }
        Ok(CriterionReport::new(14, worst, TOL, "20 bump pairs".into()))
    })
}

fn boundary_product(opts: &VerifyOptions) -> CriterionReport {
    const TOL: f64 = 1e-4;
    let mut r = guard(15, TOL, || {
        let phi = TestFn::gaussian(0.0, 1.0, 6);
        let tol = opts.work(1e-12);
        let h = hm_analytic(0);
        let lim = product_boundary(h.clone(), h, &phi, &default_etas(), tol)?.value;
        let reference = pair_combo(&hm_product_reference(0, 0), &phi, tol)?.value;
        let corrected = pair_combo(&hm_product(0, 0), &phi, tol)?.value;
        Ok(CriterionReport::new(
            15,
            (lim - reference).norm(),
            TOL,
            format!(
                "limit {lim:.8}, reference combo {reference:.8}, corrected combo {corrected:.8} (off by {:.1e})",
                (lim - corrected).norm()
            ),
        ))
    });
    r.known_defect = Some("the reference combination has -πδ where the limit carries +iπδ'");
    r
}

fn tempered_growth(_opts: &VerifyOptions) -> CriterionReport {
    guard(16, 0.0, || {
        let grid = default_tempered_grid();
        let mut found = Vec::new();
        let mut misses = 0.0;
        for m in 0..4u32 {
            let h = hm_analytic(m as usize);
            let r = tempered_growth_check(&|z| Ok(h(z)), &grid)?;
            if r.n != Some(m + 1) {
                misses += 1.0;
            }
            found.push(r.n.map_or("-".to_string(), |n| n.to_string()));
        }
        Ok(CriterionReport::new(16, misses, 0.0, format!("orders [{}] for m = 0..3", found.join(" "))))
    })
}
