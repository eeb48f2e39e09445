//! Mellin transform: evaluation in the fundamental strip, meromorphic
//! continuation, inversion along vertical lines, and the transformation rules.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::funcmodel::{heaviside_complement, heaviside_unit, Expansion, FunctionModel, FundamentalStrip};
use crate::io::complex_obj;
use crate::quad::{adaptive_gl, cauchy_derivative, de_integrate, de_integrate_raw, gl_panel, Estimate, Interval, QuadOptions};
use crate::specfun::{factorial, gamma, near_negative_integer};

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Default absolute-plus-relative quadrature target.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Distance below which `s` counts as sitting on a pole.
pub const POLE_GUARD: f64 = 1e-6;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// `v * exp(-s x)` without intermediate overflow; zero once `e^-x` leaves
/// the floating-point range, where any integrand inside its strip is negligible.
fn weighted(v: Complex64, s: Complex64, x: f64) -> Complex64 {
    if v == ZERO || x.abs() > 700.0 {
        return ZERO;
    }
    // overflow of u itself far out, where t^(s-1) u(t) is negligible inside the strip
    if x.abs() > 300.0 && !(v.re.is_finite() && v.im.is_finite()) {
        return ZERO;
    }
    (v.ln() - s * x).exp()
}

/// Breakpoints in `x = -ln t` for the `t`-interval `[lo, hi]`, ascending.
fn x_breaks(lo: f64, hi: f64, extra_t: &[f64]) -> Vec<f64> {
    let mut xs = vec![-hi.ln(), -lo.ln()];
    for &t in extra_t {
        if t > lo && t < hi {
            xs.push(-t.ln());
        }
    }
    xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    xs.dedup();
    xs
}

fn model_breaks(u: &FunctionModel) -> Vec<f64> {
    let mut v = u.kinks.clone();
    v.push(1.0);
    v
}

fn integrate_pieces<F>(f: &F, xs: &[f64], opts: QuadOptions) -> Result<Estimate>
where
    F: Fn(f64) -> Complex64,
{
    let mut total = Estimate::exact(ZERO);
    for w in xs.windows(2) {
        if w[0] < w[1] {
            total = total + de_integrate(f, Interval::new(w[0], w[1]), opts)?;
        }
    }
    Ok(total)
}

fn check_strip(strip: FundamentalStrip, s: Complex64) -> Result<()> {
    if strip.contains(s) {
        Ok(())
    } else {
        Err(Error::StripViolation {
            s,
            alpha: strip.alpha,
            beta: strip.beta,
        })
    }
}

/// `M[u](s) = int_0^inf t^(s-1) u(t) dt` for `s` in the fundamental strip.
pub fn mellin_eval(u: &FunctionModel, s: Complex64, tol: f64) -> Result<Estimate> {
    check_strip(u.fundamental_strip(), s)?;
    let f = |x: f64| weighted(u.eval((-x).exp()), s, x);
    let xs = x_breaks(u.support.lo, u.support.hi, &model_breaks(u));
    integrate_pieces(&f, &xs, QuadOptions::with_tol(tol))
}

/// Principal parts at the poles `-p_j`, `j < m`, of an expansion at zero.
pub fn principal_sum(e: &Expansion, m: usize, s: Complex64) -> Complex64 {
    let mut acc = ZERO;
    for j in 0..m.min(e.len()) {
        let w = s + e.exponents[j];
        for (k, a) in e.coeffs[j].iter().enumerate() {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            acc += a * (sign * factorial(k)) / w.powi(k as i32 + 1);
        }
    }
    acc
}

/// `t^s` times terms `j0..j1` of the expansion at `t = e^-x`, in log form.
fn series_times_power(e: &Expansion, j0: usize, j1: usize, s: Complex64, x: f64) -> Complex64 {
    let lt = -x;
    let mut acc = ZERO;
    for j in j0..j1 {
        let mut poly = ZERO;
        for a in e.coeffs[j].iter().rev() {
            poly = poly * lt + a;
        }
        if poly != ZERO {
            acc += poly * ((e.exponents[j] + s) * lt).exp();
        }
    }
    acc
}

/// Meromorphic continuation of `M[u]` to `Re s > -Re p_m` using `m` expansion terms.
///
/// The small-`t` remainder `u - S_m` is taken from the remaining expansion
/// terms wherever the full expansion reproduces `u` to rounding, and by direct
/// subtraction elsewhere.
pub fn mellin_continue(u: &FunctionModel, s: Complex64, m: usize, tol: f64) -> Result<Estimate> {
    let e = &u.zero;
    if m > e.len() {
        return Err(Error::InsufficientTruncation {
            needed: m,
            available: e.len(),
        });
    }
    let strip = u.fundamental_strip();
    let alpha = -e.remainder_exponent(m);
    let lower = if u.support.lo > 0.0 { f64::NEG_INFINITY } else { alpha };
    if !(s.re > lower && s.re < strip.beta) {
        return Err(Error::StripViolation {
            s,
            alpha: lower,
            beta: strip.beta,
        });
    }
    for j in 0..m {
        let q = -e.exponents[j];
        if (s - q).norm() < POLE_GUARD {
            return Err(Error::PoleProximity {
                s,
                pole: q,
                guard: POLE_GUARD,
            });
        }
    }
    let opts = QuadOptions::with_tol(tol);
    let principal = principal_sum(e, m, s);
    let n = e.len();
    // rounding left by direct subtraction, tracked to set the attainable floor
    let cancel = std::cell::Cell::new(0.0f64);
    let small = |x: f64| -> Complex64 {
        let t = (-x).exp();
        let v = u.eval(t);
        if t == 0.0 {
            return series_times_power(e, m, n, s, x);
        }
        let full = e.partial_sum(t, n);
        let noise = 2.0 * f64::EPSILON * (v.norm() + e.partial_abs(t, m));
        if (v - full).norm() <= noise {
            series_times_power(e, m, n, s, x)
        } else {
            let mag = (v.norm() + e.partial_abs(t, m)) * (-s.re * x).exp() * (1.0 + x.abs());
            if mag.is_finite() {
                cancel.set(cancel.get().max(f64::EPSILON * mag));
            }
            weighted(v, s, x) - series_times_power(e, 0, m, s, x)
        }
    };
    let mut inner = model_breaks(u);
    inner.extend([u.support.lo, u.support.hi]);
    let xs = x_breaks(0.0, 1.0, &inner);
    let mut near = Estimate::exact(ZERO);
    for w in xs.windows(2) {
        if w[0] < w[1] {
            cancel.set(0.0);
            let (est, ok) = de_integrate_raw(&small, Interval::new(w[0], w[1]), opts)?;
            if !ok && est.error > 256.0 * cancel.get() {
                return Err(Error::accuracy("continuation remainder integral", est.error, opts.tol));
            }
            near = near + Estimate::new(est.value, est.error.max(16.0 * cancel.get()));
        }
    }
    let far = if u.support.hi > 1.0 {
        let f = |x: f64| weighted(u.eval((-x).exp()), s, x);
        let xs = x_breaks(u.support.lo.max(1.0), u.support.hi, &u.kinks);
        integrate_pieces(&f, &xs, opts)?
    } else {
        Estimate::exact(ZERO)
    };
    Ok(Estimate::new(principal, 0.0) + near + far)
}

/// Smallest truncation order that reaches `s`, with one extra term of margin when available.
pub fn auto_order(u: &FunctionModel, s: Complex64) -> Result<usize> {
    let e = &u.zero;
    for m in 0..=e.len() {
        if e.remainder_exponent(m) > -s.re {
            return Ok(if m < e.len() && e.remainder_exponent(m) + s.re < 0.5 { m + 1 } else { m });
        }
    }
    Err(Error::InsufficientTruncation {
        needed: e.len() + 1,
        available: e.len(),
    })
}

/// Continuation with an automatically chosen truncation order.
pub fn mellin_continue_auto(u: &FunctionModel, s: Complex64, tol: f64) -> Result<Estimate> {
    let strip = u.fundamental_strip();
    if strip.contains(s) && (s.re - strip.alpha >= 0.5 || u.zero.len() == 0) {
        return mellin_eval(u, s, tol);
    }
    let m = auto_order(u, s)?;
    mellin_continue(u, s, m, tol)
}

/// One sample of a transform on a vertical line.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LineSample {
    pub eta: f64,
    #[serde(with = "complex_obj")]
    pub value: Complex64,
    pub error: f64,
}

/// `M[u](c + i eta)` for each `eta`, continued when `c` is left of the strip.
pub fn line_samples(u: &FunctionModel, c: f64, etas: &[f64], tol: f64) -> Result<Vec<LineSample>> {
    etas.iter()
        .map(|&eta| {
            let e = mellin_continue_auto(u, Complex64::new(c, eta), tol)?;
            Ok(LineSample {
                eta,
                value: e.value,
                error: e.error,
            })
        })
        .collect()
}

/// Inverse Mellin transform `(1/2pi) int_{-A}^{A} t^-(c+i eta) h(c + i eta) d eta`.
///
/// The truncated tails are estimated from an exponential fit of `|h|` on
/// `[0.9A, A]`; an estimate above `tol` is an accuracy error.
pub fn inverse_mellin<H>(h: H, c: f64, t: f64, a: f64, tol: f64) -> Result<Estimate>
where
    H: Fn(Complex64) -> Complex64,
{
    if !(t > 0.0) || !(a > 0.0) {
        return Err(Error::InvalidParameter("need t > 0 and A > 0".into()));
    }
    let lt = t.ln();
    let g = |eta: f64| {
        let s = Complex64::new(c, eta);
        h(s) * (-s * lt).exp()
    };
    let n = (2.0 * a).ceil() as usize;
    let breaks: Vec<f64> = (0..=n).map(|i| -a + 2.0 * a * i as f64 / n as f64).collect();
    let body = adaptive_gl(g, &breaks, tol)?;
    let mut tail = 0.0;
    for sign in [-1.0, 1.0] {
        let h1 = h(Complex64::new(c, sign * 0.9 * a)).norm();
        let h2 = h(Complex64::new(c, sign * a)).norm();
        let kappa = (h1 / h2).ln() / (0.1 * a);
        tail += if h2 == 0.0 {
            0.0
        } else if kappa > 0.0 {
            h2 / kappa
        } else {
            f64::INFINITY
        };
    }
    let scale = 1.0 / (2.0 * std::f64::consts::PI);
    let tail = tail * t.powf(-c) * scale;
    let value = body.value * scale;
    let err = body.error * scale + tail;
    if tail > tol * value.norm().max(1e-300) && tail > tol {
        return Err(Error::accuracy("inverse Mellin tail", tail, tol));
    }
    Ok(Estimate::new(value, err))
}

/// `int_X^inf x^k e^{-lambda x} dx` for `Re lambda > 0`.
fn upper_incomplete(k: usize, lambda: Complex64, x: f64) -> Complex64 {
    let mut acc = ZERO;
    for i in 0..=k {
        acc += c(factorial(k) / factorial(i) * x.powi(i as i32)) / lambda.powi((k - i) as i32 + 1);
    }
    acc * (-lambda * x).exp()
}

/// `M[u](c + i eta)` as a Fourier integral in `x = -ln t` with an unnormalized kernel.
///
/// Composite Gauss-Legendre on a truncated range, plus a closed-form tail
/// from the expansion at zero beyond `t = 1e-3`.
pub fn mellin_via_fourier(u: &FunctionModel, cc: f64, eta: f64) -> Result<Estimate> {
    let s = Complex64::new(cc, eta);
    check_strip(u.fundamental_strip(), s)?;
    let g = |x: f64| weighted(u.eval((-x).exp()), s, x);
    let mut x_hi = -(1e-3f64).ln();
    let mut tail = ZERO;
    if u.support.lo > 0.0 {
        x_hi = -u.support.lo.ln();
    } else {
        let e = &u.zero;
        let rem = e.remainder_exponent(e.len());
        let t = (-x_hi).exp();
        if rem.is_finite() && t.powf(rem + cc) > 1e-15 {
            return Err(Error::InsufficientTruncation {
                needed: e.len() + 1,
                available: e.len(),
            });
        }
        for j in 0..e.len() {
            let lambda = s + e.exponents[j];
            for (k, a) in e.coeffs[j].iter().enumerate() {
                // ln^k t = (-x)^k
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                tail += a * sign * upper_incomplete(k, lambda, x_hi);
            }
        }
    }
    let x_lo = if u.support.hi.is_finite() {
        -u.support.hi.ln()
    } else {
        let mut x = -1.0;
        let scale = g(0.0).norm().max(g(-0.5).norm()).max(1e-300);
        while x > -700.0 {
            if g(x).norm() < 1e-18 * scale && g(0.75 * x).norm() < 1e-18 * scale {
                break;
            }
            x *= 2.0;
        }
        x.max(-700.0)
    };
    let width = 1.0f64.min(std::f64::consts::PI / eta.abs().max(1e-300));
    let mut breaks = vec![x_lo, x_hi];
    if x_lo < 0.0 && 0.0 < x_hi {
        breaks.push(0.0);
    }
    breaks.extend(u.kinks.iter().map(|t| -t.ln()).filter(|x| *x > x_lo && *x < x_hi));
    breaks.sort_by(|a, b| a.partial_cmp(b).unwrap());
    breaks.dedup();
    let mut body = ZERO;
    let mut err = 0.0;
    for w in breaks.windows(2) {
        let n = ((w[1] - w[0]) / width).ceil().max(1.0) as usize;
        let h = (w[1] - w[0]) / n as f64;
        for i in 0..n {
            let a = w[0] + i as f64 * h;
            let v = gl_panel(&g, a, a + h, 24);
            err += (v - gl_panel(&g, a, a + h, 16)).norm();
            body += v;
        }
    }
    Ok(Estimate::new(body + tail, err))
}

/// Multiplicative convolution `(u * v)(t) = int_0^inf u(t/tau) v(tau) dtau/tau`.
pub fn mult_convolve(u: &FunctionModel, v: &FunctionModel, t: f64, tol: f64) -> Result<Estimate> {
    if !(t > 0.0) {
        return Err(Error::InvalidParameter(format!("t = {t} must be positive")));
    }
    let lt = t.ln();
    let lo = v.support.lo.ln().max(lt - u.support.hi.ln());
    let hi = v.support.hi.ln().min(lt - u.support.lo.ln());
    if !(lo < hi) {
        return Ok(Estimate::exact(ZERO));
    }
    let mut ys = vec![lo, hi];
    for y in [0.0, lt] {
        if y > lo && y < hi {
            ys.push(y);
        }
    }
    ys.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let f = |y: f64| u.eval((lt - y).exp()) * v.eval(y.exp());
    integrate_pieces(&f, &ys, QuadOptions::with_tol(tol))
}

/// Best-effort value of [`mult_convolve`] for use inside other integrals.
fn mult_convolve_value(u: &FunctionModel, v: &FunctionModel, t: f64, tol: f64) -> Complex64 {
    let lt = t.ln();
    let lo = v.support.lo.ln().max(lt - u.support.hi.ln());
    let hi = v.support.hi.ln().min(lt - u.support.lo.ln());
    if !(lo < hi) {
        return ZERO;
    }
    let f = |y: f64| u.eval((lt - y).exp()) * v.eval(y.exp());
    let opts = QuadOptions::with_tol(tol);
    let mut ys = vec![lo, hi];
    if lt > lo && lt < hi {
        ys.insert(1, lt);
    }
    ys.windows(2)
        .map(|w| match de_integrate_raw(&f, Interval::Finite(w[0], w[1]), opts) {
            Ok((e, _)) => e.value,
            Err(_) => c(f64::NAN),
        })
        .sum()
}

/// The convolution `u * v` as a model; both supports must be compact in `(0, inf)`.
pub fn mult_convolution(u: &FunctionModel, v: &FunctionModel) -> Result<FunctionModel> {
    let compact = |w: &FunctionModel| w.support.lo > 0.0 && w.support.hi.is_finite();
    if !(compact(u) && compact(v)) {
        return Err(Error::InvalidParameter(
            "convolution model needs supports compact in (0, inf)".into(),
        ));
    }
    let (a, b) = (u.clone(), v.clone());
    Ok(FunctionModel::new(
        format!("{}*{}", u.name, v.name),
        move |t| mult_convolve_value(&a, &b, t, 1e-13),
        Expansion::empty(),
    )
    .with_support(u.support.lo * v.support.lo, u.support.hi * v.support.hi))
}

/// `M[u](s) / Gamma(s)`, with the limit at the poles of the gamma function.
pub fn normalized_mellin(u: &FunctionModel, s: Complex64, tol: f64) -> Result<Estimate> {
    if !near_negative_integer(s, POLE_GUARD) && !(s == c(0.0)) {
        let m = mellin_continue_auto(u, s, tol)?;
        let g = gamma(s);
        return Ok(Estimate::new(m.value / g, m.error / g.norm()));
    }
    let j = (-s.re.round()) as usize;
    let q = c(-(j as f64));
    let mut radius: f64 = 0.25;
    for p in &u.zero.exponents {
        let d = (-*p - q).norm();
        if d > 1e-12 {
            radius = radius.min(0.5 * d);
        }
    }
    let h = |z: Complex64| mellin_continue_auto(u, z, tol).map(|e| e.value);
    let (coeffs, _) = crate::singexp::laurent_coefficients(&h, q, radius, 2, 256)?;
    let residue = coeffs[0];
    let second = coeffs[1];
    if second.norm() > 1e-6 * (1.0 + residue.norm()) {
        return Err(Error::InvalidParameter(format!(
            "M[u] has a pole of order at least two at s = -{j}"
        )));
    }
    let gres = if j % 2 == 0 { 1.0 } else { -1.0 } / factorial(j);
    Ok(Estimate::new(residue / gres, 1e-6 * residue.norm().max(1e-12)))
}

/// The nine transformation rules.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Rule {
    /// `M[t^z f](s) = M[f](s + z)`
    TimesPower(Complex64),
    /// `M[f(t^p)](s) = M[f](s/p)/p`, `p > 0`
    PowerArgument(f64),
    /// `M[f'](s) = -(s - 1) M[f](s - 1)`
    Derivative,
    /// `M[ln(t) f](s) = d/ds M[f](s)`
    TimesLog,
    /// `M[t f'](s) = -s M[f](s)`
    Euler,
    /// `M[int_0^t f](s) = -M[f](s + 1)/s`
    Antiderivative,
    /// `M[H](s) = 1/s`; the complement `1 - H` gives `-1/s`.
    Heaviside { complement: bool },
    /// `M[H t^d ln^k t](s) = (-1)^k k!/(s+d)^(k+1)`
    HeavisideMonomial { d: Complex64, k: usize },
    /// `M[(1-H) t^d ln^k t](s) = -(-1)^k k!/(s+d)^(k+1)`
    ComplementMonomial { d: Complex64, k: usize },
}

impl Rule {
    pub fn label(&self) -> &'static str {
        match self {
            Rule::TimesPower(_) => "i",
            Rule::PowerArgument(_) => "ii",
            Rule::Derivative => "iii",
            Rule::TimesLog => "iv",
            Rule::Euler => "v",
            Rule::Antiderivative => "vi",
            Rule::Heaviside { .. } => "vii",
            Rule::HeavisideMonomial { .. } => "viii",
            Rule::ComplementMonomial { .. } => "ix",
        }
    }

    /// Strip of the transformed function given the strip of `f`.
    pub fn strip(&self, f: FundamentalStrip) -> FundamentalStrip {
        let (a, b) = (f.alpha, f.beta);
        match *self {
            Rule::TimesPower(z) => FundamentalStrip::new(a - z.re, b - z.re),
            Rule::PowerArgument(p) => FundamentalStrip::new(p * a, p * b),
            Rule::Derivative => FundamentalStrip::new(a + 1.0, b + 1.0),
            Rule::TimesLog | Rule::Euler => f,
            Rule::Antiderivative => FundamentalStrip::new(a - 1.0, (b - 1.0).min(0.0)),
            Rule::Heaviside { complement: false } => FundamentalStrip::new(0.0, f64::INFINITY),
            Rule::Heaviside { complement: true } => FundamentalStrip::new(f64::NEG_INFINITY, 0.0),
            Rule::HeavisideMonomial { d, .. } => FundamentalStrip::new(-d.re, f64::INFINITY),
            Rule::ComplementMonomial { d, .. } => FundamentalStrip::new(f64::NEG_INFINITY, -d.re),
        }
    }
}

/// Both sides of a transformation rule at `s`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct RuleReport {
    #[serde(with = "complex_obj")]
    pub lhs: Complex64,
    #[serde(with = "complex_obj")]
    pub rhs: Complex64,
    pub rel_err: f64,
}

fn monomial_with_heaviside(d: Complex64, k: usize, complement: bool) -> FunctionModel {
    let base = if complement { heaviside_complement() } else { heaviside_unit() };
    let f = base.evaluator();
    let lo = base.support.lo;
    let hi = base.support.hi;
    let mut zero = Expansion::monomial(d, k, c(1.0));
    if complement {
        zero = Expansion::empty();
    }
    let m = FunctionModel::new(
        format!("H t^{d} ln^{k} t"),
        move |t| f(t) * crate::specfun::pow_pos(t, d) * t.ln().powi(k as i32),
        zero,
    )
    .with_support(lo, hi);
    if complement {
        m.with_decay(crate::funcmodel::Decay::PowerBound(-d.re))
    } else {
        m
    }
}

/// Evaluate a transformation rule: `lhs` is the Mellin transform of the
/// transformed function, `rhs` the closed-form right side.
pub fn rule_check(rule: Rule, u: &FunctionModel, s: Complex64, tol: f64) -> Result<RuleReport> {
    let strip = u.fundamental_strip();
    let target = rule.strip(strip);
    check_strip(target, s)?;
    let (lhs, rhs) = match rule {
        Rule::TimesPower(z) => (
            mellin_eval(&u.times_power(z), s, tol)?.value,
            mellin_eval(u, s + z, tol)?.value,
        ),
        Rule::PowerArgument(p) => {
            if !(p > 0.0) {
                return Err(Error::InvalidParameter(format!("rule (ii) needs p > 0, got {p}")));
            }
            (
                mellin_eval(&u.compose_power(p)?, s, tol)?.value,
                mellin_eval(u, s / p, tol)?.value / p,
            )
        }
        Rule::Derivative => (
            mellin_eval(&u.derivative()?, s, tol)?.value,
            -(s - 1.0) * mellin_eval(u, s - 1.0, tol)?.value,
        ),
        Rule::TimesLog => {
            let r = 0.5 * strip.margin(s).min(0.5);
            let fail = std::cell::RefCell::new(None);
            let d = cauchy_derivative(
                |z| match mellin_eval(u, z, tol) {
                    Ok(e) => e.value,
                    Err(e) => {
                        fail.borrow_mut().get_or_insert(e);
                        ZERO
                    }
                },
                s,
                1,
                r,
                32,
            );
            if let Some(e) = fail.into_inner() {
                return Err(e);
            }
            (mellin_eval(&u.times_log(), s, tol)?.value, d)
        }
        Rule::Euler => (mellin_eval(&u.euler()?, s, tol)?.value, -s * mellin_eval(u, s, tol)?.value),
        Rule::Antiderivative => (
            mellin_eval(&u.antiderivative()?, s, tol)?.value,
            -mellin_eval(u, s + 1.0, tol)?.value / s,
        ),
        Rule::Heaviside { complement } => {
            let h = if complement { heaviside_complement() } else { heaviside_unit() };
            let sign = if complement { -1.0 } else { 1.0 };
            (mellin_eval(&h, s, tol)?.value, sign / s)
        }
        Rule::HeavisideMonomial { d, k } | Rule::ComplementMonomial { d, k } => {
            let complement = matches!(rule, Rule::ComplementMonomial { .. });
            let f = monomial_with_heaviside(d, k, complement);
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 } * if complement { -1.0 } else { 1.0 };
            (
                mellin_eval(&f, s, tol)?.value,
                c(sign * factorial(k)) / (s + d).powi(k as i32 + 1),
            )
        }
    };
    let rel_err = (lhs - rhs).norm() / rhs.norm().max(1e-300);
    Ok(RuleReport { lhs, rhs, rel_err })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcmodel::{bump, gauss_pow, monomial_log, power_exp};

    fn rel(a: Complex64, b: Complex64) -> f64 {
        (a - b).norm() / b.norm()
    }

    #[test]
    fn exp_gives_gamma() {
        let u = power_exp(c(0.0)).unwrap();
        for s in [Complex64::new(0.5, 0.0), Complex64::new(2.0, 5.0), Complex64::new(1.0, -1.0)] {
            let m = mellin_eval(&u, s, 1e-13).unwrap();
            assert!(rel(m.value, gamma(s)) < 1e-11, "{s}");
        }
    }

    #[test]
    fn outside_strip_is_rejected() {
        let u = power_exp(c(0.0)).unwrap();
        assert!(matches!(mellin_eval(&u, c(-0.5), 1e-10), Err(Error::StripViolation { .. })));
    }

    #[test]
    fn gauss_pow_gives_half_gamma() {
        // M[t^d e^{-t^2}](s) = Gamma((s+d)/2)/2
        let u = gauss_pow(c(-0.5)).unwrap();
        let s = Complex64::new(1.2, 0.7);
        let m = mellin_eval(&u, s, 1e-13).unwrap();
        assert!(rel(m.value, gamma((s - 0.5) / 2.0) / 2.0) < 1e-11);
    }

    #[test]
    fn continuation_matches_gamma() {
        let u = power_exp(c(0.0)).unwrap();
        for s in [Complex64::new(-0.5, 0.0), Complex64::new(-2.5, 1.0), Complex64::new(-6.3, -0.4)] {
            let m = mellin_continue_auto(&u, s, 1e-12).unwrap();
            assert!(rel(m.value, gamma(s)) < 1e-9, "{s}: {}", rel(m.value, gamma(s)));
        }
    }

    #[test]
    fn continuation_agrees_with_strip_value() {
        let u = power_exp(c(0.5)).unwrap();
        let s = Complex64::new(0.3, 0.2);
        let a = mellin_eval(&u, s, 1e-13).unwrap().value;
        for m in 0..4 {
            let b = mellin_continue(&u, s, m, 1e-13).unwrap().value;
            assert!(rel(b, a) < 1e-10, "m={m}");
        }
    }

    #[test]
    fn continuation_of_exact_expansion() {
        // M[omega t^d] = 1/(s+d) + entire; compare against the hard cutoff form
        let u = monomial_log(c(0.5), 0).unwrap();
        let s = Complex64::new(-2.0, 0.3);
        let v = mellin_continue(&u, s, 1, 1e-12).unwrap().value;
        let direct = 1.0 / (s + 0.5)
            + de_integrate(
                |t| (u.eval(t) - crate::specfun::pow_pos(t, c(0.5))) * crate::specfun::pow_pos(t, s - 1.0),
                Interval::Finite(0.5, 1.0),
                QuadOptions::default(),
            )
            .unwrap()
            .value;
        assert!(rel(v, direct) < 1e-10);
    }

    #[test]
    fn pole_guard_and_truncation_errors() {
        let u = power_exp(c(0.0)).unwrap();
        assert!(matches!(
            mellin_continue(&u, c(-1.0), 3, 1e-10),
            Err(Error::PoleProximity { .. })
        ));
        assert!(matches!(
            mellin_continue(&u, c(-2.5), 1, 1e-10),
            Err(Error::StripViolation { .. })
        ));
    }

    #[test]
    fn fourier_route_matches() {
        let u = power_exp(c(0.5)).unwrap();
        for eta in [0.0, 3.0, -20.0] {
            let s = Complex64::new(0.2, eta);
            let a = mellin_eval(&u, s, 1e-13).unwrap().value;
            let b = mellin_via_fourier(&u, 0.2, eta).unwrap().value;
            assert!((a - b).norm() < 1e-10 * (1.0 + a.norm()), "{eta}");
        }
    }

    #[test]
    fn inversion_round_trip() {
        let g = |s: Complex64| gamma(s);
        for t in [0.5, 1.0, 2.0] {
            let v = inverse_mellin(g, 1.0, t, 60.0, 1e-10).unwrap().value;
            assert!((v.re - (-t).exp()).abs() < 1e-9 * (-t).exp());
        }
    }

    #[test]
    fn convolution_is_multiplicative() {
        let u = bump(0.5, 1.5).unwrap();
        let v = bump(0.8, 3.0).unwrap();
        let w = mult_convolution(&u, &v).unwrap();
        let s = Complex64::new(0.7, 1.3);
        let lhs = mellin_eval(&w, s, 1e-11).unwrap().value;
        let rhs = mellin_eval(&u, s, 1e-13).unwrap().value * mellin_eval(&v, s, 1e-13).unwrap().value;
        assert!(rel(lhs, rhs) < 1e-8);
    }

    #[test]
    fn normalized_exp_is_one() {
        let u = power_exp(c(0.0)).unwrap();
        for s in [c(0.5), c(-1.0), c(-2.0), Complex64::new(-1.5, 1.0)] {
            let v = normalized_mellin(&u, s, 1e-12).unwrap().value;
            assert!((v - 1.0).norm() < 1e-6, "{s}: {v}");
        }
    }

    #[test]
    fn rule_examples() {
        let u = power_exp(c(0.0)).unwrap();
        let r = rule_check(Rule::TimesPower(c(1.0)), &u, c(1.0), 1e-12).unwrap();
        assert!((r.lhs - 1.0).norm() < 1e-10 && r.rel_err < 1e-10);
        let r = rule_check(Rule::Euler, &u, c(1.5), 1e-12).unwrap();
        assert!(rel(r.lhs, -gamma(c(2.5))) < 1e-10 && r.rel_err < 1e-10);
        let r = rule_check(Rule::HeavisideMonomial { d: c(1.0), k: 1 }, &u, c(0.0), 1e-12).unwrap();
        assert!((r.rhs + 1.0).norm() < 1e-15 && r.rel_err < 1e-10);
    }

    #[test]
    fn corrected_rules_hold() {
        let u = power_exp(c(0.0)).unwrap();
        let s = Complex64::new(1.7, 0.4);
        assert!(rule_check(Rule::Derivative, &u, s, 1e-12).unwrap().rel_err < 1e-9);
        let s = Complex64::new(-0.5, 0.4);
        assert!(rule_check(Rule::Antiderivative, &u, s, 1e-12).unwrap().rel_err < 1e-8);
        let s = Complex64::new(-1.0, 0.4);
        let r = rule_check(Rule::ComplementMonomial { d: c(0.5), k: 2 }, &u, s, 1e-12).unwrap();
        assert!(r.rel_err < 1e-9);
        assert!(matches!(
            rule_check(Rule::PowerArgument(-1.0), &u, c(1.0), 1e-10),
            Err(Error::InvalidParameter(_)) | Err(Error::StripViolation { .. })
        ));
    }
}
