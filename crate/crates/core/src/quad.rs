//! Quadrature rules: double-exponential (tanh-sinh, exp-sinh, sinh-sinh)
//! and Gauss-Legendre, all for complex-valued integrands of a real variable.

use std::collections::HashMap;
use std::f64::consts::FRAC_PI_2;
use std::sync::{Mutex, OnceLock};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An integral value with its achieved error estimate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    #[serde(with = "crate::io::complex_obj")]
    pub value: Complex64,
    pub error: f64,
}

impl Estimate {
    pub fn new(value: Complex64, error: f64) -> Self {
        Estimate { value, error }
    }

    pub fn exact(value: Complex64) -> Self {
        Estimate { value, error: 0.0 }
    }
}

impl std::ops::Add for Estimate {
    type Output = Estimate;
    fn add(self, rhs: Estimate) -> Estimate {
        Estimate::new(self.value + rhs.value, self.error + rhs.error)
    }
}

impl std::iter::Sum for Estimate {
    fn sum<I: Iterator<Item = Estimate>>(iter: I) -> Estimate {
        iter.fold(Estimate::exact(Complex64::new(0.0, 0.0)), |a, b| a + b)
    }
}

/// Stopping rule for the iterative rules.
#[derive(Clone, Copy, Debug)]
pub struct QuadOptions {
    pub tol: f64,
    pub max_level: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        QuadOptions {
            tol: 1e-12,
            max_level: 11,
        }
    }
}

impl QuadOptions {
    pub fn with_tol(tol: f64) -> Self {
        QuadOptions {
            tol,
            ..Default::default()
        }
    }
}

/// Integration interval, possibly unbounded on either side.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Interval {
    Finite(f64, f64),
    UpperInfinite(f64),
    LowerInfinite(f64),
    Whole,
}

impl Interval {
    pub fn new(a: f64, b: f64) -> Interval {
        match (a.is_finite(), b.is_finite()) {
            (true, true) => Interval::Finite(a, b),
            (true, false) => Interval::UpperInfinite(a),
            (false, true) => Interval::LowerInfinite(b),
            (false, false) => Interval::Whole,
        }
    }
}

const TAU_MAX: f64 = 6.0;
const TAIL_TAU: f64 = 3.0;

/// Node and weight of the double-exponential map at parameter `tau`.
fn de_node(interval: Interval, tau: f64) -> (f64, f64) {
    let u = FRAC_PI_2 * tau.sinh();
    let du = FRAC_PI_2 * tau.cosh();
    match interval {
        Interval::Finite(a, b) => {
            let half = 0.5 * (b - a);
            let e = (-2.0 * u.abs()).exp();
            // distance to the nearer endpoint, in units of the half width
            let gap = 2.0 * e / (1.0 + e);
            let x = if u < 0.0 { a + half * gap } else { b - half * gap };
            let sech = 2.0 * (-u.abs()).exp() / (1.0 + e);
            (x, half * du * sech * sech)
        }
        Interval::UpperInfinite(a) => {
            let eu = u.exp();
            (a + eu, du * eu)
        }
        Interval::LowerInfinite(b) => {
            let eu = u.exp();
            (b - eu, du * eu)
        }
        Interval::Whole => (u.sinh(), du * u.cosh()),
    }
}

/// Double-exponential quadrature with level halving.
///
/// Non-finite integrand values are tolerated only at the far ends of the
/// transformed range, where they stand for underflowed or overflowed
/// arguments and contribute nothing.
pub fn de_integrate<F>(f: F, interval: Interval, opts: QuadOptions) -> Result<Estimate>
where
    F: Fn(f64) -> Complex64,
{
    let (est, ok) = de_integrate_raw(&f, interval, opts)?;
    if ok {
        Ok(est)
    } else {
        Err(Error::accuracy("double-exponential quadrature", est.error, opts.tol))
    }
}

/// As [`de_integrate`] but returns the best estimate with a convergence flag.
pub fn de_integrate_raw<F>(f: &F, interval: Interval, opts: QuadOptions) -> Result<(Estimate, bool)>
where
    F: Fn(f64) -> Complex64,
{
    if let Interval::Finite(a, b) = interval {
        if a == b {
            return Ok((Estimate::exact(Complex64::new(0.0, 0.0)), true));
        }
        if b < a {
            let (e, ok) = de_integrate_raw(f, Interval::Finite(b, a), opts)?;
            return Ok((Estimate::new(-e.value, e.error), ok));
        }
    }
    let sample = |tau: f64| -> Result<(Complex64, f64)> {
        let (x, w) = de_node(interval, tau);
        if w == 0.0 || !w.is_finite() {
            return Ok((Complex64::new(0.0, 0.0), 0.0));
        }
        let v = f(x);
        if v.re.is_finite() && v.im.is_finite() {
            let t = v * w;
            if t.re.is_finite() && t.im.is_finite() {
                return Ok((t, t.norm()));
            }
        }
        if tau.abs() >= TAIL_TAU {
            Ok((Complex64::new(0.0, 0.0), 0.0))
        } else {
            Err(Error::NonFinite(format!("integrand at x = {x:e}")))
        }
    };

    let mut h = 0.5;
    let mut sum = Complex64::new(0.0, 0.0);
    let mut abs_sum = 0.0;
    let n0 = (TAU_MAX / h) as i64;
    for k in -n0..=n0 {
        let (v, a) = sample(k as f64 * h)?;
        sum += v;
        abs_sum += a;
    }
    let mut prev = sum * h;
    let mut err = f64::INFINITY;
    for level in 1..=opts.max_level {
        h *= 0.5;
        let n = (TAU_MAX / h) as i64;
        let mut k = -n + 1;
        if k % 2 == 0 {
            k += 1;
        }
        while k <= n {
            let (v, a) = sample(k as f64 * h)?;
            sum += v;
            abs_sum += a;
            k += 2;
        }
        let cur = sum * h;
        let l1 = abs_sum * h;
        err = (cur - prev).norm();
        let target = (opts.tol * cur.norm().max(l1.min(1.0))).max(64.0 * f64::EPSILON * l1);
        prev = cur;
        if level >= 3 && (err <= target || l1 == 0.0) {
            return Ok((Estimate::new(cur, err.max(16.0 * f64::EPSILON * l1)), true));
        }
    }
    Ok((Estimate::new(prev, err), false))
}

/// Gauss-Legendre nodes and weights on [-1, 1].
#[derive(Debug)]
pub struct GaussRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

fn legendre_rule(n: usize) -> GaussRule {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 1 { x } else { p1 };
            let pm = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (x * pn - pm) / (x * x - 1.0);
            let dx = pn / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    GaussRule { nodes, weights }
}

/// Cached Gauss-Legendre rule with `n` points.
pub fn gauss_legendre(n: usize) -> &'static GaussRule {
    static CACHE: OnceLock<Mutex<HashMap<usize, &'static GaussRule>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut map = cache.lock().unwrap_or_else(|e| e.into_inner());
    map.entry(n)
        .or_insert_with(|| Box::leak(Box::new(legendre_rule(n))))
}

/// Fixed `n`-point Gauss-Legendre rule on [a, b].
pub fn gl_panel<F>(f: &F, a: f64, b: f64, n: usize) -> Complex64
where
    F: Fn(f64) -> Complex64,
{
    let rule = gauss_legendre(n);
    let c = 0.5 * (a + b);
    let d = 0.5 * (b - a);
    let mut s = Complex64::new(0.0, 0.0);
    for (x, w) in rule.nodes.iter().zip(&rule.weights) {
        s += f(c + d * x) * *w;
    }
    s * d
}

/// Adaptive composite Gauss-Legendre over consecutive breakpoints.
///
/// Each panel compares a 16-point and a 24-point rule and is bisected
/// until the difference meets its share of the absolute target.
pub fn adaptive_gl<F>(f: F, breaks: &[f64], tol: f64) -> Result<Estimate>
where
    F: Fn(f64) -> Complex64,
{
    if breaks.len() < 2 {
        return Ok(Estimate::exact(Complex64::new(0.0, 0.0)));
    }
    let span = breaks[breaks.len() - 1] - breaks[0];
    let mut scale = 0.0;
    for w in breaks.windows(2) {
        scale += gl_panel(&|x| Complex64::new(f(x).norm(), 0.0), w[0], w[1], 24).re;
    }
    let target = (tol * scale).max(1e-300);
    let mut stack: Vec<(f64, f64, usize)> = breaks.windows(2).map(|w| (w[0], w[1], 0)).collect();
    let mut total = Complex64::new(0.0, 0.0);
    let mut err_total = 0.0;
    let mut failed = false;
    while let Some((a, b, depth)) = stack.pop() {
        let coarse = gl_panel(&f, a, b, 16);
        let fine = gl_panel(&f, a, b, 24);
        let e = (fine - coarse).norm();
        let share = target * ((b - a) / span).max(1e-6);
        if e <= share || depth >= 40 {
            if e > share {
                failed = true;
            }
            total += fine;
            err_total += e;
        } else {
            let m = 0.5 * (a + b);
            stack.push((a, m, depth + 1));
            stack.push((m, b, depth + 1));
        }
    }
    if !(total.re.is_finite() && total.im.is_finite()) {
        return Err(Error::NonFinite("adaptive Gauss-Legendre sum".into()));
    }
    if failed {
        return Err(Error::accuracy("adaptive Gauss-Legendre", err_total, target));
    }
    Ok(Estimate::new(total, err_total))
}

/// Points of a closed contour on a circle for trapezoid-rule Cauchy integrals.
pub fn circle_points(center: Complex64, radius: f64, n: usize) -> impl Iterator<Item = (Complex64, Complex64)> {
    (0..n).map(move |j| {
        let th = 2.0 * std::f64::consts::PI * j as f64 / n as f64;
        let e = Complex64::from_polar(1.0, th);
        (center + e * radius, e)
    })
}

/// `n`-th derivative of an analytic function by the Cauchy formula on a circle.
pub fn cauchy_derivative<F>(f: F, z: Complex64, n: usize, radius: f64, points: usize) -> Complex64
where
    F: Fn(Complex64) -> Complex64,
{
    let mut s = Complex64::new(0.0, 0.0);
    for (w, e) in circle_points(z, radius, points) {
        s += f(w) * e.powi(-(n as i32));
    }
    let fact: f64 = (1..=n).map(|k| k as f64).product();
    s * fact / (points as f64 * radius.powi(n as i32))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn legendre_rule_integrates_polynomials() {
        let r = gauss_legendre(16);
        let s: f64 = r.nodes.iter().zip(&r.weights).map(|(x, w)| w * x.powi(30)).sum();
        assert!((s - 2.0 / 31.0).abs() < 1e-14);
        let wsum: f64 = r.weights.iter().sum();
        assert!((wsum - 2.0).abs() < 1e-14);
    }

    #[test]
    fn tanh_sinh_endpoint_singularity() {
        let e = de_integrate(|x| c(1.0 / x.sqrt()), Interval::Finite(0.0, 1.0), QuadOptions::default()).unwrap();
        assert!((e.value.re - 2.0).abs() < 1e-12);
    }

    #[test]
    fn exp_sinh_gamma_half() {
        let e = de_integrate(
            |x| c((-x).exp() / x.sqrt()),
            Interval::UpperInfinite(0.0),
            QuadOptions::default(),
        )
        .unwrap();
        assert!((e.value.re - std::f64::consts::PI.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn sinh_sinh_gaussian() {
        let e = de_integrate(|x| c((-x * x).exp()), Interval::Whole, QuadOptions::default()).unwrap();
        assert!((e.value.re - std::f64::consts::PI.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn lower_infinite_matches_reflection() {
        let e = de_integrate(|x| c(x.exp()), Interval::LowerInfinite(0.0), QuadOptions::default()).unwrap();
        assert!((e.value.re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn adaptive_gl_oscillatory() {
        let e = adaptive_gl(|x| Complex64::new(0.0, 30.0 * x).exp(), &[0.0, 1.0], 1e-12).unwrap();
        let exact = (Complex64::new(0.0, 30.0).exp() - 1.0) / Complex64::new(0.0, 30.0);
        assert!((e.value - exact).norm() < 1e-12);
    }

    #[test]
    fn cauchy_derivative_of_exp() {
        let d = cauchy_derivative(|z| z.exp(), c(0.3), 3, 0.5, 32);
        assert!((d - c(0.3f64.exp())).norm() < 1e-13);
    }
}
