//! Functions on the half-line together with their asymptotic expansions.
//!
//! A [`FunctionModel`] bundles a pointwise evaluator, optional derivative
//! evaluators, a log-power expansion at zero, a decay class at infinity and
//! an optional support interval.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::io::{complex_vec, extended_f64};
use crate::quad::{de_integrate_raw, Interval, QuadOptions};
use crate::specfun::{factorial, falling, hermite, pow_pos};

pub type Eval = Arc<dyn Fn(f64) -> Complex64 + Send + Sync>;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Number of terms kept in the expansions of the builtin families.
pub const BUILTIN_TERMS: usize = 12;

/// Where an expansion is taken.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Endpoint {
    #[default]
    Zero,
    Infinity,
}

/// One exponent `p` with maximal log degree `m`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PowerTerm {
    pub p: Complex64,
    pub m: usize,
}

/// Ordered exponents of a log-power expansion.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct PowerSpec {
    pub terms: Vec<PowerTerm>,
}

impl PowerSpec {
    pub fn new(terms: Vec<PowerTerm>) -> Self {
        PowerSpec { terms }
    }

    /// Exponents `p0 + step * j` without logarithms.
    pub fn arithmetic(p0: Complex64, step: f64, n: usize) -> Self {
        PowerSpec::new((0..n).map(|j| PowerTerm { p: p0 + step * j as f64, m: 0 }).collect())
    }

    /// No negative-integer exponent, and every integer `0..=floor(Re p_last)` present.
    pub fn is_appropriate(&self) -> bool {
        if self.has_negative_integer() {
            return false;
        }
        let Some(last) = self.terms.last() else {
            return true;
        };
        let top = last.p.re.floor();
        if top < 0.0 {
            return true;
        }
        (0..=top as i64).all(|k| self.terms.iter().any(|t| t.p == c(k as f64)))
    }

    pub fn has_negative_integer(&self) -> bool {
        self.terms
            .iter()
            .any(|t| t.p.im == 0.0 && t.p.re < 0.0 && t.p.re == t.p.re.round())
    }

    /// Shift every exponent by `alpha`.
    pub fn translate(&self, alpha: Complex64) -> PowerSpec {
        PowerSpec::new(
            self.terms
                .iter()
                .map(|t| PowerTerm { p: t.p + alpha, m: t.m })
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

/// Shift every exponent of `spec` by `alpha`, returning the new spec and its
/// appropriateness flag.
pub fn translate_powerset(spec: &PowerSpec, alpha: Complex64) -> (PowerSpec, bool) {
    let out = spec.translate(alpha);
    let ok = out.is_appropriate();
    (out, ok)
}

/// Log-power expansion `sum_j sum_k a_jk t^p_j ln^k t` at zero or infinity.
///
/// `coeffs[j]` has length `m_j + 1`. At zero the real parts of the exponents
/// are nondecreasing, at infinity nonincreasing.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(into = "ExpansionJson", try_from = "ExpansionJson")]
pub struct Expansion {
    pub at: Endpoint,
    pub exponents: Vec<Complex64>,
    pub coeffs: Vec<Vec<Complex64>>,
    pub remainder_exp: f64,
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    re_p: f64,
    im_p: f64,
    m: usize,
    #[serde(with = "complex_vec")]
    coeffs: Vec<Complex64>,
}

#[derive(Serialize, Deserialize)]
struct ExpansionJson {
    terms: Vec<TermJson>,
    #[serde(with = "extended_f64", default = "infinite")]
    remainder_exp: f64,
    #[serde(default)]
    at: Endpoint,
}

fn infinite() -> f64 {
    f64::INFINITY
}

impl From<Expansion> for ExpansionJson {
    fn from(e: Expansion) -> Self {
        ExpansionJson {
            terms: e
                .exponents
                .iter()
                .zip(&e.coeffs)
                .map(|(p, a)| TermJson {
                    re_p: p.re,
                    im_p: p.im,
                    m: a.len() - 1,
                    coeffs: a.clone(),
                })
                .collect(),
            remainder_exp: e.remainder_exp,
            at: e.at,
        }
    }
}

impl TryFrom<ExpansionJson> for Expansion {
    type Error = Error;

    fn try_from(j: ExpansionJson) -> Result<Self> {
        let mut exponents = Vec::new();
        let mut coeffs = Vec::new();
        for t in j.terms {
            if t.coeffs.len() != t.m + 1 {
                return Err(Error::Parse(format!(
                    "term with m = {} carries {} coefficients",
                    t.m,
                    t.coeffs.len()
                )));
            }
            exponents.push(Complex64::new(t.re_p, t.im_p));
            coeffs.push(t.coeffs);
        }
        let rem = if j.at == Endpoint::Infinity && j.remainder_exp.is_infinite() {
            f64::NEG_INFINITY
        } else {
            j.remainder_exp
        };
        Expansion::new(j.at, exponents, coeffs, rem)
    }
}

/// Exponent and log-polynomial `x^p * sum_k b_k ln^k x` used for symbolic derivatives.
fn differentiate_logpoly(p: Complex64, poly: &[Complex64]) -> (Complex64, Vec<Complex64>) {
    let mut out = vec![ZERO; poly.len()];
    for k in 0..poly.len() {
        out[k] = p * poly[k];
        if k + 1 < poly.len() {
            out[k] += poly[k + 1] * (k + 1) as f64;
        }
    }
    (p - 1.0, out)
}

fn eval_logpoly(x: f64, p: Complex64, poly: &[Complex64]) -> Complex64 {
    let l = x.ln();
    let mut acc = ZERO;
    for b in poly.iter().rev() {
        acc = acc * l + b;
    }
    if acc == ZERO {
        return ZERO;
    }
    acc * pow_pos(x, p)
}

impl Expansion {
    pub fn new(at: Endpoint, exponents: Vec<Complex64>, coeffs: Vec<Vec<Complex64>>, remainder_exp: f64) -> Result<Self> {
        if exponents.len() != coeffs.len() {
            return Err(Error::InvalidParameter("exponent and coefficient lists differ in length".into()));
        }
        if coeffs.iter().any(|a| a.is_empty()) {
            return Err(Error::InvalidParameter("every term needs at least one coefficient".into()));
        }
        let ordered = exponents.windows(2).all(|w| match at {
            Endpoint::Zero => w[0].re <= w[1].re,
            Endpoint::Infinity => w[0].re >= w[1].re,
        });
        if !ordered {
            return Err(Error::InvalidParameter("exponents are not ordered by real part".into()));
        }
        Ok(Expansion {
            at,
            exponents,
            coeffs,
            remainder_exp,
        })
    }

    /// The zero expansion at zero: no terms, exact remainder.
    pub fn empty() -> Self {
        Expansion {
            at: Endpoint::Zero,
            exponents: vec![],
            coeffs: vec![],
            remainder_exp: f64::INFINITY,
        }
    }

    /// A single term `a t^p ln^k t`.
    pub fn monomial(p: Complex64, k: usize, a: Complex64) -> Self {
        let mut coeffs = vec![ZERO; k + 1];
        coeffs[k] = a;
        Expansion {
            at: Endpoint::Zero,
            exponents: vec![p],
            coeffs: vec![coeffs],
            remainder_exp: f64::INFINITY,
        }
    }

    pub fn len(&self) -> usize {
        self.exponents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exponents.is_empty()
    }

    pub fn spec(&self) -> PowerSpec {
        PowerSpec::new(
            self.exponents
                .iter()
                .zip(&self.coeffs)
                .map(|(p, a)| PowerTerm { p: *p, m: a.len() - 1 })
                .collect(),
        )
    }

    /// Real part of the exponent bounding the remainder after `n` terms.
    pub fn remainder_exponent(&self, n: usize) -> f64 {
        if n < self.len() {
            self.exponents[n].re
        } else {
            self.remainder_exp
        }
    }

    pub fn truncate(&self, n: usize) -> Expansion {
        let n = n.min(self.len());
        Expansion {
            at: self.at,
            exponents: self.exponents[..n].to_vec(),
            coeffs: self.coeffs[..n].to_vec(),
            remainder_exp: self.remainder_exponent(n),
        }
    }

    pub fn term(&self, j: usize, x: f64) -> Complex64 {
        eval_logpoly(x, self.exponents[j], &self.coeffs[j])
    }

    /// Sum of the first `n` terms at `x`.
    pub fn partial_sum(&self, x: f64, n: usize) -> Complex64 {
        (0..n.min(self.len())).map(|j| self.term(j, x)).sum()
    }

    /// Sum of the absolute values of the first `n` terms at `x`.
    pub fn partial_abs(&self, x: f64, n: usize) -> f64 {
        (0..n.min(self.len())).map(|j| self.term(j, x).norm()).sum()
    }

    /// `order`-th derivative of the first `n` terms at `x`.
    pub fn partial_sum_derivative(&self, x: f64, n: usize, order: usize) -> Complex64 {
        let mut acc = ZERO;
        for j in 0..n.min(self.len()) {
            let (mut p, mut poly) = (self.exponents[j], self.coeffs[j].clone());
            for _ in 0..order {
                let (q, next) = differentiate_logpoly(p, &poly);
                p = q;
                poly = next;
            }
            acc += eval_logpoly(x, p, &poly);
        }
        acc
    }

    pub fn scale(&self, a: Complex64) -> Expansion {
        let mut e = self.clone();
        for row in &mut e.coeffs {
            for v in row.iter_mut() {
                *v *= a;
            }
        }
        e
    }

    /// Expansion of `t^z f(t)`.
    pub fn translate(&self, z: Complex64) -> Expansion {
        let mut e = self.clone();
        for p in &mut e.exponents {
            *p += z;
        }
        e.remainder_exp += z.re;
        e
    }

    /// Expansion of `ln(t) f(t)`.
    pub fn times_log(&self) -> Expansion {
        let mut e = self.clone();
        for row in &mut e.coeffs {
            row.insert(0, ZERO);
        }
        e
    }

    /// Expansion of `f'(t)`.
    pub fn derivative(&self) -> Expansion {
        let mut e = self.clone();
        for (p, row) in e.exponents.iter_mut().zip(e.coeffs.iter_mut()) {
            let (q, next) = differentiate_logpoly(*p, row);
            *p = q;
            *row = next;
        }
        e.remainder_exp -= 1.0;
        e.drop_zero_terms()
    }

    /// Expansion of `t f'(t)`.
    pub fn euler(&self) -> Expansion {
        self.derivative().translate(c(1.0))
    }

    /// Expansion of `f(t^q)` for `q > 0`.
    pub fn compose_power(&self, q: f64) -> Expansion {
        let mut e = self.clone();
        for (p, row) in e.exponents.iter_mut().zip(e.coeffs.iter_mut()) {
            *p *= q;
            for (k, v) in row.iter_mut().enumerate() {
                *v *= q.powi(k as i32);
            }
        }
        e.remainder_exp *= q;
        e
    }

    /// Expansion of `f(t / lambda)`.
    pub fn dilate(&self, lambda: f64) -> Expansion {
        let mut e = self.clone();
        let ll = lambda.ln();
        for (p, row) in e.exponents.iter().zip(e.coeffs.iter_mut()) {
            let scale = pow_pos(lambda, -*p);
            let m = row.len();
            let mut out = vec![ZERO; m];
            for (k, a) in row.iter().enumerate() {
                // (ln t - ln lambda)^k
                for i in 0..=k {
                    let b = crate::specfun::binomial(k, i) * (-ll).powi((k - i) as i32);
                    out[i] += a * b;
                }
            }
            *row = out.into_iter().map(|v| v * scale).collect();
        }
        e
    }

    /// Expansion of `int_0^t f`, valid when every exponent has real part above -1.
    pub fn antiderivative(&self) -> Result<Expansion> {
        if self.at != Endpoint::Zero {
            return Err(Error::InvalidParameter("antiderivative needs an expansion at zero".into()));
        }
        if let Some(p) = self.exponents.first() {
            if p.re <= -1.0 {
                return Err(Error::InvalidParameter("integrand is not integrable at zero".into()));
            }
        }
        let mut e = self.clone();
        for (p, row) in e.exponents.iter_mut().zip(e.coeffs.iter_mut()) {
            let q = *p + 1.0;
            let m = row.len() - 1;
            let mut out = vec![ZERO; m + 1];
            for (k, a) in row.iter().enumerate() {
                // int_0^t x^p ln^k x dx = t^q sum_i (-1)^i k!/(k-i)! ln^{k-i} t / q^{i+1}
                for i in 0..=k {
                    let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
                    let f = factorial(k) / factorial(k - i);
                    out[k - i] += a * sign * f / q.powi(i as i32 + 1);
                }
            }
            *p = q;
            *row = out;
        }
        e.remainder_exp += 1.0;
        Ok(e)
    }

    fn drop_zero_terms(mut self) -> Expansion {
        let mut keep_p = Vec::new();
        let mut keep_a = Vec::new();
        for (p, mut row) in self.exponents.into_iter().zip(self.coeffs) {
            while row.len() > 1 && *row.last().unwrap() == ZERO {
                row.pop();
            }
            if row.iter().any(|v| *v != ZERO) {
                keep_p.push(p);
                keep_a.push(row);
            }
        }
        self.exponents = keep_p;
        self.coeffs = keep_a;
        self
    }
}

/// Behaviour at infinity.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Decay {
    /// Faster than any power.
    Rapid,
    /// `|u(t)| <= C t^-beta` for large `t`.
    PowerBound(f64),
}

/// Closed support interval `[lo, hi]` inside `[0, inf]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Support {
    pub lo: f64,
    pub hi: f64,
}

impl Support {
    pub const HALF_LINE: Support = Support {
        lo: 0.0,
        hi: f64::INFINITY,
    };

    pub fn contains(&self, t: f64) -> bool {
        t >= self.lo && t <= self.hi
    }
}

/// Open strip `alpha < Re s < beta`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FundamentalStrip {
    #[serde(with = "extended_f64")]
    pub alpha: f64,
    #[serde(with = "extended_f64")]
    pub beta: f64,
}

impl FundamentalStrip {
    pub fn new(alpha: f64, beta: f64) -> Self {
        FundamentalStrip { alpha, beta }
    }

    pub fn contains(&self, s: Complex64) -> bool {
        s.re > self.alpha && s.re < self.beta
    }

    pub fn is_empty(&self) -> bool {
        self.alpha >= self.beta
    }

    /// Distance of `Re s` to the nearer edge.
    pub fn margin(&self, s: Complex64) -> f64 {
        (s.re - self.alpha).min(self.beta - s.re)
    }
}

impl fmt::Display for FundamentalStrip {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}, {}>", self.alpha, self.beta)
    }
}

/// A function on `(0, inf)` with its analytic data.
#[derive(Clone)]
pub struct FunctionModel {
    pub name: String,
    eval: Eval,
    derivs: Vec<Eval>,
    pub zero: Expansion,
    pub infinity: Option<Expansion>,
    pub decay: Decay,
    pub support: Support,
    /// Interior points where the function is not analytic.
    pub kinks: Vec<f64>,
}

impl fmt::Debug for FunctionModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FunctionModel")
            .field("name", &self.name)
            .field("derivatives", &self.derivs.len())
            .field("zero", &self.zero)
            .field("decay", &self.decay)
            .field("support", &self.support)
            .finish()
    }
}

impl FunctionModel {
    pub fn new<F>(name: impl Into<String>, f: F, zero: Expansion) -> Self
    where
        F: Fn(f64) -> Complex64 + Send + Sync + 'static,
    {
        FunctionModel {
            name: name.into(),
            eval: Arc::new(f),
            derivs: vec![],
            zero,
            infinity: None,
            decay: Decay::Rapid,
            support: Support::HALF_LINE,
            kinks: vec![],
        }
    }

    pub fn with_decay(mut self, decay: Decay) -> Self {
        self.decay = decay;
        self
    }

    pub fn with_kinks(mut self, kinks: &[f64]) -> Self {
        self.kinks = kinks.to_vec();
        self
    }

    pub fn with_support(mut self, lo: f64, hi: f64) -> Self {
        self.support = Support { lo, hi };
        self
    }

    pub fn with_infinity(mut self, e: Expansion) -> Self {
        self.infinity = Some(e);
        self
    }

    /// Append the evaluator of the next derivative.
    pub fn with_derivative<F>(mut self, f: F) -> Self
    where
        F: Fn(f64) -> Complex64 + Send + Sync + 'static,
    {
        self.derivs.push(Arc::new(f));
        self
    }

    pub fn eval(&self, t: f64) -> Complex64 {
        if t < self.support.lo || t > self.support.hi {
            return ZERO;
        }
        (self.eval)(t)
    }

    pub fn evaluator(&self) -> Eval {
        self.eval.clone()
    }

    pub fn derivative_order(&self) -> usize {
        self.derivs.len()
    }

    /// `order`-th derivative at `t`; order 0 is the function itself.
    pub fn eval_derivative(&self, t: f64, order: usize) -> Result<Complex64> {
        if order == 0 {
            return Ok(self.eval(t));
        }
        let d = self.derivs.get(order - 1).ok_or(Error::MissingDerivative(order))?;
        if t < self.support.lo || t > self.support.hi {
            return Ok(ZERO);
        }
        Ok(d(t))
    }

    /// Strip where the Mellin integral converges absolutely.
    pub fn fundamental_strip(&self) -> FundamentalStrip {
        let alpha = if self.support.lo > 0.0 {
            f64::NEG_INFINITY
        } else if let Some(p) = self.zero.exponents.first() {
            -p.re
        } else {
            -self.zero.remainder_exp
        };
        let beta = if self.support.hi.is_finite() {
            f64::INFINITY
        } else {
            match (self.decay, &self.infinity) {
                (Decay::Rapid, _) => f64::INFINITY,
                (_, Some(e)) if !e.is_empty() => -e.exponents[0].re,
                (Decay::PowerBound(b), _) => b,
            }
        };
        FundamentalStrip { alpha, beta }
    }

    /// `a u(t)`.
    pub fn scaled(&self, a: Complex64) -> FunctionModel {
        let mut out = self.clone();
        let f = self.eval.clone();
        out.eval = Arc::new(move |t| f(t) * a);
        out.derivs = self
            .derivs
            .iter()
            .map(|d| {
                let d = d.clone();
                Arc::new(move |t: f64| d(t) * a) as Eval
            })
            .collect();
        out.zero = self.zero.scale(a);
        out.infinity = self.infinity.as_ref().map(|e| e.scale(a));
        out.name = format!("{a}*{}", self.name);
        out
    }

    /// `t^z u(t)`.
    pub fn times_power(&self, z: Complex64) -> FunctionModel {
        let f = self.eval.clone();
        FunctionModel {
            name: format!("t^({z})*{}", self.name),
            eval: Arc::new(move |t| f(t) * pow_pos(t, z)),
            derivs: vec![],
            zero: self.zero.translate(z),
            infinity: self.infinity.as_ref().map(|e| e.translate(z)),
            decay: match self.decay {
                Decay::Rapid => Decay::Rapid,
                Decay::PowerBound(b) => Decay::PowerBound(b - z.re),
            },
            support: self.support,
            kinks: self.kinks.clone(),
        }
    }

    /// `u(t^q)` for `q > 0`.
    pub fn compose_power(&self, q: f64) -> Result<FunctionModel> {
        if !(q > 0.0) {
            return Err(Error::InvalidParameter(format!("power {q} must be positive")));
        }
        let f = self.eval.clone();
        Ok(FunctionModel {
            name: format!("{}(t^{q})", self.name),
            eval: Arc::new(move |t| f(t.powf(q))),
            derivs: vec![],
            zero: self.zero.compose_power(q),
            infinity: self.infinity.as_ref().map(|e| e.compose_power(q)),
            decay: match self.decay {
                Decay::Rapid => Decay::Rapid,
                Decay::PowerBound(b) => Decay::PowerBound(b * q),
            },
            support: Support {
                lo: self.support.lo.powf(1.0 / q),
                hi: self.support.hi.powf(1.0 / q),
            },
            kinks: self.kinks.iter().map(|k| k.powf(1.0 / q)).collect(),
        })
    }

    /// `u(t / lambda)` for `lambda > 0`.
    pub fn dilated(&self, lambda: f64) -> Result<FunctionModel> {
        if !(lambda > 0.0) {
            return Err(Error::InvalidParameter(format!("scale {lambda} must be positive")));
        }
        let f = self.eval.clone();
        let derivs = self
            .derivs
            .iter()
            .enumerate()
            .map(|(i, d)| {
                let d = d.clone();
                let k = lambda.powi(-(i as i32 + 1));
                Arc::new(move |t: f64| d(t / lambda) * k) as Eval
            })
            .collect();
        Ok(FunctionModel {
            name: format!("{}(t/{lambda})", self.name),
            eval: Arc::new(move |t| f(t / lambda)),
            derivs,
            zero: self.zero.dilate(lambda),
            infinity: self.infinity.as_ref().map(|e| e.dilate(lambda)),
            decay: self.decay,
            support: Support {
                lo: self.support.lo * lambda,
                hi: self.support.hi * lambda,
            },
            kinks: self.kinks.iter().map(|k| k * lambda).collect(),
        })
    }

    /// `u'(t)`; needs a first-derivative evaluator.
    pub fn derivative(&self) -> Result<FunctionModel> {
        let d = self.derivs.first().ok_or(Error::MissingDerivative(1))?.clone();
        Ok(FunctionModel {
            name: format!("d/dt {}", self.name),
            eval: d,
            derivs: self.derivs[1..].to_vec(),
            zero: self.zero.derivative(),
            infinity: self.infinity.as_ref().map(|e| e.derivative()),
            decay: match self.decay {
                Decay::Rapid => Decay::Rapid,
                Decay::PowerBound(b) => Decay::PowerBound(b + 1.0),
            },
            support: self.support,
            kinks: self.kinks.clone(),
        })
    }

    /// `t u'(t)`; needs a first-derivative evaluator.
    pub fn euler(&self) -> Result<FunctionModel> {
        let d = self.derivs.first().ok_or(Error::MissingDerivative(1))?.clone();
        Ok(FunctionModel {
            name: format!("t d/dt {}", self.name),
            eval: Arc::new(move |t| d(t) * t),
            derivs: vec![],
            zero: self.zero.euler(),
            infinity: self.infinity.as_ref().map(|e| e.euler()),
            decay: self.decay,
            support: self.support,
            kinks: self.kinks.clone(),
        })
    }

    /// `ln(t) u(t)`.
    pub fn times_log(&self) -> FunctionModel {
        let f = self.eval.clone();
        FunctionModel {
            name: format!("ln(t)*{}", self.name),
            eval: Arc::new(move |t| f(t) * t.ln()),
            derivs: vec![],
            zero: self.zero.times_log(),
            infinity: self.infinity.as_ref().map(|e| e.times_log()),
            decay: self.decay,
            support: self.support,
            kinks: self.kinks.clone(),
        }
    }

    /// `int_0^t u`, evaluated by quadrature at each point.
    pub fn antiderivative(&self) -> Result<FunctionModel> {
        let zero = self.zero.antiderivative()?;
        let f = self.eval.clone();
        let support = self.support;
        let kinks = self.kinks.clone();
        let eval = move |t: f64| {
            let hi = t.min(support.hi);
            if hi <= support.lo {
                return ZERO;
            }
            let g = |x: f64| f(x);
            let mut pts = vec![support.lo];
            pts.extend(kinks.iter().copied().filter(|k| *k > support.lo && *k < hi));
            pts.push(hi);
            let mut acc = ZERO;
            for w in pts.windows(2) {
                match de_integrate_raw(&g, Interval::Finite(w[0], w[1]), QuadOptions::with_tol(1e-14)) {
                    Ok((e, _)) => acc += e.value,
                    Err(_) => return Complex64::new(f64::NAN, f64::NAN),
                }
            }
            acc
        };
        Ok(FunctionModel {
            name: format!("int_0^t {}", self.name),
            eval: Arc::new(eval),
            derivs: vec![self.eval.clone()],
            zero,
            infinity: None,
            decay: Decay::PowerBound(0.0),
            support: Support {
                lo: self.support.lo,
                hi: f64::INFINITY,
            },
            kinks: self
                .kinks
                .iter()
                .copied()
                .chain([self.support.hi].into_iter().filter(|h| h.is_finite()))
                .collect(),
        })
    }

    /// Builtin family by name with complex parameters.
    pub fn builtin(family: &str, params: &[Complex64]) -> Result<FunctionModel> {
        let need = |n: usize| -> Result<()> {
            if params.len() < n {
                Err(Error::InvalidParameter(format!("family `{family}` needs {n} parameter(s)")))
            } else {
                Ok(())
            }
        };
        let real = |z: Complex64, what: &str| -> Result<f64> {
            if z.im != 0.0 {
                Err(Error::InvalidParameter(format!("{what} must be real")))
            } else {
                Ok(z.re)
            }
        };
        match family {
            "power_exp" => {
                need(1)?;
                power_exp(params[0])
            }
            "gauss_pow" => {
                need(1)?;
                gauss_pow(params[0])
            }
            "heaviside_unit" => Ok(heaviside_unit()),
            "bump" => {
                need(2)?;
                bump(real(params[0], "r0")?, real(params[1], "r1")?)
            }
            "monomial_log" => {
                need(2)?;
                let k = real(params[1], "k")?;
                if k < 0.0 || k.fract() != 0.0 {
                    return Err(Error::InvalidParameter(format!("log degree {k} must be a nonnegative integer")));
                }
                monomial_log(params[0], k as usize)
            }
            other => Err(Error::UnknownFamily(other.to_string())),
        }
    }
}

fn reject_negative_integer(d: Complex64) -> Result<()> {
    if d.im == 0.0 && d.re < 0.0 && d.re == d.re.round() {
        return Err(Error::InvalidParameter(format!(
            "exponent {} is a negative integer",
            d.re
        )));
    }
    Ok(())
}

fn inv_factorial_series(d: Complex64, step: f64) -> Expansion {
    let n = BUILTIN_TERMS;
    let exponents = (0..n).map(|j| d + step * j as f64).collect();
    let coeffs = (0..n)
        .map(|j| {
            let s = if j % 2 == 0 { 1.0 } else { -1.0 };
            vec![c(s / factorial(j))]
        })
        .collect();
    Expansion {
        at: Endpoint::Zero,
        exponents,
        coeffs,
        remainder_exp: d.re + step * n as f64,
    }
}

/// `t^d e^-t`.
pub fn power_exp(d: Complex64) -> Result<FunctionModel> {
    reject_negative_integer(d)?;
    let deriv = move |order: usize| {
        move |t: f64| -> Complex64 {
            // (t^d e^-t)^(n) = e^-t sum_i C(n,i) (-1)^(n-i) d(d-1)..(d-i+1) t^(d-i)
            if t <= 0.0 {
                return pow_pos(t, d - order as f64);
            }
            if t == f64::INFINITY {
                return ZERO;
            }
            let lt = t.ln();
            let mut acc = ZERO;
            for i in 0..=order {
                let s = if (order - i) % 2 == 0 { 1.0 } else { -1.0 };
                let f = falling(d, i) * (crate::specfun::binomial(order, i) * s);
                if f != ZERO {
                    acc += f * ((d - i as f64) * lt - t).exp();
                }
            }
            acc
        }
    };
    Ok(FunctionModel::new(format!("power_exp({d})"), deriv(0), inv_factorial_series(d, 1.0))
        .with_derivative(deriv(1))
        .with_derivative(deriv(2)))
}

/// `t^d e^{-t^2}`.
pub fn gauss_pow(d: Complex64) -> Result<FunctionModel> {
    reject_negative_integer(d)?;
    let deriv = move |order: usize| {
        move |t: f64| -> Complex64 {
            if t <= 0.0 {
                return pow_pos(t, d - order as f64);
            }
            if t == f64::INFINITY {
                return ZERO;
            }
            let lt = t.ln();
            let mut acc = ZERO;
            for i in 0..=order {
                let s = if (order - i) % 2 == 0 { 1.0 } else { -1.0 };
                let f = falling(d, i) * (crate::specfun::binomial(order, i) * s * hermite(order - i, t));
                if f != ZERO {
                    acc += f * ((d - i as f64) * lt - t * t).exp();
                }
            }
            acc
        }
    };
    Ok(FunctionModel::new(format!("gauss_pow({d})"), deriv(0), inv_factorial_series(d, 2.0))
        .with_derivative(deriv(1))
        .with_derivative(deriv(2)))
}

/// Indicator of `(0, 1]`.
pub fn heaviside_unit() -> FunctionModel {
    FunctionModel::new(
        "heaviside_unit",
        |t| if t > 0.0 && t <= 1.0 { c(1.0) } else { ZERO },
        Expansion::monomial(c(0.0), 0, c(1.0)),
    )
    .with_support(0.0, 1.0)
    .with_kinks(&[1.0])
}

/// Indicator of `(1, inf)`.
pub fn heaviside_complement() -> FunctionModel {
    FunctionModel::new("1-heaviside_unit", |t| if t > 1.0 { c(1.0) } else { ZERO }, Expansion::empty())
        .with_support(1.0, f64::INFINITY)
        .with_decay(Decay::PowerBound(0.0))
}

/// Smooth bump `exp(1 - 1/(1 - tau^2))` with `tau` linear from -1 at `r0` to 1 at `r1`.
pub fn bump(r0: f64, r1: f64) -> Result<FunctionModel> {
    if !(r0 >= 0.0 && r1 > r0 && r1.is_finite()) {
        return Err(Error::InvalidParameter(format!("bump needs 0 <= r0 < r1, got [{r0}, {r1}]")));
    }
    let mid = 0.5 * (r0 + r1);
    let k = 2.0 / (r1 - r0);
    let profile = move |order: usize| {
        move |t: f64| -> Complex64 {
            let tau = (t - mid) * k;
            if tau.abs() >= 1.0 {
                return ZERO;
            }
            let w = 1.0 / (1.0 - tau * tau);
            let g = (1.0 - w).exp();
            let dw = 2.0 * tau * w * w;
            let v = match order {
                0 => g,
                1 => -dw * g * k,
                _ => {
                    let ddw = 2.0 * w * w + 8.0 * tau * tau * w * w * w;
                    (dw * dw - ddw) * g * k * k
                }
            };
            c(v)
        }
    };
    Ok(FunctionModel::new(format!("bump({r0},{r1})"), profile(0), Expansion::empty())
        .with_support(r0, r1)
        .with_derivative(profile(1))
        .with_derivative(profile(2)))
}

/// `omega(t) t^d ln^k t` with the default cutoff.
pub fn monomial_log(d: Complex64, k: usize) -> Result<FunctionModel> {
    reject_negative_integer(d)?;
    let cut = Cutoff::default();
    let r1 = cut.r1;
    Ok(FunctionModel::new(
        format!("monomial_log({d},{k})"),
        move |t| {
            if t <= 0.0 {
                return ZERO;
            }
            let w = cut.eval(t);
            if w == 0.0 {
                return ZERO;
            }
            pow_pos(t, d) * t.ln().powi(k as i32) * w
        },
        Expansion::monomial(d, k, c(1.0)),
    )
    .with_support(0.0, r1)
    .with_kinks(&[cut.r0, cut.r1]))
}

/// `(1 - omega(t)) t^d ln^k t`, growing or decaying like `t^d` at infinity.
pub fn monomial_log_at_infinity(d: Complex64, k: usize) -> FunctionModel {
    let cut = Cutoff::default();
    let mut infinity = Expansion::monomial(d, k, c(1.0));
    infinity.at = Endpoint::Infinity;
    infinity.remainder_exp = f64::NEG_INFINITY;
    FunctionModel::new(
        format!("excised_monomial_log({d},{k})"),
        move |t| {
            let w = 1.0 - cut.eval(t);
            if w == 0.0 {
                return ZERO;
            }
            pow_pos(t, d) * t.ln().powi(k as i32) * w
        },
        Expansion::empty(),
    )
    .with_support(cut.r0, f64::INFINITY)
    .with_kinks(&[cut.r1])
    .with_decay(Decay::PowerBound(-d.re))
    .with_infinity(infinity)
}

/// Smooth cutoff: 1 on `[0, r0]`, 0 on `[r1, inf)`, nonincreasing between.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Cutoff {
    pub r0: f64,
    pub r1: f64,
}

impl Default for Cutoff {
    fn default() -> Self {
        Cutoff { r0: 0.5, r1: 1.0 }
    }
}

fn flat(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else {
        (-1.0 / t).exp()
    }
}

impl Cutoff {
    pub fn new(r0: f64, r1: f64) -> Result<Self> {
        if !(r0 > 0.0 && r1 > r0) {
            return Err(Error::InvalidParameter(format!("cutoff needs 0 < r0 < r1, got [{r0}, {r1}]")));
        }
        Ok(Cutoff { r0, r1 })
    }

    pub fn eval(&self, x: f64) -> f64 {
        if x <= self.r0 {
            return 1.0;
        }
        if x >= self.r1 {
            return 0.0;
        }
        let t = (x - self.r0) / (self.r1 - self.r0);
        let a = flat(1.0 - t);
        a / (a + flat(t))
    }

    /// `1 - omega`.
    pub fn excision(&self, x: f64) -> f64 {
        1.0 - self.eval(x)
    }
}

/// Outcome of [`remainder_check`].
#[derive(Clone, Debug, Serialize)]
pub struct RemainderReport {
    pub exponent: f64,
    pub ratios: Vec<(f64, f64)>,
    pub derivative_orders: Vec<usize>,
    pub passed: bool,
}

fn bounded_towards_zero(ratios: &[(f64, f64)]) -> Result<bool> {
    let xmin = ratios.iter().map(|r| r.0).fold(f64::INFINITY, f64::min);
    let (near, far): (Vec<&(f64, f64)>, Vec<&(f64, f64)>) = ratios.iter().partition(|r| r.0 <= 10.0 * xmin);
    if far.is_empty() {
        return Err(Error::InvalidParameter("grid must span more than one decade".into()));
    }
    let near = near.iter().map(|r| r.1).fold(0.0, f64::max);
    let far = far.iter().map(|r| r.1).fold(0.0, f64::max);
    Ok(near <= 2.0 * far || near == 0.0)
}

/// Check that `omega (u - S_N) = O(t^r)` near zero, `r` the next exponent.
///
/// Also checks derivative orders 1 and 2 when evaluators exist.
pub fn remainder_check(u: &FunctionModel, n: usize, grid: &[f64]) -> Result<RemainderReport> {
    if n > u.zero.len() {
        return Err(Error::InsufficientTruncation {
            needed: n,
            available: u.zero.len(),
        });
    }
    let cut = Cutoff::default();
    let grid: Vec<f64> = grid.iter().copied().filter(|x| *x > 0.0 && *x <= cut.r0).collect();
    if grid.len() < 2 {
        return Err(Error::InvalidParameter("grid needs points in (0, r0]".into()));
    }
    let r = u.zero.remainder_exponent(n);
    let orders: Vec<usize> = (0..=u.derivative_order().min(2)).collect();
    let mut passed = true;
    let mut ratios0 = Vec::new();
    for &o in &orders {
        let mut ratios = Vec::new();
        for &x in &grid {
            let v = u.eval_derivative(x, o)?;
            let s = u.zero.partial_sum_derivative(x, n, o);
            let floor = 64.0 * f64::EPSILON * (v.norm() + s.norm() + u.zero.partial_abs(x, n) * (1.0 + x.recip().powi(o as i32)));
            let diff = ((v - s).norm() * cut.eval(x) - floor).max(0.0);
            let ratio = if r.is_finite() {
                diff / x.powf(r - o as f64)
            } else {
                diff
            };
            ratios.push((x, ratio));
        }
        let ok = if r.is_finite() {
            bounded_towards_zero(&ratios)?
        } else {
            ratios.iter().all(|r| r.1 == 0.0)
        };
        passed &= ok;
        if o == 0 {
            ratios0 = ratios;
        }
    }
    Ok(RemainderReport {
        exponent: r,
        ratios: ratios0,
        derivative_orders: orders,
        passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn log_grid() -> Vec<f64> {
        (0..40).map(|i| 0.5 * 10f64.powf(-(i as f64) / 8.0)).collect()
    }

    #[test]
    fn power_exp_expansion_is_taylor_series() {
        let u = power_exp(c(2.0)).unwrap();
        // x^2 - x^3 + x^4/2
        assert_eq!(u.zero.coeffs[2][0], c(0.5));
        let x = 1e-3;
        let s = u.zero.partial_sum(x, 3);
        assert!((s - c(x * x - x.powi(3) + x.powi(4) / 2.0)).norm() < 1e-20);
    }

    #[test]
    fn remainder_bounds_hold_for_builtins() {
        let grid = log_grid();
        for u in [power_exp(c(0.5)).unwrap(), gauss_pow(c(-0.5)).unwrap(), power_exp(c(0.0)).unwrap()] {
            for n in 1..5 {
                let rep = remainder_check(&u, n, &grid).unwrap();
                assert!(rep.passed, "{} N={n}", u.name);
            }
        }
    }

    #[test]
    fn wrong_coefficient_fails_remainder_check() {
        let mut u = power_exp(c(0.0)).unwrap();
        u.zero.coeffs[1][0] = c(-2.0);
        let rep = remainder_check(&u, 3, &log_grid()).unwrap();
        assert!(!rep.passed);
    }

    #[test]
    fn monomial_log_remainder_is_exact() {
        let u = monomial_log(c(1.5), 2).unwrap();
        let rep = remainder_check(&u, 1, &log_grid()).unwrap();
        assert!(rep.passed);
        assert!(rep.ratios.iter().all(|r| r.1 == 0.0));
    }

    #[test]
    fn heaviside_expansion_is_constant() {
        let u = heaviside_unit();
        assert_eq!(u.zero.exponents, vec![c(0.0)]);
        assert_eq!(u.eval(1.0), c(1.0));
        assert_eq!(u.eval(1.0 + 1e-12), ZERO);
        assert_eq!(u.fundamental_strip(), FundamentalStrip::new(0.0, f64::INFINITY));
    }

    #[test]
    fn bump_derivatives_match_differences() {
        let u = bump(0.5, 2.0).unwrap();
        let h = 1e-5;
        for &t in &[0.7, 1.1, 1.8] {
            let fd = (u.eval(t + h) - u.eval(t - h)) / (2.0 * h);
            assert!((fd - u.eval_derivative(t, 1).unwrap()).norm() < 1e-8);
            let fd2 = (u.eval_derivative(t + h, 1).unwrap() - u.eval_derivative(t - h, 1).unwrap()) / (2.0 * h);
            assert!((fd2 - u.eval_derivative(t, 2).unwrap()).norm() < 1e-6);
        }
    }

    #[test]
    fn gauss_pow_derivatives_match_differences() {
        let u = gauss_pow(c(0.5)).unwrap();
        let h = 1e-5;
        let t = 0.8;
        let fd = (u.eval(t + h) - u.eval(t - h)) / (2.0 * h);
        assert!((fd - u.eval_derivative(t, 1).unwrap()).norm() < 1e-8);
    }

    #[test]
    fn appropriate_sets() {
        let spec = PowerSpec::arithmetic(c(0.0), 1.0, 4);
        assert!(spec.is_appropriate());
        let (shifted, ok) = translate_powerset(&spec, c(-2.0));
        assert!(!ok);
        assert_eq!(shifted.terms[0].p, c(-2.0));
        let half = PowerSpec::arithmetic(c(0.5), 1.0, 3);
        assert!(!half.is_appropriate());
        assert!(PowerSpec::arithmetic(c(-0.5), 1.0, 1).is_appropriate());
    }

    #[test]
    fn cutoff_is_monotone_and_flat() {
        let w = Cutoff::default();
        let mut prev = 1.0;
        for i in 0..=100 {
            let x = 0.4 + 0.7 * i as f64 / 100.0;
            let v = w.eval(x);
            assert!(v <= prev + 1e-15 && (0.0..=1.0).contains(&v));
            prev = v;
        }
        assert!((w.eval(0.5 + 1e-3) - 1.0).abs() < 1e-100);
    }

    #[test]
    fn expansion_json_roundtrip() {
        let e = gauss_pow(c(0.5)).unwrap().zero.truncate(3);
        let s = serde_json::to_string(&e).unwrap();
        assert!(s.contains("\"re_p\":0.5"));
        let back: Expansion = serde_json::from_str(&s).unwrap();
        assert_eq!(back, e);
    }

    #[test]
    fn antiderivative_expansion() {
        let u = power_exp(c(0.5)).unwrap();
        let f = u.antiderivative().unwrap();
        let x = 1e-3;
        let approx = f.zero.partial_sum(x, 8);
        assert!((f.eval(x) - approx).norm() < 1e-12 * approx.norm());
    }

    #[test]
    fn dilated_expansion_matches_values() {
        let u = monomial_log(c(0.5), 1).unwrap().dilated(2.0).unwrap();
        let x = 0.01;
        assert!((u.eval(x) - u.zero.partial_sum(x, 1)).norm() < 1e-14);
    }
}
