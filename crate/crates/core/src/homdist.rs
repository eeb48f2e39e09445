//! Homogeneous distributions `x^a_± ln^l x` and boundary powers `(ξ ± i0)^a`:
//! regularized pairings, residues and finite parts at negative integers,
//! closed-form Fourier transforms, and limits of boundary-value products.

use std::cell::RefCell;
use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::funcmodel::Eval;
use crate::io::complex_obj;
use crate::quad::{circle_points, de_integrate, Estimate, Interval, QuadOptions};
use crate::specfun::{binomial, factorial, gamma, harmonic, hermite, rgamma, sqrt_2pi};

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Radius of the circle in the `a`-plane used for `a`-derivatives.
pub const A_RADIUS: f64 = 1e-2;
/// Trapezoid nodes on that circle.
pub const A_POINTS: usize = 32;
/// Distance to a negative integer below which `a` is rejected.
pub const A_GUARD: f64 = 1e-6;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Half-line carrying a homogeneous distribution.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Plus,
    Minus,
}

impl Side {
    fn sign(self) -> f64 {
        match self {
            Side::Plus => 1.0,
            Side::Minus => -1.0,
        }
    }
}

/// Side of the real axis from which a boundary power is approached.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundarySign {
    PlusI0,
    MinusI0,
}

impl BoundarySign {
    fn sign(self) -> f64 {
        match self {
            BoundarySign::PlusI0 => 1.0,
            BoundarySign::MinusI0 => -1.0,
        }
    }
}

/// `coeff · x^a_± ln^l x`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HomTerm {
    pub side: Side,
    #[serde(with = "complex_obj")]
    pub a: Complex64,
    pub l: usize,
    #[serde(with = "complex_obj")]
    pub coeff: Complex64,
}

impl HomTerm {
    pub fn new(side: Side, a: Complex64, l: usize, coeff: Complex64) -> Self {
        HomTerm { side, a, l, coeff }
    }

    /// Pointwise value at `x != 0`.
    pub fn eval(&self, x: f64) -> Complex64 {
        if x * self.side.sign() <= 0.0 {
            return ZERO;
        }
        let r = x.abs();
        self.coeff * (self.a * r.ln()).exp() * r.ln().powi(self.l as i32)
    }
}

/// `coeff · (ξ ± i0)^a ln^m(ξ ± i0)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundaryPowerTerm {
    pub sign: BoundarySign,
    #[serde(with = "complex_obj")]
    pub a: Complex64,
    pub m: usize,
    #[serde(with = "complex_obj")]
    pub coeff: Complex64,
}

impl BoundaryPowerTerm {
    pub fn new(sign: BoundarySign, a: Complex64, m: usize, coeff: Complex64) -> Self {
        BoundaryPowerTerm { sign, a, m, coeff }
    }

    /// `ln(ξ ± i0)` for real `ξ != 0`.
    fn log_boundary(&self, xi: f64) -> Complex64 {
        let phase = if xi < 0.0 { self.sign.sign() * PI } else { 0.0 };
        Complex64::new(xi.abs().ln(), phase)
    }

    /// Pointwise boundary value at real `ξ != 0`.
    pub fn eval(&self, xi: f64) -> Complex64 {
        let lg = self.log_boundary(xi);
        self.coeff * (self.a * lg).exp() * lg.powi(self.m as i32)
    }

    /// Value of the analytic continuation at `ζ` off the real axis, on the
    /// half-plane the boundary value is approached from.
    pub fn eval_analytic(&self, z: Complex64) -> Complex64 {
        let lg = z.ln();
        self.coeff * (self.a * lg).exp() * lg.powi(self.m as i32)
    }
}

/// A term of a [`DistributionCombo`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ComboTerm {
    Hom(HomTerm),
    Boundary(BoundaryPowerTerm),
}

/// `coeff · δ^(order)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeltaTerm {
    pub order: usize,
    #[serde(with = "complex_obj")]
    pub coeff: Complex64,
}

/// Finite sum of homogeneous terms, boundary powers and derivatives of δ.
///
/// `Hom` terms at a negative integer `a = -k` stand for the finite-part
/// distributions `x^-k_±`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct DistributionCombo {
    pub power: Vec<ComboTerm>,
    pub delta: Vec<DeltaTerm>,
}

impl DistributionCombo {
    /// Adds `coeff · δ^(order)`, merging with an existing term of that order.
    pub fn add_delta(&mut self, order: usize, coeff: Complex64) {
        match self.delta.iter_mut().find(|d| d.order == order) {
            Some(d) => d.coeff += coeff,
            None => self.delta.push(DeltaTerm { order, coeff }),
        }
    }

    /// Pointwise value of the power part at `ξ != 0`.
    pub fn eval_power(&self, xi: f64) -> Complex64 {
        self.power
            .iter()
            .map(|t| match t {
                ComboTerm::Hom(h) => h.eval(xi),
                ComboTerm::Boundary(b) => b.eval(xi),
            })
            .sum()
    }

    pub fn scaled(mut self, k: Complex64) -> Self {
        for t in &mut self.power {
            match t {
                ComboTerm::Hom(h) => h.coeff *= k,
                ComboTerm::Boundary(b) => b.coeff *= k,
            }
        }
        for d in &mut self.delta {
            d.coeff *= k;
        }
        self
    }

    pub fn plus(mut self, other: DistributionCombo) -> Self {
        self.power.extend(other.power);
        for d in other.delta {
            self.add_delta(d.order, d.coeff);
        }
        self
    }
}

/// Test function with derivatives and a support bound.
#[derive(Clone)]
pub struct TestFn {
    pub name: String,
    derivs: Vec<Eval>,
    /// Closed interval outside which every derivative vanishes.
    pub support: (f64, f64),
    /// Points where quadrature should split, such as the centre of mass.
    pub breaks: Vec<f64>,
}

impl fmt::Debug for TestFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TestFn")
            .field("name", &self.name)
            .field("order", &self.order())
            .field("support", &self.support)
            .finish()
    }
}

impl TestFn {
    /// From the function and its successive derivatives.
    pub fn new(name: impl Into<String>, derivs: Vec<Eval>, support: (f64, f64)) -> Self {
        TestFn {
            name: name.into(),
            derivs,
            support,
            breaks: Vec::new(),
        }
    }

    /// `exp(-((x - center)/width)^2)` with derivatives up to `order`.
    pub fn gaussian(center: f64, width: f64, order: usize) -> Self {
        let derivs = (0..=order)
            .map(|n| {
                let f: Eval = Arc::new(move |x: f64| {
                    let y = (x - center) / width;
                    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
                    c(sign * hermite(n, y) * (-y * y).exp() / width.powi(n as i32))
                });
                f
            })
            .collect();
        TestFn {
            name: format!("gaussian({center},{width})"),
            derivs,
            support: (f64::NEG_INFINITY, f64::INFINITY),
            breaks: vec![center],
        }
    }

    /// `e^-x`; pairings only probe it on `x >= 0`.
    pub fn exponential(order: usize) -> Self {
        let derivs = (0..=order)
            .map(|n| {
                let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
                let f: Eval = Arc::new(move |x: f64| c(sign * (-x).exp()));
                f
            })
            .collect();
        TestFn::new("exponential", derivs, (f64::NEG_INFINITY, f64::INFINITY))
    }

    /// Highest available derivative order.
    pub fn order(&self) -> usize {
        self.derivs.len().saturating_sub(1)
    }

    pub fn eval(&self, x: f64) -> Complex64 {
        self.derivs[0](x)
    }

    pub fn derivative(&self, n: usize, x: f64) -> Result<Complex64> {
        self.derivs.get(n).map(|f| f(x)).ok_or(Error::MissingDerivative(n))
    }

    fn require(&self, n: usize) -> Result<()> {
        if n > self.order() {
            Err(Error::MissingDerivative(n))
        } else {
            Ok(())
        }
    }

    /// `x -> φ(λ x)`.
    pub fn dilated(&self, lambda: f64) -> Result<TestFn> {
        if !(lambda > 0.0) {
            return Err(Error::InvalidParameter(format!("dilation factor {lambda} must be positive")));
        }
        let derivs = self
            .derivs
            .iter()
            .enumerate()
            .map(|(n, f)| {
                let f = f.clone();
                let k = lambda.powi(n as i32);
                let g: Eval = Arc::new(move |x: f64| f(lambda * x) * k);
                g
            })
            .collect();
        Ok(TestFn {
            name: format!("{}∘(x·{lambda})", self.name),
            derivs,
            support: (self.support.0 / lambda, self.support.1 / lambda),
            breaks: self.breaks.iter().map(|b| b / lambda).collect(),
        })
    }

    /// `x -> φ(-x)`.
    pub fn reflected(&self) -> TestFn {
        let derivs = self
            .derivs
            .iter()
            .enumerate()
            .map(|(n, f)| {
                let f = f.clone();
                let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
                let g: Eval = Arc::new(move |x: f64| f(-x) * sign);
                g
            })
            .collect();
        TestFn {
            name: format!("{}∘(-x)", self.name),
            derivs,
            support: (-self.support.1, -self.support.0),
            breaks: self.breaks.iter().map(|b| -b).collect(),
        }
    }

    fn on_side(&self, side: Side) -> TestFn {
        match side {
            Side::Plus => self.clone(),
            Side::Minus => self.reflected(),
        }
    }

    /// `∫_0^∞ w(x) φ^(n)(x) dx`.
    fn half_line<W>(&self, n: usize, w: W, tol: f64) -> Result<Estimate>
    where
        W: Fn(f64) -> Complex64,
    {
        self.require(n)?;
        let (lo, hi) = (self.support.0.max(0.0), self.support.1);
        if hi <= lo {
            return Ok(Estimate::exact(ZERO));
        }
        let mut cuts = vec![lo, hi];
        cuts.extend(self.breaks.iter().copied().filter(|b| *b > lo && *b < hi));
        if hi == f64::INFINITY && !cuts.iter().any(|b| b.is_finite() && *b > lo) {
            cuts.push(lo + 1.0);
        }
        cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        cuts.dedup();
        let f = &self.derivs[n];
        let g = |x: f64| {
            let v = f(x);
            if v == ZERO {
                ZERO
            } else {
                w(x) * v
            }
        };
        let opts = QuadOptions::with_tol(tol);
        let mut total = Estimate::exact(ZERO);
        for p in cuts.windows(2) {
            total = total + de_integrate(&g, Interval::new(p[0], p[1]), opts)?;
        }
        Ok(total)
    }
}

fn nearest_negative_integer(a: Complex64) -> Option<(f64, f64)> {
    let r = a.re.round().min(-1.0);
    let d = (a - r).norm();
    Some((r, d))
}

fn check_not_negative_integer(a: Complex64) -> Result<()> {
    if let Some((r, d)) = nearest_negative_integer(a) {
        if d < A_GUARD {
            return Err(Error::PoleProximity {
                s: a,
                pole: c(r),
                guard: A_GUARD,
            });
        }
    }
    Ok(())
}

/// `l`-th derivative in `a` by the trapezoid rule on a circle, on a radius
/// that keeps negative integers outside.
fn a_derivative<F>(f: F, a: Complex64, l: usize) -> Result<Complex64>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    if l == 0 {
        return f(a);
    }
    let radius = match nearest_negative_integer(a) {
        Some((_, d)) => A_RADIUS.min(0.5 * d),
        None => A_RADIUS,
    };
    let mut s = ZERO;
    for (z, e) in circle_points(a, radius, A_POINTS) {
        s += f(z)? * e.powi(-(l as i32));
    }
    Ok(s * factorial(l) / (A_POINTS as f64 * radius.powi(l as i32)))
}

/// Number of integrations by parts needed for `x^a_+`.
pub fn regularization_order(a: Complex64) -> usize {
    (-a.re).ceil().max(0.0) as usize
}

/// `⟨x^a_+, φ⟩` through `k` integrations by parts:
/// `(-1)^k / ((a+1)...(a+k)) ∫ x^(a+k) φ^(k)(x) dx`.
pub fn pair_plus_with_order(a: Complex64, k: usize, phi: &TestFn, tol: f64) -> Result<Estimate> {
    check_not_negative_integer(a)?;
    if (a + k as f64).re <= -1.0 {
        return Err(Error::InvalidParameter(format!(
            "{k} integrations by parts do not regularize a = {a}"
        )));
    }
    let b = a + k as f64;
    let inner = phi.half_line(k, |x| (b * x.ln()).exp(), tol)?;
    let mut denom = c(1.0);
    for j in 1..=k {
        denom *= a + j as f64;
    }
    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
    let f = sign / denom;
    Ok(Estimate::new(inner.value * f, inner.error * f.norm()))
}

/// `⟨coeff · x^a_± ln^l x, φ⟩` with the Riesz regularization.
pub fn pair_hom(t: &HomTerm, phi: &TestFn, tol: f64) -> Result<Estimate> {
    check_not_negative_integer(t.a)?;
    let k = regularization_order(t.a);
    phi.require(k)?;
    let psi = phi.on_side(t.side);
    if t.l == 0 {
        let e = pair_plus_with_order(t.a, k, &psi, tol)?;
        return Ok(Estimate::new(e.value * t.coeff, e.error * t.coeff.norm()));
    }
    let err = RefCell::new(0.0f64);
    let v = a_derivative(
        |z| {
            let e = pair_plus_with_order(z, k, &psi, tol)?;
            let mut m = err.borrow_mut();
            *m = m.max(e.error);
            Ok(e.value)
        },
        t.a,
        t.l,
    )?;
    let radius = A_RADIUS.min(0.5 * nearest_negative_integer(t.a).map_or(1.0, |p| p.1));
    let e = err.into_inner() * factorial(t.l) / radius.powi(t.l as i32);
    Ok(Estimate::new(v * t.coeff, e * t.coeff.norm()))
}

/// Finite part of `⟨x^-k_+, φ⟩`:
/// `-(1/(k-1)!) ∫ ln x φ^(k)(x) dx + H_(k-1) φ^(k-1)(0)/(k-1)!`.
pub fn finite_part(k: usize, phi: &TestFn, tol: f64) -> Result<Estimate> {
    if k == 0 {
        return Err(Error::InvalidParameter("finite part needs k >= 1".into()));
    }
    phi.require(k)?;
    let fk = factorial(k - 1);
    let integral = phi.half_line(k, |x| c(x.ln()), tol)?;
    let boundary = if phi.support.0 <= 0.0 && phi.support.1 >= 0.0 {
        phi.derivative(k - 1, 0.0)? * harmonic(k - 1) / fk
    } else {
        ZERO
    };
    Ok(Estimate::new(-integral.value / fk + boundary, integral.error / fk))
}

/// Finite part of `⟨x^-k_±, φ⟩`.
pub fn finite_part_side(k: usize, side: Side, phi: &TestFn, tol: f64) -> Result<Estimate> {
    finite_part(k, &phi.on_side(side), tol)
}

/// `Res_{a=-k} ⟨x^a_±, φ⟩ = (±1)^(k-1) φ^(k-1)(0)/(k-1)!`, the sign
/// coming from the reflection on the minus side.
pub fn residue_pair(k: usize, side: Side, phi: &TestFn) -> Result<Complex64> {
    if k == 0 {
        return Err(Error::InvalidParameter("residue needs k >= 1".into()));
    }
    let d = phi.derivative(k - 1, 0.0)?;
    let sign = match side {
        Side::Plus => 1.0,
        Side::Minus if (k - 1) % 2 == 0 => 1.0,
        Side::Minus => -1.0,
    };
    Ok(d * sign / factorial(k - 1))
}

/// Both sides of a homogeneity identity.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct ScalingReport {
    #[serde(with = "complex_obj")]
    pub lhs: Complex64,
    #[serde(with = "complex_obj")]
    pub rhs: Complex64,
    pub rel_err: f64,
}

impl ScalingReport {
    fn new(lhs: Complex64, rhs: Complex64) -> Self {
        let rel_err = (lhs - rhs).norm() / lhs.norm().max(rhs.norm()).max(1e-300);
        ScalingReport { lhs, rhs, rel_err }
    }
}

/// `⟨x^a_±, φ_λ⟩` against `λ^(-a-1) ⟨x^a_±, φ⟩`, with `φ_λ(x) = φ(λx)`.
pub fn scaling_check(t: &HomTerm, phi: &TestFn, lambda: f64, tol: f64) -> Result<ScalingReport> {
    if t.l != 0 {
        return Err(Error::InvalidParameter("scaling law needs l = 0".into()));
    }
    let lhs = pair_hom(t, &phi.dilated(lambda)?, tol)?.value;
    let rhs = pair_hom(t, phi, tol)?.value * (-(t.a + 1.0) * lambda.ln()).exp();
    Ok(ScalingReport::new(lhs, rhs))
}

/// Homogeneity defect of the finite part `x^-k_+`:
/// `⟨x^-k_+, φ_λ⟩ - λ^(k-1)⟨x^-k_+, φ⟩` against `-λ^(k-1) ln λ φ^(k-1)(0)/(k-1)!`.
pub fn log_defect(k: usize, phi: &TestFn, lambda: f64, tol: f64) -> Result<ScalingReport> {
    let scale = lambda.powi(k as i32 - 1);
    let lhs = finite_part(k, &phi.dilated(lambda)?, tol)?.value - finite_part(k, phi, tol)?.value * scale;
    let rhs = -phi.derivative(k - 1, 0.0)? * scale * lambda.ln() / factorial(k - 1);
    Ok(ScalingReport::new(lhs, rhs))
}

/// `F[x^a_±] = Γ(a+1)/√(2π) e^(∓iπ(a+1)/2) (ξ ∓ i0)^(-a-1)`.
pub fn fourier_hom(side: Side, a: Complex64) -> Result<BoundaryPowerTerm> {
    check_not_negative_integer(a)?;
    Ok(BoundaryPowerTerm::new(
        match side {
            Side::Plus => BoundarySign::MinusI0,
            Side::Minus => BoundarySign::PlusI0,
        },
        -a - 1.0,
        0,
        fourier_hom_coeff(side, a),
    ))
}

fn fourier_hom_coeff(side: Side, a: Complex64) -> Complex64 {
    gamma(a + 1.0) / sqrt_2pi() * (-I * side.sign() * PI * (a + 1.0) / 2.0).exp()
}

/// `F[x^a_± ln^l x]` as the terms `ln^j(ξ ∓ i0)`, `j = 0..l`, of the
/// `l`-th `a`-derivative of the homogeneous transform.
pub fn fourier_log_hom(side: Side, a: Complex64, l: usize) -> Result<Vec<BoundaryPowerTerm>> {
    let base = fourier_hom(side, a)?;
    let mut out = Vec::with_capacity(l + 1);
    for j in 0..=l {
        let dc = a_derivative(|z| Ok(fourier_hom_coeff(side, z)), a, l - j)?;
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        out.push(BoundaryPowerTerm::new(base.sign, base.a, j, dc * binomial(l, j) * sign));
    }
    Ok(out)
}

/// `F^-1[(ξ ∓ i0)^a] = √(2π)/Γ(-a) e^(∓iπa/2) x^(-a-1)_±`; zero power part
/// when `a` is a nonnegative integer.
pub fn inv_fourier_boundary(sign: BoundarySign, a: Complex64) -> HomTerm {
    let side = match sign {
        BoundarySign::MinusI0 => Side::Plus,
        BoundarySign::PlusI0 => Side::Minus,
    };
    let coeff = rgamma(-a) * sqrt_2pi() * (I * sign.sign() * PI * a / 2.0).exp();
    HomTerm::new(side, -a - 1.0, 0, coeff)
}

/// Negative integer `-k` if `a` is one.
fn negative_integer(a: Complex64) -> Option<usize> {
    if a.im == 0.0 && a.re < 0.0 && a.re == a.re.round() {
        Some((-a.re) as usize)
    } else {
        None
    }
}

/// `(ξ ± i0)^a ln^m(ξ ± i0) = ξ^a_+ ln^m ξ + e^(±iπa) ξ^a_- (ln|ξ| ± iπ)^m`, with
/// the δ correction `±πi(-1)^k/(k-1)! δ^(k-1)` at `a = -k`.
pub fn split_boundary(b: &BoundaryPowerTerm) -> Result<DistributionCombo> {
    let sg = b.sign.sign();
    let phase = (I * sg * PI * b.a).exp();
    let mut combo = DistributionCombo::default();
    combo.power.push(ComboTerm::Hom(HomTerm::new(Side::Plus, b.a, b.m, b.coeff)));
    for j in 0..=b.m {
        let w = b.coeff * phase * binomial(b.m, j) * (I * sg * PI).powi((b.m - j) as i32);
        combo.power.push(ComboTerm::Hom(HomTerm::new(Side::Minus, b.a, j, w)));
    }
    if let Some(k) = negative_integer(b.a) {
        if b.m > 0 {
            return Err(Error::NotAppropriate(
                "logarithmic boundary power at a negative integer".into(),
            ));
        }
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        combo.add_delta(k - 1, b.coeff * I * sg * PI * sign / factorial(k - 1));
    }
    Ok(combo)
}

/// `⟨δ^(n), φ⟩ = (-1)^n φ^(n)(0)`.
pub fn pair_delta(n: usize, phi: &TestFn) -> Result<Complex64> {
    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    Ok(phi.derivative(n, 0.0)? * sign)
}

/// Pairing of a combination with a test function; `Hom` terms at negative
/// integers pair as finite parts.
pub fn pair_combo(combo: &DistributionCombo, phi: &TestFn, tol: f64) -> Result<Estimate> {
    let mut total = Estimate::exact(ZERO);
    for t in &combo.power {
        match t {
            ComboTerm::Hom(h) => total = total + pair_hom_or_finite(h, phi, tol)?,
            ComboTerm::Boundary(b) => total = total + pair_combo(&split_boundary(b)?, phi, tol)?,
        }
    }
    for d in &combo.delta {
        total = total + Estimate::exact(d.coeff * pair_delta(d.order, phi)?);
    }
    Ok(total)
}

fn pair_hom_or_finite(h: &HomTerm, phi: &TestFn, tol: f64) -> Result<Estimate> {
    match negative_integer(h.a) {
        Some(k) if h.l == 0 => {
            let e = finite_part_side(k, h.side, phi, tol)?;
            Ok(Estimate::new(e.value * h.coeff, e.error * h.coeff.norm()))
        }
        Some(_) => Err(Error::NotAppropriate("log terms at a negative integer".into())),
        None => pair_hom(h, phi, tol),
    }
}

/// The homogeneous distribution `ξ^-k = ξ^-k_+ + (-1)^k ξ^-k_-`.
pub fn inverse_power(k: usize, coeff: Complex64) -> DistributionCombo {
    let a = c(-(k as f64));
    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
    DistributionCombo {
        power: vec![
            ComboTerm::Hom(HomTerm::new(Side::Plus, a, 0, coeff)),
            ComboTerm::Hom(HomTerm::new(Side::Minus, a, 0, coeff * sign)),
        ],
        delta: Vec::new(),
    }
}

/// `(-i)^p m! ζ^(-p)` with `p = m + 1`.
pub fn hm_analytic(m: usize) -> impl Fn(Complex64) -> Complex64 + Clone {
    let k = (-I).powi(m as i32 + 1) * factorial(m);
    move |z: Complex64| k / z.powi(m as i32 + 1)
}

/// Fourier transform of `x^m H(x)`: the analytic extension to the lower
/// half-plane and its boundary value `m!(-i)^(m+1) ξ^(-m-1) + i^m π δ^(m)`.
pub fn fourier_hm(m: usize) -> (impl Fn(Complex64) -> Complex64 + Clone, DistributionCombo) {
    (hm_analytic(m), boundary_of_inverse_power(m + 1, (-I).powi(m as i32 + 1) * factorial(m)))
}

/// Boundary value of `coeff · (ζ - i0)^-k` from the lower half-plane.
pub fn boundary_of_inverse_power(k: usize, coeff: Complex64) -> DistributionCombo {
    let mut combo = inverse_power(k, coeff);
    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
    combo.add_delta(k - 1, -coeff * I * PI * sign / factorial(k - 1));
    combo
}

/// Boundary value of `F[x^m H] F[x^n H]`, the product of the analytic parts.
pub fn hm_product(m: usize, n: usize) -> DistributionCombo {
    let k = m + n + 2;
    boundary_of_inverse_power(k, (-I).powi(k as i32) * factorial(m) * factorial(n))
}

/// The reference closed form of the product boundary value,
/// `m! n! (-i)^(m+n+1) (-i ξ^(-m-n-2) - π δ^(m+n))`.
pub fn hm_product_reference(m: usize, n: usize) -> DistributionCombo {
    let k = m + n + 2;
    let pre = (-I).powi((m + n + 1) as i32) * factorial(m) * factorial(n);
    let mut combo = inverse_power(k, -I * pre);
    combo.add_delta(m + n, -pre * PI);
    combo
}

/// Default damping heights `2^-4, ..., 2^-14` for boundary limits.
pub fn default_etas() -> Vec<f64> {
    (4..=14).map(|j| 2f64.powi(-j)).collect()
}

/// Richardson extrapolation to `η = 0` of values on a geometric sequence
/// with ratio 1/2, eliminating up to `order` powers of `η`.
///
/// The extrapolant whose difference from its predecessor in the same
/// column is smallest is returned, with that difference as error; rounding
/// in the samples at tiny `η` would otherwise be amplified.
pub fn richardson(values: &[Complex64], order: usize) -> Result<Estimate> {
    if values.len() < order + 2 {
        return Err(Error::InvalidParameter(format!(
            "{} samples cannot support extrapolation of order {order}",
            values.len()
        )));
    }
    let mut best = Estimate::new(values[values.len() - 1], f64::INFINITY);
    let mut col: Vec<Complex64> = values.to_vec();
    for p in 0..=order {
        if p > 0 {
            let f = 2f64.powi(p as i32);
            col = col.windows(2).map(|w| (w[1] * f - w[0]) / (f - 1.0)).collect();
        }
        for w in col.windows(2) {
            let e = (w[1] - w[0]).norm();
            if e < best.error {
                best = Estimate::new(w[1], e);
            }
        }
    }
    let scale = best.value.norm().max(1e-300);
    if !(best.error <= 1e-3 * scale) {
        return Err(Error::Divergent(format!(
            "no extrapolant settles: best step {:.3e} against value {scale:.3e}",
            best.error
        )));
    }
    Ok(best)
}

/// `lim_{η→0+} ∫ u(ξ - iη) v(ξ - iη) φ(ξ) dξ` by Richardson extrapolation
/// of order 2 over `etas`, which must halve from step to step.
pub fn product_boundary<U, V>(u: U, v: V, phi: &TestFn, etas: &[f64], tol: f64) -> Result<Estimate>
where
    U: Fn(Complex64) -> Complex64,
    V: Fn(Complex64) -> Complex64,
{
    for w in etas.windows(2) {
        if ((w[1] / w[0]) - 0.5).abs() > 1e-12 {
            return Err(Error::InvalidParameter("damping heights must halve".into()));
        }
    }
    let mut vals = Vec::with_capacity(etas.len());
    for &eta in etas {
        let g = |xi: f64| {
            let p = phi.eval(xi);
            if p == ZERO {
                return ZERO;
            }
            let z = Complex64::new(xi, -eta);
            u(z) * v(z) * p
        };
        vals.push(line_pairing(&g, phi, eta, tol)?);
    }
    richardson(&vals, 2)
}

/// `∫ g(ξ) dξ` over the support of `φ`, split at zero and `±η` where
/// boundary singularities concentrate.
fn line_pairing<G>(g: &G, phi: &TestFn, eta: f64, tol: f64) -> Result<Complex64>
where
    G: Fn(f64) -> Complex64,
{
    let (lo, hi) = phi.support;
    let mut cuts = vec![lo, hi, 0.0, -eta, eta, -1.0, 1.0];
    cuts.extend(phi.breaks.iter().copied());
    cuts.retain(|x| *x >= lo && *x <= hi);
    cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    cuts.dedup();
    let opts = QuadOptions::with_tol(tol);
    let mut total = ZERO;
    for p in cuts.windows(2) {
        total += de_integrate(g, Interval::new(p[0], p[1]), opts)?.value;
    }
    Ok(total)
}

/// `lim_{η→0+} ∫ h(ξ - iη) φ(ξ) dξ`.
pub fn boundary_pairing<H>(h: H, phi: &TestFn, etas: &[f64], tol: f64) -> Result<Estimate>
where
    H: Fn(Complex64) -> Complex64,
{
    product_boundary(h, |_| c(1.0), phi, etas, tol)
}

fn fmt_c(z: Complex64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else if z.re == 0.0 {
        format!("{}i", z.im)
    } else {
        format!("({}{:+}i)", z.re, z.im)
    }
}

fn fmt_log(var: &str, l: usize) -> String {
    match l {
        0 => String::new(),
        1 => format!(" ln {var}"),
        _ => format!(" ln^{l} {var}"),
    }
}

impl fmt::Display for HomTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self.side {
            Side::Plus => "+",
            Side::Minus => "-",
        };
        write!(f, "{}·ξ^{}_{}{}", fmt_c(self.coeff), fmt_c(self.a), s, fmt_log("|ξ|", self.l))
    }
}

impl fmt::Display for BoundaryPowerTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let base = match self.sign {
            BoundarySign::PlusI0 => "(ξ+i0)",
            BoundarySign::MinusI0 => "(ξ-i0)",
        };
        write!(f, "{}·{}^{}{}", fmt_c(self.coeff), base, fmt_c(self.a), fmt_log(base, self.m))
    }
}

impl fmt::Display for DistributionCombo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self
            .power
            .iter()
            .map(|t| match t {
                ComboTerm::Hom(h) => h.to_string(),
                ComboTerm::Boundary(b) => b.to_string(),
            })
            .collect();
        parts.extend(self.delta.iter().map(|d| match d.order {
            0 => format!("{}·δ", fmt_c(d.coeff)),
            n => format!("{}·δ^({n})", fmt_c(d.coeff)),
        }));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}
