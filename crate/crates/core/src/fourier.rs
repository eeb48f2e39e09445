//! Laplace-Fourier transform `h(ζ) = ∫_0^∞ e^(-ixζ) u(x) dx/√(2π)` of
//! functions extended by zero, on the closed lower half-plane, and the
//! expansion of `h` at infinity.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::funcmodel::{Decay, FunctionModel, PowerSpec};
use crate::homdist::{fourier_log_hom, richardson, BoundarySign, Side};
use crate::io::{complex_obj, complex_vec};
use crate::quad::{adaptive_gl, de_integrate, Estimate, Interval, QuadOptions};
use crate::specfun::{gamma, sqrt_2pi};

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Relative level below which the damped integrand is treated as zero.
const TAIL_FLOOR: f64 = 1e-18;

/// Last point worth integrating for an integrand whose modulus is bounded
/// by `env`, found by doubling until the envelope stays negligible.
fn effective_end<E>(env: E, start: f64, hi: f64) -> Result<f64>
where
    E: Fn(f64) -> f64,
{
    if hi.is_finite() {
        return Ok(hi);
    }
    let mut x = start.max(1.0);
    let mut peak: f64 = 0.0;
    let mut quiet = 0;
    let mut first_quiet = x;
    for _ in 0..80 {
        let v = env(x) * x;
        peak = peak.max(v);
        if v <= TAIL_FLOOR * peak {
            if quiet == 0 {
                first_quiet = x;
            }
            quiet += 1;
            if quiet == 3 {
                return Ok(first_quiet);
            }
        } else {
            quiet = 0;
        }
        x *= 2.0;
    }
    Err(Error::Divergent("integrand does not decay along the half-line".into()))
}

/// `∫_lo^hi f(x) e^(-iωx) e^(-εx) dx`, with `ε >= 0` unless `hi` is finite.
///
/// A tanh-sinh piece covers the first half period, which absorbs endpoint
/// singularities of `f`; the rest is split into one-period Gauss panels
/// and breakpoints from `cuts`.
pub fn oscillatory_integral<F>(f: F, lo: f64, hi: f64, omega: f64, eps: f64, cuts: &[f64], tol: f64) -> Result<Estimate>
where
    F: Fn(f64) -> Complex64,
{
    if eps < 0.0 && !hi.is_finite() {
        return Err(Error::InvalidParameter("damping must be nonnegative on a half-line".into()));
    }
    if !(hi > lo) {
        return Ok(Estimate::exact(ZERO));
    }
    let g = |x: f64| {
        let v = f(x);
        if v == ZERO {
            return ZERO;
        }
        v * Complex64::from_polar((-eps * x).exp(), -omega * x)
    };
    let width = if omega == 0.0 { 2.0 } else { (2.0 * PI / omega.abs()).min(2.0) };
    let first = (lo + width).min(hi);
    let mut head_cuts: Vec<f64> = cuts.iter().copied().filter(|c| *c > lo && *c < first).collect();
    head_cuts.insert(0, lo);
    head_cuts.push(first);
    let opts = QuadOptions::with_tol(tol);
    let mut total = Estimate::exact(ZERO);
    for w in head_cuts.windows(2) {
        total = total + de_integrate(g, Interval::new(w[0], w[1]), opts)?;
    }
    if first >= hi {
        return Ok(total);
    }
    let end = effective_end(|x| f(x).norm() * (-eps * x).exp(), first, hi)?;
    let mut breaks = vec![first];
    let mut x = first;
    let n = ((end - first) / width).ceil();
    if n > 5e7 {
        return Err(Error::InvalidParameter(format!("{n:.0} panels requested")));
    }
    while x < end {
        x = (x + width).min(end);
        breaks.push(x);
    }
    breaks.extend(cuts.iter().copied().filter(|c| *c > first && *c < end));
    breaks.sort_by(|a, b| a.partial_cmp(b).unwrap());
    breaks.dedup();
    Ok(total + adaptive_gl(g, &breaks, tol)?)
}

/// `h(ζ) = ∫_0^∞ e^(-ixζ) u(x) dx / √(2π)` for `Im ζ < 0`, or on the real
/// axis when `u` decays fast enough for absolute convergence; otherwise the
/// real-axis value is the boundary limit. For compact support `h` is entire
/// and any `ζ` is accepted.
pub fn laplace_fourier(u: &FunctionModel, z: Complex64, tol: f64) -> Result<Estimate> {
    if z.im > 0.0 && !u.support.hi.is_finite() {
        return Err(Error::InvalidParameter(format!("ζ = {z} lies in the upper half-plane")));
    }
    let integrable = match u.decay {
        Decay::Rapid => true,
        Decay::PowerBound(b) => b > 1.0 || u.support.hi.is_finite(),
    };
    if z.im == 0.0 && !integrable {
        return boundary_limit(u, z.re, &crate::homdist::default_etas(), tol);
    }
    let mut cuts = u.kinks.clone();
    cuts.push(1.0);
    let e = oscillatory_integral(|x| u.eval(x), u.support.lo, u.support.hi, z.re, -z.im, &cuts, tol)?;
    Ok(Estimate::new(e.value / sqrt_2pi(), e.error / sqrt_2pi()))
}

/// `h(ξ - i0)` from `h(ξ - iη)`, `η` in `etas` halving to zero, by Richardson
/// extrapolation of order 2.
pub fn boundary_limit(u: &FunctionModel, xi: f64, etas: &[f64], tol: f64) -> Result<Estimate> {
    let mut vals = Vec::with_capacity(etas.len());
    let mut cuts = u.kinks.clone();
    cuts.push(1.0);
    for &eta in etas {
        if !(eta > 0.0) {
            return Err(Error::InvalidParameter("damping heights must be positive".into()));
        }
        let e = oscillatory_integral(|x| u.eval(x), u.support.lo, u.support.hi, xi, eta, &cuts, tol)?;
        vals.push(e.value / sqrt_2pi());
    }
    richardson(&vals, 2)
}

/// `∫_0^∞ x^a e^(-ix(ξ - iη)) dx / √(2π)` for the plus side and
/// `∫_0^∞ x^a e^(ix(ξ + iη)) dx / √(2π)` for the minus side, by quadrature.
///
/// Integration by parts first lowers `Re a` into `(-1, 0]`, so the
/// quadrature sums a decaying integrand instead of cancelling large panels.
pub fn damped_power_transform(side: Side, a: Complex64, xi: f64, eta: f64, tol: f64) -> Result<Estimate> {
    let omega = match side {
        Side::Plus => xi,
        Side::Minus => -xi,
    };
    // k integrations by parts: ∫ x^a e^(-zx) = a(a-1)..(a-k+1)/z^k ∫ x^(a-k) e^(-zx)
    let z = Complex64::new(eta, omega);
    let k = a.re.ceil().max(0.0) as usize;
    let mut pre = Complex64::new(1.0, 0.0);
    for j in 0..k {
        pre *= (a - j as f64) / z;
    }
    let b = a - k as f64;
    let e = oscillatory_integral(
        |x: f64| if x > 0.0 { (b * x.ln()).exp() } else { ZERO },
        0.0,
        f64::INFINITY,
        omega,
        eta,
        &[1.0],
        tol,
    )?;
    let f = pre / sqrt_2pi();
    Ok(Estimate::new(e.value * f, e.error * f.norm()))
}

/// Sampled values `h(ζ)` on the closed lower half-plane.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct HalfPlaneSamples {
    #[serde(with = "complex_vec")]
    pub points: Vec<Complex64>,
    #[serde(with = "complex_vec")]
    pub values: Vec<Complex64>,
}

impl HalfPlaneSamples {
    pub fn new(points: Vec<Complex64>, values: Vec<Complex64>) -> Result<Self> {
        if points.len() != values.len() {
            return Err(Error::InvalidParameter(format!(
                "{} points but {} values",
                points.len(),
                values.len()
            )));
        }
        if let Some(z) = points.iter().find(|z| z.im > 0.0) {
            return Err(Error::InvalidParameter(format!("{z} lies in the upper half-plane")));
        }
        Ok(HalfPlaneSamples { points, values })
    }

    /// Samples of `h` at the given points.
    pub fn sample<H>(h: H, points: &[Complex64]) -> Result<Self>
    where
        H: Fn(Complex64) -> Result<Complex64>,
    {
        let values = points.iter().map(|z| h(*z)).collect::<Result<Vec<_>>>()?;
        HalfPlaneSamples::new(points.to_vec(), values)
    }

    /// Boundary values of `laplace_fourier(u)` at real points `xis`.
    pub fn ray(u: &FunctionModel, xis: &[f64], tol: f64) -> Result<Self> {
        let points: Vec<Complex64> = xis.iter().map(|x| Complex64::new(*x, 0.0)).collect();
        HalfPlaneSamples::sample(|z| laplace_fourier(u, z, tol).map(|e| e.value), &points)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// `n` points spaced geometrically over `[lo, hi]`.
pub fn geometric_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n < 2 {
        return vec![lo];
    }
    let r = (hi / lo).ln() / (n - 1) as f64;
    (0..n).map(|i| lo * (r * i as f64).exp()).collect()
}

/// `h(ξ ∓ i0) ~ Σ_j Σ_k c_jk (ξ ∓ i0)^(e_j) ln^k(ξ ∓ i0)` as `|ξ| → ∞`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TailExpansion {
    #[serde(with = "complex_vec")]
    pub exponents: Vec<Complex64>,
    pub coeffs: Vec<Vec<Coeff>>,
    pub boundary: BoundarySign,
}

/// Serializable complex coefficient.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Coeff(#[serde(with = "complex_obj")] pub Complex64);

impl TailExpansion {
    pub fn len(&self) -> usize {
        self.exponents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exponents.is_empty()
    }

    /// Coefficient of the pure power `(ξ ∓ i0)^(e_j)`.
    pub fn leading(&self, j: usize) -> Complex64 {
        self.coeffs[j].first().map_or(ZERO, |c| c.0)
    }

    pub fn is_log_free(&self) -> bool {
        self.coeffs.iter().all(|c| c.iter().skip(1).all(|z| z.0 == ZERO))
    }

    /// Sum of the first `n` terms at real `ξ != 0`.
    pub fn eval(&self, xi: f64, n: usize) -> Complex64 {
        let phase = if xi < 0.0 {
            match self.boundary {
                BoundarySign::MinusI0 => -PI,
                BoundarySign::PlusI0 => PI,
            }
        } else {
            0.0
        };
        let lg = Complex64::new(xi.abs().ln(), phase);
        let mut acc = ZERO;
        for j in 0..n.min(self.len()) {
            let mut poly = ZERO;
            for c in self.coeffs[j].iter().rev() {
                poly = poly * lg + c.0;
            }
            acc += poly * (self.exponents[j] * lg).exp();
        }
        acc
    }

    /// Termwise `ξ`-derivative.
    pub fn derivative(&self) -> TailExpansion {
        let mut exponents = Vec::new();
        let mut coeffs = Vec::new();
        for (e, cs) in self.exponents.iter().zip(&self.coeffs) {
            // d/dξ [ξ^e ln^k ξ] = ξ^(e-1) (e ln^k ξ + k ln^(k-1) ξ)
            let mut out = vec![Coeff(ZERO); cs.len()];
            for (k, c) in cs.iter().enumerate() {
                out[k].0 += c.0 * e;
                if k > 0 {
                    out[k - 1].0 += c.0 * k as f64;
                }
            }
            exponents.push(e - 1.0);
            coeffs.push(out);
        }
        TailExpansion {
            exponents,
            coeffs,
            boundary: self.boundary,
        }
    }
}

/// Coefficients of the expansion at infinity of `h(ξ - i0)` from the first
/// `n` terms of the expansion of `u` at zero: each `a x^p ln^k x` contributes
/// the transform of the homogeneous distribution `x^p_+ ln^k x`.
pub fn tail_coefficients(u: &FunctionModel, n: usize) -> Result<TailExpansion> {
    let e = &u.zero;
    if n > e.len() {
        return Err(Error::InsufficientTruncation {
            needed: n,
            available: e.len(),
        });
    }
    // missing integer exponents carry zero coefficients
    if e.truncate(n).spec().has_negative_integer() {
        return Err(Error::NotAppropriate(format!("exponents of {}", u.name)));
    }
    let mut exponents = Vec::with_capacity(n);
    let mut coeffs = Vec::with_capacity(n);
    for j in 0..n {
        let p = e.exponents[j];
        let m = e.coeffs[j].len() - 1;
        let mut out = vec![Coeff(ZERO); m + 1];
        if m == 0 {
            out[0].0 = e.coeffs[j][0] * gamma(p + 1.0) / sqrt_2pi() * (-I * PI * (p + 1.0) / 2.0).exp();
        } else {
            for (k, a) in e.coeffs[j].iter().enumerate() {
                if *a == ZERO {
                    continue;
                }
                for t in fourier_log_hom(Side::Plus, p, k)? {
                    out[t.m].0 += a * t.coeff;
                }
            }
        }
        exponents.push(-p - 1.0);
        coeffs.push(out);
    }
    Ok(TailExpansion {
        exponents,
        coeffs,
        boundary: BoundarySign::MinusI0,
    })
}

/// Result of [`tail_fit`].
#[derive(Clone, Debug, Serialize)]
pub struct TailFit {
    pub expansion: TailExpansion,
    /// Maximal relative misfit on the outer decade after each peeled term.
    pub residuals: Vec<f64>,
    /// `+1` for samples on the positive ray, `-1` for the negative ray; the
    /// coefficients multiply powers of `|ξ|`.
    pub ray: f64,
}

/// Tail exponents `-p_j - 1` with log degrees, in peel-off order: descending
/// real part, ties by ascending `|Im p|`.
fn tail_columns(spec: &PowerSpec, n: usize, extra: usize) -> Vec<(Complex64, usize)> {
    let mut cols: Vec<(Complex64, usize)> = spec.terms.iter().map(|t| (-t.p - 1.0, t.m)).collect();
    cols.sort_by(|a, b| {
        b.0.re
            .partial_cmp(&a.0.re)
            .unwrap()
            .then(a.0.im.abs().partial_cmp(&b.0.im.abs()).unwrap())
    });
    cols.truncate(n + extra);
    while cols.len() < n + extra {
        let last = cols.last().map_or(Complex64::new(-1.0, 0.0), |c| c.0);
        cols.push((last - 1.0, 0));
    }
    cols
}

/// Auxiliary terms fitted beyond the requested `n` to absorb truncation.
pub const TAIL_EXTRA: usize = 6;

/// Coefficients of the first `n` tail terms from samples on a real ray, by
/// weighted least squares on all terms plus [`TAIL_EXTRA`] auxiliary ones.
///
/// Terms are then peeled off in order: each stage refits the not yet frozen
/// terms to the samples minus the frozen ones and freezes the leading one.
pub fn tail_fit(samples: &HalfPlaneSamples, spec: &PowerSpec, n: usize) -> Result<TailFit> {
    if samples.is_empty() || n == 0 {
        return Err(Error::InvalidParameter("tail fit needs samples and n >= 1".into()));
    }
    let ray = samples.points[0].re.signum();
    if samples.points.iter().any(|z| z.im != 0.0 || z.re.signum() != ray || z.re == 0.0) {
        return Err(Error::InvalidParameter("tail samples must lie on one real ray".into()));
    }
    let r: Vec<f64> = samples.points.iter().map(|z| z.re.abs()).collect();
    let (rmin, rmax) = r.iter().fold((f64::INFINITY, 0.0f64), |(a, b), x| (a.min(*x), b.max(*x)));
    if rmax / rmin < 100.0 {
        return Err(Error::InvalidParameter("samples must span two decades of |ξ|".into()));
    }
    let cols = tail_columns(spec, n, TAIL_EXTRA);
    // one column per (exponent, log power)
    let mut basis: Vec<(usize, Complex64, usize)> = Vec::new();
    for (j, (e, m)) in cols.iter().enumerate() {
        for k in 0..=*m {
            basis.push((j, *e, k));
        }
    }
    if basis.len() >= samples.len() {
        return Err(Error::IllConditioned(format!(
            "{} samples for {} unknowns",
            samples.len(),
            basis.len()
        )));
    }
    let column = |b: &(usize, Complex64, usize), x: f64| (b.1 * x.ln()).exp() * x.ln().powi(b.2 as i32);
    let weight: Vec<f64> = samples.values.iter().map(|v| 1.0 / v.norm().max(1e-300)).collect();

    let mut frozen: Vec<Complex64> = vec![ZERO; basis.len()];
    let mut fixed = 0;
    let mut residuals = Vec::with_capacity(n);
    let outer: Vec<usize> = (0..r.len()).filter(|&i| r[i] >= rmax / 10.0).collect();
    for stage in 0..n {
        let free: Vec<usize> = (fixed..basis.len()).collect();
        let rows = r.len();
        let mut a = DMatrix::<Complex64>::zeros(rows, free.len());
        let mut rhs = DMatrix::<Complex64>::zeros(rows, 1);
        for i in 0..rows {
            let mut target = samples.values[i];
            for (q, b) in basis.iter().enumerate().take(fixed) {
                target -= frozen[q] * column(b, r[i]);
            }
            rhs[(i, 0)] = target * weight[i];
            for (jc, &q) in free.iter().enumerate() {
                a[(i, jc)] = column(&basis[q], r[i]) * weight[i];
            }
        }
        let norms: Vec<f64> = (0..free.len()).map(|j| a.column(j).norm().max(1e-300)).collect();
        for (j, s) in norms.iter().enumerate() {
            a.column_mut(j).scale_mut(1.0 / s);
        }
        let svd = a.svd(true, true);
        let sv = &svd.singular_values;
        let smax = sv.iter().cloned().fold(0.0, f64::max);
        let smin = sv.iter().cloned().fold(f64::INFINITY, f64::min);
        if !(smin > 1e-14 * smax) {
            return Err(Error::IllConditioned(format!(
                "singular values {smax:.3e}..{smin:.3e}"
            )));
        }
        let x = svd
            .solve(&rhs, 1e-14 * smax)
            .map_err(|e| Error::IllConditioned(e.to_string()))?;
        // freeze every column of the leading exponent
        let lead = basis[fixed].0;
        let mut q = fixed;
        while q < basis.len() && basis[q].0 == lead {
            frozen[q] = x[(q - fixed, 0)] / norms[q - fixed];
            q += 1;
        }
        fixed = q;
        let mut worst: f64 = 0.0;
        for &i in &outer {
            let mut model = ZERO;
            for (q, b) in basis.iter().enumerate().take(fixed) {
                model += frozen[q] * column(b, r[i]);
            }
            worst = worst.max((samples.values[i] - model).norm() * weight[i]);
        }
        if stage > 0 && worst > 2.0 * residuals[stage - 1] + 1e-13 {
            return Err(Error::IllConditioned(format!(
                "residual grows from {:.3e} to {worst:.3e} at term {stage}",
                residuals[stage - 1]
            )));
        }
        residuals.push(worst);
    }
    let mut exponents = Vec::with_capacity(n);
    let mut coeffs: Vec<Vec<Coeff>> = Vec::with_capacity(n);
    for (j, (e, m)) in cols.iter().take(n).enumerate() {
        exponents.push(*e);
        let mut cs = vec![Coeff(ZERO); m + 1];
        for (q, b) in basis.iter().enumerate() {
            if b.0 == j {
                cs[b.2] = Coeff(frozen[q]);
            }
        }
        coeffs.push(cs);
    }
    Ok(TailFit {
        expansion: TailExpansion {
            exponents,
            coeffs,
            boundary: BoundarySign::MinusI0,
        },
        residuals,
        ray,
    })
}

/// `(c⁺_j, c⁻_j)` with `c⁻_j = e^(i(p_j+1)π) c⁺_j` for a lower boundary value
/// and `e^(-i(p_j+1)π) c⁺_j` for an upper one, where `-p_j-1` is the tail exponent.
pub fn symmetry_split(t: &TailExpansion) -> Result<Vec<(Complex64, Complex64)>> {
    if !t.is_log_free() {
        return Err(Error::NotAppropriate(
            "logarithmic tail terms have no two-sided power law".into(),
        ));
    }
    let sign = match t.boundary {
        BoundarySign::MinusI0 => 1.0,
        BoundarySign::PlusI0 => -1.0,
    };
    Ok((0..t.len())
        .map(|j| {
            let c = t.leading(j);
            let p1 = -t.exponents[j];
            (c, c * (I * sign * PI * p1).exp())
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcmodel::{bump, power_exp};

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol * b.norm().max(1e-300)
    }

    fn exp_transform(z: Complex64) -> Complex64 {
        1.0 / (sqrt_2pi() * (1.0 + I * z))
    }

    #[test]
    fn exponential_on_imaginary_axis() {
        let u = power_exp(c(0.0)).unwrap();
        let h = laplace_fourier(&u, Complex64::new(0.0, -1.0), 1e-12).unwrap();
        assert!(close(h.value, c(1.0 / (2.0 * sqrt_2pi())), 1e-12));
    }

    #[test]
    fn exponential_on_real_axis() {
        let u = power_exp(c(0.0)).unwrap();
        for xi in [-30.0, -1.0, 0.0, 2.5, 100.0] {
            let h = laplace_fourier(&u, c(xi), 1e-12).unwrap();
            assert!(close(h.value, exp_transform(c(xi)), 1e-11), "{xi}");
        }
    }

    #[test]
    fn upper_half_plane_is_rejected_unless_compact() {
        let u = power_exp(c(0.0)).unwrap();
        assert!(laplace_fourier(&u, Complex64::new(1.0, 0.1), 1e-10).is_err());
        // indicator of (0, 1]: h(ζ) = (1 - e^(-iζ)) / (iζ √(2π))
        let z = Complex64::new(1.5, 2.0);
        let h = laplace_fourier(&crate::funcmodel::heaviside_unit(), z, 1e-12).unwrap().value;
        let expected = (1.0 - (-I * z).exp()) / (I * z * sqrt_2pi());
        assert!(close(h, expected, 1e-11), "{h} {expected}");
    }

    #[test]
    fn boundary_limit_matches_real_value() {
        let u = power_exp(c(0.0)).unwrap();
        let b = boundary_limit(&u, 1.0, &crate::homdist::default_etas(), 1e-12).unwrap();
        assert!(close(b.value, exp_transform(c(1.0)), 1e-9), "{b:?}");
    }

    #[test]
    fn bump_boundary_is_real_value() {
        let u = bump(0.5, 2.0).unwrap();
        let direct = laplace_fourier(&u, c(3.0), 1e-12).unwrap().value;
        let lim = boundary_limit(&u, 3.0, &crate::homdist::default_etas(), 1e-12).unwrap();
        assert!(close(lim.value, direct, 1e-9), "{lim:?} {direct}");
    }

    #[test]
    fn exponential_tail_coefficients() {
        let u = power_exp(c(0.0)).unwrap();
        let t = tail_coefficients(&u, 4).unwrap();
        for j in 0..4 {
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            let expected = I.powi(-(j as i32) - 1) * sign / sqrt_2pi();
            assert!(close(t.leading(j), expected, 1e-13));
            assert_eq!(t.exponents[j], c(-(j as f64) - 1.0));
        }
    }

    #[test]
    fn exact_synthetic_tail() {
        let cs = [Complex64::new(0.3, -1.0), c(2.0), Complex64::new(0.0, 0.5)];
        let xs = geometric_grid(5.0, 2000.0, 40);
        let pts: Vec<Complex64> = xs.iter().map(|x| c(*x)).collect();
        let s = HalfPlaneSamples::sample(
            |z| Ok((0..3).map(|j| cs[j] * z.powi(-(j as i32) - 1)).sum()),
            &pts,
        )
        .unwrap();
        let fit = tail_fit(&s, &PowerSpec::arithmetic(c(0.0), 1.0, 3), 3).unwrap();
        for j in 0..3 {
            assert!((fit.expansion.leading(j) - cs[j]).norm() < 1e-9, "{j}");
        }
    }

    #[test]
    fn tail_of_exponential_from_samples() {
        let u = power_exp(c(0.0)).unwrap();
        let s = HalfPlaneSamples::ray(&u, &geometric_grid(10.0, 1000.0, 40), 1e-13).unwrap();
        let fit = tail_fit(&s, &u.zero.spec(), 2).unwrap();
        for j in 0..2 {
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            let expected = I.powi(-(j as i32) - 1) * sign / sqrt_2pi();
            assert!(close(fit.expansion.leading(j), expected, 1e-8), "{j}: {fit:?}");
        }
    }

    #[test]
    fn symmetry_law_on_half_power() {
        let t = TailExpansion {
            exponents: vec![c(-1.5)],
            coeffs: vec![vec![Coeff(c(2.0))]],
            boundary: BoundarySign::MinusI0,
        };
        let (p, m) = symmetry_split(&t).unwrap()[0];
        assert!(close(p, c(2.0), 0.0));
        assert!(close(m, -I * 2.0, 1e-15));
    }

    #[test]
    fn damped_transform_matches_closed_form() {
        let a = c(0.3);
        let eta = 1e-2;
        let v = damped_power_transform(Side::Plus, a, 2.0, eta, 1e-12).unwrap().value;
        let z = Complex64::new(2.0, -eta);
        let expected = gamma(a + 1.0) / sqrt_2pi() / (I * z).powc(a + 1.0);
        assert!(close(v, expected, 1e-9), "{v} {expected}");
    }
}
