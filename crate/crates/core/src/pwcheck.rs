//! Paley-Wiener type classifiers: growth envelopes of sampled transforms,
//! support from exponential type, line-norm growth, rapid decay on vertical
//! lines, and tempered growth towards the real axis.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::funcmodel::{Cutoff, FunctionModel};
use crate::mellin::mellin_via_fourier;
use crate::quad::{de_integrate_raw, gl_panel, Interval, QuadOptions};

/// Relative tolerance on a fitted exponential type.
pub const TYPE_TOL: f64 = 0.1;
/// Absolute tolerance on a fitted power.
pub const POWER_TOL: f64 = 0.5;
/// Default sampling distances from the imaginary (or real) axis.
pub const DEFAULT_R: [f64; 4] = [5.0, 10.0, 20.0, 40.0];

/// Default sampling heights, `|η| <= 100`.
pub fn default_heights() -> Vec<f64> {
    let pos = [0.0, 1.0, 3.0, 10.0, 30.0, 100.0];
    let mut v: Vec<f64> = pos.iter().rev().map(|x| -x).collect();
    v.extend(pos.iter().skip(1));
    v
}

/// Which bound a [`GrowthReport`] certifies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GrowthModel {
    /// `|h(s)| <= C <s>^m e^(a|Re s|)`.
    MellinEntire,
    /// `|h(ζ)| <= C <ζ>^m e^(a|Im ζ|)`.
    FourierEntire,
    /// `|h(ζ)| <= C <ζ>^m M_n(η)` on the lower half-plane.
    HalfplaneTempered,
    /// `||h(ξ + i·)||_L2 <= C e^(aξ)`.
    L2Line,
}

/// Fitted growth constants with the verdict of the check.
#[derive(Clone, Debug, Serialize)]
pub struct GrowthReport {
    #[serde(rename = "C")]
    pub c: f64,
    pub m: f64,
    pub a: f64,
    pub model: GrowthModel,
    pub residual: f64,
    pub verdict: bool,
    /// Boundary order for tempered growth.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

/// Support interval or radius implied by an exponential type.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SupportEstimate {
    pub kind: SupportKind,
    pub low: f64,
    pub high: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SupportKind {
    MellinInterval,
    FourierRadius,
}

fn bracket(z: Complex64) -> f64 {
    (1.0 + z.norm_sqr()).sqrt()
}

/// Least squares `y ≈ X β` by SVD.
fn lstsq(rows: &[Vec<f64>], y: &[f64]) -> Result<Vec<f64>> {
    let n = rows.len();
    let p = rows[0].len();
    let x = DMatrix::from_fn(n, p, |i, j| rows[i][j]);
    let b = DVector::from_column_slice(y);
    let svd = x.svd(true, true);
    let smax = svd.singular_values.max();
    let beta = svd
        .solve(&b, 1e-13 * smax)
        .map_err(|e| Error::IllConditioned(e.to_string()))?;
    Ok(beta.iter().copied().collect())
}

struct TypeFit {
    a: f64,
    m: f64,
    big_c: f64,
    warnings: Vec<String>,
}

fn sample_point(model: GrowthModel, r: f64, side: f64, y: f64) -> Complex64 {
    match model {
        GrowthModel::FourierEntire => Complex64::new(y, side * r),
        _ => Complex64::new(side * r, y),
    }
}

/// Sample points of [`exp_type_fit`] at the given distances, including the
/// doubled ones used for the residual.
pub fn type_sample_points(model: GrowthModel, rlist: &[f64], heights: &[f64]) -> Vec<Complex64> {
    let mut out = Vec::new();
    for r in rlist.iter().chain(rlist.iter().map(|r| 2.0 * r).collect::<Vec<_>>().iter()) {
        for side in [1.0, -1.0] {
            for &y in heights {
                out.push(sample_point(model, *r, side, y));
            }
        }
    }
    out
}

fn fit_type<H>(h: &H, model: GrowthModel, rlist: &[f64], heights: &[f64]) -> Result<TypeFit>
where
    H: Fn(Complex64) -> Result<Complex64>,
{
    let mut warnings = Vec::new();
    let mut samples: Vec<(Complex64, f64)> = Vec::new();
    // one envelope per side, since the two edges of a support differ
    let mut env = [Vec::new(), Vec::new()];
    for &r in rlist {
        for (k, side) in [1.0, -1.0].into_iter().enumerate() {
            let mut top = f64::NEG_INFINITY;
            for &y in heights {
                let z = sample_point(model, r, side, y);
                let v = h(z)?.norm();
                if !v.is_finite() {
                    warnings.push(format!("non-finite sample at {z} skipped"));
                    continue;
                }
                if v > 0.0 {
                    samples.push((z, v.ln()));
                    top = top.max(v.ln());
                }
            }
            if top.is_finite() {
                env[k].push((r, top));
            } else {
                warnings.push(format!("no usable sample at R = {r}"));
            }
        }
    }
    let usable: Vec<&Vec<(f64, f64)>> = env.iter().filter(|e| e.len() >= 4).collect();
    if usable.is_empty() {
        return Err(Error::InvalidParameter(
            "exponential type fit needs four usable sampling distances".into(),
        ));
    }
    let flat = |e: &Vec<(f64, f64)>| e.iter().all(|(_, y)| (y - e[0].1).abs() < 1e-12);
    if usable.iter().all(|e| flat(e)) {
        return Ok(TypeFit {
            a: 0.0,
            m: 0.0,
            big_c: samples.iter().map(|s| s.1).fold(f64::NEG_INFINITY, f64::max).exp(),
            warnings,
        });
    }
    let mut best: Option<(f64, f64)> = None;
    for e in usable {
        let rows: Vec<Vec<f64>> = e
            .iter()
            .map(|(r, _)| vec![1.0, *r, r.sqrt(), (1.0 + r * r).sqrt().ln()])
            .collect();
        let ys: Vec<f64> = e.iter().map(|p| p.1).collect();
        let beta = lstsq(&rows, &ys)?;
        if best.is_none_or(|(a, _)| beta[1] > a) {
            best = Some((beta[1], beta[3]));
        }
    }
    let (a, m) = best.expect("at least one side fitted");
    let big_c = samples
        .iter()
        .map(|(z, ly)| {
            let lin = match model {
                GrowthModel::FourierEntire => z.im.abs(),
                _ => z.re.abs(),
            };
            ly - m * bracket(*z).ln() - a * lin
        })
        .fold(f64::NEG_INFINITY, f64::max)
        .exp();
    Ok(TypeFit {
        a,
        m,
        big_c,
        warnings,
    })
}

/// Exponential type of an entire transform from the envelope of `ln|h|` on
/// the lines `Re s = ±R` (Mellin) or `Im ζ = ±R` (Fourier).
///
/// The envelope of each side is fitted by `c0 + aR + b√R + m ln<R>`, the
/// `√R` term absorbing the sub-exponential edge behaviour of smooth
/// cut-offs, and the larger type is kept. `C` is the least constant making the bound hold at every
/// sample. The residual is the relative change of `a` when the distances
/// are doubled; the verdict asks it to stay within [`TYPE_TOL`].
pub fn exp_type_fit<H>(h: &H, model: GrowthModel, rlist: &[f64], heights: &[f64]) -> Result<GrowthReport>
where
    H: Fn(Complex64) -> Result<Complex64>,
{
    if !matches!(model, GrowthModel::MellinEntire | GrowthModel::FourierEntire) {
        return Err(Error::InvalidParameter(format!("{model:?} is not an exponential type model")));
    }
    if rlist.iter().any(|r| !(*r > 0.0)) || heights.is_empty() {
        return Err(Error::InvalidParameter("distances must be positive and heights nonempty".into()));
    }
    let first = fit_type(h, model, rlist, heights)?;
    let doubled: Vec<f64> = rlist.iter().map(|r| 2.0 * r).collect();
    let second = fit_type(h, model, &doubled, heights)?;
    let residual = (first.a - second.a).abs() / second.a.abs().max(1.0);
    let mut warnings = first.warnings;
    warnings.extend(second.warnings);
    Ok(GrowthReport {
        c: first.big_c,
        m: first.m,
        a: first.a,
        model,
        residual,
        verdict: residual <= TYPE_TOL && first.a.is_finite(),
        n: None,
        warnings,
    })
}

/// Support implied by a verified exponential type, widened by [`TYPE_TOL`]:
/// `[e^-a', e^a']` for Mellin transforms and `[-a', a']` for Fourier ones.
pub fn support_estimate(r: &GrowthReport) -> Result<SupportEstimate> {
    if !r.verdict {
        return Err(Error::Classification("growth report has a negative verdict".into()));
    }
    let a = r.a.max(0.0) * (1.0 + TYPE_TOL);
    match r.model {
        GrowthModel::MellinEntire => Ok(SupportEstimate {
            kind: SupportKind::MellinInterval,
            low: (-a).exp(),
            high: a.exp(),
        }),
        GrowthModel::FourierEntire => Ok(SupportEstimate {
            kind: SupportKind::FourierRadius,
            low: -a,
            high: a,
        }),
        m => Err(Error::InvalidParameter(format!("{m:?} carries no support information"))),
    }
}

/// Half-width of the `η` window for line norms.
pub const LINE_HALF_WIDTH: f64 = 48.0;

/// `∫ |M[u](ξ + iη)|^2 dη` by composite Gauss-Legendre on `|η| <= A` plus
/// a power-law tail fitted at the window edges.
pub fn line_norm_squared(u: &FunctionModel, xi: f64) -> Result<f64> {
    let a = LINE_HALF_WIDTH;
    let h2 = |eta: f64| -> Result<f64> { Ok(mellin_via_fourier(u, xi, eta)?.value.norm_sqr()) };
    let panels = (a as usize) * 2;
    let width = 2.0 * a / panels as f64;
    let err = std::cell::RefCell::new(None);
    let f = |eta: f64| match h2(eta) {
        Ok(v) => Complex64::new(v, 0.0),
        Err(e) => {
            err.borrow_mut().get_or_insert(e);
            Complex64::new(0.0, 0.0)
        }
    };
    let mut body = 0.0;
    for i in 0..panels {
        let lo = -a + i as f64 * width;
        body += gl_panel(&f, lo, lo + width, 16).re;
    }
    if let Some(e) = err.into_inner() {
        return Err(e);
    }
    let mut tail = 0.0;
    for side in [1.0, -1.0] {
        let inner = h2(side * 0.75 * a)?;
        let outer = h2(side * a)?;
        if outer == 0.0 {
            continue;
        }
        let q = (inner / outer).ln() / (4.0f64 / 3.0).ln();
        if !(q > 1.0) {
            return Err(Error::Divergent(format!(
                "line samples decay like |η|^-{q:.2}, not square integrable"
            )));
        }
        tail += outer * a / (q - 1.0);
    }
    Ok(body + tail)
}

/// `2π ∫ t^(2ξ-1) |u(t)|^2 dt`, the line norm by Plancherel.
pub fn plancherel_line_norm_squared(u: &FunctionModel, xi: f64, tol: f64) -> Result<f64> {
    let f = |x: f64| {
        let v = u.eval((-x).exp()).norm_sqr();
        if v == 0.0 {
            Complex64::new(0.0, 0.0)
        } else {
            Complex64::new((v.ln() - 2.0 * xi * x).exp(), 0.0)
        }
    };
    let mut cuts = vec![f64::NEG_INFINITY, f64::INFINITY, 0.0];
    for t in [u.support.lo, u.support.hi].iter().chain(&u.kinks) {
        if *t > 0.0 && t.is_finite() {
            cuts.push(-t.ln());
        }
    }
    cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    cuts.dedup();
    let opts = QuadOptions::with_tol(tol);
    let mut total = 0.0;
    let mut err = 0.0;
    for w in cuts.windows(2) {
        // slivers at support ends may stall convergence at negligible size
        let (e, _) = de_integrate_raw(&f, Interval::new(w[0], w[1]), opts)?;
        total += e.value.re;
        err += e.error;
    }
    if err > tol * total.abs() {
        return Err(Error::Accuracy {
            what: "line norm by Plancherel".into(),
            achieved: err,
            target: tol * total.abs(),
        });
    }
    Ok(2.0 * std::f64::consts::PI * total)
}

/// Growth of `||M[u](ξ + i·)||_L2` in `ξ`, fitted as `C <ξ>^m e^(aξ)`.
///
/// The verdict compares `a` with `ln` of the declared support bound.
pub fn l2_line_growth(u: &FunctionModel, xis: &[f64]) -> Result<GrowthReport> {
    if xis.len() < 3 {
        return Err(Error::InvalidParameter("line growth needs three abscissae".into()));
    }
    let strip = u.fundamental_strip();
    if let Some(x) = xis.iter().find(|x| !strip.contains(Complex64::new(**x, 0.0))) {
        return Err(Error::StripViolation {
            s: Complex64::new(*x, 0.0),
            alpha: strip.alpha,
            beta: strip.beta,
        });
    }
    let mut rows = Vec::new();
    let mut ys = Vec::new();
    for &x in xis {
        let n2 = line_norm_squared(u, x)?;
        if !(n2 > 0.0) || !n2.is_finite() {
            return Err(Error::NonFinite(format!("line norm at ξ = {x}")));
        }
        rows.push(vec![1.0, x, (1.0 + x * x).sqrt().ln()]);
        ys.push(0.5 * n2.ln());
    }
    let beta = lstsq(&rows, &ys)?;
    let fitted: Vec<f64> = rows.iter().map(|r| beta[0] + beta[1] * r[1] + beta[2] * r[2]).collect();
    let residual = ys.iter().zip(&fitted).map(|(y, f)| (y - f).max(0.0)).fold(0.0, f64::max);
    let declared = u.support.hi.ln();
    let a = beta[1];
    Ok(GrowthReport {
        c: (beta[0] + residual).exp(),
        m: beta[2],
        a,
        model: GrowthModel::L2Line,
        residual,
        verdict: a <= declared + TYPE_TOL * declared.abs().max(1.0),
        n: None,
        warnings: Vec::new(),
    })
}

/// Outcome of [`schwartz_line_check`].
#[derive(Clone, Debug, Serialize)]
pub struct SchwartzReport {
    pub c: f64,
    pub etas: Vec<f64>,
    /// `max_± |χ M[u](c ± iη)|` at each height.
    pub envelope: Vec<f64>,
    /// Decay exponent from the last resolved pair of heights.
    pub rate: Option<f64>,
    pub superpolynomial: bool,
    /// Whether `|η|^m χ M[u]` stays bounded and eventually decreasing, per `m`.
    pub pass: Vec<bool>,
    pub verdict: bool,
}

/// Level below which transform values count as resolved to zero.
pub const NOISE_FLOOR: f64 = 1e-13;

/// Rapid decay of `χ(η) M[u](c + iη)` on a doubling grid of heights up to 128,
/// with `χ` vanishing for `|η| <= cut.r0` and equal to one beyond `cut.r1`.
///
/// Decay is superpolynomial when the values reach the noise floor or the
/// local log-log slopes keep steepening; otherwise the last slope `-r` bounds
/// the admissible weights `|η|^m` by `m <= r + 1/4`.
pub fn schwartz_line_check(u: &FunctionModel, c: f64, cut: Cutoff, m_max: usize) -> Result<SchwartzReport> {
    let mut etas = Vec::new();
    let mut e = 2.0f64.max(cut.r1);
    while e <= 128.0 {
        etas.push(e);
        e *= 2.0;
    }
    let chi = |eta: f64| cut.excision(eta.abs());
    let scale = mellin_via_fourier(u, c, 0.0)?
        .value
        .norm()
        .max(mellin_via_fourier(u, c, 1.0)?.value.norm());
    let mut envelope = Vec::new();
    let mut floor_hit = false;
    for &eta in &etas {
        let v = mellin_via_fourier(u, c, eta)?
            .value
            .norm()
            .max(mellin_via_fourier(u, c, -eta)?.value.norm())
            * chi(eta);
        envelope.push(v);
        if v < NOISE_FLOOR * scale {
            floor_hit = true;
            break;
        }
    }
    let used = &etas[..envelope.len()];
    let slopes: Vec<f64> = (1..envelope.len())
        .map(|i| (envelope[i] / envelope[i - 1]).ln() / (used[i] / used[i - 1]).ln())
        .collect();
    let steepening = slopes.len() >= 3 && slopes.windows(2).rev().take(2).all(|w| w[1] < w[0] - 0.1);
    let superpolynomial = floor_hit || steepening;
    let rate = slopes.last().map(|s| -s);
    let pass: Vec<bool> = (0..=m_max)
        .map(|m| superpolynomial || rate.is_some_and(|r| m as f64 <= r + 0.25))
        .collect();
    Ok(SchwartzReport {
        c,
        etas: used.to_vec(),
        envelope,
        rate,
        superpolynomial,
        verdict: pass.iter().all(|p| *p),
        pass,
    })
}

/// Default tempered-growth grid: `ξ` in `[-50, 50]`, `-η` geometric in `[1e-3, 10]`.
pub fn default_tempered_grid() -> Vec<Complex64> {
    let xis = [-50.0, -10.0, -3.0, -1.0, -0.3, 0.0, 0.3, 1.0, 3.0, 10.0, 50.0];
    let etas = crate::fourier::geometric_grid(1e-3, 10.0, 25);
    let mut g = Vec::new();
    for x in xis {
        for e in &etas {
            g.push(Complex64::new(x, -e));
        }
    }
    g
}

/// Largest boundary order tried by [`tempered_growth_check`].
pub const MAX_BOUNDARY_ORDER: u32 = 10;

/// Least `n` with `|h(ζ)| <= C <ζ>^m M_n(η)`, `M_n(η) = |η|^-n` for
/// `|η| <= 1` and 1 beyond.
///
/// `m` is the least natural number not below the fitted slope of `ln|h|`
/// against `ln<ζ>` minus [`POWER_TOL`]. A bound holds when the weighted
/// values on the decade nearest the real axis stay within twice their
/// maximum on the rest of the grid.
pub fn tempered_growth_check<H>(h: &H, grid: &[Complex64]) -> Result<GrowthReport>
where
    H: Fn(Complex64) -> Result<Complex64>,
{
    if grid.iter().any(|z| z.im >= 0.0) {
        return Err(Error::InvalidParameter("grid must lie in the open lower half-plane".into()));
    }
    let eta_min = grid.iter().map(|z| -z.im).fold(f64::INFINITY, f64::min);
    let eta_max = grid.iter().map(|z| -z.im).fold(0.0, f64::max);
    if eta_min > 1e-3 * (1.0 + 1e-9) || eta_max < 10.0 * (1.0 - 1e-9) {
        return Err(Error::InvalidParameter("grid must cover 1e-3 <= |η| <= 10".into()));
    }
    let mut warnings = Vec::new();
    let mut pts = Vec::new();
    for z in grid {
        let v = h(*z)?.norm();
        if v.is_finite() {
            pts.push((*z, v));
        } else {
            warnings.push(format!("non-finite sample at {z} skipped"));
        }
    }
    let far: Vec<(f64, f64)> = pts
        .iter()
        .filter(|(z, v)| -z.im >= 1.0 && *v > 0.0)
        .map(|(z, v)| (bracket(*z).ln(), v.ln()))
        .collect();
    let slope = if far.len() >= 2 {
        let rows: Vec<Vec<f64>> = far.iter().map(|p| vec![1.0, p.0]).collect();
        let ys: Vec<f64> = far.iter().map(|p| p.1).collect();
        lstsq(&rows, &ys)?[1]
    } else {
        0.0
    };
    let m = (slope - POWER_TOL).ceil().max(0.0);
    for n in 0..=MAX_BOUNDARY_ORDER {
        let weighted: Vec<(f64, f64)> = pts
            .iter()
            .map(|(z, v)| {
                let eta = -z.im;
                let mn = if eta <= 1.0 { eta.powi(n as i32) } else { 1.0 };
                (eta, v * mn / bracket(*z).powf(m))
            })
            .collect();
        let near = weighted
            .iter()
            .filter(|(e, _)| *e <= 10.0 * eta_min)
            .map(|w| w.1)
            .fold(0.0, f64::max);
        let rest = weighted
            .iter()
            .filter(|(e, _)| *e > 10.0 * eta_min)
            .map(|w| w.1)
            .fold(0.0, f64::max);
        let ratio = if rest > 0.0 { near / rest } else { 0.0 };
        if ratio <= 2.0 {
            let c = weighted.iter().map(|w| w.1).fold(0.0, f64::max);
            return Ok(GrowthReport {
                c,
                m,
                a: 0.0,
                model: GrowthModel::HalfplaneTempered,
                residual: ratio,
                verdict: true,
                n: Some(n),
                warnings,
            });
        }
    }
    Err(Error::Classification(format!(
        "no boundary order up to {MAX_BOUNDARY_ORDER} bounds the samples"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcmodel::{bump, heaviside_unit, power_exp};
    use crate::homdist::hm_analytic;
    use crate::mellin::mellin_eval;
    use crate::specfun::gamma;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn constant_has_zero_type() {
        let r = exp_type_fit(&|_| Ok(c(1.0)), GrowthModel::MellinEntire, &DEFAULT_R, &default_heights()).unwrap();
        assert_eq!((r.a, r.m, r.c), (0.0, 0.0, 1.0));
        assert!(r.verdict);
    }

    #[test]
    fn bump_type_and_support() {
        let e = std::f64::consts::E;
        let u = bump(1.0 / e, e).unwrap();
        let h = |s: Complex64| mellin_eval(&u, s, 1e-10).map(|v| v.value);
        let r = exp_type_fit(&h, GrowthModel::MellinEntire, &DEFAULT_R, &default_heights()).unwrap();
        assert!(r.a > 0.9 && r.a < 1.1, "{r:?}");
        assert!(r.verdict);
        let s = support_estimate(&r).unwrap();
        assert!(s.low <= 1.0 / e && s.high >= e);
    }

    #[test]
    fn gamma_has_no_type() {
        let h = |s: Complex64| Ok(gamma(s + 50.0));
        let r = exp_type_fit(&h, GrowthModel::MellinEntire, &DEFAULT_R, &[0.0, 5.0]).unwrap();
        assert!(!r.verdict, "{r:?}");
        assert!(support_estimate(&r).is_err());
    }

    #[test]
    fn line_norm_by_plancherel() {
        let u = heaviside_unit().dilated(std::f64::consts::E).unwrap();
        for xi in [0.5, 2.0] {
            let a = line_norm_squared(&u, xi).unwrap();
            let b = plancherel_line_norm_squared(&u, xi, 1e-12).unwrap();
            assert!((a - b).abs() < 1e-3 * b, "{a} {b}");
        }
    }

    #[test]
    fn line_growth_recovers_log_support() {
        let u = heaviside_unit().dilated(std::f64::consts::E).unwrap();
        let r = l2_line_growth(&u, &[1.0, 2.0, 4.0, 8.0]).unwrap();
        assert!((r.a - 1.0).abs() < TYPE_TOL, "{r:?}");
        assert!(r.verdict);
    }

    #[test]
    fn schwartz_examples() {
        let cut = Cutoff::default();
        let r = schwartz_line_check(&power_exp(c(0.0)).unwrap(), 0.5, cut, 6).unwrap();
        assert!(r.verdict && r.superpolynomial);
        let r = schwartz_line_check(&heaviside_unit(), 0.5, cut, 6).unwrap();
        assert!(r.pass[1] && !r.pass[2], "{r:?}");
        let r = schwartz_line_check(&bump(0.5, 2.0).unwrap(), 0.5, cut, 6).unwrap();
        assert!(r.verdict, "{r:?}");
    }

    #[test]
    fn tempered_orders() {
        let grid = default_tempered_grid();
        for m in 0..4 {
            let h = hm_analytic(m);
            let r = tempered_growth_check(&|z| Ok(h(z)), &grid).unwrap();
            assert_eq!(r.n, Some(m as u32 + 1), "{r:?}");
        }
        let r = tempered_growth_check(&|z: Complex64| Ok((-z * z).exp() * 0.0 + c(1.0)), &grid).unwrap();
        assert_eq!(r.n, Some(0));
        assert_eq!(r.m, 0.0);
    }
}
