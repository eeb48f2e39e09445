//! Singular expansions of meromorphic functions and the correspondence with
//! log-power expansions at zero and infinity.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::funcmodel::{Endpoint, Expansion, FunctionModel, FundamentalStrip};
use crate::io::{complex_obj, complex_opt, complex_vec};
use crate::mellin::mellin_continue_auto;
use crate::quad::circle_points;
use crate::specfun::factorial;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Poles closer than this are merged.
pub const MERGE_TOL: f64 = 1e-12;

/// Trapezoid points on the Laurent circle.
pub const LAURENT_POINTS: usize = 256;

/// Principal part at one pole, optionally with a constant term.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SingularElement {
    #[serde(rename = "q", with = "complex_obj")]
    pub pole: Complex64,
    /// `principal[r - 1]` multiplies `(s - q)^-r`.
    #[serde(with = "complex_vec")]
    pub principal: Vec<Complex64>,
    #[serde(with = "complex_opt", default)]
    pub constant: Option<Complex64>,
}

impl SingularElement {
    pub fn order(&self) -> usize {
        self.principal.len()
    }

    pub fn eval(&self, s: Complex64) -> Complex64 {
        let w = 1.0 / (s - self.pole);
        let mut acc = ZERO;
        let mut p = w;
        for c in &self.principal {
            acc += c * p;
            p *= w;
        }
        acc + self.constant.unwrap_or(ZERO)
    }
}

/// A finite sum of singular elements valid on a strip.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SingularExpansion {
    pub elements: Vec<SingularElement>,
    pub strip: FundamentalStrip,
}

fn trim(mut v: Vec<Complex64>) -> Vec<Complex64> {
    while v.last() == Some(&ZERO) {
        v.pop();
    }
    v
}

/// Singular expansion of the Mellin transform from a log-power expansion.
///
/// A term `a t^p ln^k t` at zero contributes `a (-1)^k k! / (s + p)^(k+1)`;
/// at infinity the sign is reversed.
pub fn direct_map(e: &Expansion) -> SingularExpansion {
    let sign = match e.at {
        Endpoint::Zero => 1.0,
        Endpoint::Infinity => -1.0,
    };
    let mut elements: Vec<SingularElement> = Vec::new();
    for (p, row) in e.exponents.iter().zip(&e.coeffs) {
        let q = -*p;
        let principal: Vec<Complex64> = row
            .iter()
            .enumerate()
            .map(|(k, a)| {
                let s = if k % 2 == 0 { 1.0 } else { -1.0 };
                a * (sign * s * factorial(k))
            })
            .collect();
        if let Some(el) = elements.iter_mut().find(|el| (el.pole - q).norm() < MERGE_TOL) {
            if el.principal.len() < principal.len() {
                el.principal.resize(principal.len(), ZERO);
            }
            for (i, c) in principal.into_iter().enumerate() {
                el.principal[i] += c;
            }
        } else {
            elements.push(SingularElement {
                pole: q,
                principal,
                constant: None,
            });
        }
    }
    let elements = elements
        .into_iter()
        .map(|mut el| {
            el.principal = trim(el.principal);
            el
        })
        .filter(|el| !el.principal.is_empty())
        .collect();
    let lead = e.exponents.first().map(|p| -p.re);
    let rem = -e.remainder_exp;
    let strip = match e.at {
        Endpoint::Zero => FundamentalStrip::new(rem, lead.unwrap_or(f64::INFINITY)),
        Endpoint::Infinity => FundamentalStrip::new(lead.unwrap_or(f64::NEG_INFINITY), rem),
    };
    SingularExpansion { elements, strip }
}

/// Log-power expansion whose Mellin transform has the given singular expansion.
pub fn converse_map(se: &SingularExpansion, at: Endpoint) -> Result<Expansion> {
    let sign = match at {
        Endpoint::Zero => 1.0,
        Endpoint::Infinity => -1.0,
    };
    let mut els: Vec<&SingularElement> = se.elements.iter().filter(|el| !el.principal.is_empty()).collect();
    match at {
        Endpoint::Zero => els.sort_by(|a, b| b.pole.re.partial_cmp(&a.pole.re).unwrap()),
        Endpoint::Infinity => els.sort_by(|a, b| a.pole.re.partial_cmp(&b.pole.re).unwrap()),
    }
    let exponents = els.iter().map(|el| -el.pole).collect();
    let coeffs = els
        .iter()
        .map(|el| {
            el.principal
                .iter()
                .enumerate()
                .map(|(k, c)| {
                    let s = if k % 2 == 0 { 1.0 } else { -1.0 };
                    c * (sign * s / factorial(k))
                })
                .collect()
        })
        .collect();
    let rem = match at {
        Endpoint::Zero => -se.strip.alpha,
        Endpoint::Infinity => -se.strip.beta,
    };
    Expansion::new(at, exponents, coeffs, rem)
}

/// Sum of the principal parts and constants at `s`.
pub fn eval_principal(se: &SingularExpansion, s: Complex64) -> Result<Complex64> {
    for el in &se.elements {
        if !el.principal.is_empty() && (s - el.pole).norm() < MERGE_TOL {
            return Err(Error::PoleProximity {
                s,
                pole: el.pole,
                guard: MERGE_TOL,
            });
        }
    }
    Ok(se.elements.iter().map(|el| el.eval(s)).sum())
}

/// Principal coefficients `c_1..c_k` and the constant term of `h` at `q`,
/// by the trapezoid rule on the circle of radius `radius`.
pub fn laurent_coefficients<H>(h: &H, q: Complex64, radius: f64, k: usize, n: usize) -> Result<(Vec<Complex64>, Complex64)>
where
    H: Fn(Complex64) -> Result<Complex64>,
{
    let mut principal = vec![ZERO; k];
    let mut constant = ZERO;
    for (z, e) in circle_points(q, radius, n) {
        let v = h(z)?;
        constant += v;
        let mut w = e * radius;
        for c in principal.iter_mut() {
            *c += v * w;
            w *= e * radius;
        }
    }
    let n = n as f64;
    Ok((principal.into_iter().map(|c| c / n).collect(), constant / n))
}

/// Laurent data at a pole with a radius-halving consistency check.
#[derive(Clone, Debug, Serialize)]
pub struct LaurentData {
    #[serde(with = "complex_vec")]
    pub principal: Vec<Complex64>,
    #[serde(with = "complex_obj")]
    pub constant: Complex64,
    pub discrepancy: f64,
}

/// Extract `c_1..c_k` and the constant of `h` at `q`.
///
/// The coefficients are recomputed on a circle of half the radius; a
/// disagreement beyond `1e-6 (1 + max |c|)` signals another singularity
/// inside the circle or an inaccurate `h`.
pub fn laurent_extract<H>(h: &H, q: Complex64, k: usize, radius: f64) -> Result<LaurentData>
where
    H: Fn(Complex64) -> Result<Complex64>,
{
    let (p1, c1) = laurent_coefficients(h, q, radius, k, LAURENT_POINTS)?;
    let (p2, c2) = laurent_coefficients(h, q, 0.5 * radius, k, LAURENT_POINTS)?;
    let scale = p1.iter().chain(std::iter::once(&c1)).map(|c| c.norm()).fold(0.0, f64::max);
    let discrepancy = p1
        .iter()
        .zip(&p2)
        .map(|(a, b)| (a - b).norm())
        .chain(std::iter::once((c1 - c2).norm()))
        .fold(0.0, f64::max);
    if discrepancy > 1e-6 * (1.0 + scale) {
        return Err(Error::accuracy("Laurent extraction", discrepancy, 1e-6 * (1.0 + scale)));
    }
    Ok(LaurentData {
        principal: p1,
        constant: c1,
        discrepancy,
    })
}

/// Outcome of [`pw_mellin_classify`].
#[derive(Clone, Debug, Serialize)]
pub struct MellinPwReport {
    pub poles: Vec<PoleCheck>,
    pub max_error: f64,
    pub line: f64,
    pub decay_exponent: f64,
    pub verdict: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct PoleCheck {
    #[serde(with = "complex_obj")]
    pub pole: Complex64,
    #[serde(with = "complex_vec")]
    pub expected: Vec<Complex64>,
    #[serde(with = "complex_vec")]
    pub extracted: Vec<Complex64>,
    pub error: f64,
}

fn laurent_radius(q: Complex64, poles: &[Complex64]) -> f64 {
    poles
        .iter()
        .map(|p| (p - q).norm())
        .filter(|d| *d > MERGE_TOL)
        .fold(0.25, |r, d| r.min(0.5 * d))
}

/// Decay exponent `r` with `|h(c + i eta)| ~ |s|^-r`, fitted on a doubling grid.
pub fn line_decay_exponent<H>(h: &H, c: f64, etas: &[f64]) -> Result<f64>
where
    H: Fn(Complex64) -> Result<Complex64>,
{
    let base = h(Complex64::new(c, 0.0))?.norm().max(h(Complex64::new(c, 1.0))?.norm());
    let mut pts = Vec::new();
    for &eta in etas {
        let v = h(Complex64::new(c, eta))?.norm().max(h(Complex64::new(c, -eta))?.norm());
        if v < 1e-13 * base {
            break;
        }
        pts.push((Complex64::new(c, eta).norm().ln(), v.ln()));
    }
    if pts.len() < 2 {
        return Ok(f64::INFINITY);
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Ok(-sxy / sxx)
}

/// Check that the Mellin transform of `u` has exactly the poles predicted by
/// its first `m` expansion terms, and decays integrably along a vertical line.
pub fn pw_mellin_classify(u: &FunctionModel, m: usize, tol: f64) -> Result<MellinPwReport> {
    if m > u.zero.len() {
        return Err(Error::InsufficientTruncation {
            needed: m,
            available: u.zero.len(),
        });
    }
    let se = direct_map(&u.zero.truncate(m));
    let all_poles: Vec<Complex64> = u.zero.exponents.iter().map(|p| -*p).collect();
    let h = |s: Complex64| mellin_continue_auto(u, s, 1e-12).map(|e| e.value);
    let mut poles = Vec::new();
    let mut max_error: f64 = 0.0;
    for el in &se.elements {
        let radius = laurent_radius(el.pole, &all_poles);
        let k = el.order() + 1;
        let data = laurent_extract(&h, el.pole, k, radius)?;
        let mut expected = el.principal.clone();
        expected.resize(k, ZERO);
        let error = expected
            .iter()
            .zip(&data.principal)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        max_error = max_error.max(error);
        poles.push(PoleCheck {
            pole: el.pole,
            expected,
            extracted: data.principal,
            error,
        });
    }
    let strip = u.fundamental_strip();
    let line = if strip.alpha.is_finite() { strip.alpha + 1.0 } else { 0.5 };
    let line = if line < strip.beta { line } else { 0.5 * (strip.alpha + strip.beta) };
    // values lost in quadrature noise count as zero, i.e. below resolution
    let resolved = |s: Complex64| match mellin_continue_auto(u, s, 1e-12) {
        Ok(e) if e.error < e.value.norm() => Ok(e.value),
        Ok(_) | Err(Error::Accuracy { .. }) => Ok(ZERO),
        Err(err) => Err(err),
    };
    let decay = line_decay_exponent(&resolved, line, &[8.0, 16.0, 32.0, 64.0])?;
    Ok(MellinPwReport {
        poles,
        max_error,
        line,
        decay_exponent: decay,
        verdict: max_error <= tol && decay > 1.0,
    })
}

fn fmt_c(z: Complex64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else {
        format!("({}{:+}i)", z.re, z.im)
    }
}

impl fmt::Display for SingularExpansion {
    /// Bracket notation `[c1/(s-q) + c2/(s-q)^2 + c0]_{s=q}`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .elements
            .iter()
            .map(|el| {
                let q = fmt_c(el.pole);
                let shift = if el.pole == ZERO {
                    "s".to_string()
                } else if el.pole.im == 0.0 && el.pole.re < 0.0 {
                    format!("(s+{})", -el.pole.re)
                } else {
                    format!("(s-{q})")
                };
                let mut terms: Vec<String> = el
                    .principal
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| **c != ZERO)
                    .map(|(r, c)| {
                        if r == 0 {
                            format!("{}/{shift}", fmt_c(*c))
                        } else {
                            format!("{}/{shift}^{}", fmt_c(*c), r + 1)
                        }
                    })
                    .collect();
                if let Some(c0) = el.constant {
                    terms.push(fmt_c(c0));
                }
                format!("[{}]_{{s={q}}}", terms.join(" + "))
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcmodel::{monomial_log, power_exp};

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn exp_poles_at_negative_integers() {
        let e = power_exp(c(0.0)).unwrap().zero.truncate(3);
        let se = direct_map(&e);
        assert_eq!(se.elements.len(), 3);
        assert_eq!(se.elements[2].pole, c(-2.0));
        assert!((se.elements[2].principal[0] - 0.5).norm() < 1e-16);
        assert_eq!(se.strip, FundamentalStrip::new(-3.0, 0.0));
    }

    #[test]
    fn double_pole_from_log_term() {
        // t ln t at zero gives -1/(s+1)^2
        let e = Expansion::monomial(c(1.0), 1, c(1.0));
        let se = direct_map(&e);
        assert_eq!(se.elements[0].principal, vec![c(0.0), c(-1.0)]);
    }

    #[test]
    fn infinity_terms_change_sign() {
        let mut e = Expansion::monomial(c(-1.0), 0, c(1.0));
        e.at = Endpoint::Infinity;
        e.remainder_exp = -3.0;
        let se = direct_map(&e);
        assert_eq!(se.elements[0].pole, c(1.0));
        assert_eq!(se.elements[0].principal, vec![c(-1.0)]);
        assert_eq!(converse_map(&se, Endpoint::Infinity).unwrap(), e);
    }

    #[test]
    fn principal_parts_of_rational_example() {
        // 1/(s^2 (s+1)) = 1/s^2 - 1/s + 1/(s+1)
        let se = SingularExpansion {
            elements: vec![
                SingularElement {
                    pole: c(-1.0),
                    principal: vec![c(1.0)],
                    constant: None,
                },
                SingularElement {
                    pole: c(0.0),
                    principal: vec![c(-1.0), c(1.0)],
                    constant: None,
                },
            ],
            strip: FundamentalStrip::new(-2.0, 2.0),
        };
        let s = Complex64::new(0.3, 0.4);
        let exact = 1.0 / (s * s * (s + 1.0));
        assert!((eval_principal(&se, s).unwrap() - exact).norm() < 1e-14);
        assert!(format!("{se}").contains("[1/(s+1)]_{s=-1}"));
    }

    #[test]
    fn laurent_of_gamma_at_zero() {
        let h = |s: Complex64| Ok(crate::specfun::gamma(s));
        let d = laurent_extract(&h, c(0.0), 2, 0.25).unwrap();
        assert!((d.principal[0] - 1.0).norm() < 1e-12);
        assert!(d.principal[1].norm() < 1e-12);
        assert!((d.constant + crate::specfun::EULER_GAMMA).norm() < 1e-12);
    }

    #[test]
    fn laurent_detects_nearby_pole() {
        let h = |s: Complex64| Ok(1.0 / s + 1.0 / (s - 0.2));
        assert!(laurent_extract(&h, c(0.0), 1, 0.3).is_err());
    }

    #[test]
    fn monomial_log_leading_coefficient() {
        let u = monomial_log(c(1.5), 2).unwrap();
        let h = |s: Complex64| mellin_continue_auto(&u, s, 1e-12).map(|e| e.value);
        let d = laurent_extract(&h, c(-1.5), 3, 0.25).unwrap();
        assert!((d.principal[2] - 2.0).norm() < 1e-8);
    }

    #[test]
    fn classify_exp() {
        let u = power_exp(c(0.0)).unwrap();
        let r = pw_mellin_classify(&u, 3, 1e-6).unwrap();
        assert!(r.verdict, "{r:?}");
    }
}
