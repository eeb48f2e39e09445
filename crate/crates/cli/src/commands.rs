use std::cell::RefCell;
use std::fmt::Write as _;

use mellin_pw::fourier::{geometric_grid, laplace_fourier, tail_coefficients, tail_fit, HalfPlaneSamples};
use mellin_pw::funcmodel::FunctionModel;
use mellin_pw::homdist::{
    default_etas, fourier_hom, hm_analytic, hm_product, hm_product_reference, pair_combo, pair_hom, product_boundary,
    split_boundary, HomTerm, Side, TestFn,
};
use mellin_pw::io::{write_half_plane_csv, write_line_csv, write_points_csv};
use mellin_pw::mellin::{inverse_mellin, line_samples, mellin_continue, mellin_continue_auto, mellin_eval};
use mellin_pw::pwcheck::{default_heights, exp_type_fit, support_estimate, type_sample_points, GrowthModel, DEFAULT_R};
use mellin_pw::singexp::{direct_map, pw_mellin_classify};
use mellin_pw::verify::{run_all, VerifyOptions};
use mellin_pw::{Complex64, Error, Result};
use serde_json::{json, Value};

use crate::args::{Cli, Command, DistCmd, Family, FourierCmd, Gaussian, MellinCmd, PwCmd, SideArg, Transform, VerifyCmd};

/// A command result in all its renderings.
pub struct Output {
    pub kind: &'static str,
    pub data: Value,
    pub table: String,
    pub csv: Option<Vec<u8>>,
    /// The command ran but its checks did not hold.
    pub failed: bool,
}

impl Output {
    fn new(kind: &'static str, data: Value, table: String) -> Self {
        Output {
            kind,
            data,
            table,
            csv: None,
            failed: false,
        }
    }
}

fn cx(z: Complex64) -> String {
    // adding zero clears the sign of -0
    format!("{:.12e}{:+.12e}i", z.re + 0.0, z.im + 0.0)
}

fn cj(z: Complex64) -> Value {
    json!({"re": z.re, "im": z.im})
}

fn model(f: &Family) -> Result<FunctionModel> {
    let need_d = || {
        f.d.ok_or_else(|| Error::InvalidParameter(format!("family `{}` needs --d", f.family)))
    };
    let params: Vec<Complex64> = match f.family.as_str() {
        "heaviside_unit" => Vec::new(),
        "bump" => {
            let (Some(r0), Some(r1)) = (f.r0, f.r1) else {
                return Err(Error::InvalidParameter("family `bump` needs --r0 and --r1".into()));
            };
            vec![Complex64::new(r0, 0.0), Complex64::new(r1, 0.0)]
        }
        "monomial_log" => vec![need_d()?, Complex64::new(f.k.unwrap_or(0) as f64, 0.0)],
        "power_exp" | "gauss_pow" => vec![need_d()?],
        other => return Err(Error::UnknownFamily(other.to_string())),
    };
    FunctionModel::builtin(&f.family, &params)
}

fn side(s: SideArg) -> Side {
    match s {
        SideArg::Plus => Side::Plus,
        SideArg::Minus => Side::Minus,
    }
}

fn gaussian(g: &Gaussian, order: usize) -> Result<TestFn> {
    if !(g.width > 0.0) {
        return Err(Error::InvalidParameter("--width must be positive".into()));
    }
    Ok(TestFn::gaussian(g.center, g.width, order))
}

pub fn run(cli: &Cli) -> Result<Output> {
    let tol = cli.tol;
    match &cli.command {
        Command::Mellin(c) => mellin(c, tol),
        Command::Fourier(c) => fourier(c, tol),
        Command::Dist(c) => dist(c, tol),
        Command::Pw(c) => pw(c, tol),
        Command::Verify(VerifyCmd::All) => verify(cli),
    }
}

fn mellin(cmd: &MellinCmd, tol: f64) -> Result<Output> {
    match cmd {
        MellinCmd::Eval { family, s, c, etas } => {
            let u = model(family)?;
            if let Some(s) = s {
                let e = mellin_eval(&u, *s, tol)?;
                let data = json!({"function": u.name, "s": cj(*s), "value": cj(e.value), "error": e.error});
                let table = format!("M[{}]({})  = {}  (error {:.1e})\n", u.name, cx(*s), cx(e.value), e.error);
                return Ok(Output::new("mellin_eval", data, table));
            }
            let (c, etas) = (c.expect("clap requires --c"), &etas.as_ref().expect("clap requires --etas").0);
            let samples = line_samples(&u, c, etas, tol)?;
            let mut table = format!("M[{}] on Re s = {c}\n{:>14} {:>40} {:>10}\n", u.name, "eta", "value", "error");
            for s in &samples {
                writeln!(table, "{:>14.6e} {:>40} {:>10.1e}", s.eta, cx(s.value), s.error).unwrap();
            }
            let mut csv = Vec::new();
            write_line_csv(&mut csv, &samples)?;
            let data = json!({"function": u.name, "c": c, "samples": samples});
            let mut out = Output::new("line_samples", data, table);
            out.csv = Some(csv);
            Ok(out)
        }
        MellinCmd::Invert { family, c, t, a } => {
            let u = model(family)?;
            let fail = RefCell::new(None);
            let h = |s: Complex64| match mellin_eval(&u, s, tol) {
                Ok(e) => e.value,
                Err(e) => {
                    fail.borrow_mut().get_or_insert(e);
                    Complex64::new(0.0, 0.0)
                }
            };
            let mut rows = Vec::new();
            let mut table = format!("{:>12} {:>40} {:>10} {:>22}\n", "t", "inverse", "error", "u(t)");
            for &tt in t {
                let e = inverse_mellin(h, *c, tt, *a, tol.max(1e-12))?;
                if let Some(err) = fail.borrow_mut().take() {
                    return Err(err);
                }
                let exact = u.eval(tt);
                writeln!(table, "{tt:>12.6e} {:>40} {:>10.1e} {:>22}", cx(e.value), e.error, format!("{:.12e}", exact.re)).unwrap();
                rows.push(json!({"t": tt, "value": cj(e.value), "error": e.error, "u": cj(exact)}));
            }
            let data = json!({"function": u.name, "c": c, "A": a, "points": rows});
            Ok(Output::new("inverse_mellin", data, table))
        }
        MellinCmd::Continue { family, s, order } => {
            let u = model(family)?;
            let e = match order {
                Some(m) => mellin_continue(&u, *s, *m, tol)?,
                None => mellin_continue_auto(&u, *s, tol)?,
            };
            let data = json!({"function": u.name, "s": cj(*s), "order": order, "value": cj(e.value), "error": e.error});
            let table = format!("M[{}]({})  = {}  (error {:.1e})\n", u.name, cx(*s), cx(e.value), e.error);
            Ok(Output::new("mellin_continue", data, table))
        }
        MellinCmd::Singexp { family, terms } => {
            let u = model(family)?;
            if *terms > u.zero.len() {
                return Err(Error::InsufficientTruncation {
                    needed: *terms,
                    available: u.zero.len(),
                });
            }
            let se = direct_map(&u.zero.truncate(*terms));
            let mut table = format!("M[{}] on {}\n{:>34}  {:>5}  coefficients of (s-q)^-1, (s-q)^-2, ...\n", u.name, se.strip, "pole q", "order");
            for el in &se.elements {
                let cs: Vec<String> = el.principal.iter().map(|c| cx(*c)).collect();
                writeln!(table, "{:>34}  {:>5}  {}", cx(el.pole), el.order(), cs.join(", ")).unwrap();
            }
            writeln!(table, "{se}").unwrap();
            let data = json!({"function": u.name, "singular_expansion": se});
            Ok(Output::new("singular_expansion", data, table))
        }
    }
}

fn fourier(cmd: &FourierCmd, tol: f64) -> Result<Output> {
    match cmd {
        FourierCmd::Eval { family, z, xis } => {
            let u = model(family)?;
            if let Some(z) = z {
                let e = laplace_fourier(&u, *z, tol)?;
                let data = json!({"function": u.name, "z": cj(*z), "value": cj(e.value), "error": e.error});
                let table = format!("F[{}]({})  = {}  (error {:.1e})\n", u.name, cx(*z), cx(e.value), e.error);
                return Ok(Output::new("laplace_fourier", data, table));
            }
            let xis = &xis.as_ref().expect("clap requires --xis").0;
            let s = HalfPlaneSamples::ray(&u, xis, tol)?;
            let mut table = format!("F[{}] on the real axis\n{:>14} {:>40}\n", u.name, "xi", "value");
            for (p, v) in s.points.iter().zip(&s.values) {
                writeln!(table, "{:>14.6e} {:>40}", p.re, cx(*v)).unwrap();
            }
            let mut csv = Vec::new();
            write_half_plane_csv(&mut csv, &s)?;
            let data = json!({"function": u.name, "samples": s});
            let mut out = Output::new("half_plane_samples", data, table);
            out.csv = Some(csv);
            Ok(out)
        }
        FourierCmd::Tail {
            family,
            terms,
            xi_min,
            xi_max,
            samples,
            negative,
        } => {
            let u = model(family)?;
            if !(*xi_min > 0.0 && xi_max > xi_min) {
                return Err(Error::InvalidParameter("need 0 < --xi-min < --xi-max".into()));
            }
            let sign = if *negative { -1.0 } else { 1.0 };
            let xs: Vec<f64> = geometric_grid(*xi_min, *xi_max, *samples).into_iter().map(|x| sign * x).collect();
            let s = HalfPlaneSamples::ray(&u, &xs, tol.max(1e-13))?;
            let fit = tail_fit(&s, &u.zero.spec(), *terms)?;
            let closed = tail_coefficients(&u, *terms)?;
            let mut table = format!(
                "tail of F[{}] on the {} ray, |xi| in [{xi_min}, {xi_max}]\n{:>34}  {:>40}  {:>40}\n",
                u.name,
                if *negative { "negative" } else { "positive" },
                "power of |xi|",
                "fitted",
                "closed form (positive ray)"
            );
            for j in 0..fit.expansion.len() {
                writeln!(
                    table,
                    "{:>34}  {:>40}  {:>40}",
                    cx(fit.expansion.exponents[j]),
                    cx(fit.expansion.leading(j)),
                    cx(closed.leading(j))
                )
                .unwrap();
            }
            let mut csv = Vec::new();
            write_half_plane_csv(&mut csv, &s)?;
            let data = json!({"function": u.name, "fit": fit, "closed_form": closed});
            let mut out = Output::new("tail_fit", data, table);
            out.csv = Some(csv);
            Ok(out)
        }
    }
}

fn dist(cmd: &DistCmd, tol: f64) -> Result<Output> {
    match cmd {
        DistCmd::Pair { side: sd, a, l, phi } => {
            let t = HomTerm::new(side(*sd), *a, *l, Complex64::new(1.0, 0.0));
            let phi = gaussian(phi, 8)?;
            let e = pair_hom(&t, &phi, tol)?;
            let data = json!({"term": t, "test_function": phi.name, "value": cj(e.value), "error": e.error});
            let table = format!("⟨{t}, {}⟩  = {}  (error {:.1e})\n", phi.name, cx(e.value), e.error);
            Ok(Output::new("pairing", data, table))
        }
        DistCmd::Fourier { side: sd, a } => {
            let b = fourier_hom(side(*sd), *a)?;
            let combo = split_boundary(&b)?;
            let data = json!({"boundary_power": b, "split": combo});
            let table = format!("F[x^{}_{}] = {b}\n          = {combo}\n", cx(*a), match sd {
                SideArg::Plus => "+",
                SideArg::Minus => "-",
            });
            Ok(Output::new("fourier_hom", data, table))
        }
        DistCmd::Product { m, n, phi } => {
            let phi = gaussian(phi, m + n + 8)?;
            let lim = product_boundary(hm_analytic(*m), hm_analytic(*n), &phi, &default_etas(), tol.max(1e-12))?;
            let corrected = hm_product(*m, *n);
            let reference = hm_product_reference(*m, *n);
            let vc = pair_combo(&corrected, &phi, tol)?.value;
            let vp = pair_combo(&reference, &phi, tol)?.value;
            let data = json!({
                "m": m, "n": n, "test_function": phi.name,
                "limit": {"value": cj(lim.value), "error": lim.error},
                "product_combo": {"combo": corrected, "pairing": cj(vc), "deviation": (lim.value - vc).norm()},
                "reference_combo": {"combo": reference, "pairing": cj(vp), "deviation": (lim.value - vp).norm()},
            });
            let table = format!(
                "boundary limit  {}  (error {:.1e})\n{corrected}\n  pairs to {}  (off by {:.1e})\n{reference}\n  pairs to {}  (off by {:.1e})\n",
                cx(lim.value),
                lim.error,
                cx(vc),
                (lim.value - vc).norm(),
                cx(vp),
                (lim.value - vp).norm()
            );
            Ok(Output::new("boundary_product", data, table))
        }
    }
}

fn pw(cmd: &PwCmd, tol: f64) -> Result<Output> {
    match cmd {
        PwCmd::Classify { family, transform } => {
            let u = model(family)?;
            let (gm, label) = match transform {
                Transform::Mellin => (GrowthModel::MellinEntire, "M"),
                Transform::Fourier => (GrowthModel::FourierEntire, "F"),
            };
            let h = |z: Complex64| match transform {
                Transform::Mellin => mellin_eval(&u, z, tol).map(|e| e.value),
                Transform::Fourier => laplace_fourier(&u, z, tol).map(|e| e.value),
            };
            let heights = default_heights();
            let r = exp_type_fit(&h, gm, &DEFAULT_R, &heights)?;
            let support = support_estimate(&r).ok();
            let mut table = format!(
                "{label}[{}]: C = {:.4e}, m = {:.3}, a = {:.4}, residual {:.2e}, verdict {}\n",
                u.name, r.c, r.m, r.a, r.residual, r.verdict
            );
            if let Some(s) = &support {
                writeln!(table, "support within [{:.6}, {:.6}]", s.low, s.high).unwrap();
            }
            let points = type_sample_points(gm, &DEFAULT_R, &heights);
            let values = points.iter().map(|z| h(*z)).collect::<Result<Vec<_>>>()?;
            let mut csv = Vec::new();
            write_points_csv(&mut csv, &points, &values)?;
            let data = json!({"function": u.name, "report": r, "support": support});
            let mut out = Output::new("growth_report", data, table);
            out.csv = Some(csv);
            Ok(out)
        }
        PwCmd::MellinPw { family, terms } => {
            let u = model(family)?;
            let r = pw_mellin_classify(&u, *terms, tol.max(1e-8))?;
            let mut table = format!("M[{}]: {} poles checked, worst error {:.2e}\n", u.name, r.poles.len(), r.max_error);
            for p in &r.poles {
                writeln!(table, "  pole {}  error {:.2e}", cx(p.pole), p.error).unwrap();
            }
            writeln!(
                table,
                "decay on Re s = {}: |s|^-{:.3}; verdict {}",
                r.line, r.decay_exponent, r.verdict
            )
            .unwrap();
            let data = json!({"function": u.name, "report": r});
            let mut out = Output::new("mellin_pw_report", data, table);
            out.failed = !r.verdict;
            Ok(out)
        }
    }
}

fn verify(cli: &Cli) -> Result<Output> {
    let opts = VerifyOptions {
        seed: cli.seed,
        tol: cli.tol,
    };
    let reports = run_all(&opts);
    let mut table = String::new();
    for r in &reports {
        writeln!(table, "{}", r.line()).unwrap();
    }
    let unexpected = reports.iter().filter(|r| !r.pass && r.known_defect.is_none()).count();
    let data = json!({"options": opts, "criteria": reports, "unexpected_failures": unexpected});
    let mut out = Output::new("verify", data, table);
    out.failed = unexpected > 0;
    Ok(out)
}
