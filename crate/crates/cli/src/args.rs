use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mellin_pw::Complex64;

#[derive(Parser, Debug)]
#[command(name = "mellin-pw", version, about = "Mellin transforms, homogeneous distributions and Paley-Wiener checks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Write the result to this file instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,

    /// Working tolerance.
    #[arg(long, global = true, env = "MELLIN_PW_TOL", default_value_t = 1e-10, value_parser = positive)]
    pub tol: f64,

    /// Seed for randomized runs.
    #[arg(long, global = true, default_value_t = 20_240_601)]
    pub seed: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Mellin transforms and singular expansions.
    #[command(subcommand)]
    Mellin(MellinCmd),
    /// Laplace-Fourier transforms of half-line functions.
    #[command(subcommand)]
    Fourier(FourierCmd),
    /// Homogeneous distributions.
    #[command(subcommand)]
    Dist(DistCmd),
    /// Paley-Wiener growth checks.
    #[command(subcommand)]
    Pw(PwCmd),
    /// Acceptance suite.
    #[command(subcommand)]
    Verify(VerifyCmd),
}

#[derive(Args, Debug, Clone)]
pub struct Family {
    /// Function family: power_exp, gauss_pow, heaviside_unit, bump, monomial_log.
    #[arg(long)]
    pub family: String,
    /// Exponent `d` of power_exp, gauss_pow and monomial_log.
    #[arg(long, value_parser = complex, allow_hyphen_values = true)]
    pub d: Option<Complex64>,
    /// Log degree of monomial_log.
    #[arg(long)]
    pub k: Option<usize>,
    /// Left end of the bump support.
    #[arg(long)]
    pub r0: Option<f64>,
    /// Right end of the bump support.
    #[arg(long)]
    pub r1: Option<f64>,
}

#[derive(Subcommand, Debug)]
pub enum MellinCmd {
    /// M[u](s) at one point, or samples on the line Re s = c.
    Eval {
        #[command(flatten)]
        family: Family,
        /// Point `s` as `a+bi`.
        #[arg(long, value_parser = complex, allow_hyphen_values = true, required_unless_present = "c")]
        s: Option<Complex64>,
        /// Abscissa of a vertical line; samples at `--etas`.
        #[arg(long, allow_hyphen_values = true, requires = "etas")]
        c: Option<f64>,
        /// Heights as `lo:hi:n`.
        #[arg(long, value_parser = grid, allow_hyphen_values = true)]
        etas: Option<Grid>,
    },
    /// u(t) recovered from M[u] on the line Re s = c.
    Invert {
        #[command(flatten)]
        family: Family,
        /// Abscissa of the inversion line.
        #[arg(long, allow_hyphen_values = true)]
        c: f64,
        /// Points as a comma-separated list.
        #[arg(long, value_delimiter = ',', required = true)]
        t: Vec<f64>,
        /// Truncation height of the line integral.
        #[arg(long, default_value_t = 20.0)]
        a: f64,
    },
    /// Meromorphic continuation of M[u] left of the strip.
    Continue {
        #[command(flatten)]
        family: Family,
        /// Point `s` as `a+bi`.
        #[arg(long, value_parser = complex, allow_hyphen_values = true)]
        s: Complex64,
        /// Number of subtracted expansion terms; chosen from `s` if absent.
        #[arg(long)]
        order: Option<usize>,
    },
    /// Singular expansion of M[u] from the expansion of u at zero.
    Singexp {
        #[command(flatten)]
        family: Family,
        /// Number of expansion terms.
        #[arg(long, default_value_t = 3)]
        terms: usize,
    },
}

#[derive(Subcommand, Debug)]
pub enum FourierCmd {
    /// h(ζ) at a point of the closed lower half-plane, or on a real ray.
    Eval {
        #[command(flatten)]
        family: Family,
        /// Point `ζ` as `a+bi` with `b <= 0`.
        #[arg(long, value_parser = complex, allow_hyphen_values = true, required_unless_present = "xis")]
        z: Option<Complex64>,
        /// Real points as `lo:hi:n`, spaced geometrically when both ends share a sign.
        #[arg(long, value_parser = grid, allow_hyphen_values = true)]
        xis: Option<Grid>,
    },
    /// Expansion of h at infinity: closed form and fit from samples.
    Tail {
        #[command(flatten)]
        family: Family,
        /// Number of tail terms.
        #[arg(long, default_value_t = 3)]
        terms: usize,
        /// Inner end of the sampled ray.
        #[arg(long, default_value_t = 10.0)]
        xi_min: f64,
        /// Outer end of the sampled ray.
        #[arg(long, default_value_t = 1000.0)]
        xi_max: f64,
        /// Number of geometrically spaced samples.
        #[arg(long, default_value_t = 40)]
        samples: usize,
        /// Fit on the negative ray.
        #[arg(long)]
        negative: bool,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SideArg {
    Plus,
    Minus,
}

#[derive(Args, Debug, Clone)]
pub struct Gaussian {
    /// Centre of the Gaussian test function.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub center: f64,
    /// Width of the Gaussian test function.
    #[arg(long, default_value_t = 1.0)]
    pub width: f64,
}

#[derive(Subcommand, Debug)]
pub enum DistCmd {
    /// ⟨x^a_± ln^l x, φ⟩ for a Gaussian φ.
    Pair {
        /// Side of the half-line.
        #[arg(long, value_enum, default_value_t = SideArg::Plus)]
        side: SideArg,
        /// Exponent `a` as `a+bi`.
        #[arg(long, value_parser = complex, allow_hyphen_values = true)]
        a: Complex64,
        /// Power of `ln x`.
        #[arg(long, default_value_t = 0)]
        l: usize,
        #[command(flatten)]
        phi: Gaussian,
    },
    /// Fourier transform of x^a_± as a boundary power and its split.
    Fourier {
        /// Side of the half-line.
        #[arg(long, value_enum, default_value_t = SideArg::Plus)]
        side: SideArg,
        /// Exponent `a` as `a+bi`.
        #[arg(long, value_parser = complex, allow_hyphen_values = true)]
        a: Complex64,
    },
    /// Boundary value of F[x^m H] F[x^n H] paired with a Gaussian.
    Product {
        /// Power of the first factor.
        #[arg(long, default_value_t = 0)]
        m: usize,
        /// Power of the second factor.
        #[arg(long, default_value_t = 0)]
        n: usize,
        #[command(flatten)]
        phi: Gaussian,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Transform {
    Mellin,
    Fourier,
}

#[derive(Subcommand, Debug)]
pub enum PwCmd {
    /// Exponential type of M[u] or F[u] and the implied support; the CSV
    /// form lists the sampled values.
    Classify {
        #[command(flatten)]
        family: Family,
        /// Transform whose growth is fitted.
        #[arg(long, value_enum, default_value_t = Transform::Mellin)]
        transform: Transform,
    },
    /// Poles and line decay of M[u] against the expansion of u.
    MellinPw {
        #[command(flatten)]
        family: Family,
        /// Number of expansion terms checked.
        #[arg(long, default_value_t = 3)]
        terms: usize,
    },
}

#[derive(Subcommand, Debug)]
pub enum VerifyCmd {
    /// Run every acceptance criterion.
    All,
}

fn positive(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v > 0.0 && v.is_finite() => Ok(v),
        Ok(v) => Err(format!("{v} is not a positive tolerance")),
        Err(e) => Err(e.to_string()),
    }
}

/// `a+bi`, `a-bi`, `a`, `bi`, `i` or `-i`, without spaces.
pub fn complex(s: &str) -> Result<Complex64, String> {
    let t = s.trim();
    if t.is_empty() || t.contains(char::is_whitespace) {
        return Err(format!("`{s}` is not a complex number of the form a+bi"));
    }
    let bad = |_| format!("`{s}` is not a complex number of the form a+bi");
    let Some(body) = t.strip_suffix('i') else {
        return t.parse::<f64>().map(|re| Complex64::new(re, 0.0)).map_err(bad);
    };
    // split at the last sign that is neither leading nor part of an exponent
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&j| (bytes[j] == b'+' || bytes[j] == b'-') && !matches!(bytes[j - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(j) => (body[..j].parse::<f64>().map_err(bad)?, &body[j..]),
        None => (0.0, body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        x => x.parse::<f64>().map_err(bad)?,
    };
    Ok(Complex64::new(re, im))
}

/// A parsed `lo:hi:n` grid.
#[derive(Clone, Debug, PartialEq)]
pub struct Grid(pub Vec<f64>);

/// `lo:hi:n`; uniform, or geometric in `|x|` (nearest to zero first) when
/// `lo` and `hi` are nonzero with equal sign.
pub fn grid(s: &str) -> Result<Grid, String> {
    grid_points(s).map(Grid)
}

fn grid_points(s: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let bad = || format!("`{s}` is not a grid of the form lo:hi:n");
    if parts.len() != 3 {
        return Err(bad());
    }
    let lo: f64 = parts[0].parse().map_err(|_| bad())?;
    let hi: f64 = parts[1].parse().map_err(|_| bad())?;
    let n: usize = parts[2].parse().map_err(|_| bad())?;
    if n == 0 || !(hi >= lo) {
        return Err(bad());
    }
    if n == 1 {
        return Ok(vec![lo]);
    }
    if lo * hi > 0.0 {
        let sign = lo.signum();
        let (a, b) = (lo.abs().min(hi.abs()), lo.abs().max(hi.abs()));
        return Ok(mellin_pw::fourier::geometric_grid(a, b, n).into_iter().map(|x| sign * x).collect());
    }
    Ok((0..n).map(|j| lo + (hi - lo) * j as f64 / (n - 1) as f64).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_forms() {
        let cases = [
            ("1", (1.0, 0.0)),
            ("1+0i", (1.0, 0.0)),
            ("-0.5-2i", (-0.5, -2.0)),
            ("2i", (0.0, 2.0)),
            ("-i", (0.0, -1.0)),
            ("1e-3+2.5e+1i", (1e-3, 25.0)),
            ("-1e-3-i", (-1e-3, -1.0)),
        ];
        for (s, (re, im)) in cases {
            assert_eq!(complex(s).unwrap(), Complex64::new(re, im), "{s}");
        }
        for s in ["", "1 + 2i", "a+bi", "1+2j"] {
            assert!(complex(s).is_err(), "{s}");
        }
    }

    #[test]
    fn grids() {
        assert_eq!(grid("-1:1:3").unwrap(), Grid(vec![-1.0, 0.0, 1.0]));
        let g = grid("10:1000:3").unwrap().0;
        assert!((g[1] - 100.0).abs() < 1e-12);
        let g = grid("-1000:-10:3").unwrap().0;
        assert!((g[0] + 10.0).abs() < 1e-12 && (g[2] + 1000.0).abs() < 1e-9);
        assert!(grid("1:0:3").is_err());
        assert!(grid("1:2").is_err());
    }
}
