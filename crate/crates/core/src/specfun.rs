//! Complex gamma, reciprocal gamma and digamma.

use std::f64::consts::PI;

use num_complex::Complex64;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// Euler-Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Logarithm of the gamma function, valid for `Re z >= 1/2`.
fn ln_gamma_right(z: Complex64) -> Complex64 {
    let z = z - 1.0;
    let mut x = c(LANCZOS[0]);
    for (i, p) in LANCZOS.iter().enumerate().skip(1) {
        x += *p / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    LN_SQRT_2PI + (z + 0.5) * t.ln() - t + x.ln()
}

/// Principal-sheet-free logarithm of the gamma function.
///
/// The imaginary part is only defined modulo `2*pi`; use it through `exp`.
pub fn ln_gamma(z: Complex64) -> Complex64 {
    if z.re >= 0.5 {
        ln_gamma_right(z)
    } else {
        c(PI.ln()) - (z * PI).sin().ln() - ln_gamma_right(1.0 - z)
    }
}

/// Gamma function; infinite at the nonpositive integers.
pub fn gamma(z: Complex64) -> Complex64 {
    if is_nonpositive_integer(z) {
        return c(f64::INFINITY);
    }
    if z.re >= 0.5 {
        ln_gamma_right(z).exp()
    } else {
        PI / ((z * PI).sin() * ln_gamma_right(1.0 - z).exp())
    }
}

/// Reciprocal gamma function, entire, zero at the nonpositive integers.
pub fn rgamma(z: Complex64) -> Complex64 {
    if is_nonpositive_integer(z) {
        return c(0.0);
    }
    if z.re >= 0.5 {
        (-ln_gamma_right(z)).exp()
    } else {
        (z * PI).sin() * ln_gamma_right(1.0 - z).exp() / PI
    }
}

/// Digamma function `Gamma'/Gamma`.
pub fn digamma(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        return digamma(1.0 - z) - PI / (z * PI).tan();
    }
    let mut z = z;
    let mut acc = c(0.0);
    while z.norm() < 12.0 {
        acc -= 1.0 / z;
        z += 1.0;
    }
    let inv = 1.0 / z;
    let inv2 = inv * inv;
    let series = inv2
        * (1.0 / 12.0
            - inv2
                * (1.0 / 120.0
                    - inv2
                        * (1.0 / 252.0
                            - inv2 * (1.0 / 240.0 - inv2 * (1.0 / 132.0 - inv2 * (691.0 / 32760.0 - inv2 / 12.0))))));
    acc + z.ln() - 0.5 * inv - series
}

pub fn is_nonpositive_integer(z: Complex64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round()
}

/// True when `z` is within `eps` of a negative integer.
pub fn near_negative_integer(z: Complex64, eps: f64) -> bool {
    let r = z.re.round();
    r < 0.0 && (z - r).norm() < eps
}

/// `√(2π)`.
pub fn sqrt_2pi() -> f64 {
    (2.0 * std::f64::consts::PI).sqrt()
}

pub fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Harmonic number `1 + 1/2 + ... + 1/n`.
pub fn harmonic(n: usize) -> f64 {
    (1..=n).map(|k| 1.0 / k as f64).sum()
}

/// Falling factorial `z (z-1) ... (z-n+1)`.
pub fn falling(z: Complex64, n: usize) -> Complex64 {
    (0..n).fold(c(1.0), |acc, i| acc * (z - i as f64))
}

/// `x^p` for `x > 0` and complex `p`.
pub fn pow_pos(x: f64, p: Complex64) -> Complex64 {
    if x == 0.0 {
        return if p.re > 0.0 {
            c(0.0)
        } else if p == c(0.0) {
            c(1.0)
        } else {
            c(f64::INFINITY)
        };
    }
    (p * x.ln()).exp()
}

/// Physicists' Hermite polynomial `H_n(x)`.
pub fn hermite(n: usize, x: f64) -> f64 {
    let (mut h0, mut h1) = (1.0, 2.0 * x);
    if n == 0 {
        return h0;
    }
    for k in 1..n {
        let h2 = 2.0 * x * h1 - 2.0 * k as f64 * h0;
        h0 = h1;
        h1 = h2;
    }
    h1
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol * b.norm().max(1e-300)
    }

    #[test]
    fn gamma_at_integers_and_half() {
        assert!(close(gamma(c(5.0)), c(24.0), 1e-14));
        assert!(close(gamma(c(0.5)), c(PI.sqrt()), 1e-14));
        assert!(close(gamma(c(-0.5)), c(-2.0 * PI.sqrt()), 1e-14));
    }

    #[test]
    fn gamma_recurrence_off_axis() {
        for &z in &[Complex64::new(0.3, 2.0), Complex64::new(-2.7, 0.4), Complex64::new(4.0, -9.0)] {
            assert!(close(gamma(z + 1.0), z * gamma(z), 1e-13));
        }
    }

    #[test]
    fn gamma_reflection() {
        let z = Complex64::new(0.25, 1.5);
        let lhs = gamma(z) * gamma(1.0 - z);
        assert!(close(lhs, PI / (z * PI).sin(), 1e-13));
    }

    #[test]
    fn modulus_on_critical_line() {
        // |Gamma(1/2 + iy)|^2 = pi / cosh(pi y)
        for &y in &[0.5, 3.0, 20.0] {
            let g = gamma(Complex64::new(0.5, y)).norm_sqr();
            let exact = PI / (PI * y).cosh();
            assert!((g - exact).abs() <= 1e-12 * exact, "{y}: {}", (g - exact).abs() / exact);
        }
    }

    #[test]
    fn reciprocal_gamma_vanishes_at_poles() {
        assert_eq!(rgamma(c(-3.0)), c(0.0));
        assert!(close(rgamma(c(-2.5)), 1.0 / gamma(c(-2.5)), 1e-14));
    }

    #[test]
    fn digamma_values() {
        assert!(close(digamma(c(1.0)), c(-EULER_GAMMA), 1e-14));
        let half = -EULER_GAMMA - 2.0 * 2f64.ln();
        assert!(close(digamma(c(0.5)), c(half), 1e-14));
        let z = Complex64::new(-1.3, 0.7);
        assert!(close(digamma(z + 1.0), digamma(z) + 1.0 / z, 1e-13));
    }

    #[test]
    fn hermite_small_orders() {
        assert_eq!(hermite(3, 2.0), 8.0 * 8.0 - 12.0 * 2.0);
    }
}
