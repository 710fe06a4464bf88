//! Gamma, reciprocal gamma, digamma and Pochhammer symbols on the complex plane.

use crate::error::{Error, Result};
use crate::Complex;
use std::f64::consts::PI;

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

pub fn is_nonpositive_integer(x: Complex) -> bool {
    x.im == 0.0 && x.re <= 0.0 && x.re == x.re.round()
}

/// Splits `x = n + r` with integer `n` and `|r| <= 1/2`; returns (n parity, r).
fn reduce_half(x: f64) -> (bool, f64) {
    let n = x.round();
    let odd = (n % 2.0).abs() == 1.0;
    (odd, x - n)
}

/// sin(pi z) with the real part reduced exactly before scaling by pi.
pub fn sinpi(z: Complex) -> Complex {
    let (odd, r) = reduce_half(z.re);
    let s = Complex::new(PI * r, PI * z.im).sin();
    if odd {
        -s
    } else {
        s
    }
}

pub fn cospi(z: Complex) -> Complex {
    let (odd, r) = reduce_half(z.re);
    let c = Complex::new(PI * r, PI * z.im).cos();
    if odd {
        -c
    } else {
        c
    }
}

/// cot(pi z), stable for large |Im z|.
pub fn cotpi(z: Complex) -> Complex {
    let (_, r) = reduce_half(z.re);
    let w = Complex::new(PI * r, PI * z.im);
    let i = Complex::i();
    if z.im > 10.0 {
        let e = (2.0 * i * w).exp();
        i * (e + 1.0) / (e - 1.0)
    } else if z.im < -10.0 {
        let e = (-2.0 * i * w).exp();
        i * (1.0 + e) / (1.0 - e)
    } else {
        w.cos() / w.sin()
    }
}

/// log sin(pi z) up to a multiple of 2 pi i; avoids overflow for large |Im z|.
fn ln_sinpi(z: Complex) -> Complex {
    let (odd, r) = reduce_half(z.re);
    let shift = if odd { Complex::new(0.0, PI) } else { Complex::new(0.0, 0.0) };
    let w = Complex::new(PI * r, PI * z.im);
    let i = Complex::i();
    let v = if z.im > 20.0 {
        // sin w = e^{-iw} (1 - e^{2iw}) i / 2
        -i * w + (1.0 - (2.0 * i * w).exp()).ln() - Complex::new(2f64.ln(), -PI / 2.0)
    } else if z.im < -20.0 {
        i * w + (1.0 - (-2.0 * i * w).exp()).ln() - Complex::new(2f64.ln(), PI / 2.0)
    } else {
        w.sin().ln()
    };
    v + shift
}

fn ln_gamma_right(x: Complex) -> Complex {
    let z = x - 1.0;
    let mut a = Complex::new(LANCZOS[0], 0.0);
    for (k, &c) in LANCZOS.iter().enumerate().skip(1) {
        a += c / (z + k as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    LN_SQRT_2PI + (z + 0.5) * t.ln() - t + a.ln()
}

fn ln_gamma_unchecked(x: Complex) -> Complex {
    if x.re < 0.5 {
        Complex::new(PI.ln(), 0.0) - ln_sinpi(x) - ln_gamma_right(1.0 - x)
    } else {
        ln_gamma_right(x)
    }
}

/// log Gamma(x). For Re x >= 1/2 this is the branch continuous from the
/// positive axis; on the reflected half plane the imaginary part is only
/// determined modulo 2 pi, which is all that exponentiation needs.
pub fn log_gamma(x: Complex) -> Result<Complex> {
    if is_nonpositive_integer(x) {
        return Err(Error::PoleAtNonpositiveInteger(format!("{x}")));
    }
    Ok(ln_gamma_unchecked(x))
}

pub fn gamma(x: Complex) -> Result<Complex> {
    if x.im == 0.0 && x.re > 0.0 && x.re <= 20.0 && x.re == x.re.round() {
        let mut f = 1.0;
        for k in 2..(x.re as u32) {
            f *= k as f64;
        }
        return Ok(Complex::new(f, 0.0));
    }
    Ok(log_gamma(x)?.exp())
}

/// 1/Gamma(x), entire; exactly zero at the poles of Gamma.
pub fn rgamma(x: Complex) -> Complex {
    if is_nonpositive_integer(x) {
        return Complex::new(0.0, 0.0);
    }
    (-ln_gamma_unchecked(x)).exp()
}

const BERNOULLI_2K: [f64; 8] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
];

pub fn digamma(x: Complex) -> Result<Complex> {
    if is_nonpositive_integer(x) {
        return Err(Error::PoleAtNonpositiveInteger(format!("{x}")));
    }
    if x.re < 0.5 {
        return Ok(digamma(1.0 - x)? - PI * cotpi(x));
    }
    let mut acc = Complex::new(0.0, 0.0);
    let mut w = x;
    while w.norm() < 12.0 {
        acc -= 1.0 / w;
        w += 1.0;
    }
    let w2 = 1.0 / (w * w);
    let mut series = Complex::new(0.0, 0.0);
    let mut p = w2;
    for (k, &b) in BERNOULLI_2K.iter().enumerate() {
        series += b / (2.0 * (k + 1) as f64) * p;
        p *= w2;
    }
    Ok(acc + w.ln() - 0.5 / w - series)
}

/// Rising factorial (a)_k.
pub fn pochhammer(a: Complex, k: usize) -> Complex {
    if k <= 64 || is_nonpositive_integer(a) {
        let mut p = Complex::new(1.0, 0.0);
        for j in 0..k {
            p *= a + j as f64;
            if p == Complex::new(0.0, 0.0) {
                break;
            }
        }
        return p;
    }
    (ln_gamma_unchecked(a + k as f64) - ln_gamma_unchecked(a)).exp()
}

/// Taylor coefficients R_j / j!, j = 0..=order, of 1/Gamma around `x`,
/// from a trapezoidal Cauchy integral on a circle.
pub fn rgamma_taylor(x: Complex, order: usize) -> Vec<Complex> {
    let nodes = 64usize.max(4 * (order + 1));
    let r = 0.5;
    let mut coef = vec![Complex::new(0.0, 0.0); order + 1];
    for k in 0..nodes {
        let th = 2.0 * PI * k as f64 / nodes as f64;
        let e = Complex::from_polar(1.0, th);
        let f = rgamma(x + r * e);
        let mut einv = Complex::new(1.0, 0.0);
        let step = e.conj();
        for c in coef.iter_mut() {
            *c += f * einv;
            einv *= step;
        }
    }
    let mut rp = 1.0;
    for c in coef.iter_mut() {
        *c /= nodes as f64 * rp;
        rp *= r;
    }
    coef
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    /// Stirling series with a large upward shift, independent of the Lanczos sum.
    fn stirling_ln_gamma(x: Complex) -> Complex {
        let shift = 40usize;
        let mut w = x;
        let mut acc = c(0.0, 0.0);
        for _ in 0..shift {
            acc -= w.ln();
            w += 1.0;
        }
        let mut s = (w - 0.5) * w.ln() - w + LN_SQRT_2PI;
        let mut p = 1.0 / w;
        let w2 = p * p;
        for (k, &b) in BERNOULLI_2K.iter().enumerate() {
            let n = 2.0 * (k + 1) as f64;
            s += b / (n * (n - 1.0)) * p;
            p *= w2;
        }
        acc + s
    }

    #[test]
    fn trivial_values() {
        assert!(log_gamma(c(1.0, 0.0)).unwrap().norm() < 1e-15);
        let half = log_gamma(c(0.5, 0.0)).unwrap();
        assert!((half.re - PI.sqrt().ln()).abs() < 1e-15 && half.im.abs() < 1e-15);
        assert!(matches!(log_gamma(c(-3.0, 0.0)), Err(Error::PoleAtNonpositiveInteger(_))));
    }

    #[test]
    fn log_gamma_matches_stirling() {
        let x = c(3.0, 4.0);
        let d = log_gamma(x).unwrap() - stirling_ln_gamma(x);
        assert!(d.norm() < 1e-12, "{d}");
        for &(re, im) in &[(0.7, 0.1), (12.5, -30.0), (2.2, 7.0), (0.5, 45.0)] {
            let x = c(re, im);
            let d = log_gamma(x).unwrap() - stirling_ln_gamma(x);
            assert!(d.norm() < 1e-11, "{x}: {d}");
        }
    }

    #[test]
    fn recurrence_and_reflection() {
        for &(re, im) in &[(-3.7, 0.2), (-0.4, 0.0), (0.3, -2.0), (5.5, 1.5), (-12.25, 3.0), (0.1, 60.0)] {
            let x = c(re, im);
            let g = gamma(x).unwrap();
            let g1 = gamma(x + 1.0).unwrap();
            assert!(((g1 - x * g) / g1).norm() < 1e-12, "{x} {}", ((g1 - x * g) / g1).norm());
            let refl = g * gamma(1.0 - x).unwrap() * sinpi(x) / PI;
            assert!((refl - 1.0).norm() < 1e-10, "{x}: {refl}");
        }
    }

    #[test]
    fn rgamma_zeros_and_values() {
        assert_eq!(rgamma(c(-4.0, 0.0)), c(0.0, 0.0));
        assert!((rgamma(c(4.0, 0.0)) - 1.0 / 6.0).norm() < 1e-15);
        let near = rgamma(c(-2.0 + 1e-9, 0.0));
        // residue of Gamma at -2 is 1/2, so 1/Gamma ~ 2 eps
        assert!((near.re - 2e-9).abs() < 1e-15);
    }

    #[test]
    fn digamma_values() {
        let e = digamma(c(1.0, 0.0)).unwrap();
        assert!((e.re + 0.577_215_664_901_532_9).abs() < 1e-15);
        let d = digamma(c(2.0, 0.0)).unwrap() - e;
        assert!((d.re - 1.0).abs() < 1e-14);
        // independent oracle: psi(x) = -gamma + sum_{k<N} (1/(k+1) - 1/(k+x)) + tail
        let x = c(0.3, 0.7);
        let n = 20_000usize;
        let mut s = c(-0.577_215_664_901_532_9, 0.0);
        for k in 0..n {
            s += 1.0 / (k as f64 + 1.0) - 1.0 / (x + k as f64);
        }
        // tail: psi(N + x) - psi(N + 1) by its asymptotic expansion
        let big = |w: Complex| w.ln() - 0.5 / w - 1.0 / (12.0 * w * w) + 1.0 / (120.0 * w.powi(4));
        s += big(x + n as f64) - big(c(n as f64 + 1.0, 0.0));
        let v = digamma(x).unwrap();
        assert!((v - s).norm() < 1e-12, "{v} vs {s}");
        for &(re, im) in &[(-2.5, 0.3), (0.2, -9.0), (7.0, 0.0)] {
            let x = c(re, im);
            let r = digamma(x + 1.0).unwrap() - digamma(x).unwrap() - 1.0 / x;
            assert!(r.norm() < 1e-12);
        }
    }

    #[test]
    fn pochhammer_values() {
        assert_eq!(pochhammer(c(3.3, 1.0), 0), c(1.0, 0.0));
        assert!((pochhammer(c(1.0, 0.0), 5) - 120.0).norm() < 1e-12);
        assert_eq!(pochhammer(c(-2.0, 0.0), 3), c(0.0, 0.0));
        let a = c(0.37, 0.2);
        let big = pochhammer(a, 80);
        let step = pochhammer(a, 79) * (a + 79.0);
        assert!(((big - step) / big).norm() < 1e-12);
    }

    #[test]
    fn rgamma_taylor_matches_digamma() {
        // d/dx (1/Gamma) = -psi / Gamma
        let x = c(-2.3, 0.4);
        let t = rgamma_taylor(x, 3);
        assert!((t[0] - rgamma(x)).norm() < 1e-13 * rgamma(x).norm());
        let d1 = -digamma(x).unwrap() * rgamma(x);
        assert!((t[1] - d1).norm() < 1e-12 * d1.norm());
    }
}
