//! Gauss 2F1 and Kummer's confluent function.

use super::gamma::{is_nonpositive_integer, rgamma, gamma};
use super::{EvalResult, Method};
use crate::error::{Error, Result};
use crate::Complex;

pub(crate) const SERIES_CAP: usize = 1_000_000;
const SERIES_EPS: f64 = 1e-17;

/// Sums `sum_k t_k` with `t_0 = 1` and `t_{k+1} = t_k * ratio(k)`. Stops after
/// three consecutive terms below `SERIES_EPS * |sum|` or an exact zero term.
pub(crate) fn sum_ratio_series<R>(mut ratio: R, op: &'static str) -> Result<(Complex, f64)>
where
    R: FnMut(usize) -> Complex,
{
    let mut term = Complex::new(1.0, 0.0);
    let mut sum = term;
    let mut small = 0;
    for k in 0..SERIES_CAP {
        term *= ratio(k);
        if term.norm() == 0.0 {
            return Ok((sum, 0.0));
        }
        sum += term;
        if term.norm() <= SERIES_EPS * sum.norm() {
            small += 1;
            if small >= 3 {
                return Ok((sum, 4.0 * term.norm() + f64::EPSILON * sum.norm()));
            }
        } else {
            small = 0;
        }
        if !sum.re.is_finite() || !sum.im.is_finite() {
            break;
        }
    }
    Err(Error::NoConvergentRoute { op, detail: format!("series did not converge in {SERIES_CAP} terms") })
}

fn series_2f1(a: Complex, b: Complex, c: Complex, x: Complex) -> Result<(Complex, f64)> {
    sum_ratio_series(
        |k| {
            let k = k as f64;
            (a + k) * (b + k) / ((c + k) * (k + 1.0)) * x
        },
        "gauss_2f1",
    )
}

/// F(a, b; c; x) for |x| < 1 and for real x < 0.
pub fn gauss_2f1(a: Complex, b: Complex, c: Complex, x: Complex) -> Result<EvalResult> {
    if is_nonpositive_integer(c) {
        return Err(Error::ParameterPole(format!("c = {c}")));
    }
    if x.norm() == 0.0 {
        return Ok(EvalResult::new(Complex::new(1.0, 0.0), 0.0, Method::ClosedForm));
    }
    if x.norm() <= 0.75 {
        let (v, e) = series_2f1(a, b, c, x)?;
        return Ok(EvalResult::new(v, e, Method::Series));
    }
    if x.im == 0.0 && x.re < 0.0 {
        let d = a - b;
        if x.re <= -2.0 && !(d.im == 0.0 && d.re == d.re.round()) {
            // connection formula at infinity, both branches in powers of 1/x
            let mx = Complex::new(-x.re, 0.0);
            let inv = 1.0 / x;
            let g_c = gamma(c)?;
            let (s1, e1) = series_2f1(a, a - c + 1.0, a - b + 1.0, inv)?;
            let (s2, e2) = series_2f1(b, b - c + 1.0, b - a + 1.0, inv)?;
            let k1 = g_c * gamma(b - a)? * rgamma(b) * rgamma(c - a) * mx.powc(-a);
            let k2 = g_c * gamma(a - b)? * rgamma(a) * rgamma(c - b) * mx.powc(-b);
            let v = k1 * s1 + k2 * s2;
            let err = (k1 * e1).norm() + (k2 * e2).norm() + 1e-15 * ((k1 * s1).norm() + (k2 * s2).norm());
            return Ok(EvalResult::new(v, err, Method::MellinBarnesContinuation));
        }
        // Pfaff: (1-x)^(-a) F(a, c-b; c; x/(x-1)), argument in (0, 1)
        let w = x / (x - 1.0);
        let pre = (1.0 - x).powc(-a);
        let (s, e) = series_2f1(a, c - b, c, w)?;
        return Ok(EvalResult::new(pre * s, (pre * e).norm(), Method::Series));
    }
    if x.norm() < 1.0 {
        let (v, e) = series_2f1(a, b, c, x)?;
        return Ok(EvalResult::new(v, e, Method::Series));
    }
    Err(Error::NoConvergentRoute { op: "gauss_2f1", detail: format!("x = {x} is outside the unit disc and not on the negative axis") })
}

/// Kummer's function Phi(a, c; x) = 1F1(a; c; x).
pub fn kummer_phi(a: Complex, c: Complex, x: Complex) -> Result<EvalResult> {
    if is_nonpositive_integer(c) {
        return Err(Error::ParameterPole(format!("c = {c}")));
    }
    let series = |a: Complex, x: Complex| {
        sum_ratio_series(
            |k| {
                let k = k as f64;
                (a + k) / ((c + k) * (k + 1.0)) * x
            },
            "kummer_phi",
        )
    };
    if x.re < 0.0 {
        // Kummer transformation keeps the terms from alternating
        let (s, e) = series(c - a, -x)?;
        let ex = x.exp();
        return Ok(EvalResult::new(ex * s, (ex * e).norm(), Method::Series));
    }
    let (s, e) = series(a, x)?;
    Ok(EvalResult::new(s, e, Method::Series))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special_fn::quadrature::tanh_sinh;
    use crate::special_fn::QuadratureSpec;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    #[test]
    fn gauss_trivial_cases() {
        let (a, b) = (c(0.7, 0.2), c(1.3, -0.4));
        assert_eq!(gauss_2f1(a, b, c(2.1, 0.0), c(0.0, 0.0)).unwrap().value, c(1.0, 0.0));
        for &x in &[0.3, -0.6, -1.7, -4.0, -30.0, 0.9] {
            let v = gauss_2f1(a, b, b, c(x, 0.0)).unwrap().value;
            let exact = c(1.0 - x, 0.0).powc(-a);
            assert!((v - exact).norm() < 1e-12 * exact.norm(), "x={x}: {v} {exact}");
        }
        let v = gauss_2f1(c(1.0, 0.0), c(1.0, 0.0), c(2.0, 0.0), c(0.5, 0.0)).unwrap().value;
        assert!((v.re - 2.0 * 2f64.ln()).abs() < 1e-15);
        assert!(matches!(gauss_2f1(a, b, c(-2.0, 0.0), c(0.1, 0.0)), Err(Error::ParameterPole(_))));
    }

    #[test]
    fn gauss_symmetric_in_a_b() {
        let (a, b, cc) = (c(0.3, 0.5), c(-1.4, 0.1), c(2.2, -0.3));
        for &x in &[0.4, -0.9, -2.5, -17.0] {
            let u = gauss_2f1(a, b, cc, c(x, 0.0)).unwrap().value;
            let v = gauss_2f1(b, a, cc, c(x, 0.0)).unwrap().value;
            assert!((u - v).norm() < 1e-12 * u.norm());
        }
    }

    #[test]
    fn gauss_continuation_matches_euler_integral() {
        // F(a,b;c;x) = Gamma(c)/(Gamma(b)Gamma(c-b)) int u^(b-1)(1-u)^(c-b-1)(1-ux)^(-a)
        let (a, b, cc) = (c(0.7, 0.0), c(0.5, 0.0), c(1.3, 0.0));
        let spec = QuadratureSpec { rel_tol: 1e-13, ..Default::default() };
        let norm = gamma(cc).unwrap() * rgamma(b) * rgamma(cc - b);
        for &x in &[-2.0, -3.5, -7.0, -15.0, -50.0] {
            let q = tanh_sinh(
                |u, v| (u.ln() * (b - 1.0) + v.ln() * (cc - b - 1.0) - a * (1.0 - u * x).ln()).exp(),
                &spec,
            )
            .unwrap()
            .value
                * norm;
            let r = gauss_2f1(a, b, cc, c(x, 0.0)).unwrap();
            assert_eq!(r.method, Method::MellinBarnesContinuation);
            assert!((r.value - q).norm() < 1e-8 * q.norm(), "x={x}: {} {}", r.value, q);
        }
    }

    #[test]
    fn kummer_values() {
        let (a, cc) = (c(0.3, 0.2), c(1.7, 0.0));
        assert_eq!(kummer_phi(a, cc, c(0.0, 0.0)).unwrap().value, c(1.0, 0.0));
        for &x in &[2.5, -3.0, 0.1] {
            let v = kummer_phi(a, a, c(x, 0.0)).unwrap().value;
            assert!((v - c(x, 0.0).exp()).norm() < 1e-13 * x.exp());
        }
        // 200-term straight series oracle
        let mut term = c(1.0, 0.0);
        let mut s = term;
        for k in 0..200 {
            let k = k as f64;
            term *= (0.5 + k) / ((1.5 + k) * (k + 1.0)) * 2.0;
            s += term;
        }
        let v = kummer_phi(c(0.5, 0.0), c(1.5, 0.0), c(2.0, 0.0)).unwrap().value;
        assert!((v - s).norm() < 1e-12 * s.norm());
        // Kummer transformation branch agrees with the raw alternating series
        let mut term = c(1.0, 0.0);
        let mut s = term;
        for k in 0..200 {
            let k = k as f64;
            term *= (a + k) / ((cc + k) * (k + 1.0)) * (-3.0);
            s += term;
        }
        let v = kummer_phi(a, cc, c(-3.0, 0.0)).unwrap().value;
        assert!((v - s).norm() < 1e-12 * s.norm().max(1.0));
    }
}
