//! Whittaker's W function through Tricomi's U:
//! W_{k,m}(x) = e^{-x/2} x^{m+1/2} U(m - k + 1/2, 1 + 2m, x).
//! U comes from its Laplace integral where that converges and from the
//! three-term recurrence in the first parameter elsewhere.

use super::gamma::{is_nonpositive_integer, digamma, rgamma};
use super::hypergeometric::kummer_phi;
use super::quadrature::exp_sinh;
use super::{EvalResult, Method, QuadratureSpec};
use crate::error::{Error, Result};
use crate::Complex;

fn spec() -> QuadratureSpec {
    QuadratureSpec { rel_tol: 1e-14, abs_tol: 1e-300, max_doublings: 6, ..Default::default() }
}

/// U(a, b, x) = 1/Gamma(a) int_0^inf e^{-x tau} tau^{a-1} (1+tau)^{b-a-1} dtau, Re a > 0.
fn u_integral(a: Complex, b: Complex, x: f64) -> Result<(Complex, f64)> {
    let p = b - a - 1.0;
    let am1 = a - 1.0;
    let r = exp_sinh(
        |tau| (-x * tau + am1 * tau.ln() + p * tau.ln_1p()).exp(),
        1.0 / (1.0 + x),
        &spec(),
    )?;
    let g = rgamma(a);
    Ok((r.value * g, r.abs_err * g.norm()))
}

/// U(a - j, b, x) for j = 0..=depth.
fn u_ladder(a: Complex, b: Complex, x: f64, depth: usize) -> Result<(Vec<Complex>, f64)> {
    let lift = if a.re >= 0.5 { 0 } else { (0.5 - a.re).ceil() as usize };
    let top = a + lift as f64;
    let (u1, e1) = u_integral(top + 1.0, b, x)?;
    let (u0, e0) = u_integral(top, b, x)?;
    let rel = (e1 / u1.norm().max(1e-300)).max(e0 / u0.norm().max(1e-300));
    // U(a-1) = -(b - 2a - x) U(a) - a (a - b + 1) U(a+1)
    let mut hi = u1;
    let mut cur = u0;
    let mut cur_a = top;
    let mut out = Vec::with_capacity(depth + 1);
    let total = lift + depth;
    if lift == 0 {
        out.push(cur);
    }
    for step in 1..=total {
        let next = -(b - 2.0 * cur_a - x) * cur - cur_a * (cur_a - b + 1.0) * hi;
        hi = cur;
        cur = next;
        cur_a -= 1.0;
        if step >= lift {
            out.push(cur);
        }
    }
    Ok((out, rel))
}

/// [W_{k,m}(x), W_{k+1,m}(x), ..., W_{k+depth,m}(x)].
pub fn whittaker_ladder(kappa: Complex, mu: Complex, x: f64, depth: usize) -> Result<Vec<EvalResult>> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::DomainError(format!("Whittaker W needs x > 0, got {x}")));
    }
    let a = mu - kappa + 0.5;
    let b = 1.0 + 2.0 * mu;
    let (us, rel) = u_ladder(a, b, x, depth)?;
    let pre = (-0.5 * x + (mu + 0.5) * x.ln()).exp();
    Ok(us
        .into_iter()
        .map(|u| {
            let v = pre * u;
            EvalResult::new(v, (rel + 1e-14) * v.norm(), Method::DirectQuadrature)
        })
        .collect())
}

pub fn whittaker_w(kappa: Complex, mu: Complex, x: f64) -> Result<EvalResult> {
    Ok(whittaker_ladder(kappa, mu, x, 0)?.remove(0))
}

/// W_{k,m}(x) from Kummer's Phi; valid when 2m is not an integer.
pub fn whittaker_w_kummer(kappa: Complex, mu: Complex, x: f64) -> Result<EvalResult> {
    let two_mu = 2.0 * mu;
    if two_mu.im == 0.0 && two_mu.re == two_mu.re.round() {
        return Err(Error::PreconditionViolated("2 mu is an integer; use whittaker_w".into()));
    }
    if !(x > 0.0) {
        return Err(Error::DomainError(format!("x = {x}")));
    }
    let xc = Complex::new(x, 0.0);
    let f1 = kummer_phi(0.5 - kappa + mu, two_mu + 1.0, xc)?;
    let f2 = kummer_phi(0.5 - kappa - mu, 1.0 - two_mu, xc)?;
    let g = |s: Complex| super::gamma::gamma(s);
    let t1 = g(-two_mu)? * rgamma(0.5 - kappa - mu) * xc.powc(mu) * f1.value;
    let t2 = g(two_mu)? * rgamma(0.5 - kappa + mu) * xc.powc(-mu) * f2.value;
    let e = (-0.5 * x).exp();
    let v = e * (t1 + t2) * x.sqrt();
    let err = 1e-15 * e * (t1.norm() + t2.norm()) * x.sqrt();
    Ok(EvalResult::new(v, err, Method::Series))
}

/// W_{k,0}(x) from the logarithmic Kummer expansion.
pub fn whittaker_w_log(kappa: Complex, x: f64) -> Result<EvalResult> {
    let a = 0.5 - kappa;
    if is_nonpositive_integer(a) {
        return Err(Error::PreconditionViolated("1/2 - kappa is a pole of digamma; use whittaker_w".into()));
    }
    let xc = Complex::new(x, 0.0);
    let phi = kummer_phi(a, Complex::new(1.0, 0.0), xc)?.value;
    // sum_r (a)_r / r!^2 [psi(a + r) - 2 psi(1 + r)] x^r, carried with a running coefficient
    let mut coef = Complex::new(1.0, 0.0);
    let mut psi_a = digamma(a)?;
    let mut psi_1 = digamma(Complex::new(1.0, 0.0))?;
    let mut sum = psi_a - 2.0 * psi_1;
    let mut small = 0;
    for r in 0..super::hypergeometric::SERIES_CAP {
        let rf = r as f64;
        coef *= (a + rf) * x / ((rf + 1.0) * (rf + 1.0));
        psi_a += 1.0 / (a + rf);
        psi_1 += 1.0 / (rf + 1.0);
        let term = coef * (psi_a - 2.0 * psi_1);
        sum += term;
        if term.norm() <= 1e-17 * sum.norm() {
            small += 1;
            if small >= 3 {
                break;
            }
        } else {
            small = 0;
        }
    }
    let v = -(-0.5 * x).exp() * rgamma(a) * (phi * x.ln() + sum) * x.sqrt();
    Ok(EvalResult::new(v, 1e-14 * v.norm(), Method::Series))
}
