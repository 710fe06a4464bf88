//! Quadrature rules: Gauss-Jacobi (Golub-Welsch), tanh-sinh on finite
//! intervals and exp-sinh on the half line. All adaptive drivers refine until
//! two successive estimates agree.

use super::gamma::log_gamma;
use super::{EvalResult, Method, QuadratureSpec};
use crate::error::{Error, Result};
use crate::Complex;
use nalgebra::{DMatrix, SymmetricEigen};
use std::f64::consts::PI;

/// Nodes and weights for the weight u^alpha (1-u)^beta on [0, 1].
/// `comp[i] = 1 - nodes[i]`, kept separately to avoid cancellation.
#[derive(Debug, Clone)]
pub struct GaussRule {
    pub nodes: Vec<f64>,
    pub comp: Vec<f64>,
    pub weights: Vec<f64>,
}

pub fn gauss_jacobi(n: usize, alpha: f64, beta: f64) -> Result<GaussRule> {
    if !(alpha > -1.0 && beta > -1.0) {
        return Err(Error::PreconditionViolated(format!(
            "Jacobi exponents must exceed -1, got ({alpha}, {beta})"
        )));
    }
    if n == 0 {
        return Err(Error::PreconditionViolated("empty Gauss rule".into()));
    }
    // Jacobi recurrence on [-1, 1] for (1-x)^a (1+x)^b with b at x = -1.
    let (a, b) = (beta, alpha);
    let ab = a + b;
    let mut jm = DMatrix::<f64>::zeros(n, n);
    for k in 0..n {
        let kf = k as f64;
        let diag = if k == 0 {
            (b - a) / (ab + 2.0)
        } else {
            (b * b - a * a) / ((2.0 * kf + ab) * (2.0 * kf + ab + 2.0))
        };
        jm[(k, k)] = diag;
        if k + 1 < n {
            let j = kf + 1.0;
            let off2 = if k == 0 {
                4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + ab).powi(2) * (3.0 + ab))
            } else {
                4.0 * j * (j + a) * (j + b) * (j + ab)
                    / ((2.0 * j + ab).powi(2) * (2.0 * j + ab + 1.0) * (2.0 * j + ab - 1.0))
            };
            jm[(k, k + 1)] = off2.sqrt();
            jm[(k + 1, k)] = off2.sqrt();
        }
    }
    let eig = SymmetricEigen::new(jm);
    let ln_mu0 = log_gamma(Complex::new(alpha + 1.0, 0.0))?.re + log_gamma(Complex::new(beta + 1.0, 0.0))?.re
        - log_gamma(Complex::new(alpha + beta + 2.0, 0.0))?.re;
    let mu0 = ln_mu0.exp();
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&i, &j| eig.eigenvalues[i].partial_cmp(&eig.eigenvalues[j]).unwrap());
    let mut rule = GaussRule { nodes: Vec::with_capacity(n), comp: Vec::with_capacity(n), weights: Vec::with_capacity(n) };
    for i in idx {
        let x = eig.eigenvalues[i].clamp(-1.0, 1.0);
        rule.nodes.push(0.5 * (1.0 + x));
        rule.comp.push(0.5 * (1.0 - x));
        rule.weights.push(mu0 * eig.eigenvectors[(0, i)].powi(2));
    }
    Ok(rule)
}

fn converged(prev: Complex, cur: Complex, spec: &QuadratureSpec) -> bool {
    (cur - prev).norm() <= spec.abs_tol.max(spec.rel_tol * cur.norm())
}

/// Integral over [0, 1] of u^alpha (1-u)^beta f(u, 1-u), doubling the node count.
pub fn integrate_jacobi<F>(f: F, alpha: f64, beta: f64, spec: &QuadratureSpec) -> Result<EvalResult>
where
    F: Fn(f64, f64) -> Complex,
{
    let mut n = spec.base_nodes.max(2);
    let apply = |rule: &GaussRule| -> Complex {
        rule.nodes.iter().zip(&rule.comp).zip(&rule.weights).map(|((&u, &v), &w)| w * f(u, v)).sum()
    };
    let mut prev = apply(&gauss_jacobi(n, alpha, beta)?);
    for _ in 0..spec.max_doublings {
        n *= 2;
        let cur = apply(&gauss_jacobi(n, alpha, beta)?);
        if converged(prev, cur, spec) {
            return Ok(EvalResult::new(cur, (cur - prev).norm(), Method::DirectQuadrature));
        }
        prev = cur;
    }
    Err(Error::QuadratureFailure(format!("Gauss-Jacobi({alpha}, {beta}) did not settle with {n} nodes")))
}

/// Double-exponential driver on t in R. `map(t)` returns (x, complement, dx/dt).
fn de_driver<F, M>(mut f: F, map: M, t_lo: f64, t_hi: f64, spec: &QuadratureSpec) -> Result<EvalResult>
where
    F: FnMut(f64, f64) -> Complex,
    M: Fn(f64) -> Option<(f64, f64, f64)>,
{
    let levels = 4 + spec.max_doublings;
    let mut h: f64 = 1.0;
    let mut sum = Complex::new(0.0, 0.0);
    let mut prev = Complex::new(0.0, 0.0);
    let term_at = |t: f64, f: &mut F| -> Complex {
        match map(t) {
            Some((x, xc, w)) if w > 0.0 && w.is_finite() => {
                let v = f(x, xc) * w;
                if v.re.is_finite() && v.im.is_finite() {
                    v
                } else {
                    Complex::new(0.0, 0.0)
                }
            }
            _ => Complex::new(0.0, 0.0),
        }
    };
    for level in 0..=levels {
        let (start, stride) = if level == 0 { (0i64, 1i64) } else { (1, 2) };
        let scale = if level == 0 { sum.norm() } else { prev.norm() / h.max(1e-300) };
        let mut level_sum = Complex::new(0.0, 0.0);
        if level == 0 {
            level_sum += term_at(0.0, &mut f);
        }
        for dir in [1.0f64, -1.0] {
            let mut j = if level == 0 { 1 } else { start };
            let mut small = 0;
            loop {
                let t = dir * j as f64 * h;
                if t > t_hi || t < t_lo {
                    break;
                }
                let v = term_at(t, &mut f);
                level_sum += v;
                let reference = scale.max(level_sum.norm());
                if v.norm() <= 1e-18 * reference && t.abs() > 1.0 {
                    small += 1;
                    if small >= 4 {
                        break;
                    }
                } else {
                    small = 0;
                }
                j += stride;
            }
        }
        sum += level_sum;
        let est = sum * h;
        if level >= 3 && converged(prev, est, spec) {
            return Ok(EvalResult::new(est, (est - prev).norm(), Method::DirectQuadrature));
        }
        prev = est;
        h *= 0.5;
    }
    Err(Error::QuadratureFailure(format!("double-exponential rule did not settle (last estimate {prev})")))
}

/// Integral over [0, 1] of f(u, 1-u); tolerates algebraic endpoint singularities.
pub fn tanh_sinh<F>(f: F, spec: &QuadratureSpec) -> Result<EvalResult>
where
    F: FnMut(f64, f64) -> Complex,
{
    let map = |t: f64| {
        let s = PI * t.sinh();
        let u = 1.0 / (1.0 + (-s).exp());
        let v = 1.0 / (1.0 + s.exp());
        let w = PI * t.cosh() * u * v;
        (u > 0.0 && v > 0.0).then_some((u, v, w))
    };
    de_driver(f, map, -6.2, 6.2, spec)
}

/// Integral over [a, b] of f(x, x - a, b - x).
pub fn tanh_sinh_ab<F>(mut f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<EvalResult>
where
    F: FnMut(f64, f64, f64) -> Complex,
{
    let len = b - a;
    let r = tanh_sinh(|u, v| f(a + len * u, len * u, len * v), spec)?;
    Ok(EvalResult::new(r.value * len, r.abs_err * len.abs(), r.method))
}

/// Integral over (0, inf) of f(x), with x = scale * exp(pi/2 sinh t).
pub fn exp_sinh<F>(mut f: F, scale: f64, spec: &QuadratureSpec) -> Result<EvalResult>
where
    F: FnMut(f64) -> Complex,
{
    let map = |t: f64| {
        let e = 0.5 * PI * t.sinh();
        let x = scale * e.exp();
        let w = x * 0.5 * PI * t.cosh();
        (x > 0.0 && x.is_finite()).then_some((x, 0.0, w))
    };
    de_driver(|x, _| f(x), map, -6.8, 6.8, spec)
}
