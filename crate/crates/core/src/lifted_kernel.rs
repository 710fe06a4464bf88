//! The lifted process on the positive half-line: the Whittaker kernel K,
//! its conjugate M as a double integral, determinantal correlations, the
//! gamma-mixture lifting transform and the small-scale kernel k.

use crate::correlation::{rho_n_fb, CorrelationQuery};
use crate::error::{Error, Result};
use crate::partitions_chars::{Series, ZPair, ZParams};
use crate::special_fn::gamma::{rgamma, sinpi};
use crate::special_fn::quadrature::exp_sinh;
use crate::special_fn::whittaker::{whittaker_ladder, whittaker_w_kummer, whittaker_w_log};
use crate::special_fn::{EvalResult, Method, QuadratureSpec};
use crate::Complex;
use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::PI;

/// Relative gap below which K(x, y) is taken from the diagonal formula at the
/// midpoint.
pub const DIAGONAL_REL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelPoint {
    pub x: f64,
    pub y: f64,
}

impl KernelPoint {
    pub fn new(x: f64, y: f64) -> Result<Self> {
        if !(x > 0.0 && y > 0.0 && x.is_finite() && y.is_finite()) {
            return Err(Error::DomainError(format!("kernel arguments must be positive, got ({x}, {y})")));
        }
        Ok(Self { x, y })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LiftSpec {
    pub tau: f64,
}

impl LiftSpec {
    pub fn new(tau: f64) -> Result<Self> {
        if !(tau > 0.0 && tau.is_finite()) {
            return Err(Error::DomainError(format!("lifting exponent must be positive, got {tau}")));
        }
        Ok(Self { tau })
    }
}

/// phi_1, phi_2 and their derivatives at one point.
#[derive(Debug, Clone, Copy)]
struct Phis {
    p1: Complex,
    p2: Complex,
    d1: Complex,
    d2: Complex,
}

fn phis(pair: ZPair, x: f64) -> Result<Phis> {
    let mu = 0.5 * (pair.z - pair.zp);
    let k2 = 0.5 * (pair.s() - 1.0);
    let k1 = k2 + 1.0;
    // [W_{k2}, W_{k1}, W_{k1 + 1}]
    let w: Vec<Complex> = match whittaker_ladder(k2, mu, x, 2) {
        Ok(w) => w.into_iter().map(|r| r.value).collect(),
        // the Laplace integral settles slowly for small x; the Kummer
        // expansions are cheap and accurate there
        Err(Error::QuadratureFailure(_)) => (0..3).map(|j| w_small_x(k2 + j as f64, mu, x)).collect::<Result<_>>()?,
        Err(e) => return Err(e),
    };
    let (w2, w1, w1p) = (w[0], w[1], w[2]);
    let r = x.powf(-0.5);
    // x W'_k = (x/2 - k) W_k - W_{k+1}, and phi = x^{-1/2} W
    let d = |k: Complex, wk: Complex, wk1: Complex| ((0.5 * x - k - 0.5) * wk - wk1) * r / x;
    Ok(Phis { p1: r * w1, p2: r * w2, d1: d(k1, w1, w1p), d2: d(k2, w2, w1) })
}

fn w_small_x(kappa: Complex, mu: Complex, x: f64) -> Result<Complex> {
    if mu.norm() == 0.0 {
        return Ok(whittaker_w_log(kappa, x)?.value);
    }
    Ok(whittaker_w_kummer(kappa, mu, x)?.value)
}

fn norm(pair: ZPair) -> Complex {
    rgamma(pair.z) * rgamma(pair.zp)
}

fn entry(pair: ZPair, x: f64, y: f64, px: &Phis, py: &Phis) -> Result<Complex> {
    if x == y {
        return Ok(norm(pair) * (px.d1 * px.p2 - px.p1 * px.d2));
    }
    if (x - y).abs() < DIAGONAL_REL * x.max(y) {
        let m = phis(pair, 0.5 * (x + y))?;
        return Ok(norm(pair) * (m.d1 * m.p2 - m.p1 * m.d2));
    }
    Ok(norm(pair) * (px.p1 * py.p2 - py.p1 * px.p2) / (x - y))
}

fn real_kernel(v: Complex, op: &str) -> Result<f64> {
    if v.im.abs() > 1e-10f64.max(1e-8 * v.re.abs()) {
        return Err(Error::ComplexResidue(format!("{op}: imaginary part {} of {}", v.im, v.re)));
    }
    Ok(v.re)
}

pub(crate) fn kernel_pair(pair: ZPair, x: f64, y: f64) -> Result<Complex> {
    // evaluate in a fixed order so that K(x, y) and K(y, x) agree bitwise
    let (a, b) = if x <= y { (x, y) } else { (y, x) };
    let pa = phis(pair, a)?;
    let pb = if a == b { pa } else { phis(pair, b)? };
    entry(pair, a, b, &pa, &pb)
}

/// K(x, y) = (phi_1(x) phi_2(y) - phi_1(y) phi_2(x)) / ((x - y) Gamma(z) Gamma(z')),
/// phi_{1,2}(x) = x^{-1/2} W_{(z+z'+-1)/2, (z-z')/2}(x).
pub fn whittaker_kernel(params: &ZParams, p: KernelPoint) -> Result<f64> {
    real_kernel(kernel_pair(params.pair(), p.x, p.y)?, "whittaker_kernel")
}

/// [K(x_i, x_j)], one Whittaker ladder per point.
pub fn kernel_matrix(params: &ZParams, x: &[f64]) -> Result<DMatrix<f64>> {
    if x.iter().any(|v| !(*v > 0.0 && v.is_finite())) {
        return Err(Error::DomainError(format!("lifted points must be positive: {x:?}")));
    }
    let pair = params.pair();
    let ph: Vec<Phis> = x.par_iter().map(|&v| phis(pair, v)).collect::<Result<_>>()?;
    let n = x.len();
    let cells: Vec<f64> = (0..n * n)
        .into_par_iter()
        .map(|k| {
            let (i, j) = (k / n, k % n);
            let (a, b) = if x[i] <= x[j] { (i, j) } else { (j, i) };
            real_kernel(entry(pair, x[a], x[b], &ph[a], &ph[b])?, "kernel_matrix")
        })
        .collect::<Result<_>>()?;
    Ok(DMatrix::from_row_slice(n, n, &cells))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LiftedDensity {
    pub value: f64,
    /// Set when the determinant came out negative (it can only do so by
    /// rounding on a nearly singular matrix).
    pub negative: bool,
}

/// det [K(x_i, x_j)].
pub fn lifted_rho_n(params: &ZParams, x: &[f64]) -> Result<LiftedDensity> {
    if x.is_empty() {
        return Err(Error::DomainError("no points".into()));
    }
    let value = kernel_matrix(params, x)?.lu().determinant();
    Ok(LiftedDensity { value, negative: value < 0.0 })
}

/// Nodes and weights on (0, inf) for int phi_a(t) f(t) dt, with the weight
/// folded in and nodes beyond `cutoff` dropped.
fn weighted_exp_sinh(level: usize, a: Complex, scale: f64, cutoff: f64) -> Vec<(f64, Complex)> {
    let h = 2f64.powi(-(level as i32));
    let (lo, hi) = ((-6.5 / h) as i64, (4.0 / h) as i64);
    let g = rgamma(a + 1.0);
    (lo..=hi)
        .filter_map(|k| {
            let tau = k as f64 * h;
            let t = scale * (0.5 * PI * tau.sinh()).exp();
            if !(t > 0.0) || t > cutoff {
                return None;
            }
            let w = h * t * 0.5 * PI * tau.cosh() * (a * t.ln()).exp() * g;
            (w.re.is_finite() && w.im.is_finite() && w.norm() > 0.0).then_some((t, w))
        })
        .collect()
}

/// M(x, y) = t int int phi_{-z}(t1) phi_{-z'}(t2) phi_{z'}(t1 + 1) phi_z(t2 + 1)
/// e^{-x(t1 + 1/2) - y(t2 + 1/2)} / (t1 + t2 + 1). For 1 <= Re z < 2 the
/// weight phi_{-z} is read as the derivative of phi_{1-z} and moved onto the
/// rest of the integrand; the same for z'.
pub fn kernel_m(params: &ZParams, p: KernelPoint, quad: &QuadratureSpec) -> Result<EvalResult> {
    quad.validate()?;
    let pair = params.pair();
    let (z, zp) = (pair.z, pair.zp);
    if z.re >= 2.0 || zp.re >= 2.0 {
        return Err(Error::RegimeError(format!("kernel_m needs Re z, Re z' < 2; got z = {z}, z' = {zp}")));
    }
    let k1 = z.re >= 1.0;
    let k2 = zp.re >= 1.0;
    let (a1, a2) = (-z + if k1 { 1.0 } else { 0.0 }, -zp + if k2 { 1.0 } else { 0.0 });
    let (x, y) = (p.x, p.y);
    let (gz, gzp) = (rgamma(z + 1.0), rgamma(zp + 1.0));
    let g = |t1: f64, t2: f64| -> Complex {
        let a = (zp * t1.ln_1p()).exp() * gzp * (-x * (t1 + 0.5)).exp();
        let b = (z * t2.ln_1p()).exp() * gz * (-y * (t2 + 0.5)).exp();
        let da = a * (zp / (1.0 + t1) - x);
        let db = b * (z / (1.0 + t2) - y);
        let d = 1.0 / (t1 + t2 + 1.0);
        let (h, dh, ddh) = (d, -d * d, 2.0 * d * d * d);
        match (k1, k2) {
            (false, false) => a * b * h,
            // sign from each integration by parts
            (true, false) => -((da * h + a * dh) * b),
            (false, true) => -(a * (db * h + b * dh)),
            (true, true) => da * db * h + da * b * dh + a * db * dh + a * b * ddh,
        }
    };
    let t = pair.t();
    let mut prev: Option<Complex> = None;
    for level in 1..=quad.max_doublings + 2 {
        let r1 = weighted_exp_sinh(level, a1, 1.0 / x, 800.0 / x);
        let r2 = weighted_exp_sinh(level, a2, 1.0 / y, 800.0 / y);
        // rows in parallel, summed in a fixed order so results do not depend on the thread count
        let rows: Vec<Complex> = r1
            .par_iter()
            .map(|&(t1, w1)| w1 * r2.iter().map(|&(t2, w2)| w2 * g(t1, t2)).sum::<Complex>())
            .collect();
        let sum: Complex = rows.iter().sum();
        let cur = t * sum;
        if let Some(pv) = prev {
            let diff = (cur - pv).norm();
            if level >= 3 && diff <= quad.abs_tol.max(quad.rel_tol * cur.norm()) {
                return Ok(EvalResult::new(cur, diff, Method::DirectQuadrature));
            }
        }
        prev = Some(cur);
    }
    Err(Error::QuadratureFailure(format!("kernel_m did not settle (last {:?})", prev)))
}

/// int_0^inf s^{tau-1} e^{-s} / Gamma(tau) rho(x / s) ds / s^n. The
/// correlation function is assumed to vanish for sum |x_i| > 1, so s runs
/// from sum |x_i|; `rho` receives the scaled points and 1 - sum |x_i| / s,
/// the latter computed without cancellation.
pub fn lift_transform<F>(rho: F, spec: LiftSpec, x: &[f64], quad: &QuadratureSpec) -> Result<EvalResult>
where
    F: Fn(&[f64], f64) -> Result<f64>,
{
    quad.validate()?;
    if x.is_empty() || x.iter().any(|v| !v.is_finite() || *v == 0.0) {
        return Err(Error::DomainError(format!("lift points must be finite and nonzero: {x:?}")));
    }
    let n = x.len() as f64;
    let total: f64 = x.iter().map(|v| v.abs()).sum();
    let g = rgamma(Complex::new(spec.tau, 0.0)).re;
    let mut failure = None;
    let mut scaled = vec![0.0; x.len()];
    let r = exp_sinh(
        |u| {
            let s = total + u;
            for (d, v) in scaled.iter_mut().zip(x) {
                *d = v / s;
            }
            match rho(&scaled, u / s) {
                Ok(v) => Complex::new(g * ((spec.tau - 1.0 - n) * s.ln() - s).exp() * v, 0.0),
                Err(e) => {
                    failure.get_or_insert(e);
                    Complex::new(0.0, 0.0)
                }
            }
        },
        1.0,
        quad,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    r
}

/// Lifted Poisson-Dirichlet correlations t^n e^{-sum x} / prod x.
pub fn pd_lifted_rho(t: f64, x: &[f64]) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::DomainError(format!("t must be positive, got {t}")));
    }
    if x.is_empty() || x.iter().any(|v| !(*v > 0.0 && v.is_finite())) {
        return Err(Error::DomainError(format!("points must be positive: {x:?}")));
    }
    let sum: f64 = x.iter().sum();
    let prod: f64 = x.iter().product();
    Ok(t.powi(x.len() as i32) * (-sum).exp() / prod)
}

/// k(u) = sin(pi z) sin(pi z') / (pi sin(pi (z - z'))) (u^{(z-z')/2} - u^{(z'-z)/2}) / (u^{1/2} - u^{-1/2}),
/// with the limits at u = 1 and z = z'.
pub fn asympt_kernel_k(params: &ZParams, ratio: f64) -> f64 {
    kernel_k_pair(params.pair(), ratio)
}

pub(crate) fn kernel_k_pair(pair: ZPair, ratio: f64) -> f64 {
    let (z, zp) = (pair.z, pair.zp);
    let d = z - zp;
    let l = ratio.ln();
    let p = sinpi(z) * sinpi(zp) / PI;
    // q = sinh(d l / 2) / (sin(pi d) sinh(l / 2))
    let q = if d.norm() < 1e-6 {
        let base = if l.abs() < 1e-8 { 1.0 / PI } else { 0.5 * l / (PI * (0.5 * l).sinh()) };
        base * (1.0 + (d * l * 0.5).powi(2) / 6.0 + (PI * d).powi(2) / 6.0)
    } else if l.abs() < 1e-8 {
        d / sinpi(d) * (1.0 + (d * d - 1.0) * l * l / 24.0)
    } else {
        (0.5 * d * l).sinh() / (sinpi(d) * (0.5 * l).sinh())
    };
    (p * q).re
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum AsymptRoute {
    /// sqrt(xy) K(x, y) - k(x/y) at a pair of points.
    Kernel,
    /// x_1...x_n det K(x_i, x_j) - det k(x_i/x_j).
    Lifted,
    /// x_1...x_n rho_n(x) - det k(x_i/x_j), rho_n by the Lauricella route.
    NonLifted,
}

#[derive(Debug, Clone, Serialize)]
pub struct RemainderReport {
    pub route: AsymptRoute,
    pub x0: Vec<f64>,
    pub lambdas: Vec<f64>,
    pub residuals: Vec<f64>,
    pub fitted_slope: f64,
    pub theoretical_slope: f64,
    /// Frequency in ln(lambda) of the oscillating part of the remainder
    /// (2 |Im z| for the principal series), used by the fit.
    pub oscillation: Option<f64>,
    /// max |r| / (lambda ln^2 lambda), reported for z = z'.
    pub log_sq_ratio_max: Option<f64>,
}

/// Exponent of the remainder: 1 for the principal series, 1 up to
/// logarithms for z = z', 1 - |z - z'| otherwise.
pub fn theoretical_remainder_slope(params: &ZParams) -> f64 {
    match params.series() {
        Series::Principal => 1.0,
        Series::Complementary(_) => 1.0 - (params.z() - params.zp()).norm(),
    }
}

/// Default scales lambda = 2^{-j}, j = 3..=10, at (x, y) = lambda (1/2, 1/4) for
/// the kernel and x = lambda / 4 for the correlation functions.
pub fn asympt_remainder_fit(params: &ZParams, route: AsymptRoute) -> Result<RemainderReport> {
    let x0: &[f64] = match route {
        AsymptRoute::Kernel => &[0.5, 0.25],
        _ => &[0.25],
    };
    asympt_remainder_fit_with(params, route, x0, 3..=10)
}

pub fn asympt_remainder_fit_with(
    params: &ZParams,
    route: AsymptRoute,
    x0: &[f64],
    js: std::ops::RangeInclusive<i32>,
) -> Result<RemainderReport> {
    let n = x0.len();
    if n == 0 || x0.iter().any(|v| !(*v > 0.0)) || (route == AsymptRoute::NonLifted && x0.iter().sum::<f64>() >= 1.0) {
        return Err(Error::DomainError(format!("base point must be positive (sum < 1 for the non-lifted route): {x0:?}")));
    }
    if route == AsymptRoute::Kernel && n != 2 {
        return Err(Error::DomainError(format!("the kernel route takes a pair of points, got {x0:?}")));
    }
    let pair = params.pair();
    let main = match route {
        AsymptRoute::Kernel => kernel_k_pair(pair, x0[0] / x0[1]),
        _ => DMatrix::from_fn(n, n, |i, j| kernel_k_pair(pair, x0[i] / x0[j])).lu().determinant(),
    };
    let mut lambdas = Vec::new();
    let mut residuals = Vec::new();
    for j in js {
        let lambda = 2f64.powi(-j);
        let x: Vec<f64> = x0.iter().map(|v| lambda * v).collect();
        let r = match route {
            AsymptRoute::Kernel => (x[0] * x[1]).sqrt() * real_kernel(kernel_pair(pair, x[0], x[1])?, "kernel")?,
            AsymptRoute::Lifted => x.iter().product::<f64>() * lifted_rho_n(params, &x)?.value,
            AsymptRoute::NonLifted => x.iter().product::<f64>() * rho_n_fb(&CorrelationQuery::new(params, x)?)?.value.re,
        };
        lambdas.push(lambda);
        residuals.push(r - main);
    }
    if residuals.len() < 4 {
        return Err(Error::FitFailure("need at least four scales".into()));
    }
    let oscillation = match params.series() {
        Series::Principal => Some(2.0 * params.z().im.abs()),
        _ => None,
    };
    let fitted_slope = match oscillation {
        Some(w) => oscillating_slope(&lambdas, &residuals, w)?,
        None => {
            if residuals.windows(2).any(|w| !(w[1].abs() < w[0].abs())) {
                return Err(Error::FitFailure(format!("residuals are not decreasing: {residuals:?}")));
            }
            log_log_slope(&lambdas, &residuals)
        }
    };
    let log_sq_ratio_max = (params.z() == params.zp()).then(|| {
        lambdas.iter().zip(&residuals).map(|(l, r)| (r / (l * l.ln().powi(2))).abs()).fold(0.0, f64::max)
    });
    Ok(RemainderReport {
        route,
        x0: x0.to_vec(),
        lambdas,
        residuals,
        fitted_slope,
        theoretical_slope: theoretical_remainder_slope(params),
        oscillation,
        log_sq_ratio_max,
    })
}

fn log_log_slope(lambdas: &[f64], residuals: &[f64]) -> f64 {
    let lx: Vec<f64> = lambdas.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = residuals.iter().map(|v| v.abs().ln()).collect();
    let m = lx.len() as f64;
    let (mx, my) = (lx.iter().sum::<f64>() / m, ly.iter().sum::<f64>() / m);
    let cov: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let var: f64 = lx.iter().map(|a| (a - mx) * (a - mx)).sum();
    cov / var
}

/// Relative misfit of r = lambda^s (A + B cos(w ln lambda) + C sin(w ln lambda))
/// after solving for A, B, C.
fn oscillating_misfit(lambdas: &[f64], residuals: &[f64], s: f64, w: f64) -> f64 {
    let m = lambdas.len();
    let y = nalgebra::DVector::from_iterator(m, lambdas.iter().zip(residuals).map(|(l, r)| r * l.powf(-s)));
    let a = DMatrix::from_fn(m, 3, |i, j| {
        let phase = w * lambdas[i].ln();
        [1.0, phase.cos(), phase.sin()][j]
    });
    match a.clone().svd(true, true).solve(&y, 1e-14) {
        Ok(c) => (&a * c - &y).norm_squared() / y.norm_squared(),
        Err(_) => f64::INFINITY,
    }
}

/// Decay exponent of a remainder with a known oscillation frequency in
/// ln(lambda), by scanning s and solving for the linear coefficients.
fn oscillating_slope(lambdas: &[f64], residuals: &[f64], w: f64) -> Result<f64> {
    let scan = |lo: f64, hi: f64, step: f64| {
        let mut best = (f64::INFINITY, lo);
        let mut s = lo;
        while s <= hi {
            let m = oscillating_misfit(lambdas, residuals, s, w);
            if m < best.0 {
                best = (m, s);
            }
            s += step;
        }
        best
    };
    let (_, coarse) = scan(-1.0, 3.0, 1e-2);
    let (misfit, s) = scan(coarse - 1e-2, coarse + 1e-2, 1e-4);
    if !misfit.is_finite() || misfit > 1e-2 {
        return Err(Error::FitFailure(format!("oscillating power law does not fit (relative misfit {misfit:e})")));
    }
    Ok(s)
}
