//! Correlation functions of the limit point process on (-1, 1) \ {0}:
//! the Lauricella route in one octant, the closed first correlation
//! function, direct quadrature of the integral representation, and the
//! constant governing the behaviour at the origin.

use crate::error::{Error, Result};
use crate::lauricella::{f_n, fb_auto, FBParams, FNArgs, MAX_FN_ORDER};
use crate::partitions_chars::{controlling_moment, ZPair, ZParams};
use crate::special_fn::gamma::{gamma, rgamma, sinpi};
use crate::special_fn::quadrature::{gauss_jacobi, integrate_jacobi, tanh_sinh_ab};
use crate::special_fn::{phi_pointwise, EvalResult, Method, QuadratureSpec};
use crate::Complex;
use serde::Serialize;
use std::cell::RefCell;
use std::collections::HashMap;
use std::f64::consts::PI;

/// Points x_1..x_n of one sign with sum |x_i| < 1 (larger sums are allowed
/// and give zero).
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationQuery {
    pub pair: ZPair,
    pub x: Vec<f64>,
}

impl CorrelationQuery {
    pub fn new(params: &ZParams, x: Vec<f64>) -> Result<Self> {
        Self::unchecked(params.pair(), x)
    }

    /// Raw (z, z') without the admissibility check, for the relaxed regime
    /// of the direct quadrature.
    pub fn unchecked(pair: ZPair, x: Vec<f64>) -> Result<Self> {
        if x.is_empty() {
            return Err(Error::InvalidCoords("no points".into()));
        }
        if x.iter().any(|v| !v.is_finite() || *v == 0.0) {
            return Err(Error::DomainError(format!("points must be finite and nonzero: {x:?}")));
        }
        let positive = x[0] > 0.0;
        if x.iter().any(|v| (*v > 0.0) != positive) {
            return Err(Error::DomainError(format!("mixed-sign points {x:?}")));
        }
        Ok(Self { pair, x })
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }

    /// The same query moved to the positive octant, (z, z') -> (-z, -z') if
    /// the points were negative.
    fn positive(&self) -> (ZPair, Vec<f64>) {
        if self.x[0] > 0.0 {
            (self.pair, self.x.clone())
        } else {
            (self.pair.negated(), self.x.iter().map(|v| -v).collect())
        }
    }
}

/// Drops the imaginary part after checking it is within max(1e-10, 1e-8 |Re|)
/// or the route's own error estimate.
fn real_part(v: Complex, abs_err: f64, op: &str) -> Result<f64> {
    if v.im.abs() > 1e-10f64.max(1e-8 * v.re.abs()).max(abs_err) {
        return Err(Error::ComplexResidue(format!("{op}: imaginary part {} of {}", v.im, v.re)));
    }
    Ok(v.re)
}

fn permutations(n: usize) -> Vec<(Vec<usize>, f64)> {
    fn rec(cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<(Vec<usize>, f64)>) {
        let n = used.len();
        if cur.len() == n {
            let mut inv = 0;
            for i in 0..n {
                for j in i + 1..n {
                    if cur[i] > cur[j] {
                        inv += 1;
                    }
                }
            }
            out.push((cur.clone(), if inv % 2 == 0 { 1.0 } else { -1.0 }));
            return;
        }
        for k in 0..n {
            if !used[k] {
                used[k] = true;
                cur.push(k);
                rec(cur, used, out);
                cur.pop();
                used[k] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// rho_n through f_n: Gamma(t) prod phi_{z-1}(x_i) phi_{z'-1}(x_i)
/// phi_{c-1}(1 - |x|) sum_sigma sgn(sigma) f_n(y; y_sigma), y_i = -(1 - |x|) / x_i.
pub fn rho_n_fb(q: &CorrelationQuery) -> Result<EvalResult> {
    let n = q.n();
    if n > MAX_FN_ORDER {
        return Err(Error::SizeGuard { what: format!("rho_n with n = {n}"), limit: MAX_FN_ORDER });
    }
    let (pair, x) = q.positive();
    let total: f64 = x.iter().sum();
    if total > 1.0 {
        return Ok(EvalResult::real(0.0, 0.0, Method::ClosedForm));
    }
    if total == 1.0 {
        return Err(Error::DomainError("sum of |x_i| equals 1".into()));
    }
    let rest = 1.0 - total;
    let t = pair.t();
    let c = t - n as f64 * (pair.s() - 1.0);
    let mut pre = gamma(t)? * phi_pointwise(c - 1.0, rest);
    for &xi in &x {
        pre *= phi_pointwise(pair.z - 1.0, xi) * phi_pointwise(pair.zp - 1.0, xi);
    }
    let y: Vec<f64> = x.iter().map(|xi| -rest / xi).collect();
    let mut sum = Complex::new(0.0, 0.0);
    let mut err = 0.0;
    let mut method = Method::MellinBarnesContinuation;
    for (sigma, sign) in permutations(n) {
        let ys: Vec<f64> = sigma.iter().map(|&i| y[i]).collect();
        let r = f_n(&FNArgs::unchecked(pair, y.clone(), ys)?)?;
        sum += sign * r.value;
        err += r.abs_err;
        method = r.method;
    }
    let v = pre * sum;
    let err = err * pre.norm();
    let value = real_part(v, err, "rho_n_fb")?;
    Ok(EvalResult::real(value, err + v.im.abs(), method))
}

/// rho_1 for 0 < x < 1 given x and 1 - x separately.
pub(crate) fn rho_1_positive(pair: ZPair, x: f64, one_minus_x: f64) -> Result<EvalResult> {
    let (z, zp) = (pair.z, pair.zp);
    let c = (1.0 - z) * (1.0 - zp);
    let y = -one_minus_x / x;
    let yy = [y, y];
    let f0 = fb_auto(&FBParams::new(vec![1.0 - zp, -z], vec![1.0 - z, -zp], c)?, &yy)?;
    let f1 = fb_auto(&FBParams::new(vec![2.0 - zp, -z], vec![2.0 - z, -zp], c + 1.0)?, &yy)?;
    let f2 = fb_auto(&FBParams::new(vec![1.0 - zp, 1.0 - z], vec![1.0 - z, 1.0 - zp], c + 1.0)?, &yy)?;
    let ratio = z * zp / c;
    let bracket = f0.value + y * (f1.value - ratio * f2.value);
    let pre = gamma(pair.t())? * rgamma(z) * rgamma(zp) * ((z + zp - 2.0) * x.ln()).exp() * phi_pointwise(c - 1.0, one_minus_x);
    let v = pre * bracket;
    let err = pre.norm() * (f0.abs_err + y.abs() * (f1.abs_err + ratio.norm() * f2.abs_err));
    let value = real_part(v, err, "rho_1_closed")?;
    Ok(EvalResult::real(value, err + v.im.abs(), f0.method))
}

/// The closed first correlation function (three F_B in two variables on the
/// diagonal y = (1 - 1/x, 1 - 1/x)); negative x by (z, z') -> (-z, -z').
pub fn rho_1_closed(params: &ZParams, x: f64) -> Result<EvalResult> {
    rho_1_pair(params.pair(), x)
}

/// rho_1_closed with 1 - |x| supplied by the caller, for arguments so close to
/// +-1 that forming 1 - |x| would cancel.
pub fn rho_1_closed_complement(params: &ZParams, x: f64, one_minus_abs_x: f64) -> Result<EvalResult> {
    if !(x != 0.0 && x.abs() <= 1.0 && one_minus_abs_x > 0.0) {
        return Err(Error::DomainError(format!("rho_1 needs 0 < |x| < 1, got {x} (gap {one_minus_abs_x})")));
    }
    if x > 0.0 {
        rho_1_positive(params.pair(), x, one_minus_abs_x)
    } else {
        rho_1_positive(params.pair().negated(), -x, one_minus_abs_x)
    }
}

pub(crate) fn rho_1_pair(pair: ZPair, x: f64) -> Result<EvalResult> {
    if !(x != 0.0 && x.abs() < 1.0) {
        return Err(Error::DomainError(format!("rho_1 needs 0 < |x| < 1, got {x}")));
    }
    if x > 0.0 {
        rho_1_positive(pair, x, 1.0 - x)
    } else {
        rho_1_positive(pair.negated(), -x, 1.0 + x)
    }
}

/// Direct quadrature of the 2n-fold integral representation after the
/// rescaling A_i = x_i a_i / (1 - |x|), B_i = x_i b_i / (1 - |x|), which
/// turns the weight into a Dirichlet density on the 2n-simplex with
/// exponents -z (A_i), -z' (B_i) and t - n - 1 (remainder).
pub fn rho_n_integral(q: &CorrelationQuery, quad: &QuadratureSpec) -> Result<EvalResult> {
    quad.validate()?;
    let n = q.n();
    if n > MAX_FN_ORDER {
        return Err(Error::SizeGuard { what: format!("rho_n with n = {n}"), limit: MAX_FN_ORDER });
    }
    let (pair, x) = q.positive();
    let total: f64 = x.iter().sum();
    if total >= 1.0 {
        return Ok(EvalResult::real(0.0, 0.0, Method::DirectQuadrature));
    }
    let (z, zp) = (pair.z, pair.zp);
    let t = pair.t();
    if !(z.re < 1.0 && zp.re < 1.0 && t.re > n as f64) {
        return Err(Error::RegimeError(format!(
            "direct quadrature needs Re z, Re z' < 1 and Re t > n; got z = {z}, z' = {zp}, t = {t} (after reflection)"
        )));
    }
    let rest = 1.0 - total;
    let xi: Vec<f64> = x.iter().map(|v| v / rest).collect();
    let perms = permutations(n);

    // coordinates: A_1..A_n then B_1..B_n; alpha_k exponents, alpha_0 for the remainder
    let dim = 2 * n;
    let alpha: Vec<Complex> = (0..dim).map(|k| if k < n { -z } else { -zp }).collect();
    let alpha0 = t - n as f64 - 1.0;
    let mut beta = vec![alpha0; dim];
    for k in (0..dim).rev() {
        if k + 1 < dim {
            beta[k] = beta[k + 1] + alpha[k + 1] + 1.0;
        }
    }
    let real = alpha.iter().chain(&beta).all(|e| e.im.abs() < 1e-15);
    let mut norm = rgamma(alpha0 + 1.0);
    for a in &alpha {
        norm *= rgamma(a + 1.0);
    }
    let mut pre = t.powi(n as i32) * gamma(t)? * ((t + n as f64 - 1.0) * rest.ln()).exp() * norm;
    for v in &x {
        pre /= v * v;
    }
    let phi_zp = rgamma(zp + 1.0);
    let phi_z = rgamma(z + 1.0);
    let integrand = |u: &[f64]| -> Complex {
        let (a, b) = u.split_at(n);
        let mut prod = Complex::new(1.0, 0.0);
        for i in 0..n {
            prod *= (zp * (a[i] + xi[i]).ln()).exp() * phi_zp * (z * (b[i] + xi[i]).ln()).exp() * phi_z;
        }
        let mut det = 0.0;
        for (sigma, sign) in &perms {
            let mut term = *sign;
            for i in 0..n {
                let j = sigma[i];
                term /= a[i] / xi[i] + b[j] / xi[j] + 1.0;
            }
            det += term;
        }
        prod * det
    };

    let mut prev: Option<Complex> = None;
    for level in 0..=quad.max_doublings {
        let rules: Vec<Rule> = (0..dim)
            .map(|k| {
                if real {
                    let g = gauss_jacobi(quad.base_nodes << level, alpha[k].re, beta[k].re)?;
                    Ok(Rule { nodes: g.nodes, comp: g.comp, weights: g.weights.iter().map(|&w| Complex::new(w, 0.0)).collect() })
                } else {
                    Ok(tanh_sinh_rule(level + 2, alpha[k], beta[k]))
                }
            })
            .collect::<Result<_>>()?;
        let mut point = vec![0.0; dim];
        let cur = stick_sum(&rules, 0, 1.0, &mut point, &integrand);
        if let Some(pv) = prev {
            let diff = (cur - pv).norm();
            if diff <= quad.abs_tol.max(quad.rel_tol * cur.norm()) {
                let v = pre * cur;
                let err = diff * pre.norm();
                let value = real_part(v, err, "rho_n_integral")?;
                return Ok(EvalResult::real(value, err + v.im.abs(), Method::DirectQuadrature));
            }
        }
        prev = Some(cur);
    }
    Err(Error::QuadratureFailure(format!("rho_n_integral did not settle (last {:?})", prev.map(|v| v * pre))))
}

struct Rule {
    nodes: Vec<f64>,
    comp: Vec<f64>,
    weights: Vec<Complex>,
}

fn tanh_sinh_rule(level: usize, alpha: Complex, beta: Complex) -> Rule {
    let h = 2f64.powi(-(level as i32));
    let k_max = (6.2 / h) as i64;
    let mut rule = Rule { nodes: vec![], comp: vec![], weights: vec![] };
    for k in -k_max..=k_max {
        let tk = k as f64 * h;
        let s = PI * tk.sinh();
        let u = 1.0 / (1.0 + (-s).exp());
        let v = 1.0 / (1.0 + s.exp());
        if u <= 0.0 || v <= 0.0 {
            continue;
        }
        let w = h * PI * tk.cosh() * u * v * (alpha * u.ln() + beta * v.ln()).exp();
        if w.norm() > 0.0 && w.re.is_finite() && w.im.is_finite() {
            rule.nodes.push(u);
            rule.comp.push(v);
            rule.weights.push(w);
        }
    }
    rule
}

fn stick_sum<F: Fn(&[f64]) -> Complex>(rules: &[Rule], k: usize, stick: f64, point: &mut Vec<f64>, f: &F) -> Complex {
    if k == rules.len() {
        return f(point);
    }
    let r = &rules[k];
    let mut total = Complex::new(0.0, 0.0);
    for i in 0..r.nodes.len() {
        point[k] = r.nodes[i] * stick;
        total += r.weights[i] * stick_sum(rules, k + 1, stick * r.comp[i], point, f);
    }
    total
}

/// A(0) = (z - z') sin(pi z) sin(pi z') / (pi sin(pi (z - z'))), the limit of
/// x rho_1(x) at the origin.
pub fn asympt_const_a(params: &ZParams) -> f64 {
    asympt_const_pair(params.pair())
}

pub(crate) fn asympt_const_pair(pair: ZPair) -> f64 {
    let (z, zp) = (pair.z, pair.zp);
    let d = z - zp;
    // d / sin(pi d) -> 1/pi (1 + (pi d)^2 / 6)
    let ratio = if d.norm() < 1e-6 { (1.0 + (PI * d) * (PI * d) / 6.0) / PI } else { d / sinpi(d) };
    (sinpi(z) * sinpi(zp) * ratio / PI).re
}

#[derive(Debug, Clone, Serialize)]
pub struct MomentRow {
    pub l: u32,
    pub quadrature: f64,
    pub exact: f64,
    pub rel_dev: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct MomentCheck {
    pub rows: Vec<MomentRow>,
    pub max_rel_dev: f64,
}

/// Compares int_{-1}^{1} |x| x^l rho_1(x) dx with the moments of the
/// controlling measure for l = 0..=l_max.
pub fn controlling_density_check(params: &ZParams, l_max: u32, quad: &QuadratureSpec) -> Result<MomentCheck> {
    if l_max > 6 {
        return Err(Error::SizeGuard { what: format!("moment order {l_max}"), limit: 6 });
    }
    quad.validate()?;
    let pos = params.pair();
    let neg = pos.negated();
    // below this the continuation loses digits to cancellation, so x rho_1(x)
    // is replaced by its limit at the origin (same on both sides)
    const ORIGIN_CUTOFF: f64 = 1e-12;
    // the contour route covers roughly (0.23, 0.63), where the integrand is
    // smooth; the end pieces carry the algebraic singularities
    const SPLIT: (f64, f64) = (0.2, 0.65);
    let a0 = asympt_const_pair(pos);
    // x (rho_1(x), rho_1(-x)) keyed on (x, 1 - x)
    let cache: RefCell<HashMap<(u64, u64), (f64, f64)>> = RefCell::new(HashMap::new());
    let failure: RefCell<Option<Error>> = RefCell::new(None);
    let sides = |x: f64, one_minus_x: f64| -> (f64, f64) {
        if x < ORIGIN_CUTOFF {
            return (a0, a0);
        }
        let key = (x.to_bits(), one_minus_x.to_bits());
        if let Some(v) = cache.borrow().get(&key) {
            return *v;
        }
        let eval = |pair| match rho_1_positive(pair, x, one_minus_x) {
            Ok(r) => x * r.value.re,
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                0.0
            }
        };
        let v = (eval(pos), eval(neg));
        cache.borrow_mut().insert(key, v);
        v
    };

    let mut rows = Vec::new();
    for l in 0..=l_max {
        let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
        let f = |x: f64, one_minus_x: f64| -> Complex {
            let (p, n) = sides(x, one_minus_x);
            Complex::new(x.powi(l as i32) * (p + sign * n), 0.0)
        };
        let (lo, hi) = SPLIT;
        let left = tanh_sinh_ab(|x, _, _| f(x, 1.0 - x), 0.0, lo, quad);
        let mid = integrate_jacobi(|u, v| f(lo + (hi - lo) * u, (1.0 - hi) + (hi - lo) * v), 0.0, 0.0, quad);
        let right = tanh_sinh_ab(|x, _, to_one| f(x, to_one), hi, 1.0, quad);
        if let Some(e) = failure.borrow_mut().take() {
            return Err(e);
        }
        let quadrature = left?.value.re + (hi - lo) * mid?.value.re + right?.value.re;
        let exact = controlling_moment(params, &[l])?;
        let rel_dev = (quadrature - exact).abs() / exact.abs().max(1e-300);
        rows.push(MomentRow { l, quadrature, exact, rel_dev });
    }
    let max_rel_dev = rows.iter().map(|r| r.rel_dev).fold(0.0, f64::max);
    Ok(MomentCheck { rows, max_rel_dev })
}
