//! Power series at the origin and the two expansions at infinity.

use super::engine::{sum_levels, Norm, Poly};
use super::{FBParams, Truncation};
use crate::error::{Error, Result};
use crate::special_fn::gamma::{digamma, gamma, is_nonpositive_integer, rgamma, rgamma_taylor};
use crate::special_fn::{EvalResult, Method};
use crate::Complex;
use rayon::prelude::*;

const SERIES_RADIUS: f64 = 0.95;
const CONTINUATION_MIN_ABS: f64 = 2.0;

fn zero() -> Complex {
    Complex::new(0.0, 0.0)
}

fn is_integer(x: Complex) -> bool {
    x.im == 0.0 && x.re == x.re.round()
}

/// The defining series, summed by total degree.
pub fn fb_series(p: &FBParams, y: &[Complex]) -> Result<EvalResult> {
    fb_series_with(p, y, &Truncation::default())
}

pub fn fb_series_with(p: &FBParams, y: &[Complex], t: &Truncation) -> Result<EvalResult> {
    p.check_len(y.len())?;
    let q = y.iter().map(|v| v.norm()).fold(0.0, f64::max);
    if q > SERIES_RADIUS {
        return Err(Error::OutsidePolydisc(format!("max |y_i| = {q} exceeds {SERIES_RADIUS}")));
    }
    if q == 0.0 {
        return Ok(EvalResult::new(Complex::new(1.0, 0.0), 0.0, Method::Series));
    }
    // u_i(k) / k! = (a)_k (b)_k y^k / (k!)^2 and r(N) = N! / (c)_N
    let seq = |levels: usize| -> Vec<Vec<Poly>> {
        (0..p.m())
            .map(|i| {
                let mut v = Vec::with_capacity(levels);
                let mut cur = Complex::new(1.0, 0.0);
                for k in 0..levels {
                    v.push(vec![cur]);
                    let kf = k as f64;
                    cur = cur * (p.a[i] + kf) * (p.b[i] + kf) * y[i] / ((kf + 1.0) * (kf + 1.0));
                }
                v
            })
            .collect()
    };
    let weights = |levels: usize| -> Vec<Poly> {
        let mut out = Vec::with_capacity(levels);
        let mut r = Complex::new(1.0, 0.0);
        for n in 0..levels {
            out.push(vec![r]);
            r = r * (n as f64 + 1.0) / (p.c + n as f64);
        }
        out
    };
    let s = sum_levels(seq, weights, Norm::InverseBinomial, q, t.rel_tol, t.max_levels);
    if !s.converged {
        return Err(Error::NoConvergentRoute {
            op: "fb_series",
            detail: format!("{} levels, last term {:e}", s.levels, s.last_term),
        });
    }
    let err = s.last_term + f64::EPSILON * s.abs_sum;
    Ok(EvalResult::new(s.value, err, Method::Series))
}

fn check_far(y: &[f64]) -> Result<f64> {
    for &v in y {
        if !(v <= -CONTINUATION_MIN_ABS) {
            return Err(Error::PreconditionViolated(format!(
                "expansion at infinity needs y_i <= -{CONTINUATION_MIN_ABS}, got {v}"
            )));
        }
    }
    Ok(y.iter().map(|v| 1.0 / v.abs()).sum())
}

/// One term of the expansion at infinity, indexed by the subset J of
/// coordinates expanded around the a-poles (bit i set means i in J).
pub fn fb_continuation_branches(p: &FBParams, y: &[f64], t: &Truncation) -> Result<Vec<(u32, EvalResult)>> {
    p.check_len(y.len())?;
    let q = check_far(y)?;
    for i in 0..p.m() {
        if is_integer(p.a[i] - p.b[i]) {
            return Err(Error::DegenerateDifference(format!("a_{i} - b_{i} = {} is an integer", p.a[i] - p.b[i])));
        }
        if is_nonpositive_integer(p.a[i]) || is_nonpositive_integer(p.b[i]) {
            return Err(Error::PreconditionViolated(format!("a_{i} or b_{i} is a nonpositive integer")));
        }
    }
    let m = p.m();
    let prefactor = gamma(p.c)? * (0..m).map(|i| rgamma(p.a[i]) * rgamma(p.b[i])).product::<Complex>();
    let masks: Vec<u32> = (0..1u32 << m).collect();
    let branches: Vec<Result<(u32, EvalResult)>> = masks
        .par_iter()
        .map(|&mask| {
            let pick = |i: usize| -> (Complex, Complex) {
                if mask >> i & 1 == 1 {
                    (p.a[i], p.b[i])
                } else {
                    (p.b[i], p.a[i])
                }
            };
            let mut big_c = p.c;
            let mut power = Complex::new(1.0, 0.0);
            for (i, &yi) in y.iter().enumerate() {
                let (e, _) = pick(i);
                big_c -= e;
                power *= (-e * (-yi).ln()).exp();
            }
            // w_i(k) k! = Gamma(f - e - k) Gamma(e + k) / y^k
            let seq = |levels: usize| -> Vec<Vec<Poly>> {
                (0..m)
                    .map(|i| {
                        let (e, f) = pick(i);
                        let mut cur = gamma(f - e).unwrap_or(zero()) * gamma(e).unwrap_or(zero());
                        let mut v = Vec::with_capacity(levels);
                        for k in 0..levels {
                            v.push(vec![cur]);
                            let kf = k as f64;
                            cur = cur * (e + kf) / ((f - e - kf - 1.0) * y[i]);
                        }
                        v
                    })
                    .collect()
            };
            let weights = |levels: usize| -> Vec<Poly> {
                let mut out = Vec::with_capacity(levels);
                let mut r = rgamma(big_c);
                for n in 0..levels {
                    out.push(vec![r]);
                    r = r * (big_c - (n as f64 + 1.0)) / (n as f64 + 1.0);
                }
                out
            };
            let s = sum_levels(seq, weights, Norm::Binomial, q, t.rel_tol, t.max_levels);
            if !s.converged {
                return Err(Error::NoConvergentRoute {
                    op: "fb_continuation",
                    detail: format!("sum of 1/|y_i| = {q:.3}; {} levels, last term {:e}", s.levels, s.last_term),
                });
            }
            let scale = (prefactor * power).norm();
            let err = (s.last_term + f64::EPSILON * s.abs_sum) * scale;
            Ok((mask, EvalResult::new(prefactor * power * s.value, err, Method::MellinBarnesContinuation)))
        })
        .collect();
    branches.into_iter().collect()
}

/// Expansion at infinity for pairwise non-integer a_i - b_i.
pub fn fb_continuation(p: &FBParams, y: &[f64], t: &Truncation) -> Result<EvalResult> {
    let branches = fb_continuation_branches(p, y, t)?;
    let mut value = zero();
    let mut err = 0.0;
    let mut scale = 0.0f64;
    for (_, b) in &branches {
        value += b.value;
        err += b.abs_err;
        scale = scale.max(b.value.norm());
    }
    err += f64::EPSILON * scale * branches.len() as f64;
    Ok(EvalResult::new(value, err, Method::MellinBarnesContinuation))
}

/// Expansion at infinity of F_B(a, a; c | y), where every pole of the
/// Mellin-Barnes integrand is double.
pub fn fb_continuation_log(a: &[Complex], c: Complex, y: &[f64], t: &Truncation) -> Result<EvalResult> {
    let p = FBParams::new(a.to_vec(), a.to_vec(), c)?;
    p.check_len(y.len())?;
    let q = check_far(y)?;
    if a.iter().any(|&v| is_nonpositive_integer(v)) {
        return Err(Error::PreconditionViolated("a_i is a nonpositive integer".into()));
    }
    let m = a.len();
    let mut big_c = c;
    let mut prefactor = gamma(c)?;
    for (i, &yi) in y.iter().enumerate() {
        big_c -= a[i];
        let r = rgamma(a[i]);
        prefactor *= r * r * (-a[i] * (-yi).ln()).exp();
    }
    // g_i(k) k! = Gamma(a + k) / k! (-y)^{-k}, carrying the polynomial
    // lambda_i(k) + X with lambda = ln(-y) - psi(a + k) + 2 psi(k + 1)
    let seq = |levels: usize| -> Vec<Vec<Poly>> {
        (0..m)
            .map(|i| {
                let mut g = gamma(a[i]).unwrap_or(zero());
                let mut psi_a = digamma(a[i]).unwrap_or(zero());
                let mut psi_1 = -0.577_215_664_901_532_9;
                let ln_y = (-y[i]).ln();
                let mut v = Vec::with_capacity(levels);
                for k in 0..levels {
                    let lambda = ln_y - psi_a + 2.0 * psi_1;
                    v.push(vec![g * lambda, g]);
                    let kf = k as f64;
                    g = g * (a[i] + kf) / ((kf + 1.0) * (-y[i]));
                    psi_a += 1.0 / (a[i] + kf);
                    psi_1 += 1.0 / (kf + 1.0);
                }
                v
            })
            .collect()
    };
    let weights = |levels: usize| -> Vec<Poly> {
        // r_j(N) = R^{(j)}(C - N) / N!, R = 1/Gamma
        let taylor = rgamma_taylor(big_c, m);
        let mut fact = 1.0;
        let mut r: Vec<Complex> = (0..=m)
            .map(|j| {
                if j > 0 {
                    fact *= j as f64;
                }
                taylor[j] * fact
            })
            .collect();
        let mut out = Vec::with_capacity(levels);
        for n in 0..levels {
            out.push(r.clone());
            let x = big_c - (n as f64 + 1.0);
            let mut next = vec![zero(); m + 1];
            for j in 0..=m {
                next[j] = x * r[j];
                if j > 0 {
                    next[j] += j as f64 * r[j - 1];
                }
                next[j] /= n as f64 + 1.0;
            }
            r = next;
        }
        out
    };
    let s = sum_levels(seq, weights, Norm::Binomial, q, t.rel_tol, t.max_levels);
    if !s.converged {
        return Err(Error::NoConvergentRoute {
            op: "fb_continuation_log",
            detail: format!("sum of 1/|y_i| = {q:.3}; {} levels, last term {:e}", s.levels, s.last_term),
        });
    }
    let err = (s.last_term + f64::EPSILON * s.abs_sum) * prefactor.norm();
    Ok(EvalResult::new(prefactor * s.value, err, Method::MellinBarnesContinuation))
}
