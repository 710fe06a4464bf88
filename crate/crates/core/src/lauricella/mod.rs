//! Lauricella F_B in m variables:
//!
//!   F_B(a, b; c | y) = sum_k prod_i (a_i)_{k_i} (b_i)_{k_i} y_i^{k_i} / k_i! / (c)_{|k|}
//!
//! evaluated by the series, the Euler integral, the Mellin-Barnes contour and
//! the two expansions at infinity, plus the combination f_n built from it.

mod engine;
mod euler;
mod mellin_barnes;
mod series;

pub use euler::fb_euler_integral;
pub use mellin_barnes::fb_mellin_barnes;
pub use series::{fb_continuation, fb_continuation_branches, fb_continuation_log, fb_series, fb_series_with};

use crate::error::{Error, Result};
use crate::partitions_chars::{ZPair, ZParams};
use crate::special_fn::gamma::is_nonpositive_integer;
use crate::special_fn::{EvalResult, Method, QuadratureSpec};
use crate::Complex;

#[derive(Debug, Clone, PartialEq)]
pub struct FBParams {
    pub a: Vec<Complex>,
    pub b: Vec<Complex>,
    pub c: Complex,
}

impl FBParams {
    pub fn new(a: Vec<Complex>, b: Vec<Complex>, c: Complex) -> Result<Self> {
        if a.is_empty() || a.len() != b.len() {
            return Err(Error::SizeMismatch(format!("|a| = {}, |b| = {}", a.len(), b.len())));
        }
        if is_nonpositive_integer(c) {
            return Err(Error::ParameterPole(format!("c = {c}")));
        }
        Ok(Self { a, b, c })
    }

    pub fn real(a: &[f64], b: &[f64], c: f64) -> Result<Self> {
        let cv = |v: &[f64]| v.iter().map(|&x| Complex::new(x, 0.0)).collect();
        Self::new(cv(a), cv(b), Complex::new(c, 0.0))
    }

    pub fn m(&self) -> usize {
        self.a.len()
    }

    pub(crate) fn check_len(&self, n: usize) -> Result<()> {
        if n != self.m() {
            return Err(Error::SizeMismatch(format!("{} arguments for F_B in {} variables", n, self.m())));
        }
        Ok(())
    }

    /// Parameters of the derivative in y_k: a_k, b_k and c all shift by one.
    pub fn contiguous(&self, k: usize) -> Self {
        let mut p = self.clone();
        p.a[k] += 1.0;
        p.b[k] += 1.0;
        p.c += 1.0;
        p
    }

    fn drop_coords(&self, keep: &[usize]) -> Self {
        Self { a: keep.iter().map(|&i| self.a[i]).collect(), b: keep.iter().map(|&i| self.b[i]).collect(), c: self.c }
    }
}

/// Truncation control for the series-type routes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Truncation {
    pub rel_tol: f64,
    pub max_levels: usize,
}

impl Default for Truncation {
    fn default() -> Self {
        Self { rel_tol: 1e-16, max_levels: 1024 }
    }
}

/// Mellin-Barnes contour control. `sigma` fixes the abscissae of the
/// vertical lines; by default each is placed in (-1, 0) as far from the
/// pole real parts as possible.
#[derive(Debug, Clone, PartialEq)]
pub struct ContourSpec {
    pub sigma: Option<Vec<f64>>,
    pub rel_tol: f64,
    pub max_halvings: usize,
    pub residue_nodes: usize,
}

impl Default for ContourSpec {
    fn default() -> Self {
        Self { sigma: None, rel_tol: 1e-11, max_halvings: 8, residue_nodes: 48 }
    }
}

const AUTO_SERIES: f64 = 0.6;
/// Continuation is preferred from this value of sum 1/|y_i| down; up to two
/// variables it stays accurate much closer to the boundary of convergence.
const AUTO_CONTINUATION: f64 = 0.6;
const AUTO_CONTINUATION_LOW_M: f64 = 0.9;

fn is_integer(x: Complex) -> bool {
    x.im == 0.0 && x.re == x.re.round()
}

/// Picks a convergent route for real y <= 0.
pub fn fb_auto(p: &FBParams, y: &[f64]) -> Result<EvalResult> {
    p.check_len(y.len())?;
    if let Some(v) = y.iter().find(|v| !(**v <= 0.0)) {
        return Err(Error::DomainError(format!("F_B evaluation is implemented for y_i <= 0, got {v}")));
    }
    let keep: Vec<usize> = (0..p.m()).filter(|&i| y[i] != 0.0).collect();
    if keep.is_empty() {
        return Ok(EvalResult::new(Complex::new(1.0, 0.0), 0.0, Method::Series));
    }
    if keep.len() < p.m() {
        let y: Vec<f64> = keep.iter().map(|&i| y[i]).collect();
        return fb_auto(&p.drop_coords(&keep), &y);
    }
    let yc: Vec<Complex> = y.iter().map(|&v| Complex::new(v, 0.0)).collect();
    let max_abs = y.iter().map(|v| v.abs()).fold(0.0, f64::max);
    let min_abs = y.iter().map(|v| v.abs()).fold(f64::INFINITY, f64::min);
    let inv_sum: f64 = y.iter().map(|v| 1.0 / v.abs()).sum();
    let log_case = p.a == p.b;
    let generic = (0..p.m()).all(|i| !is_integer(p.a[i] - p.b[i]));
    let t = Truncation::default();
    let far = |bound: f64| min_abs >= 2.0 && inv_sum <= bound;

    if max_abs <= AUTO_SERIES {
        return fb_series(p, &yc);
    }
    let bound = if p.m() <= 2 { AUTO_CONTINUATION_LOW_M } else { AUTO_CONTINUATION };
    if far(bound) {
        if log_case {
            return fb_continuation_log(&p.a, p.c, y, &t);
        }
        if generic {
            return fb_continuation(p, y, &t);
        }
    }
    let mut last = None;
    if p.m() <= 2 {
        match fb_mellin_barnes(p, y, &ContourSpec::default()) {
            Ok(r) => return Ok(r),
            Err(e) => last = Some(e),
        }
    }
    if p.m() <= 4 {
        match fb_euler_integral(p, y, &QuadratureSpec::default()) {
            Ok(r) => return Ok(r),
            Err(e) => last = Some(e),
        }
    }
    if max_abs <= 0.95 {
        return fb_series(p, &yc);
    }
    if far(0.95) {
        if log_case {
            return fb_continuation_log(&p.a, p.c, y, &t);
        }
        if generic {
            return fb_continuation(p, y, &t);
        }
    }
    Err(Error::NoConvergentRoute {
        op: "fb_auto",
        detail: format!("m = {}, y = {y:?}; last route error: {:?}", p.m(), last),
    })
}

pub const MAX_FN_ORDER: usize = 3;
pub const COINCIDENCE_REL: f64 = 1e-4;

/// Arguments of f_n: parameters and the two halves y', y'' of the 2n
/// coordinates, all negative.
#[derive(Debug, Clone, PartialEq)]
pub struct FNArgs {
    pub pair: ZPair,
    pub yprime: Vec<f64>,
    pub ydoubleprime: Vec<f64>,
}

impl FNArgs {
    pub fn new(params: &ZParams, yprime: Vec<f64>, ydoubleprime: Vec<f64>) -> Result<Self> {
        Self::unchecked(params.pair(), yprime, ydoubleprime)
    }

    /// Same as `new` without the admissibility requirement on (z, z').
    pub fn unchecked(pair: ZPair, yprime: Vec<f64>, ydoubleprime: Vec<f64>) -> Result<Self> {
        if yprime.len() != ydoubleprime.len() || yprime.is_empty() {
            return Err(Error::SizeMismatch(format!("|y'| = {}, |y''| = {}", yprime.len(), ydoubleprime.len())));
        }
        if yprime.len() > MAX_FN_ORDER {
            return Err(Error::SizeGuard { what: format!("f_n with n = {}", yprime.len()), limit: MAX_FN_ORDER });
        }
        if let Some(v) = yprime.iter().chain(&ydoubleprime).find(|v| !(**v < 0.0)) {
            return Err(Error::DomainError(format!("f_n needs negative arguments, got {v}")));
        }
        Ok(Self { pair, yprime, ydoubleprime })
    }

    pub fn n(&self) -> usize {
        self.yprime.len()
    }

    /// c = t - n (z + z' - 1)
    pub fn c(&self) -> Complex {
        self.pair.t() - self.n() as f64 * (self.pair.s() - 1.0)
    }

    /// Parameter vectors a^eps, b^eps for the sign pattern `eps` (bit i).
    pub fn params_for(&self, eps: u32) -> FBParams {
        let n = self.n();
        let (z, zp) = (self.pair.z, self.pair.zp);
        let e = |i: usize| f64::from(eps >> i & 1);
        let mut a = Vec::with_capacity(2 * n);
        let mut b = Vec::with_capacity(2 * n);
        for i in 0..n {
            a.push(1.0 - e(i) - zp);
            b.push(1.0 - e(i) - z);
        }
        for i in 0..n {
            a.push(e(i) - z);
            b.push(e(i) - zp);
        }
        FBParams { a, b, c: self.c() }
    }
}

/// f_n by the default F_B dispatcher.
pub fn f_n(args: &FNArgs) -> Result<EvalResult> {
    f_n_with(args, fb_auto)
}

/// f_n with a caller-chosen F_B evaluator. Coordinates with
/// |y'_i - y''_i| < 1e-4 |y'_i| are evaluated on the diagonal through the
/// exact derivative of the numerator in y'_i.
pub fn f_n_with<E>(args: &FNArgs, eval: E) -> Result<EvalResult>
where
    E: Fn(&FBParams, &[f64]) -> Result<EvalResult>,
{
    let n = args.n();
    let mut yp = args.yprime.clone();
    let mut ypp = args.ydoubleprime.clone();
    let mut coincident = 0u32;
    for i in 0..n {
        if (yp[i] - ypp[i]).abs() < COINCIDENCE_REL * yp[i].abs() {
            let mid = 0.5 * (yp[i] + ypp[i]);
            yp[i] = mid;
            ypp[i] = mid;
            coincident |= 1 << i;
        }
    }
    let y: Vec<f64> = yp.iter().chain(&ypp).copied().collect();
    let mut value = Complex::new(0.0, 0.0);
    let mut err = 0.0;
    let mut methods = Vec::new();
    for eps in 0..1u32 << n {
        let sign = if eps.count_ones() % 2 == 0 { 1.0 } else { -1.0 };
        let base = args.params_for(eps);
        let mut factor = sign;
        for i in (0..n).filter(|&i| coincident >> i & 1 == 0) {
            factor *= if eps >> i & 1 == 0 { yp[i] } else { ypp[i] };
        }
        // sum over D subset of the coincident set
        let mut d = coincident;
        loop {
            // coordinates of C \ D need eps_i = 0
            let rest = coincident & !d;
            if rest & eps == 0 {
                let mut p = base.clone();
                let mut coeff = Complex::new(factor, 0.0);
                for i in (0..n).filter(|&i| d >> i & 1 == 1) {
                    coeff *= yp[i] * p.a[i] * p.b[i] / p.c;
                    p = p.contiguous(i);
                }
                let r = eval(&p, &y)?;
                value += coeff * r.value;
                err += coeff.norm() * r.abs_err;
                methods.push(r.method);
            }
            if d == 0 {
                break;
            }
            d = (d - 1) & coincident;
        }
    }
    let mut denom = 1.0;
    for i in (0..n).filter(|&i| coincident >> i & 1 == 0) {
        denom *= yp[i] - ypp[i];
    }
    let method = if methods.iter().all(|m| *m == methods[0]) { methods[0] } else { Method::MellinBarnesContinuation };
    Ok(EvalResult::new(value / denom, err / denom.abs(), method))
}

#[cfg(test)]
mod tests;
