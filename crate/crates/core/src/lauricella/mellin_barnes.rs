//! Numerical Mellin-Barnes integral for m <= 2.
//!
//! Each contour is a vertical line Re s_i = sigma_i. Poles of the left
//! families (s = -a_i - n, -b_i - n) lying to the right of the line are
//! added back as residues, poles s = 0, 1, ... to the left are subtracted,
//! which reproduces the separating contour. Residues are evaluated on small
//! circles so double poles need no special treatment.

use super::{FBParams, ContourSpec};
use crate::error::{Error, Result};
use crate::special_fn::gamma::{gamma, is_nonpositive_integer, log_gamma, rgamma};
use crate::special_fn::{EvalResult, Method};
use crate::Complex;
use std::f64::consts::PI;

const MAX_DIM: usize = 2;
const TAIL_EPS: f64 = 1e-17;

struct Variable {
    a: Complex,
    b: Complex,
    ln_y: f64,
    sigma: f64,
    strip: f64,
    tau_max: f64,
    /// Circle nodes (s, weight) for all residue corrections, weights include
    /// the separable factor and the orientation sign.
    residue_nodes: Vec<(Complex, Complex)>,
}

impl Variable {
    fn g(&self, s: Complex) -> Complex {
        let l = log_gamma(self.a + s).unwrap_or(Complex::new(f64::NEG_INFINITY, 0.0))
            + log_gamma(self.b + s).unwrap_or(Complex::new(f64::NEG_INFINITY, 0.0))
            + log_gamma(-s).unwrap_or(Complex::new(f64::NEG_INFINITY, 0.0))
            + s * self.ln_y;
        if l.re == f64::NEG_INFINITY {
            Complex::new(0.0, 0.0)
        } else {
            l.exp()
        }
    }

    fn line_nodes(&self, h: f64) -> Vec<(Complex, Complex)> {
        let k_max = (self.tau_max / h).ceil() as i64;
        (-k_max..=k_max)
            .map(|k| {
                let s = Complex::new(self.sigma, k as f64 * h);
                (s, self.g(s) * (h / (2.0 * PI)))
            })
            .collect()
    }
}

/// Real parts of the poles of Gamma(a + s) Gamma(b + s) near the window, and
/// the right family 0, 1, 2, ...
fn pole_list(a: Complex, b: Complex, lo: f64, hi: f64) -> Vec<(Complex, bool)> {
    let mut out = Vec::new();
    for e in [a, b] {
        let mut n = 0.0;
        loop {
            let p = -e - n;
            if p.re < lo {
                break;
            }
            if p.re <= hi {
                out.push((p, true));
            }
            n += 1.0;
        }
    }
    let mut k = 0.0;
    while k <= hi {
        if k >= lo {
            out.push((Complex::new(k, 0.0), false));
        }
        k += 1.0;
    }
    out
}

fn choose_sigma(a: Complex, b: Complex) -> f64 {
    let mut cuts: Vec<f64> = pole_list(a, b, -1.0, 0.0).iter().map(|(p, _)| p.re).collect();
    cuts.push(-1.0);
    cuts.push(0.0);
    cuts.sort_by(|x, y| x.partial_cmp(y).unwrap());
    let mut best = (0.0, -0.5);
    for w in cuts.windows(2) {
        if w[1] - w[0] > best.0 {
            best = (w[1] - w[0], 0.5 * (w[0] + w[1]));
        }
    }
    best.1
}

fn build_variable(a: Complex, b: Complex, y: f64, sigma: Option<f64>, nodes: usize) -> Result<Variable> {
    let sigma = sigma.unwrap_or_else(|| choose_sigma(a, b));
    let span = 2.0 + sigma.abs() + a.re.abs().max(b.re.abs());
    let poles = pole_list(a, b, sigma - span, sigma + span);
    let mut strip = f64::INFINITY;
    for (p, _) in &poles {
        let d = (p.re - sigma).abs();
        if d < 1e-9 {
            return Err(Error::PoleOnContour(format!("pole at {p} lies on Re s = {sigma}")));
        }
        strip = strip.min(d);
    }
    let mut v = Variable { a, b, ln_y: (-y).ln(), sigma, strip, tau_max: 0.0, residue_nodes: Vec::new() };

    // poles needing a correction, merged when they coincide
    let mut corrections: Vec<(Complex, f64)> = Vec::new();
    for (p, left) in &poles {
        let sign = match (left, p.re > sigma) {
            (true, true) => 1.0,
            (false, false) => -1.0,
            _ => continue,
        };
        if !corrections.iter().any(|(q, _)| (q - p).norm() < 1e-9) {
            corrections.push((*p, sign));
        }
    }
    for (p, sign) in corrections {
        let near = poles
            .iter()
            .map(|(q, _)| (q - p).norm())
            .filter(|&d| d > 1e-9)
            .fold(1.0f64, f64::min);
        let r = (near / 3.0).min(0.25);
        for j in 0..nodes {
            let e = Complex::from_polar(1.0, 2.0 * PI * (j as f64 + 0.5) / nodes as f64);
            let s = p + e * r;
            v.residue_nodes.push((s, v.g(s) * e * r * (sign / nodes as f64)));
        }
    }

    // truncation point: the integrand times the worst growth of 1/Gamma(c + ...)
    let mut peak = 0.0f64;
    let mut tau = 0.0;
    let mut quiet = 0;
    while tau < 400.0 {
        let mut level = 0.0f64;
        for sgn in [1.0, -1.0] {
            let g = v.g(Complex::new(sigma, sgn * tau)).norm() * (0.5 * PI * tau).exp();
            level = level.max(g);
        }
        peak = peak.max(level);
        if level < TAIL_EPS * peak {
            quiet += 1;
            if quiet >= 3 {
                break;
            }
        } else {
            quiet = 0;
        }
        tau += 0.5;
    }
    v.tau_max = tau;
    Ok(v)
}

pub fn fb_mellin_barnes(p: &FBParams, y: &[f64], contour: &ContourSpec) -> Result<EvalResult> {
    p.check_len(y.len())?;
    let m = p.m();
    if m > MAX_DIM {
        return Err(Error::SizeGuard { what: format!("Mellin-Barnes contour in {m} variables"), limit: MAX_DIM });
    }
    for i in 0..m {
        if is_nonpositive_integer(p.a[i]) || is_nonpositive_integer(p.b[i]) {
            return Err(Error::PreconditionViolated(format!("a_{i} or b_{i} is a nonpositive integer")));
        }
        if !(y[i] < 0.0) {
            return Err(Error::DomainError(format!("Mellin-Barnes route needs y_i < 0, got {}", y[i])));
        }
    }
    if let Some(s) = &contour.sigma {
        if s.len() != m {
            return Err(Error::SizeMismatch(format!("{} contour abscissae for {m} variables", s.len())));
        }
    }
    let vars: Vec<Variable> = (0..m)
        .map(|i| build_variable(p.a[i], p.b[i], y[i], contour.sigma.as_ref().map(|s| s[i]), contour.residue_nodes))
        .collect::<Result<_>>()?;
    let prefactor = gamma(p.c)? * (0..m).map(|i| rgamma(p.a[i]) * rgamma(p.b[i])).product::<Complex>();

    let strip = vars.iter().map(|v| v.strip).fold(f64::INFINITY, f64::min);
    let mut h = (strip / 2.0).min(0.5);
    let mut prev: Option<Complex> = None;
    for _ in 0..=contour.max_halvings {
        let cur = match m {
            1 => sum_1d(p.c, &vars[0], h),
            _ => sum_2d(p.c, &vars[0], &vars[1], h),
        };
        if let Some(pv) = prev {
            let diff = (cur - pv).norm();
            if diff <= contour.rel_tol * cur.norm() {
                let value = prefactor * cur;
                return Ok(EvalResult::new(value, diff * prefactor.norm(), Method::MellinBarnesContour));
            }
        }
        prev = Some(cur);
        h *= 0.5;
    }
    Err(Error::QuadratureFailure(format!("Mellin-Barnes quadrature did not settle (last estimate {:?})", prev)))
}

fn sum_1d(c: Complex, v: &Variable, h: f64) -> Complex {
    v.line_nodes(h).iter().chain(&v.residue_nodes).map(|(s, w)| w * rgamma(c + s)).sum()
}

fn sum_2d(c: Complex, v1: &Variable, v2: &Variable, h: f64) -> Complex {
    let l1 = v1.line_nodes(h);
    let l2 = v2.line_nodes(h);
    let (k1, k2) = ((l1.len() - 1) / 2, (l2.len() - 1) / 2);
    // 1/Gamma on the grid of s1 + s2 for the line-line block
    let base = c + Complex::new(v1.sigma + v2.sigma, 0.0);
    let rsum: Vec<Complex> = (0..l1.len() + l2.len() - 1)
        .map(|j| rgamma(base + Complex::new(0.0, (j as f64 - (k1 + k2) as f64) * h)))
        .collect();
    let mut total = Complex::new(0.0, 0.0);
    for (i, (_, w1)) in l1.iter().enumerate() {
        let mut inner = Complex::new(0.0, 0.0);
        for (j, (_, w2)) in l2.iter().enumerate() {
            inner += w2 * rsum[i + j];
        }
        total += w1 * inner;
    }
    let mut direct = |a: &[(Complex, Complex)], b: &[(Complex, Complex)]| {
        for (s1, w1) in a {
            for (s2, w2) in b {
                total += w1 * w2 * rgamma(c + s1 + s2);
            }
        }
    };
    direct(&l1, &v2.residue_nodes);
    direct(&v1.residue_nodes, &l2);
    direct(&v1.residue_nodes, &v2.residue_nodes);
    total
}
