//! Euler integral over the simplex, mapped to the unit cube by stick
//! breaking: u_1 = v_1, u_j = v_j prod_{k<j} (1 - v_k). The weight becomes
//! prod_j v_j^{b_j - 1} (1 - v_j)^{c - b_1 - ... - b_j - 1}.

use super::FBParams;
use crate::error::{Error, Result};
use crate::special_fn::gamma::{gamma, rgamma};
use crate::special_fn::quadrature::gauss_jacobi;
use crate::special_fn::{EvalResult, Method, QuadratureSpec};
use crate::Complex;
use std::f64::consts::PI;

const MAX_DIM: usize = 4;

struct Rule {
    nodes: Vec<f64>,
    comp: Vec<f64>,
    weights: Vec<Complex>,
}

/// Tanh-sinh nodes on [0, 1] with the Jacobi weight folded into the weights.
fn tanh_sinh_rule(level: usize, alpha: Complex, beta: Complex) -> Rule {
    let h = 2f64.powi(-(level as i32));
    let mut rule = Rule { nodes: vec![], comp: vec![], weights: vec![] };
    let k_max = (6.2 / h) as i64;
    for k in -k_max..=k_max {
        let t = k as f64 * h;
        let s = PI * t.sinh();
        let u = 1.0 / (1.0 + (-s).exp());
        let v = 1.0 / (1.0 + s.exp());
        if u <= 0.0 || v <= 0.0 {
            continue;
        }
        let dw = h * PI * t.cosh() * u * v;
        let w = dw * (alpha * u.ln() + beta * v.ln()).exp();
        if w.norm() > 0.0 && w.re.is_finite() && w.im.is_finite() {
            rule.nodes.push(u);
            rule.comp.push(v);
            rule.weights.push(w);
        }
    }
    rule
}

fn jacobi_rule(n: usize, alpha: f64, beta: f64) -> Result<Rule> {
    let g = gauss_jacobi(n, alpha, beta)?;
    Ok(Rule { nodes: g.nodes, comp: g.comp, weights: g.weights.iter().map(|&w| Complex::new(w, 0.0)).collect() })
}

/// Picks, per coordinate, which of (a_i, b_i) plays the role of b_i so that
/// the Euler integral converges (the function is symmetric in the pair).
fn orient(p: &FBParams) -> Option<FBParams> {
    let m = p.m();
    let mut best: Option<(f64, FBParams)> = None;
    for mask in 0..1u32 << m {
        let mut q = p.clone();
        for i in 0..m {
            if mask >> i & 1 == 1 {
                std::mem::swap(&mut q.a[i], &mut q.b[i]);
            }
        }
        let rest = q.c - q.b.iter().sum::<Complex>();
        let margin = q.b.iter().map(|b| b.re).fold(rest.re, f64::min);
        if margin > 0.0 && best.as_ref().map_or(true, |(bm, _)| margin > *bm) {
            best = Some((margin, q));
        }
    }
    best.map(|(_, q)| q)
}

pub fn fb_euler_integral(p: &FBParams, y: &[f64], quad: &QuadratureSpec) -> Result<EvalResult> {
    p.check_len(y.len())?;
    quad.validate()?;
    let m = p.m();
    if m > MAX_DIM {
        return Err(Error::SizeGuard { what: format!("Euler integral in {m} dimensions"), limit: MAX_DIM });
    }
    if let Some(v) = y.iter().find(|v| !(**v < 0.0)) {
        return Err(Error::PreconditionViolated(format!("Euler route needs y_i < 0, got {v}")));
    }
    let q = orient(p).ok_or_else(|| {
        Error::PreconditionViolated("no orientation with Re b_i > 0 and Re(c - sum b) > 0".into())
    })?;
    // exponents of v_j and 1 - v_j
    let mut alphas = Vec::with_capacity(m);
    let mut betas = Vec::with_capacity(m);
    let mut acc = q.c;
    for j in 0..m {
        acc -= q.b[j];
        alphas.push(q.b[j] - 1.0);
        betas.push(acc - 1.0);
    }
    let real = alphas.iter().chain(&betas).all(|e| e.im == 0.0);
    let norm = gamma(q.c)? * rgamma(acc) * q.b.iter().map(|&b| rgamma(b)).product::<Complex>();

    let levels = quad.max_doublings + 1;
    let mut prev: Option<Complex> = None;
    for level in 0..levels {
        let rules: Vec<Rule> = (0..m)
            .map(|j| {
                if real {
                    jacobi_rule(quad.base_nodes << level, alphas[j].re, betas[j].re)
                } else {
                    Ok(tanh_sinh_rule(level + 2, alphas[j], betas[j]))
                }
            })
            .collect::<Result<_>>()?;
        let cur = tensor_sum(&q, y, &rules);
        if let Some(pv) = prev {
            let diff = (cur - pv).norm();
            if diff <= quad.abs_tol.max(quad.rel_tol * cur.norm()) {
                return Ok(EvalResult::new(norm * cur, diff * norm.norm(), Method::EulerIntegral));
            }
        }
        prev = Some(cur);
    }
    Err(Error::QuadratureFailure(format!("Euler integral did not settle (last estimate {:?})", prev.map(|v| v * norm))))
}

/// Recursive tensor product; `stick` is prod_{k<j} (1 - v_k).
fn tensor_sum(p: &FBParams, y: &[f64], rules: &[Rule]) -> Complex {
    fn rec(p: &FBParams, y: &[f64], rules: &[Rule], j: usize, stick: f64) -> Complex {
        if j == rules.len() {
            return Complex::new(1.0, 0.0);
        }
        let r = &rules[j];
        let mut total = Complex::new(0.0, 0.0);
        for i in 0..r.nodes.len() {
            let u = r.nodes[i] * stick;
            let f = (-p.a[j] * (1.0 - u * y[j]).ln()).exp();
            total += r.weights[i] * f * rec(p, y, rules, j + 1, stick * r.comp[i]);
        }
        total
    }
    rec(p, y, rules, 0, 1.0)
}
