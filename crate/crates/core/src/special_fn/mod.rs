//! Scalar special functions over the complex numbers.

pub mod gamma;
pub mod hypergeometric;
pub mod quadrature;
pub mod whittaker;

pub use gamma::{digamma, gamma, log_gamma, pochhammer, rgamma};
pub use hypergeometric::{gauss_2f1, kummer_phi};
pub use whittaker::{whittaker_ladder, whittaker_w};

use crate::error::{Error, Result};
use crate::Complex;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Series,
    EulerIntegral,
    /// Expansion at infinity derived from the Mellin-Barnes representation.
    MellinBarnesContinuation,
    /// Numerical quadrature along the Mellin-Barnes contour.
    MellinBarnesContour,
    Determinant,
    DirectQuadrature,
    ClosedForm,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Method::Series => "series",
            Method::EulerIntegral => "euler_integral",
            Method::MellinBarnesContinuation => "mellin_barnes_continuation",
            Method::MellinBarnesContour => "mellin_barnes_contour",
            Method::Determinant => "determinant",
            Method::DirectQuadrature => "direct_quadrature",
            Method::ClosedForm => "closed_form",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalResult {
    pub value: Complex,
    pub abs_err: f64,
    pub method: Method,
}

impl EvalResult {
    pub fn new(value: Complex, abs_err: f64, method: Method) -> Self {
        Self { value, abs_err: abs_err.abs(), method }
    }

    pub fn real(value: f64, abs_err: f64, method: Method) -> Self {
        Self::new(Complex::new(value, 0.0), abs_err, method)
    }

    pub fn is_finite(&self) -> bool {
        self.value.re.is_finite() && self.value.im.is_finite()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub base_nodes: usize,
    pub max_doublings: usize,
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub endpoint_exponents: (f64, f64),
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self { base_nodes: 16, max_doublings: 5, rel_tol: 1e-11, abs_tol: 1e-15, endpoint_exponents: (0.0, 0.0) }
    }
}

impl QuadratureSpec {
    pub fn with_rel_tol(rel_tol: f64) -> Self {
        Self { rel_tol, ..Default::default() }
    }

    pub fn validate(&self) -> Result<()> {
        let (l, r) = self.endpoint_exponents;
        if self.base_nodes == 0 || !(self.rel_tol >= 1e-14) || !(self.abs_tol > 0.0) || !(l > -1.0 && r > -1.0) {
            return Err(Error::PreconditionViolated(format!("invalid quadrature spec {self:?}")));
        }
        Ok(())
    }
}

/// phi_a(u) = u^a / Gamma(a + 1) for u > 0 and 0 otherwise, Re a > -1.
pub fn phi_weight(a: Complex, u: f64) -> Result<Complex> {
    if a.re <= -1.0 {
        return Err(Error::DistributionalRegime(format!("{a}")));
    }
    Ok(phi_pointwise(a, u))
}

/// Same formula without the integrability restriction, for pointwise use at u > 0.
pub(crate) fn phi_pointwise(a: Complex, u: f64) -> Complex {
    if u <= 0.0 {
        return Complex::new(0.0, 0.0);
    }
    (a * u.ln()).exp() * rgamma(a + 1.0)
}

/// y^{-z} (1 + y)^{z-1}, the Stieltjes transform of phi_{-z} phi_{z-1}(1 - .) on [0, 1].
pub fn stieltjes_phi(z: Complex, y: f64) -> Result<Complex> {
    if !(y > 0.0) {
        return Err(Error::DomainError(format!("Stieltjes transform needs y > 0, got {y}")));
    }
    Ok((-z * y.ln() + (z - 1.0) * y.ln_1p()).exp())
}
