//! End-to-end checks: exact finite-n statistics against the limit first
//! correlation function, and every cross-route identity gathered into
//! machine-readable reports.

use crate::correlation::{
    asympt_const_a, controlling_density_check, rho_1_closed, rho_1_closed_complement, rho_n_fb, CorrelationQuery,
};
use crate::error::{Error, Result};
use crate::lauricella::{
    fb_continuation, fb_continuation_log, fb_euler_integral, fb_mellin_barnes, fb_series, ContourSpec, FBParams, Truncation,
};
use crate::lifted_kernel::{
    asympt_kernel_k, asympt_remainder_fit, kernel_m, lift_transform, lifted_rho_n, pd_lifted_rho, whittaker_kernel, AsymptRoute,
    KernelPoint, LiftSpec,
};
use crate::partitions_chars::{
    enumerate_partitions, frobenius, mn_character, structure_character_table, Partition, ZMeasure, ZParams,
};
use crate::special_fn::quadrature::tanh_sinh_ab;
use crate::special_fn::{gauss_2f1, EvalResult, QuadratureSpec};
use crate::Complex;
use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::Serialize;
use std::fmt::Write as _;

pub const MAX_FINITE_N: usize = 30;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub check: String,
    pub name: String,
    pub route_a: f64,
    pub route_b: f64,
    pub deviation: f64,
    pub tolerance: f64,
    pub pass: bool,
    /// Error message when one of the routes failed to produce a value.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl CheckReport {
    fn with_deviation(check: &str, name: impl Into<String>, a: f64, b: f64, deviation: f64, tolerance: f64) -> Self {
        Self {
            check: check.into(),
            name: name.into(),
            route_a: a,
            route_b: b,
            deviation,
            tolerance,
            pass: deviation <= tolerance,
            detail: None,
        }
    }

    /// |a - b| / |b|.
    pub fn relative(check: &str, name: impl Into<String>, a: f64, b: f64, tolerance: f64) -> Self {
        Self::with_deviation(check, name, a, b, rel_dev(a, b), tolerance)
    }

    pub fn absolute(check: &str, name: impl Into<String>, a: f64, b: f64, tolerance: f64) -> Self {
        Self::with_deviation(check, name, a, b, (a - b).abs(), tolerance)
    }

    pub fn failed(check: &str, name: impl Into<String>, err: &Error, tolerance: f64) -> Self {
        Self {
            check: check.into(),
            name: name.into(),
            route_a: f64::NAN,
            route_b: f64::NAN,
            deviation: f64::INFINITY,
            tolerance,
            pass: false,
            detail: Some(err.to_string()),
        }
    }
}

fn rel_dev(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / b.abs().max(1e-300)
    }
}

fn complex_check(check: &str, name: String, a: Result<Complex>, b: Result<Complex>, tol: f64) -> CheckReport {
    match (a, b) {
        (Ok(a), Ok(b)) => {
            let dev = if a == b { 0.0 } else { (a - b).norm() / b.norm().max(1e-300) };
            CheckReport::with_deviation(check, name, a.re, b.re, dev, tol)
        }
        (Err(e), _) | (_, Err(e)) => CheckReport::failed(check, name, &e, tol),
    }
}

fn csv_float(v: f64) -> String {
    format!("{v:.16e}")
}

/// CSV with header check,name,route_a,route_b,deviation,tolerance,pass.
pub fn reports_to_csv(reports: &[CheckReport]) -> String {
    let mut out = String::from("check,name,route_a,route_b,deviation,tolerance,pass\n");
    for r in reports {
        let name = if r.name.contains([',', '"', '\n']) { format!("\"{}\"", r.name.replace('"', "\"\"")) } else { r.name.clone() };
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            r.check,
            name,
            csv_float(r.route_a),
            csv_float(r.route_b),
            csv_float(r.deviation),
            csv_float(r.tolerance),
            r.pass
        );
    }
    out
}

pub fn reports_to_json(reports: &[CheckReport]) -> String {
    serde_json::to_string_pretty(reports).expect("reports serialize") + "\n"
}

#[derive(Debug, Clone, Serialize)]
pub struct FiniteNReport {
    pub n: usize,
    pub probabilities: Vec<(Partition, f64)>,
    /// Mass of the first correlation measure at (k + 1/2)/n, k = 0..n.
    pub positive_atoms: Vec<f64>,
    /// Mass at -(k + 1/2)/n.
    pub negative_atoms: Vec<f64>,
    pub total_mass_error: f64,
}

impl FiniteNReport {
    pub fn atom(&self, k: usize) -> f64 {
        (k as f64 + 0.5) / self.n as f64
    }

    /// Mass of the first correlation measure in [lo, hi).
    pub fn bin_mass(&self, lo: f64, hi: f64) -> f64 {
        let mut m = 0.0;
        for k in 0..self.n {
            let x = self.atom(k);
            if lo <= x && x < hi {
                m += self.positive_atoms[k];
            }
            if lo <= -x && -x < hi {
                m += self.negative_atoms[k];
            }
        }
        m
    }
}

/// Exact z-measure of every partition of n and the resulting first
/// correlation measure of the scaled Frobenius coordinates.
pub fn finite_n_table(params: &ZParams, n: usize) -> Result<FiniteNReport> {
    if n == 0 {
        return Err(Error::DomainError("n must be at least 1".into()));
    }
    if n > MAX_FINITE_N {
        return Err(Error::SizeGuard { what: format!("finite-n table for n = {n}"), limit: MAX_FINITE_N });
    }
    let measure = ZMeasure::from_params(params);
    let parts = enumerate_partitions(n)?;
    let probabilities: Vec<(Partition, f64)> = parts
        .into_par_iter()
        .map(|l| {
            let p = measure.prob(&l);
            (l, p)
        })
        .collect();
    let mut positive_atoms = vec![0.0; n];
    let mut negative_atoms = vec![0.0; n];
    for (l, p) in &probabilities {
        let f = frobenius(l);
        for i in 0..f.rank() {
            positive_atoms[f.p[i] as usize] += p;
            negative_atoms[f.q[i] as usize] += p;
        }
    }
    let total: f64 = probabilities.iter().map(|(_, p)| p).sum();
    Ok(FiniteNReport { n, probabilities, positive_atoms, negative_atoms, total_mass_error: (total - 1.0).abs() })
}

/// A bin [lo, hi) on one side of the origin, away from it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Bin {
    pub lo: f64,
    pub hi: f64,
}

impl Bin {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo < hi) || !(lo * hi > 0.0) || lo.abs().max(hi.abs()) > 1.0 {
            return Err(Error::DomainError(format!("bin [{lo}, {hi}) must lie in (0, 1] or [-1, 0)")));
        }
        Ok(Self { lo, hi })
    }
}

/// int_bin rho_1(x) dx. The distance to the end of the support is passed
/// exactly so that bins touching |x| = 1 keep full accuracy.
pub fn limit_bin_mass(params: &ZParams, bin: Bin, quad: &QuadratureSpec) -> Result<f64> {
    let Bin { lo, hi } = bin;
    let mut failure = None;
    let r = tanh_sinh_ab(
        |x, from_lo, to_hi| {
            let gap = if hi > 0.0 { (1.0 - hi) + to_hi } else { (1.0 + lo) + from_lo };
            match rho_1_closed_complement(params, x, gap) {
                Ok(r) => Complex::new(r.value.re, 0.0),
                Err(e) => {
                    failure.get_or_insert(e);
                    Complex::new(0.0, 0.0)
                }
            }
        },
        lo,
        hi,
        quad,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(r?.value.re)
}

#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceTrend {
    pub bin: Bin,
    pub n_list: Vec<usize>,
    pub empirical: Vec<f64>,
    pub limit: f64,
    pub deviations: Vec<f64>,
}

pub fn convergence_trend(params: &ZParams, n_list: &[usize], bin: Bin, quad: &QuadratureSpec) -> Result<ConvergenceTrend> {
    let limit = limit_bin_mass(params, bin, quad)?;
    let empirical: Vec<f64> =
        n_list.iter().map(|&n| Ok(finite_n_table(params, n)?.bin_mass(bin.lo, bin.hi))).collect::<Result<_>>()?;
    let deviations = empirical.iter().map(|e| rel_dev(*e, limit)).collect();
    Ok(ConvergenceTrend { bin, n_list: n_list.to_vec(), empirical, limit, deviations })
}

/// For each bin: one report on the trend (number of n steps where the
/// deviation grew, tolerance 0) and one on the final relative deviation.
pub fn convergence_check(params: &ZParams, n_list: &[usize], bins: &[Bin], tol: f64, quad: &QuadratureSpec) -> Vec<CheckReport> {
    let mut out = Vec::new();
    for &bin in bins {
        let label = format!("[{},{})", bin.lo, bin.hi);
        match convergence_trend(params, n_list, bin, quad) {
            Ok(t) => {
                let ups = t.deviations.windows(2).filter(|w| w[1] > w[0]).count();
                let last = t.deviations.len() - 1;
                out.push(CheckReport::absolute("convergence", format!("{label} trend"), ups as f64, 0.0, 0.0));
                out.push(CheckReport::relative(
                    "convergence",
                    format!("{label} n={}", t.n_list[last]),
                    t.empirical[last],
                    t.limit,
                    tol,
                ));
            }
            Err(e) => out.push(CheckReport::failed("convergence", label, &e, tol)),
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Suite {
    Characters,
    Normalization,
    Moments,
    FbRoutes,
    KernelRoutes,
    Lifting,
    Asymptotics,
    Convergence,
    All,
}

impl Suite {
    /// The suites behind `All`. Convergence is left out: it is a trend
    /// check whose rate depends strongly on the parameters.
    pub const ROUTE_MATRIX: [Suite; 7] = [
        Suite::Characters,
        Suite::Normalization,
        Suite::Moments,
        Suite::FbRoutes,
        Suite::KernelRoutes,
        Suite::Lifting,
        Suite::Asymptotics,
    ];
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HarnessConfig {
    /// Largest n for the character comparison.
    pub characters_nmax: usize,
    /// Largest n for the normalization check.
    pub normalization_nmax: usize,
    /// Replaces every default tolerance when set.
    pub tol: Option<f64>,
    pub quad: QuadratureSpec,
}

impl Default for HarnessConfig {
    fn default() -> Self {
        Self { characters_nmax: 8, normalization_nmax: 12, tol: None, quad: QuadratureSpec::with_rel_tol(1e-9) }
    }
}

impl HarnessConfig {
    fn tol(&self, default: f64) -> f64 {
        self.tol.unwrap_or(default)
    }
}

pub fn run_suite(suite: Suite, params: &ZParams, cfg: &HarnessConfig) -> Vec<CheckReport> {
    match suite {
        Suite::Characters => characters_suite(cfg),
        Suite::Normalization => normalization_suite(params, cfg),
        Suite::Moments => moments_suite(params, cfg),
        Suite::FbRoutes => fb_routes_suite(params, cfg),
        Suite::KernelRoutes => kernel_routes_suite(params, cfg),
        Suite::Lifting => lifting_suite(params, cfg),
        Suite::Asymptotics => asymptotics_suite(params, cfg),
        Suite::Convergence => convergence_suite(params, cfg),
        Suite::All => Suite::ROUTE_MATRIX.iter().flat_map(|s| run_suite(*s, params, cfg)).collect(),
    }
}

/// Every route suite at default tolerances.
pub fn route_matrix(params: &ZParams) -> Vec<CheckReport> {
    run_suite(Suite::All, params, &HarnessConfig::default())
}

/// Structure route against Murnaghan-Nakayama: the number of (lambda, rho)
/// with different characters, per n.
pub fn characters_suite(cfg: &HarnessConfig) -> Vec<CheckReport> {
    let tol = cfg.tol(0.0);
    (1..=cfg.characters_nmax)
        .into_par_iter()
        .map(|n| {
            let name = format!("n={n}");
            let run = || -> Result<(usize, usize)> {
                let parts = enumerate_partitions(n)?;
                let mut mismatches = 0;
                let mut total = 0;
                for rho in &parts {
                    let table = structure_character_table(rho.parts(), false)?;
                    for lambda in &parts {
                        let a = table.get(lambda).cloned().unwrap_or_default();
                        let b = mn_character(lambda, rho.parts())?;
                        total += 1;
                        if a != b {
                            mismatches += 1;
                        }
                    }
                }
                Ok((mismatches, total))
            };
            match run() {
                Ok((bad, total)) => {
                    CheckReport::absolute("characters", format!("{name} ({total} pairs)"), bad as f64, 0.0, tol)
                }
                Err(e) => CheckReport::failed("characters", name, &e, tol),
            }
        })
        .collect()
}

pub fn normalization_suite(params: &ZParams, cfg: &HarnessConfig) -> Vec<CheckReport> {
    let tol = cfg.tol(1e-10);
    (1..=cfg.normalization_nmax.min(MAX_FINITE_N))
        .map(|n| match finite_n_table(params, n) {
            Ok(r) => {
                let total = r.probabilities.iter().map(|(_, p)| p).sum();
                CheckReport::absolute("normalization", format!("n={n}"), total, 1.0, tol)
            }
            Err(e) => CheckReport::failed("normalization", format!("n={n}"), &e, tol),
        })
        .collect()
}

pub fn moments_suite(params: &ZParams, cfg: &HarnessConfig) -> Vec<CheckReport> {
    let tol = cfg.tol(1e-5);
    match controlling_density_check(params, 4, &cfg.quad) {
        Ok(m) => m.rows.iter().map(|r| CheckReport::relative("moments", format!("l={}", r.l), r.quadrature, r.exact, tol)).collect(),
        Err(e) => vec![CheckReport::failed("moments", "l=0..4", &e, tol)],
    }
}

fn val(r: Result<EvalResult>) -> Result<Complex> {
    r.map(|v| v.value)
}

fn cy(y: &[f64]) -> Vec<Complex> {
    y.iter().map(|&v| Complex::new(v, 0.0)).collect()
}

/// Pairwise agreement of the F_B routes on overlapping domains, plus the
/// first correlation function through f_1 against the closed form.
pub fn fb_routes_suite(params: &ZParams, cfg: &HarnessConfig) -> Vec<CheckReport> {
    let tol = cfg.tol(1e-6);
    let quad = QuadratureSpec::with_rel_tol(1e-10);
    let contour = ContourSpec::default();
    let trunc = Truncation::default();
    let real = |a: &[f64], b: &[f64], c: f64| FBParams::real(a, b, c).expect("fixed parameters");
    let series = |p: &FBParams, y: &[f64]| val(fb_series(p, &cy(y)));
    let euler = |p: &FBParams, y: &[f64]| val(fb_euler_integral(p, y, &quad));
    let mb = |p: &FBParams, y: &[f64]| val(fb_mellin_barnes(p, y, &contour));
    let cont = |p: &FBParams, y: &[f64]| val(fb_continuation(p, y, &trunc));
    let logc = |p: &FBParams, y: &[f64]| val(fb_continuation_log(&p.a, p.c, y, &trunc));
    let gauss = |p: &FBParams, y: f64| val(gauss_2f1(p.a[0], p.b[0], p.c, Complex::new(y, 0.0)));

    let p1 = real(&[0.7], &[0.5], 1.3);
    let p2 = real(&[0.3, 0.4], &[0.5, 0.6], 2.3);
    let p3 = real(&[0.3, 0.4, 0.25], &[0.5, 0.6, 0.35], 2.9);
    let q = real(&[-0.8, -1.2], &[-0.2, -1.8], 0.16);
    let q1 = real(&[-0.8], &[-1.3], 0.45);
    let r = real(&[0.6, -0.4], &[0.6, -0.4], 1.9);
    let l1 = real(&[0.6], &[0.6], 1.4);
    let l2 = real(&[0.6, 0.45], &[0.6, 0.45], 2.2);
    let zc = Complex::new(0.3, 0.4);
    let pc = FBParams::new(vec![Complex::new(0.8, 0.0)], vec![1.0 - zc], Complex::new(2.1, 0.0)).expect("fixed parameters");

    type Case<'a> = (&'static str, &'a FBParams, Vec<f64>, &'static str);
    let cases: Vec<Case> = vec![
        ("series|euler", &p1, vec![-0.5], "m=1"),
        ("series|mb", &p1, vec![-0.5], "m=1"),
        ("series|gauss", &p1, vec![-0.5], "m=1"),
        ("euler|mb", &p1, vec![-3.0], "m=1"),
        ("euler|cont", &p1, vec![-5.0], "m=1"),
        ("mb|cont", &p1, vec![-8.0], "m=1"),
        ("cont|gauss", &p1, vec![-5.0], "m=1"),
        ("mb|gauss", &q1, vec![-2.0], "m=1 negative parameters"),
        ("series|euler", &p2, vec![-0.3, -0.5], "m=2"),
        ("series|mb", &p2, vec![-0.3, -0.5], "m=2"),
        ("euler|mb", &p2, vec![-1.5, -2.5], "m=2"),
        ("euler|cont", &p2, vec![-3.0, -7.0], "m=2"),
        ("mb|cont", &p2, vec![-4.0, -6.0], "m=2"),
        ("series|euler", &p3, vec![-0.2, -0.4, -0.3], "m=3"),
        ("euler|cont", &p3, vec![-5.0, -6.0, -8.0], "m=3"),
        ("series|mb", &q, vec![-0.5, -0.5], "m=2 first-correlation parameters"),
        ("mb|cont", &q, vec![-5.0, -5.0], "m=2 first-correlation parameters"),
        ("series|mb", &r, vec![-0.5, -0.7], "m=2 a=b"),
        ("mb|log", &r, vec![-4.0, -5.0], "m=2 a=b"),
        ("euler|log", &l1, vec![-8.0], "m=1 a=b"),
        ("mb|log", &l1, vec![-3.0], "m=1 a=b"),
        ("euler|log", &l2, vec![-6.0, -9.0], "m=2 a=b"),
        ("series|euler", &pc, vec![-0.6], "m=1 complex b"),
    ];
    let mut out: Vec<CheckReport> = cases
        .par_iter()
        .map(|(routes, p, y, label)| {
            let eval = |route: &str| -> Result<Complex> {
                match route {
                    "series" => series(p, y),
                    "euler" => euler(p, y),
                    "mb" => mb(p, y),
                    "cont" => cont(p, y),
                    "log" => logc(p, y),
                    "gauss" => gauss(p, y[0]),
                    _ => unreachable!(),
                }
            };
            let (ra, rb) = routes.split_once('|').expect("route pair");
            complex_check("fb_routes", format!("{routes} {label} y={y:?}"), eval(ra), eval(rb), tol)
        })
        .collect();
    for x in [0.1, 0.4, 0.75, -0.3] {
        let a = CorrelationQuery::new(params, vec![x]).and_then(|q| val(rho_n_fb(&q)));
        let b = val(rho_1_closed(params, x));
        out.push(complex_check("fb_routes", format!("rho_1 f_1|closed x={x}"), a, b, tol));
    }
    out
}

const GRID: [f64; 5] = [0.1, 0.3, 0.5, 0.7, 0.9];

/// M against (x/y)^{(z-z')/2} K on a 5x5 grid, and the determinant identity.
pub fn kernel_routes_suite(params: &ZParams, cfg: &HarnessConfig) -> Vec<CheckReport> {
    let tol = cfg.tol(1e-6);
    let quad = QuadratureSpec::with_rel_tol(1e-10);
    let pairs: Vec<(f64, f64)> = GRID.iter().flat_map(|&x| GRID.iter().map(move |&y| (x, y))).collect();
    let mut out: Vec<CheckReport> = pairs
        .par_iter()
        .map(|&(x, y)| {
            let name = format!("M|K x={x} y={y}");
            let pt = KernelPoint::new(x, y).expect("grid point");
            let m = kernel_m(params, pt, &quad).map(|r| r.value);
            let k = whittaker_kernel(params, pt)
                .map(|k| (0.5 * (params.z() - params.zp()) * (x / y).ln()).exp() * k);
            complex_check("kernel_routes", name, m, k, tol)
        })
        .collect();
    for x in [vec![0.3, 0.9], vec![0.2, 0.6, 0.95]] {
        let n = x.len();
        let name = format!("det M|det K x={x:?}");
        let m: Result<Vec<Complex>> = (0..n * n)
            .into_par_iter()
            .map(|k| Ok(kernel_m(params, KernelPoint::new(x[k / n], x[k % n])?, &quad)?.value))
            .collect();
        let dm = m.map(|v| DMatrix::from_row_slice(n, n, &v).lu().determinant());
        let dk = lifted_rho_n(params, &x).map(|d| Complex::new(d.value, 0.0));
        out.push(complex_check("kernel_routes", name, dm, dk, cfg.tol(1e-8)));
    }
    out
}

/// Lift of rho_1 against K(x, x) and the Poisson-Dirichlet case.
pub fn lifting_suite(params: &ZParams, cfg: &HarnessConfig) -> Vec<CheckReport> {
    let tol = cfg.tol(1e-4);
    let quad = QuadratureSpec::with_rel_tol(1e-8);
    let t = params.t();
    let xs: Vec<f64> = (1..=9).map(|k| k as f64 / 10.0).collect();
    let mut out: Vec<CheckReport> = xs
        .par_iter()
        .map(|&x| {
            let name = format!("lift rho_1|K(x,x) x={x}");
            let lifted = LiftSpec::new(t).and_then(|spec| {
                lift_transform(
                    |y, gap| Ok(rho_1_closed_complement(params, y[0], gap)?.value.re),
                    spec,
                    &[x],
                    &quad,
                )
            });
            let k = whittaker_kernel(params, KernelPoint::new(x, x).expect("positive")).map(|v| Complex::new(v, 0.0));
            complex_check("lifting", name, val(lifted), k, tol)
        })
        .collect();
    let pd_quad = QuadratureSpec::with_rel_tol(1e-11);
    for (tt, x) in [(1.0, vec![1.0]), (3.0, vec![1.0, 2.0]), (0.7, vec![0.2, 0.5]), (2.5, vec![0.1, 0.3, 0.4])] {
        let closed = pd_lifted_rho(tt, &x);
        let direct = tt.powi(x.len() as i32) * (-x.iter().sum::<f64>()).exp() / x.iter().product::<f64>();
        match &closed {
            Ok(v) => out.push(CheckReport::relative("lifting", format!("pd closed t={tt} x={x:?}"), *v, direct, cfg.tol(1e-14))),
            Err(e) => out.push(CheckReport::failed("lifting", format!("pd closed t={tt}"), e, cfg.tol(1e-14))),
        }
        let lifted = LiftSpec::new(tt).and_then(|spec| {
            lift_transform(
                |y, gap| Ok(tt.powi(y.len() as i32) * gap.powf(tt - 1.0) / y.iter().product::<f64>()),
                spec,
                &x,
                &pd_quad,
            )
        });
        out.push(complex_check(
            "lifting",
            format!("pd quadrature t={tt} x={x:?}"),
            val(lifted),
            Ok(Complex::new(direct, 0.0)),
            cfg.tol(1e-8),
        ));
    }
    out
}

/// Remainder exponents at the origin for the kernel, the lifted and the
/// non-lifted first correlation functions, and k(1) = A(0).
pub fn asymptotics_suite(params: &ZParams, cfg: &HarnessConfig) -> Vec<CheckReport> {
    let tol = cfg.tol(0.15);
    let mut out = Vec::new();
    let k1 = asympt_kernel_k(params, 1.0);
    let a = asympt_const_a(params);
    out.push(CheckReport::relative("asymptotics", "k(1)|A(0)", k1, a, cfg.tol(1e-12)));
    let equal = params.z() == params.zp();
    for route in [AsymptRoute::Kernel, AsymptRoute::Lifted, AsymptRoute::NonLifted] {
        let name = format!("{route:?} slope");
        match asympt_remainder_fit(params, route) {
            Ok(r) if equal => {
                // remainder / (lambda ln^2 lambda) must stay bounded: report its growth over the window
                let ratio: Vec<f64> =
                    r.lambdas.iter().zip(&r.residuals).map(|(l, v)| (v / (l * l.ln().powi(2))).abs()).collect();
                let growth = ratio.iter().cloned().fold(0.0, f64::max) / ratio[0];
                out.push(CheckReport::absolute("asymptotics", format!("{route:?} log^2 ratio growth"), growth, 1.0, cfg.tol(1.0)));
            }
            Ok(r) => out.push(CheckReport::absolute("asymptotics", name, r.fitted_slope, r.theoretical_slope, tol)),
            Err(e) => out.push(CheckReport::failed("asymptotics", name, &e, tol)),
        }
    }
    out
}

pub fn convergence_suite(params: &ZParams, cfg: &HarnessConfig) -> Vec<CheckReport> {
    let bins = [Bin { lo: 0.2, hi: 0.5 }, Bin { lo: -0.5, hi: -0.2 }];
    let mut out = convergence_check(params, &[10, 20, 30], &bins, cfg.tol(0.1), &cfg.quad);
    // near the end of the support both masses are small
    let edge = Bin { lo: 0.9, hi: 1.0 };
    match (finite_n_table(params, 30), limit_bin_mass(params, edge, &cfg.quad)) {
        (Ok(t), Ok(limit)) => {
            let emp = t.bin_mass(edge.lo, edge.hi);
            out.push(CheckReport::absolute("convergence", "[0.9,1) masses", emp, limit, cfg.tol(0.05)));
        }
        (Err(e), _) | (_, Err(e)) => out.push(CheckReport::failed("convergence", "[0.9,1) masses", &e, cfg.tol(0.05))),
    }
    out
}
