//! Command-line front end: evaluate correlation functions and kernels on
//! grids, and run the cross-route verification suites.

mod table;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use std::path::PathBuf;
use std::process::ExitCode;
use table::{Cell, Table};
use zdpp::correlation::{rho_1_closed, rho_n_fb, rho_n_integral, CorrelationQuery};
use zdpp::lauricella::{fb_auto, FBParams};
use zdpp::lifted_kernel::{asympt_kernel_k, kernel_m, lifted_rho_n, whittaker_kernel, KernelPoint};
use zdpp::verify_harness::{reports_to_csv, reports_to_json, run_suite, HarnessConfig, Suite};
use zdpp::{Complex, EvalResult, QuadratureSpec, ZPair, ZParams};

#[derive(Parser)]
#[command(name = "zdpp", version, about = "Correlation functions of z-measure point processes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a quantity on a grid or at given points.
    Eval(EvalArgs),
    /// Run a verification suite; exits 1 if any check fails.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
enum EvalKind {
    Rho1,
    RhoN,
    KernelK,
    KernelM,
    LiftedRho,
    AsymptK,
    Fb,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
enum SuiteArg {
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

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Route {
    Fb,
    Integral,
}

#[derive(Args)]
struct Common {
    /// z as `re,im` or `re`.
    #[arg(long, default_value = "0.3,0.4", allow_hyphen_values = true)]
    z: String,
    /// z' as `re,im` or `re`; defaults to the conjugate of z.
    #[arg(long, allow_hyphen_values = true)]
    zp: Option<String>,
    /// Accept parameters outside the admissible set (rho1 and rho_n only).
    #[arg(long)]
    unchecked: bool,
    /// Tolerance override: quadrature tolerance for eval, check tolerance for verify.
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Recorded for reproducibility scripts; every route here is deterministic.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads; falls back to ZDPP_THREADS, then to the hardware count.
    #[arg(long, env = "ZDPP_THREADS")]
    threads: Option<usize>,
}

#[derive(Args)]
struct EvalArgs {
    #[arg(value_enum)]
    kind: EvalKind,
    #[command(flatten)]
    common: Common,
    /// Linear grid `start:stop:count`.
    #[arg(long, conflicts_with = "grid_log", allow_hyphen_values = true)]
    grid: Option<String>,
    /// Geometric grid `start:stop:count`.
    #[arg(long)]
    grid_log: Option<String>,
    /// Comma-separated point; repeat for several. One point is one tuple for rho_n, lifted_rho and fb.
    #[arg(long, allow_hyphen_values = true)]
    x: Vec<String>,
    /// Number of points per tuple when tuples are drawn from a grid.
    #[arg(long)]
    n: Option<usize>,
    /// Route for rho1 and rho_n.
    #[arg(long, value_enum, default_value = "fb")]
    route: Route,
    /// F_B parameters for `eval fb`, comma-separated.
    #[arg(long, allow_hyphen_values = true)]
    a: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    b: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    c: Option<f64>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(value_enum)]
    suite: SuiteArg,
    #[command(flatten)]
    common: Common,
    /// Largest n for the character suite.
    #[arg(long, default_value_t = 8)]
    nmax: usize,
    /// Largest n for the normalization suite.
    #[arg(long, default_value_t = 12)]
    n: usize,
}

enum CliError {
    Config(String),
    Numeric(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numeric(_) => 3,
        }
    }
}

type CliResult<T> = Result<T, CliError>;

fn numeric<'a>(op: &'a str, at: &'a [f64]) -> impl Fn(zdpp::Error) -> CliError + 'a {
    move |e| CliError::Numeric(format!("{op} at {at:?}: {e}"))
}

fn parse_f64(s: &str) -> CliResult<f64> {
    s.trim().parse().map_err(|_| CliError::Config(format!("not a number: {s:?}")))
}

fn parse_list(s: &str) -> CliResult<Vec<f64>> {
    s.split(',').map(parse_f64).collect()
}

fn parse_complex(s: &str) -> CliResult<Complex> {
    match parse_list(s)?.as_slice() {
        [re] => Ok(Complex::new(*re, 0.0)),
        [re, im] => Ok(Complex::new(*re, *im)),
        _ => Err(CliError::Config(format!("expected `re,im`, got {s:?}"))),
    }
}

fn parse_grid(s: &str, log: bool) -> CliResult<Vec<f64>> {
    let parts: Vec<&str> = s.split(':').collect();
    let [a, b, n] = parts.as_slice() else {
        return Err(CliError::Config(format!("grid must be start:stop:count, got {s:?}")));
    };
    let (a, b) = (parse_f64(a)?, parse_f64(b)?);
    let n: usize = n.trim().parse().map_err(|_| CliError::Config(format!("bad grid count in {s:?}")))?;
    if n == 0 || !a.is_finite() || !b.is_finite() || (log && !(a > 0.0 && b > 0.0)) {
        return Err(CliError::Config(format!("invalid grid {s:?}")));
    }
    if n == 1 {
        return Ok(vec![a]);
    }
    Ok((0..n)
        .map(|k| {
            let f = k as f64 / (n - 1) as f64;
            if k == n - 1 {
                b
            } else if log {
                // base 10 keeps decade points such as 1 exact
                10f64.powf(a.log10() + f * (b.log10() - a.log10()))
            } else {
                a + f * (b - a)
            }
        })
        .collect())
}

impl Common {
    fn pair(&self) -> CliResult<ZPair> {
        let z = parse_complex(&self.z)?;
        let zp = match &self.zp {
            Some(s) => parse_complex(s)?,
            None => z.conj(),
        };
        Ok(ZPair::new(z, zp))
    }

    fn params(&self) -> CliResult<ZParams> {
        let p = self.pair()?;
        ZParams::new(p.z, p.zp).map_err(|e| CliError::Config(format!("{e}")))
    }

    fn quad(&self, default: f64) -> CliResult<QuadratureSpec> {
        let q = QuadratureSpec::with_rel_tol(self.tol.unwrap_or(default));
        q.validate().map_err(|e| CliError::Config(format!("{e}")))?;
        Ok(q)
    }

    fn write(&self, text: &str) -> CliResult<()> {
        match &self.out {
            Some(path) => std::fs::write(path, text).map_err(|e| CliError::Config(format!("cannot write {}: {e}", path.display()))),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }

    fn init_threads(&self) -> CliResult<()> {
        if let Some(n) = self.threads {
            if n == 0 {
                return Err(CliError::Config("thread count must be positive".into()));
            }
            rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| CliError::Config(e.to_string()))?;
        }
        Ok(())
    }
}

impl EvalArgs {
    /// Points along one axis: the grid, or every --x value.
    fn axis(&self) -> CliResult<Vec<f64>> {
        if let Some(g) = &self.grid {
            return parse_grid(g, false);
        }
        if let Some(g) = &self.grid_log {
            return parse_grid(g, true);
        }
        let mut out = Vec::new();
        for s in &self.x {
            out.extend(parse_list(s)?);
        }
        if out.is_empty() {
            return Err(CliError::Config("give --grid, --grid-log or --x".into()));
        }
        Ok(out)
    }

    /// Point tuples: each --x is one tuple, otherwise increasing n-tuples from the grid.
    fn tuples(&self, default_n: usize) -> CliResult<Vec<Vec<f64>>> {
        if !self.x.is_empty() {
            let t: Vec<Vec<f64>> = self.x.iter().map(|s| parse_list(s)).collect::<CliResult<_>>()?;
            let n = self.n.unwrap_or(t[0].len());
            if t.iter().any(|v| v.len() != n) {
                return Err(CliError::Config(format!("every --x tuple must have {n} entries")));
            }
            return Ok(t);
        }
        let axis = self.axis()?;
        let n = self.n.unwrap_or(default_n);
        if n == 0 || n > axis.len() {
            return Err(CliError::Config(format!("cannot draw {n}-tuples from {} grid points", axis.len())));
        }
        let mut out = Vec::new();
        let mut idx: Vec<usize> = (0..n).collect();
        loop {
            out.push(idx.iter().map(|&i| axis[i]).collect());
            let Some(k) = (0..n).rev().find(|&k| idx[k] < axis.len() - n + k) else { break };
            idx[k] += 1;
            for j in k + 1..n {
                idx[j] = idx[j - 1] + 1;
            }
        }
        Ok(out)
    }
}

fn columns(points: &[&str], extra: &[&str]) -> Vec<String> {
    points.iter().chain(extra).map(|s| s.to_string()).collect()
}

fn tuple_columns(prefix: &str, n: usize, extra: &[&str]) -> Vec<String> {
    (1..=n).map(|i| format!("{prefix}{i}")).chain(extra.iter().map(|s| s.to_string())).collect()
}

fn eval_row(point: &[f64], r: &EvalResult, with_im: bool) -> Vec<Cell> {
    let mut row: Vec<Cell> = point.iter().map(|&v| v.into()).collect();
    row.push(r.value.re.into());
    if with_im {
        row.push(r.value.im.into());
    }
    row.push(r.abs_err.into());
    row.push(r.method.to_string().into());
    row
}

fn plain_row(point: &[f64], value: f64, method: &str) -> Vec<Cell> {
    let mut row: Vec<Cell> = point.iter().map(|&v| v.into()).collect();
    row.extend([value.into(), f64::NAN.into(), method.into()]);
    row
}

fn correlation(args: &EvalArgs, x: &[f64], quad: &QuadratureSpec) -> CliResult<EvalResult> {
    let c = &args.common;
    let q = if c.unchecked {
        CorrelationQuery::unchecked(c.pair()?, x.to_vec())
    } else {
        CorrelationQuery::new(&c.params()?, x.to_vec())
    }
    .map_err(|e| CliError::Config(format!("{e}")))?;
    match args.route {
        Route::Fb if !c.unchecked && x.len() == 1 => rho_1_closed(&c.params()?, x[0]).map_err(numeric("rho_1_closed", x)),
        Route::Fb => rho_n_fb(&q).map_err(numeric("rho_n_fb", x)),
        Route::Integral => rho_n_integral(&q, quad).map_err(numeric("rho_n_integral", x)),
    }
}

fn par_rows<T, F>(items: &[T], f: F) -> CliResult<Vec<Vec<Cell>>>
where
    T: Sync,
    F: Fn(&T) -> CliResult<Vec<Cell>> + Sync + Send,
{
    items.par_iter().map(f).collect()
}

fn cmd_eval(args: &EvalArgs) -> CliResult<Table> {
    let c = &args.common;
    c.init_threads()?;
    if c.unchecked && !matches!(args.kind, EvalKind::Rho1 | EvalKind::RhoN) {
        return Err(CliError::Config("--unchecked applies to rho1 and rho_n only".into()));
    }
    let quad = c.quad(1e-10)?;
    let mut table;
    match args.kind {
        EvalKind::Rho1 => {
            let xs = args.axis()?;
            table = Table::new(columns(&["x"], &["value", "abs_err", "method"]));
            table.rows = par_rows(&xs, |&x| Ok(eval_row(&[x], &correlation(args, &[x], &quad)?, false)))?;
        }
        EvalKind::RhoN => {
            let ts = args.tuples(2)?;
            table = Table::new(tuple_columns("x", ts[0].len(), &["value", "abs_err", "method"]));
            table.rows = par_rows(&ts, |t| Ok(eval_row(t, &correlation(args, t, &quad)?, false)))?;
        }
        EvalKind::KernelK | EvalKind::KernelM => {
            let params = c.params()?;
            let xs = args.axis()?;
            let pts: Vec<[f64; 2]> = xs.iter().flat_map(|&x| xs.iter().map(move |&y| [x, y])).collect();
            let kernel_pt = |p: &[f64; 2]| KernelPoint::new(p[0], p[1]).map_err(|e| CliError::Config(format!("{e}")));
            if args.kind == EvalKind::KernelK {
                table = Table::new(columns(&["x", "y"], &["value", "abs_err", "method"]));
                table.rows = par_rows(&pts, |p| {
                    let v = whittaker_kernel(&params, kernel_pt(p)?).map_err(numeric("whittaker_kernel", p))?;
                    Ok(plain_row(p, v, "whittaker"))
                })?;
            } else {
                table = Table::new(columns(&["x", "y"], &["value", "value_im", "abs_err", "method"]));
                table.rows = par_rows(&pts, |p| {
                    let r = kernel_m(&params, kernel_pt(p)?, &quad).map_err(numeric("kernel_m", p))?;
                    Ok(eval_row(p, &r, true))
                })?;
            }
        }
        EvalKind::LiftedRho => {
            let params = c.params()?;
            let ts = args.tuples(2)?;
            table = Table::new(tuple_columns("x", ts[0].len(), &["value", "abs_err", "method"]));
            table.rows = par_rows(&ts, |t| {
                let d = lifted_rho_n(&params, t).map_err(numeric("lifted_rho_n", t))?;
                Ok(plain_row(t, d.value, "determinant"))
            })?;
        }
        EvalKind::AsymptK => {
            let params = c.params()?;
            let xs = args.axis()?;
            if let Some(bad) = xs.iter().find(|&&r| !(r > 0.0)) {
                return Err(CliError::Config(format!("ratios must be positive, got {bad}")));
            }
            table = Table::new(columns(&["x"], &["value", "abs_err", "method"]));
            table.rows = xs.iter().map(|&r| plain_row(&[r], asympt_kernel_k(&params, r), "closed_form")).collect();
        }
        EvalKind::Fb => {
            let (Some(a), Some(b), Some(cc)) = (&args.a, &args.b, args.c) else {
                return Err(CliError::Config("eval fb needs --a, --b and --c".into()));
            };
            let p = FBParams::real(&parse_list(a)?, &parse_list(b)?, cc).map_err(|e| CliError::Config(format!("{e}")))?;
            let ts = if p.m() == 1 && args.x.is_empty() {
                args.axis()?.into_iter().map(|y| vec![y]).collect()
            } else {
                args.tuples(p.m())?
            };
            if ts[0].len() != p.m() {
                return Err(CliError::Config(format!("F_B with {} variables needs {}-tuples", p.m(), p.m())));
            }
            table = Table::new(tuple_columns("y", p.m(), &["value", "value_im", "abs_err", "method"]));
            table.rows = par_rows(&ts, |y| Ok(eval_row(y, &fb_auto(&p, y).map_err(numeric("fb_auto", y))?, true)))?;
        }
    }
    Ok(table)
}

fn cmd_verify(args: &VerifyArgs) -> CliResult<bool> {
    let c = &args.common;
    c.init_threads()?;
    if c.unchecked {
        return Err(CliError::Config("verification needs admissible parameters".into()));
    }
    if let Some(t) = c.tol {
        if !(t >= 0.0) {
            return Err(CliError::Config(format!("invalid tolerance {t}")));
        }
    }
    let params = c.params()?;
    let suite = match args.suite {
        SuiteArg::Characters => Suite::Characters,
        SuiteArg::Normalization => Suite::Normalization,
        SuiteArg::Moments => Suite::Moments,
        SuiteArg::FbRoutes => Suite::FbRoutes,
        SuiteArg::KernelRoutes => Suite::KernelRoutes,
        SuiteArg::Lifting => Suite::Lifting,
        SuiteArg::Asymptotics => Suite::Asymptotics,
        SuiteArg::Convergence => Suite::Convergence,
        SuiteArg::All => Suite::All,
    };
    let cfg = HarnessConfig { characters_nmax: args.nmax, normalization_nmax: args.n, tol: c.tol, ..Default::default() };
    let reports = run_suite(suite, &params, &cfg);
    let text = match c.format {
        Format::Csv => reports_to_csv(&reports),
        Format::Json => reports_to_json(&reports),
    };
    c.write(&text)?;
    let failed = reports.iter().filter(|r| !r.pass).count();
    eprintln!("{} checks, {failed} failed", reports.len());
    Ok(failed == 0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Eval(args) => cmd_eval(args).and_then(|t| {
            let text = match args.common.format {
                Format::Csv => t.to_csv(),
                Format::Json => t.to_json(),
            };
            args.common.write(&text).map(|_| true)
        }),
        Command::Verify(args) => cmd_verify(args),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            let (CliError::Config(m) | CliError::Numeric(m)) = &e;
            eprintln!("error: {m}");
            ExitCode::from(e.code())
        }
    }
}
