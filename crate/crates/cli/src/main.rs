mod input;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::Result;
use clap::{Parser, Subcommand, ValueEnum};
use fracvar::closed_forms;
use fracvar::constants;
use fracvar::fields::HalfSpace;
use fracvar::operators::{self, OperatorEval};
use fracvar::quadrature::QuadSpec;
use fracvar::suites::{self, SuiteId};

use input::{usage, Usage};

#[derive(Parser)]
#[command(name = "fracvar", version, about = "Fractional gradients, divergences and their verification suites")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print n,alpha,mu,nu(1-alpha),c_half,gamma_spector,c_max,omega_n as one CSV row.
    Constants {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        alpha: f64,
        /// Print the column names first.
        #[arg(long)]
        header: bool,
    },
    /// Evaluate an operator at a list of points.
    Eval(EvalArgs),
    /// Evaluate a closed form.
    Oracle(OracleArgs),
    /// Run verification suites and write the CSV report.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Op {
    Grad,
    Div,
    Riesz,
    Laplacian,
    Nlgrad,
}

#[derive(clap::Args)]
struct EvalArgs {
    #[arg(long, value_enum)]
    op: Op,
    /// Gradient order. For riesz and laplacian the order defaults to 1 - alpha.
    #[arg(long)]
    alpha: Option<f64>,
    /// Order of riesz (s) or laplacian (beta), overriding --alpha.
    #[arg(long)]
    order: Option<f64>,
    /// Field descriptor as JSON, or @file.json. A vector field for div.
    #[arg(long)]
    field: String,
    /// Second field of nlgrad.
    #[arg(long)]
    field2: Option<String>,
    /// Points as CSV (one per line or `;`-separated), or @file.csv.
    #[arg(long, allow_hyphen_values = true)]
    points: String,
    /// JSON configuration; only its "quad" key is used here.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum OracleName {
    Halfspace,
    Hyperplane,
    GammaRadial,
    Interval,
    Weight,
    FAlpha,
}

#[derive(clap::Args)]
struct OracleArgs {
    #[arg(long, value_enum)]
    name: OracleName,
    #[arg(long)]
    alpha: f64,
    /// Dimension for gamma-radial (all of 2..=5 when absent) and weight (default 1).
    #[arg(long)]
    n: Option<usize>,
    /// Half-space normal, comma-separated; normalised before use.
    #[arg(long, allow_hyphen_values = true)]
    nu: Option<String>,
    /// Point on the hyperplane, comma-separated; the origin when absent.
    #[arg(long, allow_hyphen_values = true)]
    x0: Option<String>,
    /// Evaluation points (t values for weight), as for eval.
    #[arg(long, allow_hyphen_values = true)]
    points: Option<String>,
    /// Radius of the weight.
    #[arg(long)]
    r: Option<f64>,
}

#[derive(clap::Args)]
struct VerifyArgs {
    /// A suite name or `all`.
    #[arg(long)]
    suite: String,
    /// Orders to check, comma-separated; each suite's default grid when absent.
    #[arg(long, value_delimiter = ',')]
    alpha: Vec<f64>,
    #[arg(long)]
    config: Option<PathBuf>,
    /// Write the report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match input::thread_cap().and_then(|t| {
        fracvar::par::init_threads(t);
        dispatch(cli.command)
    }) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("fracvar: {e:#}");
            exit_code_for(&e)
        }
    };
    ExitCode::from(code)
}

fn exit_code_for(e: &anyhow::Error) -> u8 {
    if e.downcast_ref::<Usage>().is_some() {
        return 2;
    }
    match e.downcast_ref::<fracvar::Error>() {
        Some(fracvar::Error::BudgetExceeded(_)) => 3,
        Some(err) if is_input_error(err) => 2,
        _ => 1,
    }
}

/// Errors that say the request itself was malformed.
fn is_input_error(e: &fracvar::Error) -> bool {
    use fracvar::Error::*;
    matches!(e, OutOfRange { .. } | Dimension(_) | Descriptor(_) | Invalid(_) | PoleArgument(_))
}

fn dispatch(cmd: Command) -> Result<u8> {
    match cmd {
        Command::Constants { n, alpha, header } => constants_row(n, alpha, header),
        Command::Eval(a) => eval(a),
        Command::Oracle(a) => oracle(a),
        Command::Verify(a) => verify(a),
    }
}

fn num(x: f64) -> String {
    format!("{x:?}")
}

fn join(xs: &[f64]) -> String {
    xs.iter().map(|&x| num(x)).collect::<Vec<_>>().join(",")
}

fn columns(prefix: &str, count: usize) -> String {
    if count == 1 {
        prefix.to_string()
    } else {
        (1..=count).map(|i| format!("{prefix}{i}")).collect::<Vec<_>>().join(",")
    }
}

fn constants_row(n: usize, alpha: f64, header: bool) -> Result<u8> {
    let h = constants::hardy_constants(n, alpha)?;
    let row = [
        constants::mu(n, alpha)?,
        constants::nu(n, 1.0 - alpha)?,
        h.c_half,
        h.gamma_spector,
        h.c_max,
        constants::ball_volume(n)?,
    ];
    if header {
        println!("n,alpha,mu,nu(1-alpha),c_half,gamma_spector,c_max,omega_n");
    }
    println!("{n},{},{}", num(alpha), join(&row));
    Ok(0)
}

fn eval(a: EvalArgs) -> Result<u8> {
    let cfg = input::config(a.config.as_deref())?;
    let alpha = || a.alpha.map_or_else(|| usage("--alpha is required for this operator"), Ok);
    let order = match a.op {
        Op::Grad | Op::Div | Op::Nlgrad => {
            if a.order.is_some() {
                return usage("--order applies to riesz and laplacian only; use --alpha");
            }
            alpha()?
        }
        Op::Riesz | Op::Laplacian => match a.order {
            Some(o) => o,
            None => 1.0 - alpha()?,
        },
    };
    if a.field2.is_some() && !matches!(a.op, Op::Nlgrad) {
        return usage("--field2 applies to nlgrad only");
    }
    type Eval = Box<dyn Fn(&[f64]) -> fracvar::Result<OperatorEval> + Sync + Send>;
    let (dim, evaluate): (usize, Eval) = match a.op {
        Op::Div => {
            let phi = input::vector_field(&a.field)?;
            let spec = cfg.quad.unwrap_or(QuadSpec::for_dim(phi.dim()));
            (phi.dim(), Box::new(move |x| operators::frac_divergence(&phi, order, x, &spec)))
        }
        Op::Nlgrad => {
            let Some(g) = &a.field2 else {
                return usage("nlgrad needs --field2");
            };
            let (f, g) = (input::scalar_field(&a.field)?, input::scalar_field(g)?);
            let spec = cfg.quad.unwrap_or(QuadSpec::for_dim(f.dim()));
            (f.dim(), Box::new(move |x| operators::nl_gradient(&f, &g, order, x, &spec)))
        }
        op => {
            let f = input::scalar_field(&a.field)?;
            let dim = f.dim();
            let spec = cfg.quad.unwrap_or(QuadSpec::for_dim(dim));
            let eval: Eval = match op {
                Op::Grad => Box::new(move |x| operators::frac_gradient(&f, order, x, &spec)),
                Op::Riesz => Box::new(move |x| operators::riesz_potential(&f, order, x, &spec)),
                _ => Box::new(move |x| operators::frac_laplacian(&f, order, x, &spec)),
            };
            (dim, eval)
        }
    };
    let points = input::points(&a.points, dim)?;
    let width = match a.op {
        Op::Grad | Op::Nlgrad => dim,
        _ => 1,
    };
    let results = operators::batch(&points, |x| evaluate(x));

    let mut out = std::io::stdout().lock();
    writeln!(out, "{},{},err_estimate,evals", columns("x", dim), columns("value", width))?;
    let mut code = 0;
    for (x, r) in points.iter().zip(results) {
        match r {
            Ok(e) => writeln!(out, "{},{},{},{}", join(x), join(&e.value), num(e.quad.err_estimate), e.quad.evals_used)?,
            Err(err) => {
                // keep one output row per input point
                writeln!(out, "{},{},NaN,0", join(x), vec!["NaN"; width].join(","))?;
                eprintln!("fracvar: at {x:?}: {err}");
                let c = match err {
                    fracvar::Error::BudgetExceeded(_) => 3,
                    e if is_input_error(&e) => 2,
                    _ => 1,
                };
                code = code.max(c);
            }
        }
    }
    Ok(code)
}

fn oracle(a: OracleArgs) -> Result<u8> {
    let alpha = a.alpha;
    let need_points = |dim: usize| match &a.points {
        Some(p) => input::points(p, dim),
        None => usage("this oracle needs --points"),
    };
    let half_space = || -> Result<HalfSpace> {
        let Some(nu) = &a.nu else {
            return usage("this oracle needs --nu");
        };
        let nu = input::reals(nu)?;
        let norm = nu.iter().map(|v| v * v).sum::<f64>().sqrt();
        if !(norm > 0.0 && norm.is_finite()) {
            return usage("--nu must be a non-zero vector");
        }
        let nu: Vec<f64> = nu.iter().map(|v| v / norm).collect();
        let x0 = match &a.x0 {
            Some(x0) => input::reals(x0)?,
            None => vec![0.0; nu.len()],
        };
        Ok(HalfSpace::new(&nu, &x0)?)
    };
    let spec = QuadSpec::for_dim(1).with_tol(1e-12, 1e-15);
    let mut out = std::io::stdout().lock();
    match a.name {
        OracleName::Halfspace | OracleName::Hyperplane => {
            let h = half_space()?;
            let n = h.nu().len();
            let pts = need_points(n)?;
            let gradient = matches!(a.name, OracleName::Halfspace);
            let head = if gradient { columns("grad", n) } else { "riesz".into() };
            writeln!(out, "{},{head}", columns("x", n))?;
            for x in &pts {
                let v = if gradient {
                    closed_forms::half_space_gradient(alpha, &h, x)?
                } else {
                    vec![closed_forms::riesz_hyperplane(alpha, &h, x)?]
                };
                writeln!(out, "{},{}", join(x), join(&v))?;
            }
        }
        OracleName::GammaRadial => {
            let dims: Vec<usize> = a.n.map_or_else(|| (2..=5).collect(), |n| vec![n]);
            writeln!(out, "n,alpha,closed_form,quadrature,err_estimate")?;
            for n in dims {
                let exact = closed_forms::gamma_radial_integral(n, alpha)?;
                let q = closed_forms::gamma_radial_quadrature(n, alpha, &spec)?;
                writeln!(out, "{n},{},{},{},{}", num(alpha), num(exact), num(q.value), num(q.err_estimate))?;
            }
        }
        OracleName::Interval => {
            let v = closed_forms::interval_identities(alpha)?;
            writeln!(out, "alpha,hardy_integral,variation,hardy_constant")?;
            writeln!(out, "{},{}", num(alpha), join(&[v.hardy_integral, v.variation, v.hardy_constant]))?;
        }
        OracleName::Weight => {
            let n = a.n.unwrap_or(1);
            let Some(r) = a.r else {
                return usage("weight needs --r");
            };
            let ts = need_points(1)?;
            writeln!(out, "n,alpha,t,r,w")?;
            for t in ts {
                let w = closed_forms::weight_w(n, alpha, t[0], r, &spec)?;
                writeln!(out, "{n},{},{},{},{}", num(alpha), num(t[0]), num(r), num(w))?;
            }
        }
        OracleName::FAlpha => {
            let pts = need_points(1)?;
            writeln!(out, "x,f_alpha")?;
            for x in pts {
                writeln!(out, "{},{}", num(x[0]), num(closed_forms::f_alpha_closed(alpha, x[0])?))?;
            }
        }
    }
    Ok(0)
}

fn verify(a: VerifyArgs) -> Result<u8> {
    let ids: Vec<SuiteId> = if a.suite == "all" {
        SuiteId::ALL.to_vec()
    } else {
        match a.suite.parse() {
            Ok(id) => vec![id],
            Err(_) => {
                let names: Vec<&str> = SuiteId::ALL.iter().map(|s| s.name()).collect();
                return usage(format!("unknown suite `{}`; expected all or one of {}", a.suite, names.join(", ")));
            }
        }
    };
    let mut cfg = input::config(a.config.as_deref())?;
    if !a.alpha.is_empty() {
        cfg.alphas = Some(a.alpha);
        cfg.validate().map_err(|e| Usage(e.to_string()))?;
    }
    let start = Instant::now();
    let mut reports = Vec::new();
    for id in ids {
        let r = suites::run(id, &cfg);
        let passed = r.cases.iter().filter(|c| c.pass).count();
        eprintln!("{:<12} {passed:>3}/{:<3} passed  {:.2}s", id.name(), r.cases.len(), r.wall_time.as_secs_f64());
        for c in r.failures() {
            let why = c.error.as_deref().unwrap_or("outside tolerance");
            eprintln!("  FAIL {} alpha={} lhs={:e} rhs={:e}: {why}", c.case_id, c.alpha, c.lhs, c.rhs);
        }
        reports.push(r);
    }
    eprintln!("total {:.2}s", start.elapsed().as_secs_f64());
    let csv = suites::to_csv(&reports);
    match &a.out {
        Some(path) => std::fs::write(path, csv).map_err(|e| anyhow::anyhow!("cannot write {}: {e}", path.display()))?,
        None => std::io::stdout().lock().write_all(csv.as_bytes())?,
    }
    Ok(suites::exit_status(&reports) as u8)
}
