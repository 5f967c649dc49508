//! `hyperpoisson`: evaluate, simulate and validate the hyperbolic half-space
//! Poisson kernel.

mod grid;
mod report;
mod validate;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hyperpoisson::analysis::{
    blowup_constant, boundary_blowup, boundary_linear, slope_rho_infinity, slope_x_infinity, SlopeFit, Thresholds,
};
use hyperpoisson::hyperbolic_bm::{char_fn_from, radial_density_from, shell_volume, simulate_exits, McConfig};
use hyperpoisson::kernel::{fourier_transform, sphere_area, Method, PoissonKernel};
use hyperpoisson::quad::{integrate, Tolerance};
use hyperpoisson::zeros::find_zeros;
use hyperpoisson::{Error, Geometry};
use rayon::prelude::*;

use grid::{Grid, List};
use report::{emit, records_table, Cell, Format, Status, Table};

#[derive(Parser)]
#[command(name = "hyperpoisson", version, about = "Poisson kernel of a half-space in hyperbolic space")]
struct Cli {
    /// Worker threads (default: HYPERPOISSON_THREADS, then all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the kernel at one radius or on a grid.
    Eval(EvalArgs),
    /// Run the property suite and report PASS/FAIL/SKIP per check.
    Validate(ValidateArgs),
    /// Simulate exit points and compare with the kernel.
    Mc(McArgs),
    /// Fit power laws in the asymptotic regimes.
    Asymptote(AsymptoteArgs),
    /// Print the zeros of the Macdonald function used by the weight.
    Zeros(ZerosArgs),
}

#[derive(Args)]
struct Output {
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// Output file, `-` for stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct EvalArgs {
    #[arg(long)]
    n: u32,
    #[arg(long, default_value_t = 1.0)]
    a: f64,
    #[arg(long)]
    x: f64,
    #[arg(long, conflicts_with = "rho_grid", required_unless_present = "rho_grid")]
    rho: Option<f64>,
    /// `lo:step:hi`, both ends included.
    #[arg(long)]
    rho_grid: Option<Grid>,
    /// representation, hankel, closed or boundary.
    #[arg(long)]
    method: Option<Method>,
    #[command(flatten)]
    out: Output,
}

#[derive(Args)]
struct ValidateArgs {
    #[arg(long, value_delimiter = ',', default_value = "3,4,5,6")]
    dims: Vec<u32>,
    /// Comma-separated groups. `global-limit` only runs when named here.
    #[arg(long, value_delimiter = ',')]
    only: Vec<String>,
    /// Also write the records as JSON to this file.
    #[arg(long)]
    json: Option<PathBuf>,
    #[command(flatten)]
    out: Output,
}

#[derive(Args)]
struct McArgs {
    #[arg(long)]
    n: u32,
    #[arg(long, default_value_t = 1.0)]
    a: f64,
    #[arg(long)]
    x: f64,
    #[arg(long, default_value_t = 100_000)]
    paths: usize,
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = 1e-4)]
    dt: f64,
    /// Turn off the Brownian bridge crossing test.
    #[arg(long)]
    no_bridge: bool,
    /// Frequencies `|u|` for the characteristic function.
    #[arg(long, default_value = "0.5,1,2")]
    u: List,
    /// Report a radial histogram instead of the characteristic function.
    #[arg(long)]
    hist: bool,
    #[arg(long, default_value_t = 20)]
    bins: usize,
    #[arg(long, default_value_t = 6.0)]
    rmax: f64,
    #[command(flatten)]
    out: Output,
}

#[derive(Clone, Copy, ValueEnum)]
enum Regime {
    /// ρ → ∞ at fixed x
    Rho,
    /// x → ∞ at fixed ρ
    X,
    /// x → a at ρ = 0
    Blowup,
    /// x → a at ρ > 0
    Linear,
}

#[derive(Args)]
struct AsymptoteArgs {
    #[arg(long, value_enum)]
    regime: Regime,
    #[arg(long)]
    n: u32,
    #[arg(long, default_value_t = 1.0)]
    a: f64,
    #[arg(long, default_value_t = 2.0)]
    x: f64,
    #[arg(long, default_value_t = 1.0)]
    rho: f64,
    #[command(flatten)]
    out: Output,
}

#[derive(Args)]
struct ZerosArgs {
    #[arg(long)]
    n: u32,
    #[command(flatten)]
    out: Output,
}

enum Failure {
    Usage(String),
    Numeric(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidArgument(_) => Failure::Usage(e.to_string()),
            _ => Failure::Numeric(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Numeric(e.to_string())
    }
}

type Run = Result<bool, Failure>;

fn finish(table: &Table, out: &Output) -> Result<(), Failure> {
    Ok(emit(&table.render(out.format), out.output.as_deref())?)
}

fn eval(args: EvalArgs) -> Run {
    let g = Geometry::new(args.n, args.a, args.x)?;
    let k = PoissonKernel::new(g)?;
    let rhos = match (&args.rho_grid, args.rho) {
        (Some(grid), _) => grid.0.clone(),
        (None, Some(r)) => vec![r],
        (None, None) => unreachable!("clap requires one of --rho, --rho-grid"),
    };
    let values = rhos.par_iter().map(|&r| k.eval(r, args.method)).collect::<Result<Vec<_>, _>>()?;
    let mut t = Table::new(&["n", "a", "x", "rho", "value", "method", "err_estimate"]);
    for (r, v) in rhos.iter().zip(values) {
        t.push(vec![
            g.n.into(),
            g.a.into(),
            g.x.into(),
            (*r).into(),
            v.value.into(),
            v.method.name().into(),
            v.err_estimate.into(),
        ]);
    }
    finish(&t, &args.out)?;
    Ok(true)
}

fn run_validate(args: ValidateArgs) -> Run {
    let groups: Vec<&str> = if args.only.is_empty() {
        validate::DEFAULT_GROUPS.to_vec()
    } else {
        for g in &args.only {
            if !validate::GROUPS.contains(&g.as_str()) {
                return Err(Failure::Usage(format!(
                    "unknown group {g:?}; expected one of {}",
                    validate::GROUPS.join(", ")
                )));
            }
        }
        args.only.iter().map(String::as_str).collect()
    };
    if let Some(&n) = args.dims.iter().find(|&&n| n < 3) {
        return Err(Failure::Usage(format!("validation needs n >= 3, got {n}")));
    }
    let records = validate::run(&args.dims, &groups, Thresholds::default());
    if let Some(path) = &args.json {
        let mut s = serde_json::to_string_pretty(&records).expect("records serialize");
        s.push('\n');
        std::fs::write(path, s)?;
    }
    finish(&records_table(&records), &args.out)?;
    Ok(records.iter().all(|r| r.status != Status::Fail))
}

fn mc(args: McArgs) -> Run {
    let g = Geometry::new(args.n, args.a, args.x)?;
    let cfg = McConfig::new(g, args.paths, args.seed).with_dt(args.dt).with_bridge_correction(!args.no_bridge);
    cfg.validate()?;
    let samples = simulate_exits(&cfg)?;
    let mut worst: f64 = 0.0;
    let t = if args.hist {
        if args.bins == 0 || !(args.rmax > 0.0) {
            return Err(Failure::Usage("--bins and --rmax must be positive".into()));
        }
        let k = PoissonKernel::new(g)?;
        let w = sphere_area(g.n);
        let edges: Vec<f64> = (0..=args.bins).map(|i| args.rmax * i as f64 / args.bins as f64).collect();
        let est = radial_density_from(&samples, g.n, &edges)?;
        let mut t = Table::new(&["lo", "hi", "estimate", "std_err", "reference", "z"]);
        for (e, b) in est.iter().zip(edges.windows(2)) {
            let mass = integrate(
                |r: f64| k.eval(r, None).map_or(f64::NAN, |p| p.value) * w * r.powi(g.n as i32 - 2),
                b[0],
                b[1],
                Tolerance::rel(1e-10),
            )
            .checked("bin mass")?;
            let reference = mass / shell_volume(g.n, b[0], b[1]);
            let z = e.z_score(reference);
            worst = worst.max(z.abs());
            t.push(vec![b[0].into(), b[1].into(), e.value.into(), e.std_err.into(), reference.into(), z.into()]);
        }
        t
    } else {
        let mut t = Table::new(&["u", "estimate", "std_err", "reference", "z"]);
        for &u in &args.u.0 {
            let e = char_fn_from(&samples, u);
            let reference = fourier_transform(&g, u)?;
            let z = e.z_score(reference);
            worst = worst.max(z.abs());
            t.push(vec![u.into(), e.value.into(), e.std_err.into(), reference.into(), z.into()]);
        }
        t
    };
    finish(&t, &args.out)?;
    Ok(worst <= 4.0)
}

fn fit_row(t: &mut Table, regime: &str, n: u32, fit: &SlopeFit, target: f64, constant: Option<f64>, pass: bool) {
    let opt = |v: Option<f64>| v.map_or(Cell::Empty, Cell::Num);
    t.push(vec![
        regime.into(),
        n.into(),
        fit.exponent.into(),
        target.into(),
        fit.r_squared.into(),
        fit.window.0.into(),
        fit.window.1.into(),
        opt(fit.constant),
        opt(constant),
        (if pass { "PASS" } else { "FAIL" }).into(),
    ]);
}

fn asymptote(args: AsymptoteArgs) -> Run {
    let th = Thresholds::default();
    let n = args.n;
    let m = n as f64 - 1.0;
    let header = ["regime", "n", "exponent", "target", "r_squared", "lo", "hi", "constant", "constant_ref", "status"];
    let mut t = Table::new(&header);
    let pass = match args.regime {
        Regime::Rho => {
            let fit = slope_rho_infinity(&Geometry::new(n, args.a, args.x)?, &th)?;
            let pass = fit.passes(-2.0 * m, th.exponent_rel, &th);
            fit_row(&mut t, "rho", n, &fit, -2.0 * m, None, pass);
            pass
        }
        Regime::X => {
            let fit = slope_x_infinity(&Geometry::new(n, args.a, args.x)?, args.rho, Method::Representation, &th)?;
            let pass = fit.passes(-m, th.exponent_rel, &th);
            fit_row(&mut t, "x", n, &fit, -m, None, pass);
            pass
        }
        Regime::Blowup => {
            let fit = boundary_blowup(args.a, n, &th)?;
            let c = blowup_constant(n);
            let pass = fit.passes(-m, th.exponent_rel, &th)
                && fit.constant.is_some_and(|k| (k - c).abs() <= th.blowup_rel * c);
            fit_row(&mut t, "blowup", n, &fit, -m, Some(c), pass);
            pass
        }
        Regime::Linear => {
            let r = boundary_linear(args.a, n, args.rho, &th)?;
            t = Table::new(&["lambda", "ratio", "limit"]);
            for (lam, ratio) in &r.samples {
                t.push(vec![(*lam).into(), (*ratio).into(), r.limit.into()]);
            }
            r.pass
        }
    };
    finish(&t, &args.out)?;
    Ok(pass)
}

fn zeros(args: ZerosArgs) -> Run {
    let z = find_zeros(args.n)?;
    let mut t = Table::new(&["n", "k", "re", "im", "residual"]);
    for (k, c) in z.zeros.iter().enumerate() {
        t.push(vec![z.n.into(), (k + 1).into(), c.re.into(), c.im.into(), z.residual.into()]);
    }
    finish(&t, &args.out)?;
    Ok(true)
}

fn threads(cli: Option<usize>) -> Result<Option<usize>, Failure> {
    if cli.is_some() {
        return Ok(cli);
    }
    match std::env::var("HYPERPOISSON_THREADS") {
        Ok(s) => s
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| Failure::Usage(format!("HYPERPOISSON_THREADS={s:?} is not a thread count"))),
        Err(_) => Ok(None),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = threads(cli.threads).and_then(|n| {
        if let Some(n) = n {
            if n == 0 {
                return Err(Failure::Usage("thread count must be positive".into()));
            }
            rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global()
                .map_err(|e| Failure::Numeric(e.to_string()))?;
        }
        match cli.command {
            Command::Eval(a) => eval(a),
            Command::Validate(a) => run_validate(a),
            Command::Mc(a) => mc(a),
            Command::Asymptote(a) => asymptote(a),
            Command::Zeros(a) => zeros(a),
        }
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Numeric(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}
