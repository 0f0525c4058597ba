//! Batch driver for the `plateau` binary. [`run`] parses arguments, executes
//! one subcommand and maps failures onto exit codes.

pub mod config;
pub mod output;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use plateau_core::exact::{
    curvature_bounds, gradient_bound_m, radial_profile_derivative, radial_solution, sup_bound_u,
};
use plateau_core::regularization::validate_family;
use plateau_core::solver::{
    continuation_with, default_tol, triangulate, Discretization, DomainSpec, EpsSchedule, Mesh,
    ScalarField, Shape, SolveReport, SolverOptions,
};
use plateau_core::viscosity::{residual_field, BranchStats, ResidualForm, ResidualReport, DEFAULT_DELTA};
use plateau_core::{Error, PotentialModel, RegularizedPotential};

use config::{load, SolveConfig, SweepConfig};
use output::{num, write_json, write_text};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("numeric failure: {0}")]
    Numeric(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io(_) => EXIT_CONFIG,
            CliError::Numeric(_) => EXIT_NUMERIC,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParameter(_) | Error::Mesh(_) | Error::Contract(_) => CliError::Config(e.to_string()),
            _ => CliError::Numeric(e.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "plateau", version, about = "Regularized solves and residual checks for degenerate energies")]
struct Cli {
    /// Worker threads for element assembly (default: all cores).
    #[arg(long, global = true, env = "PLATEAU_THREADS")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the eps-continuation on a triangulated domain.
    Solve(SolveArgs),
    /// Radial solution on a ball and its bounds.
    Oracle(OracleArgs),
    /// A-priori gradient and sup bounds.
    Bounds(BoundsArgs),
    /// Pointwise residuals of a solved field.
    Residual(ResidualArgs),
    /// Exponents and limit checks of the regularized family.
    RegularizeTable(TableArgs),
    /// Solve on several meshes and tabulate errors.
    ConvergenceStudy(StudyArgs),
}

#[derive(Debug, Args)]
struct SolveArgs {
    #[arg(long)]
    config: PathBuf,
    /// Force deterministic reductions regardless of the config.
    #[arg(long)]
    deterministic: bool,
    /// Also write field.dat, a gnuplot grid dump.
    #[arg(long)]
    gnuplot: bool,
}

#[derive(Debug, Args)]
struct OracleArgs {
    #[arg(long, default_value = "eikonal")]
    potential: String,
    #[arg(long = "N", default_value_t = 2)]
    n: usize,
    #[arg(long = "R", default_value_t = 1.0)]
    r: f64,
    /// Number of profile samples.
    #[arg(long, default_value_t = 101)]
    points: usize,
    /// Write the profile CSV here instead of stderr.
    #[arg(long)]
    profile: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct BoundsArgs {
    #[arg(long, default_value = "eikonal")]
    potential: String,
    #[arg(long = "N", default_value_t = 2)]
    n: usize,
    #[arg(long)]
    rho: f64,
    #[arg(long = "Rstar")]
    r_star: f64,
    /// Minimum boundary mean curvature, if positive.
    #[arg(long = "Hstar")]
    h_star: Option<f64>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormArg {
    Fn,
    C2,
    Ab,
    Astar,
}

#[derive(Debug, Args)]
struct ResidualArgs {
    #[arg(long)]
    config: PathBuf,
    /// Field to check (default: u.csv in the config's run directory).
    #[arg(long)]
    u: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "ab")]
    form: FormArg,
    #[arg(long = "a-star", default_value_t = 1.0)]
    a_star: f64,
    /// Regularization for `--form fn` (default: last eps of the schedule).
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_DELTA)]
    delta: f64,
    /// Output directory (default: next to the field).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct TableArgs {
    #[arg(long, default_value = "eikonal")]
    potential: String,
    #[arg(long, value_delimiter = ',', default_value = "0.2,0.1,0.05,0.025")]
    eps: Vec<f64>,
    #[arg(long = "sigma-tilde")]
    sigma_tilde: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct StudyArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    deterministic: bool,
}

fn model(name: &str) -> Result<PotentialModel, CliError> {
    PotentialModel::from_name(name).map_err(|e| {
        CliError::Config(format!(
            "{e}; expected \"eikonal\" or \"congestion:q=<value>\""
        ))
    })
}

fn schedule_values(s: &EpsSchedule) -> Vec<f64> {
    match s {
        EpsSchedule::List(v) => v.clone(),
        EpsSchedule::Auto(_) => EpsSchedule::auto_values(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundsSummary {
    #[serde(rename = "M")]
    pub m: f64,
    pub sup_u: f64,
    pub grad_bound_curvature: Option<f64>,
    pub sup_bound_curvature: Option<f64>,
}

fn bounds_for(m: &PotentialModel, n: usize, rho: f64, r_star: f64, h_star: Option<f64>) -> Result<BoundsSummary, CliError> {
    let big_m = gradient_bound_m(m, n, rho, r_star)?;
    let curvature = h_star.map(|h| curvature_bounds(m, n, h)).transpose()?;
    Ok(BoundsSummary {
        m: big_m,
        sup_u: sup_bound_u(m, n, r_star, big_m)?,
        grad_bound_curvature: curvature.map(|c| c.grad_bound),
        sup_bound_curvature: curvature.map(|c| c.sup_bound),
    })
}

/// Bounds for a planar domain: `ρ` and `H*` from the domain, `R*` its
/// diameter.
pub fn domain_bounds(m: &PotentialModel, d: &DomainSpec) -> Result<BoundsSummary, CliError> {
    bounds_for(m, 2, d.rho(), d.diameter(), d.curvature_min())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
struct SolveOutput<'a> {
    schema: u32,
    potential: String,
    domain: &'a DomainSpec,
    eps_schedule: Vec<f64>,
    h_target: f64,
    seed: Option<u64>,
    deterministic: bool,
    solve: SolveReport,
    bounds: BoundsSummary,
}

/// Zero field, or a seeded uniform `[0, 1)` field with zero boundary values.
pub fn initial_field(mesh: &Mesh, seed: Option<u64>) -> ScalarField {
    match seed {
        None => ScalarField::zeros(mesh),
        Some(seed) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            ScalarField::from_fn(mesh, |_| rng.gen::<f64>()).with_boundary_zero(mesh)
        }
    }
}

fn cmd_solve(args: &SolveArgs) -> Result<PathBuf, CliError> {
    let loaded = load::<SolveConfig>(&args.config)?;
    let cfg = &loaded.config;
    let m = model(&cfg.potential)?;
    let mesh = triangulate(&cfg.domain, cfg.h)?;
    let mut opts = SolverOptions::new(cfg.tol.unwrap_or_else(|| default_tol(&cfg.domain)));
    opts.deterministic = cfg.deterministic || args.deterministic;
    let init = initial_field(&mesh, cfg.seed);
    let (u, report) = continuation_with(&m, &mesh, &cfg.eps_schedule, &opts, Some(init))?;
    let mut used = schedule_values(&cfg.eps_schedule);
    used.truncate(report.history.len());

    let dir = loaded.run_dir();
    std::fs::create_dir_all(&dir).map_err(|e| CliError::Io(format!("cannot create {}: {e}", dir.display())))?;
    let grads = Discretization::new(&mesh).vertex_gradients(&u);
    write_text(&dir.join("u.csv"), &output::field_csv(&mesh, &u, &grads))?;
    let out = SolveOutput {
        schema: config::SCHEMA_VERSION,
        potential: m.label(),
        domain: &cfg.domain,
        eps_schedule: used,
        h_target: cfg.h,
        seed: cfg.seed,
        deterministic: opts.deterministic,
        solve: report,
        bounds: domain_bounds(&m, &cfg.domain)?,
    };
    write_json(&dir.join("report.json"), &out)?;
    if args.gnuplot {
        write_text(&dir.join("field.dat"), &output::gnuplot_grid(&mesh, &u, 101))?;
    }
    println!("{}", dir.display());
    Ok(dir)
}

#[derive(Debug, Serialize)]
struct OracleOutput {
    u0: f64,
    #[serde(flatten)]
    bounds: BoundsSummary,
}

fn cmd_oracle(args: &OracleArgs) -> Result<(), CliError> {
    let m = model(&args.potential)?;
    if args.points < 2 {
        return Err(CliError::Config("--points must be at least 2".to_string()));
    }
    let u0 = radial_solution(&m, args.n, args.r, 0.0)?;
    let out = OracleOutput {
        u0,
        bounds: bounds_for(&m, args.n, args.r, 2.0 * args.r, Some(1.0 / args.r))?,
    };
    let mut csv = String::from("r,u,du\n");
    for i in 0..args.points {
        let r = args.r * i as f64 / (args.points - 1) as f64;
        let r = r.min(args.r);
        let _ = writeln!(
            csv,
            "{},{},{}",
            num(r),
            num(radial_solution(&m, args.n, args.r, r)?),
            num(radial_profile_derivative(&m, args.n, r)?)
        );
    }
    match &args.profile {
        Some(p) => write_text(p, &csv)?,
        None => eprint!("{csv}"),
    }
    println!("{}", output::to_json(&out));
    Ok(())
}

fn cmd_bounds(args: &BoundsArgs) -> Result<(), CliError> {
    let m = model(&args.potential)?;
    let out = bounds_for(&m, args.n, args.rho, args.r_star, args.h_star)?;
    println!("{}", output::to_json(&out));
    Ok(())
}

/// Rebuilds the config's mesh and checks that `path` holds a field on it.
fn field_on_config_mesh(mesh: &Mesh, path: &Path) -> Result<ScalarField, CliError> {
    let rows = output::read_field_csv(path)?;
    if rows.len() != mesh.n_vertices() {
        return Err(CliError::Config(format!(
            "{} has {} rows but the config's mesh has {} vertices; rerun solve with this config",
            path.display(),
            rows.len(),
            mesh.n_vertices()
        )));
    }
    for (i, (row, p)) in rows.iter().zip(&mesh.vertices).enumerate() {
        if (row[0] - p[0]).abs() > 1e-12 || (row[1] - p[1]).abs() > 1e-12 {
            return Err(CliError::Config(format!(
                "{} row {} is at ({}, {}), mesh vertex is at ({}, {}); field and config do not match",
                path.display(),
                i + 1,
                row[0],
                row[1],
                p[0],
                p[1]
            )));
        }
    }
    Ok(ScalarField {
        values: rows.iter().map(|r| r[2]).collect(),
    })
}

#[derive(Debug, Serialize)]
struct ResidualSummary {
    form: String,
    delta: f64,
    samples: usize,
    skipped: usize,
    pde_active: BranchStats,
    threshold_active: BranchStats,
    sub_threshold: BranchStats,
    sub_fraction: f64,
}

impl From<&ResidualReport> for ResidualSummary {
    fn from(r: &ResidualReport) -> Self {
        Self {
            form: r.form.clone(),
            delta: r.delta,
            samples: r.points.len(),
            skipped: r.skipped,
            pde_active: r.pde_active.clone(),
            threshold_active: r.threshold_active.clone(),
            sub_threshold: r.sub_threshold.clone(),
            sub_fraction: r.sub_fraction,
        }
    }
}

fn cmd_residual(args: &ResidualArgs) -> Result<PathBuf, CliError> {
    let loaded = load::<SolveConfig>(&args.config)?;
    let cfg = &loaded.config;
    let m = model(&cfg.potential)?;
    let mesh = triangulate(&cfg.domain, cfg.h)?;
    let u_path = args.u.clone().unwrap_or_else(|| loaded.run_dir().join("u.csv"));
    let field = field_on_config_mesh(&mesh, &u_path)?;
    let form = match args.form {
        FormArg::Fn => {
            let eps = match args.eps {
                Some(e) => e,
                None => *schedule_values(&cfg.eps_schedule).last().expect("validated schedule"),
            };
            ResidualForm::Fn(RegularizedPotential::new(m.clone(), eps)?)
        }
        FormArg::C2 => ResidualForm::C2,
        FormArg::Ab => ResidualForm::Ab,
        FormArg::Astar => ResidualForm::Astar(args.a_star),
    };
    let report = residual_field(&m, &mesh, &field, &form, args.delta)?;
    let dir = match &args.out {
        Some(d) => d.clone(),
        None => u_path.parent().map(Path::to_path_buf).unwrap_or_else(|| PathBuf::from(".")),
    };
    std::fs::create_dir_all(&dir).map_err(|e| CliError::Io(format!("cannot create {}: {e}", dir.display())))?;
    let mut csv = String::from("x,y,grad_norm,branch,residual\n");
    for p in &report.points {
        let _ = writeln!(csv, "{},{},{},{},{}", num(p.x), num(p.y), num(p.grad_norm), p.branch.as_str(), num(p.residual));
    }
    write_text(&dir.join("residual.csv"), &csv)?;
    let summary = ResidualSummary::from(&report);
    write_json(&dir.join("residual_summary.json"), &summary)?;
    println!("{}", output::to_json(&summary));
    Ok(dir)
}

fn cmd_table(args: &TableArgs) -> Result<(), CliError> {
    let m = model(&args.potential)?;
    let sigma_tilde = args.sigma_tilde.unwrap_or(m.sigma() + 1.0);
    let report = validate_family(&m, &args.eps, sigma_tilde)?;
    let mut csv = String::from("eps,p_eps,q_eps,omega_eps,sup_a_gap,a_gap_bound,sup_limit1,sup_limit2\n");
    for e in &report.entries {
        let _ = writeln!(
            csv,
            "{},{},{},{},{},{},{},{}",
            num(e.eps),
            num(e.p_eps),
            num(e.q_eps),
            num(e.omega_eps),
            num(e.sup_a_gap),
            num(e.a_gap_bound),
            num(e.sup_limit1),
            num(e.sup_limit2)
        );
    }
    match &args.out {
        Some(p) => write_text(p, &csv)?,
        None => print!("{csv}"),
    }
    for v in &report.violations {
        eprintln!("violation: eps={} s={} kind={}", v.eps, v.s, serde_json::to_string(&v.kind).unwrap_or_default());
    }
    Ok(())
}

/// One row of the convergence table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StudyRow {
    pub h: f64,
    pub eps: f64,
    pub sup_error_vs_oracle: Option<f64>,
    pub max_grad: f64,
    pub bound_slack: f64,
    pub residual_median: Option<f64>,
}

fn opt_num(x: Option<f64>) -> String {
    x.map_or_else(|| "nan".to_string(), num)
}

fn cmd_study(args: &StudyArgs) -> Result<PathBuf, CliError> {
    let loaded = load::<SweepConfig>(&args.config)?;
    let cfg = &loaded.config;
    let m = model(&cfg.potential)?;
    let mut opts = SolverOptions::new(cfg.tol.unwrap_or_else(|| default_tol(&cfg.domain)));
    opts.deterministic = cfg.deterministic || args.deterministic;
    let bounds = domain_bounds(&m, &cfg.domain)?;
    let grad_bound = bounds.grad_bound_curvature.unwrap_or(bounds.m);
    let delta = cfg.delta.unwrap_or(DEFAULT_DELTA);
    let mut rows = Vec::new();
    for &h in &cfg.hs {
        let mesh = triangulate(&cfg.domain, h)?;
        let (u, report) = continuation_with(&m, &mesh, &cfg.eps_schedule, &opts, None)?;
        let sup_error = match cfg.domain.shape {
            Shape::Disk { radius } => {
                let mut worst = 0.0f64;
                for (p, v) in mesh.vertices.iter().zip(&u.values) {
                    let r = p[0].hypot(p[1]).min(radius);
                    worst = worst.max((v - radial_solution(&m, 2, radius, r)?).abs());
                }
                Some(worst)
            }
            _ => None,
        };
        let residual = residual_field(&m, &mesh, &u, &ResidualForm::Ab, delta)?;
        rows.push(StudyRow {
            h,
            eps: report.history.last().map_or(f64::NAN, |s| s.eps),
            sup_error_vs_oracle: sup_error,
            max_grad: report.max_grad,
            bound_slack: grad_bound - report.max_grad,
            residual_median: residual.pde_active.median_abs,
        });
    }
    let mut csv = String::from("h,eps,sup_error_vs_oracle,max_grad,bound_slack,residual_median\n");
    for r in &rows {
        let _ = writeln!(
            csv,
            "{},{},{},{},{},{}",
            num(r.h),
            num(r.eps),
            opt_num(r.sup_error_vs_oracle),
            num(r.max_grad),
            num(r.bound_slack),
            opt_num(r.residual_median)
        );
    }
    let dir = loaded.run_dir();
    std::fs::create_dir_all(&dir).map_err(|e| CliError::Io(format!("cannot create {}: {e}", dir.display())))?;
    write_text(&dir.join("convergence.csv"), &csv)?;
    print!("{csv}");
    Ok(dir)
}

fn dispatch(cmd: &Command) -> Result<(), CliError> {
    match cmd {
        Command::Solve(a) => cmd_solve(a).map(|_| ()),
        Command::Oracle(a) => cmd_oracle(a),
        Command::Bounds(a) => cmd_bounds(a),
        Command::Residual(a) => cmd_residual(a).map(|_| ()),
        Command::RegularizeTable(a) => cmd_table(a),
        Command::ConvergenceStudy(a) => cmd_study(a).map(|_| ()),
    }
}

/// Runs the command line `args` (including the program name) and returns
/// the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("config error: --threads must be at least 1");
            return EXIT_CONFIG;
        }
        pool = pool.num_threads(n);
    }
    let pool = match pool.build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("config error: cannot start thread pool: {e}");
            return EXIT_CONFIG;
        }
    };
    match pool.install(|| dispatch(&cli.command)) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("{e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn core_errors_map_to_exit_codes() {
        assert_eq!(CliError::from(Error::InvalidParameter("x".into())).exit_code(), EXIT_CONFIG);
        assert_eq!(CliError::from(Error::Mesh("x".into())).exit_code(), EXIT_CONFIG);
        assert_eq!(CliError::Io("x".into()).exit_code(), EXIT_CONFIG);
        assert_eq!(CliError::Numeric("x".into()).exit_code(), EXIT_NUMERIC);
    }

    #[test]
    fn seeded_start_is_reproducible() {
        let mesh = triangulate(&DomainSpec::disk(1.0), 0.25).unwrap();
        let a = initial_field(&mesh, Some(5));
        assert_eq!(a, initial_field(&mesh, Some(5)));
        assert!(mesh.boundary.iter().zip(&a.values).all(|(&b, &v)| !b || v == 0.0));
    }
}
