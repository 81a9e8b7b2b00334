//! zerodist: zeros of ζ and L(s, χ), explicit-formula models built from
//! them, and the limiting distributions of the normalized error terms.

mod config;
mod output;

use clap::{Args, Parser, Subcommand, ValueEnum};
use config::Ctx;
use output::{Cell, Emit, Report};
use std::path::PathBuf;
use std::process::ExitCode;
use zerodist::arith::{error_term_series, error_term_series_vec, ErrorTermKind, SieveConfig};
use zerodist::fourier::{invert_to_density, race_probability, GridSpec, InversionOptions};
use zerodist::limdist::{
    empirical_distribution, log_density, parseval_from_truth, residual_from_truth, subtract_residues,
    uniform_grid, BinSpec, Predicate,
};
use zerodist::model::{build_model, build_vector_model, check_conditions, check_conditions_with, ConditionOptions};
use zerodist::zeros::{
    format_zeros, j_minus_one, max_count_over_log, parse_zeros, unit_interval_counts, DatasetKind, ZeroDataset,
};
use zerodist::zeta::{find_zeros, find_zeros_mod, riemann_von_mangoldt, LFunction};
use zerodist::{CharFnSpec, Error, ErrorClass, Result};

const AFTER_HELP: &str = "\
Config file (--config): one `key = value` per line, `#` starts a comment.
Keys are the long flag names without the leading dashes, e.g. `Y = 18.42`,
`gamma-max = 1000`, `emit = json`. Flags override the file, the file
overrides built-in defaults. Unknown keys are an error.

Y-valued knobs accept a number or `log:<x>` for the natural log of x.

Exit codes: 0 success, 1 numerical-quality failure, 2 usage or parse
error, 3 capacity exceeded.";

#[derive(Parser, Debug)]
#[command(name = "zerodist", version, about, after_help = AFTER_HELP)]
struct Cli {
    /// key=value config file
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output format for tables
    #[arg(long, global = true, value_enum)]
    emit: Option<Emit>,
    /// Seed recorded in every output
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads (default: available parallelism)
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Output file (default: stdout)
    #[arg(long, short, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Group,
}

#[derive(Subcommand, Debug)]
enum Group {
    /// Zero datasets
    #[command(subcommand)]
    Zeros(ZerosCmd),
    /// Explicit-formula models
    #[command(subcommand)]
    Model(ModelCmd),
    /// Truth vs model, histograms, densities, races
    #[command(subcommand)]
    Dist(DistCmd),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum ZeroKind {
    Zeta,
    Dirichlet,
}

#[derive(Subcommand, Debug)]
enum ZerosCmd {
    /// Locate zeros on the critical line and attach derivatives
    Find {
        #[arg(long, value_enum)]
        kind: Option<ZeroKind>,
        /// Modulus (dirichlet)
        #[arg(long)]
        q: Option<u64>,
        #[arg(long = "gamma-max")]
        gamma_max: Option<f64>,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Validate a zero file and summarize it
    Import { file: PathBuf },
    /// Re-emit a zero file in canonical form
    Export { file: PathBuf },
    /// J₋₁(T) table and unit-interval counts
    Stats {
        file: PathBuf,
        #[arg(long = "j-minus-one")]
        j_minus_one: Option<f64>,
        /// Table rows
        #[arg(long)]
        rows: Option<usize>,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum ModelKind {
    Psi,
    Mobius,
    Liouville,
    MobiusAp,
    PiLi,
}

#[derive(Subcommand, Debug)]
enum ModelCmd {
    /// Coefficient model from a zero file
    Build {
        #[arg(long, value_enum)]
        kind: Option<ModelKind>,
        #[arg(long)]
        zeros: Option<PathBuf>,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        q: Option<u64>,
        #[arg(long)]
        a: Option<u64>,
    },
    /// Growth-condition fits and the θ verdict
    Conditions {
        model: PathBuf,
        #[arg(long)]
        kappa: Option<f64>,
        #[arg(long = "si-gamma")]
        si_gamma: Option<f64>,
        #[arg(long)]
        points: Option<usize>,
        #[arg(long)]
        window: Option<f64>,
    },
}

#[derive(Args, Debug)]
struct TruthArgs {
    #[arg(long)]
    model: Option<PathBuf>,
    /// Upper end of y (number or log:<x>)
    #[arg(long = "Y")]
    y: Option<String>,
    /// y-grid step
    #[arg(long)]
    step: Option<f64>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Route {
    Inversion,
    Empirical,
    Both,
}

#[derive(Subcommand, Debug)]
enum DistCmd {
    /// rms and max of truth − model at each truncation X
    Residual {
        #[command(flatten)]
        t: TruthArgs,
        /// Comma-separated truncation heights
        #[arg(long = "X")]
        x: Option<String>,
    },
    /// Histogram of the residue-corrected truth
    Hist {
        #[command(flatten)]
        t: TruthArgs,
        /// Bin count or `auto`
        #[arg(long)]
        bins: Option<String>,
        /// Keep the residues in the samples
        #[arg(long)]
        raw: bool,
    },
    /// Mean square of the truth against c² + ½Σ|r|²
    Parseval {
        #[command(flatten)]
        t: TruthArgs,
    },
    /// Density from the J₀-product characteristic function
    Density {
        #[arg(long)]
        model: Option<PathBuf>,
        /// Use only the first N frequencies
        #[arg(long = "n-terms")]
        n_terms: Option<usize>,
        #[arg(long)]
        points: Option<usize>,
        /// Grid half-width in standard deviations
        #[arg(long)]
        sigmas: Option<f64>,
        #[arg(long = "decay-tol")]
        decay_tol: Option<f64>,
    },
    /// P(E(y; q, a1) > E(y; q, a2)) for the Möbius function in progressions
    Race {
        /// Dirichlet zero file; computed on the fly when absent
        #[arg(long)]
        zeros: Option<PathBuf>,
        #[arg(long)]
        q: Option<u64>,
        #[arg(long)]
        a1: Option<u64>,
        #[arg(long)]
        a2: Option<u64>,
        #[arg(long = "gamma-max")]
        gamma_max: Option<f64>,
        #[arg(long, value_enum)]
        route: Option<Route>,
        #[arg(long = "Y")]
        y: Option<String>,
        #[arg(long)]
        step: Option<f64>,
        #[arg(long = "decay-tol")]
        decay_tol: Option<f64>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e.class() {
                ErrorClass::Numeric => 1,
                ErrorClass::Usage => 2,
                ErrorClass::Capacity => 3,
            })
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    let mut ctx = Ctx::new(cli.config.as_deref())?;
    let workers = ctx.knob_opt("workers", cli.workers)?;
    if let Some(n) = workers {
        if n == 0 {
            return Err(Error::InvalidArgument("workers must be >= 1".into()));
        }
        // ignore a pool that is already set up (tests may call twice)
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    ctx.seed = ctx.knob("seed", cli.seed, 0)?;
    ctx.emit = ctx.knob("emit", cli.emit, Emit::Csv)?;
    let out = match cli.cmd {
        Group::Zeros(c) => zeros_cmd(&mut ctx, c)?,
        Group::Model(c) => model_cmd(&mut ctx, c)?,
        Group::Dist(c) => dist_cmd(&mut ctx, c)?,
    };
    let text = out.render(&ctx);
    match cli.out {
        Some(p) => std::fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

/// What a command produces: a table, or an artifact in its own text format.
enum Output {
    Table(Report),
    Artifact(String),
}

impl Output {
    fn render(&self, ctx: &Ctx) -> String {
        match self {
            Output::Table(r) => r.render(ctx),
            Output::Artifact(body) => format!("{}{body}", ctx.provenance_comments()),
        }
    }
}

fn load_zeros(ctx: &mut Ctx, path: &std::path::Path) -> Result<ZeroDataset> {
    let text = ctx.input(path)?;
    parse_zeros(&text)
}

fn load_model(ctx: &mut Ctx, path: &std::path::Path) -> Result<zerodist::CoefficientModel> {
    let text = ctx.input(path)?;
    zerodist::model::parse_model(&text)
}

fn zeros_cmd(ctx: &mut Ctx, c: ZerosCmd) -> Result<Output> {
    match c {
        ZerosCmd::Find { kind, q, gamma_max, tol } => {
            ctx.command("zeros find");
            let kind = ctx.knob("kind", kind, ZeroKind::Zeta)?;
            let gamma_max = ctx.knob("gamma-max", gamma_max, 100.0)?;
            let tol = ctx.knob("tol", tol, 1e-10)?;
            let (dk, zeros) = match kind {
                ZeroKind::Zeta => (DatasetKind::Zeta, find_zeros(&LFunction::Zeta, gamma_max, tol)?),
                ZeroKind::Dirichlet => {
                    let q = ctx.knob_req("q", q)?;
                    (DatasetKind::Dirichlet { q }, find_zeros_mod(q, gamma_max, tol)?)
                }
            };
            eprintln!("found {} zeros up to {gamma_max}", zeros.len());
            let prov = format!("computed by zerodist {} with tol {tol}", env!("CARGO_PKG_VERSION"));
            let ds = ZeroDataset::new(dk, zeros, gamma_max, prov)?;
            Ok(Output::Artifact(format_zeros(&ds)))
        }
        ZerosCmd::Import { file } => {
            ctx.command("zeros import");
            let ds = load_zeros(ctx, &file)?;
            let (kind, q) = match ds.kind {
                DatasetKind::Zeta => ("zeta", Cell::Empty),
                DatasetKind::Dirichlet { q } => ("dirichlet", Cell::Int(q as i64)),
            };
            let mut r = Report::key_value();
            r.kv("kind", Cell::text(kind));
            r.kv("q", q);
            r.kv("zeros", Cell::Int(ds.len() as i64));
            r.kv("gamma_max", Cell::Num(ds.gamma_max));
            r.kv("coefficient_ready", Cell::Bool(ds.is_coefficient_ready()));
            r.kv("has_aux", Cell::Bool(ds.has_aux()));
            r.kv("provenance", Cell::text(&ds.provenance));
            Ok(Output::Table(r))
        }
        ZerosCmd::Export { file } => {
            ctx.command("zeros export");
            let ds = load_zeros(ctx, &file)?;
            Ok(Output::Artifact(format_zeros(&ds)))
        }
        ZerosCmd::Stats { file, j_minus_one: t, rows } => {
            ctx.command("zeros stats");
            let ds = load_zeros(ctx, &file)?;
            let t = ctx.knob("j-minus-one", t, ds.gamma_max)?;
            let rows = ctx.knob("rows", rows, 10)?;
            if rows == 0 || !(t > 0.0) {
                return Err(Error::InvalidArgument("need rows >= 1 and T > 0".into()));
            }
            let mut r = Report::new(&["T", "zeros", "counting_formula", "j_minus_one"]);
            for k in 1..=rows {
                let tk = t * k as f64 / rows as f64;
                let n = match ds.kind {
                    DatasetKind::Zeta => Cell::Num(riemann_von_mangoldt(tk)),
                    DatasetKind::Dirichlet { .. } => Cell::Empty,
                };
                let j = if ds.is_coefficient_ready() {
                    Cell::Num(j_minus_one(&ds, tk)?)
                } else {
                    Cell::Empty
                };
                r.row(vec![Cell::Num(tk), Cell::Int(ds.count_below(tk) as i64), n, j]);
            }
            let counts = unit_interval_counts(&ds, t)?;
            let max = counts.iter().map(|c| c.1).max().unwrap_or(0);
            r.meta("max_unit_interval_count", Cell::Int(max as i64));
            r.meta("max_count_over_log", Cell::Num(max_count_over_log(&counts)));
            Ok(Output::Table(r))
        }
    }
}

fn model_cmd(ctx: &mut Ctx, c: ModelCmd) -> Result<Output> {
    match c {
        ModelCmd::Build { kind, zeros, alpha, q, a } => {
            ctx.command("model build");
            let kind = ctx.knob_req("kind", kind)?;
            let zeros = ctx.knob_req("zeros", zeros)?;
            let ds = load_zeros(ctx, &zeros)?;
            let ek = match kind {
                ModelKind::Psi => ErrorTermKind::Psi,
                ModelKind::PiLi => ErrorTermKind::PiLi,
                ModelKind::Mobius => ErrorTermKind::Mobius {
                    alpha: ctx.knob("alpha", alpha, 0.0)?,
                },
                ModelKind::Liouville => ErrorTermKind::Liouville {
                    alpha: ctx.knob("alpha", alpha, 0.0)?,
                },
                ModelKind::MobiusAp => {
                    let dq = match ds.kind {
                        DatasetKind::Dirichlet { q } => q,
                        DatasetKind::Zeta => {
                            return Err(Error::InvalidArgument("mobius-ap needs a Dirichlet zero file".into()))
                        }
                    };
                    ErrorTermKind::MobiusAp {
                        q: ctx.knob("q", q, dq)?,
                        a: ctx.knob_req("a", a)?,
                    }
                }
            };
            let m = build_model(&ek, &ds)?;
            eprintln!("{}: {} terms, c = {}", m.label, m.len(), m.c);
            Ok(Output::Artifact(zerodist::model::format_model(&m)))
        }
        ModelCmd::Conditions {
            model,
            kappa,
            si_gamma,
            points,
            window,
        } => {
            ctx.command("model conditions");
            let m = load_model(ctx, &model)?;
            let d = ConditionOptions::default();
            let opt = ConditionOptions {
                kappa: ctx.knob("kappa", kappa, d.kappa)?,
                si_gamma: ctx.knob("si-gamma", si_gamma, d.si_gamma)?,
                points: ctx.knob("points", points, d.points)?,
                window: ctx.knob("window", window, d.window)?,
            };
            let c = check_conditions_with(&m, &opt)?;
            let mut r = Report::key_value();
            r.kv("model", Cell::text(&m.label));
            r.kv("n_terms", Cell::Int(c.n_terms as i64));
            r.kv("lambda_max", Cell::Num(c.lambda_max));
            r.kv("theta_hat", Cell::Num(c.theta_hat));
            r.kv("theta_residual", Cell::Num(c.theta_residual));
            r.kv("theta_raw", Cell::Num(c.theta_raw));
            r.kv("kappa", Cell::Num(c.kappa));
            r.kv("theta_bound", Cell::Num(c.theta_bound));
            r.kv("theta_verdict", Cell::text(if c.theta_pass { "below" } else { "not-below" }));
            r.kv("beta", Cell::Num(c.beta));
            r.kv("si_gamma", Cell::Num(c.si_gamma));
            r.kv("si_residual", Cell::Num(c.si_residual));
            r.kv("si_constant", Cell::Num(c.si_constant));
            r.kv("alpha", Cell::Num(c.alpha));
            r.kv("alpha_upper", Cell::Num(c.alpha_upper));
            r.kv("alphacond_feasible", Cell::Bool(c.alphacond_feasible));
            r.kv("ai_constant", Cell::Num(c.ai_constant));
            r.kv("tail_share", Cell::Num(c.tail_share));
            r.kv("tail_l2_estimate", Cell::Num(c.tail_l2_estimate));
            Ok(Output::Table(r))
        }
    }
}

/// The model file, the error term it models, and the truth grid.
struct TruthSetup {
    model: zerodist::CoefficientModel,
    kind: ErrorTermKind,
    grid: Vec<f64>,
    step: f64,
}

fn truth_setup(ctx: &mut Ctx, t: TruthArgs) -> Result<TruthSetup> {
    let path = ctx.knob_req("model", t.model)?;
    let model = load_model(ctx, &path)?;
    let kind = ErrorTermKind::parse_label(&model.label)?;
    let y = ctx.knob_y("Y", t.y, 1e6f64.ln())?;
    let step = ctx.knob("step", t.step, zerodist::limdist::DEFAULT_STEP)?;
    let grid = uniform_grid(model.y0, y, step)?;
    Ok(TruthSetup { model, kind, grid, step })
}

fn dist_cmd(ctx: &mut Ctx, c: DistCmd) -> Result<Output> {
    let sieve = SieveConfig::default();
    match c {
        DistCmd::Residual { t, x } => {
            ctx.command("dist residual");
            let s = truth_setup(ctx, t)?;
            let top = s.model.lambda_max().unwrap_or(0.0);
            let xs = ctx.knob("X", x, output::fmt_num(top))?;
            let xs: Vec<f64> = xs
                .split(',')
                .map(|v| v.trim().parse().map_err(|_| Error::InvalidArgument(format!("bad X value '{v}'"))))
                .collect::<Result<_>>()?;
            let truth = error_term_series(s.kind, &s.grid, &sieve)?;
            let mut r = Report::new(&["X", "Y", "step", "points", "rms", "max_abs"]);
            for x in xs {
                let rep = residual_from_truth(&s.model, x, &truth, 0, s.step)?;
                r.row(vec![
                    Cell::Num(rep.x),
                    Cell::Num(rep.y),
                    Cell::Num(rep.grid_step),
                    Cell::Int(rep.n_points as i64),
                    Cell::Num(rep.rms),
                    Cell::Num(rep.max_abs),
                ]);
            }
            Ok(Output::Table(r))
        }
        DistCmd::Hist { t, bins, raw } => {
            ctx.command("dist hist");
            let s = truth_setup(ctx, t)?;
            let bins = ctx.knob("bins", bins, "auto".to_string())?;
            let spec = if bins == "auto" {
                BinSpec::Auto
            } else {
                BinSpec::Count(
                    bins.parse()
                        .map_err(|_| Error::InvalidArgument(format!("bins must be a count or auto, got '{bins}'")))?,
                )
            };
            let raw = ctx.flag("raw", raw)?;
            let mut truth = error_term_series(s.kind, &s.grid, &sieve)?;
            if !raw {
                truth = subtract_residues(&truth, &[&s.model])?;
            }
            let d = empirical_distribution(&truth, spec)?;
            let mut r = Report::new(&["bin_lo", "bin_hi", "mass"]);
            let b = d.bins[0];
            for (i, m) in d.mass.iter().enumerate() {
                let (lo, hi) = b.edges(i);
                r.row(vec![Cell::Num(lo), Cell::Num(hi), Cell::Num(*m)]);
            }
            r.meta("samples", Cell::Int(d.sample_count as i64));
            r.meta("mean", Cell::Num(d.mean[0]));
            r.meta("variance", Cell::Num(d.variance[0]));
            r.meta("second_moment", Cell::Num(d.second_moment[0]));
            r.meta("residues_subtracted", Cell::Bool(!raw));
            Ok(Output::Table(r))
        }
        DistCmd::Parseval { t } => {
            ctx.command("dist parseval");
            let s = truth_setup(ctx, t)?;
            let truth = error_term_series(s.kind, &s.grid, &sieve)?;
            let p = parseval_from_truth(&s.model, f64::INFINITY, &truth, 0, s.step)?;
            let mut r = Report::new(&["X", "Y", "step", "lhs", "lhs_raw", "rhs", "tail_estimate"]);
            r.row(vec![
                Cell::Num(s.model.lambda_max().unwrap_or(0.0)),
                Cell::Num(p.y),
                Cell::Num(p.step),
                Cell::Num(p.lhs),
                Cell::Num(p.lhs_raw),
                Cell::Num(p.rhs),
                p.tail_estimate.map(Cell::Num).unwrap_or(Cell::Empty),
            ]);
            r.meta("abs_diff", Cell::Num((p.lhs - p.rhs).abs()));
            Ok(Output::Table(r))
        }
        DistCmd::Density {
            model,
            n_terms,
            points,
            sigmas,
            decay_tol,
        } => {
            ctx.command("dist density");
            let path = ctx.knob_req("model", model)?;
            let m = load_model(ctx, &path)?;
            let n_terms = ctx.knob_opt("n-terms", n_terms)?;
            let points = ctx.knob("points", points, 1024)?;
            let sigmas = ctx.knob("sigmas", sigmas, 10.0)?;
            let opt = InversionOptions {
                decay_tol: ctx.knob("decay-tol", decay_tol, InversionOptions::default().decay_tol)?,
                ..Default::default()
            };
            let beyond = beyond_model_tail(&m);
            let spec = CharFnSpec::from_model(&m, n_terms, beyond)?;
            let g = invert_to_density(&spec, &GridSpec::Auto { points, sigmas }, &opt)?;
            let mut r = Report::new(&["x", "density"]);
            for (j, v) in g.values.iter().enumerate() {
                r.row(vec![Cell::Num(g.point(0, j)), Cell::Num(*v)]);
            }
            r.meta("n_terms", Cell::Int(spec.n_terms as i64));
            r.meta("tail_l2", Cell::Num(spec.tail_l2));
            r.meta("mass", Cell::Num(g.mass));
            r.meta("mass_defect", Cell::Num(g.mass_defect));
            r.meta("clipped_mass", Cell::Num(g.clipped_mass));
            r.meta("xi_max", Cell::Num(g.xi_max));
            r.meta("xi_step", Cell::Num(g.xi_step));
            r.meta("mean", Cell::Num(g.mean(0)));
            r.meta("variance", Cell::Num(g.variance(0)));
            Ok(Output::Table(r))
        }
        DistCmd::Race {
            zeros,
            q,
            a1,
            a2,
            gamma_max,
            route,
            y,
            step,
            decay_tol,
        } => {
            ctx.command("dist race");
            let zeros = ctx.knob_opt("zeros", zeros)?;
            let ds = match zeros {
                Some(p) => load_zeros(ctx, &p)?,
                None => {
                    let q = ctx.knob_req("q", q)?;
                    let gm = ctx.knob("gamma-max", gamma_max, 100.0)?;
                    let z = find_zeros_mod(q, gm, 1e-10)?;
                    ZeroDataset::new(DatasetKind::Dirichlet { q }, z, gm, "computed")?
                }
            };
            let dq = match ds.kind {
                DatasetKind::Dirichlet { q } => q,
                DatasetKind::Zeta => return Err(Error::InvalidArgument("race needs a Dirichlet zero file".into())),
            };
            let q = ctx.knob("q", q, dq)?;
            if q != dq {
                return Err(Error::InvalidArgument(format!("q = {q} but the zero file is mod {dq}")));
            }
            let a1 = ctx.knob("a1", a1, 1)?;
            let a2 = ctx.knob("a2", a2, 2)?;
            let route = ctx.knob("route", route, Route::Inversion)?;
            let kinds = [ErrorTermKind::MobiusAp { q, a: a1 }, ErrorTermKind::MobiusAp { q, a: a2 }];
            let models = [build_model(&kinds[0], &ds)?, build_model(&kinds[1], &ds)?];
            let mut r = Report::key_value();
            r.kv("q", Cell::Int(q as i64));
            r.kv("a1", Cell::Int(a1 as i64));
            r.kv("a2", Cell::Int(a2 as i64));
            r.kv("frequencies", Cell::Int(models[0].len() as i64));
            if matches!(route, Route::Inversion | Route::Both) {
                let opt = InversionOptions {
                    decay_tol: ctx.knob("decay-tol", decay_tol, InversionOptions::default().decay_tol)?,
                    ..Default::default()
                };
                let v = build_vector_model(&models)?;
                let spec = CharFnSpec::from_vector(&v, None, 0.0)?;
                let p = race_probability(&spec, 0, 1, &opt)?;
                r.kv("probability_inversion", Cell::Num(p.probability));
                r.kv("degenerate", Cell::Bool(p.degenerate));
                r.kv("mass_defect", Cell::Num(p.mass_defect));
                r.kv("clipped_mass", Cell::Num(p.clipped_mass));
            }
            if matches!(route, Route::Empirical | Route::Both) {
                let y = ctx.knob_y("Y", y, 1e6f64.ln())?;
                let step = ctx.knob("step", step, zerodist::limdist::DEFAULT_STEP)?;
                let grid = uniform_grid(zerodist::model::Y0, y, step)?;
                let truth = error_term_series_vec(&kinds, &grid, &sieve)?;
                let corrected = subtract_residues(&truth, &[&models[0], &models[1]])?;
                let p = log_density(&corrected, &Predicate::StrictOrder(vec![0, 1]))?;
                let p_raw = log_density(&truth, &Predicate::StrictOrder(vec![0, 1]))?;
                let q_raw = log_density(&truth, &Predicate::StrictOrder(vec![1, 0]))?;
                r.kv("probability_empirical", Cell::Num(p));
                r.kv("probability_empirical_raw", Cell::Num(p_raw));
                r.kv("tie_share_raw", Cell::Num(1.0 - p_raw - q_raw));
                r.kv("Y", Cell::Num(y));
            }
            Ok(Output::Table(r))
        }
    }
}

/// Extrapolated Σ|r|² past the model's last frequency, when the model is
/// large enough to fit its growth.
fn beyond_model_tail(m: &zerodist::CoefficientModel) -> f64 {
    check_conditions(m).map(|c| c.tail_l2_estimate).unwrap_or(0.0)
}
