//! Command-line front end: model specs in JSON, ruin/exit/scale queries,
//! the truncation-error table and its plot data, and the Monte Carlo
//! estimators, all emitted as CSV with a provenance header.
//!
//! Exit codes: 0 success, 1 invalid spec or arguments, 2 unsupported
//! regime, 3 numerical-accuracy failure.

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use ou_ruin::backward::BackwardExponent;
use ou_ruin::mc::{self, SimConfig};
use ou_ruin::oracles;
use ou_ruin::ruin::{self, Horizon, InversionConfig, RuinQuery};
use ou_ruin::scale;
use ou_ruin::spectral::{self, ExperimentConfig, SpectralSeries};
use ou_ruin::transform::{self, CumulativeRule, GridOptions, GridSpec};
use ou_ruin::{Error, LevyModel, ProcessParams};

#[derive(Parser)]
#[command(
    name = "ou-ruin",
    version,
    about = "Absolute ruin probabilities and exit functionals for the OU-type risk model",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// JSON model specification file
    #[arg(long)]
    model: Option<PathBuf>,
    /// Interest rate r > 0
    #[arg(long)]
    r: Option<f64>,
    /// Premium rate c (default 0)
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    c: f64,
    /// Initial capital
    #[arg(long, allow_hyphen_values = true)]
    x: Option<f64>,
    /// Time horizon (a number, or "inf")
    #[arg(long)]
    t: Option<String>,
    /// Laplace parameter / discount rate
    #[arg(long)]
    q: Option<f64>,
    /// Upper exit level
    #[arg(long)]
    a: Option<f64>,
    /// Truncation / derivative order
    #[arg(long = "N")]
    n_order: Option<usize>,
    /// Spatial grid step
    #[arg(long = "grid-h")]
    grid_h: Option<f64>,
    /// Number of spatial grid steps M (grid = 0..=M·h)
    #[arg(long = "grid-M")]
    grid_m: Option<usize>,
    /// Frequency cutoff override
    #[arg(long)]
    umax: Option<f64>,
    /// FFT size override (power of two)
    #[arg(long)]
    nfreq: Option<usize>,
    /// Monte Carlo path count
    #[arg(long)]
    paths: Option<usize>,
    /// RNG seed
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file (default: standard output)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Evaluate spectral sums below the t_alpha threshold
    #[arg(long = "force-below-talpha", default_value_t = false)]
    force_below_talpha: bool,
    /// Comma-separated horizons for the table command
    #[arg(long = "t-values")]
    t_values: Option<String>,
    /// Comma-separated truncation orders for the table command
    #[arg(long = "n-values")]
    n_values: Option<String>,
    /// Write per-path event CSV here (mc command)
    #[arg(long = "dump-paths")]
    dump_paths: Option<PathBuf>,
    /// Small-jump cutoff for infinite-activity simulation
    #[arg(long)]
    cutoff: Option<f64>,
    /// Simulation horizon for exit estimation
    #[arg(long)]
    horizon: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Finite- or infinite-time absolute ruin probability
    Ruin(Common),
    /// Spectral partial sums of the survival probability over the grid
    #[command(name = "survival-series")]
    SurvivalSeries(Common),
    /// Truncation-error table e_{N,t} for the truncated-stable demo defaults
    Table1(Common),
    /// Plot data: partial sums and the direct-inversion reference at t = 7
    Figure1(Common),
    /// q-scale function W_q on the grid
    Scale(Common),
    /// Two-sided exit transform W_{q/r}(x) / W_{q/r}(a)
    Exit(Common),
    /// Closed-form reference oracles (family-dispatched)
    Oracle(Common),
    /// Monte Carlo finite-time ruin estimate
    Mc(Common),
    /// Tabulated W and derivatives
    #[command(name = "w-family")]
    WFamily(Common),
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // A uniform exit-code contract: every argument problem is 1.
            if e.use_stderr() {
                eprintln!("{e}");
                return ExitCode::from(1);
            }
            // --help / --version
            print!("{e}");
            return ExitCode::SUCCESS;
        }
    };
    let (name, common) = match &cli.command {
        Command::Ruin(c) => ("ruin", c),
        Command::SurvivalSeries(c) => ("survival-series", c),
        Command::Table1(c) => ("table1", c),
        Command::Figure1(c) => ("figure1", c),
        Command::Scale(c) => ("scale", c),
        Command::Exit(c) => ("exit", c),
        Command::Oracle(c) => ("oracle", c),
        Command::Mc(c) => ("mc", c),
        Command::WFamily(c) => ("w-family", c),
    };
    match run(name, common) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            let code = match e {
                Error::Unsupported(_) => 2,
                Error::Accuracy { .. } => 3,
                _ => 1,
            };
            ExitCode::from(code)
        }
    }
}

fn run(name: &str, c: &Common) -> Result<(), Error> {
    let model = load_model(name, c)?;
    let r = c.r.unwrap_or(0.2);
    if !(r > 0.0) {
        return Err(Error::spec("r must be strictly positive"));
    }
    let mut out = String::new();
    provenance(&mut out, name, &model, c.seed);
    match name {
        "ruin" => cmd_ruin(c, &model, r, &mut out)?,
        "survival-series" => cmd_survival_series(c, &model, r, &mut out)?,
        "table1" => cmd_table1(c, &model, r, &mut out)?,
        "figure1" => cmd_figure1(c, &model, r, &mut out)?,
        "scale" => cmd_scale(c, &model, r, &mut out)?,
        "exit" => cmd_exit(c, &model, r, &mut out)?,
        "oracle" => cmd_oracle(c, &model, r, &mut out)?,
        "mc" => cmd_mc(c, &model, r, &mut out)?,
        "w-family" => cmd_w_family(c, &model, r, &mut out)?,
        _ => unreachable!(),
    }
    write_output(c, &out)
}

fn load_model(name: &str, c: &Common) -> Result<LevyModel, Error> {
    match &c.model {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| Error::spec(format!("cannot read {}: {e}", path.display())))?;
            LevyModel::from_json(&text)
        }
        None if matches!(name, "table1" | "figure1" | "survival-series" | "w-family") => {
            // The demo experiment defaults.
            LevyModel::truncated_stable(1.0, 1.0, 0.5)
        }
        None => Err(Error::spec(
            "--model <file.json> is required for this command",
        )),
    }
}

fn provenance(out: &mut String, cmd: &str, model: &LevyModel, seed: u64) {
    out.push_str(&format!(
        "# ou-ruin {} cmd={} model={} seed={}\n",
        env!("CARGO_PKG_VERSION"),
        cmd,
        model.family_name(),
        seed
    ));
}

fn write_output(c: &Common, text: &str) -> Result<(), Error> {
    match &c.out {
        Some(path) => fs::write(path, text)
            .map_err(|e| Error::spec(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .map_err(|e| Error::spec(format!("stdout: {e}")))
        }
    }
}

fn parse_horizon(c: &Common) -> Result<Horizon, Error> {
    match c.t.as_deref() {
        None => Err(Error::spec("--t <number|inf> is required")),
        Some(s) if s.eq_ignore_ascii_case("inf") || s.eq_ignore_ascii_case("infinity") => {
            Ok(Horizon::Infinite)
        }
        Some(s) => {
            let t: f64 = s.parse().map_err(|_| {
                Error::spec(format!("--t: cannot parse `{s}` as a number or `inf`"))
            })?;
            if t < 0.0 {
                return Err(Error::spec("--t must be nonnegative"));
            }
            Ok(Horizon::Finite(t))
        }
    }
}

fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>, Error> {
    s.split(',')
        .map(|p| {
            p.trim()
                .parse::<T>()
                .map_err(|_| Error::spec(format!("{what}: cannot parse `{p}`")))
        })
        .collect()
}

fn inversion_config(c: &Common) -> InversionConfig {
    let mut cfg = InversionConfig::default();
    if let Some(h) = c.grid_h {
        cfg.h = h;
    }
    if let Some(n) = c.nfreq {
        cfg.grid.max_n_freq = n;
    }
    cfg
}

fn cmd_ruin(c: &Common, model: &LevyModel, r: f64, out: &mut String) -> Result<(), Error> {
    let x = c.x.ok_or_else(|| Error::spec("--x is required"))?;
    let horizon = parse_horizon(c)?;
    let params = ProcessParams::new(r, c.c)?;
    let query = RuinQuery::new(model.clone(), params, x, horizon)?;
    let p = match horizon {
        Horizon::Finite(_) => ruin::finite_time_ruin(&query, &inversion_config(c))?,
        Horizon::Infinite => {
            if !model.log_moment_finite() {
                1.0
            } else {
                let h = c.grid_h.unwrap_or(0.02);
                let x_max = (query.x_eff() + 2.0).max(20.0);
                let wf = ruin::build_w_family(model, r, h, x_max)?;
                ruin::infinite_time_ruin(&query, &wf)
            }
        }
    };
    out.push_str("x,t,probability\n");
    out.push_str(&format!("{},{},{}\n", x, c.t.as_deref().unwrap_or(""), p));
    Ok(())
}

fn spectral_series(
    c: &Common,
    model: &LevyModel,
    r: f64,
    n_max: usize,
) -> Result<SpectralSeries, Error> {
    let be = BackwardExponent::new(model.clone(), r)?;
    let h = c.grid_h.unwrap_or(0.2);
    let m = c.grid_m.unwrap_or(125);
    let opts = GridOptions {
        decay_tol: 1e-10,
        ..GridOptions::default()
    };
    let grid = match (c.umax, c.nfreq) {
        (Some(u), Some(n)) => GridSpec::new(h, m, u, n)?,
        _ => transform::auto_grid_for_derivatives(&be, h, m, n_max, &opts)?,
    };
    let wf = transform::w_derivatives(&be, &grid, n_max, CumulativeRule::Trapezoid, 5)?;
    SpectralSeries::new(&be, wf, n_max)
}

fn cmd_survival_series(
    c: &Common,
    model: &LevyModel,
    r: f64,
    out: &mut String,
) -> Result<(), Error> {
    let t = match parse_horizon(c)? {
        Horizon::Finite(t) => t,
        Horizon::Infinite => return Err(Error::spec("survival-series needs a finite --t")),
    };
    let n = c.n_order.unwrap_or(6);
    let series = spectral_series(c, model, r, n)?;
    if t <= series.t_alpha() && !c.force_below_talpha {
        return Err(Error::unsupported(format!(
            "t = {t} is not above t_alpha = {:.4}; pass --force-below-talpha to evaluate anyway",
            series.t_alpha()
        )));
    }
    out.push_str("N,x,partial_sum_raw\n");
    let wf = series.w_family();
    for i in 0..=wf.m() {
        let x = i as f64 * wf.h();
        let v = series.survival_series(x, t, n, true)?;
        out.push_str(&format!("{n},{x},{v}\n"));
    }
    Ok(())
}

fn cmd_table1(c: &Common, model: &LevyModel, r: f64, out: &mut String) -> Result<(), Error> {
    let be = BackwardExponent::new(model.clone(), r)?;
    let mut cfg = ExperimentConfig::default();
    if let Some(h) = c.grid_h {
        cfg.h = h;
    }
    if let Some(m) = c.grid_m {
        cfg.m = m;
    }
    if let Some(ts) = &c.t_values {
        cfg.t_values = parse_list(ts, "--t-values")?;
    }
    if let Some(ns) = &c.n_values {
        cfg.n_values = parse_list(ns, "--n-values")?;
    }
    let (_series, report) = spectral::truncation_error_experiment(&be, &cfg)?;
    out.push_str(&report.to_csv());
    // Human-facing rendering goes to stderr so the CSV stays clean.
    eprintln!("{}", report.to_aligned_table());
    Ok(())
}

fn cmd_figure1(c: &Common, model: &LevyModel, r: f64, out: &mut String) -> Result<(), Error> {
    let t = match c.t.as_deref() {
        None => 7.0,
        Some(_) => match parse_horizon(c)? {
            Horizon::Finite(t) => t,
            Horizon::Infinite => return Err(Error::spec("figure1 needs a finite --t")),
        },
    };
    let n_list = [0usize, 1, 3, 6];
    let series = spectral_series(c, model, r, *n_list.iter().max().unwrap())?;
    let wf = series.w_family();
    let h = wf.h();
    let m = wf.m();
    let be = BackwardExponent::new(model.clone(), r)?;
    let opts = GridOptions {
        decay_tol: 1e-10,
        ..GridOptions::default()
    };
    let rgrid = transform::auto_grid_for_cdf(&be, Some(t), h, m, &opts)?;
    let reference = transform::dual_cdf_profile(&be, Some(t), &rgrid, 1e-3)?;
    out.push_str("N,x,value\n");
    for &n in &n_list {
        for i in 0..=m {
            let x = i as f64 * h;
            let v = series.survival_series(x, t, n, true)?;
            out.push_str(&format!("{n},{x},{v}\n"));
        }
    }
    for i in 0..=m {
        let x = i as f64 * h;
        out.push_str(&format!("inf,{x},{}\n", reference.values[i]));
    }
    Ok(())
}

fn cmd_scale(c: &Common, model: &LevyModel, r: f64, out: &mut String) -> Result<(), Error> {
    let q = c.q.ok_or_else(|| Error::spec("--q is required"))?;
    let h = c.grid_h.unwrap_or(0.05);
    let m = c.grid_m.unwrap_or_else(|| (25.0 / h).ceil() as usize);
    let wf = ruin::build_w_family(model, r, h, h * m as f64)?;
    let sf = scale::fractional_integral_w(&wf, q)?;
    out.push_str(&format!(
        "# q={} r={} model={}\n",
        q,
        r,
        model.family_name()
    ));
    out.push_str("x,Wq\n");
    for (i, v) in sf.values().iter().enumerate() {
        out.push_str(&format!("{},{}\n", i as f64 * sf.h(), v));
    }
    Ok(())
}

fn cmd_exit(c: &Common, model: &LevyModel, r: f64, out: &mut String) -> Result<(), Error> {
    let x = c.x.ok_or_else(|| Error::spec("--x is required"))?;
    let a = c.a.ok_or_else(|| Error::spec("--a is required"))?;
    let q = c.q.unwrap_or(0.0);
    if !(a > 0.0) {
        return Err(Error::spec("--a must be positive"));
    }
    if x > a {
        return Err(Error::spec("--x must not exceed --a"));
    }
    let h = c.grid_h.unwrap_or(0.02);
    let wf = ruin::build_w_family(model, r, h, a.max(10.0) + 2.0)?;
    let sf = scale::fractional_integral_w(&wf, q / r)?;
    let v = scale::exit_upward_lt(&sf, x, a)?;
    out.push_str("x,a,q,value\n");
    out.push_str(&format!("{x},{a},{q},{v}\n"));
    Ok(())
}

fn cmd_oracle(c: &Common, model: &LevyModel, r: f64, out: &mut String) -> Result<(), Error> {
    let x = c.x.ok_or_else(|| Error::spec("--x is required"))?;
    let horizon = parse_horizon(c)?;
    let v = match (model, horizon) {
        (LevyModel::ExponentialJumps { eta, delta }, Horizon::Finite(t)) => {
            oracles::exp_case_survival(*eta, *delta, r, x, t)?
        }
        (LevyModel::ExponentialJumps { eta, delta }, Horizon::Infinite) => {
            ou_ruin::special::gamma_cdf(eta / r, 1.0 / delta, x)?
        }
        (LevyModel::Linnik { eta, delta, alpha }, Horizon::Finite(t)) => {
            oracles::linnik_survival_series(*eta, *delta, *alpha, r, x, t, 40)?.value
        }
        (LevyModel::Stable { alpha }, h) => oracles::stable_survival(*alpha, r, x, h.finite())?,
        _ => {
            return Err(Error::unsupported(
                "oracle: closed forms exist for exponential, linnik and stable families only",
            ))
        }
    };
    out.push_str("x,t,survival\n");
    out.push_str(&format!("{},{},{}\n", x, c.t.as_deref().unwrap_or(""), v));
    Ok(())
}

fn cmd_mc(c: &Common, model: &LevyModel, r: f64, out: &mut String) -> Result<(), Error> {
    let x = c.x.ok_or_else(|| Error::spec("--x is required"))?;
    let t = match parse_horizon(c)? {
        Horizon::Finite(t) => t,
        Horizon::Infinite => return Err(Error::spec("mc needs a finite --t")),
    };
    let n_paths = c.paths.unwrap_or(10_000);
    let mut cfg = SimConfig::new(n_paths, t.max(1e-9), c.seed)?;
    if let Some(cut) = c.cutoff {
        cfg = cfg.with_cutoff(cut, true)?;
    }
    let est = mc::estimate_finite_time_ruin(model, r, c.c, x, t, &cfg)?;
    out.push_str("x,t,mean,std_error,n_effective\n");
    out.push_str(&format!(
        "{x},{t},{},{},{}\n",
        est.mean, est.std_error, est.n_effective
    ));
    if let Some(path) = &c.dump_paths {
        let mut dump = String::from("path_id,event_time,event_type,surplus_after\n");
        for p in 0..n_paths {
            let events = mc::simulate_risk_path(model, r, c.c, x, p as u64, &cfg)?;
            for e in events {
                let kind = match e.kind {
                    mc::EventKind::Jump { .. } => "jump",
                    mc::EventKind::Ruin => "ruin",
                    mc::EventKind::Horizon => "horizon",
                };
                dump.push_str(&format!("{p},{},{kind},{}\n", e.time, e.surplus_after));
            }
        }
        fs::write(path, dump)
            .map_err(|e| Error::spec(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(())
}

fn cmd_w_family(c: &Common, model: &LevyModel, r: f64, out: &mut String) -> Result<(), Error> {
    let n_max = c.n_order.unwrap_or(0);
    let be = BackwardExponent::new(model.clone(), r)?;
    let h = c.grid_h.unwrap_or(0.2);
    let m = c.grid_m.unwrap_or(125);
    let opts = GridOptions {
        decay_tol: 1e-10,
        ..GridOptions::default()
    };
    let grid = match (c.umax, c.nfreq) {
        (Some(u), Some(n)) => GridSpec::new(h, m, u, n)?,
        (Some(u), None) => {
            let auto = transform::auto_grid_for_derivatives(&be, h, m, n_max, &opts)?;
            GridSpec::new(h, m, u, auto.n_freq)?
        }
        _ => transform::auto_grid_for_derivatives(&be, h, m, n_max, &opts)?,
    };
    let wf = transform::w_derivatives(&be, &grid, n_max, CumulativeRule::Trapezoid, 5)?;
    out.push_str(&wf.to_csv());
    Ok(())
}
