//! Command-line front end for the `liouville` library.
//!
//! Exit codes: 0 success, 1 verification failure or non-convergence,
//! 2 invalid input.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use liouville::extension::{
    bubble_extension_closed, bubble_extension_quadrature, c0, n_constant_verdict, neumann_ladder, neumann_quotient,
    neumann_trace, neumann_trace_closed, weighted_laplacian_residual,
};
use liouville::fraclap::{c2, frac_power_constant, frac_power_constant_riesz, poly_power_constant};
use liouville::inteq::{constant_fixed_point, kernel_mass, solve_fixed_point, CylOperator, CylProfile, FixedPointOptions, UpdateRule};
use liouville::pohozaev::{pohozaev_limit_fractional, pohozaev_limit_integer};
use liouville::specfun::{hyp2f1, hyp2f1_deriv};
use liouville::verify::{format_f64, run_suite, suite_names};
use liouville::{Error, Hyp, Params, Quad};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_INVALID: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "liouville", version, about = "Closed forms for conformal Q-curvature equations, checked against oracles")]
#[command(args_override_self = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Gauss hypergeometric function 2F1(a, b; c; z).
    Hyp2f1(Hyp2f1Args),
    /// (-Δ)^σ of |x|^{-s}: the constant λ(s) and its checks.
    Fraclap(FraclapArgs),
    /// Weighted Poisson extension of the singular profile.
    Extension(ExtensionArgs),
    /// Limit of the Pohozaev boundary terms.
    Pohozaev(PohozaevArgs),
    /// Cylindrical integral equation: kernel mass and fixed point.
    Inteq(InteqArgs),
    /// Run the verification suite.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
struct Hyp2f1Args {
    #[arg(long, allow_negative_numbers = true)]
    a: f64,
    #[arg(long, allow_negative_numbers = true)]
    b: f64,
    #[arg(long, allow_negative_numbers = true)]
    c: f64,
    #[arg(long, allow_negative_numbers = true)]
    z: f64,
    /// Also print the derivative in z.
    #[arg(long)]
    deriv: bool,
}

#[derive(Debug, Args)]
struct FraclapArgs {
    #[arg(long)]
    n: u32,
    #[arg(long, allow_negative_numbers = true)]
    sigma: f64,
    /// Exponent of |x|^{-s}; defaults to (n-2σ)/2.
    #[arg(long, allow_negative_numbers = true)]
    s: Option<f64>,
}

#[derive(Debug, Args)]
struct ExtensionArgs {
    #[arg(long)]
    n: u32,
    #[arg(long, allow_negative_numbers = true)]
    sigma: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    m0: f64,
    /// |x| of the evaluation point.
    #[arg(long, allow_negative_numbers = true)]
    x: f64,
    #[arg(long, allow_negative_numbers = true)]
    t: f64,
    /// Write the Neumann quotient ladder as CSV (`t,quotient`).
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct PohozaevArgs {
    #[arg(long)]
    n: u32,
    /// Integer order.
    #[arg(long, conflicts_with = "sigma", required_unless_present = "sigma")]
    m: Option<u32>,
    /// Fractional order in (0, 1).
    #[arg(long, allow_negative_numbers = true)]
    sigma: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    kinf: f64,
    /// Write the report as JSON.
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Update {
    Picard,
    Rescaled,
}

#[derive(Debug, Args)]
struct InteqArgs {
    #[arg(long)]
    n: u32,
    #[arg(long, allow_negative_numbers = true)]
    sigma: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    kinf: f64,
    #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
    damping: f64,
    #[arg(long, default_value_t = 500)]
    max_iters: usize,
    #[arg(long, default_value_t = 1e-10, allow_negative_numbers = true)]
    tol: f64,
    #[arg(long, value_enum, default_value_t = Update::Rescaled)]
    update: Update,
    #[arg(long, default_value_t = -12.0, allow_negative_numbers = true)]
    t_min: f64,
    #[arg(long, default_value_t = 0.05, allow_negative_numbers = true)]
    step: f64,
    #[arg(long, default_value_t = 481)]
    len: usize,
    /// The initial profile is this multiple of the constant solution.
    #[arg(long, default_value_t = 1.1, allow_negative_numbers = true)]
    init_scale: f64,
    /// Write the final profile as CSV (`t,V`).
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Write the convergence log as CSV (`iter,residual`).
    #[arg(long)]
    log: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long, default_value = "all")]
    suite: String,
    /// Write the report as JSON.
    #[arg(long)]
    json: Option<PathBuf>,
}

/// Failure of a command, mapped onto an exit code.
#[derive(Debug)]
enum Failure {
    Invalid(String),
    Failed(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Domain(_) | Error::Divergence(_) => Failure::Invalid(e.to_string()),
            Error::NonConvergence { .. } | Error::Overflow(_) => Failure::Failed(e.to_string()),
        }
    }
}

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    Failure::Failed(format!("cannot write {}: {e}", path.display()))
}

type Outcome = Result<i32, Failure>;

/// Runs `argv` (including the program name), printing to the process streams.
pub fn run_command<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_command_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

/// [`run_command`] with explicit output streams.
pub fn run_command_with<I, S>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let argv: Vec<String> = argv.into_iter().map(Into::into).collect();
    let argv = match merge_config(argv) {
        Ok(a) => a,
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            return EXIT_INVALID;
        }
    };
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    return EXIT_OK;
                }
                ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => {
                    let _ = write!(err, "{}", e.render());
                    return EXIT_INVALID;
                }
                _ => {}
            }
            let _ = writeln!(err, "{}", one_line(&e.render().to_string()));
            return EXIT_INVALID;
        }
    };
    let result = match cli.command {
        Command::Hyp2f1(a) => cmd_hyp2f1(a, out),
        Command::Fraclap(a) => cmd_fraclap(a, out),
        Command::Extension(a) => cmd_extension(a, out),
        Command::Pohozaev(a) => cmd_pohozaev(a, out),
        Command::Inteq(a) => cmd_inteq(a, out),
        Command::Verify(a) => cmd_verify(a, out),
    };
    match result {
        Ok(code) => code,
        Err(Failure::Invalid(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_INVALID
        }
        Err(Failure::Failed(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_FAILURE
        }
    }
}

/// The first line of a clap diagnostic, with a trailing list folded in.
fn one_line(rendered: &str) -> String {
    let mut lines = rendered.lines().map(str::trim).filter(|l| !l.is_empty());
    let mut line = lines.next().unwrap_or("error: invalid arguments").to_string();
    if line.ends_with(':') {
        let items: Vec<&str> = lines.take_while(|l| l.starts_with('-') || l.starts_with('<')).collect();
        line = format!("{line} {}", items.join(", "));
    }
    line
}

/// Pulls `--config PATH` out of `argv` and splices the file's settings in
/// front of the command-line flags, so that flags win.
fn merge_config(argv: Vec<String>) -> Result<Vec<String>, String> {
    let mut rest = Vec::with_capacity(argv.len());
    let mut config = None;
    let mut iter = argv.into_iter();
    while let Some(arg) = iter.next() {
        if arg == "--config" {
            config = Some(iter.next().ok_or("--config needs a path")?);
        } else if let Some(path) = arg.strip_prefix("--config=") {
            config = Some(path.to_string());
        } else {
            rest.push(arg);
        }
    }
    let Some(path) = config else {
        return Ok(rest);
    };
    let text = fs::read_to_string(&path).map_err(|e| format!("cannot read config {path}: {e}"))?;
    let settings = parse_config(&text).map_err(|e| format!("{path}: {e}"))?;
    // program, subcommand, settings from the file, then the remaining flags
    let split = rest.len().min(2);
    let mut merged: Vec<String> = rest[..split].to_vec();
    for (key, value) in settings {
        merged.push(format!("--{key}"));
        if value != "true" {
            merged.push(value);
        }
    }
    merged.extend_from_slice(&rest[split..]);
    Ok(merged)
}

/// `key = value` lines; `#` starts a comment. Underscores in keys become
/// hyphens. A value of `true` stands for a bare switch.
pub fn parse_config(text: &str) -> Result<Vec<(String, String)>, String> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| format!("line {}: expected `key = value`, got {line:?}", i + 1))?;
        let key = key.trim().replace('_', "-");
        let value = value.trim();
        if key.is_empty() || value.is_empty() {
            return Err(format!("line {}: empty key or value", i + 1));
        }
        out.push((key, value.to_string()));
    }
    Ok(out)
}

trait Cell {
    fn cell(&self) -> String;
}

impl Cell for f64 {
    fn cell(&self) -> String {
        format_f64(*self)
    }
}

macro_rules! display_cell {
    ($($t:ty),*) => {$(impl Cell for $t {
        fn cell(&self) -> String {
            self.to_string()
        }
    })*};
}

display_cell!(u32, usize, bool);

fn row(out: &mut dyn Write, name: &str, value: impl Cell) {
    let _ = writeln!(out, "{name:<24}{}", value.cell());
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    fs::write(path, contents).map_err(|e| io_failure(path, e))
}

fn params(n: u32, sigma: f64) -> Result<Params, Failure> {
    Ok(Params::new(n, sigma)?)
}

fn cmd_hyp2f1(a: Hyp2f1Args, out: &mut dyn Write) -> Outcome {
    let spec = Quad::default();
    let args = Hyp::new(a.a, a.b, a.c, a.z)?;
    row(out, "a", a.a);
    row(out, "b", a.b);
    row(out, "c", a.c);
    row(out, "z", a.z);
    row(out, "2F1", hyp2f1(args, &spec)?);
    if a.deriv {
        row(out, "d/dz 2F1", hyp2f1_deriv(args, &spec)?);
    }
    Ok(EXIT_OK)
}

fn cmd_fraclap(a: FraclapArgs, out: &mut dyn Write) -> Outcome {
    let spec = Quad::default();
    let p = params(a.n, a.sigma)?;
    let s = a.s.unwrap_or(p.slow_decay());
    row(out, "n", a.n);
    row(out, "sigma", a.sigma);
    row(out, "s", s);
    row(out, "lambda(s)", frac_power_constant(&p, s)?);
    if s < p.riesz_exponent() {
        row(out, "lambda(s) riesz", frac_power_constant_riesz(&p, s, &spec)?);
    }
    if p.m().is_some() {
        row(out, "F(s,m)", poly_power_constant(&p, s)?);
    }
    row(out, "C2", c2(&p)?);
    Ok(EXIT_OK)
}

fn cmd_extension(a: ExtensionArgs, out: &mut dyn Write) -> Outcome {
    let spec = Quad::default();
    let tight = Quad::tight();
    let p = params(a.n, a.sigma)?;
    p.require_fractional()?;
    if !(a.x >= 0.0 && a.t >= 0.0) {
        return Err(Failure::Invalid(format!("the point (x, t) = ({}, {}) must lie in the closed upper half-space", a.x, a.t)));
    }
    row(out, "n", a.n);
    row(out, "sigma", a.sigma);
    row(out, "m0", a.m0);
    row(out, "C0", c0(&p)?);
    let closed = bubble_extension_closed(&p, a.m0, a.x, a.t, &spec)?;
    row(out, "U0 closed", closed);
    if a.t > 0.0 {
        let quad = bubble_extension_quadrature(&p, a.m0, a.x, a.t, &spec)?;
        row(out, "U0 quadrature", quad);
        row(out, "rel error", ((closed - quad) / closed).abs());
    }
    if a.x > 0.0 && a.t > 0.0 {
        let h = 1e-3 * a.x.min(a.t);
        row(out, "Delta_b U0 (fd)", weighted_laplacian_residual(&p, a.m0, a.x, a.t, h, &tight)?);
    }
    if a.x > 0.0 {
        let ladder = neumann_ladder(a.x, 4);
        row(out, "neumann closed", neumann_trace_closed(&p, a.m0, a.x)?);
        row(out, "neumann extrapolated", neumann_trace(&p, a.m0, a.x, &ladder, &spec)?);
        let v = n_constant_verdict(&p, a.x, &spec)?;
        row(out, "N measured", v.measured);
        row(out, "N gamma(1-sigma)", v.gamma_one_minus_sigma);
        row(out, "N gamma(sigma)", v.gamma_sigma);
        if let Some(path) = &a.csv {
            let mut csv = String::from("t,quotient\n");
            for t in ladder {
                csv.push_str(&format!("{t},{}\n", neumann_quotient(&p, a.m0, a.x, t, &spec)?));
            }
            write_file(path, &csv)?;
        }
    } else if a.csv.is_some() {
        return Err(Failure::Invalid("the Neumann trace CSV needs x > 0".into()));
    }
    Ok(EXIT_OK)
}

fn cmd_pohozaev(a: PohozaevArgs, out: &mut dyn Write) -> Outcome {
    let spec = Quad::default();
    let report = match (a.m, a.sigma) {
        (Some(m), None) => pohozaev_limit_integer(&Params::integer(a.n, m)?, a.kinf)?,
        (None, Some(sigma)) => pohozaev_limit_fractional(&params(a.n, sigma)?, a.kinf, &spec)?,
        _ => return Err(Failure::Invalid("exactly one of --m and --sigma is required".into())),
    };
    row(out, "n", a.n);
    match a.m {
        Some(m) => row(out, "m", m),
        None => row(out, "sigma", report.params.sigma()),
    }
    row(out, "kinf", a.kinf);
    row(out, "m0", report.m0);
    row(out, "closed value", report.closed_value);
    row(out, "oracle value", report.oracle_value);
    row(out, "rel error", report.rel_error);
    row(out, "sign factor", report.sign_factor);
    if let Some(path) = &a.json {
        let text = serde_json::to_string_pretty(&report).map_err(|e| Failure::Failed(e.to_string()))?;
        write_file(path, &(text + "\n"))?;
    }
    Ok(EXIT_OK)
}

fn cmd_inteq(a: InteqArgs, out: &mut dyn Write) -> Outcome {
    let spec = Quad::default();
    let p = params(a.n, a.sigma)?;
    if a.init_scale.is_nan() || a.init_scale <= 0.0 {
        return Err(Failure::Invalid(format!("init-scale must be positive, got {}", a.init_scale)));
    }
    let mass = kernel_mass(&p, &spec)?;
    let constant = constant_fixed_point(&p, a.kinf, mass)?;
    let op = CylOperator::new(p, a.t_min, a.step, a.len, &spec)?;
    let initial = CylProfile::constant(a.t_min, a.step, a.len, a.init_scale * constant)?;
    let options = FixedPointOptions {
        damping: a.damping,
        max_iters: a.max_iters,
        tol: a.tol,
        update: match a.update {
            Update::Picard => UpdateRule::Picard,
            Update::Rescaled => UpdateRule::Rescaled,
        },
    };
    row(out, "n", a.n);
    row(out, "sigma", a.sigma);
    row(out, "kinf", a.kinf);
    row(out, "kernel mass", mass);
    row(out, "constant A", constant);
    let (profile, log, failure) = match solve_fixed_point(&op, a.kinf, initial, &options) {
        Ok(sol) => (sol.profile, sol.log, None),
        Err(f) => {
            if let Error::Domain(_) = f.error {
                return Err(f.error.into());
            }
            (f.last, f.log, Some(f.error))
        }
    };
    row(out, "iterations", log.residuals.len());
    if let Some(r) = log.residuals.last() {
        row(out, "final residual", *r);
    }
    let deviation = profile.values().iter().map(|v| (v / constant - 1.0).abs()).fold(0.0, f64::max);
    row(out, "max |V/A - 1|", deviation);
    row(out, "converged", failure.is_none());
    if let Some(path) = &a.csv {
        write_file(path, &profile.to_csv())?;
    }
    if let Some(path) = &a.log {
        write_file(path, &log.to_csv())?;
    }
    match failure {
        None => Ok(EXIT_OK),
        Some(e) => Err(e.into()),
    }
}

fn cmd_verify(a: VerifyArgs, out: &mut dyn Write) -> Outcome {
    let report = run_suite(&a.suite)
        .map_err(|_| Failure::Invalid(format!("unknown suite {:?}; expected one of {}", a.suite, suite_names().join(", "))))?;
    let _ = write!(out, "{}", report.to_table());
    if let Some(path) = &a.json {
        let text = serde_json::to_string_pretty(&report).map_err(|e| Failure::Failed(e.to_string()))?;
        write_file(path, &(text + "\n"))?;
    }
    Ok(if report.overall_pass { EXIT_OK } else { EXIT_FAILURE })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_lines() {
        let text = "# settings\nn = 3\n\nmax_iters = 20 # trailing\n";
        let got = parse_config(text).unwrap();
        assert_eq!(got, vec![("n".to_string(), "3".to_string()), ("max-iters".to_string(), "20".to_string())]);
        assert!(parse_config("n 3").is_err());
        assert!(parse_config("n =").is_err());
    }

    #[test]
    fn config_goes_before_flags() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.conf");
        fs::write(&path, "n = 5\nsigma = 0.5\n").unwrap();
        let argv = ["liouville", "fraclap", "--config", path.to_str().unwrap(), "--n", "3"].map(String::from).to_vec();
        let merged = merge_config(argv).unwrap();
        assert_eq!(merged[..2], ["liouville", "fraclap"]);
        assert_eq!(merged[2..6], ["--n", "5", "--sigma", "0.5"]);
        assert_eq!(merged[6..], ["--n", "3"]);
    }
}
