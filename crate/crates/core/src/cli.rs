//! Command-line front end.
//!
//! Exit statuses: 0 success, 1 inequality or monotonicity violation,
//! 2 invalid input (including poles), 3 convergence failure.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::classical::euler_digamma_series;
use crate::error::Error;
use crate::inequality::{
    first_increase, g_prime, log_ratio_g, verify_classical, verify_inequality, x_grid, GridSpec,
    DEFAULT_MARGIN_TOL, DEFAULT_MONOTONE_TOL, DEFAULT_SEED,
};
use crate::qgamma::{qdigamma, qgamma};
use crate::qseries::{QParameter, TruncationPolicy};
use crate::report::{fmt_real, write_report};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_DOMAIN: i32 = 2;
pub const EXIT_CONVERGENCE: i32 = 3;

/// Largest tolerated `g'` in sweeps.
const G_PRIME_TOL: f64 = 1e-9;

#[derive(Debug, Parser)]
#[command(name = "qgamma", version, about = "q-gamma evaluation and inequality verification")]
pub struct CliConfig {
    #[command(subcommand)]
    pub command: Command,

    /// Base q (q < 1 or q > 1; q = 1 is rejected)
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub q: Option<f64>,
    /// Argument x
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub x: Option<f64>,
    /// Exponent a >= 1
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub a: Option<f64>,
    /// Comma-separated q values in (0,1)
    #[arg(long = "q-list", global = true, value_delimiter = ',', allow_hyphen_values = true)]
    pub q_list: Vec<f64>,
    /// Comma-separated a values >= 1
    #[arg(long = "a-list", global = true, value_delimiter = ',', allow_hyphen_values = true)]
    pub a_list: Vec<f64>,
    /// Number of uniform x points on [0,1], endpoints included
    #[arg(long = "x-count", global = true)]
    pub x_count: Option<usize>,
    /// Series truncation tolerance
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub epsilon: Option<f64>,
    /// Term cap for every series
    #[arg(long = "max-terms", global = true)]
    pub max_terms: Option<u64>,
    /// Violation tolerance
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub tol: Option<f64>,
    /// Output file (defaults to standard output)
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Seed recorded in verification reports
    #[arg(long, global = true)]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Evaluate Γ_q(x); prints x,q,value,log_value,error_bound,terms_used
    Eval,
    /// q-digamma at x (0<q<1), or the classical digamma series when --q is absent
    Digamma,
    /// Tabulate x,f,g,g_prime for fixed q and a
    Sweep,
    /// Certify the q-inequality over a grid
    Verify,
    /// Certify the classical inequality over a grid
    VerifyClassical,
}

/// A failure that ends the run with a specific exit status.
struct Exit {
    code: i32,
    msg: String,
}

impl Exit {
    fn flag(flag: &str, msg: impl std::fmt::Display) -> Self {
        Exit {
            code: EXIT_DOMAIN,
            msg: format!("{flag}: {msg}"),
        }
    }
}

impl From<Error> for Exit {
    fn from(e: Error) -> Self {
        let code = if e.is_convergence() {
            EXIT_CONVERGENCE
        } else {
            EXIT_DOMAIN
        };
        Exit {
            code,
            msg: e.to_string(),
        }
    }
}

impl From<io::Error> for Exit {
    fn from(e: io::Error) -> Self {
        Exit {
            code: EXIT_DOMAIN,
            msg: format!("i/o error: {e}"),
        }
    }
}

fn required<T: Copy>(v: Option<T>, flag: &str) -> Result<T, Exit> {
    v.ok_or_else(|| Exit::flag(flag, "is required for this subcommand"))
}

fn finite(v: f64, flag: &str) -> Result<f64, Exit> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Exit::flag(flag, format!("must be finite, got {v}")))
    }
}

fn base(v: f64, flag: &str) -> Result<QParameter, Exit> {
    QParameter::new(v).map_err(|e| Exit::flag(flag, e))
}

fn base_below_one(v: f64, flag: &str) -> Result<QParameter, Exit> {
    QParameter::less_than_one(v).map_err(|e| Exit::flag(flag, e))
}

fn exponent(v: f64, flag: &str) -> Result<f64, Exit> {
    if v >= 1.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(Exit::flag(flag, format!("must be finite and >= 1, got {v}")))
    }
}

impl CliConfig {
    fn policy(&self, default: TruncationPolicy) -> Result<TruncationPolicy, Exit> {
        let epsilon = self.epsilon.unwrap_or(default.epsilon);
        let max_terms = self.max_terms.unwrap_or(default.max_terms);
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(Exit::flag("--epsilon", format!("must lie in (0,1), got {epsilon}")));
        }
        if max_terms == 0 {
            return Err(Exit::flag("--max-terms", "must be at least 1"));
        }
        Ok(TruncationPolicy {
            epsilon,
            max_terms,
            ..default
        })
    }

    fn tol(&self, default: f64) -> Result<f64, Exit> {
        match self.tol {
            None => Ok(default),
            Some(t) if t >= 0.0 && t.is_finite() => Ok(t),
            Some(t) => Err(Exit::flag("--tol", format!("must be finite and >= 0, got {t}"))),
        }
    }

    fn x_count(&self, default: usize) -> Result<usize, Exit> {
        let n = self.x_count.unwrap_or(default);
        if n < 2 {
            return Err(Exit::flag("--x-count", format!("must be at least 2, got {n}")));
        }
        Ok(n)
    }

    fn a_list(&self) -> Result<Vec<f64>, Exit> {
        if self.a_list.is_empty() {
            return Err(Exit::flag("--a-list", "is required for this subcommand"));
        }
        self.a_list.iter().map(|&a| exponent(a, "--a-list")).collect()
    }
}

/// Parses `args` (including the program name) and runs the subcommand.
/// Returns the process exit status.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let config = match CliConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(stderr, "{text}");
                EXIT_DOMAIN
            } else {
                let _ = write!(stdout, "{text}");
                EXIT_OK
            };
        }
    };
    match dispatch(&config, stdout) {
        Ok(code) => code,
        Err(exit) => {
            let _ = writeln!(stderr, "error: {}", exit.msg);
            exit.code
        }
    }
}

fn dispatch(config: &CliConfig, stdout: &mut dyn Write) -> Result<i32, Exit> {
    match &config.output {
        Some(path) => {
            let file = File::create(path).map_err(|e| Exit::flag("--output", e))?;
            let mut out = BufWriter::new(file);
            let code = execute(config, &mut out)?;
            out.flush()?;
            Ok(code)
        }
        None => execute(config, stdout),
    }
}

fn execute(config: &CliConfig, out: &mut dyn Write) -> Result<i32, Exit> {
    match config.command {
        Command::Eval => cmd_eval(config, out),
        Command::Digamma => cmd_digamma(config, out),
        Command::Sweep => cmd_sweep(config, out),
        Command::Verify => cmd_verify(config, out),
        Command::VerifyClassical => cmd_verify_classical(config, out),
    }
}

fn cmd_eval(config: &CliConfig, out: &mut dyn Write) -> Result<i32, Exit> {
    let q = base(required(config.q, "--q")?, "--q")?;
    let x = finite(required(config.x, "--x")?, "--x")?;
    let policy = config.policy(TruncationPolicy::default())?;
    let r = qgamma(x, q, &policy)?;
    writeln!(
        out,
        "{},{},{},{},{},{}",
        fmt_real(x),
        fmt_real(q.q()),
        fmt_real(r.value),
        fmt_real(r.log_value),
        fmt_real(r.error_bound),
        r.terms_used
    )?;
    Ok(EXIT_OK)
}

fn cmd_digamma(config: &CliConfig, out: &mut dyn Write) -> Result<i32, Exit> {
    let x = finite(required(config.x, "--x")?, "--x")?;
    if x <= 0.0 {
        return Err(Exit::flag("--x", format!("must be > 0, got {x}")));
    }
    match config.q {
        Some(qv) => {
            let q = base_below_one(qv, "--q")?;
            let policy = config.policy(TruncationPolicy::default())?;
            let v = qdigamma(x, q, &policy)?;
            writeln!(out, "{},{},{}", fmt_real(x), fmt_real(qv), fmt_real(v))?;
        }
        None => {
            let policy = config.policy(TruncationPolicy::digamma_series_default())?;
            let v = euler_digamma_series(x, &policy)?;
            writeln!(out, "{},{}", fmt_real(x), fmt_real(v))?;
        }
    }
    Ok(EXIT_OK)
}

fn cmd_sweep(config: &CliConfig, out: &mut dyn Write) -> Result<i32, Exit> {
    let q = base_below_one(required(config.q, "--q")?, "--q")?;
    let a = exponent(required(config.a, "--a")?, "--a")?;
    let n = config.x_count(11)?;
    let tol = config.tol(DEFAULT_MONOTONE_TOL)?;
    let policy = config.policy(TruncationPolicy::default())?;

    writeln!(out, "x,f,g,g_prime")?;
    let mut fs = Vec::with_capacity(n);
    let mut max_gp = f64::NEG_INFINITY;
    for x in x_grid(n) {
        let g = log_ratio_g(x, a, q, &policy)?;
        let gp = g_prime(x, a, q, &policy)?;
        writeln!(out, "{},{},{},{}", fmt_real(x), fmt_real(g.exp()), fmt_real(g), fmt_real(gp))?;
        fs.push(g.exp());
        max_gp = max_gp.max(gp);
    }
    let monotone = first_increase(&fs, tol).is_none();
    writeln!(out, "# monotone={} max_g_prime={}", monotone, fmt_real(max_gp))?;
    Ok(if monotone && max_gp <= G_PRIME_TOL {
        EXIT_OK
    } else {
        EXIT_VIOLATION
    })
}

fn finish_report(report: &crate::inequality::InequalityReport, out: &mut dyn Write) -> Result<i32, Exit> {
    write_report(report, out)?;
    if let Some(err) = &report.aborted {
        return Err(err.clone().into());
    }
    Ok(if report.pass() { EXIT_OK } else { EXIT_VIOLATION })
}

fn cmd_verify(config: &CliConfig, out: &mut dyn Write) -> Result<i32, Exit> {
    if config.q_list.is_empty() {
        return Err(Exit::flag("--q-list", "is required for this subcommand"));
    }
    for &q in &config.q_list {
        base_below_one(q, "--q-list")?;
    }
    let a_values = config.a_list()?;
    let n = config.x_count(101)?;
    let tol = config.tol(DEFAULT_MARGIN_TOL)?;
    let policy = config.policy(TruncationPolicy::default())?;
    let grid = GridSpec::new(config.q_list.clone(), a_values, n)?;
    let report = verify_inequality(&grid, &policy, tol).with_seed(config.seed.unwrap_or(DEFAULT_SEED));
    finish_report(&report, out)
}

fn cmd_verify_classical(config: &CliConfig, out: &mut dyn Write) -> Result<i32, Exit> {
    let a_values = config.a_list()?;
    let n = config.x_count(101)?;
    let tol = config.tol(DEFAULT_MARGIN_TOL)?;
    let report = verify_classical(&a_values, n, tol)?.with_seed(config.seed.unwrap_or(DEFAULT_SEED));
    finish_report(&report, out)
}
