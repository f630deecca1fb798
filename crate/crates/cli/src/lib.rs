//! The `symquad` command line: search, verification, evaluation, expansion
//! and ranking of symmetric quadrature rules.
//!
//! Every subcommand prints `key=value` lines. Exit codes are 0 on success,
//! 1 when a search finds nothing or a verification fails, and 2 on usage or
//! input errors.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Args, Parser, Subcommand};
use symquad_core::rules::io::{
    parse_rule, write_expanded, write_rule, DOUBLE_DIGITS, EXTENDED_DIGITS,
};
use symquad_core::{
    is_pi, refine, refine_extended, search, truncation_error, verify_strength, DomainKind,
    QuadratureRule, Real as _, RuleQuality, SolverConfig,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NOT_FOUND: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Rule {
        path: PathBuf,
        source: symquad_core::Error,
    },
    #[error("{0}")]
    Config(symquad_core::Error),
}

#[derive(Debug, Parser)]
#[command(
    name = "symquad",
    version,
    about = "Fully symmetric quadrature rules on reference domains"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Search for rules and write each one to a file.
    Find(FindArgs),
    /// Check a rule against the full orthonormal basis.
    Verify(VerifyArgs),
    /// Print the truncation error of a rule.
    Eval(EvalArgs),
    /// Print the expanded points and weights of a rule.
    Expand(ExpandArgs),
    /// Order rule files by their next-degree truncation error.
    Rank(RankArgs),
}

#[derive(Debug, Args)]
pub struct FindArgs {
    /// Domain: tri, quad, tet, pri, pyr or hex.
    #[arg(short = 'd', long)]
    pub domain: DomainKind,
    /// Number of points.
    #[arg(short = 'n', long = "points", value_parser = clap::value_parser!(u64).range(1..))]
    pub points: u64,
    /// Strength.
    #[arg(short = 'q', long = "strength", value_parser = clap::value_parser!(u32).range(1..))]
    pub strength: u32,
    /// Seconds spent on each decomposition.
    #[arg(short = 't', long = "time", default_value_t = 1.0, value_parser = positive_seconds)]
    pub time: f64,
    /// Cap on the whole search, in seconds.
    #[arg(long, value_parser = positive_seconds)]
    pub total_time: Option<f64>,
    /// Keep only rules with positive weights and interior points.
    #[arg(short = 'p', long)]
    pub pi_only: bool,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    pub workers: u64,
    /// Cap on minimizations per decomposition.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub attempts: Option<u64>,
    /// Stop a decomposition after this many consecutive successful attempts
    /// without a new rule; 0 disables.
    #[arg(long, default_value_t = 64)]
    pub saturation: usize,
    /// Output directory.
    #[arg(short = 'o', long, default_value = ".")]
    pub outdir: PathBuf,
    /// Significant digits: 17 (double) or 34 (double-double refinement).
    #[arg(long, default_value_t = DOUBLE_DIGITS, value_parser = digits)]
    pub digits: usize,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    pub file: PathBuf,
    /// Strength to verify; defaults to the strength in the file.
    #[arg(short = 'q', long = "strength")]
    pub strength: Option<u32>,
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    pub file: PathBuf,
    /// Degree of the truncation error; defaults to the strength in the file.
    #[arg(short = 'q', long = "strength")]
    pub strength: Option<u32>,
}

#[derive(Debug, Args)]
pub struct ExpandArgs {
    pub file: PathBuf,
    #[arg(long, default_value_t = DOUBLE_DIGITS, value_parser = digits)]
    pub digits: usize,
}

#[derive(Debug, Args)]
pub struct RankArgs {
    #[arg(required = true)]
    pub files: Vec<PathBuf>,
}

fn positive_seconds(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v > 0.0 && v.is_finite() => Ok(v),
        _ => Err(format!("`{s}` is not a positive number of seconds")),
    }
}

fn digits(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(d) if d == DOUBLE_DIGITS || d == EXTENDED_DIGITS => Ok(d),
        _ => Err(format!(
            "digits must be {DOUBLE_DIGITS} or {EXTENDED_DIGITS}"
        )),
    }
}

/// Reads and validates a rule file.
pub fn parse_rule_file(path: &Path) -> Result<QuadratureRule, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_rule(&text).map_err(|source| CliError::Rule {
        path: path.to_path_buf(),
        source,
    })
}

/// File name of the `index`-th rule of a search.
pub fn rule_file_name(kind: DomainKind, phi: u32, points: usize, index: usize) -> String {
    format!("{}-q{phi}-n{points}-{index}.txt", kind.short_name())
}

fn sci(v: f64) -> String {
    format!("{v:.6e}")
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(err, "{text}")
            } else {
                write!(out, "{text}")
            };
            return code;
        }
    };
    let result = match &cli.command {
        Command::Find(a) => find(a, out, err),
        Command::Verify(a) => verify(a, out),
        Command::Eval(a) => eval(a, out),
        Command::Expand(a) => expand(a, out),
        Command::Rank(a) => rank(a, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

fn io_error(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn find(a: &FindArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    let cfg = SolverConfig {
        time_budget: Duration::from_secs_f64(a.time),
        total_time: a.total_time.map(Duration::from_secs_f64),
        max_attempts: a.attempts.map(|n| n as usize),
        saturation: (a.saturation > 0).then_some(a.saturation),
        rng_seed: a.seed,
        workers: a.workers as usize,
        ..SolverConfig::default()
    };
    cfg.validate().map_err(CliError::Config)?;
    let points = a.points as usize;
    let report = search(a.domain, points, a.strength, &cfg);

    let summary = |out: &mut dyn Write, written: usize| {
        writeln!(
            out,
            "domain={} points={points} strength={} decompositions={} viable={} attempts={} rules={written}",
            a.domain.short_name(),
            a.strength,
            report.decompositions,
            report.viable,
            report.attempts,
        )
    };

    if report.decompositions == 0 {
        let _ = summary(out, 0);
        let _ = writeln!(
            err,
            "no symmetric decompositions of {points} points on the {}",
            a.domain
        );
        return Ok(EXIT_NOT_FOUND);
    }

    fs::create_dir_all(&a.outdir).map_err(io_error(&a.outdir))?;
    let mut written = 0;
    for rule in &report.rules {
        let rule = refine(rule, &cfg).unwrap_or_else(|_| rule.clone());
        if a.pi_only && !is_pi(&rule) {
            continue;
        }
        let q = RuleQuality::assess(&rule);
        let (text, xi, xi_next) = if a.digits == EXTENDED_DIGITS {
            match refine_extended(&rule) {
                Ok(ext) => (
                    write_rule(&ext, EXTENDED_DIGITS),
                    truncation_error(&ext, rule.phi).to_f64(),
                    truncation_error(&ext, rule.phi + 1).to_f64(),
                ),
                Err(_) => (write_rule(&rule, EXTENDED_DIGITS), q.xi, q.xi_next),
            }
        } else {
            (write_rule(&rule, DOUBLE_DIGITS), q.xi, q.xi_next)
        };
        let path = a
            .outdir
            .join(rule_file_name(a.domain, a.strength, points, written));
        fs::write(&path, text).map_err(io_error(&path))?;
        let _ = writeln!(
            out,
            "file={} xi={} xi_next={} pi={} min_weight={}",
            path.display(),
            sci(xi),
            sci(xi_next),
            q.is_pi,
            sci(q.min_weight)
        );
        written += 1;
    }
    let _ = summary(out, written);
    if written == 0 {
        let _ = writeln!(err, "no rules found");
        return Ok(EXIT_NOT_FOUND);
    }
    Ok(EXIT_OK)
}

fn verify(a: &VerifyArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let rule = parse_rule_file(&a.file)?;
    let phi = a.strength.unwrap_or(rule.phi);
    let check = verify_strength(&rule, phi, a.tol);
    let _ = writeln!(
        out,
        "file={} strength={phi} max_residual={} pass={}",
        a.file.display(),
        sci(check.max_residual),
        check.pass
    );
    Ok(if check.pass { EXIT_OK } else { EXIT_NOT_FOUND })
}

fn eval(a: &EvalArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let rule = parse_rule_file(&a.file)?;
    let phi = a.strength.unwrap_or(rule.phi);
    let xi = truncation_error(&rule, phi);
    let _ = writeln!(out, "file={} strength={phi} xi={xi}", a.file.display());
    Ok(EXIT_OK)
}

fn expand(a: &ExpandArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let rule = parse_rule_file(&a.file)?;
    let text = if a.digits == EXTENDED_DIGITS {
        let text = fs::read_to_string(&a.file).map_err(io_error(&a.file))?;
        let ext =
            parse_rule::<symquad_core::DoubleDouble>(&text).map_err(|source| CliError::Rule {
                path: a.file.clone(),
                source,
            })?;
        write_expanded(&ext, EXTENDED_DIGITS)
    } else {
        write_expanded(&rule, DOUBLE_DIGITS)
    };
    let _ = write!(out, "{text}");
    Ok(EXIT_OK)
}

fn rank(a: &RankArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let mut rows = Vec::with_capacity(a.files.len());
    for path in &a.files {
        let rule = parse_rule_file(path)?;
        let q = RuleQuality::assess(&rule);
        rows.push((path, q));
    }
    // Stable, so equal values keep the command-line order.
    rows.sort_by(|x, y| x.1.xi_next.total_cmp(&y.1.xi_next));
    for (i, (path, q)) in rows.iter().enumerate() {
        let _ = writeln!(
            out,
            "rank={} file={} xi={} xi_next={} pi={}",
            i + 1,
            path.display(),
            sci(q.xi),
            sci(q.xi_next),
            q.is_pi
        );
    }
    Ok(EXIT_OK)
}
