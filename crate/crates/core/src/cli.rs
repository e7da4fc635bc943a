//! Command-line front end.
//!
//! Exit codes: 0 success, 1 usage or parse error, 2 computation error,
//! 3 a verified claim disagreed with its expected status.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::claims::{self, Format, RunConfig};
use crate::error::{Error, Result};
use crate::expr::{parse, OperatorExpr};
use crate::fock::{Backend, QPoint};
use crate::opalg::{normal_order, AlgebraFamily, DiagonalFunction, FamilyKind};
use crate::qnum::{basic_number, BasicKind};
use crate::scalar::ScalarValue;
use crate::transforms::{solve_structure_function, TargetRelation, Transform};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_COMPUTATION: i32 = 2;
pub const EXIT_MISMATCH: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "qdeform", version, about = "Workbench for q-deformed boson and fermion oscillator algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Output {
    /// Write the result to this file instead of standard output
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Normal-order an operator expression
    Reduce {
        expr: String,
        #[arg(long, default_value = "qboson")]
        family: FamilyKind,
        #[command(flatten)]
        output: Output,
    },
    /// Run registered claims over a q grid
    Verify {
        /// `all` or a comma-separated list of claim ids
        #[arg(long, default_value = "all")]
        claims: String,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_values_t = claims::DEFAULT_Q_GRID)]
        q: Vec<f64>,
        #[arg(long, default_value_t = claims::DEFAULT_DIM)]
        dim: usize,
        #[arg(long, default_value_t = claims::DEFAULT_TOL)]
        tol: f64,
        #[arg(long, default_value = "numeric")]
        backend: Backend,
        #[arg(long, default_value = "json")]
        format: Format,
        #[command(flatten)]
        output: Output,
    },
    /// Apply a catalogue transform and check its target relation
    Transform {
        #[arg(long)]
        name: String,
        #[arg(long, allow_hyphen_values = true, default_value_t = 0.5)]
        q: f64,
        #[arg(long, default_value_t = claims::DEFAULT_DIM)]
        dim: usize,
        #[arg(long, default_value = "exact")]
        backend: Backend,
        #[command(flatten)]
        output: Output,
    },
    /// Tabulate the weight f solving f(n)Φ₊(n) − λ f(n−1)Φ₋(n) = g(n)
    SolveF {
        #[arg(long)]
        family: FamilyKind,
        /// A constant, possibly q-dependent (e.g. `1`, `-1`, `q^2`)
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
        /// A function of N (e.g. `1`, `q^-N`)
        #[arg(long, allow_hyphen_values = true)]
        g: String,
        #[arg(long, default_value_t = 10)]
        levels: usize,
        /// Also print numeric values at this q
        #[arg(long, allow_hyphen_values = true)]
        q: Option<f64>,
        #[command(flatten)]
        output: Output,
    },
    /// Tabulate the basic numbers [n] and [n]F
    Spectrum {
        #[arg(long, default_value_t = 10)]
        levels: usize,
        /// Also print numeric values at this q
        #[arg(long, allow_hyphen_values = true)]
        q: Option<f64>,
        #[command(flatten)]
        output: Output,
    },
}

/// Runs the CLI on `args` (including the program name) and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(stderr, "{text}");
                EXIT_USAGE
            } else {
                let _ = write!(stdout, "{text}");
                EXIT_OK
            };
        }
    };
    let (input, result) = dispatch(&cli.command);
    match result {
        Ok((text, out, code)) => match out {
            Some(path) => match std::fs::write(path, text) {
                Ok(()) => code,
                Err(e) => {
                    let _ = writeln!(stderr, "error: cannot write {}: {e}", path.display());
                    EXIT_COMPUTATION
                }
            },
            None => {
                let _ = write!(stdout, "{text}");
                code
            }
        },
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            if let (Some(src), Some(offset)) = (input, error_offset(&e)) {
                let _ = writeln!(stderr, "  {src}\n  {}^", " ".repeat(src[..offset.min(src.len())].chars().count()));
            }
            if e.is_usage() {
                EXIT_USAGE
            } else {
                EXIT_COMPUTATION
            }
        }
    }
}

fn error_offset(e: &Error) -> Option<usize> {
    match e {
        Error::Syntax { offset, .. } | Error::UnknownIdentifier { offset, .. } => Some(*offset),
        _ => None,
    }
}

type Outcome<'a> = Result<(String, Option<&'a PathBuf>, i32)>;

/// The expression text being parsed, for caret diagnostics, and the outcome.
fn dispatch(command: &Command) -> (Option<&str>, Outcome<'_>) {
    match command {
        Command::Reduce { expr, family, output } => (
            Some(expr),
            reduce(expr, *family).map(|t| (t, output.out.as_ref(), EXIT_OK)),
        ),
        Command::Verify {
            claims,
            q,
            dim,
            tol,
            backend,
            format,
            output,
        } => {
            let config = RunConfig {
                q_grid: q.clone(),
                dim: *dim,
                tol: *tol,
                backend: *backend,
            };
            (None, verify(claims, &config, *format).map(|(t, c)| (t, output.out.as_ref(), c)))
        }
        Command::Transform {
            name,
            q,
            dim,
            backend,
            output,
        } => (None, transform(name, *q, *dim, *backend).map(|t| (t, output.out.as_ref(), EXIT_OK))),
        Command::SolveF {
            family,
            lambda,
            g,
            levels,
            q,
            output,
        } => {
            let mut src = None;
            let r = solve_f(*family, lambda, g, *levels, *q, &mut src);
            (src.map(|s| if s { lambda.as_str() } else { g.as_str() }), r.map(|t| (t, output.out.as_ref(), EXIT_OK)))
        }
        Command::Spectrum { levels, q, output } => {
            (None, spectrum(*levels, *q).map(|t| (t, output.out.as_ref(), EXIT_OK)))
        }
    }
}

fn reduce(expr: &str, family: FamilyKind) -> Result<String> {
    let e = parse(expr)?;
    Ok(format!("{}\n", normal_order(&e, &AlgebraFamily::new(family))?))
}

fn verify(ids: &str, config: &RunConfig, format: Format) -> Result<(String, i32)> {
    let selected = claims::select(ids)?;
    let report = claims::run_claims(&selected, config)?;
    let code = if report.all_match_expected() { EXIT_OK } else { EXIT_MISMATCH };
    Ok((claims::emit_report(&report, format), code))
}

fn transform(name: &str, q: f64, dim: usize, backend: Backend) -> Result<String> {
    let t = Transform::named(name)?;
    let (lower, raise) = t.apply()?;
    let mut out = format!(
        "transform {} on {} (q = {q}, D = {dim}, {backend} backend)\nweight f = {}, carried with exponent {}\nAd*A = {lower}\nA*Ad = {raise}\n",
        t.name,
        t.family.name(),
        t.weight,
        t.exponent,
    );
    let table = t.check_relation(&t.target, q, dim, backend)?;
    out.push_str(&format!("\nrelation {}\n| level | value | residual | region |\n|---|---|---|---|\n", t.target));
    for l in &table.levels {
        let cell = |x: Option<f64>| x.map_or_else(|| "singular".into(), |v: f64| v.to_string());
        let region = if l.interior { "interior" } else { "boundary" };
        out.push_str(&format!("| {} | {} | {} | {region} |\n", l.level, cell(l.value), cell(l.absolute)));
    }
    if dim >= 2 {
        out.push_str("\nPauli check: norm of A^2|n>\n| n | norm |\n|---|---|\n");
        for (n, v) in t.pauli_check(q, dim, backend)? {
            out.push_str(&format!("| {n} | {v} |\n"));
        }
    }
    Ok(out)
}

/// `src` records which flag was being parsed: `Some(true)` for lambda.
fn solve_f(
    family: FamilyKind,
    lambda: &str,
    g: &str,
    levels: usize,
    q: Option<f64>,
    src: &mut Option<bool>,
) -> Result<String> {
    let family = AlgebraFamily::new(family);
    *src = Some(true);
    let lambda_fn = diagonal(lambda, &family)?;
    let lambda_value = lambda_fn.eval(0)?;
    if (1..=8).any(|n| lambda_fn.eval(n).ok().as_ref() != Some(&lambda_value)) {
        return Err(Error::Config(format!("lambda `{lambda}` must not depend on N")));
    }
    *src = Some(false);
    let g_fn = diagonal(g, &family)?;
    *src = None;
    let rel = TargetRelation::new(lambda_value, g_fn);
    let table = solve_structure_function(&family, &rel, levels)?;
    let mut out = format!("weight for {} with {rel}\n", family.name());
    match q {
        Some(q) => out.push_str(&format!("| n | f(n) | f(n) at q = {q} |\n|---|---|---|\n")),
        None => out.push_str("| n | f(n) |\n|---|---|\n"),
    }
    for (n, v) in table.iter().enumerate() {
        match q {
            Some(q) => out.push_str(&format!("| {n} | {v} | {} |\n", fmt_complex(v, q)?)),
            None => out.push_str(&format!("| {n} | {v} |\n")),
        }
    }
    Ok(out)
}

fn diagonal(text: &str, family: &AlgebraFamily) -> Result<DiagonalFunction> {
    let e: OperatorExpr = parse(text)?;
    normal_order(&e, family)?
        .as_diagonal()
        .ok_or_else(|| Error::Config(format!("`{text}` is not a function of N")))
}

fn fmt_complex(v: &ScalarValue, q: f64) -> Result<String> {
    let z = v.eval(q)?;
    Ok(if z.im == 0.0 { z.re.to_string() } else { format!("{}{:+}i", z.re, z.im) })
}

fn spectrum(levels: usize, q: Option<f64>) -> Result<String> {
    if let Some(q) = q {
        QPoint::new(q)?;
    }
    let mut out = match q {
        Some(q) => format!("| n | [n] | [n]F | [n] at q = {q} | [n]F at q = {q} |\n|---|---|---|---|---|\n"),
        None => "| n | [n] | [n]F |\n|---|---|---|\n".to_string(),
    };
    for n in 0..=levels as i64 {
        let boson = basic_number(BasicKind::Boson, n)?;
        let fermion = basic_number(BasicKind::Fermion, n)?;
        match q {
            Some(q) => out.push_str(&format!(
                "| {n} | {boson} | {fermion} | {} | {} |\n",
                fmt_complex(&boson, q)?,
                fmt_complex(&fermion, q)?
            )),
            None => out.push_str(&format!("| {n} | {boson} | {fermion} |\n")),
        }
    }
    Ok(out)
}
