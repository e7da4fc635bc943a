use std::fmt::Write as _;
use std::str::FromStr;

use super::{ClaimResult, VerificationReport};
use crate::error::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Markdown,
    Csv,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(Format::Json),
            "markdown" | "md" => Ok(Format::Markdown),
            "csv" => Ok(Format::Csv),
            _ => Err(Error::Config(format!("unknown format `{s}` (expected json, markdown or csv)"))),
        }
    }
}

pub fn emit_report(report: &VerificationReport, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("report serializes");
            s.push('\n');
            s
        }
        Format::Markdown => markdown(report),
        Format::Csv => csv(report),
    }
}

fn num(x: Option<f64>) -> String {
    x.map_or_else(String::new, |v| v.to_string())
}

fn list<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(", ")
}

fn markdown(report: &VerificationReport) -> String {
    let c = &report.config;
    let mut out = String::new();
    let _ = writeln!(out, "# Verification report\n");
    let _ = writeln!(out, "- version: {}", report.version);
    let _ = writeln!(out, "- backend: {}", c.backend);
    let _ = writeln!(out, "- dimension: {}", c.dim);
    let _ = writeln!(out, "- tolerance: {}", c.tol);
    let _ = writeln!(out, "- q grid: {}", list(&c.q_grid));
    for claim in &report.claims {
        claim_markdown(claim, &mut out);
    }
    out
}

fn claim_markdown(claim: &ClaimResult, out: &mut String) {
    let _ = writeln!(out, "\n## {}: {}\n", claim.id, claim.description);
    let _ = writeln!(out, "Statement: `{}`\n", claim.paper_ref);
    let _ = writeln!(out, "Status: {} (expected {})\n", claim.status, claim.expected.name());
    for r in &claim.per_q {
        if !r.levels_failed.is_empty() {
            let _ = writeln!(out, "- q = {}: failed levels {}", r.q, list(&r.levels_failed));
        }
        if !r.flags.is_empty() {
            let _ = writeln!(out, "- q = {}: flags {}", r.q, list(&r.flags));
        }
    }
    if claim.per_q.iter().any(|r| !r.levels_failed.is_empty() || !r.flags.is_empty()) {
        out.push('\n');
    }
    let _ = writeln!(out, "| q | level | value | residual |");
    let _ = writeln!(out, "|---|---|---|---|");
    for r in &claim.per_q {
        for row in &r.rows {
            let cell = |x: Option<f64>| x.map_or_else(|| "singular".to_string(), |v| v.to_string());
            let _ = writeln!(out, "| {} | {} | {} | {} |", r.q, row.level, cell(row.value), cell(row.residual));
        }
    }
}

fn csv(report: &VerificationReport) -> String {
    let mut out = String::from("claim,q,level,value,residual\n");
    for claim in &report.claims {
        for r in &claim.per_q {
            for row in &r.rows {
                let _ = writeln!(out, "{},{},{},{},{}", claim.id, r.q, row.level, num(row.value), num(row.residual));
            }
        }
    }
    out
}
