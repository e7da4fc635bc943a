//! Registry of verifiable statements about the oscillator algebras, a batch
//! runner over a q-grid, and report emitters.

mod registry;
mod report;

use std::collections::BTreeSet;
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fock::{Backend, ResidualTable};

pub use registry::registry;
pub use report::{emit_report, Format};

pub const DEFAULT_Q_GRID: [f64; 5] = [0.3, 0.5, 0.9, 1.1, 2.0];
pub const FERMIONIC_FALLBACK_GRID: [f64; 3] = [0.3, 0.5, 0.9];
pub const DEFAULT_DIM: usize = 16;
pub const DEFAULT_TOL: f64 = 1e-10;
/// Probe points and tolerance of the `q → 1` claim.
pub const LIMIT_PROBES: [f64; 3] = [1.0 - 1e-8, 1.0, 1.0 + 1e-8];
pub const LIMIT_TOL: f64 = 1e-6;

/// What the harness is expected to find for a claim.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expected {
    Confirmed,
    /// Holds except on exactly these levels.
    Partial(Vec<usize>),
    Discrepant,
}

impl Expected {
    pub fn name(&self) -> &'static str {
        match self {
            Expected::Confirmed => "confirmed",
            Expected::Partial(_) => "partial",
            Expected::Discrepant => "discrepant",
        }
    }

    pub fn matches(&self, status: Status) -> bool {
        matches!(
            (self, status),
            (Expected::Confirmed, Status::Pass)
                | (Expected::Partial(_), Status::Partial)
                | (Expected::Discrepant, Status::Fail)
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Partial,
    Fail,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Partial => "partial",
            Status::Fail => "fail",
        })
    }
}

/// Which q values a claim is evaluated on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QDomain {
    Grid,
    /// Grid points below 1, where fermionic weights stay nonnegative.
    Fermionic,
    /// The fixed probes around `q = 1`.
    Limit,
}

/// Evaluation point handed to a claim.
#[derive(Clone, Copy, Debug)]
pub struct Point {
    pub q: f64,
    pub dim: usize,
    pub backend: Backend,
}

/// One comparison inside a claim.
#[derive(Clone, Debug)]
pub struct Check {
    pub label: String,
    pub table: ResidualTable,
    /// Levels excluded from the verdict (outside the statement's domain).
    pub skip: Vec<usize>,
}

impl Check {
    pub fn new(label: impl Into<String>, table: ResidualTable) -> Self {
        Self {
            label: label.into(),
            table,
            skip: Vec::new(),
        }
    }

    pub fn skipping(mut self, levels: impl IntoIterator<Item = usize>) -> Self {
        self.skip.extend(levels);
        self
    }

    fn failing(&self, tol: f64) -> Vec<usize> {
        self.table
            .failing_levels(tol)
            .into_iter()
            .filter(|n| !self.skip.contains(n))
            .collect()
    }

    fn max_interior(&self) -> f64 {
        self.table
            .interior()
            .filter(|l| !self.skip.contains(&l.level))
            .map(|l| l.relative.unwrap_or(f64::NAN))
            .fold(0.0, |acc, x| if x.is_nan() || acc.is_nan() { f64::NAN } else { acc.max(x) })
    }
}

#[derive(Clone, Debug, Default)]
pub struct Evaluation {
    pub checks: Vec<Check>,
    pub flags: BTreeSet<String>,
}

impl Evaluation {
    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn flag(&mut self, flag: impl Into<String>) {
        self.flags.insert(flag.into());
    }
}

pub type ClaimFn = fn(&Point) -> Result<Evaluation>;

#[derive(Clone)]
pub struct Claim {
    pub id: &'static str,
    pub description: &'static str,
    /// The statement being checked, as a formula.
    pub paper_ref: &'static str,
    pub expected: Expected,
    pub domain: QDomain,
    /// Re-run with the exact backend when the numeric backend is selected.
    pub exact_decidable: bool,
    /// Tolerance override (the limit claim uses its own).
    pub tol: Option<f64>,
    pub eval: ClaimFn,
}

impl fmt::Debug for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Claim").field("id", &self.id).finish_non_exhaustive()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunConfig {
    pub q_grid: Vec<f64>,
    pub dim: usize,
    pub tol: f64,
    pub backend: Backend,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            q_grid: DEFAULT_Q_GRID.to_vec(),
            dim: DEFAULT_DIM,
            tol: DEFAULT_TOL,
            backend: Backend::Numeric,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.q_grid.is_empty() {
            return Err(Error::Config("empty q grid".into()));
        }
        if let Some(q) = self.q_grid.iter().find(|q| !(**q > 0.0) || !q.is_finite()) {
            return Err(Error::Config(format!("q values must be positive, got {q}")));
        }
        if self.dim < 2 || self.dim > crate::fock::MAX_DIM {
            return Err(Error::Config(format!(
                "dimension must be in 2..={}, got {}",
                crate::fock::MAX_DIM,
                self.dim
            )));
        }
        if !(self.tol >= 0.0) || !self.tol.is_finite() {
            return Err(Error::Config(format!("tolerance must be nonnegative, got {}", self.tol)));
        }
        Ok(())
    }

    fn q_values(&self, domain: QDomain) -> Vec<f64> {
        let mut qs: Vec<f64> = match domain {
            QDomain::Grid => self.q_grid.clone(),
            QDomain::Fermionic => {
                let below: Vec<f64> = self.q_grid.iter().copied().filter(|q| *q < 1.0).collect();
                if below.is_empty() {
                    FERMIONIC_FALLBACK_GRID.to_vec()
                } else {
                    below
                }
            }
            QDomain::Limit => LIMIT_PROBES.to_vec(),
        };
        qs.sort_by(f64::total_cmp);
        qs.dedup();
        qs
    }
}

/// One row of a claim's per-level table.
#[derive(Clone, Debug, PartialEq)]
pub struct LevelRow {
    pub level: usize,
    pub value: Option<f64>,
    pub residual: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QResult {
    pub q: f64,
    pub max_interior_residual: Option<f64>,
    pub levels_failed: Vec<usize>,
    pub flags: Vec<String>,
    #[serde(skip)]
    pub rows: Vec<LevelRow>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClaimResult {
    pub id: String,
    pub paper_ref: String,
    pub status: Status,
    pub per_q: Vec<QResult>,
    #[serde(skip)]
    pub description: String,
    #[serde(skip)]
    pub expected: Expected,
}

impl ClaimResult {
    pub fn matches_expected(&self) -> bool {
        self.expected.matches(self.status)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub version: String,
    pub config: RunConfig,
    pub claims: Vec<ClaimResult>,
}

impl VerificationReport {
    pub fn empty(config: RunConfig) -> Self {
        Self {
            version: env!("CARGO_PKG_VERSION").to_string(),
            config,
            claims: Vec::new(),
        }
    }

    pub fn all_match_expected(&self) -> bool {
        self.claims.iter().all(ClaimResult::matches_expected)
    }
}

/// Resolves `all` or a comma-separated id list against the registry,
/// keeping registry order.
pub fn select(ids: &str) -> Result<Vec<Claim>> {
    let all = registry();
    let wanted: Vec<&str> = ids.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
    if wanted.is_empty() {
        return Err(Error::Config("no claims selected".into()));
    }
    if wanted.iter().any(|w| w.eq_ignore_ascii_case("all")) {
        return Ok(all);
    }
    for w in &wanted {
        if !all.iter().any(|c| c.id.eq_ignore_ascii_case(w)) {
            return Err(Error::UnknownClaim(w.to_string()));
        }
    }
    Ok(all
        .into_iter()
        .filter(|c| wanted.iter().any(|w| c.id.eq_ignore_ascii_case(w)))
        .collect())
}

fn evaluate_at(claim: &Claim, config: &RunConfig, q: f64) -> Result<QResult> {
    let tol = claim.tol.unwrap_or(config.tol);
    let point = Point {
        q,
        dim: config.dim,
        backend: config.backend,
    };
    let mut eval = (claim.eval)(&point)?;
    if claim.exact_decidable && config.backend == Backend::Numeric {
        // The exact run decides; the float run only reports round-off.
        let numeric_failed: BTreeSet<usize> = eval.checks.iter().flat_map(|c| c.failing(tol)).collect();
        let numeric_flags = std::mem::take(&mut eval.flags);
        eval = (claim.eval)(&Point {
            backend: Backend::Exact,
            ..point
        })?;
        let exact_failed: BTreeSet<usize> = eval.checks.iter().flat_map(|c| c.failing(tol)).collect();
        for n in numeric_failed.difference(&exact_failed) {
            eval.flag(format!("numeric-roundoff:{n}"));
        }
        eval.flags.extend(numeric_flags);
        eval.flag("exact-rerun");
    }
    let failed: BTreeSet<usize> = eval.checks.iter().flat_map(|c| c.failing(tol)).collect();
    let max = eval.checks.iter().map(Check::max_interior).fold(0.0, nan_max);
    let singular: Vec<String> = eval
        .checks
        .iter()
        .flat_map(|c| c.table.singular_levels().into_iter().map(move |n| format!("singular:{}:{n}", c.label)))
        .collect();
    eval.flags.extend(singular);
    Ok(QResult {
        q,
        max_interior_residual: Some(max).filter(|x| x.is_finite()),
        levels_failed: failed.into_iter().collect(),
        flags: eval.flags.into_iter().collect(),
        rows: rows_of(&eval.checks),
    })
}

fn nan_max(a: f64, b: f64) -> f64 {
    if a.is_nan() || b.is_nan() {
        f64::NAN
    } else {
        a.max(b)
    }
}

/// Rows follow the interior levels of the first check; the residual column
/// is the worst relative residual over all checks at that level.
fn rows_of(checks: &[Check]) -> Vec<LevelRow> {
    let Some(primary) = checks.first() else {
        return Vec::new();
    };
    primary
        .table
        .interior()
        .map(|l| {
            let residual = checks
                .iter()
                .flat_map(|c| c.table.interior().filter(|x| x.level == l.level && !c.skip.contains(&x.level)))
                .map(|x| x.relative)
                .try_fold(0.0f64, |acc, r| r.map(|r| acc.max(r)));
            LevelRow {
                level: l.level,
                value: l.value,
                residual,
            }
        })
        .collect()
}

/// Evaluates one claim on its q domain.
pub fn run_claim(claim: &Claim, config: &RunConfig) -> Result<ClaimResult> {
    let per_q = config
        .q_values(claim.domain)
        .into_par_iter()
        .map(|q| evaluate_at(claim, config, q))
        .collect::<Result<Vec<_>>>()?;
    let failed: BTreeSet<usize> = per_q.iter().flat_map(|r| r.levels_failed.iter().copied()).collect();
    let status = if failed.is_empty() {
        Status::Pass
    } else {
        match &claim.expected {
            Expected::Partial(allowed) if failed.iter().all(|n| allowed.contains(n)) => Status::Partial,
            _ => Status::Fail,
        }
    };
    Ok(ClaimResult {
        id: claim.id.to_string(),
        paper_ref: claim.paper_ref.to_string(),
        status,
        per_q,
        description: claim.description.to_string(),
        expected: claim.expected.clone(),
    })
}

/// Evaluates every claim in `claims` on the configured grid. Output order
/// is the input order, then ascending q, whatever the scheduling.
pub fn run_claims(claims: &[Claim], config: &RunConfig) -> Result<VerificationReport> {
    config.validate()?;
    let results = claims
        .par_iter()
        .map(|c| run_claim(c, config))
        .collect::<Result<Vec<_>>>()?;
    Ok(VerificationReport {
        claims: results,
        ..VerificationReport::empty(config.clone())
    })
}
