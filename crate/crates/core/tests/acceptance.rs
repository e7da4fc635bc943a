//! End-to-end acceptance suite. Each criterion prints one PASS/FAIL line;
//! the test fails if any criterion does.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod common;

use std::process::Command;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::strategy::{Strategy, ValueTree};
use proptest::test_runner::TestRunner;
use qdeform::claims::{self, RunConfig, Status};
use qdeform::expr::{parse, print_canonical, OperatorExpr};
use qdeform::fock::{Backend, FockRep};
use qdeform::opalg::{commutation_catalogue, nf_equal, normal_order, AlgebraFamily, DiagonalFunction, FamilyKind};
use qdeform::qnum::{basic_number, limit_q1, BasicKind};
use qdeform::scalar::ScalarValue;
use qdeform::transforms::{solve_structure_function, TargetRelation, Transform};

const Q_GRID: [f64; 5] = [0.3, 0.5, 0.9, 1.1, 2.0];
const FERMIONIC_Q: [f64; 3] = [0.3, 0.5, 0.9];

// Pinned tolerances.
const EXACT_TOL: f64 = 1e-12;
const BOUNDARY_REL_TOL: f64 = 1e-9;
const MATRIX_TOL: f64 = 1e-10;
const ORACLE_TOL: f64 = 1e-9;
const PROBE_TOL: f64 = 1e-6;
const PROBE_STEP: f64 = 1e-8;
const E2E_BUDGET: Duration = Duration::from_secs(60);

type Outcome = Result<(), String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn text(s: &str) -> OperatorExpr {
    parse(s).unwrap_or_else(|e| panic!("{s}: {e}"))
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn err(e: qdeform::Error) -> String {
    e.to_string()
}

/// Exact per-level values of a diagonal normal form.
fn diagonal_of(t: &Transform, raised_first: bool) -> Result<DiagonalFunction, String> {
    let (lower, raise) = t.apply().map_err(err)?;
    let nf = if raised_first { raise } else { lower };
    nf.as_diagonal().ok_or_else(|| format!("{} is not diagonal", nf))
}

fn same_levels(f: &DiagonalFunction, g: &DiagonalFunction, levels: i64) -> Outcome {
    for n in 0..=levels {
        let (x, y) = (f.eval(n).map_err(err)?, g.eval(n).map_err(err)?);
        ensure!(x == y, "level {n}: {x} != {y}");
    }
    Ok(())
}

fn q_boson_relation() -> Outcome {
    let rep_dim = 32;
    for q in Q_GRID {
        let rep = FockRep::new(&AlgebraFamily::q_boson(), q, rep_dim, Backend::Exact).map_err(err)?;
        let t = rep.residual(&text("a*ad - q*ad*a"), &text("q^-N")).map_err(err)?;
        ensure!(t.max_interior_absolute <= EXACT_TOL, "q={q}: interior residual {}", t.max_interior_absolute);
        let top = t.levels.last().unwrap();
        ensure!(!top.interior && top.level == rep_dim, "q={q}: level {rep_dim} should be boundary");
        let want = basic_number(BasicKind::Boson, rep_dim as i64 + 1).map_err(err)?.eval(q).map_err(err)?.re;
        let got = top.absolute.ok_or("singular boundary")?;
        ensure!(
            (got - want).abs() <= BOUNDARY_REL_TOL * want.abs(),
            "q={q}: boundary {got} vs [{}] = {want}",
            rep_dim + 1
        );
    }
    Ok(())
}

fn deformed_diagonals() -> Outcome {
    for q in Q_GRID {
        for (kind, pairs) in [
            (FamilyKind::QBoson, [("ad*a", "[N]"), ("a*ad", "[N+1]")]),
            (FamilyKind::QFermion, [("bd*b", "[N]F"), ("b*bd", "[N+1]F")]),
        ] {
            let rep = FockRep::new(&AlgebraFamily::new(kind), q, 16, Backend::Exact).map_err(err)?;
            for (lhs, rhs) in pairs {
                let t = rep.residual(&text(lhs), &text(rhs)).map_err(err)?;
                ensure!(t.max_interior_absolute == 0.0, "{kind} q={q}: {lhs} = {rhs} off by {}", t.max_interior_absolute);
            }
        }
    }
    Ok(())
}

fn commutation_property() -> Outcome {
    let family = AlgebraFamily::q_boson();
    let catalogue = commutation_catalogue();
    ensure!(catalogue.len() == 11, "catalogue has {} functions", catalogue.len());
    for (name, f, first) in catalogue {
        let fa = OperatorExpr::product(OperatorExpr::diag(f.clone()), OperatorExpr::a());
        let af = OperatorExpr::product(OperatorExpr::a(), OperatorExpr::diag(f.shift(-1)));
        let x = normal_order(&fa, &family).map_err(err)?;
        let y = normal_order(&af, &family).map_err(err)?;
        ensure!(nf_equal(&x, &y, 20), "{name}: {x} vs {y}");
        for q in Q_GRID {
            let rep = FockRep::new(&family, q, 24, Backend::Numeric).map_err(err)?;
            let t = rep.residual(&fa, &af).map_err(err)?;
            for l in t.interior() {
                match l.relative {
                    Some(r) => ensure!(r < MATRIX_TOL, "{name} q={q} level {}: {r}", l.level),
                    // column n reads f at n-1, so only f's excluded levels may be singular
                    None => ensure!(l.level as i64 <= first, "{name} q={q}: singular at level {}", l.level),
                }
            }
        }
    }
    Ok(())
}

fn q2_scaling() -> Outcome {
    let t = Transform::named("q2_scaling").map_err(err)?;
    let defects = t.relation_defects(&t.target, 20).map_err(err)?;
    ensure!(defects.iter().all(ScalarValue::is_zero), "relation defects {defects:?}");
    let want = DiagonalFunction::mul(
        DiagonalFunction::q_pow(1.into(), (-1).into()),
        DiagonalFunction::basic(BasicKind::Boson, 0),
    );
    same_levels(&diagonal_of(&t, false)?, &want, 20)
}

fn boson_undeformation() -> Outcome {
    let family = AlgebraFamily::q_boson();
    let solved = solve_structure_function(&family, &TargetRelation::boson(), 20).map_err(err)?;
    for (n, v) in solved.iter().enumerate() {
        let n = n as i64;
        let want = &ScalarValue::from_int(n + 1) * &basic_number(BasicKind::Boson, n + 1).map_err(err)?.inv().map_err(err)?;
        ensure!(*v == want, "f({n}) = {v}, expected {want}");
    }
    let t = Transform::named("boson_undeform").map_err(err)?;
    let defects = t.relation_defects(&TargetRelation::boson(), 20).map_err(err)?;
    ensure!(defects.iter().all(ScalarValue::is_zero), "relation defects {defects:?}");
    same_levels(&diagonal_of(&t, false)?, &DiagonalFunction::n(), 20)
}

fn fermion_undeformation() -> Outcome {
    let t = Transform::named("fermion_undeform").map_err(err)?;
    let dim = 16;
    for q in FERMIONIC_Q {
        let table = t.check_relation(&TargetRelation::fermion(), q, dim, Backend::Numeric).map_err(err)?;
        for l in &table.levels[..dim] {
            let v = l.value.ok_or("singular level")?;
            let want = if l.level == 0 { 0.5 } else { 1.0 };
            ensure!((v - want).abs() <= EXACT_TOL, "q={q} level {}: anticommutator {v}", l.level);
        }
    }
    let pauli = t.pauli_check(0.5, dim, Backend::Exact).map_err(err)?;
    let (n, norm) = pauli[0];
    ensure!(n == 2 && (norm - 0.5).abs() <= EXACT_TOL, "norm of b1^2|2> is {norm}");
    Ok(())
}

fn solver_fermion_undeformation() -> Outcome {
    let family = AlgebraFamily::q_fermion();
    let solved = solve_structure_function(&family, &TargetRelation::fermion(), 19).map_err(err)?;
    for n in (1..=19).step_by(2) {
        ensure!(solved[n].is_zero(), "f({n}) = {}", solved[n]);
    }
    let t = Transform::from_table("solved", family.clone(), solved, TargetRelation::fermion());
    let square = OperatorExpr::product(t.lowered(), t.lowered());
    for q in FERMIONIC_Q {
        let m = FockRep::new(&family, q, 16, Backend::Exact).map_err(err)?.eval_expr(&square).map_err(err)?;
        for i in 0..m.size() {
            for j in 0..m.size() {
                ensure!(m.is_zero_at(i, j), "q={q}: A^2 entry ({i},{j}) = {:?}", m.exact_entry(i, j));
            }
        }
    }
    Ok(())
}

fn transmutation() -> Outcome {
    let t = Transform::named("transmutation").map_err(err)?;
    same_levels(&diagonal_of(&t, false)?, &DiagonalFunction::n(), 20)?;
    same_levels(&diagonal_of(&t, true)?, &DiagonalFunction::n().shift(1), 20)?;
    let defects = t.relation_defects(&TargetRelation::boson(), 20).map_err(err)?;
    ensure!(defects.iter().all(ScalarValue::is_zero), "boson relation defects {defects:?}");

    let printed = Transform::named("transmutation_as_printed").map_err(err)?;
    let at_two = diagonal_of(&printed, false)?.eval(2).map_err(err)?.at_q(&rat(1, 2)).map_err(err)?;
    ensure!(at_two == ScalarValue::from_ratio(8, 3), "as printed, level 2 at q = 1/2 gives {at_two}");

    let config = RunConfig { backend: Backend::Exact, ..RunConfig::default() };
    let result = claims::run_claim(&claims::select("C12a").map_err(err)?[0], &config).map_err(err)?;
    ensure!(result.status == Status::Fail, "C12a status {}", result.status);
    ensure!(result.per_q.iter().all(|r| r.levels_failed.contains(&2)), "C12a does not fail at level 2");
    Ok(())
}

fn number_operator_formula() -> Outcome {
    let config = RunConfig { dim: 12, backend: Backend::Exact, ..RunConfig::default() };
    let selected = claims::select("C3a,C3b").map_err(err)?;
    let report = claims::run_claims(&selected, &config).map_err(err)?;
    let (plus, minus) = (&report.claims[0], &report.claims[1]);
    ensure!(minus.status == Status::Pass, "minus-sign variant: {}", minus.status);
    for r in &minus.per_q {
        ensure!(r.max_interior_residual.is_some_and(|x| x <= EXACT_TOL), "minus-sign variant at q={}: {:?}", r.q, r.max_interior_residual);
    }
    ensure!(plus.status == Status::Fail, "plus-sign variant: {}", plus.status);
    for r in &plus.per_q {
        ensure!(r.levels_failed.first() == Some(&1), "plus-sign variant at q={}: first failure {:?}", r.q, r.levels_failed.first());
    }
    Ok(())
}

fn limits() -> Outcome {
    for n in 0..=10i64 {
        let (b, f) = (limit_q1(BasicKind::Boson, n), limit_q1(BasicKind::Fermion, n));
        ensure!(b == rat(n, 1), "[{n}] -> {b}");
        ensure!(f == rat(n % 2, 1), "[{n}]F -> {f}");
        for kind in [BasicKind::Boson, BasicKind::Fermion] {
            let limit = if kind == BasicKind::Boson { n } else { n % 2 } as f64;
            let x = basic_number(kind, n).map_err(err)?;
            for q in [1.0 - PROBE_STEP, 1.0 + PROBE_STEP] {
                let v = x.eval(q).map_err(err)?.re;
                ensure!((v - limit).abs() <= PROBE_TOL, "{kind:?} [{n}] at q={q}: {v}");
            }
        }
    }
    let rep = FockRep::new(&AlgebraFamily::q_fermion(), 1.0, 16, Backend::Exact).map_err(err)?;
    for e in ["b*b", "bd*bd"] {
        let m = rep.eval_expr(&text(e)).map_err(err)?;
        for i in 0..m.size() {
            for j in 0..m.size() {
                ensure!(m.is_zero_at(i, j), "{e} at q = 1: entry ({i},{j}) = {:?}", m.exact_entry(i, j));
            }
        }
    }
    Ok(())
}

fn oracle_equivalence() -> Outcome {
    let mut runner = TestRunner::deterministic();
    let strategy = common::operator_expr();
    let family = AlgebraFamily::q_boson();
    let rep = FockRep::new(&family, 0.7, 12, Backend::Numeric).map_err(err)?;
    for _ in 0..200 {
        let e = strategy.new_tree(&mut runner).map_err(|e| e.to_string())?.current();
        let nf = normal_order(&e, &family).map_err(err)?;
        let t = rep.residual(&e, &nf.to_expr()).map_err(err)?;
        ensure!(t.max_interior < ORACLE_TOL, "{}: residual {}", print_canonical(&e), t.max_interior);
    }
    Ok(())
}

fn verify_json() -> Result<String, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_qdeform"))
        .args(["verify", "--claims", "all", "--format", "json"])
        .output()
        .map_err(|e| e.to_string())?;
    ensure!(out.status.code() == Some(0), "exit {:?}: {}", out.status.code(), String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).map_err(|e| e.to_string())
}

fn keys(v: &serde_json::Value) -> Vec<&str> {
    v.as_object().map(|o| o.keys().map(String::as_str).collect()).unwrap_or_default()
}

fn end_to_end() -> Outcome {
    let start = Instant::now();
    let first = verify_json()?;
    let second = verify_json()?;
    let elapsed = start.elapsed() / 2;
    ensure!(elapsed < E2E_BUDGET, "verify took {elapsed:?}");
    ensure!(first == second, "reports differ between runs");

    let v: serde_json::Value = serde_json::from_str(&first).map_err(|e| e.to_string())?;
    ensure!(keys(&v) == ["version", "config", "claims"], "top-level keys {:?}", keys(&v));
    let mut config_keys = keys(&v["config"]);
    config_keys.sort();
    ensure!(config_keys == ["backend", "dim", "q_grid", "tol"], "config keys {config_keys:?}");
    let claims = v["claims"].as_array().ok_or("claims is not an array")?;
    ensure!(claims.len() == claims::registry().len(), "{} claims reported", claims.len());
    for c in claims {
        ensure!(keys(c) == ["id", "paper_ref", "status", "per_q"], "claim keys {:?}", keys(c));
        ensure!(["pass", "partial", "fail"].contains(&c["status"].as_str().unwrap_or("")), "status {}", c["status"]);
        for r in c["per_q"].as_array().ok_or("per_q is not an array")? {
            ensure!(keys(r) == ["q", "max_interior_residual", "levels_failed", "flags"], "per_q keys {:?}", keys(r));
            ensure!(r["q"].is_number(), "q {}", r["q"]);
            ensure!(r["levels_failed"].is_array() && r["flags"].is_array(), "per_q arrays in {}", c["id"]);
        }
    }
    Ok(())
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 12] = [
        ("q-boson relation and truncation signature", q_boson_relation),
        ("deformed diagonals", deformed_diagonals),
        ("commutation property", commutation_property),
        ("q^2 scaling", q2_scaling),
        ("boson undeformation", boson_undeformation),
        ("fermion undeformation", fermion_undeformation),
        ("solver-based fermion undeformation", solver_fermion_undeformation),
        ("transmutation", transmutation),
        ("number-operator formula", number_operator_formula),
        ("q -> 1 limits", limits),
        ("oracle equivalence", oracle_equivalence),
        ("end-to-end verify", end_to_end),
    ];
    let mut failed = Vec::new();
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(()) => println!("PASS {:>2} {name}", i + 1),
            Err(why) => {
                println!("FAIL {:>2} {name}: {why}", i + 1);
                failed.push(i + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
