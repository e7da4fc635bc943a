use num_traits::ToPrimitive;

use super::{Check, Claim, Evaluation, Expected, Point, QDomain, LIMIT_TOL};
use crate::error::Result;
use crate::expr::{parse, OperatorExpr};
use crate::fock::{Backend, FockRep, ResidualTable};
use crate::opalg::{commutation_catalogue, nf_compare, normal_order, AlgebraFamily, DiagonalFunction};
use crate::qnum::{basic_number, limit_q1, BasicKind};
use crate::transforms::{solve_structure_function, TargetRelation, Transform};

/// Every registered claim, in report order.
pub fn registry() -> Vec<Claim> {
    let claim = |id, description, paper_ref, expected, domain, eval| Claim {
        id,
        description,
        paper_ref,
        expected,
        domain,
        exact_decidable: true,
        tol: None,
        eval,
    };
    use Expected::*;
    use QDomain::*;
    vec![
        claim("C1", "standard boson algebra", "a0 a0† − a0† a0 = 1, [N,a0] = −a0, [N,a0†] = a0†, N = a0† a0", Confirmed, Grid, c1),
        claim("C2", "q-boson relation and number-operator commutators", "a a† − q a† a = q^{−N}, [N,a] = −a, [N,a†] = a†", Confirmed, Grid, c2),
        claim("C3a", "number operator from the ladder operators, sign as printed", "N = (1/(2 ln q)) ln((a a† + q^{−1} a† a)/(a a† + q a† a))", Discrepant, Grid, c3a),
        claim("C3b", "number operator from the ladder operators, minus signs", "N = (1/(2 ln q)) ln((a a† − q^{−1} a† a)/(a a† − q a† a))", Confirmed, Grid, c3b),
        claim("C4", "q-boson diagonals and Fock states", "a† a = [N], a a† = [N+1], |n⟩ = (a†)^n/√([n]!)|0⟩", Confirmed, Grid, c4),
        claim("C5", "q^{N/2} scaling gives a q^2 algebra", "a1 = q^{N/2} a: a1 a1† − q^2 a1† a1 = 1, a1† a1 = q^{N−1}[N], a1 a1† = q^N [N+1]", Confirmed, Grid, c5),
        claim("C6", "commutation property over the function catalogue", "f(N) a = a f(N−1), f(N) a† = a† f(N+1)", Confirmed, Grid, c6),
        claim("C7", "undeformation of the q-boson algebra", "[N+1] f(N) − [N] f(N−1) = 1, f(N) = (N+1)/[N+1], a2 a2† − a2† a2 = 1", Confirmed, Grid, c7),
        claim("C8", "standard fermion algebra", "b0 b0† + b0† b0 = 1, [N,b0] = −b0, {b0,b0} = {b0†,b0†} = 0, b0^2 = 0", Confirmed, Grid, c8),
        claim("C9", "q-fermion relation", "b b† + q b† b = q^{−N}, [N,b] = −b, [N,b†] = b†", Confirmed, Fermionic, c9),
        claim("C10", "q-fermion diagonals and Fock states", "b† b = [N]^F, b b† = [N+1]^F, |n⟩ = (b†)^n/√([n]^F!)|0⟩", Confirmed, Fermionic, c10),
        claim("C11a", "fermion undeformation anticommutator", "T(N) = (1/(2[N+1]^F))^{1/2}: b1 b1† + b1† b1 = 1", Partial(vec![0]), Fermionic, c11a),
        claim("C11b", "exclusion for the undeformed fermion", "{b1, b1} = 0", Discrepant, Fermionic, c11b),
        claim("C12a", "fermion-boson transmutation as printed", "a2 = ((N+1)/[N+1]^F) b: a2† a2 = N, a2 a2† = N+1", Discrepant, Fermionic, c12a),
        claim("C12b", "fermion-boson transmutation with square-root weight", "a2 = ((N+1)/[N+1]^F)^{1/2} b: a2 a2† − a2† a2 = 1, a2† a2 = N, a2 a2† = N+1, [N,a2] = −a2, [a2,a2] = 0", Confirmed, Fermionic, c12b),
        Claim {
            tol: Some(LIMIT_TOL),
            exact_decidable: false,
            ..claim("C13", "q → 1 limits", "[n] → n, [n]^F → n mod 2, q-boson → standard boson, q-fermion → standard fermion, b^2 = 0 at q = 1", Confirmed, Limit, c13)
        },
    ]
}

fn rep(p: &Point, family: AlgebraFamily, ev: &mut Evaluation) -> Result<FockRep> {
    let r = FockRep::new(&family, p.q, p.dim, p.backend)?;
    if !r.is_hermitian() {
        ev.flag("non-hermitian");
    }
    Ok(r)
}

fn text(rep: &FockRep, lhs: &str, rhs: &str) -> Result<Check> {
    Ok(Check::new(format!("{lhs} = {rhs}"), rep.residual(&parse(lhs)?, &parse(rhs)?)?))
}

fn exprs(rep: &FockRep, label: &str, lhs: &OperatorExpr, rhs: &OperatorExpr) -> Result<Check> {
    Ok(Check::new(label, rep.residual(lhs, rhs)?))
}

fn texts(rep: &FockRep, ev: &mut Evaluation, pairs: &[(&str, &str)]) -> Result<()> {
    for (l, r) in pairs {
        ev.push(text(rep, l, r)?);
    }
    Ok(())
}

/// `‖|n⟩ − e_n‖` for the constructed Fock states; Pauli-blocked states are
/// flagged and left out.
fn states(rep: &FockRep, ev: &mut Evaluation) -> Result<()> {
    let mut rows = Vec::new();
    let mut blocked = Vec::new();
    for n in 0..=rep.dim() {
        let s = rep.build_state(n)?;
        if s.zero_norm {
            ev.flag(format!("zero-norm:{n}"));
            blocked.push(n);
            rows.push((n, Some(0.0), Some(0.0)));
            continue;
        }
        let err: f64 = s
            .amplitudes
            .iter()
            .enumerate()
            .map(|(i, x)| (x - if i == n { 1.0 } else { 0.0 }).norm_sqr())
            .sum::<f64>()
            .sqrt();
        rows.push((n, Some(1.0), Some(err)));
    }
    ev.push(Check::new("|n> = (ad)^n/sqrt(Phi!)|0>", ResidualTable::from_rows(rows)).skipping(blocked));
    Ok(())
}

/// Operator identities every transformed pair should share with its target.
fn transformed_pair(rep: &FockRep, t: &Transform, ev: &mut Evaluation) -> Result<()> {
    let (a, ad) = (t.lowered(), t.raised());
    let n = OperatorExpr::diag(DiagonalFunction::n());
    ev.push(exprs(rep, "[N, A] = -A", &OperatorExpr::commutator(n.clone(), a.clone()), &OperatorExpr::neg(a.clone()))?);
    ev.push(exprs(rep, "[N, Ad] = Ad", &OperatorExpr::commutator(n, ad.clone()), &ad)?);
    Ok(())
}

fn relation(rep: &FockRep, t: &Transform, rel: &TargetRelation) -> Result<Check> {
    let (lhs, rhs) = rel.expressions(&t.lowered(), &t.raised());
    exprs(rep, &rel.to_string(), &lhs, &rhs)
}

fn number_products(rep: &FockRep, t: &Transform, lower: &str, raise: &str, ev: &mut Evaluation) -> Result<()> {
    let (a, ad) = (t.lowered(), t.raised());
    ev.push(exprs(rep, &format!("Ad*A = {lower}"), &OperatorExpr::product(ad.clone(), a.clone()), &parse(lower)?)?);
    ev.push(exprs(rep, &format!("A*Ad = {raise}"), &OperatorExpr::product(a, ad), &parse(raise)?)?);
    Ok(())
}

fn c1(p: &Point) -> Result<Evaluation> {
    let mut ev = Evaluation::default();
    let r = rep(p, AlgebraFamily::standard_boson(), &mut ev)?;
    texts(&r, &mut ev, &[("a*ad - ad*a", "1"), ("ad*a", "N"), ("[N, a]", "-a"), ("[N, ad]", "ad"), ("[a, a]", "0"), ("[ad, ad]", "0")])?;
    Ok(ev)
}

fn c2(p: &Point) -> Result<Evaluation> {
    let mut ev = Evaluation::default();
    let r = rep(p, AlgebraFamily::q_boson(), &mut ev)?;
    texts(&r, &mut ev, &[("a*ad - q*ad*a", "q^-N"), ("[N, a]", "-a"), ("[N, ad]", "ad")])?;
    Ok(ev)
}

fn c3a(p: &Point) -> Result<Evaluation> {
    let mut ev = Evaluation::default();
    let r = rep(p, AlgebraFamily::q_boson(), &mut ev)?;
    texts(&r, &mut ev, &[("q^(2*N)", "(a*ad + q^-1*ad*a)*(a*ad + q*ad*a)^-1")])?;
    Ok(ev)
}

fn c3b(p: &Point) -> Result<Evaluation> {
    let mut ev = Evaluation::default();
    let r = rep(p, AlgebraFamily::q_boson(), &mut ev)?;
    texts(&r, &mut ev, &[("q^(2*N)", "(a*ad - q^-1*ad*a)*(a*ad - q*ad*a)^-1")])?;
    Ok(ev)
}

fn c4(p: &Point) -> Result<Evaluation> {
    let mut ev = Evaluation::default();
    let r = rep(p, AlgebraFamily::q_boson(), &mut ev)?;
    texts(&r, &mut ev, &[("ad*a", "[N]"), ("a*ad", "[N+1]")])?;
    states(&r, &mut ev)?;
    Ok(ev)
}

fn c5(p: &Point) -> Result<Evaluation> {
    let mut ev = Evaluation::default();
    let t = Transform::named("q2_scaling")?;
    let r = rep(p, t.family.clone(), &mut ev)?;
    ev.push(relation(&r, &t, &t.target)?);
    number_products(&r, &t, "q^(N-1)*[N]", "q^N*[N+1]", &mut ev)?;
    transformed_pair(&r, &t, &mut ev)?;
    Ok(ev)
}

/// Levels at which the catalogue is compared in normal form.
const NF_LEVELS: i64 = 20;

fn c6(p: &Point) -> Result<Evaluation> {
    let mut ev = Evaluation::default();
    let family = AlgebraFamily::q_boson();
    let r = rep(p, family.clone(), &mut ev)?;
    for (name, f, first) in commutation_catalogue() {
        let first = first as usize;
        let fa = OperatorExpr::product(OperatorExpr::diag(f.clone()), OperatorExpr::a());
        let af = OperatorExpr::product(OperatorExpr::a(), OperatorExpr::diag(f.shift(-1)));
        let fad = OperatorExpr::product(OperatorExpr::diag(f.clone()), OperatorExpr::ad());
        let adf = OperatorExpr::product(OperatorExpr::ad(), OperatorExpr::diag(f.shift(1)));
        // a column n of f(N)a reads f at n-1
        ev.push(exprs(&r, &format!("f(N)*a = a*f(N-1), f = {name}"), &fa, &af)?.skipping(0..=first));
        ev.push(exprs(&r, &format!("f(N)*ad = ad*f(N+1), f = {name}"), &fad, &adf)?);

        let cmp = nf_compare(&normal_order(&fa, &family)?, &normal_order(&af, &family)?, NF_LEVELS);
        let rows = (0..=NF_LEVELS as usize)
            .map(|n| {
                let bad = cmp.mismatches.iter().any(|m| m.2 == n as i64);
                (n, Some(0.0), Some(if bad { 1.0 } else { 0.0 }))
            })
            .collect();
        ev.push(Check::new(format!("normal form of f(N)*a, f = {name}"), ResidualTable::from_rows(rows)));
    }
    Ok(ev)
}

fn c7(p: &Point) -> Result<Evaluation> {
    let mut ev = Evaluation::default();
    let t = Transform::named("boson_undeform")?;
    let r = rep(p, t.family.clone(), &mut ev)?;
    ev.push(relation(&r, &t, &t.target)?);

    let solved = solve_structure_function(&t.family, &t.target, p.dim)?;
    let mut rows = Vec::new();
    for (n, v) in solved.iter().enumerate() {
        let closed = t.weight.eval(n as i64)?;
        let diff = v - &closed;
        let value = closed.eval(p.q)?.norm();
        let residual = if diff.is_zero() { 0.0 } else { diff.eval(p.q).map_or(f64::INFINITY, |x| x.norm().max(f64::MIN_POSITIVE)) };
        rows.push((n, Some(value), Some(residual)));
    }
    ev.push(Check::new("solved f = (N+1)/[N+1]", ResidualTable::from_rows(rows)));
    number_products(&r, &t, "N", "N+1", &mut ev)?;
    transformed_pair(&r, &t, &mut ev)?;
    Ok(ev)
}

fn c8(p: &Point) -> Result<Evaluation> {
    let mut ev = Evaluation::default();
    let r = rep(p, AlgebraFamily::standard_fermion(), &mut ev)?;
    texts(
        &r,
        &mut ev,
        &[("b*bd + bd*b", "1"), ("bd*b", "N"), ("[N, b]", "-b"), ("[N, bd]", "bd"), ("{b, b}", "0"), ("{bd, bd}", "0"), ("b*b", "0"), ("bd*bd", "0")],
    )?;
    Ok(ev)
}

fn c9(p: &Point) -> Result<Evaluation> {
    let mut ev = Evaluation::default();
    let r = rep(p, AlgebraFamily::q_fermion(), &mut ev)?;
    texts(&r, &mut ev, &[("b*bd + q*bd*b", "q^-N"), ("[N, b]", "-b"), ("[N, bd]", "bd")])?;
    Ok(ev)
}

fn c10(p: &Point) -> Result<Evaluation> {
    let mut ev = Evaluation::default();
    let r = rep(p, AlgebraFamily::q_fermion(), &mut ev)?;
    texts(&r, &mut ev, &[("bd*b", "[N]F"), ("b*bd", "[N+1]F")])?;
    states(&r, &mut ev)?;
    Ok(ev)
}

fn c11a(p: &Point) -> Result<Evaluation> {
    let mut ev = Evaluation::default();
    let t = Transform::named("fermion_undeform")?;
    let r = rep(p, t.family.clone(), &mut ev)?;
    ev.push(relation(&r, &t, &t.target)?);
    transformed_pair(&r, &t, &mut ev)?;
    Ok(ev)
}

fn c11b(p: &Point) -> Result<Evaluation> {
    let mut ev = Evaluation::default();
    let t = Transform::named("fermion_undeform")?;
    let r = rep(p, t.family.clone(), &mut ev)?;
    let a = t.lowered();
    ev.push(exprs(&r, "{A, A} = 0", &OperatorExpr::anticommutator(a.clone(), a), &OperatorExpr::int(0))?);
    Ok(ev)
}

fn c12a(p: &Point) -> Result<Evaluation> {
    let mut ev = Evaluation::default();
    let t = Transform::named("transmutation_as_printed")?;
    let r = rep(p, t.family.clone(), &mut ev)?;
    number_products(&r, &t, "N", "N+1", &mut ev)?;
    ev.push(relation(&r, &t, &t.target)?);
    Ok(ev)
}

fn c12b(p: &Point) -> Result<Evaluation> {
    let mut ev = Evaluation::default();
    let t = Transform::named("transmutation")?;
    let r = rep(p, t.family.clone(), &mut ev)?;
    number_products(&r, &t, "N", "N+1", &mut ev)?;
    ev.push(relation(&r, &t, &t.target)?);
    transformed_pair(&r, &t, &mut ev)?;
    let (a, ad) = (t.lowered(), t.raised());
    let zero = OperatorExpr::int(0);
    ev.push(exprs(&r, "[A, A] = 0", &OperatorExpr::commutator(a.clone(), a), &zero)?);
    ev.push(exprs(&r, "[Ad, Ad] = 0", &OperatorExpr::commutator(ad.clone(), ad), &zero)?);
    Ok(ev)
}

/// Levels probed for the basic-number limits.
const LIMIT_LEVELS: i64 = 10;

fn c13(p: &Point) -> Result<Evaluation> {
    let mut ev = Evaluation::default();
    for (kind, label) in [(BasicKind::Boson, "[n] -> n"), (BasicKind::Fermion, "[n]F -> n mod 2")] {
        let mut probe = Vec::new();
        let mut exact = Vec::new();
        for n in 0..=LIMIT_LEVELS {
            let limit = limit_q1(kind, n);
            let target = match kind {
                BasicKind::Boson => n,
                BasicKind::Fermion => n.rem_euclid(2),
            };
            let value = basic_number(kind, n)?.eval(p.q)?.re;
            let lim = limit.to_f64().unwrap_or(f64::NAN);
            probe.push((n as usize, Some(value), Some((value - target as f64).abs())));
            exact.push((n as usize, Some(lim), Some(if limit == num_rational::BigRational::from_integer(target.into()) { 0.0 } else { 1.0 })));
        }
        ev.push(Check::new(label, ResidualTable::from_rows(probe)));
        ev.push(Check::new(format!("exact limit of {label}"), ResidualTable::from_rows(exact)));
    }
    let boson = rep(p, AlgebraFamily::q_boson(), &mut ev)?;
    texts(&boson, &mut ev, &[("a*ad - ad*a", "1")])?;
    let fermion = rep(p, AlgebraFamily::q_fermion(), &mut ev)?;
    texts(&fermion, &mut ev, &[("b*bd + bd*b", "1")])?;
    if p.q == 1.0 {
        let exact = FockRep::new(&AlgebraFamily::q_fermion(), 1.0, p.dim, Backend::Exact)?;
        texts(&exact, &mut ev, &[("b*b", "0"), ("bd*bd", "0")])?;
        let bb = exact.eval_expr(&parse("b*b")?)?;
        let zero = (0..=exact.dim())
            .map(|n| {
                let exactly_zero = (0..=exact.dim()).all(|i| bb.is_zero_at(i, n));
                (n, Some(0.0), Some(if exactly_zero { 0.0 } else { 1.0 }))
            })
            .collect();
        ev.push(Check::new("b*b = 0 exactly", ResidualTable::from_rows(zero)));
    }
    Ok(ev)
}
