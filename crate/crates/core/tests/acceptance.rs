//! Acceptance criteria. Each test writes one `PASS`/`FAIL` line to stderr
//! (unbuffered, so it shows up without `--nocapture`) and then asserts.

use std::io::Write;
use std::time::Instant;

use qsphere::bridge::verify_isomorphism;
use qsphere::germ::{check_theta_algebra, enumerate_germs};
use qsphere::groupoid::check_axioms;
use qsphere::oracle::{compare_all, sphere_relations_check, theta_generator_check, TruncationSpec};
use qsphere::semigroup::relations::{check_product_rules, LOWER_TIMES_HIGHER, TOP_LEVEL};
use qsphere::spectrum::{bounded_ultrafilters, filter_of, is_ultrafilter_at, phi_injective_on_quotient, Character};
use qsphere::{ExtendedIndex, SheuTriple, TElement};

fn report(n: u32, name: &str, pass: bool, start: Instant, detail: String) {
    let verdict = if pass { "PASS" } else { "FAIL" };
    let line = format!(
        "[acceptance {n}] {verdict} {name} ({:.1}s) {detail}\n",
        start.elapsed().as_secs_f64()
    );
    std::io::stderr().write_all(line.as_bytes()).unwrap();
    assert!(pass, "{}", line.trim_end());
}

#[test]
fn c1_inverse_semigroup_laws() {
    let start = Instant::now();
    let elems = TElement::enumerate(2, 2, 2);
    let idems: Vec<&TElement> = elems.iter().filter(|e| e.is_idempotent()).collect();
    let mut failures = Vec::new();
    for s in &elems {
        let st = s.star();
        if s.mul(&st).and_then(|x| x.mul(s)).as_ref() != Ok(s) {
            failures.push(format!("s s* s != s for {s}"));
        }
        if st.mul(s).and_then(|x| x.mul(&st)).as_ref() != Ok(&st) {
            failures.push(format!("s* s s* != s* for {s}"));
        }
        for t in &elems {
            match s.mul(t) {
                Ok(p) => {
                    if p.star() != t.star().mul(&st).unwrap() {
                        failures.push(format!("(st)* != t* s* for {s}, {t}"));
                    }
                    if let Some(b) = p.as_b() {
                        if TElement::new(b.level(), b.r(), b.m(), b.n()).as_ref() != Ok(&p) {
                            failures.push(format!("{s} {t} is not canonical"));
                        }
                    }
                }
                Err(e) => failures.push(format!("{s} {t}: {e}")),
            }
        }
    }
    for e in &idems {
        for f in &idems {
            if e.mul(f).unwrap() != f.mul(e).unwrap() {
                failures.push(format!("{e} {f} do not commute"));
            }
        }
    }
    report(
        1,
        "inverse-semigroup suite",
        failures.is_empty(),
        start,
        format!(
            "elements={} idempotents={} pairs={} failures={:?}",
            elems.len(),
            idems.len(),
            elems.len() * elems.len(),
            &failures[..failures.len().min(5)]
        ),
    );
}

#[test]
fn c2_oracle_equivalence() {
    let start = Instant::now();
    let spec = TruncationSpec::new(2, 8, 8, 0.0).unwrap();
    let rep = compare_all(spec, 2).unwrap();
    report(
        2,
        "symbolic products match truncated matrices",
        rep.failed == 0 && rep.max_residual == 0.0,
        start,
        format!(
            "checked={} failed={} max_residual={} first_failures={:?}",
            rep.checked,
            rep.failed,
            rep.max_residual,
            &rep.failures[..rep.failures.len().min(5)]
        ),
    );
}

#[test]
fn c3_relation_audit() {
    let start = Instant::now();
    let audit = check_product_rules(2, 2);
    let find = |name: &str| audit.relations.iter().find(|r| r.name == name).unwrap();
    let top = &find(TOP_LEVEL).readings[0];
    let lower = find(LOWER_TIMES_HIGHER).reading("output level k = j").unwrap();
    let pass = top.holds() && lower.holds() && audit.consistent_same_level_readings.len() == 1;
    report(
        3,
        "product-rule audit",
        pass,
        start,
        format!(
            "top level {}/{} ok, i<j (k=j) {}/{} ok, consistent same-level readings {:?}",
            top.cases - top.failures,
            top.cases,
            lower.cases - lower.failures,
            lower.cases,
            audit.consistent_same_level_readings
        ),
    );
}

#[test]
fn c4_tight_spectrum() {
    let start = Instant::now();
    let bound = 4;
    let mut failures = Vec::new();
    let mut checked = 0;
    for ell in 1..=2 {
        for k in ExtendedIndex::grid(ell, 2) {
            checked += 1;
            if !is_ultrafilter_at(&Character::Tight(k.clone()), bound) {
                failures.push(format!("phi({k}) is not an ultrafilter at {bound}"));
            }
        }
        let traces: Vec<_> = ExtendedIndex::canonical_grid(ell, bound)
            .into_iter()
            .map(|k| filter_of(&Character::Tight(k), bound).unwrap())
            .collect();
        let ultra = bounded_ultrafilters(ell, bound);
        for u in &ultra {
            if !traces.contains(u) {
                failures.push(format!(
                    "ell={ell}: ultrafilter {:?} is not a phi(k)",
                    u.iter().map(ToString::to_string).collect::<Vec<_>>()
                ));
            }
        }
        checked += ultra.len();
    }
    let injective = phi_injective_on_quotient(2, 2);
    if !injective {
        failures.push("phi is not injective on the quotient".into());
    }
    report(
        4,
        "tight spectrum",
        failures.is_empty(),
        start,
        format!("checked={checked} injective_on_quotient={injective} failures={failures:?}"),
    );
}

#[test]
fn c5_groupoid_axioms() {
    let start = Instant::now();
    let mut lines = Vec::new();
    let mut pass = true;
    for ell in 1..=2 {
        let sheu = check_axioms(&SheuTriple::enumerate(ell, 3, 3, 3), true);
        let germs = check_axioms(&enumerate_germs(ell, 3), true);
        let theta = check_theta_algebra(ell, 2, 2);
        pass &= sheu.passed() && germs.passed() && theta.failures.is_empty();
        lines.push(format!(
            "ell={ell}: sheu {}/{}/{} failures={}, germs {}/{}/{} failures={}, theta products={} inverses={} failures={}",
            sheu.arrows,
            sheu.pairs,
            sheu.triples,
            sheu.failures.len(),
            germs.arrows,
            germs.pairs,
            germs.triples,
            germs.failures.len(),
            theta.products,
            theta.inverses,
            theta.failures.len()
        ));
    }
    report(5, "groupoid axioms and theta algebra", pass, start, lines.join("; "));
}

#[test]
fn c6_isomorphism() {
    let start = Instant::now();
    let mut pass = true;
    let mut lines = Vec::new();
    for ell in 1..=2 {
        let rep = verify_isomorphism(ell, 2, 2, 2);
        pass &= rep.passed();
        lines.push(format!(
            "ell={ell}: triples={} germs={} pairs={} lifts={} counterexamples={}",
            rep.triples,
            rep.germs,
            rep.composable_pairs,
            rep.lifts,
            rep.counterexamples()
        ));
    }
    report(6, "psi is a groupoid isomorphism", pass, start, lines.join("; "));
}

#[test]
fn c7_regular_representation() {
    let start = Instant::now();
    let mut pass = true;
    let mut lines = Vec::new();
    for ell in 1..=2 {
        let spec = TruncationSpec::new(ell, 6, 6, 0.0).unwrap();
        for c in theta_generator_check(spec).unwrap() {
            pass &= c.comparison.exact() && c.comparison.checked > 0;
            lines.push(format!(
                "ell={ell} k={}: columns={} max_diff={}",
                c.k, c.comparison.checked, c.comparison.max_residual
            ));
        }
    }
    report(7, "indicator of theta_k acts as Z_k*", pass, start, lines.join("; "));
}

#[test]
fn c8_q_relations() {
    let start = Instant::now();
    let mut pass = true;
    let mut lines = Vec::new();
    for ell in 1..=2 {
        for q in [0.3, 0.5] {
            let rep = sphere_relations_check(TruncationSpec::new(ell, 12, 12, q).unwrap());
            pass &= rep.max_residual <= 1e-10 && rep.families.iter().all(|f| f.checked > 0);
            lines.push(format!(
                "ell={ell} q={q}: max_residual={:.2e} columns={}",
                rep.max_residual, rep.checked
            ));
        }
    }
    report(8, "sphere relations on the interior", pass, start, lines.join("; "));
}
