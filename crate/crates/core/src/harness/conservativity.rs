//! Experiments on fresh constants.
//!
//! Adding an isolated constant `□σ` per type should neither let us prove
//! `t □ ≤ u □` without `t ≤ u`, nor prove new `□`-free facts. Both hold
//! for unbounded derivability; here they are exercised with bounded
//! saturation, so a clean run shows consistency of the implementation and
//! nothing more.

use std::collections::BTreeMap;

use super::gen::{random_theory, TheoryShape};
use super::{run_cases, CaseRecord, SuiteConfig, SuiteReport};
use crate::proof::{build_universe_multi, saturate, CalculusConfig, Rule, Saturation, TermUniverse};
use crate::signature::SignatureBuilder;
use crate::term::Term;
use crate::theory::{extend_with_fresh_map, extend_with_ordered_pair_map, is_fresh_name, Assertion, Polarity, Theory};
use crate::types::SimpleType;

const FIXTURES: [&str; 3] = ["below-pair", "point", "ordered-pair"];

/// Fixture cases first, then `cfg.cases` random theories. Counters:
/// `boxed` instances of `t □ ≤ u □` examined, `boxfree` `□`-free facts
/// re-derived without the fresh constants.
pub fn run_conservativity_suite(cfg: &SuiteConfig) -> SuiteReport {
    let note = format!(
        "experiment: bounded search can exhibit consistency, never refute; universe={} max-universe={}",
        cfg.universe, cfg.budget.max_universe
    );
    let shape = TheoryShape {
        eq_axioms: 0.0,
        ..TheoryShape::default()
    };
    run_cases("conservativity", note, FIXTURES.len() + cfg.cases, |i| {
        if i < FIXTURES.len() {
            let mut rec = CaseRecord::new(i, 0, FIXTURES[i]);
            match i {
                0 => fresh_case(cfg, &below_pair(), &mut rec),
                1 => {
                    fresh_case(cfg, &point_fixture(), &mut rec);
                    if rec.counts.get("boxed").copied().unwrap_or(0) == 0 {
                        rec.violate("no `t □ <= u □` instance was derived");
                    }
                }
                _ => ordered_pair_case(cfg, &mut rec),
            }
            return rec;
        }
        let j = i - FIXTURES.len();
        let mut rng = cfg.case_rng(j);
        let thy = random_theory(&mut rng, &shape);
        let mut rec = CaseRecord::new(i, cfg.case_seed(j), "random");
        fresh_case(cfg, &thy, &mut rec);
        rec
    })
}

fn p() -> SimpleType {
    SimpleType::base("p")
}

/// `a ≤ b` with a monotone `f`.
fn below_pair() -> Theory {
    let sig = SignatureBuilder::new()
        .base("p")
        .constant("a", p(), false, false)
        .constant("b", p(), false, false)
        .constant("f", SimpleType::arrow(p(), p()), true, false)
        .build()
        .expect("valid");
    let a = Term::constant("a", p());
    let b = Term::constant("b", p());
    Theory::new(sig, vec![Assertion::Leq(a, b)])
}

/// `f ≤ g` as an axiom; `f □ ≤ g □` then follows by POINT.
fn point_fixture() -> Theory {
    let pq = SimpleType::arrow(p(), SimpleType::base("q"));
    let sig = SignatureBuilder::new()
        .base("p")
        .base("q")
        .constant("a", p(), false, false)
        .constant("f", pq.clone(), false, false)
        .constant("g", pq.clone(), false, false)
        .build()
        .expect("valid");
    let f = Term::constant("f", pq.clone());
    let g = Term::constant("g", pq);
    Theory::new(sig, vec![Assertion::Leq(f, g)])
}

fn fresh_free(a: &Assertion) -> bool {
    !a.mentions(&is_fresh_name)
}

fn is_fresh_const(t: &Term) -> bool {
    t.const_name().is_some_and(is_fresh_name)
}

pub(crate) fn fresh_case(cfg: &SuiteConfig, thy: &Theory, rec: &mut CaseRecord) {
    let wc = CalculusConfig::wc();
    let (boxed, _) = match extend_with_fresh_map(thy) {
        Ok(x) => x,
        Err(e) => {
            rec.violate(format!("cannot add fresh constants: {e}"));
            return;
        }
    };
    let u_box = build_universe_multi(&boxed, &[], cfg.universe, &cfg.budget);
    let sat_box = saturate(&boxed, &wc, &u_box, &cfg.budget);

    // Γ's universe: every term of the boxed universe with each □σ replaced
    // by the first □-free term of type σ, so boxed derivations map over.
    let mut stand_in: BTreeMap<String, Term> = BTreeMap::new();
    for t in u_box.terms().iter().filter(|t| is_fresh_const(t)) {
        let name = t.const_name().expect("constant").to_string();
        if let Some(r) = u_box
            .terms()
            .iter()
            .find(|r| r.ty() == t.ty() && !r.mentions(&is_fresh_name))
        {
            stand_in.insert(name, r.clone());
        }
    }
    let substituted: Vec<Term> = u_box
        .terms()
        .iter()
        .map(|t| t.substitute(&|n: &str| stand_in.get(n).cloned()))
        .filter(|t| !t.mentions(&is_fresh_name))
        .collect();
    let u_plain = TermUniverse::from_seeds(&substituted, usize::MAX);
    let sat_plain = saturate(thy, &wc, &u_plain, &cfg.budget);
    let bounded = !sat_box.complete() || !sat_plain.complete();
    let miss = |rec: &mut CaseRecord, what: String| {
        if bounded || stand_in.len() < u_box.terms().iter().filter(|t| is_fresh_const(t)).count() {
            rec.inconclusive(what);
        } else {
            rec.violate(what);
        }
    };

    for fact in sat_box.derived() {
        if let Assertion::Leq(l, r) = &fact {
            if let (Some((t, x)), Some((u, y))) = (l.as_app(), r.as_app()) {
                if x == y && is_fresh_const(x) && !t.mentions(&is_fresh_name) && !u.mentions(&is_fresh_name) {
                    rec.bump("boxed", 1);
                    let want = Assertion::Leq(t.clone(), u.clone());
                    if !sat_box.contains(&want) && !sat_plain.contains(&want) {
                        miss(rec, format!("derived `{fact}` but not `{want}`"));
                    }
                }
            }
        }
        if fresh_free(&fact) {
            rec.bump("boxfree", 1);
            if !sat_plain.contains(&fact) {
                miss(rec, format!("`{fact}` derived with fresh constants but not without"));
            }
        }
    }
}

/// `g⁺` with the ordered pair `□1 ≤ □2`: MONO yields `g □1 ≤ g □2`, and the
/// tag of `g` is re-derivable through the polarity rules.
fn ordered_pair_case(cfg: &SuiteConfig, rec: &mut CaseRecord) {
    let pp = SimpleType::arrow(p(), p());
    let sig = SignatureBuilder::new()
        .base("p")
        .constant("a", p(), false, false)
        .constant("g", pp.clone(), true, false)
        .build()
        .expect("valid");
    let thy = Theory::new(sig, vec![]);
    let (delta, pairs) = match extend_with_ordered_pair_map(&thy) {
        Ok(x) => x,
        Err(e) => return rec.violate(e.to_string()),
    };
    let (lo, hi) = &pairs[&p()];
    let g = Term::constant("g", pp);
    let app = |x: &str| Term::app(g.clone(), Term::constant(x, p())).expect("typed");
    let goal = Assertion::Leq(app(lo), app(hi));
    let cfg_pol = CalculusConfig::parse("wc,polarity").expect("known");
    let u = build_universe_multi(&delta, std::slice::from_ref(&goal), cfg.universe, &cfg.budget);
    let sat: Saturation = saturate(&delta, &cfg_pol, &u, &cfg.budget);
    match sat.proof_of(&goal) {
        Some(tree) if tree.rule() == Some(Rule::Mono) => rec.bump("boxed", 1),
        Some(tree) => rec.violate(format!("`{goal}` derived by {:?}, expected mono", tree.rule())),
        None => rec.violate(format!("`{goal}` not derived")),
    }
    let pol = Assertion::Pol("g".into(), Polarity::Plus);
    if !sat.contains(&pol) {
        rec.violate("tag of `g` not re-derivable over the ordered pair");
    }
    fresh_case(cfg, &thy, rec);
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_and_a_few_random_cases() {
        let r = run_conservativity_suite(&SuiteConfig::default().with_cases(10));
        assert!(r.passed(), "{r}");
        assert!(r.cases[1].counts["boxed"] > 0);
        assert!(r.count("boxfree") > 0);
    }
}
