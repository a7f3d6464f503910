use rand::seq::SliceRandom;
use rand::Rng;

use super::gen::random_term;
use super::{run_cases, CaseRecord, SuiteConfig, SuiteReport};
use crate::proof::{build_universe_multi, congruence_closure, saturate, CalculusConfig, SearchBudget, UniversePolicy};
use crate::signature::SignatureBuilder;
use crate::theory::{Assertion, Theory};
use crate::types::SimpleType;

pub const EQ_MAX_UNIVERSE: usize = 30;

/// At most four constants (at least one of base type), one to three
/// equations between terms of depth at most two.
pub fn random_eq_theory(rng: &mut impl Rng) -> Theory {
    let p = SimpleType::base("p");
    let pp = SimpleType::arrow(p.clone(), p.clone());
    let pool = [
        ("a", p.clone()),
        ("b", p.clone()),
        ("f", pp.clone()),
        ("g", pp.clone()),
        ("h", SimpleType::arrow(p.clone(), pp)),
    ];
    loop {
        let mut picked: Vec<&(&str, SimpleType)> = pool.iter().collect();
        picked.shuffle(rng);
        picked.truncate(rng.random_range(1..=4));
        if !picked.iter().any(|(_, t)| !t.is_arrow()) {
            continue;
        }
        let mut b = SignatureBuilder::new().base("p");
        for (n, t) in &picked {
            b.add_constant(n, t.clone(), false, false);
        }
        let sig = b.build().expect("no orders");
        let mut axioms = Vec::new();
        for _ in 0..rng.random_range(1..=3) {
            let Some(l) = random_term(rng, &sig, &p, 2) else {
                continue;
            };
            let Some(r) = random_term(rng, &sig, &p, 2) else {
                continue;
            };
            axioms.push(Assertion::Eq(l, r));
        }
        if !axioms.is_empty() {
            return Theory::new(sig, axioms);
        }
    }
}

/// Congruence closure against equational saturation on every pair of
/// universe terms.
pub fn run_equational_suite(cfg: &SuiteConfig) -> SuiteReport {
    let budget = SearchBudget {
        max_universe: EQ_MAX_UNIVERSE,
        max_rounds: 256,
        max_candidates: cfg.budget.max_candidates,
    };
    let note = format!("max-universe={EQ_MAX_UNIVERSE} universe=apps:1");
    run_cases("equational", note, cfg.cases, |i| {
        let mut rng = cfg.case_rng(i);
        let mut rec = CaseRecord::new(i, cfg.case_seed(i), "random");
        let thy = random_eq_theory(&mut rng);
        let u = build_universe_multi(&thy, &[], UniversePolicy::AppClosure(1), &budget);
        if thy.axioms.iter().flat_map(|a| a.terms()).any(|t| u.id(t).is_none()) {
            rec.inconclusive("axiom terms exceed the universe cap");
            return rec;
        }
        rec.bump("terms", u.len() as u64);
        let part = match congruence_closure(&thy, &u) {
            Ok(p) => p,
            Err(e) => {
                rec.violate(e.to_string());
                return rec;
            }
        };
        let sat = saturate(&thy, &CalculusConfig::equational(), &u, &budget);
        if !sat.complete() {
            rec.inconclusive("saturation hit the round cap");
        }
        for a in 0..u.len() {
            for b in 0..u.len() {
                if u.terms()[a].ty() != u.terms()[b].ty() {
                    continue;
                }
                rec.bump("pairs", 1);
                if part.same(a, b) != sat.eq_ids(a, b) {
                    rec.violate(format!(
                        "`{} = {}`: closure says {}, saturation says {}",
                        u.terms()[a],
                        u.terms()[b],
                        part.same(a, b),
                        sat.eq_ids(a, b)
                    ));
                }
            }
        }
        rec
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_family_agrees() {
        let r = run_equational_suite(&SuiteConfig::default().with_cases(20));
        assert!(r.passed(), "{r}");
        assert!(r.count("pairs") > 20);
    }
}
