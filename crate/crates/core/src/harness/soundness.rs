use std::ops::ControlFlow;

use rand::seq::SliceRandom;
use rand::Rng;

use super::gen::{random_assertion, random_theory, TheoryShape};
use super::{run_cases, CaseRecord, SuiteConfig, SuiteReport};
use crate::proof::{build_universe_multi, check_proof, prove, saturate, CalculusConfig};
use crate::semantics::{enumerate_models, find_countermodel, Countermodel, Model, ModelFilter};
use crate::theory::{Assertion, Theory};

/// The models a calculus must be sound for.
fn filter_for(cfg: &CalculusConfig) -> ModelFilter {
    ModelFilter {
        require_wc: cfg.wc,
        require_poset: cfg.pos || cfg.identity,
    }
}

fn admitted(m: &Model, f: ModelFilter) -> bool {
    m.structure.bases().values().all(|p| f.admits(p))
}

/// For each seeded random theory and each swept calculus: saturate, draw
/// derived goals, re-check their proofs and evaluate them in every
/// admissible model within the bounds. The same case then checks that no
/// goal is both provable with the weak-completeness rules and refuted by a
/// weakly complete countermodel.
///
/// Counters: `proved:<calc>` goal/proof pairs, `models` enumerated models,
/// `excl` exclusivity instances, `refuted` of those with a countermodel;
/// violations are also counted under `unsound`, `not-exclusive` and
/// `bad-proof`.
pub fn run_soundness_suite(cfg: &SuiteConfig) -> SuiteReport {
    let shape = TheoryShape::default();
    let note = format!(
        "calculi={} universe={} bounds=[{}] (soundness checked against bounded model enumeration)",
        cfg.calculi.iter().map(|c| c.to_string()).collect::<Vec<_>>().join("|"),
        cfg.universe,
        cfg.bounds.summary()
    );
    run_cases("soundness", note, cfg.cases, |i| {
        let mut rng = cfg.case_rng(i);
        let thy = random_theory(&mut rng, &shape);
        let mut rec = CaseRecord::new(i, cfg.case_seed(i), "random");
        soundness_case(cfg, &thy, &mut rng, &mut rec);
        rec
    })
}

pub(crate) fn soundness_case(cfg: &SuiteConfig, thy: &Theory, rng: &mut impl Rng, rec: &mut CaseRecord) {
    let universe = build_universe_multi(thy, &[], cfg.universe, &cfg.budget);
    // (calculus, admissible models, goals)
    let mut plan: Vec<(CalculusConfig, ModelFilter, Vec<Assertion>)> = Vec::new();
    let mut wc_goals = Vec::new();
    for calc in &cfg.calculi {
        let sat = saturate(thy, calc, &universe, &cfg.budget);
        let mut goals: Vec<Assertion> = sat.derived().into_iter().filter(|a| !a.is_tautology()).collect();
        goals.shuffle(rng);
        goals.truncate(cfg.goals_per_case);
        for goal in &goals {
            let Some(tree) = sat.proof_of(goal) else {
                rec.violate_counted("bad-proof", format!("[{calc}] derived `{goal}` has no proof"));
                continue;
            };
            if !check_proof(&tree, thy, calc).is_accepted() {
                rec.violate_counted(
                    "bad-proof",
                    format!("[{calc}] proof of `{goal}` rejected by the checker"),
                );
            }
            rec.bump(&format!("proved:{calc}"), 1);
        }
        if calc.wc && !calc.pos && !calc.identity && !calc.polarity {
            wc_goals = goals.clone();
        }
        plan.push((*calc, filter_for(calc), goals));
    }
    // models are streamed: at larger bounds there are far too many to keep
    let mut failures = Vec::new();
    let mut models = 0u64;
    let report = enumerate_models(thy, &cfg.bounds, ModelFilter::default(), |m| {
        models += 1;
        for (calc, filter, goals) in &plan {
            if !admitted(m, *filter) {
                continue;
            }
            for goal in goals {
                match m.satisfies_with(goal, cfg.bounds.eq_mode) {
                    Ok(true) => {}
                    Ok(false) if failures.len() < 8 => failures.push(format!(
                        "[{calc}] proved `{goal}` fails in model {}",
                        m.describe().join("; ")
                    )),
                    Err(e) if failures.len() < 8 => failures.push(format!("[{calc}] evaluating `{goal}`: {e}")),
                    Ok(false) | Err(_) => {}
                }
            }
        }
        ControlFlow::Continue(())
    });
    rec.bump("models", models);
    for f in failures {
        rec.violate_counted("unsound", f);
    }
    if !report.complete {
        rec.inconclusive("model enumeration incomplete");
    }
    exclusivity(cfg, thy, rng, wc_goals, rec);
}

/// No goal may have both a weak-completeness proof and a weakly complete
/// countermodel. Goals are the drawn wc consequences plus random ones.
fn exclusivity(cfg: &SuiteConfig, thy: &Theory, rng: &mut impl Rng, mut goals: Vec<Assertion>, rec: &mut CaseRecord) {
    for _ in 0..cfg.goals_per_case {
        if let Some(a) = random_assertion(rng, &thy.signature, 2, false) {
            if !a.is_tautology() {
                goals.push(a);
            }
        }
    }
    let wc = CalculusConfig::wc();
    for goal in &goals {
        rec.bump("excl", 1);
        let proved = prove(thy, goal, &wc, cfg.universe, &cfg.budget).proof().is_some();
        let cm = find_countermodel(thy, goal, &cfg.bounds, ModelFilter::wc());
        if let Countermodel::Found(m) = &cm {
            rec.bump("refuted", 1);
            if proved {
                rec.violate_counted(
                    "not-exclusive",
                    format!(
                        "`{goal}` is wc-provable yet falsified by the weakly complete model {}",
                        m.describe().join("; ")
                    ),
                );
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::CaseVerdict;

    #[test]
    fn small_sweep_is_clean_and_deterministic() {
        let cfg = SuiteConfig::default().with_cases(6);
        let r = run_soundness_suite(&cfg);
        assert!(r.passed(), "{r}");
        assert!(r.count("proved:base,wc") > 0);
        assert_eq!(r.transcript(), run_soundness_suite(&cfg).transcript());
        assert!(r.cases.iter().all(|c| c.verdict == CaseVerdict::Ok), "{r}");
    }
}
