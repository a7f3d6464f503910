use rand::seq::IndexedRandom;

use super::gen::{random_problem, random_theory, TheoryShape};
use super::{run_cases, CaseRecord, SuiteConfig, SuiteReport};
use crate::parser::{parse_problem, parse_proof, render_problem, render_proof};
use crate::proof::{build_universe_multi, saturate, CalculusConfig, UniversePolicy};

/// `proofs` of the cases are proof round trips, the rest problem round
/// trips. Counters: `problems`, `proofs`.
pub fn run_roundtrip_suite(cfg: &SuiteConfig, problems: usize, proofs: usize) -> SuiteReport {
    let note = format!("problems={problems} proofs={proofs}");
    let calculi: Vec<CalculusConfig> = ["base", "wc", "wc,pos,identity,polarity", "eq"]
        .iter()
        .map(|s| CalculusConfig::parse(s).expect("known"))
        .collect();
    run_cases("roundtrip", note, problems + proofs, |i| {
        let mut rng = cfg.case_rng(i);
        if i < problems {
            let mut rec = CaseRecord::new(i, cfg.case_seed(i), "problem");
            let (thy, goals) = random_problem(&mut rng);
            let text = render_problem(&thy, &goals);
            match parse_problem(&text) {
                Ok(sp) if sp.theory == thy && sp.goals == goals => {
                    if render_problem(&sp.theory, &sp.goals) != text {
                        rec.violate("re-render differs");
                    }
                }
                Ok(_) => rec.violate(format!("parsed problem differs from the original:\n{text}")),
                Err(d) => rec.violate(format!("render does not parse: {}\n{text}", d[0])),
            }
            rec.bump("problems", 1);
            return rec;
        }
        let mut rec = CaseRecord::new(i, cfg.case_seed(i), "proof");
        let calc = *calculi.choose(&mut rng).expect("nonempty");
        let shape = TheoryShape {
            eq_axioms: if calc.equational { 1.0 } else { 0.2 },
            ..TheoryShape::default()
        };
        let thy = random_theory(&mut rng, &shape);
        let u = build_universe_multi(&thy, &[], UniversePolicy::AppClosure(1), &cfg.budget);
        let sat = saturate(&thy, &calc, &u, &cfg.budget);
        // prefer the deepest of a few random derived facts
        let derived = sat.derived();
        let tree = (0..4)
            .filter_map(|_| derived.choose(&mut rng))
            .filter_map(|a| sat.proof_of(a))
            .max_by_key(|t| t.node_count());
        let Some(tree) = tree else {
            rec.inconclusive("nothing derived");
            return rec;
        };
        let text = render_proof(&tree);
        match parse_proof(&text, &thy, &calc) {
            Ok(back) if back == tree => {}
            Ok(_) => rec.violate(format!("parsed proof differs:\n{text}")),
            Err(d) => rec.violate(format!("render does not parse: {}\n{text}", d[0])),
        }
        rec.bump("proofs", 1);
        rec.bump("nodes", tree.node_count() as u64);
        rec
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips() {
        let r = run_roundtrip_suite(&SuiteConfig::default(), 100, 30);
        assert!(r.passed(), "{r}");
        assert_eq!(r.count("problems"), 100);
        assert_eq!(r.count("proofs"), 30);
    }
}
