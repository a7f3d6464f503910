//! The worked examples as executable fixtures.

use super::{CaseRecord, SuiteReport};
use crate::parser::{parse_model, parse_problem};
use crate::proof::{
    check_proof, prove, CalculusConfig, ProofTree, ProveOutcome, Rule, SearchBudget, Step, UniversePolicy, Verdict,
    Wc3Variant,
};
use crate::semantics::{
    enumerate_models, find_countermodel, is_weakly_complete, Countermodel, Model, ModelFilter, SizeBounds,
};
use crate::signature::SignatureBuilder;
use crate::term::Term;
use crate::theory::{Assertion, Theory};
use crate::types::SimpleType;
use std::ops::ControlFlow;

/// `f⁺ ≤ g⁻`, `t ≤ v ≥ u` gives `f t ≤ g u` by mono, point and anti.
pub const KEY_PROBLEM: &str = "\
base s { elems t u v; }
base r { }
const f : s -> r [+];
const g : s -> r [-];
order f <= g;
axiom t <= v;
axiom u <= v;
goal f t <= g u;
";

/// Parts 1 to 3 of the up/down example; part 3 fails outside weakly
/// complete structures.
pub fn up_down_problem(part: u8) -> &'static str {
    match part {
        1 => "base p { elems a b c; }\nbase q { }\nconst f : p -> q [+];\nconst g : p -> q [-];\norder f <= g;\naxiom a <= c;\naxiom b <= c;\ngoal f a <= g b;\n",
        2 => "base p { elems a b c; }\nbase q { }\nconst f : p -> q [-];\nconst g : p -> q [+];\norder f <= g;\naxiom c <= a;\naxiom c <= b;\ngoal f a <= g b;\n",
        3 => "base p { elems a b c; }\nbase q { }\nconst f : p -> q [-];\nconst g : p -> q [+];\norder f <= g;\naxiom a <= c;\naxiom b <= c;\ngoal f a <= g b;\n",
        _ => panic!("the example has parts 1 to 3"),
    }
}

/// Part 3 with the order of `p` reversed and the tags swapped: the
/// pattern of the first mixed-tag rule.
const DUAL_PROBLEM: &str = "base p { elems a b c; }\nbase q { }\nconst f : p -> q [+];\nconst g : p -> q [-];\norder f <= g;\naxiom c <= a;\naxiom c <= b;\ngoal f a <= g b;\n";

const PART3_MODEL: &str = "model {
  base p { elems a b c; order a <= c b <= c; }
  base q { elems e0 e1; order e0 <= e1; }
  const a = 0; const b = 1; const c = 2;
  const f = [1 0 0];
  const g = [1 0 1];
}
";

const DUAL_MODEL: &str = "model {
  base p { elems a b c; order c <= a c <= b; }
  base q { elems e0 e1; order e0 <= e1; }
  const a = 0; const b = 1; const c = 2;
  const f = [1 0 0];
  const g = [1 0 1];
}
";

fn problem(text: &str) -> (Theory, Assertion) {
    let sp = parse_problem(text).expect("fixture parses");
    (sp.theory, sp.goals[0].clone())
}

/// `P = {a < c > b}`, `Q = {0 < 1}`, `f = (1,0,0)`, `g = (1,0,1)`.
pub fn part3_model() -> (Theory, Assertion, Model) {
    let (thy, goal) = problem(up_down_problem(3));
    let m = parse_model(PART3_MODEL, &thy).expect("fixture model parses");
    (thy, goal, m)
}

/// A mixed-tag rule instance whose conclusion fails in a model of its
/// premises over a structure that is not weakly complete.
#[derive(Debug, Clone)]
pub struct UnsoundWitness {
    pub name: &'static str,
    pub rule: Rule,
    pub theory: Theory,
    pub goal: Assertion,
    pub proof: ProofTree,
    pub model: Model,
}

impl UnsoundWitness {
    /// Problems with the witness, empty when it shows what it should.
    pub fn check(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !self.proof.rules().contains(&self.rule) {
            out.push(format!("{}: proof does not use {}", self.name, self.rule.name()));
        }
        if !check_proof(&self.proof, &self.theory, &CalculusConfig::wc()).is_accepted() {
            out.push(format!("{}: proof rejected with the wc rules on", self.name));
        }
        if check_proof(&self.proof, &self.theory, &CalculusConfig::base()).is_accepted() {
            out.push(format!("{}: proof accepted without the wc rules", self.name));
        }
        if let Some(v) = self.model.violation(&self.theory) {
            out.push(format!("{}: not a model of the premises: {v}", self.name));
        }
        if self.model.satisfies(&self.goal).unwrap_or(true) {
            out.push(format!("{}: conclusion holds in the model", self.name));
        }
        if self.model.structure.bases().values().all(is_weakly_complete) {
            out.push(format!("{}: structure is weakly complete", self.name));
        }
        out
    }
}

/// The first mixed-tag rule on the order-dual of the part-3 structure, and
/// the second on the part-3 structure itself.
pub fn wc1_witness() -> Vec<UnsoundWitness> {
    let mut out = Vec::new();
    for (name, rule, prob, model) in [
        ("wc1-dual-part3", Rule::Wc1, DUAL_PROBLEM, DUAL_MODEL),
        ("wc2-part3", Rule::Wc2, up_down_problem(3), PART3_MODEL),
    ] {
        let (theory, goal) = problem(prob);
        let proof = prove(
            &theory,
            &goal,
            &CalculusConfig::wc(),
            UniversePolicy::Subterms,
            &SearchBudget::default(),
        )
        .proof()
        .cloned()
        .expect("the mixed-tag rule applies directly");
        let model = parse_model(model, &theory).expect("fixture model parses");
        out.push(UnsoundWitness {
            name,
            rule,
            theory,
            goal,
            proof,
            model,
        });
    }
    out
}

/// `g ≤ f`, `k ≤ h`, `f a ≤ k a` with the tags of one variant.
fn wc3_theory(v: Wc3Variant) -> (Theory, Assertion) {
    let b = SimpleType::base("b");
    let bt = SimpleType::arrow(b.clone(), SimpleType::base("t"));
    let tags = v.pattern();
    let mut sb = SignatureBuilder::new()
        .base("b")
        .base("t")
        .constant("a", b.clone(), false, false);
    for (name, pol) in ["f", "g", "h", "k"].into_iter().zip(tags) {
        let plus = pol == crate::theory::Polarity::Plus;
        sb.add_constant(name, bt.clone(), plus, !plus);
    }
    let sig = sb.order("g", "f").order("k", "h").build().expect("valid");
    let c = |n: &str| Term::constant(n, bt.clone());
    let a = Term::constant("a", b);
    let ap = |n: &str| Term::app(c(n), a.clone()).expect("typed");
    let thy = Theory::new(sig, vec![Assertion::Leq(ap("f"), ap("k"))]);
    (thy, Assertion::Leq(c("g"), c("h")))
}

fn fixture_key(rec: &mut CaseRecord) {
    let (thy, goal) = problem(KEY_PROBLEM);
    let out = prove(
        &thy,
        &goal,
        &CalculusConfig::base(),
        UniversePolicy::AppClosure(1),
        &SearchBudget::default(),
    );
    let Some(tree) = out.proof() else {
        return rec.violate("key example not proved");
    };
    if check_proof(tree, &thy, &CalculusConfig::base()) != Verdict::Accepted {
        rec.violate("key example proof rejected");
    }
    let mut rules = tree.rules();
    rules.sort();
    let want = {
        let mut w = vec![Rule::Trans, Rule::Trans, Rule::Mono, Rule::Point, Rule::Anti];
        w.sort();
        w
    };
    if rules != want {
        rec.violate(format!("key example proof uses {rules:?}"));
    }
    rec.bump("rules", tree.rule_count() as u64);
    rec.bump("nodes", tree.node_count() as u64);
    match find_countermodel(&thy, &goal, &SizeBounds::default(), ModelFilter::wc()) {
        Countermodel::NotFound { exhausted: true } => {}
        Countermodel::NotFound { exhausted: false } => rec.inconclusive("model search not exhaustive"),
        Countermodel::Found(m) => rec.violate(format!("proved goal refuted by {}", m.describe().join("; "))),
    }
}

fn fixture_no_wc_countermodel(part: u8, rec: &mut CaseRecord) {
    let (thy, goal) = problem(up_down_problem(part));
    match find_countermodel(&thy, &goal, &SizeBounds::default(), ModelFilter::wc()) {
        Countermodel::NotFound { exhausted: true } => {}
        Countermodel::NotFound { exhausted: false } => rec.violate("weakly complete search was not exhaustive"),
        Countermodel::Found(m) => rec.violate(format!("countermodel {}", m.describe().join("; "))),
    }
    if prove(
        &thy,
        &goal,
        &CalculusConfig::base(),
        UniversePolicy::AppClosure(1),
        &SearchBudget::default(),
    )
    .proof()
    .is_none()
    {
        rec.violate("not derivable in the base calculus");
    }
}

fn fixture_part3(rec: &mut CaseRecord) {
    let (thy, goal, given) = part3_model();
    if let Some(v) = given.violation(&thy) {
        rec.violate(format!("part-3 model is not a model: {v}"));
    }
    if given.satisfies(&goal).unwrap_or(true) {
        rec.violate("part-3 model satisfies the goal");
    }
    match find_countermodel(&thy, &goal, &SizeBounds::default(), ModelFilter::default()) {
        Countermodel::Found(m) if !m.satisfies(&goal).unwrap_or(true) && m.is_model(&thy) => {}
        other => rec.violate(format!("no countermodel without wc: {other:?}")),
    }
    // the exact model is among those over its own bases
    let mut bounds = SizeBounds::default();
    for (name, p) in given.structure.bases() {
        bounds = bounds.fix_base(name, p.clone());
    }
    let mut seen = false;
    enumerate_models(&thy, &bounds, ModelFilter::default(), |m| {
        if m.interp == given.interp {
            seen = true;
            return ControlFlow::Break(());
        }
        ControlFlow::Continue(())
    });
    if !seen {
        rec.violate("the part-3 model is not enumerated over its bases");
    }
    match find_countermodel(&thy, &goal, &SizeBounds::default(), ModelFilter::wc()) {
        Countermodel::NotFound { exhausted: true } => {}
        other => rec.violate(format!("weakly complete search: {other:?}")),
    }
    match prove(
        &thy,
        &goal,
        &CalculusConfig::base(),
        UniversePolicy::AppClosure(1),
        &SearchBudget::default(),
    ) {
        ProveOutcome::NotFound { .. } => {}
        ProveOutcome::Found(_) => rec.violate("part 3 is derivable in the base calculus"),
    }
    match prove(
        &thy,
        &goal,
        &CalculusConfig::wc(),
        UniversePolicy::AppClosure(1),
        &SearchBudget::default(),
    ) {
        ProveOutcome::Found(_) => {}
        ProveOutcome::NotFound { .. } => rec.violate("part 3 is not derivable with the wc rules"),
    }
}

fn fixture_wc3(v: Wc3Variant, rec: &mut CaseRecord) {
    let (thy, goal) = wc3_theory(v);
    let wc = CalculusConfig::wc();
    let out = prove(&thy, &goal, &wc, UniversePolicy::Subterms, &SearchBudget::default());
    let Some(tree) = out.proof() else {
        return rec.violate(format!("{v:?}: `{goal}` not derived"));
    };
    if tree.rule() != Some(Rule::Wc3(v)) {
        rec.violate(format!("{v:?}: derived by {:?}", tree.rule()));
    }
    if !check_proof(tree, &thy, &wc).is_accepted() {
        rec.violate(format!("{v:?}: proof rejected"));
    }
    for other in Wc3Variant::ALL.into_iter().filter(|o| *o != v) {
        let mut t = tree.clone();
        t.step = Step::Rule(Rule::Wc3(other));
        if check_proof(&t, &thy, &wc).is_accepted() {
            rec.violate(format!("{other:?} accepts the {v:?} pattern"));
        }
    }
    if prove(
        &thy,
        &goal,
        &CalculusConfig::base(),
        UniversePolicy::Subterms,
        &SearchBudget::default(),
    )
    .proof()
    .is_some()
    {
        rec.violate(format!("{v:?}: derivable without the wc rules"));
    }
}

const FIXTURES: [&str; 9] = [
    "key",
    "up-down-1",
    "up-down-2",
    "up-down-3",
    "mixed-tag-witness",
    "wc3a",
    "wc3b",
    "wc3c",
    "wc3d",
];

/// Runs every fixture; the model searches use the default bounds (base
/// carriers up to three, type order up to two).
pub fn run_worked_examples() -> SuiteReport {
    let cases = FIXTURES
        .iter()
        .enumerate()
        .map(|(i, name)| {
            let mut rec = CaseRecord::new(i, 0, *name);
            match i {
                0 => fixture_key(&mut rec),
                1 | 2 => fixture_no_wc_countermodel(i as u8, &mut rec),
                3 => fixture_part3(&mut rec),
                4 => {
                    for w in wc1_witness() {
                        rec.bump("witnesses", 1);
                        for problem in w.check() {
                            rec.violate(problem);
                        }
                    }
                }
                _ => fixture_wc3(Wc3Variant::ALL[i - 5], &mut rec),
            }
            rec
        })
        .collect();
    SuiteReport {
        suite: "fixtures".into(),
        note: format!("bounds=[{}]", SizeBounds::default().summary()),
        cases,
    }
}
