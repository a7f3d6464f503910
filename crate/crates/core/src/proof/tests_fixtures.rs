use super::*;
use crate::signature::SignatureBuilder;
use crate::types::SimpleType;

fn b() -> SimpleType {
    SimpleType::base("b")
}

fn bt() -> SimpleType {
    SimpleType::arrow(b(), SimpleType::base("t"))
}

fn c(thy: &Theory, n: &str) -> Term {
    thy.signature.const_term(n).unwrap()
}

fn ap(f: &Term, a: &Term) -> Term {
    Term::app(f.clone(), a.clone()).unwrap()
}

fn leq(l: &Term, r: &Term) -> Assertion {
    Assertion::Leq(l.clone(), r.clone())
}

/// f⁺ ≤ g⁻ : b -> t, a, bb, cc : b, axioms a ≤ cc, bb ≤ cc.
fn key() -> Theory {
    let sig = SignatureBuilder::new()
        .base("b")
        .base("t")
        .constant("a", b(), false, false)
        .constant("bb", b(), false, false)
        .constant("cc", b(), false, false)
        .constant("f", bt(), true, false)
        .constant("g", bt(), false, true)
        .order("f", "g")
        .build()
        .unwrap();
    let mut thy = Theory::new(sig, vec![]);
    let (a, bb, cc) = (c(&thy, "a"), c(&thy, "bb"), c(&thy, "cc"));
    thy.axioms = vec![leq(&a, &cc), leq(&bb, &cc)];
    thy
}

fn key_goal(thy: &Theory) -> Assertion {
    leq(&ap(&c(thy, "f"), &c(thy, "a")), &ap(&c(thy, "g"), &c(thy, "bb")))
}

fn key_tree(thy: &Theory) -> ProofTree {
    let (a, bb, cc, f, g) = (c(thy, "a"), c(thy, "bb"), c(thy, "cc"), c(thy, "f"), c(thy, "g"));
    let fpol = ProofTree::leaf(
        Assertion::Pol("f".into(), Polarity::Plus),
        Step::SigPol("f".into(), Polarity::Plus),
    );
    let gpol = ProofTree::leaf(
        Assertion::Pol("g".into(), Polarity::Minus),
        Step::SigPol("g".into(), Polarity::Minus),
    );
    let ac = ProofTree::leaf(leq(&a, &cc), Step::Axiom(0));
    let bc = ProofTree::leaf(leq(&bb, &cc), Step::Axiom(1));
    let fg = ProofTree::leaf(leq(&f, &g), Step::SigOrder("f".into(), "g".into()));
    let mono = ProofTree::node(leq(&ap(&f, &a), &ap(&f, &cc)), Rule::Mono, vec![fpol, ac], vec![]);
    let point = ProofTree::node(leq(&ap(&f, &cc), &ap(&g, &cc)), Rule::Point, vec![fg], vec![cc.clone()]);
    let anti = ProofTree::node(leq(&ap(&g, &cc), &ap(&g, &bb)), Rule::Anti, vec![gpol, bc], vec![]);
    let inner = ProofTree::node(leq(&ap(&f, &a), &ap(&g, &cc)), Rule::Trans, vec![mono, point], vec![]);
    ProofTree::node(key_goal(thy), Rule::Trans, vec![inner, anti], vec![])
}

#[test]
fn key_tree_checks() {
    let thy = key();
    let tree = key_tree(&thy);
    assert_eq!(check_proof(&tree, &thy, &CalculusConfig::base()), Verdict::Accepted);
    assert_eq!(tree.rule_count(), 5);
    assert_eq!(tree.node_count(), 10);
}

#[test]
fn corrupted_leaves_are_rejected() {
    let thy = key();
    let mut tree = key_tree(&thy);
    tree.premises[1].premises[1].step = Step::Axiom(0);
    match check_proof(&tree, &thy, &CalculusConfig::base()) {
        Verdict::Rejected { path, reason } => {
            assert_eq!(path, vec![1, 1]);
            assert!(reason.starts_with("leaf not in Γ"), "{reason}");
        }
        v => panic!("{v}"),
    }
    let mut tree = key_tree(&thy);
    tree.premises[0].premises[0].premises[0].step = Step::SigPol("f".into(), Polarity::Minus);
    assert!(!check_proof(&tree, &thy, &CalculusConfig::base()).is_accepted());
}

#[test]
fn refl_on_any_term() {
    let thy = key();
    let t = ap(&c(&thy, "g"), &c(&thy, "a"));
    let tree = ProofTree::node(leq(&t, &t), Rule::Refl, vec![], vec![t.clone()]);
    assert!(check_proof(&tree, &thy, &CalculusConfig::base()).is_accepted());
    // a refl node claiming a ≠ side is rejected
    let bad = ProofTree::node(leq(&t, &c(&thy, "f")), Rule::Refl, vec![], vec![t]);
    assert!(!check_proof(&bad, &thy, &CalculusConfig::base()).is_accepted());
}

fn wc1_tree(thy: &Theory) -> ProofTree {
    let (a, bb, f, g) = (c(thy, "a"), c(thy, "bb"), c(thy, "f"), c(thy, "g"));
    let fpol = ProofTree::leaf(
        Assertion::Pol("f".into(), Polarity::Plus),
        Step::SigPol("f".into(), Polarity::Plus),
    );
    let gpol = ProofTree::leaf(
        Assertion::Pol("g".into(), Polarity::Minus),
        Step::SigPol("g".into(), Polarity::Minus),
    );
    let fg = ProofTree::leaf(leq(&f, &g), Step::SigOrder("f".into(), "g".into()));
    ProofTree::node(
        leq(&ap(&f, &a), &ap(&g, &bb)),
        Rule::Wc1,
        vec![fpol, gpol, fg],
        vec![a, bb],
    )
}

#[test]
fn wc1_needs_the_wc_calculus() {
    let thy = key();
    let tree = wc1_tree(&thy);
    assert!(check_proof(&tree, &thy, &CalculusConfig::wc()).is_accepted());
    match check_proof(&tree, &thy, &CalculusConfig::base()) {
        Verdict::Rejected { path, reason } => {
            assert!(path.is_empty());
            assert!(reason.contains("rule disabled"));
        }
        v => panic!("{v}"),
    }
    let mut wrong = tree.clone();
    wrong.step = Step::Rule(Rule::Wc2);
    assert!(!check_proof(&wrong, &thy, &CalculusConfig::wc()).is_accepted());
}

#[test]
fn universe_examples() {
    let thy = key();
    let goal = key_goal(&thy);
    let budget = SearchBudget::default();
    let u = build_universe(&thy, &goal, UniversePolicy::Subterms, &budget);
    let names: Vec<String> = u.terms().iter().map(|t| t.to_string()).collect();
    assert_eq!(names, ["a", "bb", "cc", "f", "g", "f a", "g bb"]);
    let u1 = build_universe(&thy, &goal, UniversePolicy::AppClosure(1), &budget);
    let extra: Vec<String> = u1.terms()[7..].iter().map(|t| t.to_string()).collect();
    assert_eq!(extra, ["f bb", "f cc", "g a", "g cc"]);
    assert!(!u1.truncated());
    let small = SearchBudget {
        max_universe: 8,
        ..budget
    };
    let ut = build_universe(&thy, &goal, UniversePolicy::AppClosure(1), &small);
    assert!(ut.truncated());
    assert_eq!(ut.len(), 8);
}

#[test]
fn saturation_contains_the_key_chain() {
    let thy = key();
    let goal = key_goal(&thy);
    let budget = SearchBudget::default();
    let u = build_universe(&thy, &goal, UniversePolicy::AppClosure(1), &budget);
    let sat = saturate(&thy, &CalculusConfig::base(), &u, &budget);
    assert!(sat.complete());
    let (a, bb, cc, f, g) = (c(&thy, "a"), c(&thy, "bb"), c(&thy, "cc"), c(&thy, "f"), c(&thy, "g"));
    for want in [
        leq(&ap(&f, &a), &ap(&f, &cc)),
        leq(&ap(&f, &cc), &ap(&g, &cc)),
        leq(&ap(&g, &cc), &ap(&g, &bb)),
        goal.clone(),
    ] {
        assert!(sat.contains(&want), "missing {want}");
    }
    let satw = saturate(&thy, &CalculusConfig::wc(), &u, &budget);
    for x in [&a, &bb, &cc] {
        for y in [&a, &bb, &cc] {
            assert!(satw.contains(&leq(&ap(&f, x), &ap(&g, y))));
        }
    }
}

#[test]
fn empty_theory_saturates_to_reflexivity() {
    let sig = SignatureBuilder::new()
        .base("b")
        .constant("a", b(), false, false)
        .constant("bb", b(), false, false)
        .build()
        .unwrap();
    let thy = Theory::new(sig, vec![]);
    let goal = leq(&c(&thy, "a"), &c(&thy, "bb"));
    let budget = SearchBudget::default();
    let u = build_universe(&thy, &goal, UniversePolicy::Subterms, &budget);
    let sat = saturate(&thy, &CalculusConfig::base(), &u, &budget);
    assert_eq!(sat.len(), u.len());
    assert!(sat.derived().iter().all(|a| a.is_tautology()));
    match prove(&thy, &goal, &CalculusConfig::base(), UniversePolicy::Subterms, &budget) {
        ProveOutcome::NotFound { complete } => assert!(complete),
        ProveOutcome::Found(t) => panic!("unexpected proof {t:?}"),
    }
}

#[test]
fn prover_finds_the_key_derivation() {
    let thy = key();
    let goal = key_goal(&thy);
    let out = prove(
        &thy,
        &goal,
        &CalculusConfig::base(),
        UniversePolicy::AppClosure(1),
        &SearchBudget::default(),
    );
    let tree = out.proof().expect("found");
    assert!(check_proof(tree, &thy, &CalculusConfig::base()).is_accepted());
    assert_eq!(tree.rule_count(), 5);
    // the intermediate terms f cc, g cc are outside the subterm universe
    let out = prove(
        &thy,
        &goal,
        &CalculusConfig::base(),
        UniversePolicy::Subterms,
        &SearchBudget::default(),
    );
    assert!(matches!(out, ProveOutcome::NotFound { complete: true }));
}

/// g ≤ f (f⁻, g⁺), k ≤ h (h⁺, k⁻), f a ≤ k a.
fn wc3_theory() -> Theory {
    let sig = SignatureBuilder::new()
        .base("b")
        .base("t")
        .constant("a", b(), false, false)
        .constant("f", bt(), false, true)
        .constant("g", bt(), true, false)
        .constant("h", bt(), true, false)
        .constant("k", bt(), false, true)
        .order("g", "f")
        .order("k", "h")
        .build()
        .unwrap();
    let mut thy = Theory::new(sig, vec![]);
    let a = c(&thy, "a");
    thy.axioms = vec![leq(&ap(&c(&thy, "f"), &a), &ap(&c(&thy, "k"), &a))];
    thy
}

#[test]
fn wc3_proof() {
    let thy = wc3_theory();
    let goal = leq(&c(&thy, "g"), &c(&thy, "h"));
    let budget = SearchBudget::default();
    let out = prove(&thy, &goal, &CalculusConfig::wc(), UniversePolicy::Subterms, &budget);
    let tree = out.proof().expect("found");
    assert_eq!(tree.rule(), Some(Rule::Wc3(Wc3Variant::A)));
    assert!(check_proof(tree, &thy, &CalculusConfig::wc()).is_accepted());
    // other variants reject the same premises
    for v in [Wc3Variant::B, Wc3Variant::C, Wc3Variant::D] {
        let mut t = tree.clone();
        t.step = Step::Rule(Rule::Wc3(v));
        assert!(!check_proof(&t, &thy, &CalculusConfig::wc()).is_accepted(), "{v:?}");
    }
    let base = prove(&thy, &goal, &CalculusConfig::base(), UniversePolicy::Subterms, &budget);
    assert!(base.proof().is_none());
}

fn eq_theory(pairs: &[(&str, &str)]) -> (Theory, Term, Term, Term) {
    let sig = SignatureBuilder::new()
        .base("b")
        .constant("a", b(), false, false)
        .constant("bb", b(), false, false)
        .constant("f", SimpleType::arrow(b(), b()), false, false)
        .build()
        .unwrap();
    let mut thy = Theory::new(sig, vec![]);
    let (a, bb, f) = (c(&thy, "a"), c(&thy, "bb"), c(&thy, "f"));
    let fa = ap(&f, &a);
    let lookup = |n: &str| match n {
        "a" => a.clone(),
        "bb" => bb.clone(),
        "f a" => fa.clone(),
        _ => unreachable!(),
    };
    thy.axioms = pairs.iter().map(|(l, r)| Assertion::Eq(lookup(l), lookup(r))).collect();
    (thy, a, bb, f)
}

#[test]
fn congruence_examples() {
    let (thy, a, bb, f) = eq_theory(&[("a", "bb")]);
    assert!(decide_eq(&thy, &ap(&f, &a), &ap(&f, &bb)).unwrap());
    let (empty, ..) = eq_theory(&[]);
    assert!(!decide_eq(&empty, &a, &bb).unwrap());
    assert!(decide_eq(&empty, &a, &ap(&f, &a)).map(|x| !x).unwrap());
    assert!(decide_eq(&empty, &a, &f).is_err());

    let (thy, a, _, f) = eq_theory(&[("f a", "a")]);
    let ffa = ap(&f, &ap(&f, &a));
    assert!(decide_eq(&thy, &ffa, &a).unwrap());
    let u = TermUniverse::from_seeds([&f, &a], 100);
    let budget = SearchBudget::default();
    let u2 = {
        let mut goal_thy = thy.clone();
        goal_thy.axioms.clear();
        build_universe(
            &goal_thy,
            &Assertion::Eq(a.clone(), a.clone()),
            UniversePolicy::AppClosure(2),
            &budget,
        )
    };
    assert!(u.len() <= u2.len());
    let part = congruence_closure(&thy, &u2).unwrap();
    let id = |t: &Term| u2.id(t).unwrap();
    assert!(part.same(id(&ffa), id(&a)));
    assert!(part.same(id(&ap(&f, &a)), id(&a)));
}

#[test]
fn equational_saturation_matches_closure() {
    let (thy, a, ..) = eq_theory(&[("a", "bb"), ("f a", "a")]);
    let budget = SearchBudget::default();
    let u = build_universe(
        &thy,
        &Assertion::Eq(a.clone(), a),
        UniversePolicy::AppClosure(2),
        &budget,
    );
    let sat = saturate(&thy, &CalculusConfig::equational(), &u, &budget);
    assert!(sat.complete());
    let part = congruence_closure(&thy, &u).unwrap();
    for i in 0..u.len() {
        for j in 0..u.len() {
            if u.term(i).ty() == u.term(j).ty() {
                assert_eq!(sat.eq_ids(i, j), part.same(i, j), "{} / {}", u.term(i), u.term(j));
            }
        }
    }
    for a in sat.derived() {
        let tree = sat.proof_of(&a).unwrap();
        assert!(check_proof(&tree, &thy, &CalculusConfig::equational()).is_accepted());
    }
}

#[test]
fn absorbing_the_signature_order_preserves_derivability() {
    let thy = key();
    let goal = key_goal(&thy);
    let abs = absorb_signature_order(&thy);
    assert!(!abs.signature.sig_leq("f", "g"));
    assert_eq!(abs.axioms.len(), 3);
    let out = prove(
        &abs,
        &goal,
        &CalculusConfig::base(),
        UniversePolicy::AppClosure(1),
        &SearchBudget::default(),
    );
    assert!(check_proof(out.proof().unwrap(), &abs, &CalculusConfig::base()).is_accepted());
}

#[test]
fn polarity_rules() {
    // f⁺ ≡ g order-equivalent, g untagged: POL+ derives g⁺.
    let sig = SignatureBuilder::new()
        .base("b")
        .constant("f", SimpleType::arrow(b(), b()), true, false)
        .constant("g", SimpleType::arrow(b(), b()), false, false)
        .order("f", "g")
        .order("g", "f")
        .build()
        .unwrap();
    let thy = Theory::new(sig, vec![]);
    let goal = Assertion::Pol("g".into(), Polarity::Plus);
    let cfg = CalculusConfig {
        polarity: true,
        ..CalculusConfig::default()
    };
    let out = prove(&thy, &goal, &cfg, UniversePolicy::Subterms, &SearchBudget::default());
    let tree = out.proof().unwrap();
    assert_eq!(tree.rule(), Some(Rule::PolPlus));
    assert!(check_proof(tree, &thy, &cfg).is_accepted());
    assert!(!check_proof(tree, &thy, &CalculusConfig::base()).is_accepted());
}
