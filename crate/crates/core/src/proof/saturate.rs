//! Round-based forward saturation over a finite term universe.
//!
//! Round 0 holds the leaves (axioms, then signature order facts, then
//! signature polarity facts). Each later round applies every enabled rule to
//! the state at the start of the round, in the fixed order REFL, POINT, MONO,
//! ANTI, WC1, WC2, WC3, TRANS, POS, SYMM, WEAK, POS′, CONG, POL+, POL−, and
//! keeps the first justification found for each new fact.

use std::collections::{HashMap, HashSet};

use fixedbitset::FixedBitSet;
use rayon::prelude::*;

use super::universe::{build_universe_multi, SearchBudget, TermUniverse, UniversePolicy};
use super::{CalculusConfig, ProofTree, Rule, Step, Wc3Variant};
use crate::theory::{Assertion, Polarity, Theory};

/// An assertion over universe ids.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Fact {
    Leq(usize, usize),
    Eq(usize, usize),
    /// Polarity of the constant with this universe id.
    Pol(usize, Polarity),
}

#[derive(Debug, Clone)]
struct Just {
    step: Step,
    premises: Vec<Fact>,
    terms: Vec<usize>,
}

fn pol_slot(p: Polarity) -> usize {
    match p {
        Polarity::Plus => 0,
        Polarity::Minus => 1,
    }
}

/// Application structure of a universe.
struct Index {
    app_of: HashMap<(usize, usize), usize>,
    /// (application id, function id, argument id)
    apps: Vec<(usize, usize, usize)>,
    /// per function id: (argument id, application id)
    by_fun: Vec<Vec<(usize, usize)>>,
    consts: Vec<usize>,
}

impl Index {
    fn new(u: &TermUniverse) -> Index {
        let n = u.len();
        let mut ix = Index {
            app_of: HashMap::new(),
            apps: Vec::new(),
            by_fun: vec![Vec::new(); n],
            consts: Vec::new(),
        };
        for (id, t) in u.terms().iter().enumerate() {
            match t.as_app() {
                Some((f, a)) => {
                    let (fi, ai) = (u.id(f).expect("subterm-closed"), u.id(a).expect("subterm-closed"));
                    ix.app_of.insert((fi, ai), id);
                    ix.apps.push((id, fi, ai));
                    ix.by_fun[fi].push((ai, id));
                }
                None => ix.consts.push(id),
            }
        }
        ix
    }
}

/// Derived facts with one recorded justification each.
pub struct Saturation {
    universe: TermUniverse,
    cfg: CalculusConfig,
    just: HashMap<Fact, Just>,
    order: Vec<Fact>,
    leq: Vec<FixedBitSet>,
    eq: Vec<FixedBitSet>,
    pol: Vec<[bool; 2]>,
    rounds: usize,
    fixpoint: bool,
    capped: bool,
}

#[derive(Default)]
struct Pending {
    list: Vec<(Fact, Just)>,
    seen: HashSet<Fact>,
}

impl Saturation {
    fn new(universe: TermUniverse, cfg: CalculusConfig) -> Saturation {
        let n = universe.len();
        Saturation {
            cfg,
            just: HashMap::new(),
            order: Vec::new(),
            leq: vec![FixedBitSet::with_capacity(n); n],
            eq: vec![FixedBitSet::with_capacity(n); n],
            pol: vec![[false; 2]; n],
            rounds: 0,
            fixpoint: false,
            capped: false,
            universe,
        }
    }

    pub fn universe(&self) -> &TermUniverse {
        &self.universe
    }

    pub fn config(&self) -> &CalculusConfig {
        &self.cfg
    }

    pub fn rounds(&self) -> usize {
        self.rounds
    }

    /// True when a fixed point was reached and nothing was cut off by the
    /// universe or candidate budgets. Still only relative to the universe.
    pub fn complete(&self) -> bool {
        self.fixpoint && !self.capped && !self.universe.truncated()
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn has(&self, fact: Fact) -> bool {
        match fact {
            Fact::Leq(a, b) => self.leq[a].contains(b),
            Fact::Eq(a, b) => self.eq[a].contains(b),
            Fact::Pol(f, p) => self.pol[f][pol_slot(p)],
        }
    }

    pub fn leq_ids(&self, a: usize, b: usize) -> bool {
        self.leq[a].contains(b)
    }

    pub fn eq_ids(&self, a: usize, b: usize) -> bool {
        self.eq[a].contains(b)
    }

    pub fn fact_of(&self, a: &Assertion) -> Option<Fact> {
        let u = &self.universe;
        match a {
            Assertion::Leq(l, r) => Some(Fact::Leq(u.id(l)?, u.id(r)?)),
            Assertion::Eq(l, r) => Some(Fact::Eq(u.id(l)?, u.id(r)?)),
            Assertion::Pol(f, p) => {
                let id = self.const_id(f)?;
                Some(Fact::Pol(id, *p))
            }
        }
    }

    fn const_id(&self, name: &str) -> Option<usize> {
        self.universe.terms().iter().position(|t| t.const_name() == Some(name))
    }

    pub fn assertion(&self, fact: Fact) -> Assertion {
        let t = |i: usize| self.universe.term(i).clone();
        match fact {
            Fact::Leq(a, b) => Assertion::Leq(t(a), t(b)),
            Fact::Eq(a, b) => Assertion::Eq(t(a), t(b)),
            Fact::Pol(f, p) => Assertion::Pol(
                self.universe
                    .term(f)
                    .const_name()
                    .expect("polarity on constant")
                    .to_string(),
                p,
            ),
        }
    }

    pub fn contains(&self, a: &Assertion) -> bool {
        self.fact_of(a).is_some_and(|f| self.has(f))
    }

    /// Facts in derivation order.
    pub fn facts(&self) -> &[Fact] {
        &self.order
    }

    pub fn derived(&self) -> Vec<Assertion> {
        self.order.iter().map(|&f| self.assertion(f)).collect()
    }

    /// A proof tree for a derived assertion, rebuilt from justifications.
    pub fn proof_of(&self, a: &Assertion) -> Option<ProofTree> {
        let fact = self.fact_of(a)?;
        self.has(fact).then(|| self.rebuild(fact))
    }

    fn rebuild(&self, fact: Fact) -> ProofTree {
        let j = &self.just[&fact];
        ProofTree {
            conclusion: self.assertion(fact),
            step: j.step.clone(),
            premises: j.premises.iter().map(|&p| self.rebuild(p)).collect(),
            terms: j.terms.iter().map(|&i| self.universe.term(i).clone()).collect(),
        }
    }

    fn insert(&mut self, fact: Fact, just: Just) {
        if self.has(fact) {
            return;
        }
        match fact {
            Fact::Leq(a, b) => self.leq[a].insert(b),
            Fact::Eq(a, b) => self.eq[a].insert(b),
            Fact::Pol(f, p) => self.pol[f][pol_slot(p)] = true,
        }
        self.just.insert(fact, just);
        self.order.push(fact);
    }

    fn leaves(&mut self, thy: &Theory) {
        let sig = &thy.signature;
        for (i, ax) in thy.axioms.iter().enumerate() {
            if let Some(f) = self.fact_of(ax) {
                self.insert(f, leaf(Step::Axiom(i)));
            }
        }
        let consts: Vec<(usize, String)> = self
            .universe
            .terms()
            .iter()
            .enumerate()
            .filter_map(|(i, t)| {
                let n = t.const_name()?;
                (sig.const_type(n) == Some(t.ty())).then(|| (i, n.to_string()))
            })
            .collect();
        for (i, f) in &consts {
            for (j, g) in &consts {
                if i != j && sig.sig_leq(f, g) {
                    self.insert(Fact::Leq(*i, *j), leaf(Step::SigOrder(f.clone(), g.clone())));
                }
            }
        }
        for (i, f) in &consts {
            for p in sig.tags(f) {
                self.insert(Fact::Pol(*i, p), leaf(Step::SigPol(f.clone(), p)));
            }
        }
    }

    fn run(&mut self, budget: &SearchBudget, stop: Option<Fact>) {
        let ix = Index::new(&self.universe);
        loop {
            if stop.is_some_and(|f| self.has(f)) {
                return;
            }
            if self.rounds >= budget.max_rounds {
                return;
            }
            let pending = self.round(&ix, budget);
            self.rounds += 1;
            if pending.list.is_empty() {
                self.fixpoint = true;
                return;
            }
            for (f, j) in pending.list {
                self.insert(f, j);
            }
        }
    }

    fn emit(&self, out: &mut Pending, fact: Fact, rule: Rule, premises: Vec<Fact>, terms: Vec<usize>) {
        if !self.has(fact) && out.seen.insert(fact) {
            out.list.push((
                fact,
                Just {
                    step: Step::Rule(rule),
                    premises,
                    terms,
                },
            ));
        }
    }

    fn round(&mut self, ix: &Index, budget: &SearchBudget) -> Pending {
        let cfg = self.cfg;
        let n = self.universe.len();
        let mut out = Pending::default();
        let equational = cfg.equational;

        // REFL
        for t in 0..n {
            let fact = if equational { Fact::Eq(t, t) } else { Fact::Leq(t, t) };
            self.emit(&mut out, fact, Rule::Refl, vec![], vec![t]);
        }

        if cfg.base_enabled() {
            // POINT: s ≤ t ⊢ s u ≤ t u
            for &(a, s, u) in &ix.apps {
                for t in self.leq[s].ones() {
                    if let Some(&b) = ix.app_of.get(&(t, u)) {
                        self.emit(&mut out, Fact::Leq(a, b), Rule::Point, vec![Fact::Leq(s, t)], vec![u]);
                    }
                }
            }
            // MONO / ANTI
            for (rule, pol) in [(Rule::Mono, Polarity::Plus), (Rule::Anti, Polarity::Minus)] {
                for &f in &ix.consts {
                    if !self.pol[f][pol_slot(pol)] {
                        continue;
                    }
                    for &(t, ft) in &ix.by_fun[f] {
                        for &(u, fu) in &ix.by_fun[f] {
                            if self.leq[t].contains(u) {
                                let fact = if pol == Polarity::Plus {
                                    Fact::Leq(ft, fu)
                                } else {
                                    Fact::Leq(fu, ft)
                                };
                                self.emit(&mut out, fact, rule, vec![Fact::Pol(f, pol), Fact::Leq(t, u)], vec![]);
                            }
                        }
                    }
                }
            }
        }

        if cfg.wc && cfg.base_enabled() {
            self.wc12(&mut out, ix, budget);
            self.wc3(&mut out, ix);
        }

        if cfg.base_enabled() {
            self.trans(&mut out, false);
        }
        if equational {
            self.trans(&mut out, true);
        }

        if cfg.pos && cfg.base_enabled() {
            for &f in &ix.consts {
                for &(s, fs) in &ix.by_fun[f] {
                    for &(t, ft) in &ix.by_fun[f] {
                        if s != t && self.leq[s].contains(t) && self.leq[t].contains(s) {
                            self.emit(
                                &mut out,
                                Fact::Leq(fs, ft),
                                Rule::Pos,
                                vec![Fact::Leq(s, t), Fact::Leq(t, s)],
                                vec![f],
                            );
                        }
                    }
                }
            }
        }

        if cfg.identity || equational {
            for p in 0..n {
                for q in self.eq[p].ones() {
                    self.emit(&mut out, Fact::Eq(q, p), Rule::Symm, vec![Fact::Eq(p, q)], vec![]);
                }
            }
        }
        if cfg.identity && !equational {
            for p in 0..n {
                for q in self.eq[p].ones() {
                    self.emit(&mut out, Fact::Leq(p, q), Rule::Weak, vec![Fact::Eq(p, q)], vec![]);
                }
            }
            for p in 0..n {
                for q in self.leq[p].ones() {
                    if self.leq[q].contains(p) {
                        self.emit(
                            &mut out,
                            Fact::Eq(p, q),
                            Rule::PosPrime,
                            vec![Fact::Leq(p, q), Fact::Leq(q, p)],
                            vec![],
                        );
                    }
                }
            }
        }

        if equational {
            for &(a, t, u) in &ix.apps {
                for &(b, t2, u2) in &ix.apps {
                    if self.eq[t].contains(t2) && self.eq[u].contains(u2) {
                        self.emit(
                            &mut out,
                            Fact::Eq(a, b),
                            Rule::Cong,
                            vec![Fact::Eq(t, t2), Fact::Eq(u, u2)],
                            vec![],
                        );
                    }
                }
            }
        }

        if cfg.polarity && cfg.base_enabled() {
            for (rule, pol) in [(Rule::PolPlus, Polarity::Plus), (Rule::PolMinus, Polarity::Minus)] {
                for &f in &ix.consts {
                    if !self.pol[f][pol_slot(pol)] {
                        continue;
                    }
                    for &g in &ix.consts {
                        if g != f
                            && self.universe.term(g).ty().is_arrow()
                            && self.leq[f].contains(g)
                            && self.leq[g].contains(f)
                        {
                            self.emit(
                                &mut out,
                                Fact::Pol(g, pol),
                                rule,
                                vec![Fact::Pol(f, pol), Fact::Leq(f, g), Fact::Leq(g, f)],
                                vec![],
                            );
                        }
                    }
                }
            }
        }
        out
    }

    fn wc12(&mut self, out: &mut Pending, ix: &Index, budget: &SearchBudget) {
        let cap = budget.max_candidates.max(1);
        for (rule, pf, pg) in [
            (Rule::Wc1, Polarity::Plus, Polarity::Minus),
            (Rule::Wc2, Polarity::Minus, Polarity::Plus),
        ] {
            for &f in &ix.consts {
                if !self.pol[f][pol_slot(pf)] {
                    continue;
                }
                for &g in &ix.consts {
                    if !self.pol[g][pol_slot(pg)] || !self.leq[f].contains(g) {
                        continue;
                    }
                    if ix.by_fun[f].len() > cap || ix.by_fun[g].len() > cap {
                        self.capped = true;
                    }
                    for &(t, ft) in ix.by_fun[f].iter().take(cap) {
                        for &(u, gu) in ix.by_fun[g].iter().take(cap) {
                            self.emit(
                                out,
                                Fact::Leq(ft, gu),
                                rule,
                                vec![Fact::Pol(f, pf), Fact::Pol(g, pg), Fact::Leq(f, g)],
                                vec![t, u],
                            );
                        }
                    }
                }
            }
        }
    }

    fn wc3(&self, out: &mut Pending, ix: &Index) {
        // First application fact f t ≤ k u per (f, k), in universe order.
        let mut witness: HashMap<(usize, usize), Option<usize>> = HashMap::new();
        let mut find = |f: usize, k: usize| -> Option<(usize, usize)> {
            let w = *witness.entry((f, k)).or_insert_with(|| {
                ix.by_fun[f].iter().enumerate().find_map(|(i, &(_, ft))| {
                    ix.by_fun[k]
                        .iter()
                        .position(|&(_, ku)| self.leq[ft].contains(ku))
                        .map(|j| i * ix.by_fun[k].len() + j)
                })
            });
            w.map(|code| {
                let m = ix.by_fun[k].len();
                (ix.by_fun[f][code / m].1, ix.by_fun[k][code % m].1)
            })
        };
        for v in Wc3Variant::ALL {
            let [tf, tg, th, tk] = v.pattern();
            for &f in &ix.consts {
                if !self.pol[f][pol_slot(tf)] {
                    continue;
                }
                for &k in &ix.consts {
                    if !self.pol[k][pol_slot(tk)] || self.universe.term(f).ty() != self.universe.term(k).ty() {
                        continue;
                    }
                    let Some((ft, ku)) = find(f, k) else { continue };
                    for &g in &ix.consts {
                        if !self.pol[g][pol_slot(tg)] || !self.leq[g].contains(f) {
                            continue;
                        }
                        for &h in &ix.consts {
                            if !self.pol[h][pol_slot(th)] || !self.leq[k].contains(h) {
                                continue;
                            }
                            self.emit(
                                out,
                                Fact::Leq(g, h),
                                Rule::Wc3(v),
                                vec![
                                    Fact::Pol(f, tf),
                                    Fact::Pol(g, tg),
                                    Fact::Pol(h, th),
                                    Fact::Pol(k, tk),
                                    Fact::Leq(g, f),
                                    Fact::Leq(k, h),
                                    Fact::Leq(ft, ku),
                                ],
                                vec![],
                            );
                        }
                    }
                }
            }
        }
    }

    /// One composition step of the current relation. Rows are scanned in
    /// parallel and merged in row order, so the result is deterministic.
    fn trans(&self, out: &mut Pending, over_eq: bool) {
        let rel = if over_eq { &self.eq } else { &self.leq };
        let n = rel.len();
        let rows: Vec<Vec<(usize, usize)>> = (0..n)
            .into_par_iter()
            .map(|s| {
                let mut seen = rel[s].clone();
                let mut found = Vec::new();
                for t in rel[s].ones() {
                    if t == s {
                        continue;
                    }
                    for u in rel[t].ones() {
                        if !seen.contains(u) {
                            seen.insert(u);
                            found.push((t, u));
                        }
                    }
                }
                found
            })
            .collect();
        for (s, row) in rows.into_iter().enumerate() {
            for (t, u) in row {
                let (fact, a, b) = if over_eq {
                    (Fact::Eq(s, u), Fact::Eq(s, t), Fact::Eq(t, u))
                } else {
                    (Fact::Leq(s, u), Fact::Leq(s, t), Fact::Leq(t, u))
                };
                self.emit(out, fact, Rule::Trans, vec![a, b], vec![]);
            }
        }
    }
}

fn leaf(step: Step) -> Just {
    Just {
        step,
        premises: Vec::new(),
        terms: Vec::new(),
    }
}

/// Saturates `thy` under `cfg` inside `universe`.
pub fn saturate(thy: &Theory, cfg: &CalculusConfig, universe: &TermUniverse, budget: &SearchBudget) -> Saturation {
    saturate_until(thy, cfg, universe.clone(), budget, None)
}

fn saturate_until(
    thy: &Theory,
    cfg: &CalculusConfig,
    universe: TermUniverse,
    budget: &SearchBudget,
    stop: Option<&Assertion>,
) -> Saturation {
    let mut sat = Saturation::new(universe, *cfg);
    sat.leaves(thy);
    let stop = stop.and_then(|a| sat.fact_of(a));
    sat.run(budget, stop);
    sat
}

#[derive(Debug, Clone)]
pub enum ProveOutcome {
    Found(ProofTree),
    /// `complete` means the universe was saturated without truncation, so the
    /// goal is underivable *within that universe* (not globally).
    NotFound {
        complete: bool,
    },
}

impl ProveOutcome {
    pub fn proof(&self) -> Option<&ProofTree> {
        match self {
            ProveOutcome::Found(t) => Some(t),
            ProveOutcome::NotFound { .. } => None,
        }
    }
}

pub fn prove(
    thy: &Theory,
    goal: &Assertion,
    cfg: &CalculusConfig,
    policy: UniversePolicy,
    budget: &SearchBudget,
) -> ProveOutcome {
    let u = build_universe_multi(thy, std::slice::from_ref(goal), policy, budget);
    prove_in(thy, goal, cfg, u, budget)
}

/// Like [`prove`], over a caller-supplied universe.
pub fn prove_in(
    thy: &Theory,
    goal: &Assertion,
    cfg: &CalculusConfig,
    universe: TermUniverse,
    budget: &SearchBudget,
) -> ProveOutcome {
    let sat = saturate_until(thy, cfg, universe, budget, Some(goal));
    match sat.proof_of(goal) {
        Some(tree) => ProveOutcome::Found(tree),
        None => ProveOutcome::NotFound {
            complete: sat.complete(),
        },
    }
}
