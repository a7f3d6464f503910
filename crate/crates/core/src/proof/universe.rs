use std::collections::HashMap;
use std::fmt;

use crate::signature::{Signature, SignatureBuilder};
use crate::term::Term;
use crate::theory::{Assertion, Theory};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum UniversePolicy {
    /// Signature constants plus the subterm closure of axioms and goal.
    #[default]
    Subterms,
    /// The above, then `d` rounds of well-typed application among members.
    AppClosure(usize),
}

impl fmt::Display for UniversePolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UniversePolicy::Subterms => f.write_str("subterms"),
            UniversePolicy::AppClosure(d) => write!(f, "apps:{d}"),
        }
    }
}

impl std::str::FromStr for UniversePolicy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s == "subterms" {
            return Ok(UniversePolicy::Subterms);
        }
        match s.strip_prefix("apps:").map(str::parse::<usize>) {
            Some(Ok(d)) => Ok(UniversePolicy::AppClosure(d)),
            _ => Err(format!("bad universe policy `{s}` (expected `subterms` or `apps:N`)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SearchBudget {
    pub max_universe: usize,
    pub max_rounds: usize,
    /// Cap on argument choices per side in one WC1/WC2 instantiation.
    pub max_candidates: usize,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_universe: 2_000,
            max_rounds: 64,
            max_candidates: 256,
        }
    }
}

/// A finite, subterm-closed set of terms with dense ids.
#[derive(Debug, Clone, Default)]
pub struct TermUniverse {
    terms: Vec<Term>,
    index: HashMap<Term, usize>,
    policy: UniversePolicy,
    truncated: bool,
}

impl TermUniverse {
    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn id(&self, t: &Term) -> Option<usize> {
        self.index.get(t).copied()
    }

    pub fn term(&self, id: usize) -> &Term {
        &self.terms[id]
    }

    pub fn contains(&self, t: &Term) -> bool {
        self.index.contains_key(t)
    }

    pub fn policy(&self) -> UniversePolicy {
        self.policy
    }

    /// Set when the size budget stopped construction early.
    pub fn truncated(&self) -> bool {
        self.truncated
    }

    /// Builds a universe from explicit seeds, closed under subterms.
    pub fn from_seeds<'a>(seeds: impl IntoIterator<Item = &'a Term>, max: usize) -> TermUniverse {
        let mut u = TermUniverse::default();
        for t in seeds {
            for s in t.subterms() {
                if !u.push(s, max) {
                    return u;
                }
            }
        }
        u
    }

    /// Inserts `t` if absent; returns false when the cap was hit.
    fn push(&mut self, t: Term, max: usize) -> bool {
        if self.index.contains_key(&t) {
            return true;
        }
        if self.terms.len() >= max {
            self.truncated = true;
            return false;
        }
        self.index.insert(t.clone(), self.terms.len());
        self.terms.push(t);
        true
    }

    fn close_apps(&mut self, rounds: usize, max: usize) {
        for _ in 0..rounds {
            let snapshot = self.terms.clone();
            let mut grew = false;
            for f in &snapshot {
                let Some(dom) = f.ty().domain() else { continue };
                for a in snapshot.iter().filter(|a| a.ty() == dom) {
                    let t = Term::app(f.clone(), a.clone()).expect("domain checked");
                    let before = self.terms.len();
                    if !self.push(t, max) {
                        return;
                    }
                    grew |= self.terms.len() > before;
                }
            }
            if !grew {
                break;
            }
        }
    }
}

/// Seeds are signature constants (declaration order), then subterms of the
/// axioms, then subterms of the goal.
pub fn build_universe(thy: &Theory, goal: &Assertion, policy: UniversePolicy, budget: &SearchBudget) -> TermUniverse {
    build_universe_multi(thy, std::slice::from_ref(goal), policy, budget)
}

pub fn build_universe_multi(
    thy: &Theory,
    goals: &[Assertion],
    policy: UniversePolicy,
    budget: &SearchBudget,
) -> TermUniverse {
    let consts: Vec<Term> = thy
        .signature
        .constants()
        .into_iter()
        .map(|(n, ty)| Term::constant(n, ty.clone()))
        .collect();
    let seeds = consts
        .iter()
        .chain(thy.axioms.iter().flat_map(|a| a.terms()))
        .chain(goals.iter().flat_map(|a| a.terms()));
    let mut u = TermUniverse::from_seeds(seeds, budget.max_universe);
    u.policy = policy;
    if let UniversePolicy::AppClosure(d) = policy {
        if !u.truncated {
            u.close_apps(d, budget.max_universe);
        }
    }
    u
}

/// Moves every strict signature order fact `f ≤ g` into the axioms, leaving
/// each constant family discrete. Derivability is unchanged: the facts become
/// axiom leaves instead of signature leaves.
pub fn absorb_signature_order(thy: &Theory) -> Theory {
    let sig = &thy.signature;
    let mut b = SignatureBuilder::new();
    for base in sig.bases() {
        b.add_base(base);
    }
    let mut axioms = thy.axioms.clone();
    for (name, ty) in sig.constants() {
        let plus = sig.has_tag(name, crate::theory::Polarity::Plus);
        let minus = sig.has_tag(name, crate::theory::Polarity::Minus);
        b.add_constant(name, ty.clone(), plus, minus);
    }
    for (f, fty) in sig.constants() {
        for (g, gty) in sig.constants() {
            if f != g && fty == gty && sig.sig_leq(f, g) {
                axioms.push(Assertion::Leq(
                    Term::constant(f, fty.clone()),
                    Term::constant(g, gty.clone()),
                ));
            }
        }
    }
    let signature: Signature = b.build().expect("constants copied from a built signature");
    Theory::new(signature, axioms)
}
