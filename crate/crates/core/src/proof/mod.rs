//! Proof trees, the exact proof checker, bounded saturation-based proof
//! search, and congruence closure for the purely equational fragment.

mod cc;
mod check;
mod rules;
mod saturate;
mod universe;

#[cfg(test)]
mod tests_fixtures;

use std::fmt;

use crate::term::Term;
#[cfg(test)]
use crate::theory::Theory;
use crate::theory::{Assertion, Polarity};

pub use cc::{congruence_closure, decide_eq, Partition};
pub use check::{check_proof, Verdict};
pub use rules::infer_conclusion;
pub use saturate::{prove, prove_in, saturate, Fact, ProveOutcome, Saturation};
pub use universe::{
    absorb_signature_order, build_universe, build_universe_multi, SearchBudget, TermUniverse, UniversePolicy,
};

/// Which rule groups are active.
///
/// The basic monotonicity rules are always on except in equational mode,
/// which enables exactly reflexivity, symmetry, transitivity and congruence
/// for `=`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct CalculusConfig {
    pub wc: bool,
    pub pos: bool,
    pub identity: bool,
    pub polarity: bool,
    pub equational: bool,
}

impl CalculusConfig {
    pub fn base() -> Self {
        Self::default()
    }

    pub fn wc() -> Self {
        CalculusConfig {
            wc: true,
            ..Self::default()
        }
    }

    pub fn equational() -> Self {
        CalculusConfig {
            equational: true,
            ..Self::default()
        }
    }

    pub fn base_enabled(&self) -> bool {
        !self.equational
    }

    /// Parses a comma-separated list of `base`, `wc`, `pos`, `identity`,
    /// `polarity`, `eq`. `eq` cannot be combined with the others.
    pub fn parse(spec: &str) -> Result<Self, String> {
        let mut cfg = CalculusConfig::default();
        let mut others = false;
        for part in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            match part {
                "base" => others = true,
                "wc" => {
                    cfg.wc = true;
                    others = true
                }
                "pos" => {
                    cfg.pos = true;
                    others = true
                }
                "identity" => {
                    cfg.identity = true;
                    others = true
                }
                "polarity" => {
                    cfg.polarity = true;
                    others = true
                }
                "eq" => cfg.equational = true,
                other => return Err(format!("unknown calculus `{other}`")),
            }
        }
        if cfg.equational && others {
            return Err("`eq` cannot be combined with other calculi".into());
        }
        Ok(cfg)
    }

    pub fn enables(&self, rule: Rule) -> bool {
        use Rule::*;
        if self.equational {
            return matches!(rule, Refl | Symm | Trans | Cong);
        }
        match rule {
            Refl | Trans | Point | Mono | Anti => true,
            Wc1 | Wc2 | Wc3(_) => self.wc,
            Pos => self.pos,
            Symm | Weak | PosPrime => self.identity,
            PolPlus | PolMinus => self.polarity,
            Cong => false,
        }
    }
}

impl fmt::Display for CalculusConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.equational {
            return f.write_str("eq");
        }
        let mut parts = vec!["base"];
        if self.wc {
            parts.push("wc");
        }
        if self.pos {
            parts.push("pos");
        }
        if self.identity {
            parts.push("identity");
        }
        if self.polarity {
            parts.push("polarity");
        }
        f.write_str(&parts.join(","))
    }
}

/// The four tonicity arrangements of the third weak-completeness rule.
///
/// Each fixes the tags of `f, g, h, k` in the schema
/// `g ≤ f, k ≤ h, f t ≤ k u ⊢ g ≤ h`; in all of them `g`/`f` carry opposite
/// tags and so do `h`/`k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Wc3Variant {
    /// f⁻ g⁺ h⁺ k⁻
    A,
    /// f⁺ g⁻ h⁺ k⁻
    B,
    /// f⁻ g⁺ h⁻ k⁺
    C,
    /// f⁺ g⁻ h⁻ k⁺
    D,
}

impl Wc3Variant {
    pub const ALL: [Wc3Variant; 4] = [Wc3Variant::A, Wc3Variant::B, Wc3Variant::C, Wc3Variant::D];

    /// Required tags of `(f, g, h, k)`.
    pub fn pattern(self) -> [Polarity; 4] {
        use Polarity::{Minus as M, Plus as P};
        match self {
            Wc3Variant::A => [M, P, P, M],
            Wc3Variant::B => [P, M, P, M],
            Wc3Variant::C => [M, P, M, P],
            Wc3Variant::D => [P, M, M, P],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rule {
    Refl,
    Trans,
    Point,
    Mono,
    Anti,
    Wc1,
    Wc2,
    Wc3(Wc3Variant),
    Pos,
    Symm,
    Weak,
    PosPrime,
    Cong,
    PolPlus,
    PolMinus,
}

impl Rule {
    pub const ALL: [Rule; 18] = [
        Rule::Refl,
        Rule::Trans,
        Rule::Point,
        Rule::Mono,
        Rule::Anti,
        Rule::Wc1,
        Rule::Wc2,
        Rule::Wc3(Wc3Variant::A),
        Rule::Wc3(Wc3Variant::B),
        Rule::Wc3(Wc3Variant::C),
        Rule::Wc3(Wc3Variant::D),
        Rule::Pos,
        Rule::Symm,
        Rule::Weak,
        Rule::PosPrime,
        Rule::Cong,
        Rule::PolPlus,
        Rule::PolMinus,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Rule::Refl => "refl",
            Rule::Trans => "trans",
            Rule::Point => "point",
            Rule::Mono => "mono",
            Rule::Anti => "anti",
            Rule::Wc1 => "wc1",
            Rule::Wc2 => "wc2",
            Rule::Wc3(Wc3Variant::A) => "wc3a",
            Rule::Wc3(Wc3Variant::B) => "wc3b",
            Rule::Wc3(Wc3Variant::C) => "wc3c",
            Rule::Wc3(Wc3Variant::D) => "wc3d",
            Rule::Pos => "pos",
            Rule::Symm => "symm",
            Rule::Weak => "weak",
            Rule::PosPrime => "posp",
            Rule::Cong => "cong",
            Rule::PolPlus => "pol+",
            Rule::PolMinus => "pol-",
        }
    }

    pub fn from_name(name: &str) -> Option<Rule> {
        Rule::ALL.into_iter().find(|r| r.name() == name)
    }

    /// (number of premises, number of term payloads)
    pub fn arity(self) -> (usize, usize) {
        match self {
            Rule::Refl => (0, 1),
            Rule::Trans => (2, 0),
            Rule::Point => (1, 1),
            Rule::Mono | Rule::Anti => (2, 0),
            Rule::Wc1 | Rule::Wc2 => (3, 2),
            Rule::Wc3(_) => (7, 0),
            Rule::Pos => (2, 1),
            Rule::Symm | Rule::Weak => (1, 0),
            Rule::PosPrime | Rule::Cong => (2, 0),
            Rule::PolPlus | Rule::PolMinus => (3, 0),
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// What justifies a node: a leaf payload or a rule.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Step {
    /// The axiom at this 0-based index of the theory.
    Axiom(usize),
    SigOrder(String, String),
    SigPol(String, Polarity),
    Rule(Rule),
}

impl Step {
    pub fn is_leaf(&self) -> bool {
        !matches!(self, Step::Rule(_))
    }
}

/// A derivation. Internal nodes carry their premises in schema order and,
/// for rules with freely chosen terms, the chosen terms.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ProofTree {
    pub conclusion: Assertion,
    pub step: Step,
    pub premises: Vec<ProofTree>,
    pub terms: Vec<Term>,
}

impl ProofTree {
    pub fn leaf(conclusion: Assertion, step: Step) -> ProofTree {
        ProofTree {
            conclusion,
            step,
            premises: Vec::new(),
            terms: Vec::new(),
        }
    }

    pub fn node(conclusion: Assertion, rule: Rule, premises: Vec<ProofTree>, terms: Vec<Term>) -> ProofTree {
        ProofTree {
            conclusion,
            step: Step::Rule(rule),
            premises,
            terms,
        }
    }

    pub fn rule(&self) -> Option<Rule> {
        match self.step {
            Step::Rule(r) => Some(r),
            _ => None,
        }
    }

    /// Every node, leaves included.
    pub fn node_count(&self) -> usize {
        1 + self.premises.iter().map(|p| p.node_count()).sum::<usize>()
    }

    /// Internal nodes only.
    pub fn rule_count(&self) -> usize {
        usize::from(!self.step.is_leaf()) + self.premises.iter().map(|p| p.rule_count()).sum::<usize>()
    }

    pub fn depth(&self) -> usize {
        1 + self.premises.iter().map(|p| p.depth()).max().unwrap_or(0)
    }

    /// Rules in pre-order.
    pub fn rules(&self) -> Vec<Rule> {
        let mut out = Vec::new();
        self.walk(&mut |t| {
            if let Some(r) = t.rule() {
                out.push(r)
            }
        });
        out
    }

    pub fn walk(&self, visit: &mut impl FnMut(&ProofTree)) {
        visit(self);
        for p in &self.premises {
            p.walk(visit);
        }
    }

    pub fn leaves(&self) -> Vec<&ProofTree> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves<'a>(&'a self, out: &mut Vec<&'a ProofTree>) {
        if self.premises.is_empty() && self.step.is_leaf() {
            out.push(self);
        }
        for p in &self.premises {
            p.collect_leaves(out);
        }
    }

    /// The subtree at a path of premise indices.
    pub fn at(&self, path: &[usize]) -> Option<&ProofTree> {
        match path.split_first() {
            None => Some(self),
            Some((&i, rest)) => self.premises.get(i)?.at(rest),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn calculus_parsing() {
        let cfg = CalculusConfig::parse("base,wc").unwrap();
        assert!(cfg.wc && !cfg.pos);
        assert_eq!(cfg.to_string(), "base,wc");
        assert!(CalculusConfig::parse("eq,wc").is_err());
        assert!(CalculusConfig::parse("nope").is_err());
        let eq = CalculusConfig::parse("eq").unwrap();
        assert!(eq.enables(Rule::Cong) && !eq.enables(Rule::Mono));
        assert!(!CalculusConfig::base().enables(Rule::Wc1));
    }

    #[test]
    fn rule_names_round_trip() {
        for r in Rule::ALL {
            assert_eq!(Rule::from_name(r.name()), Some(r));
        }
    }

    #[test]
    fn wc3_patterns_pair_opposite_tags() {
        for v in Wc3Variant::ALL {
            let [f, g, h, k] = v.pattern();
            assert_ne!(f, g);
            assert_ne!(h, k);
        }
        let mut pats: Vec<_> = Wc3Variant::ALL.iter().map(|v| v.pattern()).collect();
        pats.dedup();
        assert_eq!(pats.len(), 4);
    }
}
