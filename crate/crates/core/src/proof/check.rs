use std::fmt;

use super::rules::{infer_conclusion, side_conditions};
use super::{CalculusConfig, ProofTree, Step};
use crate::term::Term;
use crate::theory::{Assertion, Theory};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Accepted,
    /// `path` lists premise indices from the root to the offending node.
    Rejected {
        path: Vec<usize>,
        reason: String,
    },
}

impl Verdict {
    pub fn is_accepted(&self) -> bool {
        matches!(self, Verdict::Accepted)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Accepted => f.write_str("accepted"),
            Verdict::Rejected { path, reason } => {
                let p: Vec<String> = path.iter().map(|i| i.to_string()).collect();
                write!(f, "rejected at node [{}]: {reason}", p.join("."))
            }
        }
    }
}

/// Exact check of a derivation against a theory and a calculus.
pub fn check_proof(tree: &ProofTree, thy: &Theory, cfg: &CalculusConfig) -> Verdict {
    let mut path = Vec::new();
    match check_rec(tree, thy, cfg, &mut path) {
        Ok(()) => Verdict::Accepted,
        Err(reason) => Verdict::Rejected { path, reason },
    }
}

fn check_rec(node: &ProofTree, thy: &Theory, cfg: &CalculusConfig, path: &mut Vec<usize>) -> Result<(), String> {
    check_node(node, thy, cfg)?;
    for (i, p) in node.premises.iter().enumerate() {
        path.push(i);
        check_rec(p, thy, cfg, path)?;
        path.pop();
    }
    Ok(())
}

fn check_node(node: &ProofTree, thy: &Theory, cfg: &CalculusConfig) -> Result<(), String> {
    let sig = &thy.signature;
    if node.step.is_leaf() && !(node.premises.is_empty() && node.terms.is_empty()) {
        return Err("leaf node with premises or terms".into());
    }
    match &node.step {
        Step::Axiom(i) => match thy.axioms.get(*i) {
            Some(ax) if *ax == node.conclusion => Ok(()),
            Some(ax) => Err(format!("leaf not in Γ: axiom {i} is `{ax}`, not `{}`", node.conclusion)),
            None => Err(format!("leaf not in Γ: no axiom with index {i}")),
        },
        Step::SigOrder(f, g) => {
            let ok = sig.sig_leq(f, g)
                && matches!(&node.conclusion, Assertion::Leq(l, r)
                    if is_const(l, f, thy) && is_const(r, g, thy));
            if ok {
                Ok(())
            } else {
                Err(format!("order fact not in signature: {f} <= {g}"))
            }
        }
        Step::SigPol(f, p) => {
            if sig.has_tag(f, *p) && node.conclusion == Assertion::Pol(f.clone(), *p) {
                Ok(())
            } else {
                Err(format!("polarity fact not in signature: {f} {p}"))
            }
        }
        Step::Rule(rule) => {
            if !cfg.enables(*rule) {
                return Err(format!("rule disabled: {rule} is not part of calculus {cfg}"));
            }
            let prem: Vec<&Assertion> = node.premises.iter().map(|p| &p.conclusion).collect();
            let want = infer_conclusion(*rule, &prem, &node.terms, sig, cfg.equational)?;
            side_conditions(*rule, &prem, &node.terms, sig, cfg)?;
            if want != node.conclusion {
                return Err(format!(
                    "{rule}: conclusion `{}` does not match the schema instance `{want}`",
                    node.conclusion
                ));
            }
            Ok(())
        }
    }
}

fn is_const(t: &Term, name: &str, thy: &Theory) -> bool {
    t.const_name() == Some(name) && thy.signature.const_type(name) == Some(t.ty())
}
