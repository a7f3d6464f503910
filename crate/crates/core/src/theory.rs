//! Assertions, theories, and fresh-constant extensions of theories.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::signature::{validate_signature, Signature};
use crate::term::{type_of, Term};
use crate::types::SimpleType;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Polarity {
    Plus,
    Minus,
}

impl Polarity {
    pub fn flip(self) -> Polarity {
        match self {
            Polarity::Plus => Polarity::Minus,
            Polarity::Minus => Polarity::Plus,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Polarity::Plus => '+',
            Polarity::Minus => '-',
        }
    }
}

impl fmt::Display for Polarity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Assertion {
    Leq(Term, Term),
    Eq(Term, Term),
    /// A polarity claim about a function-typed constant.
    Pol(String, Polarity),
}

impl Assertion {
    pub fn leq(lhs: Term, rhs: Term) -> Assertion {
        Assertion::Leq(lhs, rhs)
    }

    pub fn terms(&self) -> Vec<&Term> {
        match self {
            Assertion::Leq(l, r) | Assertion::Eq(l, r) => vec![l, r],
            Assertion::Pol(..) => Vec::new(),
        }
    }

    /// `t <= t` or `t = t`.
    pub fn is_tautology(&self) -> bool {
        match self {
            Assertion::Leq(l, r) | Assertion::Eq(l, r) => l == r,
            Assertion::Pol(..) => false,
        }
    }

    pub fn mentions(&self, pred: &impl Fn(&str) -> bool) -> bool {
        match self {
            Assertion::Leq(l, r) | Assertion::Eq(l, r) => l.mentions(pred) || r.mentions(pred),
            Assertion::Pol(f, _) => pred(f),
        }
    }

    /// Checks the assertion against a signature.
    pub fn check(&self, sig: &Signature) -> Result<()> {
        match self {
            Assertion::Leq(l, r) | Assertion::Eq(l, r) => {
                let lt = type_of(l, sig)?;
                let rt = type_of(r, sig)?;
                if lt != rt {
                    return Err(Error::TypeMismatch(lt, rt));
                }
                Ok(())
            }
            Assertion::Pol(f, _) => {
                let ty = sig.const_type(f).ok_or_else(|| Error::UndeclaredConstant(f.clone()))?;
                if !ty.is_arrow() {
                    return Err(Error::NotAFunction(f.clone()));
                }
                Ok(())
            }
        }
    }
}

impl fmt::Display for Assertion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Assertion::Leq(l, r) => write!(f, "{l} <= {r}"),
            Assertion::Eq(l, r) => write!(f, "{l} = {r}"),
            Assertion::Pol(c, p) => write!(f, "{c} {p}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Theory {
    pub signature: Signature,
    pub axioms: Vec<Assertion>,
}

/// Names starting with this prefix are reserved for generated constants.
pub const RESERVED_PREFIX: &str = "__";

impl Theory {
    pub fn new(signature: Signature, axioms: Vec<Assertion>) -> Theory {
        Theory { signature, axioms }
    }

    /// Signature findings and ill-formed axioms, as an error.
    pub fn validate(&self) -> Result<()> {
        let findings = validate_signature(&self.signature);
        if let Some(f) = findings.first() {
            return Err(Error::InvalidSignature(f.message.clone()));
        }
        for (i, ax) in self.axioms.iter().enumerate() {
            ax.check(&self.signature)
                .map_err(|e| Error::InvalidTheory(format!("axiom {i}: {e}")))?;
        }
        Ok(())
    }

    /// Constant types, their subtypes, and the types of all axiom subterms.
    pub fn occurring_types(&self) -> BTreeSet<SimpleType> {
        let mut out = BTreeSet::new();
        for (_, ty) in self.signature.constants() {
            out.extend(ty.subtypes());
        }
        for ax in &self.axioms {
            for t in ax.terms() {
                for s in t.subterms() {
                    out.extend(s.ty().subtypes());
                }
            }
        }
        out
    }

    fn ensure_unreserved(&self) -> Result<()> {
        match self
            .signature
            .constants()
            .into_iter()
            .find(|(n, _)| n.starts_with(RESERVED_PREFIX))
        {
            Some((n, _)) => Err(Error::ReservedName(n.to_string())),
            None => Ok(()),
        }
    }
}

/// Fresh constants added by [`extend_with_fresh`], one per occurring type.
pub type FreshMap = BTreeMap<SimpleType, String>;

pub fn is_fresh_name(name: &str) -> bool {
    name.starts_with(RESERVED_PREFIX)
}

/// Adds one isolated, untagged constant `□σ` per occurring type σ. The
/// axioms are unchanged.
pub fn extend_with_fresh(thy: &Theory) -> Result<Theory> {
    extend_with_fresh_map(thy).map(|(t, _)| t)
}

pub fn extend_with_fresh_map(thy: &Theory) -> Result<(Theory, FreshMap)> {
    thy.ensure_unreserved()?;
    let mut sig = thy.signature.clone();
    let mut map = FreshMap::new();
    for (i, ty) in thy.occurring_types().into_iter().enumerate() {
        let name = format!("{RESERVED_PREFIX}box{i}");
        sig = sig.with_isolated_constant(&name, &ty);
        map.insert(ty, name);
    }
    Ok((Theory::new(sig, thy.axioms.clone()), map))
}

/// Per occurring type, the two constants `□1`, `□2` of [`extend_with_ordered_pair`].
pub type PairMap = BTreeMap<SimpleType, (String, String)>;

/// Adds `□1σ`, `□2σ` per occurring type together with the axiom `□1σ ≤ □2σ`.
pub fn extend_with_ordered_pair(thy: &Theory) -> Result<Theory> {
    extend_with_ordered_pair_map(thy).map(|(t, _)| t)
}

pub fn extend_with_ordered_pair_map(thy: &Theory) -> Result<(Theory, PairMap)> {
    thy.ensure_unreserved()?;
    let mut sig = thy.signature.clone();
    let mut axioms = thy.axioms.clone();
    let mut map = PairMap::new();
    for (i, ty) in thy.occurring_types().into_iter().enumerate() {
        let lo = format!("{RESERVED_PREFIX}lo{i}");
        let hi = format!("{RESERVED_PREFIX}hi{i}");
        sig = sig.with_isolated_constant(&lo, &ty);
        sig = sig.with_isolated_constant(&hi, &ty);
        axioms.push(Assertion::Leq(
            Term::constant(lo.clone(), ty.clone()),
            Term::constant(hi.clone(), ty.clone()),
        ));
        map.insert(ty, (lo, hi));
    }
    Ok((Theory::new(sig, axioms), map))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signature::SignatureBuilder;

    fn b() -> SimpleType {
        SimpleType::base("b")
    }

    fn single_base() -> Theory {
        let sig = SignatureBuilder::new()
            .base("b")
            .constant("a", b(), false, false)
            .build()
            .unwrap();
        Theory::new(sig, vec![])
    }

    #[test]
    fn fresh_over_single_base() {
        let (ext, map) = extend_with_fresh_map(&single_base()).unwrap();
        assert_eq!(map.len(), 1);
        assert_eq!(ext.signature.num_constants(), 2);
        let bx = &map[&b()];
        assert!(ext.signature.sig_leq(bx, bx));
        assert!(!ext.signature.sig_leq(bx, "a"));
        assert!(ext.validate().is_ok());
    }

    #[test]
    fn fresh_covers_subtypes() {
        let t = SimpleType::base("t");
        let bt = SimpleType::arrow(b(), t.clone());
        let sig = SignatureBuilder::new()
            .base("b")
            .base("t")
            .constant("a", b(), false, false)
            .constant("f", bt.clone(), true, false)
            .build()
            .unwrap();
        let (ext, map) = extend_with_fresh_map(&Theory::new(sig, vec![])).unwrap();
        assert_eq!(map.keys().cloned().collect::<Vec<_>>(), vec![b(), t, bt]);
        let bx = &map[&SimpleType::arrow(b(), SimpleType::base("t"))];
        assert!(ext.signature.tags(bx).is_empty());
    }

    #[test]
    fn fresh_twice_collides() {
        let ext = extend_with_fresh(&single_base()).unwrap();
        assert!(matches!(extend_with_fresh(&ext), Err(Error::ReservedName(_))));
        assert!(matches!(extend_with_ordered_pair(&ext), Err(Error::ReservedName(_))));
    }

    #[test]
    fn ordered_pair_over_single_base() {
        let ext = extend_with_ordered_pair(&single_base()).unwrap();
        assert_eq!(ext.signature.num_constants(), 3);
        assert_eq!(ext.axioms.len(), 1);
        assert_eq!(ext.axioms[0].to_string(), "__lo0 <= __hi0");
    }

    #[test]
    fn ordered_pair_on_empty_theory_is_identity() {
        let thy = Theory::default();
        assert_eq!(extend_with_ordered_pair(&thy).unwrap(), thy);
    }

    #[test]
    fn ordered_pair_counts() {
        // β -> β: occurring types β and β -> β.
        let sig = SignatureBuilder::new()
            .base("b")
            .constant("h", SimpleType::arrow(b(), b()), true, false)
            .build()
            .unwrap();
        let ext = extend_with_ordered_pair(&Theory::new(sig, vec![])).unwrap();
        assert_eq!(ext.signature.num_constants(), 1 + 4);
        assert_eq!(ext.axioms.len(), 2);
        // β -> τ: occurring types β, τ and β -> τ.
        let sig = SignatureBuilder::new()
            .base("b")
            .base("t")
            .constant("f", SimpleType::arrow(b(), SimpleType::base("t")), true, false)
            .build()
            .unwrap();
        let ext = extend_with_ordered_pair(&Theory::new(sig, vec![])).unwrap();
        assert_eq!(ext.signature.num_constants(), 1 + 6);
        assert_eq!(ext.axioms.len(), 3);
    }
}
