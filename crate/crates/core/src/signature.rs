//! Ordered signatures: one preorder of constants per base type and one
//! polarized preorder of constants per function type.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::preorder::{closure_of_indices, FinPreorder, PolarizedFinPreorder};
use crate::term::Term;
use crate::theory::Polarity;
use crate::types::SimpleType;

/// Where a constant lives: its type and its position in that type's family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstRef {
    pub ty: SimpleType,
    pub pos: usize,
}

#[derive(Clone, PartialEq, Eq)]
pub struct Signature {
    bases: BTreeSet<String>,
    families: BTreeMap<SimpleType, PolarizedFinPreorder>,
    index: BTreeMap<String, ConstRef>,
    duplicates: Vec<String>,
}

impl fmt::Debug for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Signature")
            .field("bases", &self.bases)
            .field("families", &self.families)
            .finish()
    }
}

impl Default for Signature {
    fn default() -> Self {
        Signature::from_parts(BTreeSet::new(), BTreeMap::new())
    }
}

impl Signature {
    /// Assembles a signature from raw parts. Nothing is checked here; see
    /// [`validate_signature`].
    pub fn from_parts(bases: BTreeSet<String>, families: BTreeMap<SimpleType, PolarizedFinPreorder>) -> Self {
        let mut index = BTreeMap::new();
        let mut duplicates = Vec::new();
        for (ty, fam) in &families {
            for (pos, name) in fam.base.elements().iter().enumerate() {
                if index.contains_key(name) {
                    duplicates.push(name.clone());
                } else {
                    index.insert(name.clone(), ConstRef { ty: ty.clone(), pos });
                }
            }
        }
        Signature {
            bases,
            families,
            index,
            duplicates,
        }
    }

    pub fn bases(&self) -> &BTreeSet<String> {
        &self.bases
    }

    pub fn families(&self) -> &BTreeMap<SimpleType, PolarizedFinPreorder> {
        &self.families
    }

    pub fn family(&self, ty: &SimpleType) -> Option<&PolarizedFinPreorder> {
        self.families.get(ty)
    }

    /// The constants' preorder at a base type, if any constant was declared.
    pub fn base_preorder(&self, name: &str) -> Option<&FinPreorder> {
        self.families.get(&SimpleType::base(name)).map(|f| &f.base)
    }

    pub fn const_ref(&self, name: &str) -> Option<&ConstRef> {
        self.index.get(name)
    }

    pub fn const_type(&self, name: &str) -> Option<&SimpleType> {
        self.index.get(name).map(|r| &r.ty)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.index.contains_key(name)
    }

    /// All constants with their types, family by family.
    pub fn constants(&self) -> Vec<(&str, &SimpleType)> {
        self.families
            .iter()
            .flat_map(|(ty, fam)| fam.base.elements().iter().map(move |n| (n.as_str(), ty)))
            .collect()
    }

    pub fn num_constants(&self) -> usize {
        self.families.values().map(|f| f.len()).sum()
    }

    pub fn const_term(&self, name: &str) -> Result<Term> {
        let ty = self
            .const_type(name)
            .ok_or_else(|| Error::UndeclaredConstant(name.to_string()))?;
        Ok(Term::constant(name, ty.clone()))
    }

    /// `f ≤ g` recorded in the signature (both constants of the same type).
    pub fn sig_leq(&self, f: &str, g: &str) -> bool {
        match (self.index.get(f), self.index.get(g)) {
            (Some(a), Some(b)) if a.ty == b.ty => self.families[&a.ty].base.leq(a.pos, b.pos),
            _ => false,
        }
    }

    pub fn has_tag(&self, f: &str, pol: Polarity) -> bool {
        match self.index.get(f) {
            Some(r) if r.ty.is_arrow() => {
                let fam = &self.families[&r.ty];
                match pol {
                    Polarity::Plus => fam.is_plus(r.pos),
                    Polarity::Minus => fam.is_minus(r.pos),
                }
            }
            _ => false,
        }
    }

    pub fn tags(&self, f: &str) -> Vec<Polarity> {
        [Polarity::Plus, Polarity::Minus]
            .into_iter()
            .filter(|&p| self.has_tag(f, p))
            .collect()
    }

    /// Adds `name : ty` related only to itself and carrying no tags.
    pub fn with_isolated_constant(&self, name: &str, ty: &SimpleType) -> Signature {
        let mut families = self.families.clone();
        let fam = families
            .entry(ty.clone())
            .or_insert_with(|| PolarizedFinPreorder::untagged(FinPreorder::empty()));
        fam.base = fam.base.with_isolated(name);
        let mut bases = self.bases.clone();
        for b in ty.base_names() {
            bases.insert(b.to_string());
        }
        Signature::from_parts(bases, families)
    }

    pub(crate) fn duplicates(&self) -> &[String] {
        &self.duplicates
    }
}

/// Incremental construction of a [`Signature`] from named declarations.
#[derive(Debug, Default, Clone)]
pub struct SignatureBuilder {
    bases: Vec<String>,
    consts: Vec<(String, SimpleType, bool, bool)>,
    orders: Vec<(String, String)>,
}

impl SignatureBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn base(mut self, name: &str) -> Self {
        self.add_base(name);
        self
    }

    pub fn constant(mut self, name: &str, ty: SimpleType, plus: bool, minus: bool) -> Self {
        self.add_constant(name, ty, plus, minus);
        self
    }

    pub fn order(mut self, f: &str, g: &str) -> Self {
        self.add_order(f, g);
        self
    }

    pub fn add_base(&mut self, name: &str) {
        if !self.bases.iter().any(|b| b == name) {
            self.bases.push(name.to_string());
        }
    }

    pub fn add_constant(&mut self, name: &str, ty: SimpleType, plus: bool, minus: bool) {
        self.consts.push((name.to_string(), ty, plus, minus));
    }

    pub fn add_order(&mut self, f: &str, g: &str) {
        self.orders.push((f.to_string(), g.to_string()));
    }

    /// Order facts are closed reflexively and transitively per type.
    /// Fails only on facts that cannot be represented (unknown constants or
    /// constants of different types).
    pub fn build(self) -> Result<Signature> {
        let mut members: BTreeMap<SimpleType, Vec<(String, bool, bool)>> = BTreeMap::new();
        for (name, ty, plus, minus) in &self.consts {
            members
                .entry(ty.clone())
                .or_default()
                .push((name.clone(), *plus, *minus));
        }
        let mut pairs: BTreeMap<SimpleType, Vec<(usize, usize)>> = BTreeMap::new();
        for (f, g) in &self.orders {
            let find = |n: &str| {
                members
                    .iter()
                    .find_map(|(ty, ms)| ms.iter().position(|m| m.0 == n).map(|p| (ty.clone(), p)))
            };
            let (tf, pf) = find(f).ok_or_else(|| Error::UndeclaredConstant(f.clone()))?;
            let (tg, pg) = find(g).ok_or_else(|| Error::UndeclaredConstant(g.clone()))?;
            if tf != tg {
                return Err(Error::TypeMismatch(tf, tg));
            }
            pairs.entry(tf).or_default().push((pf, pg));
        }
        let mut families = BTreeMap::new();
        for (ty, ms) in members {
            let names: Vec<String> = ms.iter().map(|m| m.0.clone()).collect();
            let base = closure_of_indices(names, pairs.get(&ty).map(|v| v.as_slice()).unwrap_or(&[]));
            let plus = ms.iter().enumerate().filter(|(_, m)| m.1).map(|(i, _)| i).collect();
            let minus = ms.iter().enumerate().filter(|(_, m)| m.2).map(|(i, _)| i).collect();
            families.insert(ty, PolarizedFinPreorder { base, plus, minus });
        }
        Ok(Signature::from_parts(self.bases.into_iter().collect(), families))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FindingKind {
    NotReflexive,
    NotTransitive,
    PolarityOnBase,
    DuplicateConstant,
    UndeclaredBase,
    TagOutOfRange,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Finding {
    pub kind: FindingKind,
    pub message: String,
}

impl fmt::Display for Finding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

/// Reports every violated signature invariant. Empty iff valid.
pub fn validate_signature(sig: &Signature) -> Vec<Finding> {
    let mut out = Vec::new();
    let mut push = |kind, message: String| out.push(Finding { kind, message });
    for (ty, fam) in sig.families() {
        let p = &fam.base;
        if let Some(i) = (0..p.len()).find(|&i| !p.leq(i, i)) {
            push(
                FindingKind::NotReflexive,
                format!("order at type {ty} is not reflexive: missing {0} <= {0}", p.name(i)),
            );
        }
        if let Some((i, j, k)) = p.transitivity_violation() {
            push(
                FindingKind::NotTransitive,
                format!(
                    "order at type {ty} is not transitive: {} <= {} <= {} but not {} <= {}",
                    p.name(i),
                    p.name(j),
                    p.name(k),
                    p.name(i),
                    p.name(k)
                ),
            );
        }
        for &i in fam.plus.iter().chain(fam.minus.iter()) {
            if i >= p.len() {
                push(
                    FindingKind::TagOutOfRange,
                    format!("polarity tag on index {i} outside the family at type {ty}"),
                );
            } else if !ty.is_arrow() {
                push(
                    FindingKind::PolarityOnBase,
                    format!("constant `{}` of base type {ty} carries a polarity tag", p.name(i)),
                );
            }
        }
        for b in ty.base_names() {
            if !sig.bases().contains(b) {
                push(
                    FindingKind::UndeclaredBase,
                    format!("type {ty} mentions undeclared base type `{b}`"),
                );
            }
        }
    }
    for d in sig.duplicates() {
        push(
            FindingKind::DuplicateConstant,
            format!("constant `{d}` is declared more than once"),
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b() -> SimpleType {
        SimpleType::base("b")
    }
    fn t() -> SimpleType {
        SimpleType::base("t")
    }

    fn first_signature() -> Signature {
        let bt = SimpleType::arrow(b(), t());
        SignatureBuilder::new()
            .base("b")
            .base("t")
            .constant("a", b(), false, false)
            .constant("b0", b(), false, false)
            .constant("c", b(), false, false)
            .constant("f", bt.clone(), true, false)
            .constant("g", bt.clone(), false, true)
            .constant("phi", SimpleType::arrow(t(), bt), false, true)
            .order("f", "g")
            .build()
            .unwrap()
    }

    #[test]
    fn first_signature_is_valid() {
        let sig = first_signature();
        assert!(validate_signature(&sig).is_empty());
        assert!(sig.sig_leq("f", "g"));
        assert!(!sig.sig_leq("g", "f"));
        assert!(sig.has_tag("f", Polarity::Plus));
        assert!(sig.has_tag("phi", Polarity::Minus));
        assert!(!sig.has_tag("a", Polarity::Plus));
    }

    #[test]
    fn missing_reflexivity_is_reported() {
        let p = FinPreorder::from_matrix(vec!["a".into(), "c".into()], vec![false, true, false, true]);
        let mut fams = BTreeMap::new();
        fams.insert(b(), PolarizedFinPreorder::untagged(p));
        let sig = Signature::from_parts(["b".to_string()].into(), fams);
        let findings = validate_signature(&sig);
        assert!(findings.iter().any(|f| f.kind == FindingKind::NotReflexive));
        assert!(findings[0].message.contains("not reflexive"));
    }

    #[test]
    fn tag_on_base_constant_is_reported() {
        let sig = SignatureBuilder::new()
            .base("b")
            .constant("a", b(), true, false)
            .build()
            .unwrap();
        let findings = validate_signature(&sig);
        assert_eq!(findings.len(), 1);
        assert_eq!(findings[0].kind, FindingKind::PolarityOnBase);
    }

    #[test]
    fn duplicates_and_undeclared_bases_are_reported() {
        let sig = SignatureBuilder::new()
            .base("b")
            .constant("a", b(), false, false)
            .constant("a", SimpleType::arrow(b(), t()), false, false)
            .build()
            .unwrap();
        let kinds: Vec<_> = validate_signature(&sig).into_iter().map(|f| f.kind).collect();
        assert!(kinds.contains(&FindingKind::DuplicateConstant));
        assert!(kinds.contains(&FindingKind::UndeclaredBase));
    }

    #[test]
    fn order_across_types_is_rejected() {
        let err = SignatureBuilder::new()
            .base("b")
            .constant("a", b(), false, false)
            .constant("f", SimpleType::arrow(b(), b()), false, false)
            .order("a", "f")
            .build()
            .unwrap_err();
        assert!(matches!(err, Error::TypeMismatch(..)));
    }
}
