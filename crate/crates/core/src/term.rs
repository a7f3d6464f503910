//! Variable-free applicative terms with cached types.

use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::signature::Signature;
use crate::types::SimpleType;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TermKind {
    Const(String),
    App(Term, Term),
}

#[derive(Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct TermNode {
    kind: TermKind,
    ty: SimpleType,
}

/// A typed term: a constant or an application `t u`. Cheap to clone.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Term(Arc<TermNode>);

impl Term {
    /// A constant with the given type. The signature is not consulted; use
    /// [`Signature::const_term`] or [`type_of`] to check declarations.
    pub fn constant(name: impl Into<String>, ty: SimpleType) -> Term {
        Term(Arc::new(TermNode {
            kind: TermKind::Const(name.into()),
            ty,
        }))
    }

    /// `fun arg`, provided `fun : σ -> τ` and `arg : σ`.
    pub fn app(fun: Term, arg: Term) -> Result<Term> {
        let ty = match fun.ty() {
            SimpleType::Arrow(d, c) if **d == *arg.ty() => (**c).clone(),
            other => {
                return Err(Error::IllTyped {
                    fun: fun.to_string(),
                    fun_ty: other.clone(),
                    arg_ty: arg.ty().clone(),
                })
            }
        };
        Ok(Term(Arc::new(TermNode {
            kind: TermKind::App(fun, arg),
            ty,
        })))
    }

    pub fn ty(&self) -> &SimpleType {
        &self.0.ty
    }

    pub fn kind(&self) -> &TermKind {
        &self.0.kind
    }

    pub fn const_name(&self) -> Option<&str> {
        match &self.0.kind {
            TermKind::Const(n) => Some(n),
            TermKind::App(..) => None,
        }
    }

    pub fn is_const(&self) -> bool {
        self.const_name().is_some()
    }

    pub fn as_app(&self) -> Option<(&Term, &Term)> {
        match &self.0.kind {
            TermKind::App(f, a) => Some((f, a)),
            TermKind::Const(_) => None,
        }
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        match &self.0.kind {
            TermKind::Const(_) => 1,
            TermKind::App(f, a) => 1 + f.size() + a.size(),
        }
    }

    /// Nesting depth of applications; constants have depth 0.
    pub fn depth(&self) -> usize {
        match &self.0.kind {
            TermKind::Const(_) => 0,
            TermKind::App(f, a) => 1 + f.depth().max(a.depth()),
        }
    }

    /// All subterms including `self`, post-order, deduplicated.
    pub fn subterms(&self) -> Vec<Term> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        self.collect_subterms(&mut seen, &mut out);
        out
    }

    pub(crate) fn collect_subterms(&self, seen: &mut HashSet<Term>, out: &mut Vec<Term>) {
        if seen.contains(self) {
            return;
        }
        if let TermKind::App(f, a) = &self.0.kind {
            f.collect_subterms(seen, out);
            a.collect_subterms(seen, out);
        }
        seen.insert(self.clone());
        out.push(self.clone());
    }

    pub fn constants(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.collect_consts(&mut out);
        out
    }

    fn collect_consts<'a>(&'a self, out: &mut Vec<&'a str>) {
        match &self.0.kind {
            TermKind::Const(n) => {
                if !out.contains(&n.as_str()) {
                    out.push(n);
                }
            }
            TermKind::App(f, a) => {
                f.collect_consts(out);
                a.collect_consts(out);
            }
        }
    }

    pub fn mentions(&self, pred: &impl Fn(&str) -> bool) -> bool {
        match &self.0.kind {
            TermKind::Const(n) => pred(n),
            TermKind::App(f, a) => f.mentions(pred) || a.mentions(pred),
        }
    }

    /// Replaces constants by terms of the same type.
    pub fn substitute(&self, sub: &impl Fn(&str) -> Option<Term>) -> Term {
        match &self.0.kind {
            TermKind::Const(n) => match sub(n) {
                Some(t) => {
                    debug_assert_eq!(t.ty(), self.ty());
                    t
                }
                None => self.clone(),
            },
            TermKind::App(f, a) => {
                Term::app(f.substitute(sub), a.substitute(sub)).expect("type-preserving substitution")
            }
        }
    }
}

impl fmt::Display for Term {
    /// Application is left-associative; only application arguments get
    /// parentheses.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0.kind {
            TermKind::Const(n) => f.write_str(n),
            TermKind::App(fun, arg) => {
                write!(f, "{fun} ")?;
                if arg.is_const() {
                    write!(f, "{arg}")
                } else {
                    write!(f, "({arg})")
                }
            }
        }
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "`{self}`")
    }
}

/// Recomputes the type of `t` from the signature, checking every constant and
/// application along the way.
pub fn type_of(t: &Term, sig: &Signature) -> Result<SimpleType> {
    match t.kind() {
        TermKind::Const(n) => {
            let ty = sig.const_type(n).ok_or_else(|| Error::UndeclaredConstant(n.clone()))?;
            if ty != t.ty() {
                return Err(Error::TypeMismatch(ty.clone(), t.ty().clone()));
            }
            Ok(ty.clone())
        }
        TermKind::App(fun, arg) => {
            let fty = type_of(fun, sig)?;
            let aty = type_of(arg, sig)?;
            match &fty {
                SimpleType::Arrow(d, c) if **d == aty => Ok((**c).clone()),
                _ => Err(Error::IllTyped {
                    fun: fun.to_string(),
                    fun_ty: fty,
                    arg_ty: aty,
                }),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signature::SignatureBuilder;

    fn sig() -> Signature {
        let b = SimpleType::base("b");
        let t = SimpleType::base("t");
        let bt = SimpleType::arrow(b.clone(), t.clone());
        SignatureBuilder::new()
            .base("b")
            .base("t")
            .constant("a", b.clone(), false, false)
            .constant("bb", b, false, false)
            .constant("f", bt.clone(), true, false)
            .constant("phi", SimpleType::arrow(t, bt), false, true)
            .build()
            .unwrap()
    }

    fn c(s: &Signature, n: &str) -> Term {
        s.const_term(n).unwrap()
    }

    #[test]
    fn application_types() {
        let s = sig();
        let fa = Term::app(c(&s, "f"), c(&s, "a")).unwrap();
        assert_eq!(type_of(&fa, &s).unwrap(), SimpleType::base("t"));
        let phifa = Term::app(c(&s, "phi"), fa.clone()).unwrap();
        assert_eq!(
            type_of(&phifa, &s).unwrap(),
            SimpleType::arrow(SimpleType::base("b"), SimpleType::base("t"))
        );
    }

    #[test]
    fn base_type_is_not_applicable() {
        let s = sig();
        assert!(Term::app(c(&s, "a"), c(&s, "a")).is_err());
    }

    #[test]
    fn type_of_rejects_undeclared_constant() {
        let s = sig();
        let bogus = Term::constant("zz", SimpleType::base("b"));
        assert_eq!(type_of(&bogus, &s), Err(Error::UndeclaredConstant("zz".into())));
    }

    #[test]
    fn subterms_post_order() {
        let s = sig();
        let a = c(&s, "a");
        assert_eq!(a.subterms(), vec![a.clone()]);
        let fa = Term::app(c(&s, "f"), a.clone()).unwrap();
        assert_eq!(fa.subterms(), vec![c(&s, "f"), a.clone(), fa.clone()]);
        let phifa = Term::app(c(&s, "phi"), fa.clone()).unwrap();
        let whole = Term::app(phifa.clone(), c(&s, "bb")).unwrap();
        assert_eq!(
            whole.subterms(),
            vec![c(&s, "phi"), c(&s, "f"), a, fa, phifa, c(&s, "bb"), whole.clone()]
        );
    }

    #[test]
    fn display_uses_minimal_parentheses() {
        let s = sig();
        let fa = Term::app(c(&s, "f"), c(&s, "a")).unwrap();
        let whole = Term::app(Term::app(c(&s, "phi"), fa).unwrap(), c(&s, "bb")).unwrap();
        assert_eq!(whole.to_string(), "phi (f a) bb");
        assert_eq!(c(&s, "a").to_string(), "a");
    }
}
