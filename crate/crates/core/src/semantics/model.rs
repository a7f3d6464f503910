use std::collections::BTreeMap;
use std::sync::Arc;

use super::space::FullStructure;
use crate::error::{Error, Result};
use crate::signature::Signature;
use crate::term::{Term, TermKind};
use crate::theory::{Assertion, Polarity, Theory};
use crate::types::SimpleType;

/// How `t = u` is read in a model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum EqMode {
    /// Same element (same table at arrow types).
    #[default]
    Identity,
    /// `t <= u` and `u <= t`.
    OrderBoth,
}

/// An interpretation of constants in a full structure: each constant gets
/// an element index of the space at its type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Model {
    pub structure: Arc<FullStructure>,
    pub interp: BTreeMap<String, usize>,
    pub types: BTreeMap<String, SimpleType>,
}

impl Model {
    pub fn new(structure: Arc<FullStructure>) -> Self {
        Model {
            structure,
            interp: BTreeMap::new(),
            types: BTreeMap::new(),
        }
    }

    /// Sets `name : ty` to element `e`.
    pub fn set(&mut self, name: &str, ty: SimpleType, e: usize) {
        self.interp.insert(name.to_string(), e);
        self.types.insert(name.to_string(), ty);
    }

    /// Sets `name` to element `e` at its type in `sig`.
    pub fn with(mut self, sig: &Signature, name: &str, e: usize) -> Result<Self> {
        let ty = sig
            .const_type(name)
            .ok_or_else(|| Error::UndeclaredConstant(name.to_string()))?
            .clone();
        self.set(name, ty, e);
        Ok(self)
    }

    pub fn get(&self, name: &str) -> Option<usize> {
        self.interp.get(name).copied()
    }

    pub fn eval(&self, t: &Term) -> Result<usize> {
        match t.kind() {
            TermKind::Const(name) => self.get(name).ok_or_else(|| Error::UndeclaredConstant(name.clone())),
            TermKind::App(f, a) => {
                let sp = self.structure.space(f.ty())?;
                Ok(sp.apply(self.eval(f)?, self.eval(a)?))
            }
        }
    }

    pub fn satisfies(&self, a: &Assertion) -> Result<bool> {
        self.satisfies_with(a, EqMode::default())
    }

    pub fn satisfies_with(&self, a: &Assertion, mode: EqMode) -> Result<bool> {
        Ok(match a {
            Assertion::Leq(l, r) => {
                let sp = self.structure.space(l.ty())?;
                sp.leq(self.eval(l)?, self.eval(r)?)
            }
            Assertion::Eq(l, r) => {
                let (x, y) = (self.eval(l)?, self.eval(r)?);
                match mode {
                    EqMode::Identity => x == y,
                    EqMode::OrderBoth => {
                        let sp = self.structure.space(l.ty())?;
                        sp.leq(x, y) && sp.leq(y, x)
                    }
                }
            }
            Assertion::Pol(f, p) => self.classify(f)?.contains(p),
        })
    }

    /// The first reason this is not a model of `thy`, if any.
    pub fn violation(&self, thy: &Theory) -> Option<String> {
        self.violation_with(thy, EqMode::default())
    }

    pub fn violation_with(&self, thy: &Theory, mode: EqMode) -> Option<String> {
        let sig = &thy.signature;
        for (ty, fam) in sig.families() {
            let sp = match self.structure.space(ty) {
                Ok(sp) => sp,
                Err(e) => return Some(e.to_string()),
            };
            let mut vals = Vec::with_capacity(fam.len());
            for name in fam.base.elements() {
                match self.get(name) {
                    Some(_) if self.types.get(name) != Some(ty) => {
                        return Some(format!("`{name}` is interpreted at the wrong type"))
                    }
                    Some(e) if e < sp.len() => vals.push(e),
                    Some(e) => {
                        return Some(format!(
                            "`{name}` is interpreted by {e}, outside the {} elements of {ty}",
                            sp.len()
                        ))
                    }
                    None => return Some(format!("`{name}` is not interpreted")),
                }
            }
            for (i, j) in fam.base.strict_pairs() {
                if !sp.leq(vals[i], vals[j]) {
                    return Some(format!(
                        "order {} <= {} is not preserved",
                        fam.base.name(i),
                        fam.base.name(j)
                    ));
                }
            }
            for (i, name) in fam.base.elements().iter().enumerate() {
                if fam.is_plus(i) && !sp.is_monotone(vals[i]) {
                    return Some(format!("`{name}` is tagged + but not monotone"));
                }
                if fam.is_minus(i) && !sp.is_antitone(vals[i]) {
                    return Some(format!("`{name}` is tagged - but not antitone"));
                }
            }
        }
        for (k, ax) in thy.axioms.iter().enumerate() {
            match self.satisfies_with(ax, mode) {
                Ok(true) => {}
                Ok(false) => return Some(format!("axiom {k} fails: {ax}")),
                Err(e) => return Some(format!("axiom {k}: {e}")),
            }
        }
        None
    }

    pub fn is_model(&self, thy: &Theory) -> bool {
        self.violation(thy).is_none()
    }

    /// Which of `+` / `-` the interpretation of `f` satisfies. Constants of
    /// base type satisfy neither.
    pub fn classify(&self, f: &str) -> Result<Vec<Polarity>> {
        let e = self.get(f).ok_or_else(|| Error::UndeclaredConstant(f.to_string()))?;
        let ty = &self.types[f];
        if !ty.is_arrow() {
            return Ok(Vec::new());
        }
        let sp = self.structure.space(ty)?;
        let mut out = Vec::new();
        if sp.is_monotone(e) {
            out.push(Polarity::Plus);
        }
        if sp.is_antitone(e) {
            out.push(Polarity::Minus);
        }
        Ok(out)
    }

    /// Keeps only the constants accepted by `keep`.
    pub fn restrict(&self, keep: impl Fn(&str) -> bool) -> Model {
        let mut out = Model::new(self.structure.clone());
        for (k, &v) in &self.interp {
            if keep(k) {
                out.set(k, self.types[k].clone(), v);
            }
        }
        out
    }

    /// `name = value` lines using readable element names.
    pub fn describe(&self) -> Vec<String> {
        self.interp
            .iter()
            .map(|(k, &v)| {
                let shown = self
                    .structure
                    .space(&self.types[k])
                    .map(|sp| sp.describe(v))
                    .unwrap_or_else(|_| v.to_string());
                format!("{k} = {shown}")
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_problem;
    use crate::preorder::{closure_rt, FinPreorder};

    /// a < c > b, the 2-chain, f = [1 0 0] antitone, g = [1 0 1] monotone.
    fn part3() -> (Theory, Model) {
        let src = "base p { elems a b c; } base q { }
            const f : p -> q [-]; const g : p -> q [+]; order f <= g;
            axiom a <= c; axiom b <= c;";
        let thy = parse_problem(src).unwrap().theory;
        let p = closure_rt(&["a", "b", "c"], &[("a", "c"), ("b", "c")]).unwrap();
        let s = Arc::new(FullStructure::new(BTreeMap::from([
            ("p".to_string(), p),
            ("q".to_string(), FinPreorder::chain(2)),
        ])));
        let pq = s
            .space(&SimpleType::arrow(SimpleType::base("p"), SimpleType::base("q")))
            .unwrap();
        let f = pq.from_table(&[1, 0, 0]).unwrap();
        let g = pq.from_table(&[1, 0, 1]).unwrap();
        let m = Model::new(s)
            .with(&thy.signature, "a", 0)
            .and_then(|m| m.with(&thy.signature, "b", 1))
            .and_then(|m| m.with(&thy.signature, "c", 2))
            .and_then(|m| m.with(&thy.signature, "f", f))
            .and_then(|m| m.with(&thy.signature, "g", g))
            .unwrap();
        (thy, m)
    }

    fn assertion(thy: &Theory, s: &str) -> Assertion {
        let src = format!("{} goal {s};", crate::parser::render_problem(thy, &[]));
        parse_problem(&src).unwrap().goals.remove(0)
    }

    #[test]
    fn part3_model() {
        let (thy, m) = part3();
        assert!(m.is_model(&thy), "{:?}", m.violation(&thy));
        let fa = assertion(&thy, "f a <= g b");
        let (l, r) = match &fa {
            Assertion::Leq(l, r) => (l, r),
            _ => unreachable!(),
        };
        assert_eq!(m.eval(l).unwrap(), 1);
        assert_eq!(m.eval(r).unwrap(), 0);
        assert!(!m.satisfies(&fa).unwrap());
        assert!(m.satisfies(&assertion(&thy, "f <= g")).unwrap());
        assert!(m.satisfies(&assertion(&thy, "f a <= f a")).unwrap());
        assert!(!m.satisfies(&Assertion::Pol("f".into(), Polarity::Plus)).unwrap());
        assert!(m.satisfies(&Assertion::Pol("f".into(), Polarity::Minus)).unwrap());
        assert_eq!(m.classify("g").unwrap(), vec![Polarity::Plus]);
    }

    #[test]
    fn wrong_tag_is_not_a_model() {
        let (_, m) = part3();
        let src = "base p { elems a b c; } base q { }
            const f : p -> q [+]; const g : p -> q [+]; order f <= g;";
        let thy = parse_problem(src).unwrap().theory;
        assert!(m.violation(&thy).unwrap().contains("not monotone"));
        let free = parse_problem("base p { elems a b c; } base q { } const f : p -> q; const g : p -> q;")
            .unwrap()
            .theory;
        assert!(m.is_model(&free));
    }

    #[test]
    fn eq_modes() {
        let s = Arc::new(FullStructure::new(BTreeMap::from([(
            "b".to_string(),
            closure_rt(&["x", "y"], &[("x", "y"), ("y", "x")]).unwrap(),
        )])));
        let thy = parse_problem("base b { elems u v; }").unwrap().theory;
        let m = Model::new(s)
            .with(&thy.signature, "u", 0)
            .unwrap()
            .with(&thy.signature, "v", 1)
            .unwrap();
        let eq = assertion(&thy, "u = v");
        assert!(!m.satisfies(&eq).unwrap());
        assert!(m.satisfies_with(&eq, EqMode::OrderBoth).unwrap());
    }
}
