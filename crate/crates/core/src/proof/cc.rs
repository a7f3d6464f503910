//! Congruence closure for theories whose axioms are all identities.

use std::collections::HashMap;

use petgraph::unionfind::UnionFind;

use super::universe::TermUniverse;
use crate::error::{Error, Result};
use crate::term::Term;
use crate::theory::{Assertion, Theory};

/// A partition of a universe; each id maps to the least id of its class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    rep: Vec<usize>,
}

impl Partition {
    pub fn rep(&self, id: usize) -> usize {
        self.rep[id]
    }

    pub fn same(&self, a: usize, b: usize) -> bool {
        self.rep[a] == self.rep[b]
    }

    pub fn len(&self) -> usize {
        self.rep.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rep.is_empty()
    }

    /// Classes in order of their least member.
    pub fn classes(&self) -> Vec<Vec<usize>> {
        let mut by_rep: Vec<Vec<usize>> = vec![Vec::new(); self.rep.len()];
        for (i, &r) in self.rep.iter().enumerate() {
            by_rep[r].push(i);
        }
        by_rep.into_iter().filter(|c| !c.is_empty()).collect()
    }
}

/// The least congruence on `u` containing the axiom pairs that lie in `u`.
pub fn congruence_closure(thy: &Theory, u: &TermUniverse) -> Result<Partition> {
    let n = u.len();
    let mut uf = UnionFind::<usize>::new(n);
    for ax in &thy.axioms {
        match ax {
            Assertion::Eq(l, r) => {
                if let (Some(a), Some(b)) = (u.id(l), u.id(r)) {
                    uf.union(a, b);
                }
            }
            other => {
                return Err(Error::InvalidTheory(format!(
                    "congruence closure needs identity axioms only, found `{other}`"
                )))
            }
        }
    }
    let apps: Vec<(usize, usize, usize)> = u
        .terms()
        .iter()
        .enumerate()
        .filter_map(|(id, t)| {
            let (f, a) = t.as_app()?;
            Some((id, u.id(f)?, u.id(a)?))
        })
        .collect();
    loop {
        let mut changed = false;
        let mut table: HashMap<(usize, usize), usize> = HashMap::new();
        for &(id, f, a) in &apps {
            let key = (uf.find(f), uf.find(a));
            match table.get(&key) {
                Some(&other) => changed |= uf.union(id, other),
                None => {
                    table.insert(key, id);
                }
            }
        }
        if !changed {
            break;
        }
    }
    let mut least: HashMap<usize, usize> = HashMap::new();
    let rep = (0..n).map(|i| *least.entry(uf.find(i)).or_insert(i)).collect();
    Ok(Partition { rep })
}

/// Whether `t = u` follows from the identity axioms of `thy`, decided over
/// the subterm closure of the axioms and both terms.
pub fn decide_eq(thy: &Theory, t: &Term, u: &Term) -> Result<bool> {
    if t.ty() != u.ty() {
        return Err(Error::TypeMismatch(t.ty().clone(), u.ty().clone()));
    }
    let seeds = thy.axioms.iter().flat_map(|a| a.terms()).chain([t, u]);
    let univ = TermUniverse::from_seeds(seeds, usize::MAX);
    let part = congruence_closure(thy, &univ)?;
    Ok(part.same(univ.id(t).expect("seeded"), univ.id(u).expect("seeded")))
}
