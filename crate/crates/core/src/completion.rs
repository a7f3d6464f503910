//! The completion `P*` of a finite preorder: down-closed sets paired with
//! witnesses, plus a bottom sentinel, with an order embedding of `P` and a
//! deterministic join.

use std::collections::HashMap;
use std::fmt::{self, Write};

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::preorder::FinPreorder;
use crate::semantics::{is_complete, is_lub, lub, COMPLETE_CAP};

pub const COMPLETION_CAP: usize = 10;

/// Anything that can name a least upper bound for a set of elements.
pub trait JoinOracle {
    fn order(&self) -> &FinPreorder;
    fn join(&self, s: &[usize]) -> usize;
}

/// Down-closed subsets of `p` as bitmasks, in increasing mask order.
pub fn down_closed_sets(p: &FinPreorder) -> Result<Vec<u32>> {
    let n = p.len();
    if n > COMPLETION_CAP {
        return Err(Error::CarrierTooLarge {
            size: n,
            cap: COMPLETION_CAP,
        });
    }
    let below: Vec<u32> = (0..n)
        .map(|x| (0..n).filter(|&y| p.leq(y, x)).fold(0u32, |m, y| m | 1 << y))
        .collect();
    Ok((0u32..1 << n)
        .filter(|&a| (0..n).all(|x| a & (1 << x) == 0 || below[x] & !a == 0))
        .collect())
}

fn mask_names(p: &FinPreorder, a: u32) -> String {
    let names: Vec<&str> = (0..p.len()).filter(|&i| a & (1 << i) != 0).map(|i| p.name(i)).collect();
    format!("{{{}}}", names.join(","))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompletionResult {
    pub source: FinPreorder,
    /// First components, in increasing mask order.
    pub down_sets: Vec<u32>,
    /// Elements `(A, p)` at index `a * |P| + p`, then `⊥` last.
    pub star: FinPreorder,
    pub embed: Vec<usize>,
    index: HashMap<u32, usize>,
}

impl CompletionResult {
    pub fn bottom(&self) -> usize {
        self.star.len() - 1
    }

    pub fn is_bottom(&self, x: usize) -> bool {
        x == self.bottom()
    }

    /// `(A, p)` for a non-bottom element.
    pub fn pair(&self, x: usize) -> Option<(u32, usize)> {
        let n = self.source.len();
        (!self.is_bottom(x)).then(|| (self.down_sets[x / n], x % n))
    }

    pub fn element(&self, a: u32, p: usize) -> Option<usize> {
        self.index.get(&a).map(|k| k * self.source.len() + p)
    }

    /// `W` is the union of the first components of the non-`⊥` members.
    /// The result is `(W, ε(W))` with `ε` the lowest-index member, `⊥` when
    /// `s` has no non-`⊥` member, and `(∅, ε(P))` when every member is
    /// `⊥` or has an empty first component — `⊥` is not above those.
    pub fn join_iter(&self, s: impl IntoIterator<Item = usize>) -> usize {
        let mut w = 0u32;
        let mut any = false;
        for x in s {
            if let Some((a, _)) = self.pair(x) {
                w |= a;
                any = true;
            }
        }
        if !any {
            return self.bottom();
        }
        let eps = if w == 0 { 0 } else { w.trailing_zeros() as usize };
        self.element(w, eps)
            .expect("unions of down-closed sets are down-closed")
    }

    pub fn join_set(&self, s: &FixedBitSet) -> usize {
        self.join_iter(s.ones())
    }

    pub fn name(&self, x: usize) -> String {
        self.star.name(x).to_string()
    }
}

impl JoinOracle for CompletionResult {
    fn order(&self) -> &FinPreorder {
        &self.star
    }

    fn join(&self, s: &[usize]) -> usize {
        self.join_iter(s.iter().copied())
    }
}

/// A preorder already known to be complete; joins are the first least
/// upper bound found by search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompleteOrder(FinPreorder);

impl CompleteOrder {
    /// Fails unless `p` passes [`is_complete`].
    pub fn new(p: FinPreorder) -> Result<Self> {
        if is_complete(&p)? {
            Ok(CompleteOrder(p))
        } else {
            Err(Error::Hypothesis("preorder is not complete".into()))
        }
    }
}

impl JoinOracle for CompleteOrder {
    fn order(&self) -> &FinPreorder {
        &self.0
    }

    fn join(&self, s: &[usize]) -> usize {
        lub(&self.0, s).expect("complete preorders have all joins")
    }
}

pub fn complete_preorder(p: &FinPreorder) -> Result<CompletionResult> {
    let n = p.len();
    let down_sets = down_closed_sets(p)?;
    let mut names = Vec::with_capacity(down_sets.len() * n + 1);
    for &a in &down_sets {
        for q in 0..n {
            names.push(format!("({},{})", mask_names(p, a), p.name(q)));
        }
    }
    names.push("⊥".to_string());
    let size = names.len();
    let bot = size - 1;
    let mut leq = vec![false; size * size];
    for x in 0..size {
        for y in 0..size {
            leq[x * size + y] = if x == bot {
                true
            } else if y == bot {
                false
            } else {
                let (a, b) = (down_sets[x / n], down_sets[y / n]);
                a & !b == 0
            };
        }
    }
    let index: HashMap<u32, usize> = down_sets.iter().enumerate().map(|(k, &a)| (a, k)).collect();
    let embed = (0..n)
        .map(|q| {
            let below = (0..n).filter(|&r| p.leq(r, q)).fold(0u32, |m, r| m | 1 << r);
            index[&below] * n + q
        })
        .collect();
    Ok(CompletionResult {
        source: p.clone(),
        down_sets,
        star: FinPreorder::from_matrix(names, leq),
        embed,
        index,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EmbeddingFinding {
    NotInjective(usize, usize),
    NotPreserved(usize, usize),
    NotReflected(usize, usize),
    NotComplete,
    NotPreorder,
    /// `join` returned something that is not a least upper bound.
    BadJoin(Vec<usize>),
}

impl fmt::Display for EmbeddingFinding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EmbeddingFinding::NotInjective(p, q) => write!(f, "embed identifies {p} and {q}"),
            EmbeddingFinding::NotPreserved(p, q) => write!(f, "{p} <= {q} is not preserved"),
            EmbeddingFinding::NotReflected(p, q) => write!(f, "embed({p}) <= embed({q}) but not {p} <= {q}"),
            EmbeddingFinding::NotComplete => write!(f, "star is not complete"),
            EmbeddingFinding::NotPreorder => write!(f, "star is not a preorder"),
            EmbeddingFinding::BadJoin(s) => write!(f, "join of {s:?} is not a least upper bound"),
        }
    }
}

/// Every subset has a least upper bound. Subsets are enumerated up to the
/// `is_complete` cap; beyond it, a least element plus binary joins is
/// checked instead (equivalent for finite preorders).
pub fn is_complete_finite(p: &FinPreorder) -> bool {
    if p.len() <= COMPLETE_CAP {
        return is_complete(p).expect("within cap");
    }
    let n = p.len();
    lub(p, &[]).is_some() && (0..n).all(|x| (x + 1..n).all(|y| lub(p, &[x, y]).is_some()))
}

/// Checks injectivity, preservation and reflection of `cr.embed`, and that
/// the star is a complete preorder.
pub fn verify_embedding(p: &FinPreorder, cr: &CompletionResult) -> Vec<EmbeddingFinding> {
    let mut out = Vec::new();
    let n = p.len();
    for x in 0..n {
        for y in 0..n {
            let (ex, ey) = (cr.embed[x], cr.embed[y]);
            if x < y && ex == ey {
                out.push(EmbeddingFinding::NotInjective(x, y));
            }
            let image = cr.star.leq(ex, ey);
            if p.leq(x, y) && !image {
                out.push(EmbeddingFinding::NotPreserved(x, y));
            }
            if image && !p.leq(x, y) {
                out.push(EmbeddingFinding::NotReflected(x, y));
            }
        }
    }
    if !cr.star.is_preorder() {
        out.push(EmbeddingFinding::NotPreorder);
    }
    if !is_complete_finite(&cr.star) {
        out.push(EmbeddingFinding::NotComplete);
    }
    out
}

/// `None` if `oracle.join(s)` is a least upper bound of `s`.
pub fn check_join(oracle: &dyn JoinOracle, s: &[usize]) -> Option<EmbeddingFinding> {
    (!is_lub(oracle.order(), s, oracle.join(s))).then(|| EmbeddingFinding::BadJoin(s.to_vec()))
}

/// `(⋁S)(x) = ⋁{f(x) : f ∈ S}` over tables of a common domain size.
pub fn pointwise_join(dom_size: usize, tables: &[Vec<usize>], cod: &dyn JoinOracle) -> Vec<usize> {
    (0..dom_size)
        .map(|x| {
            let col: Vec<usize> = tables.iter().map(|t| t[x]).collect();
            cod.join(&col)
        })
        .collect()
}

/// Element list, order matrix and embedding, for display.
pub fn render_completion(cr: &CompletionResult) -> String {
    let mut out = String::new();
    let star = &cr.star;
    writeln!(out, "star ({} elements):", star.len()).unwrap();
    for i in 0..star.len() {
        writeln!(out, "  {i}: {}", star.name(i)).unwrap();
    }
    writeln!(out, "order:").unwrap();
    for i in 0..star.len() {
        let row: String = (0..star.len())
            .map(|j| if star.leq(i, j) { '1' } else { '0' })
            .collect();
        writeln!(out, "  {row}").unwrap();
    }
    writeln!(out, "embed:").unwrap();
    for (q, &e) in cr.embed.iter().enumerate() {
        writeln!(out, "  {} -> {}", cr.source.name(q), star.name(e)).unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::preorder::closure_rt;

    fn brute_down_sets(p: &FinPreorder) -> Vec<u32> {
        let n = p.len();
        (0u32..1 << n)
            .filter(|&a| (0..n).all(|x| (0..n).all(|y| !(a & (1 << x) != 0 && p.leq(y, x)) || a & (1 << y) != 0)))
            .collect()
    }

    #[test]
    fn down_sets() {
        assert_eq!(
            down_closed_sets(&FinPreorder::chain(2)).unwrap(),
            vec![0b00, 0b01, 0b11]
        );
        let flat = FinPreorder::discrete(vec!["x".into(), "y".into()]);
        assert_eq!(down_closed_sets(&flat).unwrap().len(), 4);
        let v = closure_rt(&["a", "b", "c"], &[("a", "c"), ("b", "c")]).unwrap();
        assert_eq!(down_closed_sets(&v).unwrap(), vec![0, 1, 2, 3, 7]);
        for n in 0..=4 {
            for p in FinPreorder::enumerate_all(n) {
                assert_eq!(down_closed_sets(&p).unwrap(), brute_down_sets(&p));
            }
        }
        assert!(down_closed_sets(&FinPreorder::chain(11)).is_err());
    }

    #[test]
    fn small_completions() {
        let cr = complete_preorder(&FinPreorder::chain(2)).unwrap();
        assert_eq!(cr.star.len(), 7);
        assert_eq!(cr.name(cr.embed[0]), "({e0},e0)");
        assert_eq!(cr.name(cr.embed[1]), "({e0,e1},e1)");
        assert_eq!(cr.name(cr.bottom()), "⊥");
        let empty = complete_preorder(&FinPreorder::empty()).unwrap();
        assert_eq!(empty.star.len(), 1);
        let one = complete_preorder(&FinPreorder::chain(1)).unwrap();
        assert_eq!(one.star.len(), 3);
        assert_eq!(one.name(one.embed[0]), "({e0},e0)");
    }

    #[test]
    fn joins() {
        let cr = complete_preorder(&FinPreorder::chain(2)).unwrap();
        assert_eq!(cr.join(&[]), cr.bottom());
        let j = cr.join(&cr.embed);
        assert!(cr.star.equiv(j, cr.embed[1]));
        for x in 0..cr.star.len() - 1 {
            assert!(cr.star.equiv(cr.join(&[x]), x));
        }
        // (∅, p) alone: the bottom sentinel is not above it
        let e = cr.element(0, 1).unwrap();
        assert!(check_join(&cr, &[e]).is_none());
        assert!(!cr.star.leq(e, cr.bottom()));
        // top and bottom
        let all: Vec<usize> = (0..cr.star.len()).collect();
        let top = cr.join(&all);
        assert!(all.iter().all(|&x| cr.star.leq(x, top) && cr.star.leq(cr.bottom(), x)));
    }

    #[test]
    fn embeddings_are_clean_and_controls_fail() {
        for n in 0..=3 {
            for p in FinPreorder::enumerate_all(n) {
                let cr = complete_preorder(&p).unwrap();
                assert!(verify_embedding(&p, &cr).is_empty(), "{p:?}");
                for s in 0u32..1 << cr.star.len().min(10) {
                    let s: Vec<usize> = (0..cr.star.len()).filter(|&i| s & (1 << i) != 0).collect();
                    assert!(check_join(&cr, &s).is_none(), "{p:?} {s:?}");
                }
            }
        }
        // 2-cycle: equivalent elements stay distinct
        let cyc = closure_rt(&["p", "q"], &[("p", "q"), ("q", "p")]).unwrap();
        let cr = complete_preorder(&cyc).unwrap();
        assert_ne!(cr.embed[0], cr.embed[1]);
        assert!(verify_embedding(&cyc, &cr).is_empty());
        // corrupted embedding
        let p = FinPreorder::chain(2);
        let mut cr = complete_preorder(&p).unwrap();
        cr.embed.swap(0, 1);
        let f = verify_embedding(&p, &cr);
        assert!(
            f.iter().any(|x| matches!(x, EmbeddingFinding::NotReflected(..))),
            "{f:?}"
        );
        let mut cr = complete_preorder(&p).unwrap();
        cr.embed[1] = cr.embed[0];
        assert!(verify_embedding(&p, &cr).contains(&EmbeddingFinding::NotInjective(0, 1)));
    }

    #[test]
    fn pointwise_joins() {
        let dom = FinPreorder::chain(2);
        let cr = complete_preorder(&FinPreorder::chain(2)).unwrap();
        let m = cr.star.len();
        assert_eq!(pointwise_join(2, &[], &cr), vec![cr.bottom(); 2]);
        let f = vec![cr.embed[0], cr.embed[1]];
        let j = pointwise_join(2, std::slice::from_ref(&f), &cr);
        assert!((0..2).all(|x| cr.star.equiv(j[x], f[x])));
        // brute-force least upper bound over all 49 tables
        let all: Vec<Vec<usize>> = (0..m * m).map(|k| vec![k / m, k % m]).collect();
        let pw = |a: &Vec<usize>, b: &Vec<usize>| (0..2).all(|x| cr.star.leq(a[x], b[x]));
        for (a, b) in [(0, 1), (5, 12), (3, 40)] {
            let s = vec![all[a].clone(), all[b].clone()];
            let j = pointwise_join(dom.len(), &s, &cr);
            let ubs: Vec<&Vec<usize>> = all.iter().filter(|t| s.iter().all(|f| pw(f, t))).collect();
            assert!(ubs.contains(&&j));
            assert!(ubs.iter().all(|u| pw(&j, u)));
        }
    }

    #[test]
    fn complete_order_oracle() {
        assert!(CompleteOrder::new(FinPreorder::discrete(vec!["a".into(), "b".into()])).is_err());
        let c = CompleteOrder::new(FinPreorder::chain(3)).unwrap();
        assert_eq!(c.join(&[0, 2]), 2);
        assert_eq!(c.join(&[]), 0);
    }
}
