//! Finite preorders stored as dense boolean matrices.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

/// A finite preorder over a sequence of named elements.
///
/// `leq[i * n + j]` holds iff element `i` is below element `j`. Elements may
/// be order-equivalent without being equal.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FinPreorder {
    elements: Vec<String>,
    leq: Vec<bool>,
}

impl FinPreorder {
    /// Builds a preorder from a raw matrix without checking the axioms.
    /// Use [`FinPreorder::is_reflexive`] / [`FinPreorder::is_transitive`]
    /// (or `validate_signature`) to audit the result.
    pub fn from_matrix(elements: Vec<String>, leq: Vec<bool>) -> Self {
        assert_eq!(leq.len(), elements.len() * elements.len(), "matrix shape");
        FinPreorder { elements, leq }
    }

    /// The flat (discrete) preorder: only `x <= x`.
    pub fn discrete(elements: Vec<String>) -> Self {
        let n = elements.len();
        let mut leq = vec![false; n * n];
        for i in 0..n {
            leq[i * n + i] = true;
        }
        FinPreorder { elements, leq }
    }

    /// The chain `e0 < e1 < ... < e(n-1)`.
    pub fn chain(n: usize) -> Self {
        let elements = (0..n).map(|i| format!("e{i}")).collect();
        let mut leq = vec![false; n * n];
        for i in 0..n {
            for j in i..n {
                leq[i * n + j] = true;
            }
        }
        FinPreorder { elements, leq }
    }

    pub fn empty() -> Self {
        FinPreorder {
            elements: Vec::new(),
            leq: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn name(&self, i: usize) -> &str {
        &self.elements[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.elements.iter().position(|e| e == name)
    }

    #[inline]
    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.leq[i * self.elements.len() + j]
    }

    /// `i <= j` and `j <= i`.
    pub fn equiv(&self, i: usize, j: usize) -> bool {
        self.leq(i, j) && self.leq(j, i)
    }

    pub fn matrix(&self) -> &[bool] {
        &self.leq
    }

    /// All pairs `(i, j)` with `i <= j` and `i != j`.
    pub fn strict_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i != j && self.leq(i, j) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn is_reflexive(&self) -> bool {
        (0..self.len()).all(|i| self.leq(i, i))
    }

    pub fn is_transitive(&self) -> bool {
        self.transitivity_violation().is_none()
    }

    /// First `(i, j, k)` with `i <= j <= k` but not `i <= k`.
    pub fn transitivity_violation(&self) -> Option<(usize, usize, usize)> {
        let n = self.len();
        for i in 0..n {
            for j in 0..n {
                if !self.leq(i, j) {
                    continue;
                }
                for k in 0..n {
                    if self.leq(j, k) && !self.leq(i, k) {
                        return Some((i, j, k));
                    }
                }
            }
        }
        None
    }

    pub fn is_preorder(&self) -> bool {
        self.is_reflexive() && self.is_transitive()
    }

    /// Adds a fresh element related only to itself.
    pub fn with_isolated(&self, name: impl Into<String>) -> FinPreorder {
        let n = self.len();
        let mut elements = self.elements.clone();
        elements.push(name.into());
        let mut leq = vec![false; (n + 1) * (n + 1)];
        for i in 0..n {
            for j in 0..n {
                leq[i * (n + 1) + j] = self.leq(i, j);
            }
        }
        leq[n * (n + 1) + n] = true;
        FinPreorder { elements, leq }
    }

    /// Every preorder on `n` elements named `e0..`, in lexicographic order of
    /// the row-major matrix (with `false < true`).
    pub fn enumerate_all(n: usize) -> Vec<FinPreorder> {
        let names: Vec<String> = (0..n).map(|i| format!("e{i}")).collect();
        let off: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .collect();
        let bits = off.len();
        assert!(bits < 31, "too many preorders to enumerate");
        let mut out = Vec::new();
        for code in 0u32..(1u32 << bits) {
            let mut leq = vec![false; n * n];
            for i in 0..n {
                leq[i * n + i] = true;
            }
            // The first off-diagonal cell is the most significant bit.
            for (b, &(i, j)) in off.iter().enumerate() {
                if code & (1 << (bits - 1 - b)) != 0 {
                    leq[i * n + j] = true;
                }
            }
            let p = FinPreorder {
                elements: names.clone(),
                leq,
            };
            if p.is_transitive() {
                out.push(p);
            }
        }
        out
    }
}

impl fmt::Debug for FinPreorder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pairs: Vec<String> = self
            .strict_pairs()
            .into_iter()
            .map(|(i, j)| format!("{}<={}", self.elements[i], self.elements[j]))
            .collect();
        write!(f, "FinPreorder({:?}; {})", self.elements, pairs.join(", "))
    }
}

/// Least reflexive-transitive relation over `carrier` containing `rel`.
pub fn closure_rt<S: AsRef<str>>(carrier: &[S], rel: &[(S, S)]) -> Result<FinPreorder> {
    let elements: Vec<String> = carrier.iter().map(|s| s.as_ref().to_string()).collect();
    let idx = |name: &str| {
        elements
            .iter()
            .position(|e| e == name)
            .ok_or_else(|| Error::UnknownElement(name.to_string()))
    };
    let mut pairs = Vec::with_capacity(rel.len());
    for (a, b) in rel {
        pairs.push((idx(a.as_ref())?, idx(b.as_ref())?));
    }
    Ok(closure_of_indices(elements, &pairs))
}

/// Reflexive-transitive closure over element indices (Warshall).
pub fn closure_of_indices(elements: Vec<String>, pairs: &[(usize, usize)]) -> FinPreorder {
    let n = elements.len();
    let mut leq = vec![false; n * n];
    for i in 0..n {
        leq[i * n + i] = true;
    }
    for &(a, b) in pairs {
        leq[a * n + b] = true;
    }
    for k in 0..n {
        for i in 0..n {
            if !leq[i * n + k] {
                continue;
            }
            for j in 0..n {
                if leq[k * n + j] {
                    leq[i * n + j] = true;
                }
            }
        }
    }
    FinPreorder { elements, leq }
}

/// A preorder with two designated subsets: `plus` (intended monotone) and
/// `minus` (intended antitone). The subsets may overlap or be empty.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PolarizedFinPreorder {
    pub base: FinPreorder,
    pub plus: BTreeSet<usize>,
    pub minus: BTreeSet<usize>,
}

impl PolarizedFinPreorder {
    pub fn untagged(base: FinPreorder) -> Self {
        PolarizedFinPreorder {
            base,
            plus: BTreeSet::new(),
            minus: BTreeSet::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.base.len()
    }

    pub fn is_empty(&self) -> bool {
        self.base.is_empty()
    }

    pub fn is_plus(&self, i: usize) -> bool {
        self.plus.contains(&i)
    }

    pub fn is_minus(&self, i: usize) -> bool {
        self.minus.contains(&i)
    }

    pub fn is_tagged(&self, i: usize) -> bool {
        self.is_plus(i) || self.is_minus(i)
    }

    /// `f <=^{+-} g`: `f ≤ g` with opposite tags (`f⁺ ≤ g⁻` or `f⁻ ≤ g⁺`).
    pub fn mixed_leq(&self, f: usize, g: usize) -> bool {
        self.base.leq(f, g) && ((self.is_plus(f) && self.is_minus(g)) || (self.is_minus(f) && self.is_plus(g)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closure_of_empty_relation_is_identity() {
        let p = closure_rt(&["a", "b", "c"], &[]).unwrap();
        assert_eq!(p, FinPreorder::discrete(vec!["a".into(), "b".into(), "c".into()]));
    }

    #[test]
    fn closure_of_single_pair() {
        let p = closure_rt(&["f", "g"], &[("f", "g")]).unwrap();
        assert!(p.leq(0, 1) && p.leq(0, 0) && p.leq(1, 1));
        assert!(!p.leq(1, 0));
    }

    #[test]
    fn closure_forces_transitivity() {
        let p = closure_rt(&["a", "b", "c"], &[("a", "b"), ("b", "c")]).unwrap();
        assert!(p.leq(0, 2));
        assert!(!p.leq(2, 0));
    }

    #[test]
    fn closure_rejects_unknown_element() {
        let err = closure_rt(&["a"], &[("a", "z")]).unwrap_err();
        assert_eq!(err, Error::UnknownElement("z".into()));
    }

    #[test]
    fn preorder_counts_match_known_sequence() {
        // Labeled preorders on n points: 1, 1, 4, 29, 355.
        let counts: Vec<usize> = (0..5).map(|n| FinPreorder::enumerate_all(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 4, 29, 355]);
    }
}
