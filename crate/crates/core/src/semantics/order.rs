use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::preorder::{FinPreorder, PolarizedFinPreorder};

/// Every pair has some upper bound and some lower bound.
pub fn is_weakly_complete(p: &FinPreorder) -> bool {
    let n = p.len();
    (0..n).all(|x| {
        (x + 1..n).all(|y| {
            let upper = (0..n).any(|z| p.leq(x, z) && p.leq(y, z));
            let lower = (0..n).any(|z| p.leq(z, x) && p.leq(z, y));
            upper && lower
        })
    })
}

pub fn is_poset(p: &FinPreorder) -> bool {
    let n = p.len();
    (0..n).all(|x| (x + 1..n).all(|y| !(p.leq(x, y) && p.leq(y, x))))
}

pub fn upper_bounds(p: &FinPreorder, s: &[usize]) -> Vec<usize> {
    (0..p.len()).filter(|&z| s.iter().all(|&x| p.leq(x, z))).collect()
}

/// The first (lowest-index) least upper bound of `s`, if any.
pub fn lub(p: &FinPreorder, s: &[usize]) -> Option<usize> {
    let ub = upper_bounds(p, s);
    ub.iter().copied().find(|&z| ub.iter().all(|&w| p.leq(z, w)))
}

pub fn is_lub(p: &FinPreorder, s: &[usize], z: usize) -> bool {
    let ub = upper_bounds(p, s);
    ub.contains(&z) && ub.iter().all(|&w| p.leq(z, w))
}

pub const COMPLETE_CAP: usize = 16;

/// Every subset (including the empty one) has a least upper bound. Checked
/// by enumerating all subsets, so carriers above 16 elements are refused.
pub fn is_complete(p: &FinPreorder) -> Result<bool> {
    let n = p.len();
    if n > COMPLETE_CAP {
        return Err(Error::CarrierTooLarge {
            size: n,
            cap: COMPLETE_CAP,
        });
    }
    let mut subset = Vec::with_capacity(n);
    for mask in 0u32..(1u32 << n) {
        subset.clear();
        subset.extend((0..n).filter(|&i| mask & (1 << i) != 0));
        if lub(p, &subset).is_none() {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn is_monotone_table(p: &FinPreorder, q: &FinPreorder, table: &[usize]) -> bool {
    let n = p.len();
    (0..n).all(|x| (0..n).all(|y| !p.leq(x, y) || q.leq(table[x], table[y])))
}

pub fn is_antitone_table(p: &FinPreorder, q: &FinPreorder, table: &[usize]) -> bool {
    let n = p.len();
    (0..n).all(|x| (0..n).all(|y| !p.leq(x, y) || q.leq(table[y], table[x])))
}

/// `Q^P` as an explicit polarized preorder: all tables (named `[q0 q1 ..]`,
/// first domain element most significant), pointwise order, `plus` the
/// monotone tables and `minus` the antitone ones.
pub fn function_space(p: &FinPreorder, q: &FinPreorder, cell_budget: u64) -> Result<PolarizedFinPreorder> {
    let (np, nq) = (p.len(), q.len());
    let size = u32::try_from(np)
        .ok()
        .and_then(|e| (nq as u128).checked_pow(e))
        .unwrap_or(u128::MAX);
    // the explicit matrix is quadratic in the number of tables
    let cells = size.saturating_mul(size).max(size.saturating_mul(np as u128));
    if cells > cell_budget as u128 {
        return Err(Error::CarrierTooLarge {
            size: usize::try_from(size).unwrap_or(usize::MAX),
            cap: cell_budget as usize,
        });
    }
    let size = size as usize;
    let tables: Vec<Vec<usize>> = (0..size)
        .map(|mut f| {
            let mut t = vec![0; np];
            for x in (0..np).rev() {
                t[x] = f % nq;
                f /= nq;
            }
            t
        })
        .collect();
    let names = tables
        .iter()
        .map(|t| {
            let cells: Vec<&str> = t.iter().map(|&v| q.name(v)).collect();
            format!("[{}]", cells.join(" "))
        })
        .collect();
    let mut leq = vec![false; size * size];
    for (a, ta) in tables.iter().enumerate() {
        for (b, tb) in tables.iter().enumerate() {
            leq[a * size + b] = ta.iter().zip(tb).all(|(&x, &y)| q.leq(x, y));
        }
    }
    let plus: BTreeSet<usize> = (0..size).filter(|&f| is_monotone_table(p, q, &tables[f])).collect();
    let minus: BTreeSet<usize> = (0..size).filter(|&f| is_antitone_table(p, q, &tables[f])).collect();
    Ok(PolarizedFinPreorder {
        base: FinPreorder::from_matrix(names, leq),
        plus,
        minus,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::preorder::closure_rt;

    fn flat(n: usize) -> FinPreorder {
        FinPreorder::discrete((0..n).map(|i| format!("x{i}")).collect())
    }

    #[test]
    fn weak_completeness() {
        assert!(is_weakly_complete(&FinPreorder::chain(4)));
        assert!(!is_weakly_complete(&flat(2)));
        let v = closure_rt(&["a", "b", "c"], &[("a", "c"), ("b", "c")]).unwrap();
        assert!(!is_weakly_complete(&v));
        assert!(is_weakly_complete(&FinPreorder::empty()));
    }

    #[test]
    fn completeness() {
        assert!(is_complete(&FinPreorder::chain(2)).unwrap());
        assert!(is_complete(&FinPreorder::chain(1)).unwrap());
        assert!(!is_complete(&flat(2)).unwrap());
        assert!(!is_complete(&FinPreorder::empty()).unwrap());
        assert!(is_complete(&FinPreorder::chain(17)).is_err());
        // two equivalent tops are fine: least upper bounds are unique only up to equivalence
        let p = closure_rt(&["b", "t1", "t2"], &[("b", "t1"), ("t1", "t2"), ("t2", "t1")]).unwrap();
        assert!(is_complete(&p).unwrap());
    }

    #[test]
    fn posets() {
        assert!(is_poset(&FinPreorder::chain(2)));
        let cyc = closure_rt(&["a", "b", "c"], &[("a", "b"), ("b", "c"), ("c", "a")]).unwrap();
        assert!(!is_poset(&cyc));
    }

    #[test]
    fn complete_implies_weakly_complete() {
        for n in 0..=4 {
            for p in FinPreorder::enumerate_all(n) {
                if is_complete(&p).unwrap() {
                    assert!(is_weakly_complete(&p), "{p:?}");
                }
            }
        }
    }

    #[test]
    fn function_spaces() {
        let two = FinPreorder::chain(2);
        let fs = function_space(&two, &two, 1_000_000).unwrap();
        assert_eq!(fs.len(), 4);
        assert_eq!(fs.plus.len(), 3);
        assert_eq!(fs.minus.len(), 3);
        assert_eq!(fs.plus.intersection(&fs.minus).count(), 2);
        assert_eq!(fs.base.name(1), "[e0 e1]");
        // flat domain: everything is both
        let fs = function_space(&flat(2), &FinPreorder::chain(3), 1_000_000).unwrap();
        assert_eq!(fs.len(), 9);
        assert!(fs.plus.len() == 9 && fs.minus.len() == 9);
        // singleton codomain: the constant function, both tags
        let fs = function_space(&two, &FinPreorder::chain(1), 1_000_000).unwrap();
        assert_eq!(fs.len(), 1);
        assert!(fs.is_plus(0) && fs.is_minus(0));
        assert!(function_space(&FinPreorder::chain(5), &FinPreorder::chain(5), 1000).is_err());
    }
}
