//! Extending a polarity-respecting `p: F → M^S` along an order embedding
//! `j: S → L` into a complete `M`.

use std::collections::BTreeSet;
use std::fmt;

use rand::Rng;
use rayon::prelude::*;

use crate::completion::{complete_preorder, CompleteOrder, CompletionResult, JoinOracle};
use crate::error::{Error, Result};
use crate::preorder::{closure_of_indices, FinPreorder, PolarizedFinPreorder};
use crate::semantics::{is_antitone_table, is_monotone_table};

/// The complete codomain `M` with its join.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Codomain {
    /// The completion of a given preorder; tables range over its star.
    Completed(CompletionResult),
    /// A preorder checked to be complete.
    Complete(CompleteOrder),
}

impl Codomain {
    pub fn completed(p: &FinPreorder) -> Result<Self> {
        Ok(Codomain::Completed(complete_preorder(p)?))
    }

    pub fn complete(p: FinPreorder) -> Result<Self> {
        Ok(Codomain::Complete(CompleteOrder::new(p)?))
    }

    pub fn len(&self) -> usize {
        self.order().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl JoinOracle for Codomain {
    fn order(&self) -> &FinPreorder {
        match self {
            Codomain::Completed(c) => c.order(),
            Codomain::Complete(c) => c.order(),
        }
    }

    fn join(&self, s: &[usize]) -> usize {
        match self {
            Codomain::Completed(c) => c.join(s),
            Codomain::Complete(c) => c.join(s),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtensionInstance {
    pub f: PolarizedFinPreorder,
    pub s: FinPreorder,
    pub l: FinPreorder,
    pub m: Codomain,
    /// `j[s]` is an element of `L`.
    pub j: Vec<usize>,
    /// `p[f][s]` is an element of `M`.
    pub p: Vec<Vec<usize>>,
}

/// A pair `f ≤⁺⁻ g` with `p_f(x) ≰ p_g(y)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpecialViolation {
    pub f: usize,
    pub g: usize,
    pub x: usize,
    pub y: usize,
}

impl fmt::Display for SpecialViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "mixed pair f{} <= f{} has p(f{})(s{}) not below p(f{})(s{})",
            self.f, self.g, self.f, self.x, self.g, self.y
        )
    }
}

impl ExtensionInstance {
    /// The `j`/`p` invariants: shapes, `j` an order embedding, `p`
    /// monotone in `F` and respecting tags.
    pub fn check_hypotheses(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Hypothesis(m));
        let (ns, nl, nm) = (self.s.len(), self.l.len(), self.m.len());
        let mo = self.m.order();
        if self.j.len() != ns || self.j.iter().any(|&x| x >= nl) {
            return bad("j must map every element of S into L".into());
        }
        if self.p.len() != self.f.len() || self.p.iter().any(|t| t.len() != ns || t.iter().any(|&v| v >= nm)) {
            return bad("p must give one table S -> M per element of F".into());
        }
        for a in 0..ns {
            for b in 0..ns {
                if a != b && self.j[a] == self.j[b] {
                    return bad(format!("j is not one-to-one: s{a} and s{b} share an image"));
                }
                if self.s.leq(a, b) != self.l.leq(self.j[a], self.j[b]) {
                    return bad(format!("j does not preserve and reflect the order at (s{a}, s{b})"));
                }
            }
        }
        let fb = &self.f.base;
        for (g, h) in fb.strict_pairs() {
            if !(0..ns).all(|x| mo.leq(self.p[g][x], self.p[h][x])) {
                return bad(format!("p is not monotone: {} <= {}", fb.name(g), fb.name(h)));
            }
        }
        for g in 0..fb.len() {
            if self.f.is_plus(g) && !is_monotone_table(&self.s, mo, &self.p[g]) {
                return bad(format!("p({}) is tagged + but not monotone", fb.name(g)));
            }
            if self.f.is_minus(g) && !is_antitone_table(&self.s, mo, &self.p[g]) {
                return bad(format!("p({}) is tagged - but not antitone", fb.name(g)));
            }
        }
        Ok(())
    }

    /// The weak-completeness-like property: for `f ≤⁺⁻ g` and any `x, y`,
    /// `p_f(x) ≤ p_g(y)`.
    pub fn check_special(&self) -> std::result::Result<(), SpecialViolation> {
        let n = self.f.len();
        let ns = self.s.len();
        let mo = self.m.order();
        for f in 0..n {
            for g in 0..n {
                if !self.f.mixed_leq(f, g) {
                    continue;
                }
                for x in 0..ns {
                    for y in 0..ns {
                        if !mo.leq(self.p[f][x], self.p[g][y]) {
                            return Err(SpecialViolation { f, g, x, y });
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn preimage(&self, x: usize) -> Option<usize> {
        self.j.iter().position(|&y| y == x)
    }
}

/// The four sets feeding one value of `q_f(x)`, as sorted element lists.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AuditCell {
    pub a: Vec<usize>,
    pub b: Vec<usize>,
    pub c: Vec<usize>,
    pub d: Vec<usize>,
}

impl AuditCell {
    pub fn union(&self) -> Vec<usize> {
        let all: BTreeSet<usize> = self
            .a
            .iter()
            .chain(&self.b)
            .chain(&self.c)
            .chain(&self.d)
            .copied()
            .collect();
        all.into_iter().collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtensionResult {
    /// `q[f][x]` is an element of `M`.
    pub q: Vec<Vec<usize>>,
    /// `audit[f][x]`, computed at image points too.
    pub audit: Vec<Vec<AuditCell>>,
}

fn audit_cell(inst: &ExtensionInstance, f: usize, x: usize) -> AuditCell {
    let fp = &inst.f;
    let fb = &fp.base;
    let n = fb.len();
    let ns = inst.s.len();
    let collect = |it: &mut dyn Iterator<Item = usize>| -> Vec<usize> {
        let set: BTreeSet<usize> = it.collect();
        set.into_iter().collect()
    };
    let a = collect(&mut (0..n).filter(|&h| fp.is_plus(h) && fb.leq(h, f)).flat_map(|h| {
        (0..ns)
            .filter(move |&s| inst.l.leq(inst.j[s], x))
            .map(move |s| inst.p[h][s])
    }));
    let b = collect(&mut (0..n).filter(|&h| fp.is_minus(h) && fb.leq(h, f)).flat_map(|h| {
        (0..ns)
            .filter(move |&s| inst.l.leq(x, inst.j[s]))
            .map(move |s| inst.p[h][s])
    }));
    // h⁻ ≤ k⁺ ≤ f and h⁺ ≤ k⁻ ≤ f, for some k
    let via = |h_tag: &dyn Fn(usize) -> bool, k_tag: &dyn Fn(usize) -> bool| -> Vec<usize> {
        let hs: Vec<usize> = (0..n)
            .filter(|&h| h_tag(h) && (0..n).any(|k| k_tag(k) && fb.leq(h, k) && fb.leq(k, f)))
            .collect();
        let set: BTreeSet<usize> = hs.iter().flat_map(|&h| (0..ns).map(move |s| inst.p[h][s])).collect();
        set.into_iter().collect()
    };
    let c = via(&|h| fp.is_minus(h), &|k| fp.is_plus(k));
    let d = via(&|h| fp.is_plus(h), &|k| fp.is_minus(k));
    AuditCell { a, b, c, d }
}

/// Builds `q`: on `j[S]` it copies `p`, elsewhere it joins the four sets.
/// Rejects instances failing the hypotheses or the special property.
pub fn extend_interpretation(inst: &ExtensionInstance) -> Result<ExtensionResult> {
    inst.check_hypotheses()?;
    inst.check_special().map_err(|v| Error::Hypothesis(v.to_string()))?;
    let (n, nl) = (inst.f.len(), inst.l.len());
    let cells: Vec<(usize, AuditCell)> = (0..n * nl)
        .into_par_iter()
        .map(|k| {
            let (f, x) = (k / nl, k % nl);
            let cell = audit_cell(inst, f, x);
            let v = match inst.preimage(x) {
                Some(s) => inst.p[f][s],
                None => inst.m.join(&cell.union()),
            };
            (v, cell)
        })
        .collect();
    let mut q = vec![Vec::with_capacity(nl); n];
    let mut audit = vec![Vec::with_capacity(nl); n];
    for (k, (v, cell)) in cells.into_iter().enumerate() {
        q[k / nl].push(v);
        audit[k / nl].push(cell);
    }
    Ok(ExtensionResult { q, audit })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExtensionFinding {
    /// `q_f(j(s)) ≠ p_f(s)`.
    NotExtension {
        f: usize,
        s: usize,
    },
    /// `f ≤ g` but `q_f(x) ≰ q_g(x)`.
    NotMonotoneInF {
        f: usize,
        g: usize,
        x: usize,
    },
    NotMonotone {
        f: usize,
    },
    NotAntitone {
        f: usize,
    },
    /// A subset claim on the audit record failed.
    Audit(String),
}

impl fmt::Display for ExtensionFinding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtensionFinding::NotExtension { f: g, s } => write!(f, "q(f{g}) differs from p(f{g}) at s{s}"),
            ExtensionFinding::NotMonotoneInF { f: a, g, x } => {
                write!(f, "f{a} <= f{g} but q(f{a})(x{x}) is not below q(f{g})(x{x})")
            }
            ExtensionFinding::NotMonotone { f: g } => write!(f, "q(f{g}) is tagged + but not monotone"),
            ExtensionFinding::NotAntitone { f: g } => write!(f, "q(f{g}) is tagged - but not antitone"),
            ExtensionFinding::Audit(m) => write!(f, "audit: {m}"),
        }
    }
}

/// Checks that `q` extends `p` along `j`, is monotone in `F`, and respects
/// the tags.
pub fn verify_extension(inst: &ExtensionInstance, res: &ExtensionResult) -> Vec<ExtensionFinding> {
    let mut out = Vec::new();
    let mo = inst.m.order();
    let fb = &inst.f.base;
    for f in 0..fb.len() {
        for s in 0..inst.s.len() {
            if res.q[f][inst.j[s]] != inst.p[f][s] {
                out.push(ExtensionFinding::NotExtension { f, s });
            }
        }
    }
    for (f, g) in fb.strict_pairs() {
        if let Some(x) = (0..inst.l.len()).find(|&x| !mo.leq(res.q[f][x], res.q[g][x])) {
            out.push(ExtensionFinding::NotMonotoneInF { f, g, x });
        }
    }
    for f in 0..fb.len() {
        if inst.f.is_plus(f) && !is_monotone_table(&inst.l, mo, &res.q[f]) {
            out.push(ExtensionFinding::NotMonotone { f });
        }
        if inst.f.is_minus(f) && !is_antitone_table(&inst.l, mo, &res.q[f]) {
            out.push(ExtensionFinding::NotAntitone { f });
        }
    }
    out
}

fn subset(a: &[usize], b: &[usize]) -> bool {
    a.iter().all(|x| b.binary_search(x).is_ok())
}

/// The subset-containment facts the construction relies on: the sets grow
/// with `f`, `A` grows and `B` shrinks with `x`, and at image points every
/// member is below `p_f(s)`.
pub fn audit_claims(inst: &ExtensionInstance, res: &ExtensionResult) -> Vec<ExtensionFinding> {
    let mut out = Vec::new();
    let fb = &inst.f.base;
    let nl = inst.l.len();
    let mo = inst.m.order();
    let mut fail = |m: String| out.push(ExtensionFinding::Audit(m));
    for f in 0..fb.len() {
        for g in 0..fb.len() {
            if !fb.leq(f, g) {
                continue;
            }
            for x in 0..nl {
                let (cf, cg) = (&res.audit[f][x], &res.audit[g][x]);
                for (name, a, b) in [
                    ("A", &cf.a, &cg.a),
                    ("B", &cf.b, &cg.b),
                    ("C", &cf.c, &cg.c),
                    ("D", &cf.d, &cg.d),
                ] {
                    if !subset(a, b) {
                        fail(format!("{name}(f{f}, x{x}) is not inside {name}(f{g}, x{x})"));
                    }
                }
            }
        }
        for x in 0..nl {
            for y in 0..nl {
                if !inst.l.leq(x, y) {
                    continue;
                }
                if !subset(&res.audit[f][x].a, &res.audit[f][y].a) {
                    fail(format!("A(f{f}, x{x}) is not inside A(f{f}, x{y})"));
                }
                if !subset(&res.audit[f][y].b, &res.audit[f][x].b) {
                    fail(format!("B(f{f}, x{y}) is not inside B(f{f}, x{x})"));
                }
            }
        }
        for s in 0..inst.s.len() {
            let x = inst.j[s];
            let top = inst.p[f][s];
            if res.audit[f][x].union().iter().any(|&v| !mo.leq(v, top)) {
                fail(format!("a member of the sets at j(s{s}) is not below p(f{f})(s{s})"));
            }
        }
    }
    out
}

/// Size limits for [`random_instance`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InstanceShape {
    pub max_f: usize,
    pub max_s: usize,
    pub max_l: usize,
    pub max_m: usize,
}

impl Default for InstanceShape {
    fn default() -> Self {
        InstanceShape {
            max_f: 4,
            max_s: 3,
            max_l: 5,
            max_m: 3,
        }
    }
}

fn random_preorder(rng: &mut impl Rng, names: Vec<String>, density: f64) -> FinPreorder {
    let n = names.len();
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|&(i, j)| i != j)
        .filter(|_| rng.random_bool(density))
        .collect();
    closure_of_indices(names, &pairs)
}

fn names(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

/// A valid instance: `M` is the completion of a random preorder, `L`
/// extends an image of `S` by extra points and order, and `p` is drawn
/// table by table (half the time a constant table) until the hypotheses
/// and the special property hold. `None` if `attempts` draws all fail.
pub fn random_instance(rng: &mut impl Rng, shape: InstanceShape, attempts: usize) -> Option<ExtensionInstance> {
    for _ in 0..attempts {
        let nf = rng.random_range(1..=shape.max_f);
        let ns = rng.random_range(1..=shape.max_s);
        let nl = rng.random_range(ns..=shape.max_l.max(ns));
        let nm = rng.random_range(1..=shape.max_m);
        let fbase = random_preorder(rng, names("f", nf), 0.3);
        let mut f = PolarizedFinPreorder::untagged(fbase);
        for i in 0..nf {
            if rng.random_bool(0.45) {
                f.plus.insert(i);
            }
            if rng.random_bool(0.45) {
                f.minus.insert(i);
            }
        }
        let s = random_preorder(rng, names("s", ns), 0.3);
        // L: S's order on a random placement of its image, plus extras
        let mut slots: Vec<usize> = (0..nl).collect();
        for i in (1..nl).rev() {
            let k = rng.random_range(0..=i);
            slots.swap(i, k);
        }
        let j: Vec<usize> = slots[..ns].to_vec();
        let mut pairs: Vec<(usize, usize)> = s.strict_pairs().into_iter().map(|(a, b)| (j[a], j[b])).collect();
        for x in 0..nl {
            for y in 0..nl {
                let image = j.contains(&x) && j.contains(&y);
                if x != y && !image && rng.random_bool(0.3) {
                    pairs.push((x, y));
                }
            }
        }
        let l = closure_of_indices(names("x", nl), &pairs);
        let m = match Codomain::completed(&random_preorder(rng, names("m", nm), 0.3)) {
            Ok(m) => m,
            Err(_) => continue,
        };
        let mut inst = ExtensionInstance {
            f,
            s,
            l,
            m,
            j,
            p: Vec::new(),
        };
        if draw_tables(rng, &mut inst) && inst.check_hypotheses().is_ok() && inst.check_special().is_ok() {
            return Some(inst);
        }
    }
    None
}

fn draw_tables(rng: &mut impl Rng, inst: &mut ExtensionInstance) -> bool {
    let (nf, ns, nm) = (inst.f.len(), inst.s.len(), inst.m.len());
    let mo = inst.m.order().clone();
    for f in 0..nf {
        let mut ok = false;
        for _ in 0..64 {
            let t: Vec<usize> = if rng.random_bool(0.5) {
                vec![rng.random_range(0..nm); ns]
            } else {
                (0..ns).map(|_| rng.random_range(0..nm)).collect()
            };
            if inst.f.is_plus(f) && !is_monotone_table(&inst.s, &mo, &t) {
                continue;
            }
            if inst.f.is_minus(f) && !is_antitone_table(&inst.s, &mo, &t) {
                continue;
            }
            let fb = &inst.f.base;
            let fits = (0..f).all(|g| {
                let below = !fb.leq(g, f) || (0..ns).all(|x| mo.leq(inst.p[g][x], t[x]));
                let above = !fb.leq(f, g) || (0..ns).all(|x| mo.leq(t[x], inst.p[g][x]));
                let mixed_lo = !inst.f.mixed_leq(g, f) || inst.p[g].iter().all(|&a| t.iter().all(|&b| mo.leq(a, b)));
                let mixed_hi = !inst.f.mixed_leq(f, g) || t.iter().all(|&a| inst.p[g].iter().all(|&b| mo.leq(a, b)));
                below && above && mixed_lo && mixed_hi
            });
            let self_mixed = !inst.f.mixed_leq(f, f) || t.iter().all(|&a| t.iter().all(|&b| mo.leq(a, b)));
            if fits && self_mixed {
                inst.p.push(t);
                ok = true;
                break;
            }
        }
        if !ok {
            return false;
        }
    }
    true
}
