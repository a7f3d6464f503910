//! Random theories, problems and terms for the suites.
//!
//! Everything is driven by a caller-supplied generator, so a seed fixes the
//! output.

use rand::seq::{IndexedRandom, SliceRandom};
use rand::Rng;

use crate::signature::{Signature, SignatureBuilder};
use crate::term::Term;
use crate::theory::{Assertion, Polarity, Theory};
use crate::types::SimpleType;

/// Knobs for [`random_theory`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TheoryShape {
    /// Probability of a second base type `q`.
    pub second_base: f64,
    pub max_funs: usize,
    pub max_axioms: usize,
    /// Probability that an axiom is an identity rather than an inequality.
    pub eq_axioms: f64,
    /// Probability of signature order facts between same-typed constants.
    pub sig_order: f64,
    pub max_depth: usize,
}

impl Default for TheoryShape {
    fn default() -> Self {
        TheoryShape {
            second_base: 0.5,
            max_funs: 3,
            max_axioms: 3,
            eq_axioms: 0.15,
            sig_order: 0.3,
            max_depth: 2,
        }
    }
}

fn p() -> SimpleType {
    SimpleType::base("p")
}

fn q() -> SimpleType {
    SimpleType::base("q")
}

fn random_tags(rng: &mut impl Rng) -> (bool, bool) {
    match rng.random_range(0..20) {
        0..=6 => (true, false),
        7..=13 => (false, true),
        14 => (true, true),
        _ => (false, false),
    }
}

/// A small first-order theory: base `p` with constants `a b c`, maybe a
/// base `q` with a constant `d`, one to `max_funs` unary function constants
/// with random tags and order, and random axioms.
pub fn random_theory(rng: &mut impl Rng, shape: &TheoryShape) -> Theory {
    loop {
        if let Some(thy) = try_theory(rng, shape) {
            return thy;
        }
    }
}

fn try_theory(rng: &mut impl Rng, shape: &TheoryShape) -> Option<Theory> {
    let two = rng.random_bool(shape.second_base);
    let mut b = SignatureBuilder::new().base("p");
    for n in ["a", "b", "c"] {
        b.add_constant(n, p(), false, false);
    }
    let mut fun_types = vec![SimpleType::arrow(p(), p())];
    if two {
        b.add_base("q");
        if rng.random_bool(0.5) {
            b.add_constant("d", q(), false, false);
        }
        fun_types.push(SimpleType::arrow(p(), q()));
    }
    let n_funs = rng.random_range(1..=shape.max_funs.max(1));
    let mut funs = Vec::new();
    for name in ["f", "g", "h", "k"].into_iter().take(n_funs) {
        let ty = fun_types.choose(rng).expect("nonempty").clone();
        let (plus, minus) = random_tags(rng);
        b.add_constant(name, ty.clone(), plus, minus);
        funs.push((name, ty));
    }
    for x in ["a", "b", "c"] {
        for y in ["a", "b", "c"] {
            if x != y && rng.random_bool(shape.sig_order / 3.0) {
                b.add_order(x, y);
            }
        }
    }
    for (f, tf) in &funs {
        for (g, tg) in &funs {
            if f != g && tf == tg && rng.random_bool(shape.sig_order) {
                b.add_order(f, g);
            }
        }
    }
    let sig = b.build().ok()?;
    let n_ax = rng.random_range(1..=shape.max_axioms.max(1));
    let mut axioms = Vec::new();
    let mut tries = 0;
    while axioms.len() < n_ax && tries < 20 {
        tries += 1;
        let eq = rng.random_bool(shape.eq_axioms);
        if let Some(a) = random_assertion(rng, &sig, shape.max_depth, eq) {
            if !a.is_tautology() && !axioms.contains(&a) {
                axioms.push(a);
            }
        }
    }
    Some(Theory::new(sig, axioms))
}

/// Types with at least one closed term of depth at most `depth`.
fn inhabited(sig: &Signature, depth: usize) -> Vec<SimpleType> {
    let mut tys: Vec<SimpleType> = sig.families().keys().cloned().collect();
    for (_, ty) in sig.constants() {
        let mut t = ty.clone();
        for _ in 0..depth {
            match t.codomain() {
                Some(c) => {
                    tys.push(c.clone());
                    t = c.clone();
                }
                None => break,
            }
        }
    }
    tys.sort();
    tys.dedup();
    tys
}

/// `l <= r` (or `l = r`) between random terms of one random type.
pub fn random_assertion(rng: &mut impl Rng, sig: &Signature, depth: usize, eq: bool) -> Option<Assertion> {
    let tys = inhabited(sig, depth);
    let ty = tys.choose(rng)?;
    let l = random_term(rng, sig, ty, depth)?;
    let r = random_term(rng, sig, ty, depth)?;
    Some(if eq { Assertion::Eq(l, r) } else { Assertion::Leq(l, r) })
}

/// A random closed term of type `ty` with at most `depth` nested
/// applications, or `None` if there is none.
pub fn random_term(rng: &mut impl Rng, sig: &Signature, ty: &SimpleType, depth: usize) -> Option<Term> {
    let consts: Vec<Term> = sig
        .constants()
        .into_iter()
        .filter(|(_, t)| *t == ty)
        .map(|(n, t)| Term::constant(n, t.clone()))
        .collect();
    if depth > 0 && (consts.is_empty() || rng.random_bool(0.5)) {
        // heads whose result, after some arguments, is `ty`
        let mut heads: Vec<(Term, Vec<SimpleType>)> = Vec::new();
        for (n, t) in sig.constants() {
            let mut args = Vec::new();
            let mut cur = t.clone();
            while let (Some(d), Some(c)) = (cur.domain().cloned(), cur.codomain().cloned()) {
                args.push(d);
                cur = c;
                if cur == *ty && args.len() <= depth {
                    heads.push((Term::constant(n, t.clone()), args.clone()));
                }
            }
        }
        heads.shuffle(rng);
        for (head, args) in heads {
            let mut t = head;
            let mut ok = true;
            for a in &args {
                match random_term(rng, sig, a, depth - args.len()) {
                    Some(arg) => t = Term::app(t, arg).expect("typed by construction"),
                    None => {
                        ok = false;
                        break;
                    }
                }
            }
            if ok {
                return Some(t);
            }
        }
    }
    consts.choose(rng).cloned()
}

/// A richer random problem for parser round trips: up to three bases,
/// higher-order constants, base orders, all assertion kinds among axioms and
/// goals.
pub fn random_problem(rng: &mut impl Rng) -> (Theory, Vec<Assertion>) {
    loop {
        if let Some(out) = try_problem(rng) {
            return out;
        }
    }
}

const NAMES: [&str; 12] = ["a", "b", "c", "d", "e", "f", "g", "h", "k", "m", "f'", "g_2"];

fn random_type(rng: &mut impl Rng, bases: &[SimpleType], depth: usize) -> SimpleType {
    if depth == 0 || rng.random_bool(0.4) {
        return bases.choose(rng).expect("nonempty").clone();
    }
    SimpleType::arrow(random_type(rng, bases, depth - 1), random_type(rng, bases, depth - 1))
}

fn try_problem(rng: &mut impl Rng) -> Option<(Theory, Vec<Assertion>)> {
    let base_names = ["p", "q", "r"];
    let nb = rng.random_range(1..=3);
    let bases: Vec<SimpleType> = base_names[..nb].iter().map(|n| SimpleType::base(*n)).collect();
    let mut b = SignatureBuilder::new();
    for n in &base_names[..nb] {
        b.add_base(n);
    }
    let nc = rng.random_range(1..=NAMES.len());
    let mut names: Vec<&str> = NAMES.to_vec();
    names.shuffle(rng);
    let mut consts = Vec::new();
    for n in names.into_iter().take(nc) {
        let ty = random_type(rng, &bases, 2);
        let (plus, minus) = if ty.is_arrow() {
            random_tags(rng)
        } else {
            (false, false)
        };
        b.add_constant(n, ty.clone(), plus, minus);
        consts.push((n, ty));
    }
    for (f, tf) in &consts {
        for (g, tg) in &consts {
            if f != g && tf == tg && rng.random_bool(0.25) {
                b.add_order(f, g);
            }
        }
    }
    let sig = b.build().ok()?;
    let mut axioms = Vec::new();
    for _ in 0..rng.random_range(0..=4) {
        axioms.push(any_assertion(rng, &sig)?);
    }
    let mut goals = Vec::new();
    for _ in 0..rng.random_range(0..=3) {
        goals.push(any_assertion(rng, &sig)?);
    }
    Some((Theory::new(sig, axioms), goals))
}

fn any_assertion(rng: &mut impl Rng, sig: &Signature) -> Option<Assertion> {
    let funs: Vec<&str> = sig
        .constants()
        .into_iter()
        .filter(|(_, t)| t.is_arrow())
        .map(|(n, _)| n)
        .collect();
    if !funs.is_empty() && rng.random_bool(0.15) {
        let f = funs.choose(rng)?;
        let pol = if rng.random_bool(0.5) {
            Polarity::Plus
        } else {
            Polarity::Minus
        };
        return Some(Assertion::Pol(f.to_string(), pol));
    }
    let eq = rng.random_bool(0.3);
    random_assertion(rng, sig, 3, eq)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn theories_are_well_typed_and_seeded() {
        let shape = TheoryShape::default();
        for seed in 0..50 {
            let t1 = random_theory(&mut ChaCha8Rng::seed_from_u64(seed), &shape);
            let t2 = random_theory(&mut ChaCha8Rng::seed_from_u64(seed), &shape);
            assert_eq!(t1, t2);
            t1.validate().unwrap();
            assert!(!t1.axioms.is_empty());
        }
    }

    #[test]
    fn problems_are_well_typed() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let (thy, goals) = random_problem(&mut rng);
            thy.validate().unwrap();
            for g in &goals {
                g.check(&thy.signature).unwrap();
            }
        }
    }

    #[test]
    fn terms_reach_requested_types() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let thy = random_theory(&mut rng, &TheoryShape::default());
        for _ in 0..100 {
            let t = random_term(&mut rng, &thy.signature, &p(), 2).unwrap();
            assert_eq!(t.ty(), &p());
            assert!(t.depth() <= 3);
        }
    }
}
