use std::fmt::Write;

use crate::proof::{ProofTree, Step};
use crate::term::Term;
use crate::theory::{Assertion, Polarity, Theory};
use crate::types::SimpleType;

/// Left-associative application, parentheses only around compound arguments.
pub fn render_term(t: &Term) -> String {
    t.to_string()
}

pub fn render_assertion(a: &Assertion) -> String {
    a.to_string()
}

fn tags(plus: bool, minus: bool) -> &'static str {
    match (plus, minus) {
        (true, true) => " [+-]",
        (true, false) => " [+]",
        (false, true) => " [-]",
        (false, false) => "",
    }
}

/// Canonical problem text: bases (sorted, with their elements and order),
/// function constants by type, function order facts, axioms, goals.
pub fn render_problem(thy: &Theory, goals: &[Assertion]) -> String {
    let sig = &thy.signature;
    let mut out = String::new();
    for b in sig.bases() {
        let ty = SimpleType::base(b.clone());
        match sig.family(&ty) {
            Some(fam) if !fam.base.is_empty() => {
                let p = &fam.base;
                write!(out, "base {b} {{ elems {};", p.elements().join(" ")).unwrap();
                let pairs = p.strict_pairs();
                if !pairs.is_empty() {
                    let ps: Vec<String> = pairs
                        .iter()
                        .map(|&(i, j)| format!("{} <= {}", p.name(i), p.name(j)))
                        .collect();
                    write!(out, " order {};", ps.join(" ")).unwrap();
                }
                out.push_str(" }\n");
            }
            _ => writeln!(out, "base {b} {{ }}").unwrap(),
        }
    }
    let arrows: Vec<_> = sig.families().iter().filter(|(ty, _)| ty.is_arrow()).collect();
    for (ty, fam) in &arrows {
        for (i, name) in fam.base.elements().iter().enumerate() {
            writeln!(out, "const {name} : {ty}{};", tags(fam.is_plus(i), fam.is_minus(i))).unwrap();
        }
    }
    for (_, fam) in &arrows {
        for (i, j) in fam.base.strict_pairs() {
            writeln!(out, "order {} <= {};", fam.base.name(i), fam.base.name(j)).unwrap();
        }
    }
    for a in &thy.axioms {
        writeln!(out, "axiom {a};").unwrap();
    }
    for g in goals {
        writeln!(out, "goal {g};").unwrap();
    }
    out
}

fn leaf_text(step: &Step) -> Option<String> {
    Some(match step {
        Step::Axiom(i) => format!("(axiom {i})"),
        Step::SigOrder(f, g) => format!("(sig-order {f} {g})"),
        Step::SigPol(f, p) => format!("(sig-pol {f} {})", polarity_symbol(*p)),
        Step::Rule(_) => return None,
    })
}

fn polarity_symbol(p: Polarity) -> char {
    p.symbol()
}

/// One node per line, children indented by two spaces; premises precede
/// `(term …)` payloads.
pub fn render_proof(tree: &ProofTree) -> String {
    let mut out = String::new();
    write_node(tree, 0, &mut out);
    out.push('\n');
    out
}

fn write_node(t: &ProofTree, depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth);
    if let Some(leaf) = leaf_text(&t.step) {
        write!(out, "{pad}{leaf}").unwrap();
        return;
    }
    let Step::Rule(rule) = t.step else { unreachable!() };
    write!(out, "{pad}({rule}").unwrap();
    for p in &t.premises {
        out.push('\n');
        write_node(p, depth + 1, out);
    }
    for term in &t.terms {
        write!(out, "\n{pad}  (term {term})").unwrap();
    }
    out.push(')');
}
