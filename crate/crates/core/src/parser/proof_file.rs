use super::problem::{resolve_term, term_syntax};
use super::{end_pos, lex, Cursor, DiagKind, Diagnostic, Pos, Tok, Token};
use crate::proof::{infer_conclusion, CalculusConfig, ProofTree, Rule, Step};
use crate::term::Term;
use crate::theory::{Assertion, Polarity, Theory};

enum Child {
    Tree(ProofTree),
    Term(Term),
}

fn glued(a: &Token, b: Option<&Token>) -> bool {
    b.is_some_and(|b| a.end == b.start)
}

/// Reads a node head such as `mono`, `wc3a`, `pol+`, `sig-order`.
fn head(c: &mut Cursor) -> Result<(String, Pos), Diagnostic> {
    let first = c.peek().ok_or_else(|| c.unexpected("a rule name"))?;
    let Tok::Ident(name) = &first.tok else {
        return Err(c.unexpected("a rule name"));
    };
    c.bump();
    let mut name = name.clone();
    let mut last = first;
    loop {
        let next = c.peek();
        if !glued(last, next) {
            break;
        }
        let next = next.expect("glued");
        match &next.tok {
            Tok::Plus => name.push('+'),
            Tok::Minus => name.push('-'),
            Tok::Ident(s) if name.ends_with('-') => name.push_str(s),
            _ => break,
        }
        c.bump();
        last = next;
    }
    Ok((name, first.pos))
}

fn polarity(c: &mut Cursor) -> Result<Polarity, Diagnostic> {
    if c.eat(&Tok::Plus) {
        Ok(Polarity::Plus)
    } else if c.eat(&Tok::Minus) {
        Ok(Polarity::Minus)
    } else {
        Err(c.unexpected("`+` or `-`"))
    }
}

fn node(c: &mut Cursor, thy: &Theory, cfg: &CalculusConfig) -> Result<Child, Diagnostic> {
    c.expect(&Tok::LParen)?;
    let sig = &thy.signature;
    let (name, pos) = head(c)?;
    let child = match name.as_str() {
        "term" => {
            let raw = term_syntax(c)?;
            Child::Term(resolve_term(&raw, sig)?)
        }
        "axiom" => {
            let (i, ipos) = c.nat()?;
            let ax = usize::try_from(i).ok().and_then(|i| thy.axioms.get(i));
            let Some(ax) = ax else {
                return Err(Diagnostic::error(
                    ipos,
                    DiagKind::DanglingAxiom,
                    format!(
                        "leaf not in Γ: dangling axiom index {i} (the theory has {})",
                        thy.axioms.len()
                    ),
                ));
            };
            Child::Tree(ProofTree::leaf(ax.clone(), Step::Axiom(i as usize)))
        }
        "sig-order" => {
            let (f, fp) = c.ident()?;
            let (g, gp) = c.ident()?;
            let mut terms = Vec::new();
            for (n, p) in [(&f, fp), (&g, gp)] {
                terms.push(sig.const_term(n).map_err(|_| {
                    Diagnostic::error(p, DiagKind::UndeclaredName, format!("undeclared constant `{n}`"))
                })?);
            }
            if !sig.sig_leq(&f, &g) {
                return Err(Diagnostic::error(
                    pos,
                    DiagKind::FalseFact,
                    format!("order fact not in signature: {f} <= {g}"),
                ));
            }
            let g_t = terms.pop().expect("two");
            let f_t = terms.pop().expect("two");
            Child::Tree(ProofTree::leaf(Assertion::Leq(f_t, g_t), Step::SigOrder(f, g)))
        }
        "sig-pol" => {
            let (f, fp) = c.ident()?;
            let p = polarity(c)?;
            if !sig.contains(&f) {
                return Err(Diagnostic::error(
                    fp,
                    DiagKind::UndeclaredName,
                    format!("undeclared constant `{f}`"),
                ));
            }
            if !sig.has_tag(&f, p) {
                return Err(Diagnostic::error(
                    pos,
                    DiagKind::FalseFact,
                    format!("polarity fact not in signature: {f} {p}"),
                ));
            }
            Child::Tree(ProofTree::leaf(Assertion::Pol(f.clone(), p), Step::SigPol(f, p)))
        }
        other => {
            let rule = Rule::from_name(other)
                .ok_or_else(|| Diagnostic::error(pos, DiagKind::UnknownRule, format!("unknown rule `{other}`")))?;
            let mut premises = Vec::new();
            let mut terms = Vec::new();
            while c.peek_tok() == Some(&Tok::LParen) {
                match node(c, thy, cfg)? {
                    Child::Tree(t) => premises.push(t),
                    Child::Term(t) => terms.push(t),
                }
            }
            let prem: Vec<&Assertion> = premises.iter().map(|p| &p.conclusion).collect();
            let conclusion = infer_conclusion(rule, &prem, &terms, sig, cfg.equational)
                .map_err(|m| Diagnostic::error(pos, DiagKind::RuleShape, m))?;
            Child::Tree(ProofTree::node(conclusion, rule, premises, terms))
        }
    };
    c.expect(&Tok::RParen)?;
    Ok(child)
}

/// Parses one proof tree against `thy`. Conclusions are inferred bottom-up;
/// `cfg` only decides whether `refl` concludes `t = t` (equational mode) or
/// `t <= t`. Whether the rules are enabled is left to the checker.
pub fn parse_proof(text: &str, thy: &Theory, cfg: &CalculusConfig) -> Result<ProofTree, Vec<Diagnostic>> {
    let toks = lex(text).map_err(|d| vec![d])?;
    let mut c = Cursor::new(&toks, end_pos(text));
    let pos = c.pos();
    let tree = match node(&mut c, thy, cfg).map_err(|d| vec![d])? {
        Child::Tree(t) => t,
        Child::Term(_) => {
            return Err(vec![Diagnostic::error(
                pos,
                DiagKind::Syntax,
                "a proof must be a rule or leaf node, not a bare term",
            )])
        }
    };
    if !c.at_end() {
        return Err(vec![c.unexpected("end of input")]);
    }
    Ok(tree)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::{parse_problem, render_proof};
    use crate::proof::check_proof;

    const KEY: &str = "base b { elems a b c; } base t { }
const f : b -> t [+]; const g : b -> t [-]; const q : b -> t;
order f <= g; axiom a <= c; axiom b <= c; goal f a <= g b;";

    const KEY_PROOF: &str = "
(trans
  (trans
    (mono (sig-pol f +) (axiom 0))
    (point (sig-order f g) (term c)))
  (anti (sig-pol g -) (axiom 1)))";

    fn thy() -> Theory {
        parse_problem(KEY).unwrap().theory
    }

    #[test]
    fn key_derivation() {
        let thy = thy();
        let cfg = CalculusConfig::base();
        let tree = parse_proof(KEY_PROOF, &thy, &cfg).unwrap();
        assert_eq!(tree.conclusion.to_string(), "f a <= g b");
        assert_eq!(tree.rule_count(), 5);
        assert!(check_proof(&tree, &thy, &cfg).is_accepted());
        let text = render_proof(&tree);
        assert_eq!(parse_proof(&text, &thy, &cfg).unwrap(), tree);
    }

    #[test]
    fn refl_leaf() {
        let tree = parse_proof("(refl (term a))", &thy(), &CalculusConfig::base()).unwrap();
        assert_eq!(tree.node_count(), 1);
        assert_eq!(tree.conclusion.to_string(), "a <= a");
        let eq = parse_proof("(refl (term a))", &thy(), &CalculusConfig::equational()).unwrap();
        assert_eq!(eq.conclusion.to_string(), "a = a");
    }

    #[test]
    fn diagnostics() {
        let cfg = CalculusConfig::base();
        let cases = [
            (
                "(mono (sig-pol q +) (axiom 0))",
                DiagKind::FalseFact,
                "polarity fact not in signature",
            ),
            (
                "(point (sig-order g f) (term a))",
                DiagKind::FalseFact,
                "order fact not in signature",
            ),
            ("(axiom 7)", DiagKind::DanglingAxiom, "leaf not in Γ"),
            ("(frob (axiom 0))", DiagKind::UnknownRule, "unknown rule"),
            ("(refl (term a a))", DiagKind::Type, "cannot be applied"),
            ("(mono (axiom 0) (axiom 1))", DiagKind::RuleShape, "polarity premise"),
            ("(refl (term a)) (refl (term a))", DiagKind::Syntax, "end of input"),
        ];
        for (src, kind, needle) in cases {
            let errs = parse_proof(src, &thy(), &cfg).unwrap_err();
            assert_eq!(errs[0].kind, kind, "{src}: {errs:?}");
            assert!(errs[0].message.contains(needle), "{src}: {}", errs[0].message);
        }
    }

    #[test]
    fn glued_heads() {
        let t = parse_proof(
            "(pol+ (sig-pol f +) (sig-order f g) (refl (term g)))",
            &thy(),
            &CalculusConfig::base(),
        );
        // parses (shape is fine), the checker then rejects it
        let tree = t.unwrap();
        assert_eq!(tree.rule(), Some(Rule::PolPlus));
        assert!(!check_proof(&tree, &thy(), &CalculusConfig::base()).is_accepted());
    }
}
