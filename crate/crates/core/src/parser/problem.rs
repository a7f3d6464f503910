use std::collections::{BTreeMap, BTreeSet, HashSet};

use super::{end_pos, lex, Cursor, DiagKind, Diagnostic, Pos, Tok};
use crate::signature::{validate_signature, Signature, SignatureBuilder};
use crate::term::Term;
use crate::theory::{Assertion, Polarity, Theory};
use crate::types::SimpleType;

/// A parsed problem file. Equality compares the theory and goals only.
#[derive(Debug, Clone)]
pub struct SourceProblem {
    pub text: String,
    pub file_name: String,
    pub theory: Theory,
    pub goals: Vec<Assertion>,
    pub warnings: Vec<Diagnostic>,
}

impl PartialEq for SourceProblem {
    fn eq(&self, other: &Self) -> bool {
        self.theory == other.theory && self.goals == other.goals
    }
}

impl SourceProblem {
    pub fn goal(&self) -> Option<&Assertion> {
        self.goals.first()
    }
}

#[derive(Debug, Clone)]
pub(crate) enum RawTerm {
    Name(String, Pos),
    App(Box<RawTerm>, Box<RawTerm>),
}

impl RawTerm {
    pub(crate) fn pos(&self) -> Pos {
        match self {
            RawTerm::Name(_, p) => *p,
            RawTerm::App(f, _) => f.pos(),
        }
    }
}

#[derive(Debug, Clone)]
enum RawType {
    Name(String, Pos),
    Arrow(Box<RawType>, Box<RawType>),
}

#[derive(Debug, Clone)]
enum RawAssertion {
    Bin { lhs: RawTerm, rhs: RawTerm, eq: bool },
    Pol { name: String, pos: Pos, pol: Polarity },
}

type Named = (String, Pos);

#[derive(Debug, Clone)]
enum Decl {
    Base {
        name: Named,
        elems: Vec<Named>,
        orders: Vec<(Named, Named)>,
    },
    Const {
        name: Named,
        ty: RawType,
        plus: bool,
        minus: bool,
    },
    Order {
        lo: Named,
        hi: Named,
    },
    Axiom {
        body: RawAssertion,
        pos: Pos,
    },
    Goal {
        body: RawAssertion,
        pos: Pos,
    },
}

/// `term := atomterm+`, application to the left.
pub(crate) fn term_syntax(c: &mut Cursor) -> Result<RawTerm, Diagnostic> {
    let mut acc = atom_term(c)?;
    while matches!(c.peek_tok(), Some(Tok::Ident(_)) | Some(Tok::LParen)) {
        let arg = atom_term(c)?;
        acc = RawTerm::App(Box::new(acc), Box::new(arg));
    }
    Ok(acc)
}

fn atom_term(c: &mut Cursor) -> Result<RawTerm, Diagnostic> {
    if c.eat(&Tok::LParen) {
        let t = term_syntax(c)?;
        c.expect(&Tok::RParen)?;
        return Ok(t);
    }
    match c.peek_tok() {
        Some(Tok::Ident(_)) => {
            let (n, p) = c.ident()?;
            Ok(RawTerm::Name(n, p))
        }
        _ => Err(c.unexpected("a term")),
    }
}

fn type_syntax(c: &mut Cursor) -> Result<RawType, Diagnostic> {
    let dom = if c.eat(&Tok::LParen) {
        let t = type_syntax(c)?;
        c.expect(&Tok::RParen)?;
        t
    } else {
        let (n, p) = c.ident()?;
        RawType::Name(n, p)
    };
    if c.eat(&Tok::Arrow) {
        let cod = type_syntax(c)?;
        Ok(RawType::Arrow(Box::new(dom), Box::new(cod)))
    } else {
        Ok(dom)
    }
}

fn polarity(c: &mut Cursor) -> Option<Polarity> {
    if c.eat(&Tok::Plus) {
        Some(Polarity::Plus)
    } else if c.eat(&Tok::Minus) {
        Some(Polarity::Minus)
    } else {
        None
    }
}

fn assertion_syntax(c: &mut Cursor) -> Result<RawAssertion, Diagnostic> {
    let lhs = term_syntax(c)?;
    if let RawTerm::Name(name, pos) = &lhs {
        if let Some(pol) = polarity(c) {
            return Ok(RawAssertion::Pol {
                name: name.clone(),
                pos: *pos,
                pol,
            });
        }
    }
    let eq = if c.eat(&Tok::Leq) {
        false
    } else if c.eat(&Tok::Equals) {
        true
    } else {
        return Err(c.unexpected("`<=` or `=`"));
    };
    let rhs = term_syntax(c)?;
    Ok(RawAssertion::Bin { lhs, rhs, eq })
}

fn pair(c: &mut Cursor) -> Result<(Named, Named), Diagnostic> {
    let lo = c.ident()?;
    c.expect(&Tok::Leq)?;
    let hi = c.ident()?;
    Ok((lo, hi))
}

pub(crate) type BlockBody = (Vec<Named>, Vec<(Named, Named)>);

/// `elems a b c;` and `order a <= b c <= d;` inside braces. Shared with
/// the preorder file format.
pub(crate) fn block_body(c: &mut Cursor) -> Result<BlockBody, Diagnostic> {
    let mut elems = Vec::new();
    let mut orders = Vec::new();
    if c.is_keyword("elems") {
        c.bump();
        while let Some(Tok::Ident(_)) = c.peek_tok() {
            elems.push(c.ident()?);
        }
        if elems.is_empty() {
            return Err(c.unexpected("an element name"));
        }
        c.expect(&Tok::Semi)?;
    }
    if c.is_keyword("order") {
        c.bump();
        loop {
            orders.push(pair(c)?);
            c.eat(&Tok::Comma);
            if !matches!(c.peek_tok(), Some(Tok::Ident(_))) {
                break;
            }
        }
        c.expect(&Tok::Semi)?;
    }
    Ok((elems, orders))
}

fn decl(c: &mut Cursor) -> Result<Decl, Diagnostic> {
    let pos = c.pos();
    let (kw, _) = c.ident().map_err(|_| c.unexpected("a declaration"))?;
    let d = match kw.as_str() {
        "base" => {
            let name = c.ident()?;
            c.expect(&Tok::LBrace)?;
            let (elems, orders) = block_body(c)?;
            c.expect(&Tok::RBrace)?;
            return Ok(Decl::Base { name, elems, orders });
        }
        "const" => {
            let name = c.ident()?;
            c.expect(&Tok::Colon)?;
            let ty = type_syntax(c)?;
            let (mut plus, mut minus) = (false, false);
            if c.eat(&Tok::LBracket) {
                loop {
                    match polarity(c) {
                        Some(Polarity::Plus) => plus = true,
                        Some(Polarity::Minus) => minus = true,
                        None => break,
                    }
                }
                if !(plus || minus) {
                    return Err(c.unexpected("`+` or `-`"));
                }
                c.expect(&Tok::RBracket)?;
            }
            Decl::Const { name, ty, plus, minus }
        }
        "order" => {
            let (lo, hi) = pair(c)?;
            Decl::Order { lo, hi }
        }
        "axiom" => Decl::Axiom {
            body: assertion_syntax(c)?,
            pos,
        },
        "goal" => Decl::Goal {
            body: assertion_syntax(c)?,
            pos,
        },
        other => {
            return Err(Diagnostic::error(
                pos,
                DiagKind::Syntax,
                format!("expected a declaration (base, const, order, axiom, goal), found `{other}`"),
            ))
        }
    };
    c.expect(&Tok::Semi)?;
    Ok(d)
}

pub fn parse_problem(text: &str) -> Result<SourceProblem, Vec<Diagnostic>> {
    parse_problem_named(text, "<input>")
}

pub fn parse_problem_named(text: &str, file_name: &str) -> Result<SourceProblem, Vec<Diagnostic>> {
    let toks = lex(text).map_err(|d| vec![d])?;
    let mut c = Cursor::new(&toks, end_pos(text));
    let mut decls = Vec::new();
    while !c.at_end() {
        decls.push(decl(&mut c).map_err(|d| vec![d])?);
    }
    let (theory, goals, diags) = elaborate(decls);
    let (errors, warnings): (Vec<_>, Vec<_>) = diags.into_iter().partition(|d| d.is_error());
    if !errors.is_empty() {
        return Err(errors.into_iter().chain(warnings).collect());
    }
    Ok(SourceProblem {
        text: text.to_string(),
        file_name: file_name.to_string(),
        theory,
        goals,
        warnings,
    })
}

fn resolve_type(raw: &RawType, bases: &BTreeSet<String>, diags: &mut Vec<Diagnostic>) -> Option<SimpleType> {
    match raw {
        RawType::Name(n, p) => {
            if bases.contains(n) {
                Some(SimpleType::base(n.clone()))
            } else {
                diags.push(Diagnostic::error(
                    *p,
                    DiagKind::UndeclaredName,
                    format!("undeclared base type `{n}`"),
                ));
                None
            }
        }
        RawType::Arrow(d, c) => {
            let d = resolve_type(d, bases, diags);
            let c = resolve_type(c, bases, diags);
            Some(SimpleType::arrow(d?, c?))
        }
    }
}

pub(crate) fn resolve_term(raw: &RawTerm, sig: &Signature) -> Result<Term, Diagnostic> {
    match raw {
        RawTerm::Name(n, p) => sig
            .const_term(n)
            .map_err(|_| Diagnostic::error(*p, DiagKind::UndeclaredName, format!("undeclared constant `{n}`"))),
        RawTerm::App(f, a) => {
            let ft = resolve_term(f, sig)?;
            let at = resolve_term(a, sig)?;
            let (fty, aty) = (ft.ty().clone(), at.ty().clone());
            Term::app(ft.clone(), at).map_err(|_| {
                let msg = match fty.domain() {
                    Some(d) => format!("`{ft}` expects an argument of type {d}, got one of type {aty}"),
                    None => format!("`{ft}` has base type {fty} and cannot be applied"),
                };
                Diagnostic::error(a.pos(), DiagKind::Type, msg)
            })
        }
    }
}

fn resolve_assertion(raw: &RawAssertion, sig: &Signature) -> Result<Assertion, Diagnostic> {
    match raw {
        RawAssertion::Bin { lhs, rhs, eq } => {
            let l = resolve_term(lhs, sig)?;
            let r = resolve_term(rhs, sig)?;
            if l.ty() != r.ty() {
                return Err(Diagnostic::error(
                    rhs.pos(),
                    DiagKind::Type,
                    format!("type mismatch: `{l}` has type {} but `{r}` has type {}", l.ty(), r.ty()),
                ));
            }
            Ok(if *eq { Assertion::Eq(l, r) } else { Assertion::Leq(l, r) })
        }
        RawAssertion::Pol { name, pos, pol } => match sig.const_type(name) {
            None => Err(Diagnostic::error(
                *pos,
                DiagKind::UndeclaredName,
                format!("undeclared constant `{name}`"),
            )),
            Some(ty) if !ty.is_arrow() => Err(Diagnostic::error(
                *pos,
                DiagKind::Type,
                format!("polarity of `{name}` requires a function type, it has type {ty}"),
            )),
            Some(_) => Ok(Assertion::Pol(name.clone(), *pol)),
        },
    }
}

fn elaborate(decls: Vec<Decl>) -> (Theory, Vec<Assertion>, Vec<Diagnostic>) {
    let mut diags = Vec::new();
    let mut bases = BTreeSet::new();
    let mut builder = SignatureBuilder::new();
    for d in &decls {
        if let Decl::Base { name: (n, p), .. } = d {
            if !bases.insert(n.clone()) {
                diags.push(Diagnostic::error(
                    *p,
                    DiagKind::Duplicate,
                    format!("base type `{n}` declared twice"),
                ));
            }
            builder.add_base(n);
        }
    }
    // Constants, in order of appearance.
    let mut consts: BTreeMap<String, SimpleType> = BTreeMap::new();
    let mut declare = |name: &Named, ty: SimpleType, plus: bool, minus: bool, diags: &mut Vec<Diagnostic>| {
        let (n, p) = name;
        if consts.contains_key(n) {
            diags.push(Diagnostic::error(
                *p,
                DiagKind::Duplicate,
                format!("constant `{n}` is declared more than once"),
            ));
            return;
        }
        if (plus || minus) && !ty.is_arrow() {
            diags.push(Diagnostic::error(
                *p,
                DiagKind::Signature,
                format!("constant `{n}` of base type {ty} cannot carry a polarity tag"),
            ));
        }
        consts.insert(n.clone(), ty.clone());
        builder.add_constant(n, ty, plus, minus);
    };
    for d in &decls {
        match d {
            Decl::Base { name, elems, .. } => {
                for e in elems {
                    declare(e, SimpleType::base(name.0.clone()), false, false, &mut diags);
                }
            }
            Decl::Const { name, ty, plus, minus } => {
                if let Some(ty) = resolve_type(ty, &bases, &mut diags) {
                    declare(name, ty, *plus, *minus, &mut diags);
                }
            }
            _ => {}
        }
    }
    let mut order_pairs = Vec::new();
    for d in &decls {
        match d {
            Decl::Base { name, orders, .. } => {
                for (lo, hi) in orders {
                    for (n, p) in [lo, hi] {
                        if consts.get(n).is_some_and(|t| *t != SimpleType::base(name.0.clone())) {
                            diags.push(Diagnostic::error(
                                *p,
                                DiagKind::Type,
                                format!("`{n}` is not an element of base type `{}`", name.0),
                            ));
                        }
                    }
                    order_pairs.push((lo.clone(), hi.clone()));
                }
            }
            Decl::Order { lo, hi } => order_pairs.push((lo.clone(), hi.clone())),
            _ => {}
        }
    }
    for ((f, fp), (g, gp)) in &order_pairs {
        let mut ok = true;
        for (n, p) in [(f, fp), (g, gp)] {
            if !consts.contains_key(n) {
                diags.push(Diagnostic::error(
                    *p,
                    DiagKind::UndeclaredName,
                    format!("undeclared constant `{n}`"),
                ));
                ok = false;
            }
        }
        if ok && consts[f] != consts[g] {
            diags.push(Diagnostic::error(
                *gp,
                DiagKind::Type,
                format!("cannot order `{f}` : {} below `{g}` : {}", consts[f], consts[g]),
            ));
            ok = false;
        }
        if ok {
            builder.add_order(f, g);
        }
    }
    let first_pos = first_pos(&decls);
    if diags.iter().any(|d| d.is_error()) {
        return (Theory::default(), Vec::new(), diags);
    }
    let signature = match builder.build() {
        Ok(s) => s,
        Err(e) => {
            diags.push(Diagnostic::error(first_pos, DiagKind::Signature, e.to_string()));
            return (Theory::default(), Vec::new(), diags);
        }
    };
    for f in validate_signature(&signature) {
        diags.push(Diagnostic::error(first_pos, DiagKind::Signature, f.message));
    }
    let mut axioms = Vec::new();
    let mut goals = Vec::new();
    let mut seen = HashSet::new();
    for d in &decls {
        match d {
            Decl::Axiom { body, pos } => match resolve_assertion(body, &signature) {
                Ok(a) => {
                    if !seen.insert(a.clone()) {
                        diags.push(Diagnostic::warning(
                            *pos,
                            DiagKind::Duplicate,
                            format!("axiom `{a}` repeated"),
                        ));
                    }
                    axioms.push(a)
                }
                Err(e) => diags.push(e),
            },
            Decl::Goal { body, .. } => match resolve_assertion(body, &signature) {
                Ok(a) => goals.push(a),
                Err(e) => diags.push(e),
            },
            _ => {}
        }
    }
    (Theory::new(signature, axioms), goals, diags)
}

fn first_pos(decls: &[Decl]) -> Pos {
    decls
        .first()
        .map(|d| match d {
            Decl::Base { name, .. } | Decl::Const { name, .. } => name.1,
            Decl::Order { lo, .. } => lo.1,
            Decl::Axiom { pos, .. } | Decl::Goal { pos, .. } => *pos,
        })
        .unwrap_or(Pos::START)
}

/// Parses a single term against a signature.
pub fn parse_term(text: &str, sig: &Signature) -> Result<Term, Vec<Diagnostic>> {
    let toks = lex(text).map_err(|d| vec![d])?;
    let mut c = Cursor::new(&toks, end_pos(text));
    let raw = term_syntax(&mut c).map_err(|d| vec![d])?;
    if !c.at_end() {
        return Err(vec![c.unexpected("end of input")]);
    }
    resolve_term(&raw, sig).map_err(|d| vec![d])
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) const KEY: &str = "\
# f+ <= g-, a <= c >= b  |-  f a <= g b
base b { elems a b c; }
base t { }
const f : b -> t [+];
const g : b -> t [-];
order f <= g;
axiom a <= c;
axiom b <= c;
goal f a <= g b;
";

    #[test]
    fn key_problem() {
        let p = parse_problem(KEY).unwrap();
        let sig = &p.theory.signature;
        assert_eq!(sig.num_constants(), 5);
        assert!(sig.sig_leq("f", "g") && !sig.sig_leq("g", "f"));
        assert!(sig.has_tag("f", Polarity::Plus) && sig.has_tag("g", Polarity::Minus));
        assert_eq!(p.theory.axioms.len(), 2);
        assert_eq!(p.goals[0].to_string(), "f a <= g b");
        assert!(p.warnings.is_empty());
    }

    #[test]
    fn empty_file() {
        let p = parse_problem("  # nothing\n").unwrap();
        assert_eq!(p.theory, Theory::default());
        assert!(p.goals.is_empty());
    }

    #[test]
    fn leq_between_types_is_a_type_error() {
        let src = "base b { elems a; } base t { } const f : b -> t; axiom a <= f;";
        let errs = parse_problem(src).unwrap_err();
        assert_eq!(errs.len(), 1);
        assert_eq!(errs[0].kind, DiagKind::Type);
        assert_eq!(errs[0].pos, Pos { line: 1, col: 61 });
    }

    #[test]
    fn diagnostics() {
        let cases = [
            ("base b { elems a; } const x : c;", DiagKind::UndeclaredName),
            ("base b { elems a a; }", DiagKind::Duplicate),
            ("base b { elems a; } const x : b [+];", DiagKind::Signature),
            ("base b { elems a; } axiom a a <= a;", DiagKind::Type),
            ("base b { elems a; } goal q <= a;", DiagKind::UndeclaredName),
            ("base b { elems a; } goal a +;", DiagKind::Type),
            ("base b { elems a; } base t { elems u; } order a <= u;", DiagKind::Type),
            ("base b { elems a } ", DiagKind::Syntax),
            ("axiom a <= ;", DiagKind::Syntax),
            ("frobnicate;", DiagKind::Syntax),
        ];
        for (src, kind) in cases {
            let errs = parse_problem(src).unwrap_err();
            assert_eq!(errs[0].kind, kind, "{src}: {errs:?}");
        }
    }

    #[test]
    fn repeated_axiom_warns() {
        let p = parse_problem("base b { elems a c; } axiom a <= c; axiom a <= c;").unwrap();
        assert_eq!(p.warnings.len(), 1);
    }

    #[test]
    fn constants_may_be_declared_after_use() {
        let p = parse_problem("axiom h a <= a; const h : b -> b [+-]; base b { elems a; }").unwrap();
        assert!(p.theory.signature.has_tag("h", Polarity::Minus));
        assert_eq!(p.theory.axioms[0].to_string(), "h a <= a");
    }

    #[test]
    fn term_parsing() {
        let p = parse_problem("base b { elems a; } base t { } const phi : t -> b -> t [-]; const f : b -> t;").unwrap();
        let t = parse_term("phi (f a) a", &p.theory.signature).unwrap();
        assert_eq!(t.to_string(), "phi (f a) a");
        assert_eq!(*t.ty(), SimpleType::base("t"));
        assert!(parse_term("a a", &p.theory.signature).is_err());
    }
}
