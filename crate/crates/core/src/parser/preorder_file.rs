use std::fmt::Write;

use super::problem::block_body;
use super::{end_pos, lex, Cursor, DiagKind, Diagnostic, Tok};
use crate::preorder::{closure_of_indices, FinPreorder};

/// `preorder NAME { elems a b c; order a <= b; }` — the order is closed
/// reflexively and transitively.
pub fn parse_preorder(text: &str) -> Result<(String, FinPreorder), Vec<Diagnostic>> {
    let toks = lex(text).map_err(|d| vec![d])?;
    let mut c = Cursor::new(&toks, end_pos(text));
    let one = |c: &mut Cursor| -> Result<(String, FinPreorder), Diagnostic> {
        c.keyword("preorder")?;
        let (name, _) = c.ident()?;
        c.expect(&Tok::LBrace)?;
        let body = block(c)?;
        c.expect(&Tok::RBrace)?;
        Ok((name, body))
    };
    let out = one(&mut c).map_err(|d| vec![d])?;
    if !c.at_end() {
        return Err(vec![c.unexpected("end of input")]);
    }
    Ok(out)
}

/// The inside of a `{ elems …; order …; }` block as a preorder.
pub(crate) fn block(c: &mut Cursor) -> Result<FinPreorder, Diagnostic> {
    let (elems, orders) = block_body(c)?;
    let mut names: Vec<String> = Vec::new();
    for (e, p) in &elems {
        if names.contains(e) {
            return Err(Diagnostic::error(
                *p,
                DiagKind::Duplicate,
                format!("element `{e}` listed twice"),
            ));
        }
        names.push(e.clone());
    }
    let mut pairs = Vec::new();
    for ((a, ap), (b, bp)) in &orders {
        let find = |n: &str, p| {
            names
                .iter()
                .position(|x| x == n)
                .ok_or_else(|| Diagnostic::error(p, DiagKind::UndeclaredName, format!("unknown element `{n}`")))
        };
        pairs.push((find(a, *ap)?, find(b, *bp)?));
    }
    Ok(closure_of_indices(names, &pairs))
}

pub(crate) fn block_text(p: &FinPreorder) -> String {
    let mut out = String::from("{");
    if !p.is_empty() {
        write!(out, " elems {};", p.elements().join(" ")).unwrap();
    }
    let pairs = p.strict_pairs();
    if !pairs.is_empty() {
        let ps: Vec<String> = pairs
            .iter()
            .map(|&(i, j)| format!("{} <= {}", p.name(i), p.name(j)))
            .collect();
        write!(out, " order {};", ps.join(" ")).unwrap();
    }
    out.push_str(" }");
    out
}

pub fn render_preorder(name: &str, p: &FinPreorder) -> String {
    format!("preorder {name} {}\n", block_text(p))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let (name, p) = parse_preorder("preorder V { elems a b c; order a <= c, b <= c; }").unwrap();
        assert_eq!(name, "V");
        assert!(p.leq(0, 2) && p.leq(1, 2) && !p.leq(0, 1));
        let again = parse_preorder(&render_preorder(&name, &p)).unwrap();
        assert_eq!(again.1, p);
        let (_, empty) = parse_preorder("preorder E { }").unwrap();
        assert!(empty.is_empty());
        assert_eq!(parse_preorder(&render_preorder("E", &empty)).unwrap().1, empty);
    }

    #[test]
    fn closure_and_errors() {
        let (_, p) = parse_preorder("preorder C { elems x y z; order x <= y y <= z; }").unwrap();
        assert!(p.leq(0, 2));
        assert!(parse_preorder("preorder C { elems x; order x <= q; }").is_err());
        assert!(parse_preorder("preorder C { elems x x; }").is_err());
    }
}
