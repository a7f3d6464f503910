use std::fmt::Write;

use super::preorder_file::{block, block_text};
use super::problem::block_body;
use super::{end_pos, lex, Cursor, DiagKind, Diagnostic, Pos, Tok};
use crate::completion::JoinOracle;
use crate::extension::{Codomain, ExtensionInstance, ExtensionResult};
use crate::preorder::{closure_of_indices, FinPreorder, PolarizedFinPreorder};

/// Text form of an extension instance:
///
/// ```text
/// instance {
///   F { elems f g; order f <= g; plus f; minus g; }
///   S { elems s; }
///   L { elems s' x; order s' <= x; }
///   M* { elems lo hi; order lo <= hi; }
///   j { s -> s'; }
///   p { f = [lo]; g = [1]; }
/// }
/// ```
///
/// `M { … }` must already be complete; `M* { … }` stands for the completion
/// of the given preorder. Table cells are element names of `M` (under `M*`,
/// their embedded images) or indices into the carrier actually used.
pub fn parse_instance(text: &str) -> Result<ExtensionInstance, Vec<Diagnostic>> {
    let toks = lex(text).map_err(|d| vec![d])?;
    let mut c = Cursor::new(&toks, end_pos(text));
    let inst = instance(&mut c).map_err(|d| vec![d])?;
    if !c.at_end() {
        return Err(vec![c.unexpected("end of input")]);
    }
    Ok(inst)
}

enum Cell {
    Index(usize, Pos),
    Name(String, Pos),
}

fn idents_until_semi(c: &mut Cursor) -> Result<Vec<(String, Pos)>, Diagnostic> {
    let mut out = Vec::new();
    while let Some(Tok::Ident(_)) = c.peek_tok() {
        out.push(c.ident()?);
    }
    c.expect(&Tok::Semi)?;
    Ok(out)
}

fn polarized(c: &mut Cursor) -> Result<PolarizedFinPreorder, Diagnostic> {
    let (elems, orders) = block_body(c)?;
    let names: Vec<String> = elems.iter().map(|(n, _)| n.clone()).collect();
    let find = |n: &str, p: Pos| {
        names
            .iter()
            .position(|x| x == n)
            .ok_or_else(|| Diagnostic::error(p, DiagKind::UndeclaredName, format!("unknown element `{n}`")))
    };
    for (k, (e, p)) in elems.iter().enumerate() {
        if names[..k].contains(e) {
            return Err(Diagnostic::error(
                *p,
                DiagKind::Duplicate,
                format!("element `{e}` listed twice"),
            ));
        }
    }
    let mut pairs = Vec::new();
    for ((a, ap), (b, bp)) in &orders {
        pairs.push((find(a, *ap)?, find(b, *bp)?));
    }
    let mut f = PolarizedFinPreorder::untagged(closure_of_indices(names.clone(), &pairs));
    for (kw, plus) in [("plus", true), ("minus", false)] {
        if c.is_keyword(kw) {
            c.bump();
            for (n, p) in idents_until_semi(c)? {
                let i = find(&n, p)?;
                if plus {
                    f.plus.insert(i);
                } else {
                    f.minus.insert(i);
                }
            }
        }
    }
    Ok(f)
}

fn instance(c: &mut Cursor) -> Result<ExtensionInstance, Diagnostic> {
    let start = c.keyword("instance")?;
    c.expect(&Tok::LBrace)?;
    let mut f = None;
    let mut s = None;
    let mut l = None;
    let mut m: Option<(FinPreorder, bool, Pos)> = None;
    let mut j_raw: Vec<((String, Pos), (String, Pos))> = Vec::new();
    let mut p_raw: Vec<((String, Pos), Vec<Cell>)> = Vec::new();
    while !c.eat(&Tok::RBrace) {
        let (sec, pos) = c
            .ident()
            .map_err(|_| c.unexpected("a section (F, S, L, M, j, p) or `}`"))?;
        let dup = |seen: bool| {
            if seen {
                Err(Diagnostic::error(
                    pos,
                    DiagKind::Duplicate,
                    format!("section `{sec}` given twice"),
                ))
            } else {
                Ok(())
            }
        };
        match sec.as_str() {
            "F" => {
                dup(f.is_some())?;
                c.expect(&Tok::LBrace)?;
                f = Some(polarized(c)?);
            }
            "S" | "L" => {
                let slot = if sec == "S" { &mut s } else { &mut l };
                dup(slot.is_some())?;
                c.expect(&Tok::LBrace)?;
                *slot = Some(block(c)?);
            }
            "M" => {
                dup(m.is_some())?;
                let completed = c.eat(&Tok::Star);
                c.expect(&Tok::LBrace)?;
                m = Some((block(c)?, completed, pos));
            }
            "j" => {
                dup(!j_raw.is_empty())?;
                c.expect(&Tok::LBrace)?;
                while let Some(Tok::Ident(_)) = c.peek_tok() {
                    let a = c.ident()?;
                    c.expect(&Tok::Arrow)?;
                    let b = c.ident()?;
                    if !c.eat(&Tok::Semi) {
                        c.eat(&Tok::Comma);
                    }
                    j_raw.push((a, b));
                }
            }
            "p" => {
                dup(!p_raw.is_empty())?;
                c.expect(&Tok::LBrace)?;
                while let Some(Tok::Ident(_)) = c.peek_tok() {
                    let name = c.ident()?;
                    c.expect(&Tok::Equals)?;
                    c.expect(&Tok::LBracket)?;
                    let mut cells = Vec::new();
                    while !c.eat(&Tok::RBracket) {
                        let pos = c.pos();
                        match c.peek_tok() {
                            Some(Tok::Nat(_)) => cells.push(Cell::Index(c.nat()?.0 as usize, pos)),
                            Some(Tok::Ident(_)) => cells.push(Cell::Name(c.ident()?.0, pos)),
                            _ => return Err(c.unexpected("an element of M or `]`")),
                        }
                    }
                    c.expect(&Tok::Semi)?;
                    p_raw.push((name, cells));
                }
            }
            _ => {
                return Err(Diagnostic::error(
                    pos,
                    DiagKind::Syntax,
                    format!("unknown section `{sec}` (expected F, S, L, M, j or p)"),
                ))
            }
        }
        c.expect(&Tok::RBrace)?;
    }
    let missing = |what: &str| Diagnostic::error(start, DiagKind::Format, format!("instance has no `{what}` section"));
    let f = f.ok_or_else(|| missing("F"))?;
    let s = s.ok_or_else(|| missing("S"))?;
    let l = l.ok_or_else(|| missing("L"))?;
    let (m_src, completed, mpos) = m.ok_or_else(|| missing("M"))?;
    let m = if completed {
        Codomain::completed(&m_src)
    } else {
        Codomain::complete(m_src.clone())
    }
    .map_err(|e| Diagnostic::error(mpos, DiagKind::Format, format!("M: {e}")))?;

    let mut j = vec![usize::MAX; s.len()];
    for ((a, ap), (b, bp)) in j_raw {
        let sa = s
            .index_of(&a)
            .ok_or_else(|| Diagnostic::error(ap, DiagKind::UndeclaredName, format!("`{a}` is not in S")))?;
        let lb = l
            .index_of(&b)
            .ok_or_else(|| Diagnostic::error(bp, DiagKind::UndeclaredName, format!("`{b}` is not in L")))?;
        if j[sa] != usize::MAX {
            return Err(Diagnostic::error(
                ap,
                DiagKind::Duplicate,
                format!("j maps `{a}` twice"),
            ));
        }
        j[sa] = lb;
    }
    if let Some(k) = j.iter().position(|&x| x == usize::MAX) {
        return Err(Diagnostic::error(
            start,
            DiagKind::Format,
            format!("j does not map `{}`", s.name(k)),
        ));
    }

    let mut p: Vec<Option<Vec<usize>>> = vec![None; f.len()];
    for ((name, pos), cells) in p_raw {
        let i = f
            .base
            .index_of(&name)
            .ok_or_else(|| Diagnostic::error(pos, DiagKind::UndeclaredName, format!("`{name}` is not in F")))?;
        if p[i].is_some() {
            return Err(Diagnostic::error(
                pos,
                DiagKind::Duplicate,
                format!("p gives `{name}` twice"),
            ));
        }
        if cells.len() != s.len() {
            return Err(Diagnostic::error(
                pos,
                DiagKind::Format,
                format!("p({name}) has {} cells, S has {} elements", cells.len(), s.len()),
            ));
        }
        let mut table = Vec::with_capacity(cells.len());
        for cell in cells {
            table.push(match cell {
                Cell::Index(v, _) if v < m.len() => Ok(v),
                Cell::Index(v, p) => Err(Diagnostic::error(p, DiagKind::Format, format!("M has no element {v}"))),
                Cell::Name(n, p) => {
                    let src = match &m {
                        Codomain::Completed(cr) => cr.source.index_of(&n).map(|i| cr.embed[i]),
                        Codomain::Complete(_) => m.order().index_of(&n),
                    };
                    src.ok_or_else(|| Diagnostic::error(p, DiagKind::UndeclaredName, format!("`{n}` is not in M")))
                }
            }?);
        }
        p[i] = Some(table);
    }
    let p = p
        .into_iter()
        .enumerate()
        .map(|(i, t)| {
            t.ok_or_else(|| {
                Diagnostic::error(
                    start,
                    DiagKind::Format,
                    format!("p gives no table for `{}`", f.base.name(i)),
                )
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ExtensionInstance { f, s, l, m, j, p })
}

fn polarized_text(f: &PolarizedFinPreorder) -> String {
    let mut out = block_text(&f.base);
    out.truncate(out.len() - 2);
    for (kw, set) in [("plus", &f.plus), ("minus", &f.minus)] {
        if !set.is_empty() {
            let names: Vec<&str> = set.iter().map(|&i| f.base.name(i)).collect();
            write!(out, " {kw} {};", names.join(" ")).unwrap();
        }
    }
    out.push_str(" }");
    out
}

/// Canonical text; table cells are written as carrier indices.
pub fn render_instance(inst: &ExtensionInstance) -> String {
    let mut out = String::from("instance {\n");
    writeln!(out, "  F {}", polarized_text(&inst.f)).unwrap();
    writeln!(out, "  S {}", block_text(&inst.s)).unwrap();
    writeln!(out, "  L {}", block_text(&inst.l)).unwrap();
    match &inst.m {
        Codomain::Completed(cr) => writeln!(out, "  M* {}", block_text(&cr.source)).unwrap(),
        Codomain::Complete(c) => writeln!(out, "  M {}", block_text(c.order())).unwrap(),
    }
    let maps: Vec<String> = (0..inst.s.len())
        .map(|k| format!("{} -> {};", inst.s.name(k), inst.l.name(inst.j[k])))
        .collect();
    writeln!(out, "  j {{ {} }}", maps.join(" ")).unwrap();
    out.push_str("  p {");
    for (i, t) in inst.p.iter().enumerate() {
        let cells: Vec<String> = t.iter().map(|v| v.to_string()).collect();
        write!(out, " {} = [{}];", inst.f.base.name(i), cells.join(" ")).unwrap();
    }
    out.push_str(" }\n}\n");
    out
}

/// `q` tables with readable values, followed by the audit set sizes.
pub fn render_extension(inst: &ExtensionInstance, res: &ExtensionResult) -> String {
    let mo = inst.m.order();
    let mut out = String::new();
    for (f, row) in res.q.iter().enumerate() {
        let cells: Vec<&str> = row.iter().map(|&v| mo.name(v)).collect();
        writeln!(out, "q {} = [{}]", inst.f.base.name(f), cells.join(" ")).unwrap();
    }
    writeln!(out, "audit (|A| |B| |C| |D| per point of L):").unwrap();
    for (f, row) in res.audit.iter().enumerate() {
        let cells: Vec<String> = row
            .iter()
            .enumerate()
            .map(|(x, a)| {
                format!(
                    "{}:{}/{}/{}/{}",
                    inst.l.name(x),
                    a.a.len(),
                    a.b.len(),
                    a.c.len(),
                    a.d.len()
                )
            })
            .collect();
        writeln!(out, "  {}: {}", inst.f.base.name(f), cells.join(" ")).unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extension::{extend_interpretation, random_instance, InstanceShape};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const SAMPLE: &str = "instance {
        F { elems f g; order f <= g; plus f; minus g; }
        S { elems s; }
        L { elems s' x; order s' <= x; }
        M* { elems lo hi; order lo <= hi; }
        j { s -> s'; }
        p { f = [lo]; g = [hi]; }
    }";

    #[test]
    fn sample_parses_and_extends() {
        let inst = parse_instance(SAMPLE).unwrap();
        assert_eq!(inst.m.len(), 7);
        let r = extend_interpretation(&inst).unwrap();
        let text = render_extension(&inst, &r);
        assert!(text.starts_with("q f = [({lo},lo) ({lo},lo)]"), "{text}");
    }

    #[test]
    fn round_trip() {
        assert_eq!(
            parse_instance(&render_instance(&parse_instance(SAMPLE).unwrap())).unwrap(),
            parse_instance(SAMPLE).unwrap()
        );
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            if let Some(inst) = random_instance(&mut rng, InstanceShape::default(), 200) {
                assert_eq!(parse_instance(&render_instance(&inst)).unwrap(), inst);
            }
        }
    }

    #[test]
    fn errors() {
        let cases = [
            (
                SAMPLE.replace("M* { elems lo hi; order lo <= hi; }", "M { elems lo hi; }"),
                "not complete",
            ),
            (SAMPLE.replace("s -> s';", ""), "does not map"),
            (SAMPLE.replace("g = [hi];", ""), "no table for `g`"),
            (SAMPLE.replace("[hi]", "[zz]"), "not in M"),
            (SAMPLE.replace("[hi]", "[99]"), "no element 99"),
            (SAMPLE.replace("j {", "q {"), "unknown section"),
        ];
        for (src, needle) in cases {
            let e = parse_instance(&src).unwrap_err();
            assert!(e[0].message.contains(needle), "{}", e[0]);
        }
    }
}
