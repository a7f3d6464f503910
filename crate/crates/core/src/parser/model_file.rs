use std::collections::BTreeMap;
use std::fmt::Write;
use std::sync::Arc;

use super::preorder_file::{block, block_text};
use super::{end_pos, lex, Cursor, DiagKind, Diagnostic, Pos, Tok};
use crate::semantics::{FullStructure, Model, DEFAULT_CELL_BUDGET};
use crate::theory::Theory;

/// Text form of a model:
///
/// ```text
/// model {
///   base p { elems e0 e1 e2; order e0 <= e2; }
///   const a = 0;
///   const f = [1 0 0];
/// }
/// ```
///
/// Base constants get an element index, arrow constants a table of
/// codomain indices in domain order. Comments show the order matrices and
/// readable values; the parser ignores them.
pub fn render_model(m: &Model) -> String {
    let mut out = String::from("model {\n");
    for (name, p) in m.structure.bases() {
        writeln!(out, "  base {name} {}", block_text(p)).unwrap();
        for i in 0..p.len() {
            let row: String = (0..p.len()).map(|j| if p.leq(i, j) { '1' } else { '0' }).collect();
            writeln!(out, "  #   {} | {row}", p.name(i)).unwrap();
        }
    }
    for (name, &e) in &m.interp {
        let ty = &m.types[name];
        let sp = m.structure.space(ty).ok();
        let value = match &sp {
            Some(sp) if ty.is_arrow() => {
                let cells: Vec<String> = sp.table(e).iter().map(|v| v.to_string()).collect();
                format!("[{}]", cells.join(" "))
            }
            _ => e.to_string(),
        };
        let shown = sp.map(|sp| sp.describe(e)).unwrap_or_default();
        writeln!(out, "  const {name} = {value};  # {ty} = {shown}").unwrap();
    }
    out.push_str("}\n");
    out
}

/// Reads a model of `thy`'s signature. Every base and constant of the
/// signature must be present; whether the result is a model of `thy` is
/// left to the caller.
pub fn parse_model(text: &str, thy: &Theory) -> Result<Model, Vec<Diagnostic>> {
    parse_model_with_budget(text, thy, DEFAULT_CELL_BUDGET)
}

pub fn parse_model_with_budget(text: &str, thy: &Theory, cell_budget: u64) -> Result<Model, Vec<Diagnostic>> {
    let toks = lex(text).map_err(|d| vec![d])?;
    let mut c = Cursor::new(&toks, end_pos(text));
    body(&mut c, thy, cell_budget).map_err(|d| vec![d])
}

enum Value {
    Index(usize),
    Table(Vec<usize>),
}

fn body(c: &mut Cursor, thy: &Theory, cell_budget: u64) -> Result<Model, Diagnostic> {
    let sig = &thy.signature;
    let start = c.keyword("model")?;
    c.expect(&Tok::LBrace)?;
    let mut bases = BTreeMap::new();
    let mut consts: Vec<(String, Pos, Value)> = Vec::new();
    while !c.eat(&Tok::RBrace) {
        if c.is_keyword("base") {
            c.bump();
            let (name, pos) = c.ident()?;
            if !sig.bases().contains(&name) {
                return Err(Diagnostic::error(
                    pos,
                    DiagKind::UndeclaredName,
                    format!("unknown base type `{name}`"),
                ));
            }
            c.expect(&Tok::LBrace)?;
            let p = block(c)?;
            c.expect(&Tok::RBrace)?;
            if bases.insert(name.clone(), p).is_some() {
                return Err(Diagnostic::error(
                    pos,
                    DiagKind::Duplicate,
                    format!("base `{name}` given twice"),
                ));
            }
        } else if c.is_keyword("const") {
            c.bump();
            let (name, pos) = c.ident()?;
            c.expect(&Tok::Equals)?;
            let value = if c.eat(&Tok::LBracket) {
                let mut cells = Vec::new();
                while !c.eat(&Tok::RBracket) {
                    cells.push(c.nat()?.0 as usize);
                }
                Value::Table(cells)
            } else {
                Value::Index(c.nat()?.0 as usize)
            };
            c.expect(&Tok::Semi)?;
            if consts.iter().any(|(n, _, _)| *n == name) {
                return Err(Diagnostic::error(
                    pos,
                    DiagKind::Duplicate,
                    format!("constant `{name}` given twice"),
                ));
            }
            consts.push((name, pos, value));
        } else {
            return Err(c.unexpected("`base`, `const` or `}`"));
        }
    }
    if !c.at_end() {
        return Err(c.unexpected("end of input"));
    }
    if let Some(b) = sig.bases().iter().find(|b| !bases.contains_key(*b)) {
        return Err(Diagnostic::error(
            start,
            DiagKind::Format,
            format!("model gives no preorder for base `{b}`"),
        ));
    }
    let structure = Arc::new(FullStructure::with_budget(bases, cell_budget));
    let mut m = Model::new(structure.clone());
    for (name, pos, value) in consts {
        let ty = sig
            .const_type(&name)
            .ok_or_else(|| Diagnostic::error(pos, DiagKind::UndeclaredName, format!("undeclared constant `{name}`")))?;
        let sp = structure
            .space(ty)
            .map_err(|e| Diagnostic::error(pos, DiagKind::Format, e.to_string()))?;
        let e = match value {
            Value::Index(e) if !ty.is_arrow() && e < sp.len() => e,
            Value::Table(t) if ty.is_arrow() => sp.from_table(&t).ok_or_else(|| {
                Diagnostic::error(
                    pos,
                    DiagKind::Format,
                    format!("`{name}`: not a table of the space at {ty}"),
                )
            })?,
            _ => {
                return Err(Diagnostic::error(
                    pos,
                    DiagKind::Format,
                    format!(
                        "`{name}`: expected {} for type {ty}",
                        if ty.is_arrow() {
                            "a table"
                        } else {
                            "an element index in range"
                        }
                    ),
                ))
            }
        };
        m.set(&name, ty.clone(), e);
    }
    if let Some((n, _)) = sig.constants().into_iter().find(|(n, _)| m.get(n).is_none()) {
        return Err(Diagnostic::error(
            start,
            DiagKind::Format,
            format!("model does not interpret `{n}`"),
        ));
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_problem;
    use crate::semantics::{find_countermodel, ModelFilter, SizeBounds};

    const SRC: &str = "base p { elems a b c; } base q { }
        const f : p -> q [-]; const g : p -> q [+]; order f <= g;
        axiom a <= c; axiom b <= c; goal f a <= g b;";

    #[test]
    fn round_trip() {
        let sp = parse_problem(SRC).unwrap();
        let m = find_countermodel(&sp.theory, &sp.goals[0], &SizeBounds::default(), ModelFilter::default());
        let m = m.model().unwrap();
        let text = render_model(m);
        let back = parse_model(&text, &sp.theory).unwrap();
        assert_eq!(&back, m);
        assert_eq!(render_model(&back), text);
    }

    #[test]
    fn errors() {
        let thy = parse_problem(SRC).unwrap().theory;
        let base = "model { base p { elems x; } base q { elems y; }";
        let cases = [
            (
                format!("{base} const a = 0; const b = 0; const c = 0; const f = [0]; }}"),
                "does not interpret `g`",
            ),
            (format!("{base} const a = 3; }}"), "element index"),
            (format!("{base} const f = [0 0]; }}"), "not a table"),
            (format!("{base} const zz = 0; }}"), "undeclared"),
            ("model { base p { elems x; } }".to_string(), "no preorder for base `q`"),
        ];
        for (src, needle) in cases {
            let e = parse_model(&src, &thy).unwrap_err();
            assert!(e[0].message.contains(needle), "{src}: {}", e[0]);
        }
    }
}
