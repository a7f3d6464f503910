use super::{DiagKind, Diagnostic, Pos};

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    Nat(u64),
    LParen,
    RParen,
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    Semi,
    Colon,
    Comma,
    Leq,
    Equals,
    Arrow,
    Plus,
    Minus,
    Star,
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Nat(n) => format!("`{n}`"),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBrace => "`{`".into(),
            Tok::RBrace => "`}`".into(),
            Tok::LBracket => "`[`".into(),
            Tok::RBracket => "`]`".into(),
            Tok::Semi => "`;`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Leq => "`<=`".into(),
            Tok::Equals => "`=`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Token {
    pub tok: Tok,
    pub pos: Pos,
    /// Byte offsets, used to detect glued tokens such as `pol+`.
    pub start: usize,
    pub end: usize,
}

fn ident_start(c: char) -> bool {
    c.is_alphabetic() || c == '_'
}

fn ident_continue(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\''
}

/// Splits `text` into tokens. `#` starts a comment running to end of line.
/// `≤` and `→` are accepted for `<=` and `->`.
pub(crate) fn lex(text: &str) -> Result<Vec<Token>, Diagnostic> {
    let mut out = Vec::new();
    let mut line = 1;
    let mut col = 1;
    let mut it = text.char_indices().peekable();
    while let Some(&(i, c)) = it.peek() {
        let pos = Pos { line, col };
        if c == '\n' {
            it.next();
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            it.next();
            col += 1;
            continue;
        }
        if c == '#' {
            while let Some(&(_, c)) = it.peek() {
                if c == '\n' {
                    break;
                }
                it.next();
            }
            continue;
        }
        let mut take = |it: &mut std::iter::Peekable<std::str::CharIndices>, n: usize| {
            let mut end = i;
            for _ in 0..n {
                let (j, ch) = it.next().expect("peeked");
                end = j + ch.len_utf8();
                col += 1;
            }
            end
        };
        let next_is = |it: &std::iter::Peekable<std::str::CharIndices>, want: char| {
            let mut clone = it.clone();
            clone.next();
            clone.peek().map(|&(_, ch)| ch) == Some(want)
        };
        let (tok, end) = if ident_start(c) {
            let mut s = String::new();
            let mut end = i;
            while let Some(&(j, ch)) = it.peek() {
                if !ident_continue(ch) {
                    break;
                }
                s.push(ch);
                end = j + ch.len_utf8();
                it.next();
                col += 1;
            }
            (Tok::Ident(s), end)
        } else if c.is_ascii_digit() {
            let mut s = String::new();
            let mut end = i;
            while let Some(&(j, ch)) = it.peek() {
                if !ch.is_ascii_digit() {
                    break;
                }
                s.push(ch);
                end = j + 1;
                it.next();
                col += 1;
            }
            if it.peek().is_some_and(|&(_, ch)| ident_continue(ch)) {
                return Err(Diagnostic::error(
                    pos,
                    DiagKind::Lexical,
                    "identifiers cannot start with a digit",
                ));
            }
            match s.parse() {
                Ok(n) => (Tok::Nat(n), end),
                Err(_) => {
                    return Err(Diagnostic::error(
                        pos,
                        DiagKind::Lexical,
                        format!("number `{s}` is too large"),
                    ))
                }
            }
        } else {
            match c {
                '(' => (Tok::LParen, take(&mut it, 1)),
                ')' => (Tok::RParen, take(&mut it, 1)),
                '{' => (Tok::LBrace, take(&mut it, 1)),
                '}' => (Tok::RBrace, take(&mut it, 1)),
                '[' => (Tok::LBracket, take(&mut it, 1)),
                ']' => (Tok::RBracket, take(&mut it, 1)),
                ';' => (Tok::Semi, take(&mut it, 1)),
                ':' => (Tok::Colon, take(&mut it, 1)),
                ',' => (Tok::Comma, take(&mut it, 1)),
                '=' => (Tok::Equals, take(&mut it, 1)),
                '+' => (Tok::Plus, take(&mut it, 1)),
                '*' => (Tok::Star, take(&mut it, 1)),
                '≤' => (Tok::Leq, take(&mut it, 1)),
                '→' => (Tok::Arrow, take(&mut it, 1)),
                '<' if next_is(&it, '=') => (Tok::Leq, take(&mut it, 2)),
                '-' if next_is(&it, '>') => (Tok::Arrow, take(&mut it, 2)),
                '-' => (Tok::Minus, take(&mut it, 1)),
                other => {
                    return Err(Diagnostic::error(
                        pos,
                        DiagKind::Lexical,
                        format!("unexpected character `{other}`"),
                    ))
                }
            }
        };
        out.push(Token {
            tok,
            pos,
            start: i,
            end,
        });
    }
    Ok(out)
}

/// Position just past the last token, for "unexpected end of input".
pub(crate) fn end_pos(text: &str) -> Pos {
    let mut line = 1;
    let mut col = 1;
    for c in text.chars() {
        if c == '\n' {
            line += 1;
            col = 1;
        } else {
            col += 1;
        }
    }
    Pos { line, col }
}

/// A cursor over a token stream with shared error helpers.
pub(crate) struct Cursor<'a> {
    toks: &'a [Token],
    i: usize,
    eof: Pos,
}

impl<'a> Cursor<'a> {
    pub(crate) fn new(toks: &'a [Token], eof: Pos) -> Self {
        Cursor { toks, i: 0, eof }
    }

    pub(crate) fn peek(&self) -> Option<&'a Token> {
        self.toks.get(self.i)
    }

    pub(crate) fn peek_tok(&self) -> Option<&'a Tok> {
        self.peek().map(|t| &t.tok)
    }

    pub(crate) fn at_end(&self) -> bool {
        self.i >= self.toks.len()
    }

    pub(crate) fn pos(&self) -> Pos {
        self.peek().map(|t| t.pos).unwrap_or(self.eof)
    }

    pub(crate) fn bump(&mut self) -> Option<&'a Token> {
        let t = self.toks.get(self.i);
        if t.is_some() {
            self.i += 1;
        }
        t
    }

    pub(crate) fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek_tok() == Some(tok) {
            self.i += 1;
            true
        } else {
            false
        }
    }

    pub(crate) fn is_keyword(&self, kw: &str) -> bool {
        matches!(self.peek_tok(), Some(Tok::Ident(s)) if s == kw)
    }

    pub(crate) fn unexpected(&self, wanted: &str) -> Diagnostic {
        match self.peek() {
            Some(t) => Diagnostic::error(
                t.pos,
                DiagKind::Syntax,
                format!("expected {wanted}, found {}", t.tok.describe()),
            ),
            None => Diagnostic::error(
                self.eof,
                DiagKind::Syntax,
                format!("expected {wanted}, found end of input"),
            ),
        }
    }

    pub(crate) fn expect(&mut self, tok: &Tok) -> Result<&'a Token, Diagnostic> {
        if self.peek_tok() == Some(tok) {
            Ok(self.bump().expect("peeked"))
        } else {
            Err(self.unexpected(&tok.describe()))
        }
    }

    pub(crate) fn ident(&mut self) -> Result<(String, Pos), Diagnostic> {
        match self.peek() {
            Some(Token {
                tok: Tok::Ident(s),
                pos,
                ..
            }) => {
                self.i += 1;
                Ok((s.clone(), *pos))
            }
            _ => Err(self.unexpected("an identifier")),
        }
    }

    pub(crate) fn keyword(&mut self, kw: &str) -> Result<Pos, Diagnostic> {
        if self.is_keyword(kw) {
            Ok(self.bump().expect("peeked").pos)
        } else {
            Err(self.unexpected(&format!("`{kw}`")))
        }
    }

    pub(crate) fn nat(&mut self) -> Result<(u64, Pos), Diagnostic> {
        match self.peek() {
            Some(Token {
                tok: Tok::Nat(n), pos, ..
            }) => {
                self.i += 1;
                Ok((*n, *pos))
            }
            _ => Err(self.unexpected("a number")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kinds(s: &str) -> Vec<Tok> {
        lex(s).unwrap().into_iter().map(|t| t.tok).collect()
    }

    #[test]
    fn arrows_and_minus() {
        assert_eq!(
            kinds("a->b - c <= d"),
            vec![
                Tok::Ident("a".into()),
                Tok::Arrow,
                Tok::Ident("b".into()),
                Tok::Minus,
                Tok::Ident("c".into()),
                Tok::Leq,
                Tok::Ident("d".into()),
            ]
        );
        assert_eq!(kinds("x ≤ y → z"), kinds("x <= y -> z"));
    }

    #[test]
    fn comments_and_positions() {
        let toks = lex("# header\n  φ' (x)\n").unwrap();
        assert_eq!(toks[0].tok, Tok::Ident("φ'".into()));
        assert_eq!(toks[0].pos, Pos { line: 2, col: 3 });
        assert_eq!(toks[1].pos, Pos { line: 2, col: 6 });
    }

    #[test]
    fn bad_characters_carry_positions() {
        let d = lex("a\n  $").unwrap_err();
        assert_eq!(d.pos, Pos { line: 2, col: 3 });
        assert!(lex("3x").is_err());
    }
}
