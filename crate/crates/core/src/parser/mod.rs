//! The problem language, proof files, and the smaller text formats used by
//! the command line (preorders, models, extension instances).
//!
//! Every parser reports positioned [`Diagnostic`]s and every format has a
//! deterministic renderer that the parser reads back to an equal value.

mod instance_file;
mod lexer;
mod model_file;
mod preorder_file;
mod problem;
mod proof_file;
mod render;

use std::fmt;

pub use instance_file::{parse_instance, render_extension, render_instance};
pub use model_file::{parse_model, parse_model_with_budget, render_model};
pub use preorder_file::{parse_preorder, render_preorder};
pub use problem::{parse_problem, parse_problem_named, parse_term, SourceProblem};
pub use proof_file::parse_proof;
pub use render::{render_assertion, render_problem, render_proof, render_term};

pub(crate) use lexer::{end_pos, lex, Cursor, Tok, Token};

/// 1-based line and column (in characters).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl Pos {
    pub const START: Pos = Pos { line: 1, col: 1 };
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DiagKind {
    Lexical,
    Syntax,
    UndeclaredName,
    Type,
    Signature,
    UnknownRule,
    /// A proof leaf `(axiom i)` with no axiom `i`.
    DanglingAxiom,
    /// A proof leaf citing an order or polarity fact the signature lacks.
    FalseFact,
    /// A rule node whose premises cannot produce any conclusion.
    RuleShape,
    Duplicate,
    Format,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub severity: Severity,
    pub pos: Pos,
    pub kind: DiagKind,
    pub message: String,
}

impl Diagnostic {
    pub fn error(pos: Pos, kind: DiagKind, message: impl Into<String>) -> Self {
        Diagnostic {
            severity: Severity::Error,
            pos,
            kind,
            message: message.into(),
        }
    }

    pub fn warning(pos: Pos, kind: DiagKind, message: impl Into<String>) -> Self {
        Diagnostic {
            severity: Severity::Warning,
            pos,
            kind,
            message: message.into(),
        }
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sev = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(f, "{}: {sev}: {}", self.pos, self.message)
    }
}

/// Renders diagnostics one per line, prefixed by a file name.
pub fn format_diagnostics(file: &str, diags: &[Diagnostic]) -> String {
    diags.iter().map(|d| format!("{file}:{d}\n")).collect()
}
