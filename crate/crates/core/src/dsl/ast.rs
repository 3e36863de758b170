use std::fmt;

use super::expr::{quote, ActionSpec, Cond, IntExpr, Template};
use crate::program::Tag;

/// A reactive expression as written in source.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Rexp(Instr),
    Merge(Box<Expr>, Box<Expr>),
    Rif(Cond, Box<Expr>, Box<Expr>),
    Close(Box<Expr>),
    Loop(Box<Expr>),
    Repeat(i64, Box<Expr>),
    Init(ActionSpec, Box<Expr>),
    Await(Cond, Box<Expr>),
    When(Cond, Box<Expr>),
    Terminate(Cond, Box<Expr>),
    Halt,
    Nothing,
}

/// An instruction of a basic reactive program.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Instr {
    Seq(Vec<Instr>),
    Print(Template),
    Set(String, IntExpr),
    Stop,
    Suspend,
    Activate(Box<Expr>),
    Raise(Tag),
    Handle {
        tag: Tag,
        body: Box<Instr>,
        handler: Box<Instr>,
    },
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Rexp(i) => write!(f, "(rexp {i})"),
            Expr::Merge(a, b) => write!(f, "(merge {a} {b})"),
            Expr::Rif(c, a, b) => write!(f, "(rif {c} {a} {b})"),
            Expr::Close(e) => write!(f, "(close {e})"),
            Expr::Loop(e) => write!(f, "(loop {e})"),
            Expr::Repeat(n, e) => write!(f, "(repeat {n} {e})"),
            Expr::Init(a, e) => write!(f, "(init {a} {e})"),
            Expr::Await(c, e) => write!(f, "(await {c} {e})"),
            Expr::When(c, e) => write!(f, "(when {c} {e})"),
            Expr::Terminate(c, e) => write!(f, "(terminate {c} {e})"),
            Expr::Halt => f.write_str("(halt)"),
            Expr::Nothing => f.write_str("(nothing)"),
        }
    }
}

impl fmt::Display for Instr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Instr::Seq(items) => {
                f.write_str("(seq")?;
                for i in items {
                    write!(f, " {i}")?;
                }
                f.write_str(")")
            }
            Instr::Print(t) => write!(f, "(print {})", quote(&t.to_string())),
            Instr::Set(n, e) => write!(f, "(set {n} {e})"),
            Instr::Stop => f.write_str("(stop)"),
            Instr::Suspend => f.write_str("(suspend)"),
            Instr::Activate(e) => write!(f, "(activate {e})"),
            Instr::Raise(t) => write!(f, "(raise {t})"),
            Instr::Handle { tag, body, handler } => write!(f, "(handle {tag} {body} {handler})"),
        }
    }
}

/// Source text for `expr`; parsing it gives back an equal tree.
pub fn render(expr: &Expr) -> String {
    expr.to_string()
}
