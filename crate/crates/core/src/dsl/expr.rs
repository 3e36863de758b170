//! Conditions, integer expressions and host actions over a [`World`].

use std::fmt;

use super::world::World;
use crate::program::{HostAction, Tag};

/// Boolean test evaluated against the world. Evaluation never mutates it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Cond {
    True,
    False,
    Sig(String),
    Not(Box<Cond>),
    And(Vec<Cond>),
    Or(Vec<Cond>),
    Eq(IntExpr, IntExpr),
    Lt(IntExpr, IntExpr),
    Le(IntExpr, IntExpr),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IntExpr {
    Lit(i64),
    Cell(String),
    Value(String),
    Add(Box<IntExpr>, Box<IntExpr>),
    Sub(Box<IntExpr>, Box<IntExpr>),
    Mul(Box<IntExpr>, Box<IntExpr>),
    Neg(Box<IntExpr>),
}

impl Cond {
    pub fn sig(name: impl Into<String>) -> Self {
        Cond::Sig(name.into())
    }

    pub fn eval(&self, world: &World) -> bool {
        match self {
            Cond::True => true,
            Cond::False => false,
            Cond::Sig(name) => world.signal(name),
            Cond::Not(c) => !c.eval(world),
            Cond::And(cs) => cs.iter().all(|c| c.eval(world)),
            Cond::Or(cs) => cs.iter().any(|c| c.eval(world)),
            Cond::Eq(a, b) => a.eval(world) == b.eval(world),
            Cond::Lt(a, b) => a.eval(world) < b.eval(world),
            Cond::Le(a, b) => a.eval(world) <= b.eval(world),
        }
    }
}

impl IntExpr {
    pub fn cell(name: impl Into<String>) -> Self {
        IntExpr::Cell(name.into())
    }

    pub fn value(name: impl Into<String>) -> Self {
        IntExpr::Value(name.into())
    }

    /// Arithmetic wraps on overflow so evaluation stays total.
    pub fn eval(&self, world: &World) -> i64 {
        match self {
            IntExpr::Lit(n) => *n,
            IntExpr::Cell(name) => world.cell(name),
            IntExpr::Value(name) => world.value(name),
            IntExpr::Add(a, b) => a.eval(world).wrapping_add(b.eval(world)),
            IntExpr::Sub(a, b) => a.eval(world).wrapping_sub(b.eval(world)),
            IntExpr::Mul(a, b) => a.eval(world).wrapping_mul(b.eval(world)),
            IntExpr::Neg(a) => a.eval(world).wrapping_neg(),
        }
    }
}

pub fn eval_cond(cond: &Cond, world: &World) -> bool {
    cond.eval(world)
}

pub fn eval_int(expr: &IntExpr, world: &World) -> i64 {
    expr.eval(world)
}

/// A piece of a print template.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Segment {
    Lit(String),
    Cell(String),
    Value(String),
}

/// Print text with `{cell:name}` / `{value:name}` holes. `{{` and `}}`
/// stand for literal braces.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Template {
    segments: Vec<Segment>,
}

impl Template {
    pub fn literal(text: impl Into<String>) -> Self {
        let text = text.into();
        let segments = if text.is_empty() {
            Vec::new()
        } else {
            vec![Segment::Lit(text)]
        };
        Template { segments }
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn parse(src: &str) -> Result<Self, String> {
        let mut segments = Vec::new();
        let mut lit = String::new();
        let mut chars = src.chars().peekable();
        while let Some(c) = chars.next() {
            match c {
                '{' if chars.peek() == Some(&'{') => {
                    chars.next();
                    lit.push('{');
                }
                '}' if chars.peek() == Some(&'}') => {
                    chars.next();
                    lit.push('}');
                }
                '{' => {
                    let mut hole = String::new();
                    loop {
                        match chars.next() {
                            Some('}') => break,
                            Some(c) => hole.push(c),
                            None => return Err(format!("unterminated hole `{{{hole}`")),
                        }
                    }
                    let seg = match hole.split_once(':') {
                        Some(("cell", name)) if is_ident(name) => Segment::Cell(name.to_string()),
                        Some(("value", name)) if is_ident(name) => Segment::Value(name.to_string()),
                        _ => return Err(format!("bad template hole `{{{hole}}}`")),
                    };
                    if !lit.is_empty() {
                        segments.push(Segment::Lit(std::mem::take(&mut lit)));
                    }
                    segments.push(seg);
                }
                '}' => return Err("unmatched `}` in template".to_string()),
                c => lit.push(c),
            }
        }
        if !lit.is_empty() {
            segments.push(Segment::Lit(lit));
        }
        Ok(Template { segments })
    }

    pub fn render(&self, world: &World) -> String {
        let mut out = String::new();
        for seg in &self.segments {
            match seg {
                Segment::Lit(s) => out.push_str(s),
                Segment::Cell(n) => out.push_str(&world.cell(n).to_string()),
                Segment::Value(n) => out.push_str(&world.value(n).to_string()),
            }
        }
        out
    }
}

/// Template source text, the inverse of [`Template::parse`].
impl fmt::Display for Template {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for seg in &self.segments {
            match seg {
                Segment::Lit(s) => f.write_str(&s.replace('{', "{{").replace('}', "}}"))?,
                Segment::Cell(n) => write!(f, "{{cell:{n}}}")?,
                Segment::Value(n) => write!(f, "{{value:{n}}}")?,
            }
        }
        Ok(())
    }
}

pub(crate) fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
}

/// Effectful atom: printing, cell assignment, raising a tag.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ActionSpec {
    Print(Template),
    SetCell(String, IntExpr),
    Raise(Tag),
    Seq(Vec<ActionSpec>),
}

impl ActionSpec {
    pub fn run(&self, world: &mut World) -> Result<(), Tag> {
        match self {
            ActionSpec::Print(t) => {
                let line = t.render(world);
                world.emit(line);
            }
            ActionSpec::SetCell(name, e) => {
                let v = e.eval(world);
                world.set_cell(name.clone(), v);
            }
            ActionSpec::Raise(tag) => return Err(tag.clone()),
            ActionSpec::Seq(items) => {
                for a in items {
                    a.run(world)?;
                }
            }
        }
        Ok(())
    }

    pub fn into_host_action(self) -> HostAction {
        HostAction::new(move |w| self.run(w))
    }
}

macro_rules! render_binop {
    ($f:expr, $op:literal, $a:expr, $b:expr) => {
        write!($f, concat!("(", $op, " {} {})"), $a, $b)
    };
}

impl fmt::Display for IntExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IntExpr::Lit(n) => write!(f, "{n}"),
            IntExpr::Cell(n) => write!(f, "(cell {n})"),
            IntExpr::Value(n) => write!(f, "(value {n})"),
            IntExpr::Add(a, b) => render_binop!(f, "+", a, b),
            IntExpr::Sub(a, b) => render_binop!(f, "-", a, b),
            IntExpr::Mul(a, b) => render_binop!(f, "*", a, b),
            IntExpr::Neg(a) => write!(f, "(neg {a})"),
        }
    }
}

impl fmt::Display for Cond {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cond::True => f.write_str("true"),
            Cond::False => f.write_str("false"),
            Cond::Sig(n) => write!(f, "(sig {n})"),
            Cond::Not(c) => write!(f, "(not {c})"),
            Cond::And(cs) | Cond::Or(cs) => {
                f.write_str(if matches!(self, Cond::And(_)) {
                    "(and"
                } else {
                    "(or"
                })?;
                for c in cs {
                    write!(f, " {c}")?;
                }
                f.write_str(")")
            }
            Cond::Eq(a, b) => render_binop!(f, "=", a, b),
            Cond::Lt(a, b) => render_binop!(f, "<", a, b),
            Cond::Le(a, b) => render_binop!(f, "<=", a, b),
        }
    }
}

pub(crate) fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

impl fmt::Display for ActionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ActionSpec::Print(t) => write!(f, "(print {})", quote(&t.to_string())),
            ActionSpec::SetCell(n, e) => write!(f, "(set {n} {e})"),
            ActionSpec::Raise(t) => write!(f, "(raise {t})"),
            ActionSpec::Seq(items) => {
                f.write_str("(seq")?;
                for a in items {
                    write!(f, " {a}")?;
                }
                f.write_str(")")
            }
        }
    }
}
