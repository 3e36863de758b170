//! Reader for the parenthesized program syntax.
//!
//! ```text
//! expr   := (rexp instr...) | (merge expr expr) | (par expr...)
//!         | (rif cond expr expr) | (close expr) | (loop expr)
//!         | (repeat INT expr) | (init action expr) | (await cond expr)
//!         | (when cond expr) | (terminate cond expr) | (halt) | (nothing)
//! instr  := (seq instr...) | (print STR) | (set NAME int) | (stop)
//!         | (suspend) | (activate expr) | (raise TAG)
//!         | (handle TAG instr [instr])
//! action := (print STR) | (set NAME int) | (raise TAG) | (seq action...)
//! cond   := true | false | (sig NAME) | (not cond) | (and cond...)
//!         | (or cond...) | (= int int) | (< int int) | (<= int int)
//! int    := INT | (cell NAME) | (value NAME) | (+ int int) | (- int int)
//!         | (- int) | (neg int) | (* int int)
//! ```
//!
//! `;` starts a comment running to the end of the line.

use super::ast::{Expr, Instr};
use super::expr::{is_ident, ActionSpec, Cond, IntExpr, Template};
use super::DslError;
use crate::program::Tag;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Pos {
    line: usize,
    col: usize,
}

#[derive(Debug, Clone, PartialEq)]
enum Datum {
    List(Vec<Sexp>),
    Sym(String),
    Int(i64),
    Str(String),
}

#[derive(Debug, Clone, PartialEq)]
struct Sexp {
    datum: Datum,
    pos: Pos,
}

fn parse_err(pos: Pos, msg: impl Into<String>) -> DslError {
    DslError::Parse {
        line: pos.line,
        col: pos.col,
        msg: msg.into(),
    }
}

struct Reader<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    pos: Pos,
}

impl<'a> Reader<'a> {
    fn new(src: &'a str) -> Self {
        Reader {
            chars: src.chars().peekable(),
            pos: Pos { line: 1, col: 1 },
        }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.pos.line += 1;
            self.pos.col = 1;
        } else {
            self.pos.col += 1;
        }
        Some(c)
    }

    fn skip_trivia(&mut self) {
        while let Some(&c) = self.chars.peek() {
            if c == ';' {
                while self.chars.peek().is_some_and(|&c| c != '\n') {
                    self.bump();
                }
            } else if c.is_whitespace() {
                self.bump();
            } else {
                break;
            }
        }
    }

    fn at_eof(&mut self) -> bool {
        self.skip_trivia();
        self.chars.peek().is_none()
    }

    fn read(&mut self) -> Result<Sexp, DslError> {
        self.skip_trivia();
        let pos = self.pos;
        match self.chars.peek().copied() {
            None => Err(parse_err(pos, "unexpected end of input")),
            Some('(') => {
                self.bump();
                let mut items = Vec::new();
                loop {
                    self.skip_trivia();
                    match self.chars.peek() {
                        None => return Err(parse_err(pos, "unbalanced `(`: missing `)`")),
                        Some(')') => {
                            self.bump();
                            break;
                        }
                        Some(_) => items.push(self.read()?),
                    }
                }
                Ok(Sexp {
                    datum: Datum::List(items),
                    pos,
                })
            }
            Some(')') => Err(parse_err(pos, "unexpected `)`")),
            Some('"') => {
                self.bump();
                let mut s = String::new();
                loop {
                    match self.bump() {
                        None => return Err(parse_err(pos, "unterminated string")),
                        Some('"') => break,
                        Some('\\') => match self.bump() {
                            Some('n') => s.push('\n'),
                            Some('t') => s.push('\t'),
                            Some('"') => s.push('"'),
                            Some('\\') => s.push('\\'),
                            other => {
                                return Err(parse_err(
                                    self.pos,
                                    format!("bad escape `\\{}`", other.unwrap_or(' ')),
                                ))
                            }
                        },
                        Some(c) => s.push(c),
                    }
                }
                Ok(Sexp {
                    datum: Datum::Str(s),
                    pos,
                })
            }
            Some(_) => {
                let mut tok = String::new();
                while let Some(&c) = self.chars.peek() {
                    if c.is_whitespace() || matches!(c, '(' | ')' | '"' | ';') {
                        break;
                    }
                    tok.push(c);
                    self.bump();
                }
                let looks_numeric = tok.starts_with(|c: char| c.is_ascii_digit())
                    || (tok.len() > 1
                        && tok.starts_with('-')
                        && tok[1..].starts_with(|c: char| c.is_ascii_digit()));
                let datum = if looks_numeric {
                    Datum::Int(
                        tok.parse()
                            .map_err(|_| parse_err(pos, format!("bad integer `{tok}`")))?,
                    )
                } else {
                    Datum::Sym(tok)
                };
                Ok(Sexp { datum, pos })
            }
        }
    }
}

/// Parses one reactive expression from program source.
pub fn parse_program(text: &str) -> Result<Expr, DslError> {
    let mut reader = Reader::new(text);
    if reader.at_eof() {
        return Err(parse_err(reader.pos, "empty program"));
    }
    let sexp = reader.read()?;
    if !reader.at_eof() {
        return Err(parse_err(reader.pos, "trailing input after program"));
    }
    expr(&sexp)
}

/// Head symbol, arguments and position of a form.
fn form<'a>(s: &'a Sexp, what: &str) -> Result<(&'a str, &'a [Sexp]), DslError> {
    match &s.datum {
        Datum::List(items) => match items.split_first() {
            Some((
                Sexp {
                    datum: Datum::Sym(h),
                    ..
                },
                args,
            )) => Ok((h.as_str(), args)),
            Some((other, _)) => Err(parse_err(
                other.pos,
                format!("expected a form name in {what}"),
            )),
            None => Err(parse_err(
                s.pos,
                format!("empty list where {what} expected"),
            )),
        },
        _ => Err(parse_err(s.pos, format!("expected {what}"))),
    }
}

fn arity(s: &Sexp, name: &str, args: &[Sexp], expected: usize) -> Result<(), DslError> {
    arity_range(s, name, args, expected, expected)
}

fn arity_range(
    s: &Sexp,
    name: &str,
    args: &[Sexp],
    min: usize,
    max: usize,
) -> Result<(), DslError> {
    if (min..=max).contains(&args.len()) {
        return Ok(());
    }
    let expected = match (min, max) {
        (a, b) if a == b => a.to_string(),
        (a, usize::MAX) => format!("at least {a}"),
        (a, b) => format!("{a} to {b}"),
    };
    Err(DslError::Arity {
        form: name.to_string(),
        expected,
        found: args.len(),
        line: s.pos.line,
        col: s.pos.col,
    })
}

fn unknown(s: &Sexp, name: &str) -> DslError {
    DslError::UnknownForm {
        name: name.to_string(),
        line: s.pos.line,
        col: s.pos.col,
    }
}

fn ident(s: &Sexp, what: &str) -> Result<String, DslError> {
    match &s.datum {
        Datum::Sym(n) if is_ident(n) => Ok(n.clone()),
        _ => Err(parse_err(s.pos, format!("expected {what} name"))),
    }
}

fn tag(s: &Sexp) -> Result<Tag, DslError> {
    ident(s, "tag").map(|n| Tag::new(&n))
}

fn template(s: &Sexp) -> Result<Template, DslError> {
    match &s.datum {
        Datum::Str(text) => Template::parse(text).map_err(|m| parse_err(s.pos, m)),
        _ => Err(parse_err(s.pos, "expected a string")),
    }
}

fn boxed(s: &Sexp) -> Result<Box<Expr>, DslError> {
    expr(s).map(Box::new)
}

fn expr(s: &Sexp) -> Result<Expr, DslError> {
    let (head, args) = form(s, "a reactive expression")?;
    Ok(match head {
        "rexp" => match args {
            [single] => Expr::Rexp(instr(single)?),
            many => Expr::Rexp(Instr::Seq(
                many.iter().map(instr).collect::<Result<_, _>>()?,
            )),
        },
        "merge" => {
            arity(s, head, args, 2)?;
            Expr::Merge(boxed(&args[0])?, boxed(&args[1])?)
        }
        "par" => {
            arity_range(s, head, args, 1, usize::MAX)?;
            let mut parts = args.iter().map(expr).collect::<Result<Vec<_>, _>>()?;
            let last = parts.pop().expect("arity checked");
            parts
                .into_iter()
                .rev()
                .fold(last, |acc, e| Expr::Merge(Box::new(e), Box::new(acc)))
        }
        "rif" => {
            arity(s, head, args, 3)?;
            Expr::Rif(cond(&args[0])?, boxed(&args[1])?, boxed(&args[2])?)
        }
        "close" | "loop" => {
            arity(s, head, args, 1)?;
            let e = boxed(&args[0])?;
            if head == "close" {
                Expr::Close(e)
            } else {
                Expr::Loop(e)
            }
        }
        "repeat" => {
            arity(s, head, args, 2)?;
            let n = match args[0].datum {
                Datum::Int(n) => n,
                _ => return Err(parse_err(args[0].pos, "expected a repeat count")),
            };
            Expr::Repeat(n, boxed(&args[1])?)
        }
        "init" => {
            arity(s, head, args, 2)?;
            Expr::Init(action(&args[0])?, boxed(&args[1])?)
        }
        "await" | "when" | "terminate" => {
            arity(s, head, args, 2)?;
            let (c, e) = (cond(&args[0])?, boxed(&args[1])?);
            match head {
                "await" => Expr::Await(c, e),
                "when" => Expr::When(c, e),
                _ => Expr::Terminate(c, e),
            }
        }
        "halt" => {
            arity(s, head, args, 0)?;
            Expr::Halt
        }
        "nothing" => {
            arity(s, head, args, 0)?;
            Expr::Nothing
        }
        other => return Err(unknown(s, other)),
    })
}

fn instr(s: &Sexp) -> Result<Instr, DslError> {
    let (head, args) = form(s, "an instruction")?;
    Ok(match head {
        "seq" => Instr::Seq(args.iter().map(instr).collect::<Result<_, _>>()?),
        "print" => {
            arity(s, head, args, 1)?;
            Instr::Print(template(&args[0])?)
        }
        "set" => {
            arity(s, head, args, 2)?;
            Instr::Set(ident(&args[0], "cell")?, int(&args[1])?)
        }
        "stop" => {
            arity(s, head, args, 0)?;
            Instr::Stop
        }
        "suspend" => {
            arity(s, head, args, 0)?;
            Instr::Suspend
        }
        "activate" => {
            arity(s, head, args, 1)?;
            Instr::Activate(boxed(&args[0])?)
        }
        "raise" => {
            arity(s, head, args, 1)?;
            Instr::Raise(tag(&args[0])?)
        }
        "handle" => {
            arity_range(s, head, args, 2, 3)?;
            let handler = match args.get(2) {
                Some(h) => instr(h)?,
                None => Instr::Seq(Vec::new()),
            };
            Instr::Handle {
                tag: tag(&args[0])?,
                body: Box::new(instr(&args[1])?),
                handler: Box::new(handler),
            }
        }
        other => return Err(unknown(s, other)),
    })
}

fn action(s: &Sexp) -> Result<ActionSpec, DslError> {
    let (head, args) = form(s, "an action")?;
    Ok(match head {
        "seq" => ActionSpec::Seq(args.iter().map(action).collect::<Result<_, _>>()?),
        "print" => {
            arity(s, head, args, 1)?;
            ActionSpec::Print(template(&args[0])?)
        }
        "set" => {
            arity(s, head, args, 2)?;
            ActionSpec::SetCell(ident(&args[0], "cell")?, int(&args[1])?)
        }
        "raise" => {
            arity(s, head, args, 1)?;
            ActionSpec::Raise(tag(&args[0])?)
        }
        other => return Err(unknown(s, other)),
    })
}

fn cond(s: &Sexp) -> Result<Cond, DslError> {
    match &s.datum {
        Datum::Sym(b) if b == "true" => return Ok(Cond::True),
        Datum::Sym(b) if b == "false" => return Ok(Cond::False),
        _ => {}
    }
    let (head, args) = form(s, "a condition")?;
    let two_ints = |args: &[Sexp]| -> Result<(IntExpr, IntExpr), DslError> {
        arity(s, head, args, 2)?;
        Ok((int(&args[0])?, int(&args[1])?))
    };
    Ok(match head {
        "sig" => {
            arity(s, head, args, 1)?;
            Cond::Sig(ident(&args[0], "signal")?)
        }
        "not" => {
            arity(s, head, args, 1)?;
            Cond::Not(Box::new(cond(&args[0])?))
        }
        "and" => Cond::And(args.iter().map(cond).collect::<Result<_, _>>()?),
        "or" => Cond::Or(args.iter().map(cond).collect::<Result<_, _>>()?),
        "=" => {
            let (a, b) = two_ints(args)?;
            Cond::Eq(a, b)
        }
        "<" => {
            let (a, b) = two_ints(args)?;
            Cond::Lt(a, b)
        }
        "<=" => {
            let (a, b) = two_ints(args)?;
            Cond::Le(a, b)
        }
        other => return Err(unknown(s, other)),
    })
}

fn int(s: &Sexp) -> Result<IntExpr, DslError> {
    if let Datum::Int(n) = s.datum {
        return Ok(IntExpr::Lit(n));
    }
    let (head, args) = form(s, "an integer expression")?;
    let bin = |f: fn(Box<IntExpr>, Box<IntExpr>) -> IntExpr| -> Result<IntExpr, DslError> {
        arity(s, head, args, 2)?;
        Ok(f(Box::new(int(&args[0])?), Box::new(int(&args[1])?)))
    };
    match head {
        "cell" => {
            arity(s, head, args, 1)?;
            Ok(IntExpr::Cell(ident(&args[0], "cell")?))
        }
        "value" => {
            arity(s, head, args, 1)?;
            Ok(IntExpr::Value(ident(&args[0], "value")?))
        }
        "+" => bin(IntExpr::Add),
        "*" => bin(IntExpr::Mul),
        "-" if args.len() == 1 => Ok(IntExpr::Neg(Box::new(int(&args[0])?))),
        "-" => bin(IntExpr::Sub),
        "neg" => {
            arity(s, head, args, 1)?;
            Ok(IntExpr::Neg(Box::new(int(&args[0])?)))
        }
        other => Err(unknown(s, other)),
    }
}
