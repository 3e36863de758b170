//! Textual front end: program syntax, conditions and actions over the
//! [`World`], and event traces.

mod ast;
mod compile;
mod expr;
mod parse;
mod trace;
mod world;

use thiserror::Error;

pub use ast::{render, Expr, Instr};
pub use compile::compile;
pub use expr::{eval_cond, eval_int, ActionSpec, Cond, IntExpr, Segment, Template};
pub use parse::parse_program;
pub use trace::{parse_trace, InstantEvents, TraceFile};
pub use world::World;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DslError {
    #[error("{line}:{col}: {msg}")]
    Parse {
        line: usize,
        col: usize,
        msg: String,
    },
    #[error("{line}:{col}: unknown form `{name}`")]
    UnknownForm {
        name: String,
        line: usize,
        col: usize,
    },
    #[error("{line}:{col}: `{form}` takes {expected} argument(s), found {found}")]
    Arity {
        form: String,
        expected: String,
        found: usize,
        line: usize,
        col: usize,
    },
    #[error("repeat count {0} is negative")]
    NegativeRepeatCount(i64),
    #[error("line {line}: `{name}` assigned twice in one instant")]
    DuplicateAssignment { name: String, line: usize },
}
