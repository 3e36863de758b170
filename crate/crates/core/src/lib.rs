//! Deterministic reactive execution engine.
//!
//! Programs are reactive expressions: resumable computations that advance
//! one *instant* at a time. Each activation ends by stopping (wait for the
//! next instant), suspending (wait for the next micro-instant of the same
//! instant) or terminating. Expressions are combined with `merge`, `rif`,
//! `loop`, `repeat` and friends, and can abort each other through tagged
//! raises caught by handlers in enclosing basic expressions.
//!
//! ```
//! use instants::{Environment, Program};
//!
//! let mut env = Environment::new();
//! let left = env.rexp(Program::seq([Program::print("1"), Program::Stop, Program::print("2")]));
//! let right = env.rexp(Program::seq([Program::print("A"), Program::Stop, Program::print("B")]));
//! let both = env.merge(left, right);
//!
//! assert_eq!(env.react(both), Ok(false));
//! assert_eq!(env.world.take_output(), ["1", "A"]);
//! assert_eq!(env.react(both), Ok(true));
//! assert_eq!(env.world.take_output(), ["2", "B"]);
//! ```

pub mod cli;
mod combinators;
pub mod dsl;
pub mod kernel;
pub mod keypad;
pub mod program;

pub use dsl::{ActionSpec, Cond, IntExpr, World};
pub use kernel::{
    star, DanglingChild, EngineError, Environment, InstantRecord, InstantTrace, Limits, Node,
    ReactiveId, Status, StepError, TraceSummary,
};
pub use program::{run_resumption, HostAction, Program, Resumption, Tag};
