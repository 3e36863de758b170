//! Constructors for reactive expressions.
//!
//! `rexp`, `merge`, `rif`, `close`, `loop_`, `repeat`, `init` and `await_`
//! allocate kernel nodes. `halt`, `nothing`, `when` and `terminate` are
//! plain desugarings onto those.
//!
//! `loop_` and `repeat` copy their argument when they are built, not when
//! first activated: stepping the argument afterwards has no effect on them.

use crate::dsl::Cond;
use crate::kernel::{Environment, Node, ReactiveId};
use crate::program::{HostAction, Program, Resumption};

impl Environment {
    /// Basic reactive expression running `program`.
    pub fn rexp(&mut self, program: Program) -> ReactiveId {
        self.alloc(Node::Basic(Resumption::new(program)))
    }

    /// Activates `a` then `b` each instant; terminates when both have.
    pub fn merge(&mut self, a: ReactiveId, b: ReactiveId) -> ReactiveId {
        self.alloc(Node::Merge(a, b))
    }

    /// Right fold of [`Environment::merge`]: `a || b || c` is `merge(a, merge(b, c))`.
    ///
    /// Panics on an empty list.
    pub fn par(&mut self, branches: &[ReactiveId]) -> ReactiveId {
        let (&last, init) = branches
            .split_last()
            .expect("par needs at least one branch");
        init.iter().rev().fold(last, |acc, &b| self.merge(b, acc))
    }

    /// Picks a branch by evaluating `cond` at each instant.
    pub fn rif(
        &mut self,
        cond: Cond,
        then_branch: ReactiveId,
        else_branch: ReactiveId,
    ) -> ReactiveId {
        self.alloc(Node::Rif {
            cond,
            then_branch,
            else_branch,
        })
    }

    /// Runs all of `a`'s micro-instants within a single activation.
    pub fn close(&mut self, a: ReactiveId) -> ReactiveId {
        self.alloc(Node::Close(a))
    }

    pub fn halt(&mut self) -> ReactiveId {
        let body = self.rexp(Program::Stop);
        self.loop_(body)
    }

    pub fn nothing(&mut self) -> ReactiveId {
        self.rexp(Program::empty())
    }

    /// Restarts a fresh copy of `e` (as it was at construction) whenever
    /// the running copy terminates.
    #[doc(alias = "loop")]
    pub fn loop_(&mut self, e: ReactiveId) -> ReactiveId {
        let saved = self.dup(e);
        let current = self.dup(saved);
        self.alloc(Node::Loop { saved, current })
    }

    /// Runs `n` copies of `e` one after another.
    pub fn repeat(&mut self, n: u64, e: ReactiveId) -> ReactiveId {
        if n == 0 {
            return self.nothing();
        }
        let saved = self.dup(e);
        let current = self.dup(saved);
        self.alloc(Node::Repeat {
            saved,
            current,
            remaining: n,
        })
    }

    /// Runs `action` before every activation of `e`.
    pub fn init(&mut self, action: HostAction, e: ReactiveId) -> ReactiveId {
        self.alloc(Node::Init { action, child: e })
    }

    /// Stops each instant until `cond` first holds, then behaves as `e`
    /// without testing `cond` again.
    #[doc(alias = "await")]
    pub fn await_(&mut self, cond: Cond, e: ReactiveId) -> ReactiveId {
        self.alloc(Node::Await {
            cond,
            child: e,
            latched: false,
        })
    }

    pub fn when(&mut self, cond: Cond, e: ReactiveId) -> ReactiveId {
        let h = self.halt();
        self.rif(cond, e, h)
    }

    /// Terminates as soon as `cond` holds at the start of an activation,
    /// otherwise activates `e`.
    pub fn terminate(&mut self, cond: Cond, e: ReactiveId) -> ReactiveId {
        let n = self.nothing();
        self.rif(cond, n, e)
    }
}
