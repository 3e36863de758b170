//! The reactive environment and the activation relation.
//!
//! Every reactive expression is a node addressed by a [`ReactiveId`]. The
//! environment keeps the node structure and, separately, the [`Status`] left
//! by the node's last activation. [`Environment::step`] performs one
//! activation; [`Environment::react`] runs one whole instant, re-activating
//! the root until it is no longer suspended.

use std::collections::{HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dsl::{Cond, World};
use crate::program::{run_resumption, HostAction, Resumption, Tag};

/// Outcome of an activation, and the state it leaves behind.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Status {
    #[serde(rename = "SUSP")]
    Susp,
    #[serde(rename = "STOP")]
    Stop,
    #[serde(rename = "END")]
    End,
}

impl Status {
    pub const ALL: [Status; 3] = [Status::Susp, Status::Stop, Status::End];

    fn dominance(self) -> u8 {
        match self {
            Status::End => 0,
            Status::Stop => 1,
            Status::Susp => 2,
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Susp => "SUSP",
            Status::Stop => "STOP",
            Status::End => "END",
        })
    }
}

/// Status of a merge from the statuses of its branches: a suspended branch
/// suspends the merge, otherwise a stopped one stops it, otherwise both
/// have terminated.
pub fn star(a: Status, b: Status) -> Status {
    if a.dominance() >= b.dominance() {
        a
    } else {
        b
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ReactiveId(u32);

impl ReactiveId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for ReactiveId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "r{}", self.0)
    }
}

#[derive(Debug, Clone)]
pub enum Node {
    Basic(Resumption),
    Merge(ReactiveId, ReactiveId),
    Rif {
        cond: Cond,
        then_branch: ReactiveId,
        else_branch: ReactiveId,
    },
    Close(ReactiveId),
    Loop {
        saved: ReactiveId,
        current: ReactiveId,
    },
    Repeat {
        saved: ReactiveId,
        current: ReactiveId,
        remaining: u64,
    },
    Init {
        action: HostAction,
        child: ReactiveId,
    },
    Await {
        cond: Cond,
        child: ReactiveId,
        latched: bool,
    },
}

impl Node {
    pub fn children(&self) -> Vec<ReactiveId> {
        match self {
            Node::Basic(res) => res.children(),
            Node::Merge(a, b) => vec![*a, *b],
            Node::Rif {
                then_branch,
                else_branch,
                ..
            } => vec![*then_branch, *else_branch],
            Node::Close(c) | Node::Init { child: c, .. } | Node::Await { child: c, .. } => vec![*c],
            Node::Loop { saved, current } | Node::Repeat { saved, current, .. } => {
                vec![*saved, *current]
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Activations of a suspended child allowed inside one close.
    pub max_micro_steps: u64,
    /// Body restarts allowed inside one activation of a loop or repeat.
    pub max_loop_restarts: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_micro_steps: 10_000,
            max_loop_restarts: 1_000_000,
        }
    }
}

/// Why a single activation did not complete normally.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StepError {
    #[error("abort `{0}`")]
    Abort(Tag),
    #[error("micro-step limit of {limit} exceeded: expression still suspended")]
    MicroStepLimitExceeded { limit: u64 },
    #[error("instantaneous loop: body terminated {limit} times without stopping")]
    InstantaneousLoop { limit: u64 },
}

/// Errors surfaced by [`Environment::react`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("uncaught abort `{0}`")]
    UncaughtAbort(Tag),
    #[error("micro-step limit of {limit} exceeded: expression still suspended")]
    MicroStepLimitExceeded { limit: u64 },
    #[error("instantaneous loop: body terminated {limit} times without stopping")]
    InstantaneousLoop { limit: u64 },
}

impl From<StepError> for EngineError {
    fn from(e: StepError) -> Self {
        match e {
            StepError::Abort(t) => EngineError::UncaughtAbort(t),
            StepError::MicroStepLimitExceeded { limit } => {
                EngineError::MicroStepLimitExceeded { limit }
            }
            StepError::InstantaneousLoop { limit } => EngineError::InstantaneousLoop { limit },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("node refers to unallocated id {0}")]
pub struct DanglingChild(pub ReactiveId);

/// One instant as observed from outside.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstantRecord {
    pub instant: usize,
    pub outputs: Vec<String>,
    pub status: Status,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct TraceSummary {
    pub terminated: bool,
    pub instants_run: usize,
    pub error: Option<String>,
}

/// Outputs and root status per instant, plus how the run ended.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct InstantTrace {
    pub instants: Vec<InstantRecord>,
    pub summary: TraceSummary,
}

impl InstantTrace {
    /// Runs one instant on `root` and records it. Returns whether another
    /// instant makes sense, i.e. the root is still alive and nothing failed.
    pub fn record_instant(&mut self, env: &mut Environment, root: ReactiveId) -> bool {
        let index = self.summary.instants_run + 1;
        self.summary.instants_run = index;
        match env.react(root) {
            Ok(done) => {
                self.instants.push(InstantRecord {
                    instant: index,
                    outputs: env.world.take_output(),
                    status: env.status(root),
                });
                self.summary.terminated = done;
                !done
            }
            Err(e) => {
                self.summary.error = Some(format!("instant {index}: {e}"));
                false
            }
        }
    }
}

/// Node store, status store, world and limits for one reactive program.
#[derive(Debug, Default)]
pub struct Environment {
    nodes: Vec<Node>,
    statuses: Vec<Status>,
    pub world: World,
    pub limits: Limits,
}

impl Environment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_limits(limits: Limits) -> Self {
        Environment {
            limits,
            ..Self::default()
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn contains(&self, id: ReactiveId) -> bool {
        id.index() < self.nodes.len()
    }

    pub fn status(&self, id: ReactiveId) -> Status {
        self.statuses[id.index()]
    }

    pub fn statuses(&self) -> &[Status] {
        &self.statuses
    }

    pub fn node(&self, id: ReactiveId) -> &Node {
        &self.nodes[id.index()]
    }

    pub fn ids(&self) -> impl Iterator<Item = ReactiveId> {
        (0..self.nodes.len() as u32).map(ReactiveId)
    }

    /// Allocates a node with status STOP.
    pub fn try_alloc(&mut self, node: Node) -> Result<ReactiveId, DanglingChild> {
        if let Some(bad) = node.children().into_iter().find(|c| !self.contains(*c)) {
            return Err(DanglingChild(bad));
        }
        Ok(self.push(node, Status::Stop))
    }

    /// Panics if the node refers to an id not allocated in this environment.
    pub fn alloc(&mut self, node: Node) -> ReactiveId {
        match self.try_alloc(node) {
            Ok(id) => id,
            Err(e) => panic!("{e}"),
        }
    }

    fn push(&mut self, node: Node, status: Status) -> ReactiveId {
        let id = ReactiveId(u32::try_from(self.nodes.len()).expect("reactive id space exhausted"));
        self.nodes.push(node);
        self.statuses.push(status);
        id
    }

    fn set_status(&mut self, id: ReactiveId, s: Status) {
        self.statuses[id.index()] = s;
    }

    /// Deep copy of everything reachable from `id`, statuses and
    /// resumptions included. Shared nodes stay shared in the copy.
    pub fn dup(&mut self, id: ReactiveId) -> ReactiveId {
        let mut copies = HashMap::new();
        let mut in_progress = HashSet::new();
        self.dup_node(id, &mut copies, &mut in_progress)
    }

    fn dup_node(
        &mut self,
        id: ReactiveId,
        copies: &mut HashMap<ReactiveId, ReactiveId>,
        in_progress: &mut HashSet<ReactiveId>,
    ) -> ReactiveId {
        if let Some(&copy) = copies.get(&id) {
            return copy;
        }
        assert!(
            in_progress.insert(id),
            "internal error: reactive graph has a cycle through {id}"
        );
        let node = self.nodes[id.index()].clone();
        let mut d = |c: ReactiveId| self.dup_node(c, copies, in_progress);
        let copied = match node {
            Node::Basic(res) => Node::Basic(res.map_ids(&mut d)),
            Node::Merge(a, b) => {
                let a = d(a);
                Node::Merge(a, d(b))
            }
            Node::Rif {
                cond,
                then_branch,
                else_branch,
            } => {
                let then_branch = d(then_branch);
                Node::Rif {
                    cond,
                    then_branch,
                    else_branch: d(else_branch),
                }
            }
            Node::Close(c) => Node::Close(d(c)),
            Node::Loop { saved, current } => {
                let saved = d(saved);
                Node::Loop {
                    saved,
                    current: d(current),
                }
            }
            Node::Repeat {
                saved,
                current,
                remaining,
            } => {
                let saved = d(saved);
                Node::Repeat {
                    saved,
                    current: d(current),
                    remaining,
                }
            }
            Node::Init { action, child } => Node::Init {
                action,
                child: d(child),
            },
            Node::Await {
                cond,
                child,
                latched,
            } => Node::Await {
                cond,
                child: d(child),
                latched,
            },
        };
        let status = self.status(id);
        let copy = self.push(copied, status);
        in_progress.remove(&id);
        copies.insert(id, copy);
        copy
    }

    /// One activation of `id`. A terminated node is left alone and reports
    /// END. An abort escaping the activation terminates the node.
    pub fn step(&mut self, id: ReactiveId) -> Result<Status, StepError> {
        if self.status(id) == Status::End {
            return Ok(Status::End);
        }
        match self.activate_node(id) {
            Ok(s) => {
                self.set_status(id, s);
                Ok(s)
            }
            Err(StepError::Abort(tag)) => {
                self.set_status(id, Status::End);
                Err(StepError::Abort(tag))
            }
            Err(e) => Err(e),
        }
    }

    fn activate_node(&mut self, id: ReactiveId) -> Result<Status, StepError> {
        if let Node::Basic(res) = &mut self.nodes[id.index()] {
            let mut res = std::mem::take(res);
            let out = run_resumption(self, &mut res);
            self.nodes[id.index()] = Node::Basic(res);
            return out;
        }
        match self.nodes[id.index()].clone() {
            Node::Basic(_) => unreachable!(),
            Node::Merge(left, right) => {
                let (ls, rs) = (self.status(left), self.status(right));
                match (ls == Status::Susp, rs == Status::Susp) {
                    (true, false) => Ok(star(self.step(left)?, rs)),
                    (false, true) => Ok(star(ls, self.step(right)?)),
                    _ => {
                        let a = self.step(left)?;
                        Ok(star(a, self.step(right)?))
                    }
                }
            }
            Node::Rif {
                cond,
                then_branch,
                else_branch,
            } => {
                // A suspended branch is finishing the current instant; the
                // condition was already decided for it.
                if self.status(then_branch) == Status::Susp {
                    self.step(then_branch)
                } else if self.status(else_branch) == Status::Susp {
                    self.step(else_branch)
                } else if cond.eval(&self.world) {
                    self.step(then_branch)
                } else {
                    self.step(else_branch)
                }
            }
            Node::Close(child) => self.settle(child),
            Node::Loop { saved, current } => self.run_loop(id, saved, current, None),
            Node::Repeat {
                saved,
                current,
                remaining,
            } => self.run_loop(id, saved, current, Some(remaining)),
            Node::Init { action, child } => {
                action.run(&mut self.world).map_err(StepError::Abort)?;
                self.step(child)
            }
            Node::Await {
                cond,
                child,
                latched,
            } => {
                if !latched {
                    if !cond.eval(&self.world) {
                        return Ok(Status::Stop);
                    }
                    if let Node::Await { latched, .. } = &mut self.nodes[id.index()] {
                        *latched = true;
                    }
                }
                self.step(child)
            }
        }
    }

    /// Activates `child` until it is no longer suspended.
    fn settle(&mut self, child: ReactiveId) -> Result<Status, StepError> {
        let limit = self.limits.max_micro_steps;
        for _ in 0..limit {
            let s = self.step(child)?;
            if s != Status::Susp {
                return Ok(s);
            }
        }
        Err(StepError::MicroStepLimitExceeded { limit })
    }

    /// Shared body of loop (`remaining == None`) and repeat.
    fn run_loop(
        &mut self,
        id: ReactiveId,
        saved: ReactiveId,
        mut current: ReactiveId,
        mut remaining: Option<u64>,
    ) -> Result<Status, StepError> {
        let limit = self.limits.max_loop_restarts;
        let mut restarts = 0;
        loop {
            let s = self.step(current)?;
            if s != Status::End {
                return Ok(s);
            }
            if let Some(n) = remaining.as_mut() {
                *n -= 1;
                self.update_loop(id, current, *n);
                if *n == 0 {
                    return Ok(Status::End);
                }
            }
            restarts += 1;
            if restarts > limit {
                return Err(StepError::InstantaneousLoop { limit });
            }
            current = self.dup(saved);
            self.update_loop(id, current, remaining.unwrap_or(0));
        }
    }

    fn update_loop(&mut self, id: ReactiveId, new_current: ReactiveId, left: u64) {
        match &mut self.nodes[id.index()] {
            Node::Loop { current, .. } => *current = new_current,
            Node::Repeat {
                current, remaining, ..
            } => {
                *current = new_current;
                *remaining = left;
            }
            _ => unreachable!("update_loop on a non-loop node"),
        }
    }

    /// One instant: activates `root` until it stops or terminates, then
    /// consumes the instant's signals. Returns true once `root` has
    /// terminated. The instant's output is left in `self.world`.
    pub fn react(&mut self, root: ReactiveId) -> Result<bool, EngineError> {
        self.world.clear_output();
        let res = self.settle(root);
        self.world.end_instant();
        Ok(res? == Status::End)
    }

    /// Reacts until `root` terminates or `max_instants` instants have run.
    pub fn react_t(&mut self, root: ReactiveId, max_instants: usize) -> InstantTrace {
        assert!(max_instants >= 1, "react_t needs at least one instant");
        let mut trace = InstantTrace::default();
        while trace.summary.instants_run < max_instants && trace.record_instant(self, root) {}
        trace
    }
}
