//! Basic reactive programs: an instruction tree with explicit control points
//! and the resumption that remembers where the last activation left off.
//!
//! A basic expression runs its instructions left to right until it hits
//! `Stop` (end of instant), `Suspend` (end of micro-instant), an `Activate`
//! whose child has not terminated, or the end of the program. The
//! [`Resumption`] is a stack of frames, one per entered `Seq` or `Handle`
//! body, so the next activation continues exactly after the control point.

use std::fmt;
use std::sync::Arc;

use crate::dsl::World;
use crate::kernel::{Environment, ReactiveId, Status, StepError};

/// Name of an abort. Compared by exact string equality.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Tag(Arc<str>);

impl Tag {
    /// Panics on an empty name.
    pub fn new(name: &str) -> Self {
        assert!(!name.is_empty(), "abort tags must be non-empty");
        Tag(Arc::from(name))
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Tag({})", self.0)
    }
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

type ActionFn = dyn Fn(&mut World) -> Result<(), Tag> + Send + Sync;

/// Host code run for its effect on the world. Returning `Err(tag)` raises
/// an abort at the point of the call.
#[derive(Clone)]
pub struct HostAction(Arc<ActionFn>);

impl HostAction {
    pub fn new(f: impl Fn(&mut World) -> Result<(), Tag> + Send + Sync + 'static) -> Self {
        HostAction(Arc::new(f))
    }

    pub fn noop() -> Self {
        HostAction::new(|_| Ok(()))
    }

    pub fn run(&self, world: &mut World) -> Result<(), Tag> {
        (self.0)(world)
    }
}

impl fmt::Debug for HostAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("HostAction(..)")
    }
}

#[derive(Debug, Clone)]
pub enum Program {
    Atom(HostAction),
    Seq(Arc<[Program]>),
    Stop,
    Suspend,
    Activate(ReactiveId),
    Raise(Tag),
    Handle {
        body: Arc<Program>,
        tag: Tag,
        handler: Arc<Program>,
    },
}

impl Program {
    /// The empty program: terminates immediately, no effects.
    pub fn empty() -> Self {
        Program::Seq(Arc::from(Vec::new()))
    }

    pub fn seq(items: impl IntoIterator<Item = Program>) -> Self {
        Program::Seq(items.into_iter().collect())
    }

    pub fn atom(f: impl Fn(&mut World) -> Result<(), Tag> + Send + Sync + 'static) -> Self {
        Program::Atom(HostAction::new(f))
    }

    pub fn print(text: impl Into<String>) -> Self {
        let text = text.into();
        Program::atom(move |w| {
            w.emit(text.clone());
            Ok(())
        })
    }

    pub fn raise(tag: &str) -> Self {
        Program::Raise(Tag::new(tag))
    }

    pub fn handle(body: Program, tag: &str, handler: Program) -> Self {
        Program::Handle {
            body: Arc::new(body),
            tag: Tag::new(tag),
            handler: Arc::new(handler),
        }
    }

    /// Every id named by an `Activate` anywhere in this tree.
    pub fn activated_ids(&self, out: &mut Vec<ReactiveId>) {
        match self {
            Program::Activate(id) => out.push(*id),
            Program::Seq(items) => items.iter().for_each(|p| p.activated_ids(out)),
            Program::Handle { body, handler, .. } => {
                body.activated_ids(out);
                handler.activated_ids(out);
            }
            Program::Atom(_) | Program::Stop | Program::Suspend | Program::Raise(_) => {}
        }
    }

    /// Rebuilds the tree with every `Activate` target passed through `f`.
    pub(crate) fn map_ids(&self, f: &mut impl FnMut(ReactiveId) -> ReactiveId) -> Program {
        match self {
            Program::Activate(id) => Program::Activate(f(*id)),
            Program::Seq(items) => Program::Seq(items.iter().map(|p| p.map_ids(f)).collect()),
            Program::Handle { body, tag, handler } => Program::Handle {
                body: Arc::new(body.map_ids(f)),
                tag: tag.clone(),
                handler: Arc::new(handler.map_ids(f)),
            },
            other => other.clone(),
        }
    }

    fn size(&self) -> usize {
        match self {
            Program::Seq(items) => items.iter().map(Program::size).sum(),
            Program::Handle { body, handler, .. } => 1 + body.size() + handler.size(),
            _ => 1,
        }
    }
}

#[derive(Debug, Clone)]
struct Frame {
    items: Arc<[Program]>,
    pos: usize,
    /// Set on the frame running a `Handle` body.
    scope: Option<(Tag, Arc<Program>)>,
}

impl Frame {
    fn new(items: Arc<[Program]>, scope: Option<(Tag, Arc<Program>)>) -> Self {
        Frame {
            items,
            pos: 0,
            scope,
        }
    }
}

/// Where a basic expression continues on its next activation. An empty
/// stack means the expression has terminated.
#[derive(Debug, Clone, Default)]
pub struct Resumption {
    frames: Vec<Frame>,
}

impl Resumption {
    pub fn new(program: Program) -> Self {
        Resumption {
            frames: vec![Frame::new(Arc::from(vec![program]), None)],
        }
    }

    pub fn is_finished(&self) -> bool {
        self.frames.is_empty()
    }

    /// Instructions still to run, counting handler bodies of open scopes.
    pub fn remaining_len(&self) -> usize {
        self.frames
            .iter()
            .map(|fr| {
                let rest: usize = fr.items[fr.pos..].iter().map(Program::size).sum();
                rest + fr.scope.as_ref().map_or(0, |(_, h)| h.size())
            })
            .sum()
    }

    /// The instruction the next activation will start with, if any.
    pub fn next_instruction(&self) -> Option<&Program> {
        self.frames.iter().rev().find_map(|fr| fr.items.get(fr.pos))
    }

    /// Ids reachable from the unexecuted part of this resumption.
    pub fn children(&self) -> Vec<ReactiveId> {
        let mut out = Vec::new();
        for fr in &self.frames {
            fr.items[fr.pos..]
                .iter()
                .for_each(|p| p.activated_ids(&mut out));
            if let Some((_, h)) = &fr.scope {
                h.activated_ids(&mut out);
            }
        }
        out
    }

    /// Copy of the unexecuted part with `Activate` targets remapped.
    pub(crate) fn map_ids(&self, f: &mut impl FnMut(ReactiveId) -> ReactiveId) -> Resumption {
        let frames = self
            .frames
            .iter()
            .map(|fr| Frame {
                items: fr.items[fr.pos..].iter().map(|p| p.map_ids(f)).collect(),
                pos: 0,
                scope: fr
                    .scope
                    .as_ref()
                    .map(|(t, h)| (t.clone(), Arc::new(h.map_ids(f)))),
            })
            .collect();
        Resumption { frames }
    }

    /// Pops frames up to and including the innermost scope for `tag`, then
    /// enters its handler. Returns false when no scope matches, leaving the
    /// stack empty.
    fn unwind_to(&mut self, tag: &Tag) -> bool {
        while let Some(frame) = self.frames.pop() {
            if let Some((t, handler)) = frame.scope {
                if &t == tag {
                    self.frames
                        .push(Frame::new(Arc::from(vec![(*handler).clone()]), None));
                    return true;
                }
            }
        }
        false
    }
}

/// Runs one activation of a basic expression.
///
/// On `Ok(STOP | SUSP)` the resumption points just past the control point,
/// or still at the `Activate` whose child has not terminated. On `Ok(END)`
/// and on `Err(Abort)` it is empty.
pub fn run_resumption(env: &mut Environment, res: &mut Resumption) -> Result<Status, StepError> {
    loop {
        let Some(top) = res.frames.last_mut() else {
            return Ok(Status::End);
        };
        let Some(instr) = top.items.get(top.pos).cloned() else {
            res.frames.pop();
            continue;
        };
        let raised = match instr {
            Program::Atom(action) => {
                top.pos += 1;
                action.run(&mut env.world).err()
            }
            Program::Seq(items) => {
                top.pos += 1;
                res.frames.push(Frame::new(items, None));
                None
            }
            Program::Stop => {
                top.pos += 1;
                return Ok(Status::Stop);
            }
            Program::Suspend => {
                top.pos += 1;
                return Ok(Status::Susp);
            }
            Program::Activate(child) => match env.step(child) {
                Ok(Status::End) => {
                    top.pos += 1;
                    None
                }
                Ok(status) => return Ok(status),
                Err(StepError::Abort(tag)) => Some(tag),
                Err(e) => return Err(e),
            },
            Program::Raise(tag) => Some(tag),
            Program::Handle { body, tag, handler } => {
                top.pos += 1;
                res.frames.push(Frame::new(
                    Arc::from(vec![(*body).clone()]),
                    Some((tag, handler)),
                ));
                None
            }
        };
        if let Some(tag) = raised {
            if !res.unwind_to(&tag) {
                return Err(StepError::Abort(tag));
            }
        }
    }
}
