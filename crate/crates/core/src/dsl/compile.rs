use super::ast::{Expr, Instr};
use super::expr::ActionSpec;
use super::DslError;
use crate::kernel::{Environment, ReactiveId};
use crate::program::Program;

/// Allocates `expr` bottom-up in `env` and returns its root.
pub fn compile(expr: &Expr, env: &mut Environment) -> Result<ReactiveId, DslError> {
    Ok(match expr {
        Expr::Rexp(body) => {
            let p = compile_instr(body, env)?;
            env.rexp(p)
        }
        Expr::Merge(a, b) => {
            let a = compile(a, env)?;
            let b = compile(b, env)?;
            env.merge(a, b)
        }
        Expr::Rif(c, a, b) => {
            let a = compile(a, env)?;
            let b = compile(b, env)?;
            env.rif(c.clone(), a, b)
        }
        Expr::Close(e) => {
            let e = compile(e, env)?;
            env.close(e)
        }
        Expr::Loop(e) => {
            let e = compile(e, env)?;
            env.loop_(e)
        }
        Expr::Repeat(n, e) => {
            let count = u64::try_from(*n).map_err(|_| DslError::NegativeRepeatCount(*n))?;
            let e = compile(e, env)?;
            env.repeat(count, e)
        }
        Expr::Init(a, e) => {
            let e = compile(e, env)?;
            env.init(a.clone().into_host_action(), e)
        }
        Expr::Await(c, e) => {
            let e = compile(e, env)?;
            env.await_(c.clone(), e)
        }
        Expr::When(c, e) => {
            let e = compile(e, env)?;
            env.when(c.clone(), e)
        }
        Expr::Terminate(c, e) => {
            let e = compile(e, env)?;
            env.terminate(c.clone(), e)
        }
        Expr::Halt => env.halt(),
        Expr::Nothing => env.nothing(),
    })
}

fn compile_instr(instr: &Instr, env: &mut Environment) -> Result<Program, DslError> {
    Ok(match instr {
        Instr::Seq(items) => Program::seq(
            items
                .iter()
                .map(|i| compile_instr(i, env))
                .collect::<Result<Vec<_>, _>>()?,
        ),
        Instr::Print(t) => Program::Atom(ActionSpec::Print(t.clone()).into_host_action()),
        Instr::Set(name, e) => {
            Program::Atom(ActionSpec::SetCell(name.clone(), e.clone()).into_host_action())
        }
        Instr::Stop => Program::Stop,
        Instr::Suspend => Program::Suspend,
        Instr::Activate(e) => Program::Activate(compile(e, env)?),
        Instr::Raise(t) => Program::Raise(t.clone()),
        Instr::Handle { tag, body, handler } => Program::Handle {
            body: compile_instr(body, env)?.into(),
            tag: tag.clone(),
            handler: compile_instr(handler, env)?.into(),
        },
    })
}
