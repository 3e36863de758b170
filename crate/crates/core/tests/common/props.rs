//! Invariants checked on seeded random programs. Each check returns a
//! description of the first violation.

use instants::dsl::{compile, Cond, Expr, Instr, Template};
use instants::{Environment, Status};

use super::gen::{Gen, GenConfig, SIGNALS};
use super::{engine_trace, events, run_events, TEST_LIMITS};

const INSTANTS: usize = 12;

fn fail<T: std::fmt::Debug>(what: &str, expr: &Expr, left: T, right: T) -> Result<(), String> {
    Err(format!(
        "{what}\nprogram: {expr}\nleft:  {left:?}\nright: {right:?}"
    ))
}

/// Once the root has terminated, further instants do nothing.
pub fn terminal_absorption(seed: u64) -> Result<(), String> {
    let mut g = Gen::new(seed, GenConfig::default());
    let e = g.expr();
    let tr = g.trace(10);
    let mut env = Environment::with_limits(TEST_LIMITS);
    let root = compile(&e, &mut env).unwrap();
    let t = run_events(&mut env, root, &tr, 40);
    if !t.summary.terminated {
        return Ok(());
    }
    let cells = env.world.cells().clone();
    let (nodes, statuses) = (env.len(), env.statuses().to_vec());
    for _ in 0..3 {
        env.world.apply_instant(&tr[0]);
        match env.react(root) {
            Ok(true) => {}
            other => {
                return fail(
                    "react after END",
                    &e,
                    format!("{other:?}"),
                    "Ok(true)".into(),
                )
            }
        }
        if !env.world.output().is_empty() || env.world.cells() != &cells {
            return fail("effects after END", &e, env.world.output().to_vec(), vec![]);
        }
        if env.len() != nodes || env.statuses() != statuses.as_slice() {
            return Err(format!("store changed after END\nprogram: {e}"));
        }
    }
    Ok(())
}

/// Micro-instants stay inside the instant: after react the root is never
/// suspended.
pub fn micro_instant_confinement(seed: u64) -> Result<(), String> {
    let mut g = Gen::new(seed, GenConfig::default());
    let e = g.expr();
    let tr = g.trace(10);
    let t = engine_trace(&e, &tr, INSTANTS, TEST_LIMITS);
    match t.instants.iter().find(|r| r.status == Status::Susp) {
        Some(r) => Err(format!(
            "root SUSP after instant {}\nprogram: {e}",
            r.instant
        )),
        None => Ok(()),
    }
}

/// Reacting one expression leaves an unrelated expression's nodes alone.
pub fn bystander_isolation(seed: u64) -> Result<(), String> {
    let cfg = GenConfig {
        allow_cells: false,
        ..GenConfig::default()
    };
    let mut g = Gen::new(seed, cfg);
    let (e1, e2) = (g.expr(), g.expr());
    let tr = g.trace(10);
    let mut env = Environment::with_limits(TEST_LIMITS);
    let r1 = compile(&e1, &mut env).unwrap();
    let lo = env.len();
    let r2 = compile(&e2, &mut env).unwrap();
    let hi = env.len();
    let before = env.statuses()[lo..hi].to_vec();
    run_events(&mut env, r1, &tr, INSTANTS);
    if env.statuses()[lo..hi] != before[..] {
        return fail(
            "bystander statuses changed",
            &e1,
            env.statuses()[lo..hi].to_vec(),
            before,
        );
    }
    env.world = Default::default();
    let got = run_events(&mut env, r2, &tr, INSTANTS);
    let want = engine_trace(&e2, &tr, INSTANTS, TEST_LIMITS);
    if got != want {
        return fail("bystander behaves differently", &e2, got, want);
    }
    Ok(())
}

/// Without aborts, a merge has terminated exactly when both sides have.
pub fn merge_end_iff_both(seed: u64) -> Result<(), String> {
    let cfg = GenConfig {
        allow_raise: false,
        max_depth: 4,
        ..GenConfig::default()
    };
    let mut g = Gen::new(seed, cfg);
    let (a, b) = (g.expr(), g.expr());
    let tr = g.trace(10);
    let mut env = Environment::with_limits(TEST_LIMITS);
    let ra = compile(&a, &mut env).unwrap();
    let rb = compile(&b, &mut env).unwrap();
    let m = env.merge(ra, rb);
    let quiet = Default::default();
    for k in 0..INSTANTS {
        env.world.apply_instant(tr.get(k).unwrap_or(&quiet));
        if env.react(m).is_err() {
            break;
        }
        let both = env.status(ra) == Status::End && env.status(rb) == Status::End;
        if (env.status(m) == Status::End) != both {
            let e = Expr::Merge(Box::new(a), Box::new(b));
            return fail(
                "merge END disagrees with children",
                &e,
                env.status(m),
                if both { Status::End } else { Status::Stop },
            );
        }
    }
    Ok(())
}

/// Without suspension or shared cells, each instant of a merge prints the
/// left branch's output followed by the right branch's.
pub fn left_before_right(seed: u64) -> Result<(), String> {
    let cfg = GenConfig {
        allow_raise: false,
        allow_cells: false,
        allow_suspend: false,
        max_depth: 4,
        ..GenConfig::default()
    };
    let mut g = Gen::new(seed, cfg);
    let (a, b) = (g.expr(), g.expr());
    let tr = g.trace(10);
    let m = Expr::Merge(Box::new(a.clone()), Box::new(b.clone()));
    let (ta, tb, tm) = (
        engine_trace(&a, &tr, INSTANTS, TEST_LIMITS),
        engine_trace(&b, &tr, INSTANTS, TEST_LIMITS),
        engine_trace(&m, &tr, INSTANTS, TEST_LIMITS),
    );
    if ta.summary.error.is_some() || tb.summary.error.is_some() {
        return Ok(());
    }
    for k in 0..tm.instants.len() {
        let mut want = ta
            .instants
            .get(k)
            .map(|r| r.outputs.clone())
            .unwrap_or_default();
        want.extend(
            tb.instants
                .get(k)
                .map(|r| r.outputs.clone())
                .unwrap_or_default(),
        );
        if tm.instants[k].outputs != want {
            return fail(
                &format!("instant {}", k + 1),
                &m,
                tm.instants[k].outputs.clone(),
                want,
            );
        }
    }
    Ok(())
}

/// A duplicate, run to completion in between, does not disturb the
/// original: the original continues exactly as if never copied.
pub fn dup_isolation(seed: u64) -> Result<(), String> {
    let mut g = Gen::new(seed, GenConfig::default());
    let e = g.expr();
    let tr = g.trace(10);
    let split = (seed % 4) as usize;
    let want = engine_trace(&e, &tr, INSTANTS, TEST_LIMITS);

    let mut env = Environment::with_limits(TEST_LIMITS);
    let root = compile(&e, &mut env).unwrap();
    let mut got = run_events(&mut env, root, &tr[..split.min(tr.len())], split);
    if got.summary.error.is_some() || got.summary.terminated {
        return Ok(());
    }
    let snapshot = env.world.clone();
    let statuses = env.statuses().to_vec();
    let copy = env.dup(root);
    run_events(&mut env, copy, &tr, INSTANTS);
    if env.statuses()[..statuses.len()] != statuses[..] {
        return Err(format!(
            "running the copy changed the original's statuses\nprogram: {e}"
        ));
    }
    env.world = snapshot;
    let quiet = Default::default();
    for k in split..INSTANTS {
        env.world.apply_instant(tr.get(k).unwrap_or(&quiet));
        if !got.record_instant(&mut env, root) {
            break;
        }
    }
    if got != want {
        return fail("original diverged after dup", &e, got, want);
    }
    Ok(())
}

fn same(what: &str, a: &Expr, b: &Expr, seed: u64) -> Result<(), String> {
    let mut g = Gen::new(seed ^ 0x5eed, GenConfig::default());
    let tr = g.trace(10);
    let (ta, tb) = (
        engine_trace(a, &tr, INSTANTS, TEST_LIMITS),
        engine_trace(b, &tr, INSTANTS, TEST_LIMITS),
    );
    if ta != tb {
        return fail(what, a, ta, tb);
    }
    Ok(())
}

/// Derived forms behave like their expansions.
pub fn desugarings(seed: u64) -> Result<(), String> {
    let mut g = Gen::new(
        seed,
        GenConfig {
            max_depth: 4,
            ..GenConfig::default()
        },
    );
    let e = g.expr();
    let c = Cond::Sig(SIGNALS[(seed % 3) as usize].to_string());
    let b = |e: &Expr| Box::new(e.clone());
    let halt = Expr::Loop(Box::new(Expr::Rexp(Instr::Stop)));
    let nothing = Expr::Rexp(Instr::Seq(vec![]));

    same("halt", &Expr::Halt, &halt, seed)?;
    same("nothing", &Expr::Nothing, &nothing, seed)?;
    same(
        "when",
        &Expr::When(c.clone(), b(&e)),
        &Expr::Rif(c.clone(), b(&e), b(&halt)),
        seed,
    )?;
    same(
        "terminate",
        &Expr::Terminate(c.clone(), b(&e)),
        &Expr::Rif(c, b(&nothing), b(&e)),
        seed,
    )?;
    same("close at the root", &Expr::Close(b(&e)), &e, seed)?;
    let n = (seed % 4) as usize;
    let unrolled = Expr::Rexp(Instr::Seq(vec![Instr::Activate(b(&e)); n]));
    same("repeat", &Expr::Repeat(n as i64, b(&e)), &unrolled, seed)
}

/// Signals and payloads never outlive their instant.
pub fn signal_ephemerality(seed: u64) -> Result<(), String> {
    let mut g = Gen::new(seed, GenConfig::default());
    let e = g.expr();
    let tr = g.trace(10);
    let mut env = Environment::with_limits(TEST_LIMITS);
    let root = compile(&e, &mut env).unwrap();
    for ev in &tr {
        env.world.apply_instant(ev);
        let r = env.react(root);
        if SIGNALS
            .iter()
            .any(|s| env.world.signal(s) || env.world.value(s) != 0)
        {
            return Err(format!("signal survived the instant\nprogram: {e}"));
        }
        if !matches!(r, Ok(false)) {
            break;
        }
    }
    // The await starts listening one instant after `b` was present.
    let late = Expr::Rexp(Instr::Seq(vec![
        Instr::Stop,
        Instr::Activate(Box::new(Expr::Await(
            Cond::sig("b"),
            Box::new(Expr::Rexp(Instr::Print(Template::literal("stale")))),
        ))),
    ]));
    let t = engine_trace(&late, &events(&[&["b"], &[]]), 2, TEST_LIMITS);
    if t.instants.iter().any(|r| !r.outputs.is_empty()) {
        return Err("await fired on a stale signal".into());
    }
    Ok(())
}

/// Same program, same trace, same result.
pub fn determinism(seed: u64) -> Result<(), String> {
    let mut g = Gen::new(seed, GenConfig::default());
    let e = g.expr();
    let tr = g.trace(10);
    let t1 = engine_trace(&e, &tr, INSTANTS, TEST_LIMITS);
    let t2 = engine_trace(&e, &tr, INSTANTS, TEST_LIMITS);
    if t1 != t2 {
        return fail("two runs differ", &e, t1, t2);
    }
    Ok(())
}

pub type Check = fn(u64) -> Result<(), String>;

pub const ALL: [(&str, Check); 9] = [
    ("terminal absorption", terminal_absorption),
    ("micro-instant confinement", micro_instant_confinement),
    ("bystander isolation", bystander_isolation),
    ("merge END iff both children END", merge_end_iff_both),
    ("left before right", left_before_right),
    ("dup isolation", dup_isolation),
    ("desugarings", desugarings),
    ("signal ephemerality", signal_ephemerality),
    ("determinism", determinism),
];
