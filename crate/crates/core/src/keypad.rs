//! Numeric keypad controller.
//!
//! One branch per button, merged and run under a `Clear` handler inside a
//! loop:
//!
//! * ENTER prints `num`, resets it and raises `Clear`;
//! * CLEAR resets `num` and raises `Clear`;
//! * digits are accumulated by `repeat(n, digit)` followed by `halt`, so at
//!   most `n` presses reach `num` per cycle;
//! * NEG (optional) negates `num`, once per cycle.
//!
//! Raising `Clear` abandons the merge. The handler stops for the rest of
//! the instant, after which the loop starts a fresh cycle. The digit body
//! also stops after updating `num`, so each press is consumed by exactly
//! one repetition; the next repetition starts with the next press.
//!
//! Digit presses arrive as a single `digit` signal whose payload is the
//! digit. When ENTER and a digit arrive in the same instant, ENTER wins
//! because its branch is activated first.

use crate::dsl::{Cond, IntExpr, Template};
use crate::kernel::{Environment, ReactiveId};
use crate::program::{Program, Tag};
use crate::ActionSpec;

pub const NUM: &str = "num";
pub const CLEAR_TAG: &str = "Clear";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KeypadSpec {
    /// Size of the number buffer.
    pub n: u64,
    pub neg: bool,
}

impl KeypadSpec {
    pub fn new(n: u64) -> Self {
        assert!(n >= 1, "keypad buffer must hold at least one digit");
        KeypadSpec { n, neg: false }
    }

    pub fn with_neg(self) -> Self {
        KeypadSpec { neg: true, ..self }
    }
}

fn action(a: ActionSpec) -> Program {
    Program::Atom(a.into_host_action())
}

fn set_num(e: IntExpr) -> Program {
    action(ActionSpec::SetCell(NUM.into(), e))
}

fn accumulate() -> IntExpr {
    IntExpr::Add(
        Box::new(IntExpr::Mul(
            Box::new(IntExpr::cell(NUM)),
            Box::new(IntExpr::Lit(10)),
        )),
        Box::new(IntExpr::value("digit")),
    )
}

fn button(env: &mut Environment, signal: &str, body: Program) -> ReactiveId {
    let pressed = env.rexp(body);
    let idle = env.halt();
    env.rif(Cond::sig(signal), pressed, idle)
}

pub fn mk_controller(env: &mut Environment, spec: &KeypadSpec) -> ReactiveId {
    let clear = Program::Raise(Tag::new(CLEAR_TAG));
    let enter = button(
        env,
        "enter",
        Program::seq([
            action(ActionSpec::Print(
                Template::parse("{cell:num}").expect("static template"),
            )),
            set_num(IntExpr::Lit(0)),
            clear.clone(),
        ]),
    );
    let clear = button(
        env,
        "clear",
        Program::seq([set_num(IntExpr::Lit(0)), clear]),
    );
    let digit = button(
        env,
        "digit",
        Program::seq([set_num(accumulate()), Program::Stop]),
    );
    let digits = env.repeat(spec.n, digit);
    let idle = env.halt();
    let getnum = env.rexp(Program::seq([
        Program::Activate(digits),
        Program::Activate(idle),
    ]));

    let mut branches = vec![enter, clear];
    if spec.neg {
        branches.push(button(
            env,
            "neg",
            set_num(IntExpr::Neg(Box::new(IntExpr::cell(NUM)))),
        ));
    }
    branches.push(getnum);
    let buttons = env.par(&branches);

    let cycle = env.rexp(Program::handle(
        Program::Activate(buttons),
        CLEAR_TAG,
        Program::Stop,
    ));
    env.loop_(cycle)
}

/// The same controller in program syntax.
pub fn dsl_source(spec: &KeypadSpec) -> String {
    let neg = if spec.neg {
        "\n          (rif (sig neg) (rexp (set num (neg (cell num)))) (halt))"
    } else {
        ""
    };
    format!(
        r#"; Keypad controller, buffer of {n} digit(s).
(loop
  (rexp
    (handle Clear
      (activate
        (par
          (rif (sig enter)
               (rexp (print "{{cell:num}}") (set num 0) (raise Clear))
               (halt))
          (rif (sig clear)
               (rexp (set num 0) (raise Clear))
               (halt)){neg}
          (rexp
            (activate
              (repeat {n}
                (rif (sig digit)
                     (rexp (set num (+ (* (cell num) 10) (value digit))) (stop))
                     (halt))))
            (activate (halt)))))
      (stop))))
"#,
        n = spec.n
    )
}
