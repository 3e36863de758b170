//! Seeded random programs and event traces.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use instants::dsl::{ActionSpec, Cond, Expr, InstantEvents, Instr, IntExpr, Template};
use instants::Tag;

pub const SIGNALS: [&str; 3] = ["a", "b", "c"];
pub const CELLS: [&str; 2] = ["x", "y"];
pub const TAGS: [&str; 2] = ["E", "F"];

#[derive(Debug, Clone, Copy)]
pub struct GenConfig {
    pub max_depth: u32,
    pub max_instrs: usize,
    pub allow_raise: bool,
    pub allow_cells: bool,
    pub allow_suspend: bool,
    pub allow_loops: bool,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            max_depth: 5,
            max_instrs: 8,
            allow_raise: true,
            allow_cells: true,
            allow_suspend: true,
            allow_loops: true,
        }
    }
}

pub struct Gen {
    rng: ChaCha8Rng,
    cfg: GenConfig,
    labels: u32,
}

impl Gen {
    pub fn new(seed: u64, cfg: GenConfig) -> Self {
        Gen {
            rng: ChaCha8Rng::seed_from_u64(seed),
            cfg,
            labels: 0,
        }
    }

    pub fn expr(&mut self) -> Expr {
        let d = self.cfg.max_depth;
        self.expr_at(d)
    }

    fn boxed(&mut self, depth: u32) -> Box<Expr> {
        Box::new(self.expr_at(depth - 1))
    }

    fn expr_at(&mut self, depth: u32) -> Expr {
        if depth <= 1 {
            return match self.rng.gen_range(0..10) {
                0 if self.cfg.allow_loops => Expr::Halt,
                1 => Expr::Nothing,
                _ => Expr::Rexp(self.basic(1)),
            };
        }
        match self.rng.gen_range(0..20) {
            0..=5 => Expr::Rexp(self.basic(depth)),
            6..=8 => Expr::Merge(self.boxed(depth), self.boxed(depth)),
            9 | 10 => {
                let c = self.cond(2);
                Expr::Rif(c, self.boxed(depth), self.boxed(depth))
            }
            11 => Expr::Close(self.boxed(depth)),
            12 if self.cfg.allow_loops => Expr::Loop(self.boxed(depth)),
            13 => Expr::Repeat(self.rng.gen_range(0..4), self.boxed(depth)),
            14 => {
                let a = self.action();
                Expr::Init(a, self.boxed(depth))
            }
            15 => {
                let c = self.cond(1);
                Expr::Await(c, self.boxed(depth))
            }
            16 if self.cfg.allow_loops => {
                let c = self.cond(1);
                Expr::When(c, self.boxed(depth))
            }
            17 => {
                let c = self.cond(1);
                Expr::Terminate(c, self.boxed(depth))
            }
            18 if self.cfg.allow_loops => Expr::Halt,
            _ => Expr::Nothing,
        }
    }

    fn basic(&mut self, depth: u32) -> Instr {
        let mut budget = self.rng.gen_range(1..=self.cfg.max_instrs);
        Instr::Seq(self.instrs(depth, &mut budget, 2))
    }

    fn instrs(&mut self, depth: u32, budget: &mut usize, nest: u32) -> Vec<Instr> {
        if *budget == 0 {
            return Vec::new();
        }
        let n = self.rng.gen_range(1..=(*budget).min(5));
        let mut out = Vec::new();
        for _ in 0..n {
            if *budget == 0 {
                break;
            }
            *budget -= 1;
            out.push(self.instr(depth, budget, nest));
        }
        out
    }

    fn instr(&mut self, depth: u32, budget: &mut usize, nest: u32) -> Instr {
        loop {
            match self.rng.gen_range(0..13) {
                0..=2 | 12 => return Instr::Print(self.template()),
                3 if self.cfg.allow_cells => {
                    let c = self.pick(&CELLS);
                    return Instr::Set(c, self.int(2));
                }
                4 | 5 => return Instr::Stop,
                6 if self.cfg.allow_suspend => return Instr::Suspend,
                7 | 8 if depth > 1 => return Instr::Activate(self.boxed(depth)),
                9 if self.cfg.allow_raise && self.rng.gen_bool(0.4) => {
                    return Instr::Raise(Tag::new(&self.pick(&TAGS)))
                }
                10 if nest > 0 => {
                    let tag = Tag::new(&self.pick(&TAGS));
                    let body = Box::new(Instr::Seq(self.instrs(depth, budget, nest - 1)));
                    let handler = Box::new(Instr::Seq(self.instrs(depth, budget, nest - 1)));
                    return Instr::Handle { tag, body, handler };
                }
                11 if nest > 0 => return Instr::Seq(self.instrs(depth, budget, nest - 1)),
                _ => {}
            }
        }
    }

    fn template(&mut self) -> Template {
        self.labels += 1;
        let label = format!("p{}", self.labels);
        if self.cfg.allow_cells && self.rng.gen_bool(0.3) {
            let c = self.pick(&CELLS);
            Template::parse(&format!("{label}:{{cell:{c}}}")).unwrap()
        } else if self.rng.gen_bool(0.1) {
            Template::parse(&format!("{label}:{{value:a}}")).unwrap()
        } else {
            Template::literal(label)
        }
    }

    fn action(&mut self) -> ActionSpec {
        match self.rng.gen_range(0..5) {
            0 if self.cfg.allow_raise && self.rng.gen_bool(0.4) => {
                ActionSpec::Raise(Tag::new(&self.pick(&TAGS)))
            }
            1 | 2 if self.cfg.allow_cells => ActionSpec::SetCell(self.pick(&CELLS), self.int(2)),
            3 => ActionSpec::Seq(vec![
                ActionSpec::Print(self.template()),
                ActionSpec::Print(self.template()),
            ]),
            _ => ActionSpec::Print(self.template()),
        }
    }

    fn cond(&mut self, depth: u32) -> Cond {
        let leaf = depth == 0;
        match self.rng.gen_range(0..if leaf { 4 } else { 8 }) {
            0 => Cond::True,
            1 => Cond::False,
            2 | 3 => Cond::Sig(self.pick(&SIGNALS)),
            4 => Cond::Not(Box::new(self.cond(depth - 1))),
            5 => Cond::And(vec![self.cond(depth - 1), self.cond(depth - 1)]),
            6 => Cond::Or(vec![self.cond(depth - 1), self.cond(depth - 1)]),
            _ if self.cfg.allow_cells => {
                Cond::Lt(self.int(1), IntExpr::Lit(self.rng.gen_range(0..4)))
            }
            _ => Cond::Sig(self.pick(&SIGNALS)),
        }
    }

    fn int(&mut self, depth: u32) -> IntExpr {
        match self.rng.gen_range(0..if depth == 0 { 3 } else { 6 }) {
            0 => IntExpr::Lit(self.rng.gen_range(-3..10)),
            1 => IntExpr::Cell(self.pick(&CELLS)),
            2 => IntExpr::Value("a".into()),
            3 => IntExpr::Add(Box::new(self.int(depth - 1)), Box::new(self.int(depth - 1))),
            4 => IntExpr::Mul(Box::new(self.int(depth - 1)), Box::new(self.int(depth - 1))),
            _ => IntExpr::Neg(Box::new(self.int(depth - 1))),
        }
    }

    fn pick(&mut self, names: &[&str]) -> String {
        names.choose(&mut self.rng).unwrap().to_string()
    }

    /// Up to `max_len` instants; each signal present with probability 0.4.
    pub fn trace(&mut self, max_len: usize) -> Vec<InstantEvents> {
        let len = self.rng.gen_range(1..=max_len);
        (0..len)
            .map(|_| {
                let mut ev = InstantEvents::new();
                for s in SIGNALS {
                    if self.rng.gen_bool(0.4) {
                        let payload = (s == "a" && self.rng.gen_bool(0.5))
                            .then(|| self.rng.gen_range(-5..20));
                        ev.insert(s, payload).unwrap();
                    }
                }
                ev
            })
            .collect()
    }
}
