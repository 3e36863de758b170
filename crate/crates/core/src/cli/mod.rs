//! Runs a program file against a trace file and reports what happened in
//! each instant.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::dsl::{compile, parse_program, parse_trace, DslError, InstantEvents};
use crate::kernel::{Environment, InstantTrace, Limits};

pub const EXIT_TERMINATED: i32 = 0;
pub const EXIT_ALIVE: i32 = 3;
pub const EXIT_LOAD_ERROR: i32 = 4;
pub const EXIT_RUNTIME_ERROR: i32 = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunConfig {
    pub program_path: PathBuf,
    pub trace_path: Option<PathBuf>,
    pub max_instants: usize,
    pub limits: Limits,
    pub format: Format,
    pub run_to_termination: bool,
}

impl RunConfig {
    pub fn new(program_path: impl Into<PathBuf>) -> Self {
        RunConfig {
            program_path: program_path.into(),
            trace_path: None,
            max_instants: 1000,
            limits: Limits::default(),
            format: Format::Text,
            run_to_termination: false,
        }
    }
}

/// Failure before the first instant runs.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{}: {source}", path.display())]
    Dsl { path: PathBuf, source: DslError },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        EXIT_LOAD_ERROR
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

pub fn exit_code(trace: &InstantTrace) -> i32 {
    if trace.summary.error.is_some() {
        EXIT_RUNTIME_ERROR
    } else if trace.summary.terminated {
        EXIT_TERMINATED
    } else {
        EXIT_ALIVE
    }
}

/// Loads, compiles and runs. Instants past the end of the trace get no
/// events; they only run with `run_to_termination` or when no trace was
/// given at all.
pub fn run(config: &RunConfig) -> Result<(InstantTrace, i32), CliError> {
    let dsl_err = |path: &Path| {
        let path = path.to_owned();
        move |source| CliError::Dsl { path, source }
    };
    let ast = parse_program(&read(&config.program_path)?).map_err(dsl_err(&config.program_path))?;
    let events = match &config.trace_path {
        Some(p) => Some(parse_trace(&read(p)?).map_err(dsl_err(p))?),
        None => None,
    };
    let mut env = Environment::with_limits(config.limits);
    let root = compile(&ast, &mut env).map_err(dsl_err(&config.program_path))?;

    let budget = match &events {
        Some(t) if !config.run_to_termination => t.len().min(config.max_instants),
        _ => config.max_instants,
    };
    let quiet = InstantEvents::default();
    let mut trace = InstantTrace::default();
    for k in 0..budget {
        let ev = events
            .as_ref()
            .and_then(|t| t.instants.get(k))
            .unwrap_or(&quiet);
        env.world.apply_instant(ev);
        if !trace.record_instant(&mut env, root) {
            break;
        }
    }
    let code = exit_code(&trace);
    Ok((trace, code))
}

/// `k: out1|out2` per instant, then `terminated`, `alive` or `error: ...`.
pub fn format_trace(trace: &InstantTrace, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(trace).expect("trace serializes");
            s.push('\n');
            s
        }
        Format::Text => {
            let mut s = String::new();
            for rec in &trace.instants {
                if rec.outputs.is_empty() {
                    let _ = writeln!(s, "{}:", rec.instant);
                } else {
                    let _ = writeln!(s, "{}: {}", rec.instant, rec.outputs.join("|"));
                }
            }
            match &trace.summary.error {
                Some(e) => {
                    let _ = writeln!(s, "error: {e}");
                }
                None if trace.summary.terminated => s.push_str("terminated\n"),
                None => s.push_str("alive\n"),
            }
            s
        }
    }
}
