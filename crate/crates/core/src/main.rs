use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use instants::cli::{format_trace, run, Format, RunConfig};
use instants::Limits;

/// Run a reactive program instant by instant against a scripted event trace.
#[derive(Debug, Parser)]
#[command(name = "instants", version)]
struct Args {
    /// Program source file.
    #[arg(long, value_name = "FILE")]
    program: PathBuf,

    /// Event trace, one instant per line.
    #[arg(long, value_name = "FILE")]
    trace: Option<PathBuf>,

    #[arg(long, value_name = "N", default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
    max_instants: u64,

    /// Re-activations of a suspended expression allowed within one close.
    #[arg(long, value_name = "N", default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(1..))]
    max_micro: u64,

    /// Body restarts allowed within one activation of a loop or repeat.
    #[arg(long, value_name = "N", default_value_t = 1_000_000, value_parser = clap::value_parser!(u64).range(1..))]
    max_loop_restarts: u64,

    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Keep running with empty instants after the trace ends.
    #[arg(long)]
    run_to_termination: bool,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let config = RunConfig {
        program_path: args.program,
        trace_path: args.trace,
        max_instants: usize::try_from(args.max_instants).unwrap_or(usize::MAX),
        limits: Limits {
            max_micro_steps: args.max_micro,
            max_loop_restarts: args.max_loop_restarts,
        },
        format: args.format,
        run_to_termination: args.run_to_termination,
    };
    match run(&config) {
        Ok((trace, code)) => {
            print!("{}", format_trace(&trace, config.format));
            if let Some(e) = &trace.summary.error {
                eprintln!("instants: {e}");
            }
            ExitCode::from(code as u8)
        }
        Err(e) => {
            eprintln!("instants: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
