mod args;
mod commands;
mod error;
mod output;

use std::process::ExitCode;

use clap::Parser;

use crate::args::{Cli, Command};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let outcome = match &cli.command {
        Command::Eval(a) => commands::eval(a).map(|_| true),
        Command::Roof(a) => commands::roof(a).map(|_| true),
        Command::Sweep(a) => commands::sweep_cmd(a).map(|_| true),
        Command::Interf(a) => commands::interf(a).map(|_| true),
        Command::Check(a) => commands::check(a),
        Command::Gen(a) => commands::gen(a).map(|_| true),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("check: one or more properties failed; see the report");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("triality: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
