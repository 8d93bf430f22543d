//! `propfrac` command line front end.
//!
//! ```text
//! propfrac eval --op left-int --alpha 0.5 --rho 1 --kernel identity --a 0 --f "1" --grid 0.5:1.5:3
//! propfrac verify --suite all
//! propfrac table specs.txt --out-dir out/
//! ```
//!
//! Exit codes: 0 success, 1 verification failure, 2 invalid input,
//! 3 numerical failure.

mod args;
mod commands;
mod csv;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let status = match cli.command {
        Command::Eval(args) => commands::eval(&args),
        Command::Verify(args) => commands::verify(&args),
        Command::Table(args) => commands::table(&args),
    };
    ExitCode::from(status as u8)
}
