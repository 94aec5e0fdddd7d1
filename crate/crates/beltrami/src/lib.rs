//! Command-line front end for `beltrami-core`.

// `!(x >= 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod args;
pub mod commands;
pub mod config;
pub mod error;
pub mod flow;
pub mod output;

use std::ffi::OsString;

use clap::Parser;

use crate::args::{Cli, Command};

/// Parses `args` (including the program name), runs the subcommand and
/// returns the process exit code.
pub fn run(args: Vec<OsString>) -> u8 {
    let args = match config::expand(args) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return e.exit_code();
        }
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return u8::try_from(e.exit_code()).unwrap_or(2);
        }
    };
    let result = match &cli.command {
        Command::Eigen(a) => commands::eigen(a),
        Command::Construct(a) => commands::construct(a),
        Command::Verify(a) => commands::verify(a),
        Command::Pathlimit(a) => commands::pathlimit(a),
        Command::Export(a) => commands::export(a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
