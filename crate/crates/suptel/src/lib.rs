//! Command-line front end for `suptel-core`.
//!
//! [`run`] parses arguments, executes one subcommand and renders its report.
//! Exit codes: 0 on success or PASS, 1 on a FAIL verdict, 2 on usage,
//! parse or domain errors.

use std::ffi::OsString;
use std::io::Write;

use clap::Parser;

mod cli;
mod commands;
mod output;
mod parse;

pub use cli::Format;
pub use parse::exact_number;

use cli::{Cli, Command};
use suptel_core::Error;

pub const EXIT_FAIL: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

fn describe(e: &Error) -> String {
    match e {
        Error::PoleHit { index } => format!(
            "pole hit at boundary index i={index}: beta = -1/{index} makes 1/({index}*beta + 1) singular"
        ),
        other => other.to_string(),
    }
}

pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { 0 };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { write!(err, "{text}") } else { write!(out, "{text}") };
            return code;
        }
    };
    let format = cli.format();
    let approx = cli.approx;
    let result = match &cli.command {
        Command::Verify(a) => commands::verify(a, approx),
        Command::Residues(a) => commands::residues(a, approx),
        Command::Partition(a) => commands::partition(a, approx),
        Command::Zeta(a) => commands::zeta(a),
        Command::Gf(a) => commands::gf(a, approx),
        Command::Sample(a) => {
            let seed = a.seed.unwrap_or_else(|| fresh_seed(err));
            commands::sample(a, seed)
        }
        Command::Moments(a) => {
            let seed = match (a.mc, a.seed) {
                (_, Some(s)) => Some(s),
                (Some(_), None) => Some(fresh_seed(err)),
                (None, None) => None,
            };
            commands::moments(a, seed, approx)
        }
    };
    match result {
        Ok(report) => {
            if let Err(e) = report.render(format, out) {
                let _ = writeln!(err, "error: cannot write output: {e}");
                return EXIT_ERROR;
            }
            report.exit_code()
        }
        Err(e) => {
            let _ = writeln!(err, "error: {}", describe(&e));
            EXIT_ERROR
        }
    }
}

fn fresh_seed(err: &mut dyn Write) -> u64 {
    let seed: u64 = rand::random();
    let _ = writeln!(err, "seed: {seed}");
    seed
}
