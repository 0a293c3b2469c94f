//! The `tweetcone` command line: one subcommand per pipeline stage plus
//! `pipeline`, which chains them.
//!
//! Exit codes: 0 on success, 1 on runtime failure (one-line diagnostic on
//! stderr), 2 on usage errors.

mod args;
mod commands;
mod fsio;

use std::ffi::OsString;

use clap::error::ErrorKind;
use clap::Parser;

pub use args::Cli;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
        }
    };
    if !cli.quiet {
        let line: Vec<String> = argv.iter().map(|a| a.to_string_lossy().into_owned()).collect();
        eprintln!("{}", line.join(" "));
    }
    match commands::execute(&cli) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e:#}");
            EXIT_FAILURE
        }
    }
}
