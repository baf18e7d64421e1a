//! Command-line front end for `capflow`.
//!
//! [`run`] parses arguments, executes one subcommand and writes CSV or JSON.
//! Exit status: 0 on success, 2 for invalid arguments or parameters, 3 when
//! a value cannot be computed or a validation row exceeds its threshold.

// `!(x > 0.0)` also rejects NaN, which is the point
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::ffi::OsString;
use std::io::Write;

use clap::error::ErrorKind;
use clap::Parser;

mod args;
mod commands;
mod output;

pub use args::{Cli, Command};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

#[derive(Debug)]
pub(crate) enum Failure {
    Usage(String),
    Numeric(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Usage(_) => EXIT_USAGE,
            Failure::Numeric(_) => EXIT_NUMERIC,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Numeric(m) => m,
        }
    }
}

impl From<capflow::Error> for Failure {
    fn from(e: capflow::Error) -> Self {
        use capflow::Error;
        match e {
            Error::InvalidParameter { name, reason } => {
                Failure::Usage(format!("invalid {}: {reason}", flag_for(name)))
            }
            Error::Domain(m) => Failure::Usage(m),
            other => Failure::Numeric(other.to_string()),
        }
    }
}

/// Command-line flag behind a library parameter name.
fn flag_for(name: &str) -> &str {
    match name {
        "index" => "--n",
        "consistency" => "--consistency",
        "r_min" | "radius" => "--rmin",
        "r_max" => "--rmax",
        "length" => "--length",
        "flow_rate" => "--flow-rate",
        "pressure_drop" => "--pressure",
        "rel_tol" => "--rel-tol",
        "samples" => "--samples",
        "shape" => "--shape",
        other => other,
    }
}

/// Runs one invocation and returns its exit status.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(text.as_bytes());
                    EXIT_OK
                }
                _ => {
                    let _ = err.write_all(text.as_bytes());
                    EXIT_USAGE
                }
            };
        }
    };
    match commands::execute(&cli.command, out, err) {
        Ok(code) => code,
        Err(failure) => {
            let _ = writeln!(err, "error: {}", failure.message());
            failure.code()
        }
    }
}
