//! Process exit codes.

use std::fmt;
use std::io;
use std::process::ExitCode;

/// `verify` found at least one failing comparison.
pub const EXIT_FAILURES: u8 = 1;
pub const EXIT_INVALID: u8 = 2;
pub const EXIT_RESOURCE: u8 = 3;
pub const EXIT_UNSUPPORTED: u8 = 4;
pub const EXIT_IO: u8 = 5;

#[derive(Debug)]
pub enum CliError {
    Eval(charsum::Error),
    Io(io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        use charsum::Error::*;
        ExitCode::from(match self {
            CliError::Io(_) => EXIT_IO,
            CliError::Eval(ResourceLimit { .. }) => EXIT_RESOURCE,
            CliError::Eval(UnsupportedRegime(_) | Precondition(_)) => EXIT_UNSUPPORTED,
            CliError::Eval(_) => EXIT_INVALID,
        })
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Eval(e) => e.fmt(f),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl From<charsum::Error> for CliError {
    fn from(e: charsum::Error) -> Self {
        CliError::Eval(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}
