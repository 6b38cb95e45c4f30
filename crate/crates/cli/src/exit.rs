//! Exit-code contract: 0 ok, 2 argument or precondition, 3 I/O, 4 parse,
//! 5 semantic (not informationally complete, failed validation, ...).

use gsic_core::Error;

pub const USAGE: u8 = 2;
pub const IO: u8 = 3;
pub const PARSE: u8 = 4;
pub const SEMANTIC: u8 = 5;

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

pub type CliResult<T> = Result<T, CliError>;

impl CliError {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }

    pub fn usage(message: impl Into<String>) -> Self {
        Self::new(USAGE, message)
    }

    pub fn io(message: impl Into<String>) -> Self {
        Self::new(IO, message)
    }

    pub fn parse(message: impl Into<String>) -> Self {
        Self::new(PARSE, message)
    }

    pub fn semantic(message: impl Into<String>) -> Self {
        Self::new(SEMANTIC, message)
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::UnsupportedDimension(_) | Error::LambdaRange { .. } | Error::Range(_) => USAGE,
            Error::Parse { .. } => PARSE,
            _ => SEMANTIC,
        };
        Self::new(code, e.to_string())
    }
}
