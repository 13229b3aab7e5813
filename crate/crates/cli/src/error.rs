use std::fmt;

pub const EXIT_ASSERTION: u8 = 1;
pub const EXIT_INPUT: u8 = 2;
pub const EXIT_PRECONDITION: u8 = 3;

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn input(message: impl Into<String>) -> Self {
        Self { code: EXIT_INPUT, message: message.into() }
    }

    pub fn precondition(message: impl Into<String>) -> Self {
        Self { code: EXIT_PRECONDITION, message: message.into() }
    }

    pub fn assertion(message: impl Into<String>) -> Self {
        Self { code: EXIT_ASSERTION, message: message.into() }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<loadspace::Error> for CliError {
    fn from(e: loadspace::Error) -> Self {
        CliError::precondition(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;
