use std::fmt;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Parse(String),
    IllConditioned(String),
    Core(hodgelab::Error),
    Io(std::io::Error),
}

impl CliError {
    /// Process exit status: 2 for usage and parse errors, 3 for numerical
    /// conditioning, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Parse(_) => 2,
            CliError::IllConditioned(_) => 3,
            CliError::Core(hodgelab::Error::Parse(_)) => 2,
            CliError::Core(hodgelab::Error::IllConditionedSpectrum(_)) => 3,
            CliError::Core(_) | CliError::Io(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Parse(m) => write!(f, "parse error: {m}"),
            CliError::IllConditioned(m) => write!(f, "ill-conditioned: {m}"),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "io error: {e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<hodgelab::Error> for CliError {
    fn from(e: hodgelab::Error) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}
