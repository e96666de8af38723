use std::fmt;
use std::process::ExitCode;

use spd_geom::GeomError;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Geom(GeomError),
    Io(String),
}

impl CliError {
    /// 2 for usage and parse errors, 3 for mathematical domain errors,
    /// 1 for i/o failures.
    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Usage(_) | CliError::Geom(GeomError::InvalidConfig(_)) => ExitCode::from(2),
            CliError::Io(_) | CliError::Geom(GeomError::Io(_)) => ExitCode::from(1),
            CliError::Geom(_) => ExitCode::from(3),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Geom(e) => write!(f, "error: {e}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl From<GeomError> for CliError {
    fn from(e: GeomError) -> Self {
        CliError::Geom(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.to_string())
    }
}
