use std::fmt;

/// Failure categories, each with its own process exit code.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Input(String),
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Input(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Input(m) => write!(f, "input error: {m}"),
            CliError::Numerical(m) => write!(f, "numerical failure: {m}"),
        }
    }
}

impl From<repliq::Error> for CliError {
    fn from(e: repliq::Error) -> Self {
        use repliq::Error::*;
        match e {
            NoSignChange { .. } | MaxIterations { .. } | Quadrature { .. } | Calibration(_) => {
                CliError::Numerical(e.to_string())
            }
            Domain(_) | Singular { .. } | Infeasible { .. } | Refused(_) => CliError::Input(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;
