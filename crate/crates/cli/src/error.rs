use thiserror::Error;

pub const EXIT_USAGE: i32 = 1;
pub const EXIT_NUMERICAL: i32 = 2;
pub const EXIT_REPRODUCTION: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Lib(#[from] specwave::Error),

    #[error("{0} reproduction check(s) failed")]
    Reproduction(usize),
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Lib(e.into())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Lib(e.into())
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use specwave::Error as E;
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Reproduction(_) => EXIT_REPRODUCTION,
            CliError::Lib(E::InvalidInput(_) | E::Parse(_) | E::Io(_) | E::Json(_)) => EXIT_USAGE,
            CliError::Lib(E::Stability { .. } | E::BranchViolation { .. } | E::MeasurementUndefined(_)) => {
                EXIT_NUMERICAL
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn codes() {
        assert_eq!(CliError::Usage("x".into()).exit_code(), 1);
        let stab = specwave::Error::Stability { sigma: 2.0, limit: 1.0 };
        assert_eq!(CliError::from(stab).exit_code(), 2);
        let undef = specwave::Error::MeasurementUndefined("flat".into());
        assert_eq!(CliError::from(undef).exit_code(), 2);
        assert_eq!(CliError::Reproduction(1).exit_code(), 3);
    }
}
