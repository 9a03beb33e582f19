use std::fmt;

use gbss_core::Error;

#[derive(Debug)]
pub enum CliError {
    /// Bad flags or a malformed state descriptor.
    Usage(String),
    /// The state has negative closed-form eigenvalues.
    NotPhysical { margins: Vec<f64> },
    Io(String),
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::NotPhysical { .. } => 3,
            CliError::Io(_) | CliError::Failed(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) | CliError::Io(msg) | CliError::Failed(msg) => f.write_str(msg),
            CliError::NotPhysical { margins } => {
                write!(f, "state is not physical; eigenvalue margins:")?;
                for m in margins {
                    write!(f, " {m:.6e}")?;
                }
                Ok(())
            }
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::NotPhysical { min_eigenvalue } => CliError::NotPhysical { margins: vec![min_eigenvalue] },
            Error::InvalidGammaDimension { .. }
            | Error::NotPowerOfTwo(_)
            | Error::UnsupportedConvention { .. }
            | Error::BasisTooLarge { .. }
            | Error::LengthMismatch { .. }
            | Error::SubsystemOrder { .. }
            | Error::NonzeroLocalVectors
            | Error::InvalidEntropy(_)
            | Error::EmptyBudget
            | Error::UnsupportedSide
            | Error::InvalidArgument(_)
            | Error::Descriptor(_)
            | Error::StarProductUndefined
            | Error::DimensionMismatch { .. } => CliError::Usage(e.to_string()),
            Error::ZeroProbability => CliError::Failed(e.to_string()),
        }
    }
}
