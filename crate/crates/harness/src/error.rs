use nltr_core::fem::FemError;
use nltr_core::mesh::MeshError;
use nltr_core::signals::SignalError;

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("record was produced by configuration {record}, current configuration is {current}")]
    HashMismatch { record: String, current: String },
    #[error(transparent)]
    Mesh(#[from] MeshError),
    #[error(transparent)]
    Fem(#[from] FemError),
    #[error(transparent)]
    Signal(#[from] SignalError),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl HarnessError {
    /// Process exit code: 2 configuration, 3 instability, 4 contact
    /// non-convergence, 1 anything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Mesh(MeshError::Io(_)) => 1,
            HarnessError::Config(_) | HarnessError::HashMismatch { .. } | HarnessError::Mesh(_) => 2,
            HarnessError::Fem(FemError::Instability { .. }) => 3,
            HarnessError::Fem(FemError::ContactNotConverged { .. }) => 4,
            HarnessError::Fem(
                FemError::CflViolation { .. }
                | FemError::InadmissibleMaterial(..)
                | FemError::DegenerateElement
                | FemError::MissingMass { .. }
                | FemError::InvalidBoundary(_)
                | FemError::InvalidSource(_)
                | FemError::SourceAmplitude { .. }
                | FemError::InvalidContact(_),
            ) => 2,
            HarnessError::Signal(
                SignalError::InvalidChirp(_)
                | SignalError::SamplingBound { .. }
                | SignalError::InvalidCutoff { .. }
                | SignalError::InvalidSchedule(_)
                | SignalError::DelayExceedsBuffer { .. },
            ) => 2,
            _ => 1,
        }
    }
}
