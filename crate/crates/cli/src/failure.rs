use std::fmt;
use std::process::ExitCode;

use tdvrp_core::builder::{FetchError, ProviderError};
use tdvrp_core::export::ExportError;
use tdvrp_core::io::FormatError;
use tdvrp_core::{ModelError, SolveError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    /// Bad files, flags or parameters.
    Input,
    /// The travel-time provider failed or the quota ran out.
    Backend,
    /// A result violated an invariant the code is supposed to guarantee.
    Internal,
}

#[derive(Debug)]
pub struct Failure {
    pub kind: Kind,
    pub error: anyhow::Error,
}

impl Failure {
    pub fn input(error: impl Into<anyhow::Error>) -> Self {
        Self { kind: Kind::Input, error: error.into() }
    }

    pub fn backend(error: impl Into<anyhow::Error>) -> Self {
        Self { kind: Kind::Backend, error: error.into() }
    }

    pub fn internal(error: impl Into<anyhow::Error>) -> Self {
        Self { kind: Kind::Internal, error: error.into() }
    }

    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(match self.kind {
            Kind::Input => 2,
            Kind::Backend => 3,
            Kind::Internal => 4,
        })
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#}", self.error)
    }
}

impl From<FormatError> for Failure {
    fn from(e: FormatError) -> Self {
        Self::input(e)
    }
}

impl From<ModelError> for Failure {
    fn from(e: ModelError) -> Self {
        Self::input(e)
    }
}

impl From<ExportError> for Failure {
    fn from(e: ExportError) -> Self {
        Self::input(e)
    }
}

impl From<SolveError> for Failure {
    fn from(e: SolveError) -> Self {
        match e {
            // the solver only builds routes itself, so a bad one is our bug
            SolveError::Model(ModelError::InvalidRoute(_)) => Self::internal(e),
            _ => Self::input(e),
        }
    }
}

impl From<FetchError> for Failure {
    fn from(e: FetchError) -> Self {
        match e {
            FetchError::Model(_) => Self::input(e),
            _ => Self::backend(e),
        }
    }
}

impl From<ProviderError> for Failure {
    fn from(e: ProviderError) -> Self {
        Self::backend(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Self::input(e)
    }
}
