use std::path::PathBuf;

use isodrum::geometry::GeometryError;
use isodrum::spectra::SpectraError;
use isodrum::tiling::TilingError;
use isodrum::transplant::TransplantError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("unknown family `{0}` (not shipped and not a readable file)")]
    UnknownFamily(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{0}")]
    Tiling(#[from] TilingError),
    #[error("{0}")]
    Geometry(#[from] GeometryError),
    #[error("{0}")]
    Transplant(#[from] TransplantError),
    #[error("{0}")]
    Spectra(SpectraError),
}

impl From<SpectraError> for CliError {
    fn from(e: SpectraError) -> Self {
        CliError::Spectra(e)
    }
}

impl CliError {
    pub fn code(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "E_USAGE",
            CliError::UnknownFamily(_) => "E_UNKNOWN_FAMILY",
            CliError::Io { .. } => "E_IO",
            CliError::Tiling(_) => "E_PARSE",
            CliError::Geometry(_) => "E_GEOMETRY",
            CliError::Transplant(_) => "E_TRANSPLANT",
            CliError::Spectra(SpectraError::Overlapping) => "E_OVERLAP",
            CliError::Spectra(SpectraError::NotConverged { .. }) => "E_NOT_CONVERGED",
            CliError::Spectra(_) => "E_SPECTRA",
        }
    }

    /// `error[CODE]: message` on one line.
    pub fn line(&self) -> String {
        let text = self.to_string();
        let msg: Vec<&str> = text.lines().map(str::trim).filter(|l| !l.is_empty()).collect();
        format!("error[{}]: {}", self.code(), msg.join("; "))
    }
}
