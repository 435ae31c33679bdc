//! Finite-difference Dirichlet spectra on rasterized assemblies.

mod compare;
mod eigen;
mod laplacian;
mod raster;
mod transfer;

use thiserror::Error;

pub use compare::{compare_spectra, compare_values, format_significant, spectrum_csv, ComparisonReport};
pub use eigen::{lowest_eigenvalues, EigenOptions, SolverInfo, SolverKind, Spectrum, DEFAULT_SEED};
pub use laplacian::{assemble_laplacian, DiscreteLaplacian};
pub use raster::{rasterize, RasterDomain};
pub use transfer::{transplant_grid_function, TransplantedFunction};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectraError {
    #[error("mesh size must be positive, got {0}")]
    NonPositiveH(f64),
    #[error("assembly has overlapping tiles; spectra are undefined")]
    Overlapping,
    #[error("domain has no interior grid nodes")]
    EmptyDomain,
    #[error("requested {requested} eigenvalues but the operator has size {available}")]
    TooManyModes { requested: usize, available: usize },
    #[error("need {requested} eigenvalues, have {available}")]
    InsufficientEigenvalues { requested: usize, available: usize },
    #[error("no convergence after {iterations} restarts; worst relative residual {worst:.3e}")]
    NotConverged { iterations: usize, worst: f64, residuals: Vec<f64> },
    #[error("sparse factorization failed: {0}")]
    Factorization(String),
    #[error("incompatible inputs: {0}")]
    Incompatible(String),
}
