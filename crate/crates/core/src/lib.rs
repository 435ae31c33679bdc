//! Isospectral domain pairs built from colored reflection rules.
//!
//! * [`tiling`]: gluing graphs and the shipped family catalog.
//! * [`transplant`]: exact transplantation matrices.
//! * [`geometry`]: reflected simplex assemblies, isometry tests, meshes.
//! * [`spectra`]: finite-difference Dirichlet spectra and comparisons.

// `!(x > 0.0)` also rejects NaN; index loops read better in the matrix code.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod catalog;
pub mod exact;
pub mod geometry;
pub mod spectra;
pub mod tiling;
pub mod transplant;

pub use exact::{BigIntMatrix, IntMatrix, Matrix, RationalMatrix};
pub use tiling::{
    parse_gluing_file, Color, ColorPermutation, FamilyPair, Glue, GluingGraph, SignConvention,
    TilingError, VerificationStatus,
};
pub use transplant::{
    decomposition_signature, is_nontrivial, solve_transplantation, transplant_coefficients,
    verify_transplantation, DecompositionSignature, ResidualReport, TileVector,
    TransplantationBasis,
};
