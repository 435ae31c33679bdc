//! Mirror-reflection assembly of tiles in the plane and in space.

mod assembly;
mod isometry;
mod mesh;
mod mirror;
mod tile;

use thiserror::Error;

use crate::tiling::Color;

pub use assembly::{build_assembly, extrude_prism, Assembly, FaceRef, GluedFace, TileInstance};
pub use isometry::{is_isometric, IsometryReport, IsometryWitness};
pub use mesh::{export_mesh, MeshFormat};
pub use mirror::{mirror_point, reflect_point_2d, RigidTransform};
pub use tile::BaseTile;

pub type Point3 = nalgebra::Point3<f64>;
pub type Point2 = nalgebra::Point2<f64>;

/// Tolerance for face coincidence and alignment, in model units.
pub const EPS_GEOM: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("degenerate face: the three points are collinear")]
    DegenerateFace,
    #[error("degenerate edge: endpoints coincide")]
    DegenerateEdge,
    #[error("degenerate base tile: {0}")]
    DegenerateBase(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("expected a {expected}D assembly, got {found}D")]
    WrongDimension { expected: usize, found: usize },
    #[error("prism height must be positive, got {0}")]
    NonPositiveHeight(f64),
    #[error("root tile {root} out of range for {n_tiles} tiles")]
    BadRoot { root: usize, n_tiles: usize },
    #[error("tiles {} and {} do not share their {color} face after reflection", tiles.0, tiles.1)]
    Inconsistent { tiles: (usize, usize), color: Color },
    #[error("unsupported mesh format '{0}'")]
    UnsupportedFormat(String),
}
