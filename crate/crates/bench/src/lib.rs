//! Shared fixtures for the benchmarks.

use isodrum::catalog;
use isodrum::geometry::{build_assembly, Assembly, BaseTile};
use isodrum::spectra::{assemble_laplacian, rasterize, DiscreteLaplacian};
use isodrum::tiling::FamilyPair;

pub fn family(id: &str) -> FamilyPair {
    catalog::family(id).unwrap_or_else(|| panic!("family {id} is shipped"))
}

/// Class A of a family on the basic simplex.
pub fn simplex_assembly(id: &str) -> Assembly {
    build_assembly(&family(id).left, &BaseTile::basic_simplex(), 0).expect("shipped family assembles")
}

pub fn laplacian(id: &str, h: f64) -> DiscreteLaplacian {
    let r = rasterize(&simplex_assembly(id), h).expect("no overlap");
    assemble_laplacian(&r).expect("nonempty")
}
