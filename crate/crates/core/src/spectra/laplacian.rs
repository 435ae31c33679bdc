use nalgebra::DMatrix;

use super::raster::RasterDomain;
use super::SpectraError;

/// The 5-point (2D) or 7-point (3D) Dirichlet Laplacian on the interior
/// nodes. Stored as an integer stencil; entries are `2d/h²` on the
/// diagonal and `−1/h²` between lattice neighbours.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteLaplacian {
    dim: usize,
    h: f64,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
}

pub fn assemble_laplacian(r: &RasterDomain) -> Result<DiscreteLaplacian, SpectraError> {
    if r.n_interior() == 0 {
        return Err(SpectraError::EmptyDomain);
    }
    let mut row_ptr = Vec::with_capacity(r.n_interior() + 1);
    let mut cols = Vec::new();
    row_ptr.push(0);
    for node in r.nodes() {
        let start = cols.len();
        for ax in 0..r.dim() {
            for s in [-1, 1] {
                let mut q = *node;
                q[ax] += s;
                if let Some(j) = r.index_of(q) {
                    cols.push(j);
                }
            }
        }
        cols[start..].sort_unstable();
        row_ptr.push(cols.len());
    }
    Ok(DiscreteLaplacian {
        dim: r.dim(),
        h: r.h(),
        row_ptr,
        cols,
    })
}

impl DiscreteLaplacian {
    pub fn n(&self) -> usize {
        self.row_ptr.len() - 1
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn diagonal_value(&self) -> f64 {
        2.0 * self.dim as f64 / (self.h * self.h)
    }

    pub fn off_diagonal_value(&self) -> f64 {
        -1.0 / (self.h * self.h)
    }

    /// Interior lattice neighbours of row `i`, ascending.
    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.cols[self.row_ptr[i]..self.row_ptr[i + 1]]
    }

    /// Stored nonzeros including the diagonal.
    pub fn nnz(&self) -> usize {
        self.cols.len() + self.n()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        if i == j {
            self.diagonal_value()
        } else if self.neighbors(i).binary_search(&j).is_ok() {
            self.off_diagonal_value()
        } else {
            0.0
        }
    }

    /// `y = L x`.
    pub fn apply(&self, x: &[f64], y: &mut [f64]) {
        let (d, o) = (self.diagonal_value(), self.off_diagonal_value());
        for i in 0..self.n() {
            let s: f64 = self.neighbors(i).iter().map(|&j| x[j]).sum();
            y[i] = d * x[i] + o * s;
        }
    }

    pub fn mul(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.n()];
        self.apply(x, &mut y);
        y
    }

    /// `xᵀLx / xᵀx`.
    pub fn rayleigh_quotient(&self, x: &[f64]) -> f64 {
        let lx = self.mul(x);
        let num: f64 = x.iter().zip(&lx).map(|(a, b)| a * b).sum();
        let den: f64 = x.iter().map(|a| a * a).sum();
        num / den
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n()).all(|i| self.neighbors(i).iter().all(|&j| self.neighbors(j).binary_search(&i).is_ok()))
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.n(), self.n(), |i, j| self.get(i, j))
    }

    /// Lower triangle of `h²L` as (row, col, value) triplets.
    pub(crate) fn stencil_lower(&self) -> Vec<(usize, usize, f64)> {
        let mut out = Vec::with_capacity(self.nnz());
        for i in 0..self.n() {
            out.push((i, i, 2.0 * self.dim as f64));
            out.extend(self.neighbors(i).iter().filter(|&&j| j > i).map(|&j| (j, i, -1.0)));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{Assembly, BaseTile};
    use crate::spectra::rasterize;

    #[test]
    fn single_node_operators() {
        let cube = Assembly::single(&BaseTile::unit_cube()).unwrap();
        let l = assemble_laplacian(&rasterize(&cube, 0.5).unwrap()).unwrap();
        assert_eq!(l.to_dense(), DMatrix::from_element(1, 1, 24.0));
        let g = crate::GluingGraph::from_pairs(2, [&[(0, 1)], &[], &[]]).unwrap();
        let square = crate::geometry::build_assembly(&g, &BaseTile::right_isosceles(), 0).unwrap();
        let l = assemble_laplacian(&rasterize(&square, 0.5).unwrap()).unwrap();
        assert_eq!(l.to_dense(), DMatrix::from_element(1, 1, 16.0));
    }

    #[test]
    fn cube_quarter_step_structure() {
        let cube = Assembly::single(&BaseTile::unit_cube()).unwrap();
        let l = assemble_laplacian(&rasterize(&cube, 0.25).unwrap()).unwrap();
        assert_eq!(l.n(), 27);
        assert!(l.is_symmetric());
        // 27 nodes, 3·(3·3·2) lattice edges counted twice
        assert_eq!(l.nnz(), 27 + 2 * 54);
        assert_eq!(l.get(0, 1), -16.0);
        assert_eq!(l.get(0, 0), 96.0);
    }
}
