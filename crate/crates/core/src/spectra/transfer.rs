use super::laplacian::DiscreteLaplacian;
use super::raster::RasterDomain;
use super::SpectraError;
use crate::exact::Matrix;
use crate::geometry::{Assembly, Point3, EPS_GEOM};

#[derive(Debug, Clone, PartialEq)]
pub struct TransplantedFunction {
    /// One value per interior node of the destination grid.
    pub values: Vec<f64>,
    /// `vᵀLv / vᵀv` under the destination operator (NaN for v = 0).
    pub rayleigh_quotient: f64,
    pub norm: f64,
    /// Destination nodes that fell in no tile.
    pub unmapped: usize,
}

fn in_tile(a: &Assembly, tile: usize, p: &Point3) -> bool {
    let tol = EPS_GEOM * a.base().diameter().max(1.0);
    (0..a.base().faces().len()).all(|f| {
        let (n, off) = a.face_plane(crate::geometry::FaceRef { tile, face: f });
        n.dot(&p.coords) - off <= tol * n.norm()
    })
}

/// Multilinear interpolation of a grid function; nodes outside the
/// interior count as zero.
fn interpolate(grid: &RasterDomain, values: &[f64], p: &Point3) -> f64 {
    let mut base = [0i64; 3];
    let mut frac = [0.0; 3];
    for ax in 0..grid.dim() {
        let u = p[ax] / grid.h();
        let r = u.round();
        if (u - r).abs() <= 1e-9 * u.abs().max(1.0) {
            base[ax] = r as i64;
        } else {
            base[ax] = u.floor() as i64;
            frac[ax] = u - u.floor();
        }
    }
    let mut total = 0.0;
    for corner in 0..(1 << grid.dim()) {
        let mut q = base;
        let mut weight = 1.0;
        for ax in 0..grid.dim() {
            let up = corner >> ax & 1 == 1;
            if up {
                q[ax] += 1;
            }
            weight *= if up { frac[ax] } else { 1.0 - frac[ax] };
        }
        if weight != 0.0 {
            if let Some(k) = grid.index_of(q) {
                total += weight * values[k];
            }
        }
    }
    total
}

/// Builds `ψ_i = C Σ_j T_ij φ_j` node by node: each destination node in
/// tile `i` is pulled back to the base tile and pushed into every source
/// tile `j`, where the source grid function is interpolated.
#[allow(clippy::too_many_arguments)]
pub fn transplant_grid_function(
    src: &Assembly,
    src_grid: &RasterDomain,
    phi: &[f64],
    dst: &Assembly,
    dst_grid: &RasterDomain,
    dst_op: &DiscreteLaplacian,
    t: &Matrix<f64>,
    c: f64,
) -> Result<TransplantedFunction, SpectraError> {
    let n_tiles = src.tiles().len();
    if dst.tiles().len() != n_tiles || t.rows() != n_tiles || t.cols() != n_tiles {
        return Err(SpectraError::Incompatible("tile counts differ".into()));
    }
    let same_base = src.base().vertices().iter().zip(dst.base().vertices()).all(|(p, q)| (p - q).norm() <= EPS_GEOM)
        && src.base().vertices().len() == dst.base().vertices().len();
    if !same_base {
        return Err(SpectraError::Incompatible("different base tiles".into()));
    }
    if phi.len() != src_grid.n_interior() || dst_op.n() != dst_grid.n_interior() {
        return Err(SpectraError::Incompatible("vector length does not match its grid".into()));
    }
    let back: Vec<_> = dst.tiles().iter().map(|t| t.transform.inverse()).collect();
    let mut values = vec![0.0; dst_grid.n_interior()];
    let mut unmapped = 0;
    for (k, v) in values.iter_mut().enumerate() {
        let x = dst_grid.node_point(k);
        let Some(i) = (0..n_tiles).find(|&i| in_tile(dst, i, &x)) else {
            unmapped += 1;
            continue;
        };
        let p = back[i].apply(&x);
        let mut s = 0.0;
        for j in 0..n_tiles {
            let tij = t[(i, j)];
            if tij != 0.0 {
                let y = src.tiles()[j].transform.apply(&p);
                s += tij * interpolate(src_grid, phi, &y);
            }
        }
        *v = c * s;
    }
    let norm = values.iter().map(|x| x * x).sum::<f64>().sqrt();
    let rayleigh_quotient = if norm > 0.0 { dst_op.rayleigh_quotient(&values) } else { f64::NAN };
    Ok(TransplantedFunction {
        values,
        rayleigh_quotient,
        norm,
        unmapped,
    })
}
