use nalgebra::Vector3;

use super::SpectraError;
use crate::geometry::{Assembly, FaceRef, Point3, EPS_GEOM};

/// Lattice nodes `h·(i, j, k)` covering an assembly, with the interior
/// ones numbered in lexicographic order (x slowest).
#[derive(Debug, Clone, PartialEq)]
pub struct RasterDomain {
    dim: usize,
    h: f64,
    origin: [i64; 3],
    extents: [usize; 3],
    mask: Vec<bool>,
    index: Vec<usize>,
    nodes: Vec<[i64; 3]>,
    commensurate: bool,
}

const NONE: usize = usize::MAX;

impl RasterDomain {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    /// Lattice index of the first node along each axis.
    pub fn origin(&self) -> [i64; 3] {
        self.origin
    }

    /// Node counts along each axis (1 along z in the plane).
    pub fn extents(&self) -> [usize; 3] {
        self.extents
    }

    pub fn n_interior(&self) -> usize {
        self.nodes.len()
    }

    /// Interior flag per lattice node, x slowest.
    pub fn interior_mask(&self) -> &[bool] {
        &self.mask
    }

    /// Whether every tile vertex lies on the lattice.
    pub fn is_commensurate(&self) -> bool {
        self.commensurate
    }

    fn linear(&self, ijk: [i64; 3]) -> Option<usize> {
        let mut lin = 0usize;
        for a in 0..3 {
            let r = ijk[a] - self.origin[a];
            if r < 0 || r as usize >= self.extents[a] {
                return None;
            }
            lin = lin * self.extents[a] + r as usize;
        }
        Some(lin)
    }

    /// Equation index of an interior node.
    pub fn index_of(&self, ijk: [i64; 3]) -> Option<usize> {
        self.linear(ijk).map(|l| self.index[l]).filter(|&k| k != NONE)
    }

    /// Lattice coordinates of interior node `k`.
    pub fn node(&self, k: usize) -> [i64; 3] {
        self.nodes[k]
    }

    pub fn nodes(&self) -> &[[i64; 3]] {
        &self.nodes
    }

    pub fn point(&self, ijk: [i64; 3]) -> Point3 {
        Point3::new(ijk[0] as f64 * self.h, ijk[1] as f64 * self.h, ijk[2] as f64 * self.h)
    }

    pub fn node_point(&self, k: usize) -> Point3 {
        self.point(self.nodes[k])
    }
}

/// Outward face planes of one tile in lattice units.
struct TilePlanes {
    planes: Vec<(Vector3<f64>, f64, f64)>,
    lo: [f64; 3],
    hi: [f64; 3],
}

impl TilePlanes {
    fn new(a: &Assembly, tile: usize, verts: &[Point3]) -> Self {
        let flip = a.tiles()[tile].parity == 1;
        let planes = (0..a.base().faces().len())
            .map(|f| {
                let (n, off) = a.base().face_plane_of(verts, f);
                let (n, off) = if flip { (-n, -off) } else { (n, off) };
                (n, off, n.norm())
            })
            .collect();
        let mut lo = [f64::INFINITY; 3];
        let mut hi = [f64::NEG_INFINITY; 3];
        for v in verts {
            for ax in 0..3 {
                lo[ax] = lo[ax].min(v[ax]);
                hi[ax] = hi[ax].max(v[ax]);
            }
        }
        TilePlanes { planes, lo, hi }
    }

    fn contains(&self, y: &Vector3<f64>, tol: f64) -> bool {
        self.planes.iter().all(|(n, off, len)| n.dot(y) - off <= tol * len)
    }

    fn on_face(&self, f: usize, y: &Vector3<f64>, tol: f64) -> bool {
        let (n, off, len) = &self.planes[f];
        (n.dot(y) - off).abs() <= tol * len && self.contains(y, tol)
    }
}

/// Snaps to the nearest integer when within rounding noise.
fn snap(u: f64) -> (f64, bool) {
    let r = u.round();
    if (u - r).abs() <= 1e-9 * u.abs().max(1.0) {
        (r, true)
    } else {
        (u, false)
    }
}

/// Marks lattice nodes inside the assembly. A node is interior when some
/// tile contains it and it lies on no boundary or slit face; nodes on
/// faces glued between tiles stay interior.
pub fn rasterize(a: &Assembly, h: f64) -> Result<RasterDomain, SpectraError> {
    if !(h > 0.0) || !h.is_finite() {
        return Err(SpectraError::NonPositiveH(h));
    }
    if a.is_overlapping() {
        return Err(SpectraError::Overlapping);
    }
    let dim = a.dim();
    let tol = EPS_GEOM / h;
    let mut commensurate = true;
    let scaled: Vec<Vec<Point3>> = a
        .tiles()
        .iter()
        .map(|t| {
            t.vertices
                .iter()
                .map(|p| {
                    let mut q = [0.0; 3];
                    for ax in 0..dim {
                        let (v, ok) = snap(p[ax] / h);
                        commensurate &= ok;
                        q[ax] = v;
                    }
                    Point3::new(q[0], q[1], q[2])
                })
                .collect()
        })
        .collect();
    let tiles: Vec<TilePlanes> = scaled.iter().enumerate().map(|(i, v)| TilePlanes::new(a, i, v)).collect();

    let mut origin = [0i64; 3];
    let mut extents = [1usize; 3];
    for ax in 0..dim {
        let lo = tiles.iter().map(|t| t.lo[ax]).fold(f64::INFINITY, f64::min);
        let hi = tiles.iter().map(|t| t.hi[ax]).fold(f64::NEG_INFINITY, f64::max);
        origin[ax] = (lo - tol).ceil() as i64;
        extents[ax] = ((hi + tol).floor() as i64 - origin[ax] + 1).max(0) as usize;
    }
    let total: usize = extents.iter().product();
    let mut inside = vec![false; total];
    let mut excluded = vec![false; total];

    let range = |lo: f64, hi: f64, ax: usize| -> std::ops::RangeInclusive<i64> {
        if ax >= dim {
            return 0..=0;
        }
        let a = ((lo - tol).ceil() as i64).max(origin[ax]);
        let b = ((hi + tol).floor() as i64).min(origin[ax] + extents[ax] as i64 - 1);
        a..=b
    };
    let lin = |i: i64, j: i64, k: i64| -> usize {
        (((i - origin[0]) as usize * extents[1]) + (j - origin[1]) as usize) * extents[2] + (k - origin[2]) as usize
    };
    let boundary: Vec<FaceRef> = a.boundary_faces().to_vec();
    for (t, planes) in tiles.iter().enumerate() {
        let faces: Vec<usize> = boundary.iter().filter(|f| f.tile == t).map(|f| f.face).collect();
        for i in range(planes.lo[0], planes.hi[0], 0) {
            for j in range(planes.lo[1], planes.hi[1], 1) {
                for k in range(planes.lo[2], planes.hi[2], 2) {
                    let y = Vector3::new(i as f64, j as f64, k as f64);
                    if !planes.contains(&y, tol) {
                        continue;
                    }
                    let l = lin(i, j, k);
                    inside[l] = true;
                    if faces.iter().any(|&f| planes.on_face(f, &y, tol)) {
                        excluded[l] = true;
                    }
                }
            }
        }
    }

    let mut index = vec![NONE; total];
    let mut nodes = Vec::new();
    let mut mask = vec![false; total];
    for i in 0..extents[0] {
        for j in 0..extents[1] {
            for k in 0..extents[2] {
                let l = (i * extents[1] + j) * extents[2] + k;
                if inside[l] && !excluded[l] {
                    mask[l] = true;
                    index[l] = nodes.len();
                    nodes.push([origin[0] + i as i64, origin[1] + j as i64, origin[2] + k as i64]);
                }
            }
        }
    }
    Ok(RasterDomain {
        dim,
        h,
        origin,
        extents,
        mask,
        index,
        nodes,
        commensurate,
    })
}
