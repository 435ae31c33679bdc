use std::collections::VecDeque;

use nalgebra::Vector3;

use super::mirror::{mirror_point, reflect_point_2d, RigidTransform};
use super::tile::BaseTile;
use super::{GeometryError, Point2, Point3, EPS_GEOM};
use crate::tiling::{Color, Glue, GluingGraph};

/// One placed copy of the base tile.
#[derive(Debug, Clone, PartialEq)]
pub struct TileInstance {
    pub index: usize,
    pub vertices: Vec<Point3>,
    /// Maps base-tile coordinates to this tile.
    pub transform: RigidTransform,
    /// Number of reflections from the base tile, mod 2.
    pub parity: u8,
}

/// A face shared by two tiles through a gluing.
#[derive(Debug, Clone, PartialEq)]
pub struct GluedFace {
    pub tiles: (usize, usize),
    pub color: Color,
    pub face: usize,
    pub vertices: Vec<Point3>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FaceRef {
    pub tile: usize,
    pub face: usize,
}

/// Tiles placed by reflection, plus their face bookkeeping.
#[derive(Debug, Clone, PartialEq)]
pub struct Assembly {
    base: BaseTile,
    tiles: Vec<TileInstance>,
    neighbors: Vec<[Option<usize>; 3]>,
    glued_faces: Vec<GluedFace>,
    boundary_faces: Vec<FaceRef>,
    coincident_faces: Vec<(FaceRef, FaceRef)>,
    overlaps: Vec<(usize, usize)>,
}

impl Assembly {
    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    pub fn base(&self) -> &BaseTile {
        &self.base
    }

    pub fn tiles(&self) -> &[TileInstance] {
        &self.tiles
    }

    pub fn neighbors(&self, tile: usize) -> [Option<usize>; 3] {
        self.neighbors[tile]
    }

    pub fn glued_faces(&self) -> &[GluedFace] {
        &self.glued_faces
    }

    /// Every face not glued to another tile, slits included.
    pub fn boundary_faces(&self) -> &[FaceRef] {
        &self.boundary_faces
    }

    /// Unglued face pairs that occupy the same region.
    pub fn coincident_faces(&self) -> &[(FaceRef, FaceRef)] {
        &self.coincident_faces
    }

    /// Tile pairs whose interiors intersect.
    pub fn overlaps(&self) -> &[(usize, usize)] {
        &self.overlaps
    }

    pub fn is_overlapping(&self) -> bool {
        !self.overlaps.is_empty()
    }

    /// Face vertices in outward order.
    pub fn face_vertices(&self, f: FaceRef) -> Vec<Point3> {
        let t = &self.tiles[f.tile];
        let mut v: Vec<Point3> = self.base.faces()[f.face].iter().map(|&k| t.vertices[k]).collect();
        if t.parity == 1 {
            v.reverse();
        }
        v
    }

    /// Outward normal (unnormalized) and offset of a face.
    pub fn face_plane(&self, f: FaceRef) -> (Vector3<f64>, f64) {
        let t = &self.tiles[f.tile];
        let (n, off) = self.base.face_plane_of(&t.vertices, f.face);
        if t.parity == 1 {
            (-n, -off)
        } else {
            (n, off)
        }
    }

    /// Distinct vertices of the whole assembly.
    pub fn vertex_set(&self) -> Vec<Point3> {
        let mut out: Vec<Point3> = Vec::new();
        for t in &self.tiles {
            for p in &t.vertices {
                if !out.iter().any(|q| (q - p).norm() <= EPS_GEOM) {
                    out.push(*p);
                }
            }
        }
        out
    }

    pub fn bounding_box(&self) -> (Point3, Point3) {
        let mut lo = Point3::new(f64::INFINITY, f64::INFINITY, f64::INFINITY);
        let mut hi = Point3::new(f64::NEG_INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
        for t in &self.tiles {
            for p in &t.vertices {
                lo = lo.inf(p);
                hi = hi.sup(p);
            }
        }
        (lo, hi)
    }

    pub fn measure(&self) -> f64 {
        self.base.measure() * self.tiles.len() as f64
    }

    /// Planar tiles as counter-clockwise vertex loops.
    pub fn polygons(&self) -> Result<Vec<Vec<Point2>>, GeometryError> {
        if self.dim() != 2 {
            return Err(GeometryError::WrongDimension { expected: 2, found: self.dim() });
        }
        Ok(self
            .tiles
            .iter()
            .map(|t| {
                // outward edges run counter-clockwise; chain them
                let edges: Vec<Vec<Point3>> = (0..self.base.faces().len())
                    .map(|f| self.face_vertices(FaceRef { tile: t.index, face: f }))
                    .collect();
                let mut ordered = Vec::with_capacity(edges.len());
                let mut cur = edges[0][0];
                for _ in 0..edges.len() {
                    ordered.push(Point2::new(cur.x, cur.y));
                    let next = edges.iter().find(|e| (e[0] - cur).norm() <= EPS_GEOM).expect("closed loop");
                    cur = next[1];
                }
                ordered
            })
            .collect())
    }

    /// The same assembly moved by a rigid motion. Orientation-reversing
    /// motions flip every tile's parity.
    pub fn transformed(&self, motion: &RigidTransform) -> Assembly {
        let flip = u8::from(motion.determinant() < 0.0);
        let mut out = self.clone();
        for t in &mut out.tiles {
            for v in &mut t.vertices {
                *v = motion.apply(v);
            }
            t.transform = motion.compose(&t.transform);
            t.parity ^= flip;
        }
        for g in &mut out.glued_faces {
            for v in &mut g.vertices {
                *v = motion.apply(v);
            }
        }
        out
    }

    /// A lone copy of the base tile.
    pub fn single(base: &BaseTile) -> Result<Assembly, GeometryError> {
        let tile = TileInstance {
            index: 0,
            vertices: base.vertices().to_vec(),
            transform: RigidTransform::identity(),
            parity: 0,
        };
        finish(base.clone(), vec![tile], vec![[None; 3]])
    }
}

/// Unfolds `graph` breadth-first from `root`, reflecting the parent tile
/// across the shared colored face to place each new tile.
pub fn build_assembly(graph: &GluingGraph, base: &BaseTile, root: usize) -> Result<Assembly, GeometryError> {
    let n = graph.n_tiles();
    if root >= n {
        return Err(GeometryError::BadRoot { root, n_tiles: n });
    }
    let mut placed: Vec<Option<TileInstance>> = vec![None; n];
    placed[root] = Some(TileInstance {
        index: root,
        vertices: base.vertices().to_vec(),
        transform: RigidTransform::identity(),
        parity: 0,
    });
    let mut queue = VecDeque::from([root]);
    while let Some(i) = queue.pop_front() {
        for c in Color::ALL {
            let Glue::Tile(j) = graph.glue(c, i) else {
                continue;
            };
            if placed[j].is_some() {
                continue;
            }
            let parent = placed[i].as_ref().expect("parent placed");
            let child = reflect_tile(base, parent, c, j)?;
            placed[j] = Some(child);
            queue.push_back(j);
        }
    }
    let tiles: Vec<TileInstance> = placed.into_iter().map(|t| t.expect("graph is connected")).collect();
    let neighbors = (0..n).map(|i| Color::ALL.map(|c| graph.glue(c, i).tile())).collect();
    finish(base.clone(), tiles, neighbors)
}

fn reflect_tile(base: &BaseTile, parent: &TileInstance, c: Color, index: usize) -> Result<TileInstance, GeometryError> {
    let f = base.color_face(c);
    let on_face = &base.faces()[f];
    let frame = base.mirror_frame(&parent.vertices, f);
    let mut vertices = parent.vertices.clone();
    for (k, v) in vertices.iter_mut().enumerate() {
        if on_face.contains(&k) {
            continue;
        }
        *v = if base.dim() == 2 {
            let q = reflect_point_2d(&Point2::new(v.x, v.y), (&Point2::new(frame[0].x, frame[0].y), &Point2::new(frame[1].x, frame[1].y)))?;
            Point3::new(q.x, q.y, 0.0)
        } else {
            mirror_point(v, [&frame[0], &frame[1], &frame[2]])?
        };
    }
    let (n, _) = base.face_plane_of(&parent.vertices, f);
    let r = RigidTransform::reflection(&frame[0], &n);
    Ok(TileInstance {
        index,
        vertices,
        transform: r.compose(&parent.transform),
        parity: 1 - parent.parity,
    })
}

fn same_point_set(a: &[Point3], b: &[Point3]) -> bool {
    a.len() == b.len() && a.iter().all(|p| b.iter().any(|q| (p - q).norm() <= EPS_GEOM))
}

fn finish(base: BaseTile, tiles: Vec<TileInstance>, neighbors: Vec<[Option<usize>; 3]>) -> Result<Assembly, GeometryError> {
    let face_pts = |t: &TileInstance, f: usize| -> Vec<Point3> { base.faces()[f].iter().map(|&k| t.vertices[k]).collect() };
    let mut glued_faces = Vec::new();
    let mut boundary_faces = Vec::new();
    for (i, t) in tiles.iter().enumerate() {
        for f in 0..base.faces().len() {
            let partner = base.face_color(f).and_then(|c| neighbors[i][c.index()].map(|j| (c, j)));
            match partner {
                Some((c, j)) => {
                    let mine = face_pts(t, f);
                    if !same_point_set(&mine, &face_pts(&tiles[j], f)) {
                        return Err(GeometryError::Inconsistent { tiles: (i, j), color: c });
                    }
                    if i < j {
                        glued_faces.push(GluedFace {
                            tiles: (i, j),
                            color: c,
                            face: f,
                            vertices: mine,
                        });
                    }
                }
                None => boundary_faces.push(FaceRef { tile: i, face: f }),
            }
        }
    }
    let mut coincident_faces = Vec::new();
    for (a, fa) in boundary_faces.iter().enumerate() {
        for fb in &boundary_faces[a + 1..] {
            if same_point_set(&face_pts(&tiles[fa.tile], fa.face), &face_pts(&tiles[fb.tile], fb.face)) {
                coincident_faces.push((*fa, *fb));
            }
        }
    }
    let mut assembly = Assembly {
        base,
        tiles,
        neighbors,
        glued_faces,
        boundary_faces,
        coincident_faces,
        overlaps: Vec::new(),
    };
    assembly.overlaps = find_overlaps(&assembly);
    Ok(assembly)
}

/// Separating-axis test on every tile pair with intersecting boxes.
fn find_overlaps(a: &Assembly) -> Vec<(usize, usize)> {
    let scale = a.base.diameter();
    let tol = EPS_GEOM * scale.max(1.0);
    let axes_of = |t: &TileInstance| -> Vec<Vector3<f64>> {
        (0..a.base.faces().len())
            .map(|f| a.base.face_plane_of(&t.vertices, f).0)
            .filter(|n| n.norm() > 0.0)
            .map(|n| n.normalize())
            .collect()
    };
    let edges = a.base.edges();
    let mut out = Vec::new();
    for i in 0..a.tiles.len() {
        for j in i + 1..a.tiles.len() {
            let (ti, tj) = (&a.tiles[i], &a.tiles[j]);
            let mut axes = axes_of(ti);
            axes.extend(axes_of(tj));
            if a.dim() == 3 {
                for &(p, q) in &edges {
                    for &(r, s) in &edges {
                        let c = (ti.vertices[q] - ti.vertices[p]).cross(&(tj.vertices[s] - tj.vertices[r]));
                        if c.norm() > tol {
                            axes.push(c.normalize());
                        }
                    }
                }
            }
            let separated = axes.iter().any(|ax| {
                let (lo1, hi1) = project(&ti.vertices, ax);
                let (lo2, hi2) = project(&tj.vertices, ax);
                hi1.min(hi2) - lo1.max(lo2) <= tol
            });
            if !separated {
                out.push((i, j));
            }
        }
    }
    out
}

fn project(pts: &[Point3], axis: &Vector3<f64>) -> (f64, f64) {
    pts.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| {
        let d = axis.dot(&p.coords);
        (lo.min(d), hi.max(d))
    })
}

/// Sweeps a planar assembly along z to the given height.
pub fn extrude_prism(flat: &Assembly, height: f64) -> Result<Assembly, GeometryError> {
    if flat.dim() != 2 {
        return Err(GeometryError::WrongDimension { expected: 2, found: flat.dim() });
    }
    if !(height > 0.0) || !height.is_finite() {
        return Err(GeometryError::NonPositiveHeight(height));
    }
    let b = flat.base();
    let k = b.vertices().len();
    let lift = |p: &Point3, z: f64| Point3::new(p.x, p.y, z);
    let mut vertices: Vec<Point3> = b.vertices().iter().map(|p| lift(p, 0.0)).collect();
    vertices.extend(b.vertices().iter().map(|p| lift(p, height)));
    let mut faces: Vec<Vec<usize>> = b.faces().iter().map(|e| vec![e[0], e[1], e[1] + k, e[0] + k]).collect();
    faces.push((0..k).collect());
    faces.push((k..2 * k).collect());
    let color_faces = Color::ALL.map(|c| b.color_face(c));
    let base = BaseTile::new(3, vertices, faces, color_faces)?;
    let tiles = flat
        .tiles()
        .iter()
        .map(|t| {
            let mut v: Vec<Point3> = t.vertices.iter().map(|p| lift(p, 0.0)).collect();
            v.extend(t.vertices.iter().map(|p| lift(p, height)));
            TileInstance {
                index: t.index,
                vertices: v,
                transform: t.transform,
                parity: t.parity,
            }
        })
        .collect();
    finish(base, tiles, flat.neighbors.clone())
}
