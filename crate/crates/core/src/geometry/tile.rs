use nalgebra::Vector3;

use super::{GeometryError, Point2, Point3, EPS_GEOM};
use crate::tiling::Color;

/// A convex reference cell with three colored faces.
///
/// 3D cells store outward-oriented vertex loops. Planar cells live in
/// the plane z = 0 and store their edges as two-vertex "faces", ordered
/// counter-clockwise around the cell.
#[derive(Debug, Clone, PartialEq)]
pub struct BaseTile {
    dim: usize,
    vertices: Vec<Point3>,
    faces: Vec<Vec<usize>>,
    color_faces: [usize; 3],
}

impl BaseTile {
    /// General constructor. Face orientation is normalized here, so the
    /// loops may be given either way round.
    pub fn new(
        dim: usize,
        vertices: Vec<Point3>,
        faces: Vec<Vec<usize>>,
        color_faces: [usize; 3],
    ) -> Result<Self, GeometryError> {
        let bad = |m: &str| GeometryError::DegenerateBase(m.to_string());
        if dim != 2 && dim != 3 {
            return Err(bad("dimension must be 2 or 3"));
        }
        if !vertices.iter().all(|p| p.coords.iter().all(|x| x.is_finite())) {
            return Err(bad("non-finite coordinate"));
        }
        if dim == 2 && vertices.iter().any(|p| p.z != 0.0) {
            return Err(bad("planar tile must have z = 0"));
        }
        let want = if dim == 2 { 2 } else { 3 };
        if faces.iter().any(|f| f.len() < want || (dim == 2 && f.len() != 2) || f.iter().any(|&v| v >= vertices.len())) {
            return Err(bad("malformed face"));
        }
        if color_faces.iter().any(|&f| f >= faces.len())
            || color_faces[0] == color_faces[1]
            || color_faces[1] == color_faces[2]
            || color_faces[0] == color_faces[2]
        {
            return Err(bad("colors must name three distinct faces"));
        }
        let mut tile = Self {
            dim,
            vertices,
            faces,
            color_faces,
        };
        let size = tile.measure();
        let scale = tile.diameter().powi(dim as i32);
        if !(size > 1e-12 * scale) {
            return Err(bad("zero volume"));
        }
        let c = tile.centroid();
        for f in 0..tile.faces.len() {
            let (n, off) = tile.face_plane_of(&tile.vertices, f);
            if n.norm() <= EPS_GEOM * tile.diameter() {
                return Err(bad("degenerate face"));
            }
            if n.dot(&c.coords) - off > 0.0 {
                tile.faces[f].reverse();
            }
        }
        Ok(tile)
    }

    /// Tetrahedron; `opposite[c]` is the vertex not on the face of color `c`.
    /// The face opposite the remaining vertex is the fixed face.
    pub fn tetrahedron(vertices: [Point3; 4], opposite: [usize; 3]) -> Result<Self, GeometryError> {
        let faces: Vec<Vec<usize>> = (0..4).map(|k| (0..4).filter(|&v| v != k).collect()).collect();
        if opposite.iter().any(|&k| k > 3) {
            return Err(GeometryError::DegenerateBase("vertex index out of range".into()));
        }
        Self::new(3, vertices.to_vec(), faces, opposite)
    }

    /// Triangle in the plane; `opposite[c]` is the vertex not on the edge of color `c`.
    pub fn triangle(vertices: [Point2; 3], opposite: [usize; 3]) -> Result<Self, GeometryError> {
        let faces: Vec<Vec<usize>> = (0..3).map(|k| vec![(k + 1) % 3, (k + 2) % 3]).collect();
        if opposite.iter().any(|&k| k > 2) {
            return Err(GeometryError::DegenerateBase("vertex index out of range".into()));
        }
        let v = vertices.iter().map(|p| Point3::new(p.x, p.y, 0.0)).collect();
        Self::new(2, v, faces, opposite)
    }

    /// `{0 ≤ y ≤ x ≤ z ≤ 1}`: P₀..P₃ = (0,0,0), (0,0,1), (1,0,1), (1,1,1).
    /// Red, blue, black faces are opposite P₀, P₁, P₂; (P₀,P₁,P₂) is fixed.
    pub fn basic_simplex() -> Self {
        Self::tetrahedron(
            [
                Point3::new(0.0, 0.0, 0.0),
                Point3::new(0.0, 0.0, 1.0),
                Point3::new(1.0, 0.0, 1.0),
                Point3::new(1.0, 1.0, 1.0),
            ],
            [0, 1, 2],
        )
        .expect("basic simplex is valid")
    }

    /// Corner tetrahedron with P₀ at the origin and P₁..P₃ on the axes.
    /// (P₀,P₁,P₃) is fixed; red, blue, black are opposite P₀, P₁, P₃.
    pub fn wall() -> Self {
        Self::tetrahedron(
            [
                Point3::new(0.0, 0.0, 0.0),
                Point3::new(1.0, 0.0, 0.0),
                Point3::new(0.0, 1.0, 0.0),
                Point3::new(0.0, 0.0, 1.0),
            ],
            [0, 1, 3],
        )
        .expect("wall tetrahedron is valid")
    }

    /// Axis-aligned box `[0,a]×[0,b]×[0,c]`; red, blue, black are the
    /// faces x = a, y = b, z = c.
    pub fn cuboid(a: f64, b: f64, c: f64) -> Result<Self, GeometryError> {
        let v: Vec<Point3> = (0..8)
            .map(|k| {
                Point3::new(
                    if k & 4 != 0 { a } else { 0.0 },
                    if k & 2 != 0 { b } else { 0.0 },
                    if k & 1 != 0 { c } else { 0.0 },
                )
            })
            .collect();
        let faces = vec![
            vec![4, 6, 7, 5], // x = a
            vec![2, 3, 7, 6], // y = b
            vec![1, 5, 7, 3], // z = c
            vec![0, 1, 3, 2], // x = 0
            vec![0, 4, 5, 1], // y = 0
            vec![0, 2, 6, 4], // z = 0
        ];
        Self::new(3, v, faces, [0, 1, 2])
    }

    pub fn unit_cube() -> Self {
        Self::cuboid(1.0, 1.0, 1.0).expect("unit cube is valid")
    }

    /// Half of the unit square below its diagonal. The hypotenuse is red,
    /// the leg on the y-axis blue, the leg on the x-axis black.
    pub fn right_isosceles() -> Self {
        Self::triangle(
            [Point2::new(0.0, 0.0), Point2::new(1.0, 0.0), Point2::new(0.0, 1.0)],
            [0, 1, 2],
        )
        .expect("right isosceles triangle is valid")
    }

    /// Right angle at the origin, short leg on the x-axis. Red, blue,
    /// black are the middle, long and short sides.
    pub fn thirty_sixty_ninety() -> Self {
        Self::triangle(
            [Point2::new(0.0, 0.0), Point2::new(1.0, 0.0), Point2::new(0.0, 3f64.sqrt())],
            [1, 0, 2],
        )
        .expect("30-60-90 triangle is valid")
    }

    pub fn equilateral() -> Self {
        Self::triangle(
            [Point2::new(0.0, 0.0), Point2::new(1.0, 0.0), Point2::new(0.5, 3f64.sqrt() / 2.0)],
            [0, 1, 2],
        )
        .expect("equilateral triangle is valid")
    }

    /// Reads a tetrahedron: four `x y z` lines and an optional
    /// `colors r b k` line naming the vertices opposite the colored faces.
    pub fn parse(text: &str) -> Result<Self, GeometryError> {
        let mut pts = Vec::new();
        let mut colors = [0, 1, 2];
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |m: &str| GeometryError::Parse {
                line: idx + 1,
                message: m.to_string(),
            };
            let tokens: Vec<&str> = line.split_whitespace().collect();
            if tokens[0] == "colors" {
                if tokens.len() != 4 {
                    return Err(err("expected `colors <r> <b> <k>`"));
                }
                for (slot, t) in colors.iter_mut().zip(&tokens[1..]) {
                    *slot = t.parse().map_err(|_| err("bad vertex index"))?;
                }
                continue;
            }
            if tokens.len() != 3 {
                return Err(err("expected three coordinates"));
            }
            let c: Vec<f64> = tokens
                .iter()
                .map(|t| t.parse::<f64>())
                .collect::<Result<_, _>>()
                .map_err(|_| err("bad coordinate"))?;
            pts.push(Point3::new(c[0], c[1], c[2]));
        }
        let vertices: [Point3; 4] = pts
            .try_into()
            .map_err(|_| GeometryError::Parse {
                line: 0,
                message: "expected exactly four vertices".into(),
            })?;
        Self::tetrahedron(vertices, colors)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Point3] {
        &self.vertices
    }

    pub fn faces(&self) -> &[Vec<usize>] {
        &self.faces
    }

    pub fn color_face(&self, c: Color) -> usize {
        self.color_faces[c.index()]
    }

    /// Color of a face, `None` for fixed faces.
    pub fn face_color(&self, f: usize) -> Option<Color> {
        Color::ALL.into_iter().find(|c| self.color_faces[c.index()] == f)
    }

    pub fn is_simplex(&self) -> bool {
        self.vertices.len() == self.dim + 1
    }

    /// Outward normal (unnormalized) and offset `n·x = offset` of face `f`
    /// for a copy of this tile with vertex positions `pos`.
    pub fn face_plane_of(&self, pos: &[Point3], f: usize) -> (Vector3<f64>, f64) {
        let face = &self.faces[f];
        let n = if self.dim == 2 {
            let d = pos[face[1]] - pos[face[0]];
            Vector3::new(d.y, -d.x, 0.0)
        } else {
            newell_normal(face.iter().map(|&i| &pos[i]))
        };
        (n, n.dot(&pos[face[0]].coords))
    }

    /// Three points spanning the mirror plane of face `f`.
    pub fn mirror_frame(&self, pos: &[Point3], f: usize) -> [Point3; 3] {
        let face = &self.faces[f];
        if self.dim == 2 {
            let a = pos[face[0]];
            [a, pos[face[1]], a + Vector3::z()]
        } else {
            [pos[face[0]], pos[face[1]], pos[face[2]]]
        }
    }

    pub fn centroid(&self) -> Point3 {
        let s: Vector3<f64> = self.vertices.iter().map(|p| p.coords).sum();
        Point3::from(s / self.vertices.len() as f64)
    }

    pub fn diameter(&self) -> f64 {
        let mut d: f64 = 0.0;
        for a in &self.vertices {
            for b in &self.vertices {
                d = d.max((a - b).norm());
            }
        }
        d
    }

    /// Area (2D) or volume (3D), from the face loops.
    pub fn measure(&self) -> f64 {
        let c = self.centroid();
        let mut total = 0.0;
        for face in &self.faces {
            if self.dim == 2 {
                let a = self.vertices[face[0]] - c;
                let b = self.vertices[face[1]] - c;
                total += (a.x * b.y - a.y * b.x).abs() / 2.0;
            } else {
                let p0 = self.vertices[face[0]];
                for w in face[1..].windows(2) {
                    let a = p0 - c;
                    let b = self.vertices[w[0]] - c;
                    let d = self.vertices[w[1]] - c;
                    total += a.dot(&b.cross(&d)).abs() / 6.0;
                }
            }
        }
        total
    }

    /// Edges as vertex-index pairs (3D: from face loops, deduplicated).
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for face in &self.faces {
            let k = face.len();
            let pairs: Vec<(usize, usize)> = if self.dim == 2 {
                vec![(face[0], face[1])]
            } else {
                (0..k).map(|i| (face[i], face[(i + 1) % k])).collect()
            };
            for (a, b) in pairs {
                let e = (a.min(b), a.max(b));
                if !out.contains(&e) {
                    out.push(e);
                }
            }
        }
        out
    }
}

pub(crate) fn newell_normal<'a>(pts: impl Iterator<Item = &'a Point3> + Clone) -> Vector3<f64> {
    let v: Vec<&Point3> = pts.collect();
    let mut n = Vector3::zeros();
    for i in 0..v.len() {
        let a = v[i];
        let b = v[(i + 1) % v.len()];
        n.x += (a.y - b.y) * (a.z + b.z);
        n.y += (a.z - b.z) * (a.x + b.x);
        n.z += (a.x - b.x) * (a.y + b.y);
    }
    n
}
