use std::fmt::Write as _;
use std::str::FromStr;

use super::assembly::Assembly;
use super::{GeometryError, Point3, EPS_GEOM};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeshFormat {
    Obj,
    Stl,
}

impl FromStr for MeshFormat {
    type Err = GeometryError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "obj" => Ok(MeshFormat::Obj),
            "stl" => Ok(MeshFormat::Stl),
            _ => Err(GeometryError::UnsupportedFormat(s.to_string())),
        }
    }
}

/// Outward boundary triangles. Slit faces appear once per side.
pub(crate) fn boundary_triangles(a: &Assembly) -> Vec<[Point3; 3]> {
    let mut out = Vec::new();
    for &f in a.boundary_faces() {
        let v = a.face_vertices(f);
        for k in 1..v.len() - 1 {
            out.push([v[0], v[k], v[k + 1]]);
        }
    }
    out
}

fn unit_normal(t: &[Point3; 3]) -> nalgebra::Vector3<f64> {
    let n = (t[1] - t[0]).cross(&(t[2] - t[0]));
    let len = n.norm();
    if len > 0.0 {
        n / len
    } else {
        n
    }
}

fn obj(tris: &[[Point3; 3]]) -> Vec<u8> {
    let mut verts: Vec<Point3> = Vec::new();
    let mut faces = Vec::with_capacity(tris.len());
    for t in tris {
        let mut idx = [0usize; 3];
        for (k, p) in t.iter().enumerate() {
            idx[k] = match verts.iter().position(|q| (q - p).norm() <= EPS_GEOM) {
                Some(i) => i + 1,
                None => {
                    verts.push(*p);
                    verts.len()
                }
            };
        }
        faces.push(idx);
    }
    let mut s = String::new();
    for p in &verts {
        writeln!(s, "v {} {} {}", p.x, p.y, p.z).expect("write to string");
    }
    for f in &faces {
        writeln!(s, "f {} {} {}", f[0], f[1], f[2]).expect("write to string");
    }
    s.into_bytes()
}

fn stl(tris: &[[Point3; 3]]) -> Vec<u8> {
    let mut out = Vec::with_capacity(84 + 50 * tris.len());
    let mut header = [0u8; 80];
    let tag = b"isodrum boundary mesh";
    header[..tag.len()].copy_from_slice(tag);
    out.extend_from_slice(&header);
    out.extend_from_slice(&(tris.len() as u32).to_le_bytes());
    for t in tris {
        let n = unit_normal(t);
        for x in [n.x, n.y, n.z] {
            out.extend_from_slice(&(x as f32).to_le_bytes());
        }
        for p in t {
            for x in [p.x, p.y, p.z] {
                out.extend_from_slice(&(x as f32).to_le_bytes());
            }
        }
        out.extend_from_slice(&0u16.to_le_bytes());
    }
    out
}

/// Serializes the outward boundary surface of a 3D assembly.
pub fn export_mesh(a: &Assembly, format: MeshFormat) -> Result<Vec<u8>, GeometryError> {
    if a.dim() != 3 {
        return Err(GeometryError::WrongDimension { expected: 3, found: a.dim() });
    }
    let tris = boundary_triangles(a);
    Ok(match format {
        MeshFormat::Obj => obj(&tris),
        MeshFormat::Stl => stl(&tris),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::BaseTile;

    #[test]
    fn single_tetrahedron_obj() {
        let a = Assembly::single(&BaseTile::basic_simplex()).unwrap();
        let text = String::from_utf8(export_mesh(&a, MeshFormat::Obj).unwrap()).unwrap();
        assert_eq!(text.lines().filter(|l| l.starts_with("v ")).count(), 4);
        assert_eq!(text.lines().filter(|l| l.starts_with("f ")).count(), 4);
    }

    #[test]
    fn stl_layout() {
        let a = Assembly::single(&BaseTile::unit_cube()).unwrap();
        let bytes = export_mesh(&a, MeshFormat::Stl).unwrap();
        let n = u32::from_le_bytes(bytes[80..84].try_into().unwrap()) as usize;
        assert_eq!(n, 12);
        assert_eq!(bytes.len(), 84 + 50 * n);
        let nx = f32::from_le_bytes(bytes[84..88].try_into().unwrap());
        let ny = f32::from_le_bytes(bytes[88..92].try_into().unwrap());
        let nz = f32::from_le_bytes(bytes[92..96].try_into().unwrap());
        assert!(((nx * nx + ny * ny + nz * nz).sqrt() - 1.0).abs() < 1e-6);
    }

    #[test]
    fn rejects_flat_and_unknown_format() {
        let a = Assembly::single(&BaseTile::right_isosceles()).unwrap();
        assert!(matches!(export_mesh(&a, MeshFormat::Obj), Err(GeometryError::WrongDimension { .. })));
        assert!(matches!("ply".parse::<MeshFormat>(), Err(GeometryError::UnsupportedFormat(_))));
    }
}
