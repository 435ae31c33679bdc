use nalgebra::{Matrix3, Vector3};

use super::{GeometryError, Point2, Point3};

/// Reflection of `p` across the plane through the three face points.
///
/// The foot of the perpendicular is `α₁P₁ + α₂P₂ + α₃P₃` with
/// `α₁ + α₂ + α₃ = 1`; the two orthogonality conditions form a 2x2 Gram
/// system solved by Cramer's rule. The numerator is assembled before the
/// single division, so integer inputs with an integer image come out exact.
pub fn mirror_point(p: &Point3, face: [&Point3; 3]) -> Result<Point3, GeometryError> {
    let [p1, p2, p3] = face;
    let u = p1 - p3;
    let v = p2 - p3;
    let w = p - p3;
    let uu = u.dot(&u);
    let vv = v.dot(&v);
    let uv = u.dot(&v);
    let det = uu * vv - uv * uv;
    if !(det > 1e-24 * uu * vv) {
        return Err(GeometryError::DegenerateFace);
    }
    let wu = w.dot(&u);
    let wv = w.dot(&v);
    let n1 = wu * vv - wv * uv;
    let n2 = uu * wv - uv * wu;
    // Q = 2·proj − p with proj = P₃ + (n1 u + n2 v)/det
    let num = (p3.coords * det + u * n1 + v * n2) * 2.0 - p.coords * det;
    Ok(Point3::from(num / det))
}

/// Reflection of `p` across the line through the edge endpoints.
pub fn reflect_point_2d(p: &Point2, edge: (&Point2, &Point2)) -> Result<Point2, GeometryError> {
    let (a, b) = edge;
    let d = b - a;
    let dd = d.dot(&d);
    if !(dd > 0.0) {
        return Err(GeometryError::DegenerateEdge);
    }
    let t = (p - a).dot(&d);
    let num = (a.coords * dd + d * t) * 2.0 - p.coords * dd;
    Ok(Point2::from(num / dd))
}

/// A composition of reflections, `x ↦ linear·x + translation`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RigidTransform {
    pub linear: Matrix3<f64>,
    pub translation: Vector3<f64>,
}

impl RigidTransform {
    pub fn identity() -> Self {
        Self {
            linear: Matrix3::identity(),
            translation: Vector3::zeros(),
        }
    }

    /// Reflection across the plane through `a` with normal `n`.
    pub fn reflection(a: &Point3, n: &Vector3<f64>) -> Self {
        let n = n.normalize();
        Self {
            linear: Matrix3::identity() - n * n.transpose() * 2.0,
            translation: n * (2.0 * n.dot(&a.coords)),
        }
    }

    pub fn apply(&self, p: &Point3) -> Point3 {
        Point3::from(self.linear * p.coords + self.translation)
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &RigidTransform) -> RigidTransform {
        RigidTransform {
            linear: self.linear * inner.linear,
            translation: self.linear * inner.translation + self.translation,
        }
    }

    pub fn inverse(&self) -> RigidTransform {
        let lt = self.linear.transpose();
        RigidTransform {
            linear: lt,
            translation: -(lt * self.translation),
        }
    }

    pub fn determinant(&self) -> f64 {
        self.linear.determinant()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mirror_in_horizontal_plane() {
        let q = mirror_point(
            &Point3::new(0.0, 0.0, 0.0),
            [&Point3::new(0.0, 0.0, 1.0), &Point3::new(1.0, 0.0, 1.0), &Point3::new(1.0, 1.0, 1.0)],
        )
        .unwrap();
        assert_eq!(q, Point3::new(0.0, 0.0, 2.0));
    }

    #[test]
    fn mirror_across_slanted_plane() {
        // plane x + y + z = 1; oracle via the unit normal
        let p = Point3::new(1.0, 1.0, 0.0);
        let f = [Point3::new(1.0, 0.0, 0.0), Point3::new(0.0, 1.0, 0.0), Point3::new(0.0, 0.0, 1.0)];
        let q = mirror_point(&p, [&f[0], &f[1], &f[2]]).unwrap();
        let n = Vector3::new(1.0, 1.0, 1.0) / 3f64.sqrt();
        let oracle = p - n * (2.0 * (n.dot(&p.coords) - 1.0 / 3f64.sqrt()));
        assert!((q - oracle).norm() < 1e-15);
        assert!((q - Point3::new(1.0 / 3.0, 1.0 / 3.0, -2.0 / 3.0)).norm() < 1e-15);
    }

    #[test]
    fn degenerate_inputs() {
        let a = Point3::new(0.0, 0.0, 0.0);
        let b = Point3::new(1.0, 1.0, 1.0);
        let c = Point3::new(2.0, 2.0, 2.0);
        assert_eq!(mirror_point(&a, [&a, &b, &c]), Err(GeometryError::DegenerateFace));
        let p = Point2::new(1.0, 1.0);
        assert_eq!(reflect_point_2d(&p, (&p, &p)), Err(GeometryError::DegenerateEdge));
    }

    #[test]
    fn reflect_2d_examples() {
        let o = Point2::new(0.0, 0.0);
        let x = Point2::new(1.0, 0.0);
        let y = Point2::new(0.0, 1.0);
        assert_eq!(reflect_point_2d(&Point2::new(1.0, 1.0), (&o, &x)).unwrap(), Point2::new(1.0, -1.0));
        assert_eq!(reflect_point_2d(&Point2::new(3.0, 0.0), (&o, &x)).unwrap(), Point2::new(3.0, 0.0));
        assert_eq!(reflect_point_2d(&o, (&x, &y)).unwrap(), Point2::new(1.0, 1.0));
    }

    #[test]
    fn reflection_transform_matches_mirror_point() {
        let f = [Point3::new(1.0, 0.0, 0.0), Point3::new(0.0, 2.0, 0.0), Point3::new(0.0, 0.0, 3.0)];
        let n = (f[1] - f[0]).cross(&(f[2] - f[0]));
        let r = RigidTransform::reflection(&f[0], &n);
        let p = Point3::new(0.3, -1.0, 2.0);
        let q = mirror_point(&p, [&f[0], &f[1], &f[2]]).unwrap();
        assert!((r.apply(&p) - q).norm() < 1e-14);
        assert!((r.determinant() + 1.0).abs() < 1e-14);
        assert!((r.compose(&r).apply(&p) - p).norm() < 1e-14);
    }
}
