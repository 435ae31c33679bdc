//! Property checks shared by the property suite and the acceptance run.
//! Each runs a deterministic proptest runner and panics on a failure.

use isodrum::exact::{parse_matrices, Matrix, RationalMatrix};
use isodrum::geometry::{build_assembly, mirror_point, reflect_point_2d, Assembly, BaseTile, Point2, Point3, RigidTransform};
use isodrum::spectra::{assemble_laplacian, lowest_eigenvalues, rasterize, EigenOptions};
use isodrum::tiling::{parse_gluing_file, Color, ColorPermutation, SignConvention};
use isodrum::transplant::{solve_family, verify_transplantation};
use isodrum::catalog;
use nalgebra::{Matrix3, Vector3};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

fn runner(cases: u32) -> TestRunner {
    let config = Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    };
    TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

fn check<S: Strategy>(name: &str, cases: u32, s: S, f: impl Fn(S::Value) -> Result<(), TestCaseError>) -> u32
where
    S::Value: std::fmt::Debug,
{
    if let Err(e) = runner(cases).run(&s, f) {
        panic!("{name}: {e}");
    }
    cases
}

fn coord() -> impl Strategy<Value = f64> {
    -3.0..3.0f64
}

fn point3() -> impl Strategy<Value = Point3> {
    (coord(), coord(), coord()).prop_map(|(x, y, z)| Point3::new(x, y, z))
}

fn point2() -> impl Strategy<Value = Point2> {
    (coord(), coord()).prop_map(|(x, y)| Point2::new(x, y))
}

pub fn reflection_involution_3d(cases: u32) -> u32 {
    let s = (point3(), point3(), point3(), point3())
        .prop_filter("non-degenerate face", |(a, b, c, _)| (b - a).cross(&(c - a)).norm() > 0.1);
    check("reflection 3d", cases, s, |(a, b, c, p)| {
        let q = mirror_point(&p, [&a, &b, &c]).unwrap();
        let back = mirror_point(&q, [&a, &b, &c]).unwrap();
        prop_assert!((back - p).norm() <= 1e-9);
        // the face is fixed and the midpoint lies on its plane
        for v in [&a, &b, &c] {
            prop_assert!((mirror_point(v, [&a, &b, &c]).unwrap() - v).norm() <= 1e-9);
            prop_assert!(((p - v).norm() - (q - v).norm()).abs() <= 1e-9);
        }
        let n = (b - a).cross(&(c - a));
        let mid = Point3::from((p.coords + q.coords) / 2.0);
        prop_assert!((mid - a).dot(&n).abs() <= 1e-9 * n.norm());
        Ok(())
    })
}

pub fn reflection_involution_2d(cases: u32) -> u32 {
    let s = (point2(), point2(), point2()).prop_filter("non-degenerate edge", |(a, b, _)| (b - a).norm() > 0.1);
    check("reflection 2d", cases, s, |(a, b, p)| {
        let q = reflect_point_2d(&p, (&a, &b)).unwrap();
        let back = reflect_point_2d(&q, (&a, &b)).unwrap();
        prop_assert!((back - p).norm() <= 1e-9);
        prop_assert!(((p - a).norm() - (q - a).norm()).abs() <= 1e-9);
        prop_assert!(((p - b).norm() - (q - b).norm()).abs() <= 1e-9);
        Ok(())
    })
}

/// Small domains whose vertices sit on every lattice used below.
fn small_domain(kind: usize, family: usize, side: bool, dims: (u8, u8, u8)) -> Assembly {
    let id = ["7_1", "7_2", "7_3"][family];
    let fam = catalog::family(id).unwrap();
    let g = if side { &fam.left } else { &fam.right };
    match kind {
        0 => build_assembly(g, &BaseTile::basic_simplex(), 0).unwrap(),
        1 => build_assembly(g, &BaseTile::right_isosceles(), 0).unwrap(),
        _ => {
            let (a, b, c) = dims;
            Assembly::single(&BaseTile::cuboid(f64::from(a), f64::from(b), f64::from(c)).unwrap()).unwrap()
        }
    }
}

fn domain() -> impl Strategy<Value = (Assembly, f64)> {
    (0usize..3, 0usize..3, any::<bool>(), (1u8..3, 1u8..3, 1u8..3), 2u32..5)
        .prop_map(|(kind, fam, side, dims, k)| (small_domain(kind, fam, side, dims), 1.0 / f64::from(k)))
}

pub fn operator_symmetric_positive(cases: u32) -> u32 {
    let s = (domain(), proptest::collection::vec(-1.0..1.0f64, 512));
    check("operator", cases, s, |((a, h), x)| {
        let r = rasterize(&a, h).unwrap();
        let l = match assemble_laplacian(&r) {
            Ok(l) => l,
            Err(_) => return Ok(()),
        };
        prop_assert!(l.is_symmetric());
        let d = l.dim() as f64;
        prop_assert!((l.diagonal_value() - 2.0 * d / (h * h)).abs() <= 1e-9 / (h * h));
        for i in 0..l.n() {
            prop_assert!(l.neighbors(i).len() <= 2 * l.dim());
        }
        let v: Vec<f64> = (0..l.n()).map(|i| x[i % x.len()] + 1e-3).collect();
        let s = lowest_eigenvalues(&l, 1, &EigenOptions::default()).unwrap();
        prop_assert!(s.eigenvalues[0] > 0.0);
        prop_assert!(l.rayleigh_quotient(&v) >= s.eigenvalues[0] * (1.0 - 1e-12));
        Ok(())
    })
}

fn signed_permutation(dim: usize, perm: usize, signs: u8) -> Matrix3<f64> {
    let orders = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    let order = if dim == 2 { [[0, 1, 2], [1, 0, 2]][perm % 2] } else { orders[perm % 6] };
    let mut m = Matrix3::zeros();
    for (row, &col) in order.iter().enumerate() {
        let flip = row < dim && signs & (1 << row) != 0;
        m[(row, col)] = if flip { -1.0 } else { 1.0 };
    }
    m
}

pub fn grid_isometry_equivariance(cases: u32) -> u32 {
    let s = (domain(), 0usize..6, any::<u8>(), (-4i32..5, -4i32..5, -4i32..5));
    check("grid isometry", cases, s, |((a, h), perm, signs, shift)| {
        let dim = a.dim();
        let z = if dim == 2 { 0.0 } else { f64::from(shift.2) * h };
        let motion = RigidTransform {
            linear: signed_permutation(dim, perm, signs),
            translation: Vector3::new(f64::from(shift.0) * h, f64::from(shift.1) * h, z),
        };
        let b = a.transformed(&motion);
        let (ra, rb) = (rasterize(&a, h).unwrap(), rasterize(&b, h).unwrap());
        prop_assert_eq!(ra.n_interior(), rb.n_interior());
        if ra.n_interior() == 0 {
            return Ok(());
        }
        let (la, lb) = (assemble_laplacian(&ra).unwrap(), assemble_laplacian(&rb).unwrap());
        let m = la.n().min(12);
        let sa = lowest_eigenvalues(&la, m, &EigenOptions::default()).unwrap();
        let sb = lowest_eigenvalues(&lb, m, &EigenOptions::default()).unwrap();
        for (x, y) in sa.eigenvalues.iter().zip(&sb.eigenvalues) {
            prop_assert!((x - y).abs() <= 1e-9 * x.abs().max(1.0));
        }
        Ok(())
    })
}

fn family_and_perms() -> impl Strategy<Value = (isodrum::FamilyPair, Vec<usize>, Vec<usize>, usize)> {
    let ids: Vec<&'static str> = catalog::family_ids().collect();
    proptest::sample::select(ids).prop_flat_map(|id| {
        let fam = catalog::family(id).unwrap();
        let n = fam.n_tiles();
        let idx: Vec<usize> = (0..n).collect();
        (
            Just(fam),
            Just(idx.clone()).prop_shuffle(),
            Just(idx).prop_shuffle(),
            0usize..6,
        )
    })
}

pub fn gluing_text_round_trip(cases: u32) -> u32 {
    check("gluing text", cases, family_and_perms(), |(fam, p, q, c)| {
        let mut changed = fam.permute_colors(ColorPermutation::all()[c]);
        changed.left = changed.left.relabel(&p);
        changed.right = changed.right.relabel(&q);
        let text = changed.to_gluing_text();
        let back = parse_gluing_file(text.as_bytes()).unwrap();
        prop_assert_eq!(&back.family_id, &changed.family_id);
        prop_assert_eq!(&back.left, &changed.left);
        prop_assert_eq!(&back.right, &changed.right);
        prop_assert_eq!(back.to_gluing_text(), text);
        Ok(())
    })
}

fn rational_matrix() -> impl Strategy<Value = RationalMatrix> {
    (1usize..7, 1usize..7).prop_flat_map(|(r, c)| {
        proptest::collection::vec((-1000i64..1000, 1i64..30), r * c).prop_map(move |v| {
            let data = v
                .into_iter()
                .map(|(n, d)| BigRational::new(BigInt::from(n), BigInt::from(d)))
                .collect();
            Matrix::from_vec(r, c, data)
        })
    })
}

pub fn matrix_text_round_trip(cases: u32) -> u32 {
    let s = proptest::collection::vec(rational_matrix(), 1..4);
    check("matrix text", cases, s, |ms| {
        let text: String = ms.iter().map(|m| m.to_string()).collect();
        let back = parse_matrices(&text).unwrap();
        prop_assert_eq!(back, ms);
        Ok(())
    })
}

fn permutation_matrix(p: &[usize]) -> RationalMatrix {
    let n = p.len();
    Matrix::from_fn(n, n, |i, j| {
        BigRational::from_integer(BigInt::from(i64::from(p[j] == i)))
    })
}

pub fn relabel_and_recolor_commute(cases: u32) -> u32 {
    check("relabel and recolor", cases, family_and_perms(), |(fam, p, q, c)| {
        let sigma = ColorPermutation::all()[c];
        let conv = SignConvention::Dirichlet;
        for col in Color::ALL {
            let m = fam.left.signed_matrix(col, conv);
            let recolored = fam.left.permute_colors(sigma).signed_matrix(sigma.apply(col), conv);
            prop_assert_eq!(&recolored, &m);
            let moved = fam.left.relabel(&p).signed_matrix(col, conv);
            for i in 0..m.rows() {
                for j in 0..m.cols() {
                    prop_assert_eq!(moved[(p[i], p[j])], m[(i, j)]);
                }
            }
        }
        // an intertwiner follows the relabeling and ignores the recoloring
        let basis = solve_family(&fam, conv);
        let t = basis.rational_matrices().remove(0);
        let (pa, qb) = (permutation_matrix(&p), permutation_matrix(&q));
        let moved_t = qb.mul(&t).mul(&pa.transpose());
        let a = fam.left.relabel(&p).permute_colors(sigma).to_signed_matrices(conv);
        let b = fam.right.relabel(&q).permute_colors(sigma).to_signed_matrices(conv);
        prop_assert!(verify_transplantation(&moved_t, &a, &b).unwrap().is_zero());
        Ok(())
    })
}

/// Cases per suite; the total is what the acceptance run reports.
pub type Suite = (&'static str, fn(u32) -> u32, u32);

pub const SUITES: [Suite; 7] = [
    ("reflection involution 3d", reflection_involution_3d, 300),
    ("reflection involution 2d", reflection_involution_2d, 200),
    ("operator symmetric positive", operator_symmetric_positive, 100),
    ("grid isometry equivariance", grid_isometry_equivariance, 100),
    ("gluing text round trip", gluing_text_round_trip, 150),
    ("matrix text round trip", matrix_text_round_trip, 150),
    ("relabel and recolor commute", relabel_and_recolor_commute, 100),
];
