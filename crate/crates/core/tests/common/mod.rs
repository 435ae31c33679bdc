#![allow(dead_code)]

pub mod props;

use isodrum::catalog;
use isodrum::exact::{IntMatrix, Matrix};
use isodrum::transplant::MatrixTriple;
use isodrum::geometry::{build_assembly, Assembly, BaseTile};
use isodrum::spectra::{assemble_laplacian, lowest_eigenvalues, rasterize, EigenOptions, Spectrum};

/// Printed first 25 eigenvalues at h = 1/20 (both classes agree to four
/// decimals, so one column per table).
pub const TABLE_7_1: [f64; 25] = [
    44.4718, 62.8210, 68.9764, 80.4222, 86.0231, 103.2302, 105.6904, 110.1293, 117.5639, 126.6846, 130.2792,
    136.1989, 136.5769, 142.5582, 147.9829, 154.1811, 161.1378, 164.5301, 169.0497, 172.1153, 176.0983, 180.6497,
    185.0137, 190.4692, 194.8700,
];

pub const TABLE_7_2: [f64; 25] = [
    44.9835, 61.4888, 70.0240, 80.6794, 86.2937, 102.1243, 104.7903, 110.7750, 121.5084, 124.1022, 129.6075,
    136.1989, 137.0019, 142.1820, 146.8989, 157.7060, 160.9049, 163.9460, 165.5862, 171.1039, 178.3842, 183.0443,
    185.0180, 191.9694, 195.6234,
];

pub const TABLE_7_3: [f64; 25] = [
    49.2289, 56.0467, 72.6396, 79.9743, 92.0586, 99.5111, 104.0452, 113.2988, 120.5720, 124.4357, 131.7220,
    133.3562, 136.1989, 144.0266, 152.4877, 156.3340, 156.5645, 162.8653, 169.5866, 173.2912, 179.6543, 185.0656,
    186.5775, 190.4249, 193.5350,
];

pub fn table(id: &str) -> &'static [f64; 25] {
    match id {
        "7_1" => &TABLE_7_1,
        "7_2" => &TABLE_7_2,
        "7_3" => &TABLE_7_3,
        _ => panic!("no table for {id}"),
    }
}

pub fn family_assembly(id: &str, left: bool, base: &BaseTile) -> Assembly {
    let fam = catalog::family(id).unwrap();
    build_assembly(if left { &fam.left } else { &fam.right }, base, 0).unwrap()
}

pub fn spectrum(a: &Assembly, h: f64, m: usize, opts: &EigenOptions) -> Spectrum {
    let l = assemble_laplacian(&rasterize(a, h).unwrap()).unwrap();
    lowest_eigenvalues(&l, m, opts).unwrap()
}

/// Closed-form eigenvalues of the grid Laplacian on a box with `nodes[i]`
/// interior nodes along axis `i`, ascending.
pub fn box_grid_eigenvalues(nodes: &[usize], h: f64) -> Vec<f64> {
    let mut out = vec![0.0];
    for &n in nodes {
        let step = 1.0 / (n as f64 + 1.0);
        let axis: Vec<f64> = (1..=n)
            .map(|p| 4.0 / (h * h) * (std::f64::consts::PI * p as f64 * step / 2.0).sin().powi(2))
            .collect();
        out = out.iter().flat_map(|a| axis.iter().map(move |b| a + b)).collect();
    }
    out.sort_by(f64::total_cmp);
    out
}

pub fn int_matrix(n: usize, rows: &[&[i64]]) -> IntMatrix {
    Matrix::from_vec(n, n, rows.iter().flat_map(|r| r.iter().copied()).collect())
}

/// The class 7_1 gluing matrices exactly as printed, +1 on boundary diagonals.
pub fn printed_7_1_matrices() -> (MatrixTriple, MatrixTriple) {
    let a1 = int_matrix(7, &[
        &[0, 1, 0, 0, 0, 0, 0],
        &[1, 0, 0, 0, 0, 0, 0],
        &[0, 0, 1, 0, 0, 0, 0],
        &[0, 0, 0, 0, 0, 0, 1],
        &[0, 0, 0, 0, 1, 0, 0],
        &[0, 0, 0, 0, 0, 1, 0],
        &[0, 0, 0, 1, 0, 0, 0],
    ]);
    let a2 = int_matrix(7, &[
        &[0, 0, 1, 0, 0, 0, 0],
        &[0, 0, 0, 0, 1, 0, 0],
        &[1, 0, 0, 0, 0, 0, 0],
        &[0, 0, 0, 1, 0, 0, 0],
        &[0, 1, 0, 0, 0, 0, 0],
        &[0, 0, 0, 0, 0, 1, 0],
        &[0, 0, 0, 0, 0, 0, 1],
    ]);
    let a3 = int_matrix(7, &[
        &[0, 0, 0, 1, 0, 0, 0],
        &[0, 1, 0, 0, 0, 0, 0],
        &[0, 0, 0, 0, 0, 1, 0],
        &[1, 0, 0, 0, 0, 0, 0],
        &[0, 0, 0, 0, 1, 0, 0],
        &[0, 0, 1, 0, 0, 0, 0],
        &[0, 0, 0, 0, 0, 0, 1],
    ]);
    let b1 = int_matrix(7, &[
        &[0, 1, 0, 0, 0, 0, 0],
        &[1, 0, 0, 0, 0, 0, 0],
        &[0, 0, 0, 0, 0, 1, 0],
        &[0, 0, 0, 1, 0, 0, 0],
        &[0, 0, 0, 0, 1, 0, 0],
        &[0, 0, 1, 0, 0, 0, 0],
        &[0, 0, 0, 0, 0, 0, 1],
    ]);
    let b2 = int_matrix(7, &[
        &[0, 0, 1, 0, 0, 0, 0],
        &[0, 1, 0, 0, 0, 0, 0],
        &[1, 0, 0, 0, 0, 0, 0],
        &[0, 0, 0, 0, 0, 0, 1],
        &[0, 0, 0, 0, 1, 0, 0],
        &[0, 0, 0, 0, 0, 1, 0],
        &[0, 0, 0, 1, 0, 0, 0],
    ]);
    let b3 = int_matrix(7, &[
        &[0, 0, 0, 1, 0, 0, 0],
        &[0, 0, 0, 0, 1, 0, 0],
        &[0, 0, 1, 0, 0, 0, 0],
        &[1, 0, 0, 0, 0, 0, 0],
        &[0, 1, 0, 0, 0, 0, 0],
        &[0, 0, 0, 0, 0, 1, 0],
        &[0, 0, 0, 0, 0, 0, 1],
    ]);
    ([a1, a2, a3], [b1, b2, b3])
}
