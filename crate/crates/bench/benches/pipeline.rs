use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use isodrum::geometry::{build_assembly, is_isometric, BaseTile};
use isodrum::spectra::{assemble_laplacian, lowest_eigenvalues, rasterize, EigenOptions};
use isodrum::tiling::SignConvention;
use isodrum::transplant::{decomposition_signature, solve_family};
use isodrum_bench::{family, laplacian, simplex_assembly};

fn transplantation(c: &mut Criterion) {
    for id in ["7_1", "13_1", "21_1"] {
        let pair = family(id);
        c.bench_function(&format!("solve_family {id}"), |b| {
            b.iter(|| decomposition_signature(&solve_family(black_box(&pair), SignConvention::Dirichlet)))
        });
    }
}

fn geometry(c: &mut Criterion) {
    let pair = family("7_1");
    let base = BaseTile::basic_simplex();
    c.bench_function("build_assembly 7_1", |b| b.iter(|| build_assembly(black_box(&pair.left), &base, 0)));
    let cube = BaseTile::unit_cube();
    let a = build_assembly(&pair.left, &cube, 0).unwrap();
    let b2 = build_assembly(&pair.right, &cube, 0).unwrap();
    c.bench_function("is_isometric cube 7_1", |b| b.iter(|| is_isometric(black_box(&a), black_box(&b2))));
}

fn discretization(c: &mut Criterion) {
    let a = simplex_assembly("7_1");
    c.bench_function("rasterize+assemble 7_1 h=1/20", |b| {
        b.iter(|| assemble_laplacian(&rasterize(black_box(&a), 0.05).unwrap()).unwrap())
    });
}

fn eigensolver(c: &mut Criterion) {
    let mut group = c.benchmark_group("eigen");
    group.sample_size(10);
    let coarse = laplacian("7_1", 0.1);
    group.bench_function("dense 7_1 h=1/10 m=25", |b| {
        b.iter(|| lowest_eigenvalues(black_box(&coarse), 25, &EigenOptions::default()).unwrap())
    });
    let fine = laplacian("7_1", 0.05);
    group.bench_function("krylov 7_1 h=1/20 m=25", |b| {
        b.iter(|| lowest_eigenvalues(black_box(&fine), 25, &EigenOptions::default()).unwrap())
    });
    group.finish();
}

criterion_group!(benches, transplantation, geometry, discretization, eigensolver);
criterion_main!(benches);
