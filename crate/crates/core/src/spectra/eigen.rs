use faer::linalg::solvers::Solve;
use faer::sparse::linalg::solvers::Llt;
use faer::sparse::{SparseColMat, Triplet};
use faer::{Mat, Side};
use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::laplacian::DiscreteLaplacian;
use super::SpectraError;

pub const DEFAULT_SEED: u64 = 20_240_917;

#[derive(Debug, Clone, PartialEq)]
pub struct EigenOptions {
    /// Required `‖Lv − λv‖ / λ` for every returned pair.
    pub tol: f64,
    pub seed: u64,
    /// Operators up to this size are diagonalized densely.
    pub dense_limit: usize,
    pub vectors: bool,
    pub max_restarts: usize,
}

impl Default for EigenOptions {
    fn default() -> Self {
        EigenOptions {
            tol: 1e-10,
            seed: DEFAULT_SEED,
            dense_limit: 2000,
            vectors: false,
            max_restarts: 60,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolverKind {
    Dense,
    /// Block Krylov iteration on `L⁻¹` with thick restarts.
    ShiftInvertKrylov,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverInfo {
    pub kind: SolverKind,
    pub tol: f64,
    pub h: f64,
    pub n: usize,
    /// Restarts (Krylov) or 1 (dense).
    pub iterations: usize,
    pub linear_solves: usize,
    /// Relative residual of each returned pair.
    pub residuals: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Unit-norm eigenvectors, one per eigenvalue, when requested.
    pub eigenvectors: Option<Vec<Vec<f64>>>,
    pub info: SolverInfo,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

/// Makes the largest-magnitude entry positive.
fn fix_sign(v: &mut [f64]) {
    let mut best = 0.0f64;
    let mut sign = 1.0;
    for &x in v.iter() {
        if x.abs() > best * (1.0 + 1e-12) {
            best = x.abs();
            sign = x.signum();
        }
    }
    if sign < 0.0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }
}

/// Rayleigh quotient and relative residual of a unit vector.
fn residual(l: &DiscreteLaplacian, v: &[f64]) -> (f64, f64) {
    let lv = l.mul(v);
    let rho = dot(v, &lv) / dot(v, v);
    let r: f64 = lv.iter().zip(v).map(|(a, b)| (a - rho * b).powi(2)).sum::<f64>().sqrt();
    (rho, r / (rho.abs() * norm(v)))
}

/// The `m` smallest eigenvalues of `l`.
pub fn lowest_eigenvalues(l: &DiscreteLaplacian, m: usize, opts: &EigenOptions) -> Result<Spectrum, SpectraError> {
    let n = l.n();
    if m > n {
        return Err(SpectraError::TooManyModes { requested: m, available: n });
    }
    if n <= opts.dense_limit {
        dense(l, m, opts)
    } else {
        krylov(l, m, opts)
    }
}

fn finish(
    l: &DiscreteLaplacian,
    mut pairs: Vec<(f64, Vec<f64>)>,
    opts: &EigenOptions,
    kind: SolverKind,
    iterations: usize,
    linear_solves: usize,
) -> Spectrum {
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut residuals = Vec::with_capacity(pairs.len());
    for (lambda, v) in &mut pairs {
        let s = 1.0 / norm(v);
        v.iter_mut().for_each(|x| *x *= s);
        fix_sign(v);
        let (rho, res) = residual(l, v);
        *lambda = rho;
        residuals.push(res);
    }
    let eigenvalues = pairs.iter().map(|p| p.0).collect();
    let eigenvectors = opts.vectors.then(|| pairs.into_iter().map(|p| p.1).collect());
    Spectrum {
        eigenvalues,
        eigenvectors,
        info: SolverInfo {
            kind,
            tol: opts.tol,
            h: l.h(),
            n: l.n(),
            iterations,
            linear_solves,
            residuals,
        },
    }
}

fn dense(l: &DiscreteLaplacian, m: usize, opts: &EigenOptions) -> Result<Spectrum, SpectraError> {
    let eig = SymmetricEigen::new(l.to_dense());
    let mut order: Vec<usize> = (0..l.n()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let pairs = order[..m]
        .iter()
        .map(|&k| (eig.eigenvalues[k], eig.eigenvectors.column(k).iter().copied().collect()))
        .collect();
    Ok(finish(l, pairs, opts, SolverKind::Dense, 1, 0))
}

/// Cholesky factor of the integer stencil `h²L`.
struct ShiftInvert {
    llt: Llt<usize, f64>,
    h2: f64,
    n: usize,
}

impl ShiftInvert {
    fn new(l: &DiscreteLaplacian) -> Result<Self, SpectraError> {
        let triplets: Vec<Triplet<usize, usize, f64>> =
            l.stencil_lower().into_iter().map(|(i, j, v)| Triplet::new(i, j, v)).collect();
        let a = SparseColMat::<usize, f64>::try_new_from_triplets(l.n(), l.n(), &triplets)
            .map_err(|e| SpectraError::Factorization(format!("{e:?}")))?;
        let llt = a.sp_cholesky(Side::Lower).map_err(|e| SpectraError::Factorization(e.to_string()))?;
        Ok(ShiftInvert {
            llt,
            h2: l.h() * l.h(),
            n: l.n(),
        })
    }

    /// `L⁻¹` applied to each column.
    fn solve(&self, cols: &[Vec<f64>]) -> Vec<Vec<f64>> {
        let b = Mat::<f64>::from_fn(self.n, cols.len(), |i, j| cols[j][i] * self.h2);
        let x = self.llt.solve(&b);
        (0..cols.len()).map(|j| (0..self.n).map(|i| x[(i, j)]).collect()).collect()
    }
}

fn random_vector(n: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    (0..n).map(|_| rng.random::<f64>() - 0.5).collect()
}

/// Orthonormalizes `block` against `basis` and itself (two Gram-Schmidt
/// passes); columns that vanish are replaced by random vectors.
fn orthonormalize(basis: &[Vec<f64>], block: Vec<Vec<f64>>, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    let n = basis.first().or(block.first()).map_or(0, Vec::len);
    let mut out: Vec<Vec<f64>> = Vec::with_capacity(block.len());
    for mut c in block {
        for _attempt in 0..8 {
            let before = norm(&c);
            for _pass in 0..2 {
                for q in basis.iter().chain(out.iter()) {
                    let a = dot(q, &c);
                    axpy(-a, q, &mut c);
                }
            }
            let after = norm(&c);
            if before > 0.0 && after > 1e-13 * before {
                c.iter_mut().for_each(|x| *x /= after);
                break;
            }
            c = random_vector(n, rng);
        }
        out.push(c);
    }
    out
}

fn combine(vs: &[Vec<f64>], coeffs: &DMatrix<f64>, col: usize) -> Vec<f64> {
    let mut out = vec![0.0; vs[0].len()];
    for (i, v) in vs.iter().enumerate() {
        let c = coeffs[(i, col)];
        if c != 0.0 {
            axpy(c, v, &mut out);
        }
    }
    out
}

fn krylov(l: &DiscreteLaplacian, m: usize, opts: &EigenOptions) -> Result<Spectrum, SpectraError> {
    let n = l.n();
    let op = ShiftInvert::new(l)?;
    let block = m.clamp(6, 12).min(n);
    let kmax = (m + 3 * block).max(2 * m + block).min(n);
    let keep = (m + block).min(kmax.saturating_sub(block)).max(m);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut v: Vec<Vec<f64>> = Vec::new();
    let mut w: Vec<Vec<f64>> = Vec::new();
    let mut next: Vec<Vec<f64>> = (0..block).map(|_| random_vector(n, &mut rng)).collect();
    let mut solves = 0;
    let mut worst = Vec::new();

    for restart in 0..=opts.max_restarts {
        while v.len() < kmax {
            next.truncate(kmax - v.len());
            let q = orthonormalize(&v, std::mem::take(&mut next), &mut rng);
            let wq = op.solve(&q);
            solves += q.len();
            v.extend(q);
            w.extend(wq.iter().cloned());
            next = wq;
        }
        let k = v.len();
        let mut hmat = DMatrix::<f64>::zeros(k, k);
        for i in 0..k {
            for j in i..k {
                let x = 0.5 * (dot(&v[i], &w[j]) + dot(&v[j], &w[i]));
                hmat[(i, j)] = x;
                hmat[(j, i)] = x;
            }
        }
        let eig = SymmetricEigen::new(hmat);
        let mut order: Vec<usize> = (0..k).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
        let nk = keep.min(k);
        let ritz: Vec<Vec<f64>> = order[..nk].iter().map(|&c| combine(&v, &eig.eigenvectors, c)).collect();
        let ritz_w: Vec<Vec<f64>> = order[..nk].iter().map(|&c| combine(&w, &eig.eigenvectors, c)).collect();
        let res: Vec<(f64, f64)> = ritz[..m].iter().map(|u| residual(l, u)).collect();
        worst = res.iter().map(|r| r.1).collect();
        if res.iter().all(|r| r.1 <= opts.tol) || k == n {
            let pairs = res.iter().map(|r| r.0).zip(ritz).collect();
            return Ok(finish(l, pairs, opts, SolverKind::ShiftInvertKrylov, restart, solves));
        }
        // continue from the images of the least converged wanted vectors
        let mut pick: Vec<usize> = (0..m).filter(|&j| res[j].1 > opts.tol).collect();
        let rest: Vec<usize> = (m..nk).chain(0..m).filter(|j| !pick.contains(j)).collect();
        pick.extend(rest);
        pick.truncate(block);
        next = pick.iter().map(|&j| ritz_w[j].clone()).collect();
        v = ritz;
        w = ritz_w;
    }
    let worst_value = worst.iter().copied().fold(0.0, f64::max);
    Err(SpectraError::NotConverged {
        iterations: opts.max_restarts,
        worst: worst_value,
        residuals: worst,
    })
}
