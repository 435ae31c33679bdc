//! Exact solution of the transplantation constraint `T A^ν = B^ν T`.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::exact::{determinant, normalize_vector, BigIntMatrix, IntMatrix, IntegerEchelon, Matrix, RationalMatrix, SparseRow};
use crate::tiling::{Color, FamilyPair, SignConvention};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransplantError {
    #[error("shape mismatch: expected {expected}x{expected}, found {rows}x{cols}")]
    Shape {
        expected: usize,
        rows: usize,
        cols: usize,
    },
    #[error("{side} {color} matrix is not a signed permutation")]
    NotSignedPermutation { side: &'static str, color: Color },
    #[error("vector has length {found}, expected {expected}")]
    Length { expected: usize, found: usize },
}

/// Red, blue, black gluing matrices of one domain.
pub type MatrixTriple = [IntMatrix; 3];

/// Row `i` of a signed permutation: `(column, sign)` of its single nonzero.
fn signed_perm_rows(m: &IntMatrix) -> Option<Vec<(usize, i64)>> {
    let n = m.rows();
    let mut cols_seen = vec![false; n];
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let nz: Vec<(usize, i64)> = m
            .row(i)
            .iter()
            .enumerate()
            .filter(|(_, v)| **v != 0)
            .map(|(j, v)| (j, *v))
            .collect();
        match nz.as_slice() {
            [(j, s)] if s.abs() == 1 && !cols_seen[*j] => {
                cols_seen[*j] = true;
                out.push((*j, *s));
            }
            _ => return None,
        }
    }
    Some(out)
}

/// All solutions `T` of the constraint, as an integer basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransplantationBasis {
    n_tiles: usize,
    basis: Vec<BigIntMatrix>,
}

impl TransplantationBasis {
    pub fn n_tiles(&self) -> usize {
        self.n_tiles
    }

    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    /// Each matrix has content 1 and a positive first nonzero entry.
    pub fn matrices(&self) -> &[BigIntMatrix] {
        &self.basis
    }

    pub fn rational_matrices(&self) -> Vec<RationalMatrix> {
        self.basis.iter().map(BigIntMatrix::to_rational).collect()
    }

    /// `Σ c_k basis_k`.
    pub fn combination(&self, coeffs: &[BigInt]) -> BigIntMatrix {
        assert_eq!(coeffs.len(), self.basis.len(), "one coefficient per basis matrix");
        let n = self.n_tiles;
        let mut out = BigIntMatrix::zeros(n, n);
        for (c, b) in coeffs.iter().zip(&self.basis) {
            if !c.is_zero() {
                out = out.add(&b.scale(c));
            }
        }
        out
    }
}

fn check_triple(t: &MatrixTriple, n: usize, side: &'static str) -> Result<Vec<Vec<(usize, i64)>>, TransplantError> {
    let mut out = Vec::with_capacity(3);
    for c in Color::ALL {
        let m = &t[c.index()];
        if m.rows() != n || m.cols() != n {
            return Err(TransplantError::Shape {
                expected: n,
                rows: m.rows(),
                cols: m.cols(),
            });
        }
        out.push(signed_perm_rows(m).ok_or(TransplantError::NotSignedPermutation { side, color: c })?);
    }
    Ok(out)
}

/// Solves `T A^ν = B^ν T` for ν = red, blue, black.
///
/// Each of the 3N² scalar equations touches two unknowns, so the
/// elimination runs on sparse integer rows.
pub fn solve_transplantation(a: &MatrixTriple, b: &MatrixTriple) -> Result<TransplantationBasis, TransplantError> {
    let n = a[0].rows();
    let ra = check_triple(a, n, "A")?;
    let rb = check_triple(b, n, "B")?;
    let var = |i: usize, j: usize| i * n + j;
    let mut ech = IntegerEchelon::new(n * n);
    for c in 0..3 {
        // A is symmetric in practice but not assumed: column j of A has its
        // nonzero at row `acol[j]`.
        let mut acol = vec![(0usize, 0i64); n];
        for (r, &(j, s)) in ra[c].iter().enumerate() {
            acol[j] = (r, s);
        }
        for i in 0..n {
            let (bi, sb) = rb[c][i];
            for j in 0..n {
                let (aj, sa) = acol[j];
                // (T A)[i,j] - (B T)[i,j] = sa T[i,aj] - sb T[bi,j]
                let mut row = SparseRow::new();
                *row.entry(var(i, aj)).or_insert_with(BigInt::zero) += sa;
                *row.entry(var(bi, j)).or_insert_with(BigInt::zero) -= sb;
                ech.push(row);
            }
        }
    }
    let basis = ech
        .nullspace()
        .into_iter()
        .map(|v| Matrix::from_vec(n, n, v))
        .collect();
    Ok(TransplantationBasis { n_tiles: n, basis })
}

/// Builds both triples from a family pair and solves.
pub fn solve_family(pair: &FamilyPair, conv: SignConvention) -> TransplantationBasis {
    let a = pair.left.to_signed_matrices(conv);
    let b = pair.right.to_signed_matrices(conv);
    solve_transplantation(&a, &b).expect("gluing graphs always give signed permutations")
}

/// Exact residuals `T A^ν − B^ν T` for each color.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidualReport {
    pub residuals: [RationalMatrix; 3],
}

impl ResidualReport {
    pub fn is_zero(&self) -> bool {
        self.residuals.iter().all(Matrix::is_zero)
    }

    pub fn nonzero_colors(&self) -> Vec<Color> {
        Color::ALL
            .into_iter()
            .filter(|c| !self.residuals[c.index()].is_zero())
            .collect()
    }
}

pub fn verify_transplantation(
    t: &RationalMatrix,
    a: &MatrixTriple,
    b: &MatrixTriple,
) -> Result<ResidualReport, TransplantError> {
    let n = t.rows();
    if !t.is_square() {
        return Err(TransplantError::Shape {
            expected: n,
            rows: t.rows(),
            cols: t.cols(),
        });
    }
    for m in a.iter().chain(b.iter()) {
        if m.shape() != (n, n) {
            return Err(TransplantError::Shape {
                expected: n,
                rows: m.rows(),
                cols: m.cols(),
            });
        }
    }
    let residuals = std::array::from_fn(|c| {
        let ar = a[c].to_rational();
        let br = b[c].to_rational();
        t.mul(&ar).sub(&br.mul(t))
    });
    Ok(ResidualReport { residuals })
}

/// Outcome of the support-count search on a two-dimensional basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecompositionSignature {
    /// `(k, m)` with `k <= m`, or `None` when no pair was found.
    pub counts: Option<(usize, usize)>,
    /// Integer representatives `T_k`, `T_m` matching `counts`.
    pub representatives: Option<(BigIntMatrix, BigIntMatrix)>,
}

impl DecompositionSignature {
    fn unknown() -> Self {
        Self {
            counts: None,
            representatives: None,
        }
    }
}

/// Primitive direction `(α, β)` with a canonical sign.
fn direction(alpha: BigInt, beta: BigInt) -> Option<(BigInt, BigInt)> {
    if alpha.is_zero() && beta.is_zero() {
        return None;
    }
    let g = alpha.gcd(&beta);
    let (mut a, mut b) = (alpha / &g, beta / &g);
    if a.is_negative() || (a.is_zero() && b.is_negative()) {
        a = -a;
        b = -b;
    }
    Some((a, b))
}

fn combine2(u: &BigIntMatrix, v: &BigIntMatrix, d: &(BigInt, BigInt)) -> BigIntMatrix {
    let mut m = u.scale(&d.0).add(&v.scale(&d.1));
    let mut flat: Vec<BigInt> = m.as_slice().to_vec();
    normalize_vector(&mut flat);
    m = Matrix::from_vec(u.rows(), u.cols(), flat);
    m
}

/// Directions in span{u, v} that cancel at least one entry.
fn cancelling_directions(u: &BigIntMatrix, v: &BigIntMatrix) -> BTreeSet<(BigInt, BigInt)> {
    u.as_slice()
        .iter()
        .zip(v.as_slice())
        .filter_map(|(x, y)| direction(y.clone(), -x.clone()))
        .collect()
}

/// The common row and column support, if it is constant.
fn constant_support(m: &BigIntMatrix) -> Option<usize> {
    let rows = m.row_support();
    let cols = m.col_support();
    let k = *rows.first()?;
    (k > 0 && rows.iter().all(|&r| r == k) && cols.iter().all(|&c| c == k)).then_some(k)
}

/// Finds `T_k`, `T_m` spanning a two-dimensional basis with constant
/// row/column support counts, preferring the smallest `k + m`.
pub fn decomposition_signature(basis: &TransplantationBasis) -> DecompositionSignature {
    if basis.dimension() != 2 {
        return DecompositionSignature::unknown();
    }
    let (u, v) = (&basis.basis[0], &basis.basis[1]);
    let mut dirs = cancelling_directions(u, v);
    dirs.insert((BigInt::one(), BigInt::zero()));
    dirs.insert((BigInt::zero(), BigInt::one()));
    let candidates: Vec<((BigInt, BigInt), usize, BigIntMatrix)> = dirs
        .into_iter()
        .filter_map(|d| {
            let m = combine2(u, v, &d);
            constant_support(&m).map(|k| (d, k, m))
        })
        .collect();
    let mut best: Option<(usize, usize, usize)> = None;
    for i in 0..candidates.len() {
        for j in i + 1..candidates.len() {
            let (di, ki, _) = &candidates[i];
            let (dj, kj, _) = &candidates[j];
            // independent directions
            if &di.0 * &dj.1 == &di.1 * &dj.0 {
                continue;
            }
            let score = ki + kj;
            if best.is_none_or(|(s, _, _)| score < s) {
                best = Some((score, i, j));
            }
        }
    }
    let Some((_, i, j)) = best else {
        return DecompositionSignature::unknown();
    };
    let (mut a, mut b) = (&candidates[i], &candidates[j]);
    if a.1 > b.1 {
        std::mem::swap(&mut a, &mut b);
    }
    DecompositionSignature {
        counts: Some((a.1, b.1)),
        representatives: Some((a.2.clone(), b.2.clone())),
    }
}

/// True if `m` is a nonzero scalar times a signed permutation matrix.
pub fn is_scaled_signed_permutation(m: &BigIntMatrix) -> bool {
    let n = m.rows();
    if !m.is_square() || n == 0 {
        return false;
    }
    let mut scale: Option<BigInt> = None;
    let mut col_used = vec![false; n];
    for i in 0..n {
        let nz: Vec<(usize, &BigInt)> = m.row(i).iter().enumerate().filter(|(_, x)| !x.is_zero()).collect();
        let [(j, x)] = nz.as_slice() else {
            return false;
        };
        if std::mem::replace(&mut col_used[*j], true) {
            return false;
        }
        match &scale {
            None => scale = Some(x.abs()),
            Some(s) if *s == x.abs() => {}
            Some(_) => return false,
        }
    }
    true
}

/// Directions along which a scaled signed permutation could live in
/// span{u, v}: those cancelling an entry, plus those equalizing the
/// magnitudes of a reference entry and every other entry.
fn permutation_candidate_directions(u: &BigIntMatrix, v: &BigIntMatrix) -> BTreeSet<(BigInt, BigInt)> {
    let mut dirs = cancelling_directions(u, v);
    dirs.insert((BigInt::one(), BigInt::zero()));
    dirs.insert((BigInt::zero(), BigInt::one()));
    let entries: Vec<(&BigInt, &BigInt)> = u
        .as_slice()
        .iter()
        .zip(v.as_slice())
        .filter(|(x, y)| !x.is_zero() || !y.is_zero())
        .collect();
    if let Some(&(u0, v0)) = entries.first() {
        for &(ue, ve) in &entries[1..] {
            for s in [1i32, -1] {
                // α(u0 − s ue) + β(v0 − s ve) = 0
                let a = u0 - ue * s;
                let b = v0 - ve * s;
                if let Some(d) = direction(b, -a) {
                    dirs.insert(d);
                }
            }
        }
    }
    dirs
}

/// Whether the span contains an invertible element that is not a scaled
/// signed permutation, with no invertible scaled signed permutation at all.
pub fn is_nontrivial(basis: &TransplantationBasis) -> bool {
    let n = basis.n_tiles;
    match basis.dimension() {
        0 => false,
        1 => {
            let m = &basis.basis[0];
            !is_scaled_signed_permutation(m) && !determinant(m).is_zero()
        }
        2 => {
            let (u, v) = (&basis.basis[0], &basis.basis[1]);
            let perm_found = permutation_candidate_directions(u, v)
                .iter()
                .any(|d| is_scaled_signed_permutation(&combine2(u, v, d)));
            if perm_found {
                return false;
            }
            // det(u + t v) has degree ≤ n in t; n + 1 samples decide it.
            (0..=n as i64).any(|t| !determinant(&u.add(&v.scale(&BigInt::from(t)))).is_zero())
        }
        _ => {
            // Larger spans: check basis elements and pairwise planes for
            // signed permutations, then sample random combinations for
            // invertibility (a nonzero determinant polynomial rarely
            // vanishes at random integer points).
            let b = &basis.basis;
            for m in b {
                if is_scaled_signed_permutation(m) {
                    return false;
                }
            }
            for i in 0..b.len() {
                for j in i + 1..b.len() {
                    if permutation_candidate_directions(&b[i], &b[j])
                        .iter()
                        .any(|d| is_scaled_signed_permutation(&combine2(&b[i], &b[j], d)))
                    {
                        return false;
                    }
                }
            }
            let mut rng = ChaCha8Rng::seed_from_u64(0x7a11);
            (0..8).any(|_| {
                let coeffs: Vec<BigInt> = (0..b.len()).map(|_| BigInt::from(rng.random_range(-1_000_000i64..=1_000_000))).collect();
                !determinant(&basis.combination(&coeffs)).is_zero()
            })
        }
    }
}

/// Per-tile coefficients together with the scale applied on transplanting.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TileVector {
    pub values: Vec<BigRational>,
    pub normalization: BigRational,
}

impl TileVector {
    pub fn new(values: Vec<BigRational>) -> Self {
        Self {
            values,
            normalization: BigRational::one(),
        }
    }

    pub fn from_integers(values: &[i64]) -> Self {
        Self::new(values.iter().map(|&x| BigRational::from_integer(x.into())).collect())
    }

    pub fn with_normalization(mut self, c: BigRational) -> Self {
        self.normalization = c;
        self
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// `𝒞 T v`, with `𝒞` taken from `v`. The result carries normalization 1.
pub fn transplant_coefficients(t: &RationalMatrix, v: &TileVector) -> Result<TileVector, TransplantError> {
    if t.cols() != v.len() {
        return Err(TransplantError::Length {
            expected: t.cols(),
            found: v.len(),
        });
    }
    let values = (0..t.rows())
        .map(|i| {
            let s = t
                .row(i)
                .iter()
                .zip(&v.values)
                .fold(BigRational::zero(), |acc, (a, x)| acc + a * x);
            s * &v.normalization
        })
        .collect();
    Ok(TileVector::new(values))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tiling::GluingGraph;

    fn one_tile() -> MatrixTriple {
        std::array::from_fn(|_| IntMatrix::from_vec(1, 1, vec![-1]))
    }

    #[test]
    fn single_tile_self_pair_is_trivial() {
        let a = one_tile();
        let basis = solve_transplantation(&a, &a).unwrap();
        assert_eq!(basis.dimension(), 1);
        assert_eq!(basis.matrices()[0].as_slice(), &[BigInt::one()]);
        assert!(!is_nontrivial(&basis));
    }

    #[test]
    fn shape_mismatch_is_reported() {
        let a = one_tile();
        let g = GluingGraph::from_pairs(2, [&[(0, 1)], &[], &[]]).unwrap();
        let b = g.to_signed_matrices(SignConvention::Dirichlet);
        assert!(matches!(
            solve_transplantation(&a, &b),
            Err(TransplantError::Shape { expected: 1, .. })
        ));
    }

    #[test]
    fn non_permutation_input_rejected() {
        let mut a = one_tile();
        a[1] = IntMatrix::from_vec(1, 1, vec![2]);
        assert_eq!(
            solve_transplantation(&a, &one_tile()),
            Err(TransplantError::NotSignedPermutation {
                side: "A",
                color: Color::Blue
            })
        );
    }

    #[test]
    fn scaled_signed_permutation_detection() {
        let m = |v: &[i64]| BigIntMatrix::from_vec(2, 2, v.iter().map(|&x| x.into()).collect());
        assert!(is_scaled_signed_permutation(&m(&[0, 3, -3, 0])));
        assert!(!is_scaled_signed_permutation(&m(&[0, 3, -2, 0])));
        assert!(!is_scaled_signed_permutation(&m(&[1, 1, 0, 1])));
        assert!(!is_scaled_signed_permutation(&m(&[0, 0, 0, 0])));
    }

    #[test]
    fn transplant_length_mismatch() {
        let t = RationalMatrix::identity(2);
        let v = TileVector::from_integers(&[1, 2, 3]);
        assert_eq!(
            transplant_coefficients(&t, &v),
            Err(TransplantError::Length { expected: 2, found: 3 })
        );
    }
}
