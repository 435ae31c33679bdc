//! Exact integer/rational matrices and fraction-free elimination.
//!
//! Everything here works on arbitrary-precision integers. Rational values
//! only appear at the edges (residual reports, text I/O); the elimination
//! itself keeps every row as a primitive integer vector.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Dense row-major matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

pub type IntMatrix = Matrix<i64>;
pub type BigIntMatrix = Matrix<BigInt>;
pub type RationalMatrix = Matrix<BigRational>;

impl<T> Matrix<T> {
    pub fn from_vec(rows: usize, cols: usize, data: Vec<T>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data has wrong length");
        Self { rows, cols, data }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn transpose(&self) -> Self
    where
        T: Clone,
    {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }
}

impl<T: Clone + Zero> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    /// Number of nonzero entries in each row.
    pub fn row_support(&self) -> Vec<usize> {
        (0..self.rows)
            .map(|i| self.row(i).iter().filter(|x| !x.is_zero()).count())
            .collect()
    }

    /// Number of nonzero entries in each column.
    pub fn col_support(&self) -> Vec<usize> {
        (0..self.cols)
            .map(|j| (0..self.rows).filter(|&i| !self[(i, j)].is_zero()).count())
            .collect()
    }
}

impl<T: Clone + Zero + One> Matrix<T> {
    pub fn identity(n: usize) -> Self {
        Matrix::from_fn(n, n, |i, j| if i == j { T::one() } else { T::zero() })
    }
}

impl<T> Matrix<T>
where
    T: Clone + Zero + std::ops::Mul<Output = T>,
{
    /// Plain matrix product; panics on shape mismatch.
    pub fn mul(&self, other: &Matrix<T>) -> Matrix<T> {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if b.is_zero() {
                        continue;
                    }
                    let cur = std::mem::replace(&mut out[(i, j)], T::zero());
                    out[(i, j)] = cur + a.clone() * b.clone();
                }
            }
        }
        out
    }

    pub fn scale(&self, s: &T) -> Matrix<T> {
        self.map(|x| x.clone() * s.clone())
    }
}

impl<T> Matrix<T>
where
    T: Clone + std::ops::Sub<Output = T>,
{
    pub fn sub(&self, other: &Matrix<T>) -> Matrix<T> {
        assert_eq!(self.shape(), other.shape(), "matrix difference shape mismatch");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a.clone() - b.clone())
                .collect(),
        }
    }
}

impl<T> Matrix<T>
where
    T: Clone + std::ops::Add<Output = T>,
{
    pub fn add(&self, other: &Matrix<T>) -> Matrix<T> {
        assert_eq!(self.shape(), other.shape(), "matrix sum shape mismatch");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        }
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl IntMatrix {
    pub fn to_bigint(&self) -> BigIntMatrix {
        self.map(|&x| BigInt::from(x))
    }

    pub fn to_rational(&self) -> RationalMatrix {
        self.map(|&x| BigRational::from_integer(BigInt::from(x)))
    }
}

impl BigIntMatrix {
    pub fn to_rational(&self) -> RationalMatrix {
        self.map(|x| BigRational::from_integer(x.clone()))
    }

    pub fn to_f64(&self) -> Matrix<f64> {
        self.map(|x| x.to_f64().unwrap_or(f64::NAN))
    }
}

impl RationalMatrix {
    pub fn to_f64(&self) -> Matrix<f64> {
        self.map(rational_to_f64)
    }
}

pub fn rational_to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

/// Writes the `matrix <rows> <cols>` text form. Integers print bare,
/// other rationals as `p/q`.
impl fmt::Display for Matrix<BigRational> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "matrix {} {}", self.rows, self.cols)?;
        for i in 0..self.rows {
            let line: Vec<String> = self
                .row(i)
                .iter()
                .map(|q| {
                    if q.is_integer() {
                        q.numer().to_string()
                    } else {
                        format!("{}/{}", q.numer(), q.denom())
                    }
                })
                .collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

impl fmt::Display for Matrix<BigInt> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_rational())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MatrixTextError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("expected {expected} rows, found {found}")]
    RowCount { expected: usize, found: usize },
}

/// Parses every `matrix r c` block in `text`.
pub fn parse_matrices(text: &str) -> Result<Vec<RationalMatrix>, MatrixTextError> {
    let mut out = Vec::new();
    let mut current: Option<(usize, usize, Vec<BigRational>, usize)> = None;
    for (lineno, raw) in text.lines().enumerate() {
        let line_no = lineno + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let syntax = |message: String| MatrixTextError::Syntax {
            line: line_no,
            message,
        };
        let mut tokens = line.split_whitespace();
        if line.starts_with("matrix") {
            if let Some((r, _, _, seen)) = current.take() {
                return Err(MatrixTextError::RowCount {
                    expected: r,
                    found: seen,
                });
            }
            tokens.next();
            let rows: usize = tokens
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| syntax("bad row count".into()))?;
            let cols: usize = tokens
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| syntax("bad column count".into()))?;
            if rows == 0 {
                out.push(Matrix::zeros(0, cols));
            } else {
                current = Some((rows, cols, Vec::with_capacity(rows * cols), 0));
            }
            continue;
        }
        let Some((rows, cols, data, seen)) = current.as_mut() else {
            return Err(syntax("entries before a matrix header".into()));
        };
        let entries: Vec<&str> = tokens.collect();
        if entries.len() != *cols {
            return Err(syntax(format!(
                "expected {} entries, found {}",
                cols,
                entries.len()
            )));
        }
        for e in entries {
            data.push(parse_rational(e).ok_or_else(|| syntax(format!("bad entry `{e}`")))?);
        }
        *seen += 1;
        if *seen == *rows {
            let (r, c, d, _) = current.take().expect("current block");
            out.push(Matrix::from_vec(r, c, d));
        }
    }
    if let Some((r, _, _, seen)) = current {
        return Err(MatrixTextError::RowCount {
            expected: r,
            found: seen,
        });
    }
    Ok(out)
}

fn parse_rational(s: &str) -> Option<BigRational> {
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.parse().ok()?;
            let q: BigInt = q.parse().ok()?;
            if q.is_zero() {
                return None;
            }
            Some(BigRational::new(p, q))
        }
        None => Some(BigRational::from_integer(s.parse().ok()?)),
    }
}

/// Sparse integer row, keyed by column.
pub type SparseRow = BTreeMap<usize, BigInt>;

fn row_content(row: &SparseRow) -> BigInt {
    row.values()
        .fold(BigInt::zero(), |g, v| g.gcd(v))
}

fn make_primitive(row: &mut SparseRow) {
    let g = row_content(row);
    if g > BigInt::one() {
        for v in row.values_mut() {
            *v = &*v / &g;
        }
    }
}

/// `dst <- a*dst - b*src` followed by removal of zeros and content.
fn combine(dst: &mut SparseRow, a: &BigInt, src: &SparseRow, b: &BigInt) {
    if !a.is_one() {
        for v in dst.values_mut() {
            *v *= a;
        }
    }
    for (c, v) in src {
        let e = dst.entry(*c).or_insert_with(BigInt::zero);
        *e -= b * v;
    }
    dst.retain(|_, v| !v.is_zero());
    make_primitive(dst);
}

/// Reduced row-echelon form over the integers.
///
/// Each pivot row is primitive with a positive pivot; other pivot columns
/// are cleared (Gauss-Jordan) using only integer row combinations.
#[derive(Debug, Clone)]
pub struct IntegerEchelon {
    ncols: usize,
    pivots: BTreeMap<usize, SparseRow>,
}

impl IntegerEchelon {
    pub fn new(ncols: usize) -> Self {
        Self {
            ncols,
            pivots: BTreeMap::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    /// Adds one equation. Returns true if it raised the rank.
    pub fn push(&mut self, mut row: SparseRow) -> bool {
        row.retain(|_, v| !v.is_zero());
        // Pivot rows are fully reduced, so one pass over `row`'s pivot
        // columns suffices: each combination only adds free columns.
        let hits: Vec<usize> = row
            .keys()
            .copied()
            .filter(|c| self.pivots.contains_key(c))
            .collect();
        for c in hits {
            let Some(coef) = row.get(&c).cloned() else {
                continue;
            };
            let p = &self.pivots[&c];
            let pv = p[&c].clone();
            let g = pv.gcd(&coef);
            combine(&mut row, &(&pv / &g), p, &(&coef / &g));
        }
        let Some((&pc, _)) = row.iter().next() else {
            return false;
        };
        make_primitive(&mut row);
        if row[&pc].is_negative() {
            for v in row.values_mut() {
                *v = -&*v;
            }
        }
        let pv = row[&pc].clone();
        for other in self.pivots.values_mut() {
            if let Some(coef) = other.get(&pc).cloned() {
                let g = pv.gcd(&coef);
                combine(other, &(&pv / &g), &row, &(&coef / &g));
            }
        }
        self.pivots.insert(pc, row);
        true
    }

    /// Integer nullspace basis, one vector per free column in ascending
    /// order, each primitive with its first nonzero entry positive.
    pub fn nullspace(&self) -> Vec<Vec<BigInt>> {
        let mut basis = Vec::new();
        for free in (0..self.ncols).filter(|c| !self.pivots.contains_key(c)) {
            let mut l = BigInt::one();
            for (pc, row) in &self.pivots {
                if row.contains_key(&free) {
                    l = l.lcm(&row[pc]);
                }
            }
            let mut v = vec![BigInt::zero(); self.ncols];
            v[free] = l.clone();
            for (pc, row) in &self.pivots {
                if let Some(coef) = row.get(&free) {
                    v[*pc] = -(&l * coef) / &row[pc];
                }
            }
            normalize_vector(&mut v);
            basis.push(v);
        }
        basis
    }
}

/// Divides out the content and makes the first nonzero entry positive.
pub fn normalize_vector(v: &mut [BigInt]) {
    let g = v.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if g.is_zero() {
        return;
    }
    let flip = v.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative());
    for x in v.iter_mut() {
        *x = &*x / &g;
        if flip {
            *x = -&*x;
        }
    }
}

/// Nullspace of a dense integer matrix.
pub fn integer_nullspace(m: &BigIntMatrix) -> Vec<Vec<BigInt>> {
    let mut ech = IntegerEchelon::new(m.cols());
    for i in 0..m.rows() {
        let row: SparseRow = m
            .row(i)
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(j, v)| (j, v.clone()))
            .collect();
        ech.push(row);
    }
    ech.nullspace()
}

/// Rank of a dense integer matrix.
pub fn integer_rank(m: &BigIntMatrix) -> usize {
    let mut ech = IntegerEchelon::new(m.cols());
    for i in 0..m.rows() {
        let row: SparseRow = m
            .row(i)
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(j, v)| (j, v.clone()))
            .collect();
        ech.push(row);
    }
    ech.rank()
}

/// Bareiss fraction-free determinant.
pub fn determinant(m: &BigIntMatrix) -> BigInt {
    assert!(m.is_square(), "determinant of a non-square matrix");
    let n = m.rows();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: Vec<Vec<BigInt>> = (0..n).map(|i| m.row(i).to_vec()).collect();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    sign * a[n - 1][n - 1].clone()
}
