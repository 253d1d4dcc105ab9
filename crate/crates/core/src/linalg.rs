//! Dense square-matrix routines used by the linear cipher and the
//! known-plaintext attack.
//!
//! Two independent inversion routes are provided: Gauss-Jordan elimination
//! with partial pivoting (the working path) and the adjugate formula
//! `A⁻¹ = adj(A) / det(A)` via cofactor expansion, which is only practical
//! for small matrices and serves as a cross-check.

use std::fmt;
use std::ops::{Index, IndexMut};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Relative pivot threshold below which a matrix is treated as singular.
pub const DEFAULT_DELTA_MIN: f64 = 1e-6;

/// Row-major dense matrix.
#[derive(Clone, PartialEq)]
pub struct Matrix<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

impl<F: Real> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![F::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = F::one();
        }
        m
    }

    pub fn from_rows(rows: &[Vec<F>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::InvalidKey("matrix rows have unequal lengths".into()));
        }
        Ok(Matrix {
            rows: r,
            cols: c,
            data: rows.iter().flatten().copied().collect(),
        })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> F) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[F] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<F>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    /// `self · v`, accumulated into `out`.
    pub fn mul_vec_into(&self, v: &[F], out: &mut [F]) {
        debug_assert_eq!(v.len(), self.cols);
        debug_assert_eq!(out.len(), self.rows);
        for (i, o) in out.iter_mut().enumerate() {
            *o = self
                .row(i)
                .iter()
                .zip(v)
                .fold(F::zero(), |acc, (&a, &x)| acc + a * x);
        }
    }

    pub fn mul_vec(&self, v: &[F]) -> Vec<F> {
        let mut out = vec![F::zero(); self.rows];
        self.mul_vec_into(v, &mut out);
        out
    }

    pub fn mul(&self, other: &Matrix<F>) -> Matrix<F> {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        Self::from_fn(self.rows, other.cols, |i, j| {
            (0..self.cols).fold(F::zero(), |acc, k| acc + self[(i, k)] * other[(k, j)])
        })
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> F {
        self.data.iter().fold(F::zero(), |m, &x| m.max(x.abs()))
    }

    /// Maximum absolute column sum.
    pub fn norm_1(&self) -> F {
        (0..self.cols)
            .map(|j| (0..self.rows).fold(F::zero(), |acc, i| acc + self[(i, j)].abs()))
            .fold(F::zero(), F::max)
    }

    /// Maximum absolute row sum.
    pub fn norm_inf(&self) -> F {
        (0..self.rows)
            .map(|i| self.row(i).iter().fold(F::zero(), |acc, &x| acc + x.abs()))
            .fold(F::zero(), F::max)
    }

    pub fn all_finite(&self) -> bool {
        self.data.iter().all(|x| x.is_finite())
    }
}

impl<F> Index<(usize, usize)> for Matrix<F> {
    type Output = F;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &F {
        &self.data[i * self.cols + j]
    }
}

impl<F> IndexMut<(usize, usize)> for Matrix<F> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut F {
        &mut self.data[i * self.cols + j]
    }
}

impl<F: fmt::Debug> fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut list = f.debug_list();
        for row in self.data.chunks(self.cols.max(1)) {
            list.entry(&row);
        }
        list.finish()
    }
}

/// LU factorization with partial pivoting, `P·A = L·U`.
struct Lu<F> {
    lu: Matrix<F>,
    perm: Vec<usize>,
    swaps: usize,
}

fn lu_factor<F: Real>(a: &Matrix<F>, delta_min: F) -> Result<Lu<F>> {
    if !a.is_square() {
        return Err(Error::Precondition("matrix must be square".into()));
    }
    if !a.all_finite() {
        return Err(Error::SingularMatrix);
    }
    let n = a.rows();
    let scale = a.max_abs();
    if n == 0 || scale == F::zero() {
        return Err(Error::SingularMatrix);
    }
    let threshold = delta_min * scale;
    let mut lu = a.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut swaps = 0;
    for k in 0..n {
        let (p, pivot) = (k..n)
            .map(|i| (i, lu[(i, k)].abs()))
            .fold((k, F::zero()), |best, cur| if cur.1 > best.1 { cur } else { best });
        if !(pivot >= threshold) {
            return Err(Error::SingularMatrix);
        }
        if p != k {
            for j in 0..n {
                let tmp = lu[(k, j)];
                lu[(k, j)] = lu[(p, j)];
                lu[(p, j)] = tmp;
            }
            perm.swap(k, p);
            swaps += 1;
        }
        let diag = lu[(k, k)];
        for i in (k + 1)..n {
            let factor = lu[(i, k)] / diag;
            lu[(i, k)] = factor;
            if factor != F::zero() {
                for j in (k + 1)..n {
                    let t = lu[(k, j)];
                    lu[(i, j)] = lu[(i, j)] - factor * t;
                }
            }
        }
    }
    Ok(Lu { lu, perm, swaps })
}

impl<F: Real> Lu<F> {
    fn solve(&self, rhs: &[F]) -> Vec<F> {
        let n = self.lu.rows();
        let mut y: Vec<F> = self.perm.iter().map(|&p| rhs[p]).collect();
        for i in 0..n {
            let mut acc = y[i];
            for j in 0..i {
                acc = acc - self.lu[(i, j)] * y[j];
            }
            y[i] = acc;
        }
        for i in (0..n).rev() {
            let mut acc = y[i];
            for j in (i + 1)..n {
                acc = acc - self.lu[(i, j)] * y[j];
            }
            y[i] = acc / self.lu[(i, i)];
        }
        y
    }

    fn determinant(&self) -> F {
        let n = self.lu.rows();
        let prod = (0..n).fold(F::one(), |acc, i| acc * self.lu[(i, i)]);
        if self.swaps % 2 == 1 {
            -prod
        } else {
            prod
        }
    }
}

/// Inverse by elimination with partial pivoting.
///
/// A pivot smaller than `delta_min · max|a_ij|` is reported as
/// [`Error::SingularMatrix`].
pub fn invert<F: Real>(a: &Matrix<F>, delta_min: F) -> Result<Matrix<F>> {
    let lu = lu_factor(a, delta_min)?;
    let n = a.rows();
    let mut inv = Matrix::zeros(n, n);
    let mut e = vec![F::zero(); n];
    for j in 0..n {
        e.iter_mut().for_each(|x| *x = F::zero());
        e[j] = F::one();
        let col = lu.solve(&e);
        for i in 0..n {
            inv[(i, j)] = col[i];
        }
    }
    Ok(inv)
}

/// Solves `A·x = rhs` by elimination with partial pivoting.
pub fn solve<F: Real>(a: &Matrix<F>, rhs: &[F], delta_min: F) -> Result<Vec<F>> {
    if rhs.len() != a.rows() {
        return Err(Error::Precondition("right-hand side length mismatch".into()));
    }
    Ok(lu_factor(a, delta_min)?.solve(rhs))
}

/// Determinant via elimination. Exactly singular matrices yield zero.
pub fn determinant<F: Real>(a: &Matrix<F>) -> Result<F> {
    if !a.is_square() {
        return Err(Error::Precondition("matrix must be square".into()));
    }
    match lu_factor(a, F::zero()) {
        Ok(lu) => Ok(lu.determinant()),
        Err(Error::SingularMatrix) => Ok(F::zero()),
        Err(e) => Err(e),
    }
}

/// `‖A‖₁ · ‖A⁻¹‖₁`.
pub fn condition_1<F: Real>(a: &Matrix<F>, inverse: &Matrix<F>) -> F {
    a.norm_1() * inverse.norm_1()
}

/// Determinant by Laplace expansion along the first row. Cost grows as n!.
pub fn cofactor_determinant<F: Real>(a: &Matrix<F>) -> F {
    assert!(a.is_square());
    let n = a.rows();
    let cols: Vec<usize> = (0..n).collect();
    laplace(a, 0, &cols)
}

fn laplace<F: Real>(a: &Matrix<F>, row: usize, cols: &[usize]) -> F {
    match cols.len() {
        0 => F::one(),
        1 => a[(row, cols[0])],
        2 => a[(row, cols[0])] * a[(row + 1, cols[1])] - a[(row, cols[1])] * a[(row + 1, cols[0])],
        _ => {
            let mut sum = F::zero();
            let mut minor_cols = Vec::with_capacity(cols.len() - 1);
            for (k, &c) in cols.iter().enumerate() {
                let entry = a[(row, c)];
                if entry == F::zero() {
                    continue;
                }
                minor_cols.clear();
                minor_cols.extend(cols.iter().copied().filter(|&x| x != c));
                let minor = laplace(a, row + 1, &minor_cols);
                if k % 2 == 0 {
                    sum = sum + entry * minor;
                } else {
                    sum = sum - entry * minor;
                }
            }
            sum
        }
    }
}

fn minor_matrix<F: Real>(a: &Matrix<F>, skip_row: usize, skip_col: usize) -> Matrix<F> {
    let n = a.rows();
    Matrix::from_fn(n - 1, n - 1, |i, j| {
        let r = if i < skip_row { i } else { i + 1 };
        let c = if j < skip_col { j } else { j + 1 };
        a[(r, c)]
    })
}

/// Adjugate: transpose of the cofactor matrix.
pub fn adjugate<F: Real>(a: &Matrix<F>) -> Matrix<F> {
    assert!(a.is_square());
    let n = a.rows();
    if n == 1 {
        return Matrix::identity(1);
    }
    Matrix::from_fn(n, n, |i, j| {
        // adj(A)_ij = (-1)^(i+j) · M_ji
        let m = cofactor_determinant(&minor_matrix(a, j, i));
        if (i + j) % 2 == 0 {
            m
        } else {
            -m
        }
    })
}

/// Inverse via `adj(A) / det(A)`; intended for small `n`.
///
/// Rejects matrices whose determinant is below `delta_min · max|a_ij|ⁿ`.
pub fn invert_adjugate<F: Real>(a: &Matrix<F>, delta_min: F) -> Result<Matrix<F>> {
    if !a.is_square() || a.rows() == 0 {
        return Err(Error::Precondition("matrix must be square and nonempty".into()));
    }
    let n = a.rows();
    let det = cofactor_determinant(a);
    let scale = a.max_abs().powi(n as i32);
    if !(det.abs() >= delta_min * scale) || det == F::zero() {
        return Err(Error::SingularMatrix);
    }
    let adj = adjugate(a);
    Ok(Matrix::from_fn(n, n, |i, j| adj[(i, j)] / det))
}

/// Least-squares solution of an overdetermined system via Householder QR.
///
/// Every column of `rhs` is solved against the same design matrix. Fails
/// with [`Error::InsufficientData`] when the design matrix is rank deficient
/// relative to `rank_tol`.
pub fn least_squares<F: Real>(design: &Matrix<F>, rhs: &[Vec<F>], rank_tol: F) -> Result<Vec<Vec<F>>> {
    let (m, n) = (design.rows(), design.cols());
    if m < n {
        return Err(Error::InsufficientData(format!(
            "{m} equations for {n} unknowns"
        )));
    }
    let mut r = design.clone();
    let mut cols: Vec<Vec<F>> = rhs.to_vec();
    if cols.iter().any(|c| c.len() != m) {
        return Err(Error::Precondition("right-hand side length mismatch".into()));
    }
    let scale = design.max_abs();
    for k in 0..n {
        let norm = (k..m).fold(F::zero(), |acc, i| acc + r[(i, k)] * r[(i, k)]).sqrt();
        if !(norm > rank_tol * scale) {
            return Err(Error::InsufficientData("known data is rank deficient".into()));
        }
        let alpha = if r[(k, k)] > F::zero() { -norm } else { norm };
        let mut v: Vec<F> = (k..m).map(|i| r[(i, k)]).collect();
        v[0] = v[0] - alpha;
        let vnorm2 = v.iter().fold(F::zero(), |acc, &x| acc + x * x);
        if vnorm2 == F::zero() {
            continue;
        }
        let two = F::lit(2.0);
        for j in k..n {
            let dot = v.iter().enumerate().fold(F::zero(), |acc, (t, &vi)| acc + vi * r[(k + t, j)]);
            let f = two * dot / vnorm2;
            for (t, &vi) in v.iter().enumerate() {
                r[(k + t, j)] = r[(k + t, j)] - f * vi;
            }
        }
        for col in cols.iter_mut() {
            let dot = v.iter().enumerate().fold(F::zero(), |acc, (t, &vi)| acc + vi * col[k + t]);
            let f = two * dot / vnorm2;
            for (t, &vi) in v.iter().enumerate() {
                col[k + t] = col[k + t] - f * vi;
            }
        }
    }
    let diag_max = (0..n).fold(F::zero(), |acc, i| acc.max(r[(i, i)].abs()));
    if (0..n).any(|i| !(r[(i, i)].abs() > rank_tol * diag_max)) {
        return Err(Error::InsufficientData("known data is rank deficient".into()));
    }
    Ok(cols
        .into_iter()
        .map(|col| {
            let mut x = vec![F::zero(); n];
            for i in (0..n).rev() {
                let mut acc = col[i];
                for j in (i + 1)..n {
                    acc = acc - r[(i, j)] * x[j];
                }
                x[i] = acc / r[(i, i)];
            }
            x
        })
        .collect())
}
