//! Matrix storage shared by the cochain and spectral layers: a compressed
//! sparse row format for incidence-type operators, dense `nalgebra`
//! matrices for everything that gets eigensolved, a thin LAPACK wrapper,
//! and weighted Gram–Schmidt.

use std::os::raw::{c_char, c_int};

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Compressed sparse row matrix with sorted column indices per row.
#[derive(Clone, Debug, PartialEq)]
pub struct CsrMatrix {
    rows: usize,
    cols: usize,
    indptr: Vec<usize>,
    indices: Vec<usize>,
    values: Vec<f64>,
}

impl CsrMatrix {
    /// Builds from `(row, col, value)` triplets; duplicates are summed and
    /// explicit zeros dropped.
    pub fn from_triplets(rows: usize, cols: usize, mut triplets: Vec<(usize, usize, f64)>) -> Self {
        triplets.sort_unstable_by_key(|&(r, c, _)| (r, c));
        let mut indptr = vec![0usize; rows + 1];
        let mut indices = Vec::with_capacity(triplets.len());
        let mut values: Vec<f64> = Vec::with_capacity(triplets.len());
        let mut last: Option<(usize, usize)> = None;
        for (r, c, v) in triplets {
            assert!(r < rows && c < cols, "triplet ({r},{c}) outside {rows}x{cols}");
            if last == Some((r, c)) {
                *values.last_mut().unwrap() += v;
                continue;
            }
            indices.push(c);
            values.push(v);
            indptr[r + 1] += 1;
            last = Some((r, c));
        }
        for r in 0..rows {
            indptr[r + 1] += indptr[r];
        }
        let mut m = CsrMatrix { rows, cols, indptr, indices, values };
        m.drop_zeros();
        m
    }

    fn drop_zeros(&mut self) {
        if self.values.iter().all(|&v| v != 0.0) {
            return;
        }
        let mut indptr = vec![0usize; self.rows + 1];
        let mut indices = Vec::with_capacity(self.indices.len());
        let mut values = Vec::with_capacity(self.values.len());
        for r in 0..self.rows {
            for (c, v) in self.row(r) {
                if v != 0.0 {
                    indices.push(c);
                    values.push(v);
                }
            }
            indptr[r + 1] = indices.len();
        }
        self.indptr = indptr;
        self.indices = indices;
        self.values = values;
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row(&self, r: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let span = self.indptr[r]..self.indptr[r + 1];
        self.indices[span.clone()].iter().copied().zip(self.values[span].iter().copied())
    }

    pub fn row_nnz(&self, r: usize) -> usize {
        self.indptr[r + 1] - self.indptr[r]
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        let span = self.indptr[r]..self.indptr[r + 1];
        match self.indices[span.clone()].binary_search(&c) {
            Ok(pos) => self.values[span.start + pos],
            Err(_) => 0.0,
        }
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows).map(|r| self.row(r).map(|(c, v)| v * x[c]).sum()).collect()
    }

    pub fn transpose_mul_vec(&self, y: &[f64]) -> Vec<f64> {
        assert_eq!(y.len(), self.rows);
        let mut out = vec![0.0; self.cols];
        for (r, &yr) in y.iter().enumerate() {
            if yr == 0.0 {
                continue;
            }
            for (c, v) in self.row(r) {
                out[c] += v * yr;
            }
        }
        out
    }

    pub fn transpose(&self) -> CsrMatrix {
        let triplets = (0..self.rows).flat_map(|r| self.row(r).map(move |(c, v)| (c, r, v))).collect();
        CsrMatrix::from_triplets(self.cols, self.rows, triplets)
    }

    /// `diag(left) * self * diag(right)`.
    pub fn scale(&self, left: Option<&[f64]>, right: Option<&[f64]>) -> CsrMatrix {
        let mut out = self.clone();
        for r in 0..self.rows {
            for pos in self.indptr[r]..self.indptr[r + 1] {
                let c = self.indices[pos];
                let mut v = self.values[pos];
                if let Some(l) = left {
                    v *= l[r];
                }
                if let Some(rt) = right {
                    v *= rt[c];
                }
                out.values[pos] = v;
            }
        }
        out.drop_zeros();
        out
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.rows, self.cols);
        for r in 0..self.rows {
            for (c, v) in self.row(r) {
                m[(r, c)] = v;
            }
        }
        m
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MatrixKind {
    Coboundary,
    Adjoint,
    Adjacency,
    Degree,
    UpLaplacian,
    DownLaplacian,
    NormalizedUpLaplacian,
    Deviation,
    Localized,
}

impl MatrixKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            MatrixKind::Coboundary => "coboundary",
            MatrixKind::Adjoint => "adjoint",
            MatrixKind::Adjacency => "adjacency",
            MatrixKind::Degree => "degree",
            MatrixKind::UpLaplacian => "up_laplacian",
            MatrixKind::DownLaplacian => "down_laplacian",
            MatrixKind::NormalizedUpLaplacian => "normalized_up_laplacian",
            MatrixKind::Deviation => "deviation",
            MatrixKind::Localized => "localized",
        }
    }
}

#[derive(Clone, Debug)]
pub enum Entries {
    Dense(DMatrix<f64>),
    Sparse(CsrMatrix),
}

/// A matrix tagged with what it represents and which complex it came from.
#[derive(Clone, Debug)]
pub struct OperatorMatrix {
    pub kind: MatrixKind,
    /// Cochain dimension of the domain.
    pub dim: i32,
    /// Fingerprint of the host complex.
    pub complex_id: u64,
    pub entries: Entries,
}

impl OperatorMatrix {
    pub fn dense(kind: MatrixKind, dim: i32, complex_id: u64, m: DMatrix<f64>) -> Self {
        OperatorMatrix { kind, dim, complex_id, entries: Entries::Dense(m) }
    }

    pub fn sparse(kind: MatrixKind, dim: i32, complex_id: u64, m: CsrMatrix) -> Self {
        OperatorMatrix { kind, dim, complex_id, entries: Entries::Sparse(m) }
    }

    pub fn rows(&self) -> usize {
        match &self.entries {
            Entries::Dense(m) => m.nrows(),
            Entries::Sparse(m) => m.rows(),
        }
    }

    pub fn cols(&self) -> usize {
        match &self.entries {
            Entries::Dense(m) => m.ncols(),
            Entries::Sparse(m) => m.cols(),
        }
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        match &self.entries {
            Entries::Dense(m) => m[(r, c)],
            Entries::Sparse(m) => m.get(r, c),
        }
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        match &self.entries {
            Entries::Dense(m) => {
                assert_eq!(x.len(), m.ncols());
                (m * nalgebra::DVector::from_column_slice(x)).as_slice().to_vec()
            }
            Entries::Sparse(m) => m.mul_vec(x),
        }
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        match &self.entries {
            Entries::Dense(m) => m.clone(),
            Entries::Sparse(m) => m.to_dense(),
        }
    }

    pub fn as_sparse(&self) -> Option<&CsrMatrix> {
        match &self.entries {
            Entries::Sparse(m) => Some(m),
            Entries::Dense(_) => None,
        }
    }
}

/// Largest `|m_ij - m_ji|` relative to the largest `|m_ij|`.
pub fn relative_asymmetry(m: &DMatrix<f64>) -> f64 {
    let n = m.nrows();
    let scale = m.amax();
    if scale == 0.0 {
        return 0.0;
    }
    let mut worst = 0.0f64;
    for j in 0..n {
        for i in (j + 1)..n {
            worst = worst.max((m[(i, j)] - m[(j, i)]).abs());
        }
    }
    worst / scale
}

fn syev(m: &DMatrix<f64>, vectors: bool) -> Result<(Vec<f64>, Option<DMatrix<f64>>)> {
    if m.nrows() != m.ncols() {
        return Err(Error::NotSquare(m.nrows(), m.ncols()));
    }
    let n = m.nrows();
    if n == 0 {
        return Ok((Vec::new(), vectors.then(|| DMatrix::zeros(0, 0))));
    }
    let mut a = m.clone();
    let mut w = vec![0.0f64; n];
    let jobz = if vectors { b'V' } else { b'N' } as c_char;
    let uplo = b'L' as c_char;
    let order = c_int::try_from(n).map_err(|_| Error::InvalidParameter("matrix too large".into()))?;
    let mut info: c_int = 0;
    let mut query = [0.0f64];
    let mut lwork: c_int = -1;
    // SAFETY: all pointers reference live buffers of the sizes LAPACK expects
    // (a: n*n column-major with lda = n, w: n, work: lwork).
    unsafe {
        lapack_sys::dsyev_(
            &jobz,
            &uplo,
            &order,
            a.as_mut_slice().as_mut_ptr(),
            &order,
            w.as_mut_ptr(),
            query.as_mut_ptr(),
            &lwork,
            &mut info,
        );
    }
    if info != 0 {
        return Err(Error::Lapack { routine: "dsyev", info });
    }
    lwork = query[0] as c_int;
    let mut work = vec![0.0f64; lwork.max(1) as usize];
    unsafe {
        lapack_sys::dsyev_(
            &jobz,
            &uplo,
            &order,
            a.as_mut_slice().as_mut_ptr(),
            &order,
            w.as_mut_ptr(),
            work.as_mut_ptr(),
            &lwork,
            &mut info,
        );
    }
    if info != 0 {
        return Err(Error::Lapack { routine: "dsyev", info });
    }
    Ok((w, vectors.then_some(a)))
}

/// Ascending eigenvalues of a symmetric matrix (lower triangle is read).
pub fn eigvalsh(m: &DMatrix<f64>) -> Result<Vec<f64>> {
    syev(m, false).map(|(w, _)| w)
}

/// Ascending eigenvalues and the matching orthonormal eigenvectors as
/// columns.
pub fn eigh(m: &DMatrix<f64>) -> Result<(Vec<f64>, DMatrix<f64>)> {
    syev(m, true).map(|(w, v)| (w, v.expect("vectors requested")))
}

/// Largest absolute eigenvalue of a symmetric matrix.
pub fn spectral_norm_sym(m: &DMatrix<f64>) -> Result<f64> {
    let w = eigvalsh(m)?;
    Ok(w.iter().fold(0.0f64, |acc, x| acc.max(x.abs())))
}

pub fn weighted_dot(x: &[f64], y: &[f64], w: Option<&[f64]>) -> f64 {
    match w {
        Some(w) => x.iter().zip(y).zip(w).map(|((a, b), c)| a * b * c).sum(),
        None => x.iter().zip(y).map(|(a, b)| a * b).sum(),
    }
}

/// Orthonormal basis (in the `w`-weighted inner product) of the span of
/// `vectors`, by modified Gram–Schmidt with one reorthogonalization pass.
///
/// A vector is treated as dependent when its residual norm falls below
/// `rel_tol` times the largest input norm.
pub fn orthonormalize(vectors: &[Vec<f64>], w: Option<&[f64]>, rel_tol: f64) -> Vec<Vec<f64>> {
    let scale = vectors.iter().map(|v| weighted_dot(v, v, w).sqrt()).fold(0.0f64, f64::max);
    let mut basis: Vec<Vec<f64>> = Vec::new();
    if scale == 0.0 {
        return basis;
    }
    for v in vectors {
        let mut r = v.clone();
        for _ in 0..2 {
            for q in &basis {
                let c = weighted_dot(&r, q, w);
                r.iter_mut().zip(q).for_each(|(a, b)| *a -= c * b);
            }
        }
        let norm = weighted_dot(&r, &r, w).sqrt();
        if norm > rel_tol * scale {
            r.iter_mut().for_each(|a| *a /= norm);
            basis.push(r);
        }
    }
    basis
}

/// Numerical rank of the row set, with the default rank tolerance.
pub fn real_rank(rows: &[Vec<f64>]) -> usize {
    orthonormalize(rows, None, RANK_TOL).len()
}

/// Relative tolerance for rank decisions.
pub const RANK_TOL: f64 = 1e-10;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csr_round_trip() {
        let m = CsrMatrix::from_triplets(2, 3, vec![(1, 2, 1.0), (0, 0, -1.0), (0, 1, 1.0), (1, 2, 1.0), (1, 1, 0.0)]);
        assert_eq!(m.nnz(), 3);
        assert_eq!(m.get(1, 2), 2.0);
        assert_eq!(m.mul_vec(&[1.0, 2.0, 3.0]), vec![1.0, 6.0]);
        assert_eq!(m.transpose_mul_vec(&[1.0, 1.0]), vec![-1.0, 1.0, 2.0]);
        assert_eq!(m.transpose().to_dense(), m.to_dense().transpose());
    }

    #[test]
    fn eigenvalues_of_simple_matrices() {
        let id = DMatrix::<f64>::identity(5, 5);
        assert_eq!(eigvalsh(&id).unwrap(), vec![1.0; 5]);
        let d = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![3.0, 1.0, 2.0]));
        let w = eigvalsh(&d).unwrap();
        for (a, b) in w.iter().zip([1.0, 2.0, 3.0]) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn eigenvectors_reconstruct() {
        let m = DMatrix::from_row_slice(3, 3, &[2.0, -1.0, 0.0, -1.0, 2.0, -1.0, 0.0, -1.0, 2.0]);
        let (w, v) = eigh(&m).unwrap();
        let recon = &v * DMatrix::from_diagonal(&nalgebra::DVector::from_vec(w)) * v.transpose();
        assert!((recon - m).amax() < 1e-12);
    }

    #[test]
    fn gram_schmidt_detects_dependence() {
        let rows = vec![vec![1.0, 1.0, 0.0], vec![0.0, 1.0, 1.0], vec![1.0, 2.0, 1.0]];
        assert_eq!(real_rank(&rows), 2);
        let w = [1.0, 2.0, 3.0];
        let q = orthonormalize(&rows, Some(&w), RANK_TOL);
        assert_eq!(q.len(), 2);
        assert!((weighted_dot(&q[0], &q[1], Some(&w))).abs() < 1e-14);
        assert!((weighted_dot(&q[1], &q[1], Some(&w)) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn asymmetry() {
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.5, 1.0]);
        assert!((relative_asymmetry(&m) - 0.2).abs() < 1e-15);
    }
}
