//! Adjacency and Laplacian operators in the top cochain dimension, their
//! spectra, and Hodge-decomposition bookkeeping.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::cochain::{coboundary, weighted_inner_product, RealCochain, WeightFunction};
use crate::complex::{binomial, SimplicialComplex};
use crate::error::{Error, Result};
use crate::matrix::{self, MatrixKind, OperatorMatrix};

/// Eigenvalues within this distance of zero count as trivial.
pub const TRIVIAL_TOL: f64 = 1e-6;

/// Asymmetry accepted by [`symmetric_spectrum`], relative to the largest
/// entry.
pub const SYMMETRY_TOL: f64 = 1e-12;

fn require_top_dim(x: &SimplicialComplex) -> Result<i32> {
    if x.dim() < 1 {
        return Err(Error::DimensionOutOfRange { dim: x.dim(), lo: 1, hi: i32::MAX });
    }
    Ok(x.dim() - 1)
}

/// `A_{k-1}` with exact integer entries.
pub fn adjacency_exact(x: &SimplicialComplex) -> Result<DMatrix<i64>> {
    let i = require_top_dim(x)?;
    let m = x.face_count(i);
    let mut a = DMatrix::<i64>::zeros(m, m);
    for t in 0..x.face_count(i + 1) {
        let bd = x.boundary(i + 1, t);
        for (j, &(g, sg)) in bd.iter().enumerate() {
            for &(h, sh) in &bd[j + 1..] {
                let v = -(sg as i64) * (sh as i64);
                a[(g, h)] += v;
                a[(h, g)] += v;
            }
        }
    }
    Ok(a)
}

/// Unweighted `L^up_i = δ_i^T δ_i` with exact integer entries.
pub fn up_laplacian_exact(x: &SimplicialComplex, i: i32) -> Result<DMatrix<i64>> {
    if i < -1 || i >= x.dim() {
        return Err(Error::DimensionOutOfRange { dim: i, lo: -1, hi: x.dim() - 1 });
    }
    let m = x.face_count(i);
    let mut l = DMatrix::<i64>::zeros(m, m);
    for t in 0..x.face_count(i + 1) {
        let bd = x.boundary(i + 1, t);
        for &(g, sg) in &bd {
            for &(h, sh) in &bd {
                l[(g, h)] += (sg as i64) * (sh as i64);
            }
        }
    }
    Ok(l)
}

/// Unweighted `L^down_i = δ_{i-1} δ_{i-1}^T` with exact integer entries.
pub fn down_laplacian_exact(x: &SimplicialComplex, i: i32) -> Result<DMatrix<i64>> {
    if i < 0 || i > x.dim() {
        return Err(Error::DimensionOutOfRange { dim: i, lo: 0, hi: x.dim() });
    }
    let m = x.face_count(i);
    let mut l = DMatrix::<i64>::zeros(m, m);
    let mut cofaces: Vec<Vec<(usize, i64)>> = vec![Vec::new(); x.face_count(i - 1)];
    for f in 0..m {
        for (h, s) in x.boundary(i, f) {
            cofaces[h].push((f, s as i64));
        }
    }
    for list in &cofaces {
        for &(f, sf) in list {
            for &(g, sg) in list {
                l[(f, g)] += sf * sg;
            }
        }
    }
    Ok(l)
}

pub fn to_f64(m: &DMatrix<i64>) -> DMatrix<f64> {
    m.map(|v| v as f64)
}

/// `A_{k-1}`: `(F, G)` is `-[F∪G:F][F∪G:G]` when `F∪G` is a `k`-face.
pub fn adjacency_matrix(x: &SimplicialComplex) -> Result<OperatorMatrix> {
    let i = require_top_dim(x)?;
    Ok(OperatorMatrix::dense(MatrixKind::Adjacency, i, x.fingerprint(), to_f64(&adjacency_exact(x)?)))
}

fn inverse_weights(x: &SimplicialComplex, dim: i32, w: &WeightFunction) -> Result<Vec<f64>> {
    w.weights(x, dim)
        .into_iter()
        .enumerate()
        .map(|(g, wg)| {
            if wg > 0.0 {
                Ok(1.0 / wg)
            } else if matches!(w, WeightFunction::Degree) {
                Ok(0.0)
            } else {
                Err(Error::ZeroWeight { face: x.face(dim, g).clone(), dim, weight: wg })
            }
        })
        .collect()
}

/// `L^up_i = W_i^{-1} δ_i^T W_{i+1} δ_i`.
pub fn up_laplacian(x: &SimplicialComplex, i: i32, w: &WeightFunction) -> Result<OperatorMatrix> {
    let base = up_laplacian_exact(x, i)?;
    let mut l = if matches!(w, WeightFunction::Unit) {
        to_f64(&base)
    } else {
        let m = x.face_count(i);
        let up_w = w.weights(x, i + 1);
        let mut l = DMatrix::<f64>::zeros(m, m);
        for (t, &wt) in up_w.iter().enumerate() {
            let bd = x.boundary(i + 1, t);
            for &(g, sg) in &bd {
                for &(h, sh) in &bd {
                    l[(g, h)] += (sg * sh) as f64 * wt;
                }
            }
        }
        l
    };
    if !matches!(w, WeightFunction::Unit) {
        let inv = inverse_weights(x, i, w)?;
        for (r, s) in inv.iter().enumerate() {
            l.row_mut(r).scale_mut(*s);
        }
    }
    Ok(OperatorMatrix::dense(MatrixKind::UpLaplacian, i, x.fingerprint(), l))
}

/// `L^down_i = δ_{i-1} W_{i-1}^{-1} δ_{i-1}^T W_i`.
pub fn down_laplacian(x: &SimplicialComplex, i: i32, w: &WeightFunction) -> Result<OperatorMatrix> {
    if matches!(w, WeightFunction::Unit) {
        return Ok(OperatorMatrix::dense(
            MatrixKind::DownLaplacian,
            i,
            x.fingerprint(),
            to_f64(&down_laplacian_exact(x, i)?),
        ));
    }
    if i < 0 || i > x.dim() {
        return Err(Error::DimensionOutOfRange { dim: i, lo: 0, hi: x.dim() });
    }
    let m = x.face_count(i);
    let inv_low = inverse_weights(x, i - 1, w)?;
    let wi = w.weights(x, i);
    let mut cofaces: Vec<Vec<(usize, f64)>> = vec![Vec::new(); x.face_count(i - 1)];
    for f in 0..m {
        for (h, s) in x.boundary(i, f) {
            cofaces[h].push((f, s as f64));
        }
    }
    let mut l = DMatrix::<f64>::zeros(m, m);
    for (h, list) in cofaces.iter().enumerate() {
        for &(f, sf) in list {
            for &(g, sg) in list {
                l[(f, g)] += sf * sg * inv_low[h] * wi[g];
            }
        }
    }
    Ok(OperatorMatrix::dense(MatrixKind::DownLaplacian, i, x.fingerprint(), l))
}

/// Symmetric conjugate `D^{-1/2} L^up_{k-1} D^{-1/2}` of the normalized
/// up-Laplacian, with `D^{-1/2}` zero at faces of degree zero.
pub fn normalized_up_matrix(x: &SimplicialComplex, allow_zero_degree: bool) -> Result<OperatorMatrix> {
    let i = require_top_dim(x)?;
    let deg = x.degrees(i);
    let zeros = deg.iter().filter(|&&d| d == 0).count();
    if zeros > 0 && !allow_zero_degree {
        return Err(Error::NotPure(zeros));
    }
    let s: Vec<f64> = deg.iter().map(|&d| if d > 0 { 1.0 / (d as f64).sqrt() } else { 0.0 }).collect();
    let a = adjacency_exact(x)?;
    let m = deg.len();
    let mut out = DMatrix::<f64>::zeros(m, m);
    for c in 0..m {
        for r in 0..m {
            let v = a[(r, c)];
            if v != 0 {
                out[(r, c)] = -(v as f64) * s[r] * s[c];
            }
        }
        if deg[c] > 0 {
            out[(c, c)] = 1.0;
        }
    }
    Ok(OperatorMatrix::dense(MatrixKind::NormalizedUpLaplacian, i, x.fingerprint(), out))
}

/// Diagonal `D_i` of degrees.
pub fn degree_matrix(x: &SimplicialComplex, i: i32) -> OperatorMatrix {
    let d: Vec<f64> = x.degrees(i).into_iter().map(|v| v as f64).collect();
    OperatorMatrix::dense(
        MatrixKind::Degree,
        i,
        x.fingerprint(),
        DMatrix::from_diagonal(&nalgebra::DVector::from_vec(d)),
    )
}

/// Ascending eigenvalues of a symmetric operator.
pub fn symmetric_spectrum(m: &OperatorMatrix) -> Result<Vec<f64>> {
    if m.rows() != m.cols() {
        return Err(Error::NotSquare(m.rows(), m.cols()));
    }
    let dense = m.to_dense();
    let asym = matrix::relative_asymmetry(&dense);
    if asym > SYMMETRY_TOL {
        return Err(Error::NotSymmetric(asym));
    }
    matrix::eigvalsh(&dense)
}

/// `dim B^{k-1}` over the reals.
pub fn trivial_dimension(x: &SimplicialComplex) -> Result<usize> {
    let i = require_top_dim(x)?;
    if x.has_complete_skeleton(i) {
        return Ok(binomial(x.n().saturating_sub(1), i as usize));
    }
    let delta = crate::cochain::coboundary_csr(x, i - 1)?;
    let dense = delta.to_dense().transpose();
    let rows: Vec<Vec<f64>> = dense.row_iter().map(|r| r.iter().copied().collect()).collect();
    Ok(matrix::real_rank(&rows))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub kind: MatrixKind,
    pub dim: i32,
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Value the trivial eigenvalues cluster at: `0` for Laplacians, the
    /// reference degree for adjacency matrices.
    pub trivial_value: f64,
    /// `dim B^{k-1}`; for adjacency matrices these are the largest
    /// eigenvalues, otherwise the smallest.
    pub trivial_count: usize,
    pub trivial_tolerance: f64,
    /// Eigenvalues observed within `trivial_tolerance` of `trivial_value`.
    pub observed_trivial_count: usize,
    /// `[min, max]` of the non-trivial eigenvalues.
    pub nontrivial_range: Option<[f64; 2]>,
    /// Set when the count-based split disagrees with a magnitude gap.
    pub degenerate_split: bool,
    /// Faces of dimension `k-1` with degree zero.
    pub zero_degree_faces: usize,
}

impl SpectrumReport {
    fn laplacian(
        kind: MatrixKind,
        dim: i32,
        eigenvalues: Vec<f64>,
        trivial_count: usize,
        zero_degree_faces: usize,
    ) -> Self {
        let c = trivial_count.min(eigenvalues.len());
        let observed = eigenvalues.iter().filter(|v| v.abs() < TRIVIAL_TOL).count();
        let nontrivial = &eigenvalues[c..];
        let nontrivial_range = (!nontrivial.is_empty()).then(|| [nontrivial[0], nontrivial[nontrivial.len() - 1]]);
        let degenerate_split = if c == 0 || c == eigenvalues.len() {
            false
        } else {
            let last = eigenvalues[c - 1].abs();
            let next = eigenvalues[c];
            !(last < TRIVIAL_TOL && next > TRIVIAL_TOL.max(10.0 * last))
        };
        SpectrumReport {
            kind,
            dim,
            eigenvalues,
            trivial_value: 0.0,
            trivial_count,
            trivial_tolerance: TRIVIAL_TOL,
            observed_trivial_count: observed,
            nontrivial_range,
            degenerate_split,
            zero_degree_faces,
        }
    }

    pub fn nontrivial(&self) -> &[f64] {
        let c = self.trivial_count.min(self.eigenvalues.len());
        if self.kind == MatrixKind::Adjacency {
            &self.eigenvalues[..self.eigenvalues.len() - c]
        } else {
            &self.eigenvalues[c..]
        }
    }

    pub fn trivial(&self) -> &[f64] {
        let c = self.trivial_count.min(self.eigenvalues.len());
        if self.kind == MatrixKind::Adjacency {
            &self.eigenvalues[self.eigenvalues.len() - c..]
        } else {
            &self.eigenvalues[..c]
        }
    }

    pub fn is_trivial_index(&self, idx: usize) -> bool {
        let c = self.trivial_count.min(self.eigenvalues.len());
        if self.kind == MatrixKind::Adjacency {
            idx >= self.eigenvalues.len() - c
        } else {
            idx < c
        }
    }

    /// One CSV row per eigenvalue: `trial,kind,index,value,is_trivial`.
    pub fn write_csv<W: std::io::Write>(&self, out: &mut csv::Writer<W>, trial: usize) -> Result<()> {
        for (idx, v) in self.eigenvalues.iter().enumerate() {
            out.write_record([
                trial.to_string(),
                self.kind.as_str().to_string(),
                idx.to_string(),
                format!("{v:e}"),
                self.is_trivial_index(idx).to_string(),
            ])?;
        }
        Ok(())
    }

    pub const CSV_HEADER: [&'static str; 5] = ["trial", "kind", "index", "value", "is_trivial"];
}

/// Spectrum of `Δ^up_{k-1}` through its symmetric conjugate.
///
/// Refuses non-pure complexes unless `allow_zero_degree` is set, in which
/// case faces of degree zero contribute zero eigenvalues and are counted
/// in the report.
pub fn normalized_up_spectrum(x: &SimplicialComplex, allow_zero_degree: bool) -> Result<SpectrumReport> {
    let m = normalized_up_matrix(x, allow_zero_degree)?;
    let zeros = x.degrees(x.dim() - 1).iter().filter(|&&d| d == 0).count();
    let eig = matrix::eigvalsh(&m.to_dense())?;
    Ok(SpectrumReport::laplacian(
        MatrixKind::NormalizedUpLaplacian,
        x.dim() - 1,
        eig,
        trivial_dimension(x)? + zeros,
        zeros,
    ))
}

/// Spectrum of the unweighted `L^up_{k-1}`.
pub fn up_laplacian_spectrum(x: &SimplicialComplex) -> Result<SpectrumReport> {
    let i = require_top_dim(x)?;
    let eig = matrix::eigvalsh(&to_f64(&up_laplacian_exact(x, i)?))?;
    let zeros = x.degrees(i).iter().filter(|&&d| d == 0).count();
    Ok(SpectrumReport::laplacian(MatrixKind::UpLaplacian, i, eig, trivial_dimension(x)? + zeros, zeros))
}

/// Mean degree of the `(k-1)`-faces.
pub fn mean_degree(x: &SimplicialComplex) -> f64 {
    let deg = x.degrees(x.dim() - 1);
    if deg.is_empty() {
        return 0.0;
    }
    deg.iter().sum::<usize>() as f64 / deg.len() as f64
}

/// Spectrum of `A_{k-1}`; the largest `dim B^{k-1}` eigenvalues are the
/// trivial cluster around `d`.
pub fn adjacency_spectrum(x: &SimplicialComplex, d: f64) -> Result<SpectrumReport> {
    let i = require_top_dim(x)?;
    let eig = matrix::eigvalsh(&adjacency_matrix(x)?.to_dense())?;
    let c = trivial_dimension(x)?.min(eig.len());
    let top = &eig[eig.len() - c..];
    let tol = top.iter().map(|v| (v - d).abs()).fold(0.0f64, f64::max);
    let rest = &eig[..eig.len() - c];
    let nontrivial_range = (!rest.is_empty()).then(|| [rest[0], rest[rest.len() - 1]]);
    let degenerate_split = !rest.is_empty() && c > 0 && rest[rest.len() - 1] >= top[0];
    Ok(SpectrumReport {
        kind: MatrixKind::Adjacency,
        dim: i,
        observed_trivial_count: eig.iter().filter(|v| (*v - d).abs() <= tol).count(),
        eigenvalues: eig,
        trivial_value: d,
        trivial_count: c,
        trivial_tolerance: tol,
        nontrivial_range,
        degenerate_split,
        zero_degree_faces: x.degrees(i).iter().filter(|&&v| v == 0).count(),
    })
}

/// `‖δf‖² / ‖f‖²` in the given weights.
pub fn rayleigh_quotient(x: &SimplicialComplex, f: &RealCochain, w: &WeightFunction) -> Result<f64> {
    let df = coboundary(x, f)?;
    Ok(weighted_inner_product(x, &df, &df, w)? / weighted_inner_product(x, f, f, w)?)
}

/// Measurement of the lower bound `|1 - λ| ≥ sqrt(k/d_max · (n-d_max)/(n-k))`
/// for some non-trivial eigenvalue `λ` of `Δ^up_{k-1}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpreadMeasurement {
    pub max_deviation: f64,
    pub bound: f64,
    pub holds: bool,
}

pub fn spread_measurement(x: &SimplicialComplex, report: &SpectrumReport) -> SpreadMeasurement {
    let n = x.n() as f64;
    let k = x.dim() as f64;
    let d_max = x.degrees(x.dim() - 1).into_iter().max().unwrap_or(0) as f64;
    let bound = if d_max > 0.0 { (k / d_max * (n - d_max) / (n - k)).max(0.0).sqrt() } else { f64::NAN };
    let max_deviation = report.nontrivial().iter().map(|v| (1.0 - v).abs()).fold(0.0f64, f64::max);
    SpreadMeasurement { max_deviation, bound, holds: max_deviation + 1e-9 >= bound }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HodgeReport {
    pub dim: i32,
    pub cochain_dim: usize,
    pub rank_coboundary_below: usize,
    pub rank_adjoint: usize,
    pub harmonic_dim: usize,
    /// Largest normalized pairwise inner product between the three
    /// summands on the sampled basis vectors.
    pub orthogonality_error: f64,
    pub consistent: bool,
}

fn dense_rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

/// Checks `C^i = H_i ⊕ B^i ⊕ im δ_i^*` dimensionally and for pairwise
/// orthogonality in the `w`-inner product.
pub fn hodge_check(x: &SimplicialComplex, i: i32, w: &WeightFunction) -> Result<HodgeReport> {
    if i < 0 || i > x.dim() {
        return Err(Error::DimensionOutOfRange { dim: i, lo: 0, hi: x.dim() });
    }
    let m = x.face_count(i);
    let wi = w.weights(x, i);
    for dim in [i - 1, i, i + 1] {
        if dim > x.dim() {
            continue;
        }
        for (g, &v) in w.weights(x, dim).iter().enumerate() {
            if v <= 0.0 {
                return Err(Error::ZeroWeight { face: x.face(dim, g).clone(), dim, weight: v });
            }
        }
    }
    let mut lap = down_laplacian(x, i, w)?.to_dense();
    if i < x.dim() {
        lap += up_laplacian(x, i, w)?.to_dense();
    }
    // W^{1/2} L W^{-1/2} is symmetric
    let sq: Vec<f64> = wi.iter().map(|v| v.sqrt()).collect();
    let mut sym = lap.clone();
    for r in 0..m {
        for c in 0..m {
            sym[(r, c)] *= sq[r] / sq[c];
        }
    }
    let sym = (&sym + sym.transpose()) * 0.5;
    let (eig, vecs) = matrix::eigh(&sym)?;
    let scale = eig.iter().fold(1.0f64, |a, v| a.max(v.abs()));
    let harmonic: Vec<Vec<f64>> = eig
        .iter()
        .enumerate()
        .filter(|(_, v)| v.abs() < 1e-9 * scale)
        .map(|(j, _)| (0..m).map(|r| vecs[(r, j)] / sq[r]).collect())
        .collect();

    let below: Vec<Vec<f64>> = dense_rows(&crate::cochain::coboundary_csr(x, i - 1)?.to_dense().transpose());
    let above: Vec<Vec<f64>> = if i < x.dim() {
        dense_rows(&crate::cochain::weighted_adjoint_matrix(x, i, w)?.to_dense().transpose())
    } else {
        Vec::new()
    };
    let b = matrix::orthonormalize(&below, Some(&wi), matrix::RANK_TOL);
    let c = matrix::orthonormalize(&above, Some(&wi), matrix::RANK_TOL);
    let h = matrix::orthonormalize(&harmonic, Some(&wi), matrix::RANK_TOL);

    let mut err = 0.0f64;
    const SAMPLE: usize = 24;
    for (p, q) in [(&h, &b), (&h, &c), (&b, &c)] {
        for u in p.iter().take(SAMPLE) {
            for v in q.iter().take(SAMPLE) {
                err = err.max(matrix::weighted_dot(u, v, Some(&wi)).abs());
            }
        }
    }
    let consistent = h.len() == m - b.len() - c.len() && err < 1e-9;
    Ok(HodgeReport {
        dim: i,
        cochain_dim: m,
        rank_coboundary_below: b.len(),
        rank_adjoint: c.len(),
        harmonic_dim: h.len(),
        orthogonality_error: err,
        consistent,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn approx_multiset(got: &[f64], expected: &[(f64, usize)], tol: f64) {
        let mut exp: Vec<f64> = expected.iter().flat_map(|&(v, m)| std::iter::repeat_n(v, m)).collect();
        exp.sort_by(f64::total_cmp);
        assert_eq!(got.len(), exp.len());
        for (a, b) in got.iter().zip(&exp) {
            assert!((a - b).abs() <= tol * b.abs().max(1.0), "{a} vs {b}");
        }
    }

    #[test]
    fn graph_adjacency_is_classical() {
        let g = SimplicialComplex::graph(4, &[(0, 1), (1, 2), (2, 3), (0, 3), (0, 2)]).unwrap();
        let a = adjacency_exact(&g).unwrap();
        let mut expected = DMatrix::<i64>::zeros(4, 4);
        for (u, v) in [(0, 1), (1, 2), (2, 3), (0, 3), (0, 2)] {
            expected[(u, v)] = 1;
            expected[(v, u)] = 1;
        }
        assert_eq!(a, expected);
        let l = up_laplacian_exact(&g, 0).unwrap();
        let d = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![3i64, 2, 3, 2]));
        assert_eq!(l, d - expected);
    }

    #[test]
    fn tetrahedron_spectra() {
        let x = SimplicialComplex::complete(4, 2).unwrap();
        let a = symmetric_spectrum(&adjacency_matrix(&x).unwrap()).unwrap();
        approx_multiset(&a, &[(2.0, 3), (-2.0, 3)], 1e-12);
        let l = symmetric_spectrum(&up_laplacian(&x, 1, &WeightFunction::Unit).unwrap()).unwrap();
        approx_multiset(&l, &[(0.0, 3), (4.0, 3)], 1e-12);
        let r = normalized_up_spectrum(&x, false).unwrap();
        approx_multiset(&r.eigenvalues, &[(0.0, 3), (2.0, 3)], 1e-12);
        assert_eq!(r.trivial_count, 3);
        assert!(!r.degenerate_split);
    }

    #[test]
    fn k6_3_adjacency() {
        let x = SimplicialComplex::complete(6, 3).unwrap();
        let a = symmetric_spectrum(&adjacency_matrix(&x).unwrap()).unwrap();
        approx_multiset(&a, &[(3.0, 10), (-3.0, 10)], 1e-12);
        let r = normalized_up_spectrum(&SimplicialComplex::complete(5, 2).unwrap(), false).unwrap();
        approx_multiset(&r.eigenvalues, &[(0.0, 4), (5.0 / 3.0, 6)], 1e-12);
    }

    #[test]
    fn up_plus_down_is_scalar_on_complete() {
        for (n, k) in [(5, 2), (4, 2), (6, 3)] {
            let x = SimplicialComplex::complete(n, k).unwrap();
            let s = up_laplacian_exact(&x, k - 1).unwrap() + down_laplacian_exact(&x, k - 1).unwrap();
            assert_eq!(s, DMatrix::<i64>::identity(s.nrows(), s.ncols()) * n as i64);
        }
    }

    #[test]
    fn down_laplacian_zero_is_all_ones() {
        let x = SimplicialComplex::graph(4, &[(0, 1)]).unwrap();
        let l = down_laplacian_exact(&x, 0).unwrap();
        assert!(l.iter().all(|&v| v == 1));
    }

    #[test]
    fn up_down_nonzero_spectra_coincide() {
        let x = SimplicialComplex::complete(5, 2).unwrap();
        for i in 0..2 {
            let up = symmetric_spectrum(&up_laplacian(&x, i, &WeightFunction::Unit).unwrap()).unwrap();
            let down = symmetric_spectrum(&down_laplacian(&x, i + 1, &WeightFunction::Unit).unwrap()).unwrap();
            let nz = |v: &[f64]| v.iter().copied().filter(|x| x.abs() > 1e-9).collect::<Vec<_>>();
            let (a, b) = (nz(&up), nz(&down));
            assert_eq!(a.len(), b.len());
            for (p, q) in a.iter().zip(&b) {
                assert!((p - q).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn symmetric_spectrum_basics() {
        let id = OperatorMatrix::dense(MatrixKind::Degree, 0, 0, DMatrix::identity(5, 5));
        assert_eq!(symmetric_spectrum(&id).unwrap(), vec![1.0; 5]);
        let bad = OperatorMatrix::dense(MatrixKind::Degree, 0, 0, DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 0.0, 0.0]));
        assert!(matches!(symmetric_spectrum(&bad), Err(Error::NotSymmetric(_))));
    }

    #[test]
    fn normalized_refuses_non_pure() {
        let x = SimplicialComplex::build(4, 2, vec![vec![0, 1, 2], vec![0, 1, 3]], 1).unwrap();
        assert!(matches!(normalized_up_spectrum(&x, false), Err(Error::NotPure(1))));
        let r = normalized_up_spectrum(&x, true).unwrap();
        assert_eq!(r.zero_degree_faces, 1);
        assert_eq!(r.eigenvalues.len(), 6);
    }

    #[test]
    fn hodge_examples() {
        for w in [WeightFunction::Unit, WeightFunction::Degree] {
            let x = SimplicialComplex::complete(5, 2).unwrap();
            let r = hodge_check(&x, 1, &w).unwrap();
            assert!(r.consistent, "{r:?}");
            assert_eq!(r.harmonic_dim, 0);
        }
        let sphere = SimplicialComplex::complete(4, 2).unwrap();
        let r = hodge_check(&sphere, 2, &WeightFunction::Unit).unwrap();
        assert_eq!(r.harmonic_dim, 1);
        assert!(r.consistent);
        let c3 = SimplicialComplex::graph(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let r = hodge_check(&c3, 1, &WeightFunction::Unit).unwrap();
        assert_eq!(r.harmonic_dim, 1);
    }

    #[test]
    fn coboundaries_are_in_the_kernel() {
        let x = SimplicialComplex::from_maximal_faces(
            5,
            2,
            &[
                vec![0, 1, 2],
                vec![0, 1, 3],
                vec![0, 1, 4],
                vec![0, 2, 3],
                vec![0, 2, 4],
                vec![0, 3, 4],
                vec![1, 2, 3],
                vec![1, 2, 4],
                vec![1, 3, 4],
                vec![2, 3, 4],
            ],
        )
        .unwrap();
        let l = up_laplacian(&x, 1, &WeightFunction::Degree).unwrap();
        for f in 0..x.face_count(0) {
            let e = RealCochain::elementary(&x, 0, f);
            let b = coboundary(&x, &e).unwrap();
            let lb = l.apply(&b.values);
            assert!(lb.iter().all(|v| v.abs() < 1e-9));
        }
    }

    #[test]
    fn rayleigh_matches_smallest_nontrivial() {
        let removed = [vec![0, 1, 2], vec![1, 3, 4], vec![2, 4, 5], vec![0, 3, 5]];
        let tris: Vec<Vec<usize>> = SimplicialComplex::complete(6, 2)
            .unwrap()
            .faces(2)
            .iter()
            .map(|f| f.vertices().to_vec())
            .filter(|t| !removed.contains(t))
            .collect();
        let x = SimplicialComplex::build(6, 2, tris, 1).unwrap();
        assert!(x.is_pure());
        let s = normalized_up_matrix(&x, false).unwrap().to_dense();
        let (eig, vecs) = matrix::eigh(&s).unwrap();
        let c = trivial_dimension(&x).unwrap();
        let deg = x.degrees(1);
        let f = RealCochain { dim: 1, values: (0..deg.len()).map(|r| vecs[(r, c)] / (deg[r] as f64).sqrt()).collect() };
        let q = rayleigh_quotient(&x, &f, &WeightFunction::Degree).unwrap();
        assert!((q - eig[c]).abs() < 1e-8, "{q} vs {}", eig[c]);
        for v in 0..x.n() {
            let b = coboundary(&x, &RealCochain::elementary(&x, 0, v)).unwrap();
            let ip = weighted_inner_product(&x, &f, &b, &WeightFunction::Degree).unwrap();
            assert!(ip.abs() < 1e-9);
        }
    }

    fn regular_sample() -> impl Strategy<Value = SimplicialComplex> {
        prop_oneof![
            Just(SimplicialComplex::complete(5, 2).unwrap()),
            Just(SimplicialComplex::complete(6, 2).unwrap()),
            Just(SimplicialComplex::complete(6, 3).unwrap()),
            (5usize..12).prop_map(|n| {
                let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
                SimplicialComplex::graph(n, &edges).unwrap()
            }),
        ]
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]
        #[test]
        fn regular_complexes_have_equivalent_spectra(x in regular_sample()) {
            let i = x.dim() - 1;
            let deg = x.degrees(i);
            let d = deg[0] as i64;
            prop_assume!(deg.iter().all(|&v| v as i64 == d));
            let l = up_laplacian_exact(&x, i).unwrap();
            let a = adjacency_exact(&x).unwrap();
            let id = DMatrix::<i64>::identity(l.nrows(), l.ncols());
            prop_assert_eq!(&l, &(id * d - a));
            let delta = to_f64(&l) / d as f64;
            let s = normalized_up_matrix(&x, false).unwrap().to_dense();
            prop_assert!((delta - s).amax() < 1e-14);
        }

        #[test]
        fn laplacians_are_psd(mask in proptest::collection::vec(any::<bool>(), 20)) {
            let tris: Vec<Vec<usize>> = (0..6usize)
                .flat_map(|a| ((a + 1)..6).flat_map(move |b| ((b + 1)..6).map(move |c| vec![a, b, c])))
                .zip(mask)
                .filter(|(_, m)| *m)
                .map(|(t, _)| t)
                .collect();
            let x = SimplicialComplex::build(6, 2, tris, 1).unwrap();
            for w in [WeightFunction::Unit] {
                let up = symmetric_spectrum(&up_laplacian(&x, 1, &w).unwrap()).unwrap();
                let down = symmetric_spectrum(&down_laplacian(&x, 1, &w).unwrap()).unwrap();
                let a = adjacency_exact(&x).unwrap();
                prop_assert_eq!(&a, &a.transpose());
                for v in up.iter().chain(&down) {
                    prop_assert!(*v >= -1e-9 * 12.0);
                }
            }
            let r = normalized_up_spectrum(&x, true).unwrap();
            prop_assert!(r.eigenvalues.iter().all(|v| *v > -1e-9 && *v < 3.0 + 1e-9));
        }
    }
}
